//! The candidate (fitted, unproven) separability formulas for the full
//! fifteen-dimensional K=3/4/5 ensembles, and chi-squared comparison of any
//! formula against Monte Carlo curve estimates.
//!
//! Everything except `k4_antidiag` has exact rational coefficients. The K=4
//! antidiagonal is an empirical decimal-coefficient fit and is flagged as
//! such in reports; its printed decimals are stored verbatim (as exact
//! rationals of the decimal strings).

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::{
    big, ratio, CurvePiece, PiecewiseCurve, Poly, Poly2, RationalFn, RationalFn2,
};
use crate::histogram::CurveEstimate;

#[derive(Debug, Error)]
pub enum FitsError {
    #[error("arguments ({0}, {1}) outside the printed domain")]
    DomainError(f64, f64),
    #[error("curve data has no usable bins")]
    NoData,
}

fn poly_pow(p: &Poly, k: u32) -> Poly {
    let mut acc = Poly::from_integers(&[1]);
    for _ in 0..k {
        acc = acc.mul(p);
    }
    acc
}

/// Pieces of the K=3 surfaces, built once.
struct K3Model {
    /// Total volume on 0 < r_B < r_A < 1 (num, den = r_A).
    total_upper: RationalFn2,
    total_lower: RationalFn2,
    /// Diagonal total volume -32 (r-1)^5.
    total_diag: Poly,
    /// Separable volume on 0 < r_B < r_A < 1.
    sep_upper: RationalFn2,
    sep_lower: RationalFn2,
    /// Diagonal separable volume (r-1)^6 (r^2 + 6r + 1).
    sep_diag: Poly,
}

fn k3_model_build() -> K3Model {
    let x_minus_1_pow4 = Poly2::from_x(&poly_pow(&Poly::from_integers(&[-1, 1]), 4));
    let den = Poly2::from_x(&Poly::from_integers(&[0, 1]));

    // total: 8 (r_A-1)^4 (r_A^2 + 4 r_A - 5 r_B^2) / r_A
    let total_inner = Poly2::from_x(&Poly::from_integers(&[0, 4, 1]))
        .add(&Poly2::from_y(&Poly::from_integers(&[0, 0, -5])));
    let total_num = x_minus_1_pow4.mul(&total_inner).scale(&big(8));
    let total_upper = RationalFn2::new(total_num, den.clone());
    let total_lower = total_upper.swap_vars();

    // separable: -(r_A-1)^4 (2785 r_A^4 - r_A^3 (6012 r_B + 2351)
    //   + 2 r_A^2 (2424 r_B - 9859) + T r_A + S r_B) / (5100 r_A)
    // with S = -22675 r_B^3 - 852 r_B^2 + 470 r_B + 96
    //      T = -5100 r_B^4 + 5502 r_B^3 + 49355 r_B^2 - 1152 r_B - 5196.
    let s_poly = Poly::from_integers(&[96, 470, -852, -22675]);
    let t_poly = Poly::from_integers(&[-5196, -1152, 49355, 5502, -5100]);
    let inner = Poly2::from_x(&Poly::from_integers(&[0, 0, -19718, -2351, 2785]))
        .add(
            &Poly2::from_x(&Poly::from_integers(&[0, 0, 0, 1]))
                .mul(&Poly2::from_y(&Poly::from_integers(&[0, -6012]))),
        )
        .add(
            &Poly2::from_x(&Poly::from_integers(&[0, 0, 4848]))
                .mul(&Poly2::from_y(&Poly::from_integers(&[0, 1]))),
        )
        .add(&Poly2::from_x(&Poly::from_integers(&[0, 1])).mul(&Poly2::from_y(&t_poly)))
        .add(&Poly2::from_y(&s_poly.mul(&Poly::from_integers(&[0, 1]))));
    let sep_num = x_minus_1_pow4.mul(&inner).scale(&ratio(-1, 5100));
    let sep_upper = RationalFn2::new(sep_num, den);
    let sep_lower = sep_upper.swap_vars();

    K3Model {
        total_upper,
        total_lower,
        total_diag: poly_pow(&Poly::from_integers(&[-1, 1]), 5).scale(&big(-32)),
        sep_upper,
        sep_lower,
        sep_diag: poly_pow(&Poly::from_integers(&[-1, 1]), 6)
            .mul(&Poly::from_integers(&[1, 6, 1])),
    }
}

static K3: LazyLock<K3Model> = LazyLock::new(k3_model_build);

fn check_k3_domain(r_a: f64, r_b: f64) -> Result<(), FitsError> {
    // The printed pieces divide by r_A or r_B.
    if r_a <= 0.0 || r_b <= 0.0 || r_a > 1.0 || r_b > 1.0 {
        return Err(FitsError::DomainError(r_a, r_b));
    }
    Ok(())
}

/// K=3 total volume, normalized so the value at (1/2, 1/2) is 1.
pub fn k3_total(r_a: f64, r_b: f64) -> Result<f64, FitsError> {
    check_k3_domain(r_a, r_b)?;
    let m = &*K3;
    Ok(if r_a == r_b {
        m.total_diag.eval_f64(r_a)
    } else if r_b < r_a {
        m.total_upper.eval_f64(r_a, r_b)
    } else {
        m.total_lower.eval_f64(r_a, r_b)
    })
}

/// K=3 separable volume (same normalization as [`k3_total`]).
pub fn k3_sep(r_a: f64, r_b: f64) -> Result<f64, FitsError> {
    check_k3_domain(r_a, r_b)?;
    let m = &*K3;
    Ok(if r_a == r_b {
        m.sep_diag.eval_f64(r_a)
    } else if r_b < r_a {
        m.sep_upper.eval_f64(r_a, r_b)
    } else {
        m.sep_lower.eval_f64(r_a, r_b)
    })
}

/// K=3 diagonal separability probability `(1 - r)(r^2 + 6r + 1)/32`.
pub fn k3_diag(r_a: f64) -> f64 {
    k3_diag_curve().eval_f64(r_a)
}

/// K=3 antidiagonal separability probability, pieces split at r = 1/2.
pub fn k3_antidiag(r_a: f64) -> f64 {
    k3_antidiag_curve().eval_f64(r_a)
}

static K3_DIAG: LazyLock<PiecewiseCurve> = LazyLock::new(|| {
    // (1/32)(1-r)(r^2+6r+1) = (1 + 5r - 5r^2 - r^3)/32
    PiecewiseCurve::single(0.0, 1.0, RationalFn::from_integers(&[1, 5, -5, -1], &[32]))
});

static K3_ANTIDIAG: LazyLock<PiecewiseCurve> = LazyLock::new(|| {
    PiecewiseCurve::new(vec![
        CurvePiece {
            lo: 0.0,
            hi: 0.5,
            f: RationalFn::from_integers(
                &[-24480, 38325, 49256, -66682, -24480, 5100],
                &[-204000, 244800, 163200],
            ),
        },
        CurvePiece {
            lo: 0.5,
            hi: 1.0,
            f: RationalFn::from_integers(
                &[-22961, 135629, -246670, 113602, 1020, -5100],
                &[204000, -571200, 163200],
            ),
        },
    ])
    .expect("K=3 antidiagonal pieces join at 17/256")
});

pub fn k3_diag_curve() -> &'static PiecewiseCurve {
    &K3_DIAG
}

pub fn k3_antidiag_curve() -> &'static PiecewiseCurve {
    &K3_ANTIDIAG
}

// ----------------------------------------------------------------------
// K = 4
// ----------------------------------------------------------------------

static K4_DIAG: LazyLock<PiecewiseCurve> = LazyLock::new(|| {
    // -35 (r-1)(58r^2 + 17r + 2) / (384 (8r + 1))
    PiecewiseCurve::single(
        0.0,
        1.0,
        RationalFn::from_integers(&[70, 525, 1435, -2030], &[384, 3072]),
    )
});

/// Decimal-coefficient chi-squared fit of the K=4 antidiagonal on [0, 1/2];
/// the upper half is the mirror r -> 1 - r. Empirical, no exactness claims.
static K4_ANTIDIAG: LazyLock<PiecewiseCurve> = LazyLock::new(|| {
    let num = Poly::new(vec![
        ratio(232_483, 100_000),
        ratio(-216_016, 10_000),
        ratio(900_466, 10_000),
        ratio(-20_068, 100),
        ratio(237_198, 1_000),
        ratio(-119_919, 1_000),
        ratio(-660_807, 1_000_000),
    ]);
    let den = Poly::new(vec![
        ratio(464_965, 100_000),
        ratio(-304_436, 10_000),
        ratio(75_933, 1_000),
        ratio(-66_164, 1_000),
        big(-1),
    ]);
    let mirrored_num = num.compose_linear(&big(1), &big(-1));
    let mirrored_den = den.compose_linear(&big(1), &big(-1));
    PiecewiseCurve::new(vec![
        CurvePiece {
            lo: 0.0,
            hi: 0.5,
            f: RationalFn::new(num, den),
        },
        CurvePiece {
            lo: 0.5,
            hi: 1.0,
            f: RationalFn::new(mirrored_num, mirrored_den),
        },
    ])
    .expect("mirror pieces agree at 1/2 by construction")
});

pub fn k4_diag(r_a: f64) -> f64 {
    K4_DIAG.eval_f64(r_a)
}

pub fn k4_antidiag(r_a: f64) -> f64 {
    K4_ANTIDIAG.eval_f64(r_a)
}

pub fn k4_diag_curve() -> &'static PiecewiseCurve {
    &K4_DIAG
}

pub fn k4_antidiag_curve() -> &'static PiecewiseCurve {
    &K4_ANTIDIAG
}

/// Printed K=4 diagonal volume formulas (normalized total = 1 at (1/2,1/2)):
/// total `(256/5)(1-r)^8 (8r+1)` and separable
/// `(28/3)(1-r)^9 (29r^2 + 17r/2 + 1)`.
pub fn k4_diag_volumes() -> (Poly, Poly) {
    let one_minus_r = Poly::from_integers(&[1, -1]);
    let total = poly_pow(&one_minus_r, 8)
        .mul(&Poly::from_integers(&[1, 8]))
        .scale(&ratio(256, 5));
    let sep = poly_pow(&one_minus_r, 9)
        .mul(&Poly::new(vec![big(1), ratio(17, 2), big(29)]))
        .scale(&ratio(28, 3));
    (total, sep)
}

// ----------------------------------------------------------------------
// K = 5
// ----------------------------------------------------------------------

static K5_DIAG: LazyLock<PiecewiseCurve> = LazyLock::new(|| {
    // -1617 (r-1)(216r^3 + 111r^2 + 20r + 2) / (8192 (40r^2 + 11r + 1))
    PiecewiseCurve::single(
        0.0,
        1.0,
        RationalFn::from_integers(
            &[3234, 29106, 147147, 169785, -349272],
            &[8192, 90112, 327680],
        ),
    )
});

pub fn k5_diag(r_a: f64) -> f64 {
    K5_DIAG.eval_f64(r_a)
}

pub fn k5_diag_curve() -> &'static PiecewiseCurve {
    &K5_DIAG
}

/// Printed K=5 diagonal volume formulas: total
/// `(4096/33)(1-r)^11 (40r^2+11r+1)`, separable
/// `49 (1-r)^12 (108r^3 + 111r^2/2 + 10r + 1)`.
pub fn k5_diag_volumes() -> (Poly, Poly) {
    let one_minus_r = Poly::from_integers(&[1, -1]);
    let total = poly_pow(&one_minus_r, 11)
        .mul(&Poly::from_integers(&[1, 11, 40]))
        .scale(&ratio(4096, 33));
    let sep = poly_pow(&one_minus_r, 12)
        .mul(&Poly::new(vec![big(1), big(10), ratio(111, 2), big(108)]))
        .scale(&big(49));
    (total, sep)
}

// ----------------------------------------------------------------------
// Chi-squared goodness of fit
// ----------------------------------------------------------------------

/// Per-bin residual entry of a fit comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResidual {
    pub midpoint: f64,
    pub observed: f64,
    pub expected: f64,
    pub count: u64,
    pub sigma: f64,
}

/// Chi-squared comparison of a formula against a binned curve estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub formula: String,
    pub statistic: f64,
    pub dof: usize,
    pub reduced: f64,
    pub bins_used: usize,
    pub bins_skipped: usize,
    /// True when the formula is an empirical decimal-coefficient fit rather
    /// than an exact expression.
    pub empirical: bool,
    pub residuals: Vec<FitResidual>,
}

/// Chi-squared statistic over defined bins with at least `min_count`
/// samples: sum of `(p_hat - f(mid))^2 / max(p_hat (1-p_hat)/n, 1/(4n^2))`.
pub fn chi_squared<F>(
    formula_name: &str,
    formula: F,
    data: &CurveEstimate,
    min_count: u64,
    empirical: bool,
) -> Result<FitReport, FitsError>
where
    F: Fn(f64) -> f64,
{
    let mut statistic = 0.0;
    let mut residuals = Vec::new();
    let mut skipped = 0usize;
    for k in 0..data.abscissae.len() {
        let (Some(p), n) = (data.probabilities[k], data.counts[k]) else {
            skipped += 1;
            continue;
        };
        if n < min_count.max(1) {
            skipped += 1;
            continue;
        }
        let mid = data.abscissae[k];
        let expected = formula(mid);
        let nf = n as f64;
        let var = (p * (1.0 - p) / nf).max(0.25 / (nf * nf));
        let sigma = var.sqrt();
        statistic += (p - expected) * (p - expected) / var;
        residuals.push(FitResidual {
            midpoint: mid,
            observed: p,
            expected,
            count: n,
            sigma,
        });
    }
    let dof = residuals.len();
    if dof == 0 {
        return Err(FitsError::NoData);
    }
    Ok(FitReport {
        formula: formula_name.to_string(),
        statistic,
        dof,
        reduced: statistic / dof as f64,
        bins_used: dof,
        bins_skipped: skipped,
        empirical,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{intersect_curves, ratio};

    #[test]
    fn k3_normalization_at_center() {
        // Diagonal formula: -32 (1/2 - 1)^5 = 1 exactly.
        assert_eq!(K3.total_diag.eval_exact(&ratio(1, 2)), big(1));
        assert!((k3_total(0.5, 0.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn k3_domain_errors() {
        assert!(matches!(k3_total(0.0, 0.5), Err(FitsError::DomainError(..))));
        assert!(matches!(k3_sep(0.5, 0.0), Err(FitsError::DomainError(..))));
        assert!(k3_total(1.0, 0.5).is_ok());
    }

    #[test]
    fn k3_diag_values() {
        assert!((k3_diag(0.0) - 1.0 / 32.0).abs() < 1e-15);
        assert!((k3_diag(1.0)).abs() < 1e-15);
        // 17/256 at the center.
        assert_eq!(
            k3_diag_curve().eval_exact(&ratio(1, 2)).unwrap(),
            ratio(17, 256)
        );
    }

    #[test]
    fn k3_antidiag_continuity_and_endpoints() {
        // Pieces join exactly at 17/256 = diagonal value at (1/2, 1/2).
        assert_eq!(
            k3_antidiag_curve().eval_exact(&ratio(1, 2)).unwrap(),
            ratio(17, 256)
        );
        // The printed fit evaluates to 3/25 at both endpoints (the true
        // endpoint probability is 1/2; the candidate formula does not
        // reproduce that boundary point).
        assert_eq!(
            k3_antidiag_curve().eval_exact(&big(0)).unwrap(),
            ratio(3, 25)
        );
        assert_eq!(
            k3_antidiag_curve().eval_exact(&big(1)).unwrap(),
            ratio(3, 25)
        );
    }

    #[test]
    fn k3_diag_is_ratio_of_printed_volumes() {
        // Eq-level identity: sep_diag / total_diag = diag probability, i.e.
        // sep_diag * 32 == diag_num * (-32)(r-1)^5 ... checked exactly via
        // polynomial equality of cross products.
        let m = &*K3;
        let diag = &k3_diag_curve().pieces()[0].f;
        let lhs = m.sep_diag.mul(&diag.den);
        let rhs = diag.num.mul(&m.total_diag);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn k3_offdiagonal_sep_limits_to_diagonal_formula() {
        // The off-diagonal numerator restricted to r_B = r_A equals
        // r * (r-1)^6 (r^2 + 6r + 1) exactly (den is r).
        let m = &*K3;
        let restricted = m.sep_upper.num.restrict_diagonal();
        let expected = m.sep_diag.mul(&Poly::from_integers(&[0, 1]));
        assert_eq!(restricted, expected);
        // Same for the total volume.
        let restricted_total = m.total_upper.num.restrict_diagonal();
        let expected_total = m.total_diag.mul(&Poly::from_integers(&[0, 1]));
        assert_eq!(restricted_total, expected_total);
    }

    #[test]
    fn k3_antidiag_matches_volume_ratio_exactly() {
        // The printed antidiagonal is exactly the ratio of the printed
        // bivariate volume formulas along r_B = 1 - r_A; check in rational
        // arithmetic at probe points on both sides of 1/2.
        let m = &*K3;
        for (num, den) in [(1i64, 10i64), (3, 10), (2, 5), (47, 100), (3, 5), (9, 10)] {
            let r = ratio(num, den);
            let one_minus = ratio(den - num, den);
            // r < 1/2 means r_A < r_B = 1 - r_A: the swapped (lower) piece.
            let (vol_sep, vol_tot) = if 2 * num < den {
                (
                    m.sep_lower.eval_exact(&r, &one_minus).unwrap(),
                    m.total_lower.eval_exact(&r, &one_minus).unwrap(),
                )
            } else {
                (
                    m.sep_upper.eval_exact(&r, &one_minus).unwrap(),
                    m.total_upper.eval_exact(&r, &one_minus).unwrap(),
                )
            };
            let ratio_val = vol_sep / vol_tot;
            let printed = k3_antidiag_curve().eval_exact(&r).unwrap();
            assert_eq!(ratio_val, printed, "mismatch at r = {num}/{den}");
        }
    }

    #[test]
    fn k4_diag_values_and_ratio_identity() {
        assert!((k4_diag(0.0) - 35.0 / 192.0).abs() < 1e-15);
        assert!(k4_diag(1.0).abs() < 1e-15);
        // Printed ratio formula == sep volume / total volume, exactly:
        // sep * den == num * total.
        let (total, sep) = k4_diag_volumes();
        let f = &k4_diag_curve().pieces()[0].f;
        assert_eq!(sep.mul(&f.den), f.num.mul(&total));
    }

    #[test]
    fn k5_diag_ratio_identity() {
        let (total, sep) = k5_diag_volumes();
        let f = &k5_diag_curve().pieces()[0].f;
        assert_eq!(sep.mul(&f.den), f.num.mul(&total));
        // And the normalization: total(1/2) = 1.
        assert_eq!(total.eval_exact(&ratio(1, 2)), big(1));
        let (total4, _) = k4_diag_volumes();
        assert_eq!(total4.eval_exact(&ratio(1, 2)), big(1));
    }

    #[test]
    fn k4_predicted_crossover_from_fit_formulas() {
        let roots = intersect_curves(k4_diag_curve(), k4_antidiag_curve(), 0.4, 0.4999);
        assert!(
            roots.iter().any(|r| (r - 0.453893).abs() < 0.01),
            "roots {roots:?}"
        );
    }

    #[test]
    fn k4_antidiag_mirror_continuity() {
        for k in 0..=20 {
            let r = 0.4 + 0.01 * k as f64;
            let mirrored = k4_antidiag(1.0 - r);
            assert!((k4_antidiag(r) - mirrored).abs() < 1e-12);
        }
        // Near 1/2 from both sides.
        assert!((k4_antidiag(0.5 - 1e-9) - k4_antidiag(0.5 + 1e-9)).abs() < 1e-6);
    }

    #[test]
    fn chi_squared_exact_data_scores_zero() {
        let abscissae: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let data = CurveEstimate {
            probabilities: abscissae.iter().map(|&x| Some(k3_diag(x))).collect(),
            counts: vec![100_000; 100],
            abscissae,
        };
        let report = chi_squared("k3-diag", k3_diag, &data, 1, false).unwrap();
        assert!(report.reduced < 1e-18, "reduced {}", report.reduced);
        assert_eq!(report.bins_used, 100);
    }

    #[test]
    fn chi_squared_detects_wrong_curve() {
        // Simulated counts drawn exactly at expectation, compared against a
        // curve displaced by 0.05: reduced chi-squared far above 3.
        let n = 10_000u64;
        let abscissae: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let data = CurveEstimate {
            probabilities: abscissae
                .iter()
                .map(|&x| Some((k3_diag(x) * n as f64).round() / n as f64))
                .collect(),
            counts: vec![n; 100],
            abscissae,
        };
        let good = chi_squared("k3-diag", k3_diag, &data, 1, false).unwrap();
        assert!(good.reduced < 1.5, "reduced {}", good.reduced);
        let bad = chi_squared("shifted", |x| k3_diag(x) + 0.05, &data, 1, false).unwrap();
        assert!(bad.reduced > 3.0, "reduced {}", bad.reduced);
    }

    #[test]
    fn chi_squared_no_data() {
        let data = CurveEstimate {
            abscissae: vec![0.5],
            probabilities: vec![None],
            counts: vec![0],
        };
        assert!(matches!(
            chi_squared("x", |_| 0.0, &data, 1, false),
            Err(FitsError::NoData)
        ));
    }
}
