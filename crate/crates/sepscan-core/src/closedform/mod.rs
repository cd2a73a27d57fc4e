//! Exact evaluation of the closed-form X-state separability surfaces and
//! curves, polynomial root isolation for the crossover equations, and
//! numerical quadrature of the analytic surfaces.
//!
//! Coefficients are exact rationals; evaluation is double precision for
//! quadrature and plotting, and rational for sign tests and special points,
//! so quoted roots are checkable to all printed digits.

mod poly;
mod quad;

use std::sync::LazyLock;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use poly::{
    big, curve_extremum, from_f64, intersect_curves, poly_root, ratio, sign_at, ClosedFormError,
    CurvePiece, ExtremumMode, PiecewiseCurve, PiecewiseSurface, Poly, Poly2, RationalFn,
    RationalFn2, RootBracket,
};
pub use quad::{integrate_1d, integrate_two_triangles};

/// Default absolute tolerance for surface quadrature.
pub const QUAD_TOL: f64 = 1e-9;

// ----------------------------------------------------------------------
// The X-state model: surfaces and section curves
// ----------------------------------------------------------------------

/// The flat-measure X-state model: total/separable volume surfaces, their
/// ratio, and the printed one-dimensional sections.
pub struct XModel {
    /// Total Hilbert-Schmidt volume surface (carries a factor pi^2).
    pub total: PiecewiseSurface,
    /// Separable volume surface (carries a factor pi^2).
    pub sep: PiecewiseSurface,
    /// Separability probability surface (the ratio; pi^2-free).
    pub prob: PiecewiseSurface,
    /// Diagonal section p(r, r).
    pub diag: PiecewiseCurve,
    /// Antidiagonal section p(r, 1-r), pieces split at 2r = 1.
    pub antidiag: PiecewiseCurve,
    /// Half section p(r, 1/2), pieces split at r = 1/2.
    pub half: PiecewiseCurve,
    /// K=5 induced-measure half section, pieces split at r = 1/2.
    pub k5_half: PiecewiseCurve,
}

fn x_model_build() -> XModel {
    // (r_A - 1)^3
    let cube = poly::poly_pow(&poly::linear(-1, 1), 3);
    let cube2 = Poly2::from_x(&cube);

    // Total volume, r_A > r_B piece: -(pi^2/960)(r_A-1)^3 (r_A^2+3r_A+1-5r_B^2).
    let quad_factor = Poly2::from_x(&Poly::from_integers(&[1, 3, 1]))
        .add(&Poly2::from_y(&Poly::from_integers(&[0, 0, -5])));
    let total_upper_num = cube2.mul(&quad_factor).scale(&ratio(-1, 960));
    let total_upper = RationalFn2::new(total_upper_num, Poly2::from_x(&Poly::from_integers(&[1])));
    let total = PiecewiseSurface::new(total_upper.clone(), total_upper.swap_vars(), 1, true)
        .expect("total surface is symmetric and continuous");

    // Separable volume, r_A > r_B piece:
    // -(pi^2/7680)(r_A-1)^3 (5(r_A+3)r_B^4 - 10(3r_A+1)r_B^2 + 8r_A^2+9r_A+3).
    let sep_inner = Poly2::from_x(&Poly::from_integers(&[3, 1]))
        .mul(&Poly2::from_y(&Poly::from_integers(&[0, 0, 0, 0, 5])))
        .add(
            &Poly2::from_x(&Poly::from_integers(&[1, 3]))
                .mul(&Poly2::from_y(&Poly::from_integers(&[0, 0, -10]))),
        )
        .add(&Poly2::from_x(&Poly::from_integers(&[3, 9, 8])));
    let sep_upper_num = cube2.mul(&sep_inner).scale(&ratio(-1, 7680));
    let sep_upper = RationalFn2::new(sep_upper_num, Poly2::from_x(&Poly::from_integers(&[1])));
    let sep = PiecewiseSurface::new(sep_upper.clone(), sep_upper.swap_vars(), 1, true)
        .expect("separable surface is symmetric and continuous");

    // Probability surface: the printed ratio form (the (r-1)^3 factors and
    // pi^2 cancel). r_A > r_B piece: sep_inner / (8(r_A^2+3r_A+1-5r_B^2)).
    let prob_upper = RationalFn2::new(sep_inner, quad_factor.scale(&big(8)));
    let prob = PiecewiseSurface::new(prob_upper.clone(), prob_upper.swap_vars(), 0, true)
        .expect("probability surface is symmetric and continuous");

    // Diagonal p(r,r) = -(r-1)(5r(r(r+5)+3)+3)/(32r+8)
    //                 = (-5r^4 - 20r^3 + 10r^2 + 12r + 3)/(32r + 8).
    let diag = PiecewiseCurve::single(
        0.0,
        1.0,
        RationalFn::from_integers(&[3, 12, 10, -20, -5], &[8, 32]),
    );

    // Antidiagonal p(r, 1-r), two pieces split at 2r = 1.
    let antidiag = PiecewiseCurve::new(vec![
        CurvePiece {
            lo: 0.0,
            hi: 0.5,
            f: RationalFn::from_integers(&[-20, 25, 32, -30, -20, 5], &[-40, 40, 32]),
        },
        CurvePiece {
            lo: 0.5,
            hi: 1.0,
            f: RationalFn::from_integers(&[-8, 56, -128, 60, 5, -5], &[32, -104, 32]),
        },
    ])
    .expect("antidiagonal pieces join at 139/384");

    // Half section p(r, 1/2).
    let half = PiecewiseCurve::new(vec![
        CurvePiece {
            lo: 0.0,
            hi: 0.5,
            f: RationalFn::from_integers(&[19, 0, -50, 0, 35], &[44, 0, -80]),
        },
        CurvePiece {
            lo: 0.5,
            hi: 1.0,
            f: RationalFn::from_integers(&[23, 29, 128], &[-32, 384, 128]),
        },
    ])
    .expect("half-section pieces join at 139/384");

    // K=5 half section.
    let k5_half = PiecewiseCurve::new(vec![
        CurvePiece {
            lo: 0.0,
            hi: 0.5,
            f: RationalFn::from_integers(
                &[70, 0, -297, 0, 441, 0, -231],
                &[103, 0, -360, 0, 336],
            ),
        },
        CurvePiece {
            lo: 0.5,
            hi: 1.0,
            f: RationalFn::from_integers(
                &[35, 679, -384, 2560, 512],
                &[416, -1280, 3840, 2560, 512],
            ),
        },
    ])
    .expect("K=5 half-section pieces join at 1261/2176");

    XModel {
        total,
        sep,
        prob,
        diag,
        antidiag,
        half,
        k5_half,
    }
}

static X_MODEL: LazyLock<XModel> = LazyLock::new(x_model_build);

pub fn x_model() -> &'static XModel {
    &X_MODEL
}

/// Total X-state volume surface (includes the pi^2 factor).
pub fn x_total(r_a: f64, r_b: f64) -> f64 {
    x_model().total.eval_f64(r_a, r_b)
}

/// Separable X-state volume surface (includes the pi^2 factor).
pub fn x_sep(r_a: f64, r_b: f64) -> f64 {
    x_model().sep.eval_f64(r_a, r_b)
}

/// Bivariate separability probability. On the diagonal (where the printed
/// ratio degenerates to 0/0 at the corner (1,1)) the diagonal curve supplies
/// the shared limit.
pub fn x_prob(r_a: f64, r_b: f64) -> f64 {
    if r_a == r_b {
        x_diag(r_a)
    } else {
        x_model().prob.eval_f64(r_a, r_b)
    }
}

/// Exact rational value of the probability surface.
pub fn x_prob_exact(r_a: &BigRational, r_b: &BigRational) -> Option<BigRational> {
    if r_a == r_b {
        x_model().diag.eval_exact(r_a)
    } else {
        x_model().prob.eval_exact_rational_part(r_a, r_b)
    }
}

pub fn x_diag(r_a: f64) -> f64 {
    x_model().diag.eval_f64(r_a)
}

pub fn x_antidiag(r_a: f64) -> f64 {
    x_model().antidiag.eval_f64(r_a)
}

pub fn x_half(r_a: f64) -> f64 {
    x_model().half.eval_f64(r_a)
}

pub fn xk5_half(r_a: f64) -> f64 {
    x_model().k5_half.eval_f64(r_a)
}

// ----------------------------------------------------------------------
// Printed crossover / extremum polynomials
// ----------------------------------------------------------------------

/// Quintic whose root on (0.3, 0.5) is the flat-measure X-state crossover:
/// `4r^5 + 5r^4 - 8r^3 - 14r^2 + 4r + 1`.
pub fn x_crossover_quintic() -> Poly {
    Poly::from_integers(&[1, 4, -14, -8, 5, 4])
}

/// Eighth-degree polynomial for the K=5 X-state crossover:
/// `112r^8 + 252r^7 - 203r^6 - 938r^5 - 441r^4 + 728r^3 + 27r^2 - 42r - 7`.
pub fn xk5_crossover_octic() -> Poly {
    Poly::from_integers(&[-7, -42, 27, 728, -441, -938, -203, 252, 112])
}

/// Quartic for the K=3 two-qubit crossover:
/// `5100r^4 + 6885r^3 - 26711r^2 - 26340r + 18105`.
pub fn k3_crossover_quartic() -> Poly {
    Poly::from_integers(&[18105, -26340, -26711, 6885, 5100])
}

/// Cubic locating the maximum of the diagonal curve: `3r^3 + 9r^2 + r - 1`.
pub fn x_diag_argmax_cubic() -> Poly {
    Poly::from_integers(&[-1, 1, 9, 3])
}

/// Cubic whose positive root is the value of that maximum:
/// `54r^3 + 108r^2 - 28r - 9`.
pub fn x_diag_max_value_cubic() -> Poly {
    Poly::from_integers(&[-9, -28, 108, 54])
}

/// Quintic for the intersection of the half section with the diagonal:
/// `10r^5 + 17r^4 - 24r^3 - 18r^2 + 6r + 1`.
pub fn half_diag_intersection_quintic() -> Poly {
    Poly::from_integers(&[1, 6, -18, -24, 17, 10])
}

/// Sextic for the intersection of the half section with the antidiagonal:
/// `10r^6 - 7r^5 - 34r^4 - 6r^3 + 30r^2 + 5r - 6`.
pub fn half_antidiag_intersection_sextic() -> Poly {
    Poly::from_integers(&[-6, 5, 30, -6, -34, -7, 10])
}

// ----------------------------------------------------------------------
// Quadrature-based quantities
// ----------------------------------------------------------------------

/// Marginal of the total surface over `r_B` at fixed `r_A`, by adaptive
/// quadrature over the two smooth pieces.
pub fn x_total_marginal(r_a: f64, tol: f64) -> Result<f64, ClosedFormError> {
    let m = x_model();
    let upper = integrate_1d(&|r_b| m.total.upper.eval_f64(r_a, r_b), 0.0, r_a, tol / 2.0)?;
    let lower = integrate_1d(&|r_b| m.total.lower.eval_f64(r_a, r_b), r_a, 1.0, tol / 2.0)?;
    Ok((upper + lower) * m.total.scale_f64())
}

/// The univariate volume formula the marginal must reproduce:
/// `pi^2 (1 - r^2)^3 / 2304`.
pub fn x_univariate_volume(r: f64) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    pi2 * (1.0 - r * r).powi(3) / 2304.0
}

/// Integral of a piecewise surface over the unit square.
pub fn integrate_surface(s: &PiecewiseSurface, tol: f64) -> Result<f64, ClosedFormError> {
    let v = integrate_two_triangles(
        &|x, y| s.upper.eval_f64(x, y),
        &|x, y| s.lower.eval_f64(x, y),
        tol,
    )?;
    Ok(v * s.scale_f64())
}

/// Integral of the probability surface over the unit square.
pub fn integrate_x_prob(tol: f64) -> Result<f64, ClosedFormError> {
    // The ratio form degenerates only at the corner (1,1) where the
    // integrand stays bounded; quadrature nodes are interior so the pieces
    // evaluate cleanly.
    integrate_surface(&x_model().prob, tol)
}

/// Pearson correlation of `(r_A, r_B)` under an (unnormalized) density given
/// by two smooth triangle pieces.
pub fn correlation_of_density<U, L>(upper: &U, lower: &L, tol: f64) -> Result<f64, ClosedFormError>
where
    U: Fn(f64, f64) -> f64,
    L: Fn(f64, f64) -> f64,
{
    let moment = |fx: fn(f64, f64) -> f64| -> Result<f64, ClosedFormError> {
        integrate_two_triangles(
            &|x, y| fx(x, y) * upper(x, y),
            &|x, y| fx(x, y) * lower(x, y),
            tol,
        )
    };
    let z = moment(|_, _| 1.0)?;
    let ex = moment(|x, _| x)? / z;
    let ey = moment(|_, y| y)? / z;
    let exx = moment(|x, _| x * x)? / z;
    let eyy = moment(|_, y| y * y)? / z;
    let exy = moment(|x, y| x * y)? / z;
    Ok((exy - ex * ey) / ((exx - ex * ex).sqrt() * (eyy - ey * ey).sqrt()))
}

/// The two correlation statistics of the radii under an X-state volume
/// density.
///
/// `pearson` is the ordinary Pearson correlation of `(r_A, r_B)` under the
/// normalized density; its moments are exact rationals (the volume surfaces
/// are piecewise polynomial), giving 495/5359 for all states.
///
/// `reference` reproduces the quoted closed forms
/// `1 - 11206656/(37748736 - 10080 pi^2 + pi^4)` (all) and
/// `1 - 74649600/(235929600 - 25200 pi^2 + pi^4)` (separable). Those cannot
/// be the Pearson value - every moment of these piecewise-polynomial
/// densities is rational, while the quoted forms carry pi^2 - and they are
/// reproduced exactly by evaluating E[(X-m)(Y-m)]/E[(X-m)^2] about the
/// reference point m = integral of r_A against the *unnormalized* volume
/// surface (whose total mass is pi^2/5040, not 1). Both statistics are kept:
/// `reference` checks this crate against the quoted expressions,
/// `pearson` is the statistic the Monte Carlo scans estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XCorrelation {
    /// Pearson correlation under the normalized density (exact rational).
    pub pearson: f64,
    /// Off-center second-moment ratio reproducing the quoted closed form.
    pub reference: f64,
    /// The quoted closed form itself.
    pub closed_form: f64,
}

/// Exact moments of the radii under the total or separable volume surface,
/// plus both correlation statistics.
pub fn x_correlation(separable_only: bool) -> XCorrelation {
    let m = x_model();
    let surface = if separable_only { &m.sep } else { &m.total };
    // Polynomial numerator over a unit denominator; moments over the square
    // are the upper-triangle moments plus their swaps (the surface is
    // symmetric).
    let num = &surface.upper.num;
    let sq_moment = |ix: u32, iy: u32| -> BigRational {
        num.moment_upper_triangle(ix, iy) + num.moment_upper_triangle(iy, ix)
    };
    let z = sq_moment(0, 0);
    let ex = sq_moment(1, 0) / &z;
    let exx = sq_moment(2, 0) / &z;
    let exy = sq_moment(1, 1) / &z;
    let pearson = (&exy - &ex * &ex) / (&exx - &ex * &ex);

    // Reference point: the unnormalized first moment, including the pi^2
    // prefactor carried by the surface.
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mu = sq_moment(1, 0).to_f64().unwrap() * surface.scale_f64();
    let (exf, exxf, exyf) = (
        ex.to_f64().unwrap(),
        exx.to_f64().unwrap(),
        exy.to_f64().unwrap(),
    );
    let reference = (exyf - 2.0 * exf * mu + mu * mu) / (exxf - 2.0 * exf * mu + mu * mu);

    let pi4 = pi2 * pi2;
    let closed_form = if separable_only {
        1.0 - 74_649_600.0 / (235_929_600.0 - 25_200.0 * pi2 + pi4)
    } else {
        1.0 - 11_206_656.0 / (37_748_736.0 - 10_080.0 * pi2 + pi4)
    };
    XCorrelation {
        pearson: pearson.to_f64().unwrap(),
        reference,
        closed_form,
    }
}

// ----------------------------------------------------------------------
// Named constants (the `exact` CLI surface)
// ----------------------------------------------------------------------

/// One named closed-form quantity with its printed reference value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactConstant {
    pub name: String,
    pub value: f64,
    pub paper_value: String,
    pub abs_err: f64,
}

fn parse_reference(s: &str) -> f64 {
    if let Some((n, d)) = s.split_once('/') {
        n.trim().parse::<f64>().unwrap() / d.trim().parse::<f64>().unwrap()
    } else {
        s.trim().parse::<f64>().unwrap()
    }
}

fn constant(name: &str, value: f64, reference: &str) -> ExactConstant {
    ExactConstant {
        name: name.to_string(),
        value,
        paper_value: reference.to_string(),
        abs_err: (value - parse_reference(reference)).abs(),
    }
}

/// Evaluate every named closed-form quantity. Root isolation and extremum
/// searches run at their default tolerances; quadrature at `QUAD_TOL`.
pub fn exact_constants() -> Result<Vec<ExactConstant>, ClosedFormError> {
    let m = x_model();
    let mut out = Vec::new();

    let half = ratio(1, 2);
    let zero = big(0);
    let one = big(1);
    out.push(constant(
        "x_prob_half_half",
        x_prob_exact(&half, &half).unwrap().to_f64().unwrap(),
        "139/384",
    ));
    out.push(constant(
        "x_prob_zero_zero",
        x_prob_exact(&zero, &zero).unwrap().to_f64().unwrap(),
        "3/8",
    ));
    out.push(constant(
        "x_prob_one_one",
        x_prob_exact(&one, &one).unwrap().to_f64().unwrap(),
        "0",
    ));
    out.push(constant(
        "x_prob_zero_one",
        x_prob_exact(&zero, &one).unwrap().to_f64().unwrap(),
        "1/2",
    ));
    out.push(constant(
        "xk5_half_at_half",
        m.k5_half.eval_exact(&half).unwrap().to_f64().unwrap(),
        "1261/2176",
    ));

    out.push(constant(
        "x_crossover_hs",
        poly_root(&x_crossover_quintic(), 0.3, 0.5, 1e-12)?.midpoint_f64(),
        "0.40182804",
    ));
    out.push(constant(
        "x_crossover_k5",
        poly_root(&xk5_crossover_octic(), 0.3, 0.4, 1e-12)?.midpoint_f64(),
        "0.3385355079",
    ));
    out.push(constant(
        "k3_crossover",
        poly_root(&k3_crossover_quartic(), 0.4, 0.5, 1e-12)?.midpoint_f64(),
        "0.487543066126",
    ));

    let (argmax, max_val) = curve_extremum(&m.diag, 0.0, 1.0, ExtremumMode::Max)?;
    out.push(constant("x_diag_argmax", argmax, "0.2722700792"));
    out.push(constant("x_diag_max", max_val, "0.393558399"));
    let (argmin, min_val) = curve_extremum(&m.antidiag, 0.0, 0.5, ExtremumMode::Min)?;
    out.push(constant("x_antidiag_argmin", argmin, "0.5"));
    out.push(constant("x_antidiag_min", min_val, "139/384"));

    let crossover = poly_root(&x_crossover_quintic(), 0.3, 0.5, 1e-12)?.midpoint_f64();
    let gap = m.diag.difference(&m.antidiag);
    let (gap_arg, gap_val) = curve_extremum(&gap, crossover, 0.5, ExtremumMode::Max)?;
    out.push(constant("x_gap_argmax", gap_arg, "0.4564893379"));
    out.push(constant("x_gap_max", gap_val, "0.0056796160"));

    let roots = intersect_curves(&m.half, &m.diag, 1e-6, 0.4999);
    out.push(constant(
        "x_half_diag_intersection",
        roots.last().copied().unwrap_or(f64::NAN),
        "0.364314",
    ));
    let roots = intersect_curves(&m.half, &m.antidiag, 1e-6, 0.4999);
    out.push(constant(
        "x_half_antidiag_intersection",
        roots.last().copied().unwrap_or(f64::NAN),
        "0.428908",
    ));

    out.push(constant(
        "x_prob_integral",
        integrate_x_prob(QUAD_TOL * 10.0)?,
        "0.381678",
    ));
    let corr_all = x_correlation(false);
    let corr_sep = x_correlation(true);
    out.push(constant("x_corr_all", corr_all.reference, "0.702341"));
    out.push(constant("x_corr_separable", corr_sep.reference, "0.68326"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_constructs_with_continuity_checks() {
        let m = x_model();
        assert_eq!(m.total.pi2_power, 1);
        assert_eq!(m.prob.pi2_power, 0);
    }

    #[test]
    fn special_point_values_are_exact() {
        let half = ratio(1, 2);
        let zero = big(0);
        let one = big(1);
        assert_eq!(x_prob_exact(&half, &half).unwrap(), ratio(139, 384));
        assert_eq!(x_prob_exact(&zero, &zero).unwrap(), ratio(3, 8));
        assert_eq!(x_prob_exact(&one, &one).unwrap(), big(0));
        assert_eq!(x_prob_exact(&zero, &one).unwrap(), ratio(1, 2));
        assert_eq!(x_prob_exact(&one, &zero).unwrap(), ratio(1, 2));
        // Sections agree at the symmetry point.
        let m = x_model();
        assert_eq!(m.antidiag.eval_exact(&half).unwrap(), ratio(139, 384));
        assert_eq!(m.half.eval_exact(&half).unwrap(), ratio(139, 384));
        assert_eq!(m.k5_half.eval_exact(&half).unwrap(), ratio(1261, 2176));
        assert_eq!(m.diag.eval_exact(&big(1)).unwrap(), big(0));
    }

    #[test]
    fn printed_lower_piece_spot_check() {
        // Lower piece (r_A < r_B) hand-evaluated from the printed formula at
        // (0.3, 0.7): num = 10.57985, den = 25.12.
        let got = x_prob(0.3, 0.7);
        assert!((got - 10.579_85 / 25.12).abs() < 1e-12, "{got}");
    }

    #[test]
    fn surface_symmetry_on_random_pairs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let (x, y) = (next(), next());
            for (name, f) in [
                ("total", x_total as fn(f64, f64) -> f64),
                ("sep", x_sep),
                ("prob", x_prob),
            ] {
                let (a, b) = (f(x, y), f(y, x));
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "{name}({x},{y}) asymmetric: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn sep_below_total_on_grid() {
        for i in 0..200 {
            for j in 0..200 {
                let (x, y) = ((i as f64 + 0.5) / 200.0, (j as f64 + 0.5) / 200.0);
                let (t, s) = (x_total(x, y), x_sep(x, y));
                assert!(s <= t + 1e-15, "sep > total at ({x}, {y}): {s} vs {t}");
            }
        }
    }

    #[test]
    fn prob_in_unit_interval_on_grid() {
        for i in 0..500 {
            for j in 0..500 {
                let (x, y) = ((i as f64 + 0.5) / 500.0, (j as f64 + 0.5) / 500.0);
                let p = x_prob(x, y);
                assert!((0.0..=1.0).contains(&p), "p({x},{y}) = {p}");
            }
        }
    }

    #[test]
    fn prob_equals_ratio_of_volumes() {
        for i in 0..50 {
            for j in 0..50 {
                let (x, y) = ((i as f64 + 0.5) / 50.0 * 0.98, (j as f64 + 0.5) / 50.0 * 0.98);
                let ratio = x_sep(x, y) / x_total(x, y);
                let p = x_prob(x, y);
                assert!((ratio - p).abs() < 5e-12, "({x},{y}): {ratio} vs {p}");
            }
        }
    }

    #[test]
    fn half_section_is_prob_at_half() {
        for k in 0..=100 {
            let r = k as f64 / 100.0;
            let a = x_half(r);
            let b = x_prob(r, 0.5);
            assert!((a - b).abs() < 1e-12, "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn diag_and_antidiag_match_surface_sections() {
        for k in 1..100 {
            let r = k as f64 / 100.0;
            assert!((x_diag(r) - x_prob(r, r)).abs() < 1e-12);
            let anti_direct = x_prob(r, 1.0 - r);
            assert!(
                (x_antidiag(r) - anti_direct).abs() < 1e-12,
                "r={r}: {} vs {anti_direct}",
                x_antidiag(r)
            );
        }
    }

    #[test]
    fn crossover_roots_match_printed_digits() {
        let r = poly_root(&x_crossover_quintic(), 0.3, 0.5, 1e-12).unwrap();
        assert!((r.midpoint_f64() - 0.40182804).abs() < 1e-7);
        // Rigorous enclosure: exact signs straddle zero.
        let p = x_crossover_quintic();
        assert_eq!(sign_at(&p, &r.lo) * sign_at(&p, &r.hi), -1);

        let r = poly_root(&xk5_crossover_octic(), 0.3, 0.4, 1e-12).unwrap();
        assert!((r.midpoint_f64() - 0.3385355079).abs() < 1e-8);

        let r = poly_root(&k3_crossover_quartic(), 0.4, 0.5, 1e-12).unwrap();
        assert!((r.midpoint_f64() - 0.487543066126).abs() < 1e-9);
    }

    #[test]
    fn diag_extremum_matches_printed_cubics() {
        let m = x_model();
        let (argmax, value) = curve_extremum(&m.diag, 0.0, 1.0, ExtremumMode::Max).unwrap();
        assert!((argmax - 0.2722700792).abs() < 1e-8, "argmax {argmax}");
        assert!((value - 0.393558399).abs() < 1e-8, "value {value}");
        // Same numbers as roots of the printed cubics.
        let arg_root = poly_root(&x_diag_argmax_cubic(), 0.2, 0.3, 1e-12)
            .unwrap()
            .midpoint_f64();
        let val_root = poly_root(&x_diag_max_value_cubic(), 0.3, 0.5, 1e-12)
            .unwrap()
            .midpoint_f64();
        assert!((argmax - arg_root).abs() < 1e-9);
        assert!((value - val_root).abs() < 1e-9);
    }

    #[test]
    fn antidiag_minimum_at_symmetry_point() {
        let m = x_model();
        // Each piece attains its minimum over the crossover range at 1/2.
        let (arg, val) = curve_extremum(&m.antidiag, 0.25, 0.5, ExtremumMode::Min).unwrap();
        assert!((arg - 0.5).abs() < 1e-9);
        assert!((val - 139.0 / 384.0).abs() < 1e-12);
    }

    #[test]
    fn crossover_gap_extremum() {
        let crossover = 0.40182804;
        let m = x_model();
        let gap = m.diag.difference(&m.antidiag);
        let (arg, val) = curve_extremum(&gap, crossover, 0.5, ExtremumMode::Max).unwrap();
        assert!((arg - 0.4564893379).abs() < 1e-8, "arg {arg}");
        assert!((val - 0.0056796160).abs() < 1e-8, "val {val}");
    }

    #[test]
    fn crossover_consistency_of_root_and_intersection() {
        // The quintic root is the intersection of the diagonal and
        // antidiagonal curves below 1/2.
        let m = x_model();
        let roots = intersect_curves(&m.diag, &m.antidiag, 1e-6, 0.4999);
        assert_eq!(roots.len(), 1, "roots: {roots:?}");
        let quintic = poly_root(&x_crossover_quintic(), 0.3, 0.5, 1e-12)
            .unwrap()
            .midpoint_f64();
        assert!((roots[0] - quintic).abs() < 1e-9);
    }

    #[test]
    fn half_section_intersections() {
        let m = x_model();
        let r1 = intersect_curves(&m.half, &m.diag, 1e-6, 0.4999);
        assert!(
            r1.iter().any(|r| (r - 0.364314).abs() < 1e-5),
            "half/diag roots {r1:?}"
        );
        // Consistency with the printed quintic.
        let q = poly_root(&half_diag_intersection_quintic(), 0.3, 0.4, 1e-12)
            .unwrap()
            .midpoint_f64();
        assert!(r1.iter().any(|r| (r - q).abs() < 1e-9));

        let r2 = intersect_curves(&m.half, &m.antidiag, 1e-6, 0.4999);
        assert!(
            r2.iter().any(|r| (r - 0.428908).abs() < 1e-5),
            "half/antidiag roots {r2:?}"
        );
        let s = poly_root(&half_antidiag_intersection_sextic(), 0.4, 0.45, 1e-12)
            .unwrap()
            .midpoint_f64();
        assert!(r2.iter().any(|r| (r - s).abs() < 1e-9));

        // All three sections pass through (1/2, 139/384).
        for curve in [&m.half, &m.diag, &m.antidiag] {
            let v = curve.eval_exact(&ratio(1, 2)).unwrap();
            assert_eq!(v, ratio(139, 384));
        }
    }

    #[test]
    fn marginal_matches_univariate_volume() {
        for k in 1..=9 {
            let r = k as f64 / 10.0;
            let marginal = x_total_marginal(r, 1e-10).unwrap();
            let reference = x_univariate_volume(r);
            assert!(
                (marginal - reference).abs() < 1e-9,
                "r={r}: {marginal} vs {reference}"
            );
        }
    }

    #[test]
    fn total_volume_integral_matches_univariate_integral() {
        // Integrating the univariate marginal pi^2 (1-r^2)^3/2304 over [0,1]
        // gives pi^2 * (16/35) / 2304.
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let expected = pi2 * (16.0 / 35.0) / 2304.0;
        let v = integrate_surface(&x_model().total, 1e-10).unwrap();
        assert!((v - expected).abs() < 1e-9, "{v} vs {expected}");
    }

    #[test]
    fn probability_integral() {
        let v = integrate_x_prob(1e-8).unwrap();
        assert!((v - 0.381678).abs() < 1e-4, "{v}");
    }

    #[test]
    fn unit_density_integrates_to_one() {
        let v = integrate_two_triangles(&|_, _| 1.0, &|_, _| 1.0, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlations_match_closed_forms() {
        // The off-center reference statistic reproduces the quoted closed
        // forms to print precision.
        let all = x_correlation(false);
        assert!(
            (all.reference - all.closed_form).abs() < 1e-12,
            "{} vs {}",
            all.reference,
            all.closed_form
        );
        assert!((all.reference - 0.702341).abs() < 1e-5);
        let sep = x_correlation(true);
        assert!(
            (sep.reference - sep.closed_form).abs() < 1e-12,
            "{} vs {}",
            sep.reference,
            sep.closed_form
        );
        assert!((sep.reference - 0.68326).abs() < 1e-5);
    }

    #[test]
    fn pearson_correlation_exact_and_by_quadrature() {
        // Exact rational moments give 495/5359 for all states; the adaptive
        // quadrature route must agree (dual-route check). The Monte Carlo
        // scans estimate this same statistic.
        let all = x_correlation(false);
        assert!((all.pearson - 495.0 / 5359.0).abs() < 1e-14, "{}", all.pearson);
        let m = x_model();
        let quad = correlation_of_density(
            &|x, y| m.total.upper.eval_f64(x, y),
            &|x, y| m.total.lower.eval_f64(x, y),
            1e-10,
        )
        .unwrap();
        assert!((quad - all.pearson).abs() < 1e-7, "{quad} vs {}", all.pearson);
        let sep = x_correlation(true);
        let quad_sep = correlation_of_density(
            &|x, y| m.sep.upper.eval_f64(x, y),
            &|x, y| m.sep.lower.eval_f64(x, y),
            1e-10,
        )
        .unwrap();
        assert!((quad_sep - sep.pearson).abs() < 1e-7, "{quad_sep} vs {}", sep.pearson);
    }

    #[test]
    fn product_density_has_zero_correlation() {
        let g = |x: f64| 1.0 + 0.5 * x * x;
        let corr = correlation_of_density(&|x, y| g(x) * g(y), &|x, y| g(x) * g(y), 1e-10).unwrap();
        assert!(corr.abs() < 1e-9, "{corr}");
    }

    #[test]
    fn exact_constants_all_close_to_printed_values() {
        let constants = exact_constants().unwrap();
        assert!(constants.len() >= 15);
        for c in &constants {
            // Printed references have >= 5 significant digits.
            assert!(
                c.abs_err < 2e-5,
                "{}: value {} vs printed {} (err {})",
                c.name,
                c.value,
                c.paper_value,
                c.abs_err
            );
        }
    }
}
