//! The verification suite: every closed-form and Monte Carlo check, each
//! producing a named pass/fail report with the computed value, reference
//! value, and tolerance pinned here.
//!
//! Monte Carlo scales: `McScale::full()` holds the acceptance sample counts
//! (fractions at 1e7 as specified; crossover runs sized so that three
//! fitted-root standard errors fit inside the +/-0.02 bands); `fast()` is a
//! smoke-test subset.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::closedform::{self, big, curve_extremum, intersect_curves, poly_root, ratio, ExtremumMode};
use crate::fits;
use crate::histogram::{spearman, Axis};
use crate::scenarios::{self, CrossoverOutcome, ScenarioName, ScenarioOutputs, ScenarioSpec};

/// One named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub detail: String,
    pub computed: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &str, detail: &str, computed: f64, target: f64, tolerance: f64) -> VerificationReport {
    VerificationReport {
        name: name.to_string(),
        detail: detail.to_string(),
        computed,
        target,
        tolerance,
        pass: computed.is_finite() && (computed - target).abs() <= tolerance,
    }
}

fn check_bool(name: &str, detail: &str, computed: f64, pass: bool) -> VerificationReport {
    VerificationReport {
        name: name.to_string(),
        detail: detail.to_string(),
        computed,
        target: f64::NAN,
        tolerance: f64::NAN,
        pass,
    }
}

// ----------------------------------------------------------------------
// Exact criteria (1-7)
// ----------------------------------------------------------------------

/// Criterion 1: special values of the probability surface, exact.
pub fn criterion_01_exact_prob_values() -> Vec<VerificationReport> {
    let cases = [
        ("1a-x-prob-half-half", (ratio(1, 2), ratio(1, 2)), ratio(139, 384), "139/384"),
        ("1b-x-prob-zero-zero", (big(0), big(0)), ratio(3, 8), "3/8"),
        ("1c-x-prob-one-one", (big(1), big(1)), big(0), "0"),
        ("1d-x-prob-zero-one", (big(0), big(1)), ratio(1, 2), "1/2"),
    ];
    cases
        .into_iter()
        .map(|(name, (ra, rb), expect, label)| {
            let got = closedform::x_prob_exact(&ra, &rb);
            let pass = got.as_ref() == Some(&expect);
            let computed = got
                .and_then(|v| num_traits::ToPrimitive::to_f64(&v))
                .unwrap_or(f64::NAN);
            check_bool(
                name,
                &format!("exact rational equality against {label}"),
                computed,
                pass,
            )
        })
        .collect()
}

/// Criterion 2: crossover polynomial roots to 1e-7.
pub fn criterion_02_poly_roots() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let cases: [(&str, closedform::Poly, f64, f64, f64); 3] = [
        ("2a-x-hs-quintic-root", closedform::x_crossover_quintic(), 0.3, 0.5, 0.40182804),
        ("2b-x-k5-octic-root", closedform::xk5_crossover_octic(), 0.3, 0.4, 0.3385355079),
        ("2c-k3-quartic-root", closedform::k3_crossover_quartic(), 0.4, 0.5, 0.487543066126),
    ];
    for (name, poly, lo, hi, target) in cases {
        let computed = poly_root(&poly, lo, hi, 1e-12)
            .map(|b| b.midpoint_f64())
            .unwrap_or(f64::NAN);
        out.push(check(name, "exact-sign bisection of the printed polynomial", computed, target, 1e-7));
    }
    out
}

/// Criterion 3: extrema of the diagonal curve and of the crossover gap.
pub fn criterion_03_extrema() -> Vec<VerificationReport> {
    let m = closedform::x_model();
    let mut out = Vec::new();
    match curve_extremum(&m.diag, 0.0, 1.0, ExtremumMode::Max) {
        Ok((arg, val)) => {
            out.push(check("3a-x-diag-argmax", "derivative-bisection extremum", arg, 0.2722700792, 1e-8));
            out.push(check("3b-x-diag-max", "value at the diagonal maximum", val, 0.393558399, 1e-8));
        }
        Err(_) => out.push(check_bool("3a-x-diag-argmax", "extremum search failed", f64::NAN, false)),
    }
    let crossover = poly_root(&closedform::x_crossover_quintic(), 0.3, 0.5, 1e-12)
        .map(|b| b.midpoint_f64())
        .unwrap_or(f64::NAN);
    let gap = m.diag.difference(&m.antidiag);
    match curve_extremum(&gap, crossover, 0.5, ExtremumMode::Max) {
        Ok((arg, val)) => {
            out.push(check("3c-x-gap-argmax", "argmax of diag-anti over the crossover region", arg, 0.4564893379, 1e-8));
            out.push(check("3d-x-gap-max", "maximum crossover gap", val, 0.0056796160, 1e-8));
        }
        Err(_) => out.push(check_bool("3c-x-gap-argmax", "extremum search failed", f64::NAN, false)),
    }
    out
}

/// Criterion 4: half-section intersections.
pub fn criterion_04_intersections() -> Vec<VerificationReport> {
    let m = closedform::x_model();
    let r1 = intersect_curves(&m.half, &m.diag, 1e-6, 0.4999);
    let r2 = intersect_curves(&m.half, &m.antidiag, 1e-6, 0.4999);
    vec![
        check(
            "4a-half-diag-intersection",
            "largest root of half-section minus diagonal below 1/2",
            r1.last().copied().unwrap_or(f64::NAN),
            0.364314,
            1e-5,
        ),
        check(
            "4b-half-antidiag-intersection",
            "largest root of half-section minus antidiagonal below 1/2",
            r2.last().copied().unwrap_or(f64::NAN),
            0.428908,
            1e-5,
        ),
    ]
}

/// Criterion 5: surface integral and correlations by quadrature.
pub fn criterion_05_integrals() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let integral = closedform::integrate_x_prob(1e-8).unwrap_or(f64::NAN);
    out.push(check("5a-x-prob-integral", "adaptive quadrature over the unit square", integral, 0.381678, 1e-4));
    let all = closedform::x_correlation(false);
    out.push(check(
        "5b-x-corr-all",
        "off-center correlation statistic under the total volume surface",
        all.reference,
        0.702341,
        1e-5,
    ));
    let sep = closedform::x_correlation(true);
    out.push(check(
        "5c-x-corr-separable",
        "off-center correlation statistic under the separable volume surface",
        sep.reference,
        0.68326,
        1e-5,
    ));
    out
}

/// Criterion 6: the marginal of the total surface matches the univariate
/// volume formula at nine probe points.
pub fn criterion_06_marginal_identity() -> Vec<VerificationReport> {
    let mut worst = 0.0f64;
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let marg = closedform::x_total_marginal(r, 1e-10).unwrap_or(f64::NAN);
        let err = (marg - closedform::x_univariate_volume(r)).abs();
        worst = worst.max(err);
    }
    vec![check(
        "6-x-total-marginal",
        "worst |marginal - pi^2 (1-r^2)^3/2304| over r in {0.1..0.9}",
        worst,
        0.0,
        1e-9,
    )]
}

/// Criterion 7: fit-formula self-consistency.
pub fn criterion_07_fit_consistency() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    // Eq-level: diagonal probability = separable/total volume on the
    // diagonal, for K=3.
    let mut worst3 = 0.0f64;
    for k in 1..100 {
        let r = k as f64 / 100.0;
        let ratio_val = fits::k3_sep(r, r).unwrap() / fits::k3_total(r, r).unwrap();
        worst3 = worst3.max((ratio_val - fits::k3_diag(r)).abs());
    }
    out.push(check("7a-k3-diag-consistency", "K=3 diagonal probability vs volume ratio", worst3, 0.0, 1e-9));

    let (t4, s4) = fits::k4_diag_volumes();
    let mut worst4 = 0.0f64;
    for k in 1..100 {
        let r = k as f64 / 100.0 * 0.99;
        worst4 = worst4.max((s4.eval_f64(r) / t4.eval_f64(r) - fits::k4_diag(r)).abs());
    }
    out.push(check("7b-k4-diag-consistency", "K=4 printed ratio vs printed volumes", worst4, 0.0, 1e-9));

    let (t5, s5) = fits::k5_diag_volumes();
    let mut worst5 = 0.0f64;
    for k in 1..100 {
        let r = k as f64 / 100.0 * 0.99;
        worst5 = worst5.max((s5.eval_f64(r) / t5.eval_f64(r) - fits::k5_diag(r)).abs());
    }
    out.push(check("7c-k5-diag-consistency", "K=5 printed ratio vs printed volumes", worst5, 0.0, 1e-9));

    let jump = (fits::k3_antidiag(0.5 - 1e-9) - fits::k3_antidiag(0.5 + 1e-9)).abs();
    out.push(check("7d-k3-antidiag-continuity", "K=3 antidiagonal one-sided values at 1/2", jump, 0.0, 1e-9));
    out
}

/// All exact criteria (1-7).
pub fn exact_suite() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    out.extend(criterion_01_exact_prob_values());
    out.extend(criterion_02_poly_roots());
    out.extend(criterion_03_extrema());
    out.extend(criterion_04_intersections());
    out.extend(criterion_05_integrals());
    out.extend(criterion_06_marginal_identity());
    out.extend(criterion_07_fit_consistency());
    out
}

// ----------------------------------------------------------------------
// Monte Carlo criteria (8-13)
// ----------------------------------------------------------------------

/// Sample counts for the Monte Carlo criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McScale {
    /// Criterion 8/9/12 runs (overall fractions, curve chi-squared,
    /// marginal-exponent regressions).
    pub fraction_samples: u64,
    /// Crossover-run sample counts (criterion 10).
    pub crossover_x_hs: u64,
    pub crossover_x_k5: u64,
    pub crossover_qubit_k3: u64,
    pub crossover_qubit_k4: u64,
    pub crossover_qubit_k5: u64,
    pub crossover_rebit: u64,
    /// Criterion 11.
    pub bures_samples: u64,
    /// Criterion 13.
    pub qutrit_hs_samples: u64,
    pub qutrit_k24_samples: u64,
    pub qubitqutrit_samples: u64,
}

impl McScale {
    /// Acceptance scale. Fraction runs are pinned at 1e7; crossover runs are
    /// sized from calibration so the fitted-root uncertainty fits the bands.
    pub fn full() -> Self {
        Self {
            fraction_samples: 10_000_000,
            crossover_x_hs: 1_500_000_000,
            crossover_x_k5: 1_000_000_000,
            crossover_qubit_k3: 1_500_000_000,
            crossover_qubit_k4: 6_000_000_000,
            crossover_qubit_k5: 4_000_000_000,
            crossover_rebit: 4_000_000_000,
            bures_samples: 100_000_000,
            qutrit_hs_samples: 10_000_000,
            qutrit_k24_samples: 1_000_000,
            qubitqutrit_samples: 50_000_000,
        }
    }

    /// Smoke-test scale used by `verify --fast`.
    pub fn fast() -> Self {
        Self {
            fraction_samples: 1_000_000,
            crossover_x_hs: 0,
            crossover_x_k5: 0,
            crossover_qubit_k3: 0,
            crossover_qubit_k4: 0,
            crossover_qubit_k5: 0,
            crossover_rebit: 0,
            bures_samples: 300_000,
            qutrit_hs_samples: 0,
            qutrit_k24_samples: 200_000,
            qubitqutrit_samples: 0,
        }
    }
}

/// Process-wide cache so the criteria can share scenario runs.
fn run_cached(spec: &ScenarioSpec) -> Arc<ScenarioOutputs> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<ScenarioOutputs>>>> = OnceLock::new();
    let key = serde_json::to_string(spec).expect("spec serializes");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let out = Arc::new(scenarios::run(spec).expect("scenario run"));
    cache
        .lock()
        .unwrap()
        .insert(key, out.clone());
    out
}

fn fraction_spec(name: ScenarioName, samples: u64) -> ScenarioSpec {
    ScenarioSpec::new(name, samples)
}

fn binomial_3sigma(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Criterion 8: overall separable fractions at 1e7 samples, 3 sigma.
pub fn criterion_08_fractions(scale: &McScale) -> Vec<VerificationReport> {
    let targets: [(ScenarioName, f64, &str); 5] = [
        (ScenarioName::XHs, 2.0 / 5.0, "2/5"),
        (ScenarioName::QubitK4, 8.0 / 33.0, "8/33"),
        (ScenarioName::QubitK3, 1.0 / 14.0, "1/14"),
        (ScenarioName::QubitK5, 61.0 / 143.0, "61/143"),
        (ScenarioName::Rebit, 29.0 / 64.0, "29/64"),
    ];
    targets
        .into_iter()
        .map(|(name, target, label)| {
            let out = run_cached(&fraction_spec(name, scale.fraction_samples));
            check(
                &format!("8-{}-fraction", name),
                &format!("overall separable fraction vs {label} at n={}", scale.fraction_samples),
                out.report.separable_fraction,
                target,
                binomial_3sigma(target, scale.fraction_samples),
            )
        })
        .collect()
}

/// Criterion 9: x-hs per-bin curves against the exact sections, reduced
/// chi-squared in [0.5, 2] over bins with >= 200 counts.
pub fn criterion_09_curve_chi_squared(scale: &McScale) -> Vec<VerificationReport> {
    let out = run_cached(&fraction_spec(ScenarioName::XHs, scale.fraction_samples));
    let diag = &out.curves[0].1;
    let anti = &out.curves[1].1;
    let mut reports = Vec::new();
    for (name, data, f) in [
        ("9a-x-hs-diagonal-chi2", diag, closedform::x_diag as fn(f64) -> f64),
        ("9b-x-hs-antidiagonal-chi2", anti, closedform::x_antidiag as fn(f64) -> f64),
    ] {
        let rep = fits::chi_squared(name, f, data, 200, false);
        match rep {
            Ok(r) => reports.push(check(
                name,
                &format!("reduced chi-squared over {} bins", r.bins_used),
                r.reduced,
                1.25,
                0.75,
            )),
            Err(_) => reports.push(check_bool(name, "no usable bins", f64::NAN, false)),
        }
    }
    reports
}

fn crossover_root(out: &ScenarioOutputs) -> Option<(f64, f64, f64)> {
    match out.report.crossover {
        CrossoverOutcome::Found { root, se, min_z, .. } => Some((root, se, min_z)),
        _ => None,
    }
}

/// Criterion 10: crossover estimates and the K-ordering invariant.
pub fn criterion_10_crossovers(scale: &McScale) -> Vec<VerificationReport> {
    let runs: [(ScenarioName, u64, f64, &str); 5] = [
        (ScenarioName::XHs, scale.crossover_x_hs, 0.40182804, "10a-x-hs-crossover"),
        (ScenarioName::XK5, scale.crossover_x_k5, 0.3385355079, "10b-x-k5-crossover"),
        (ScenarioName::QubitK4, scale.crossover_qubit_k4, 0.453893, "10c-qubit-k4-crossover"),
        (ScenarioName::QubitK5, scale.crossover_qubit_k5, 0.424453, "10d-qubit-k5-crossover"),
        (ScenarioName::Rebit, scale.crossover_rebit, 0.4722, "10e-rebit-crossover"),
    ];
    let mut reports = Vec::new();
    let mut roots: HashMap<ScenarioName, f64> = HashMap::new();
    for (name, samples, target, label) in runs {
        let out = run_cached(&fraction_spec(name, samples));
        match crossover_root(&out) {
            Some((root, se, min_z)) => {
                roots.insert(name, root);
                reports.push(check(
                    label,
                    &format!("fitted crossover (se {se:.4}, min z {min_z:.1}, n={samples})"),
                    root,
                    target,
                    0.02,
                ));
            }
            None => reports.push(check_bool(
                label,
                &format!("no crossover detected at n={samples}"),
                f64::NAN,
                false,
            )),
        }
    }
    // Ordering: K=5 < K=4 < K=3 for the full two-qubit ensembles, and the
    // X-state K=5 crossover sits below the X-state HS one.
    let k3 = run_cached(&fraction_spec(ScenarioName::QubitK3, scale.crossover_qubit_k3));
    let k3_root = crossover_root(&k3).map(|(r, _, _)| r);
    let (r4, r5) = (
        roots.get(&ScenarioName::QubitK4).copied(),
        roots.get(&ScenarioName::QubitK5).copied(),
    );
    let ordering = match (r5, r4, k3_root) {
        (Some(r5), Some(r4), Some(r3)) => r5 < r4 && r4 < r3,
        _ => false,
    };
    reports.push(check_bool(
        "10f-crossover-ordering",
        &format!(
            "K=5 ({:?}) < K=4 ({:?}) < K=3 ({:?})",
            r5, r4, k3_root
        ),
        k3_root.unwrap_or(f64::NAN),
        ordering,
    ));
    let (xhs, xk5) = (
        roots.get(&ScenarioName::XHs).copied(),
        roots.get(&ScenarioName::XK5).copied(),
    );
    reports.push(check_bool(
        "10g-x-ordering",
        &format!("X K=5 ({:?}) < X HS ({:?})", xk5, xhs),
        xk5.unwrap_or(f64::NAN),
        matches!((xk5, xhs), (Some(a), Some(b)) if a < b),
    ));
    reports
}

/// Criterion 11: Bures behaves differently - no crossover below 1/2 and a
/// strictly decreasing univariate separability profile.
pub fn criterion_11_bures(scale: &McScale) -> Vec<VerificationReport> {
    let out = run_cached(&fraction_spec(ScenarioName::Bures, scale.bures_samples));
    let mut reports = Vec::new();
    let no_crossing = matches!(out.report.crossover, CrossoverOutcome::NoCrossing);
    reports.push(check_bool(
        "11a-bures-no-crossing",
        &format!("fitted crossover outcome: {:?}", out.report.crossover),
        f64::NAN,
        no_crossing,
    ));
    let marginal = out.histogram.marginal(Axis::RA);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, ratio) in marginal.ratios.iter().enumerate() {
        if let Some(r) = ratio {
            xs.push(marginal.abscissae[k]);
            ys.push(*r);
        }
    }
    let rho = spearman(&xs, &ys).unwrap_or(f64::NAN);
    reports.push(check_bool(
        "11b-bures-monotone-decrease",
        &format!("Spearman rank correlation of p(r_A) vs r_A over {} bins", xs.len()),
        rho,
        rho < -0.9,
    ));
    // Sanity band from the literature value ~0.0733.
    reports.push(check_bool(
        "11c-bures-fraction-band",
        "overall Bures separability fraction inside (0.07, 0.09)",
        out.report.separable_fraction,
        out.report.separable_fraction > 0.07 && out.report.separable_fraction < 0.09,
    ));
    reports
}

/// Weighted log-log regression of marginal counts against `log(1 - r^2)`.
fn marginal_log_slope(out: &ScenarioOutputs, r_lo: f64, r_hi: f64, min_count: u64) -> f64 {
    let marginal = out.histogram.marginal(Axis::RA);
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (k, &count) in marginal.totals.iter().enumerate() {
        let mid = marginal.abscissae[k];
        if mid < r_lo || mid > r_hi || count < min_count {
            continue;
        }
        let x = (1.0 - mid * mid).ln();
        let y = (count as f64).ln();
        let w = count as f64;
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    (sxy - sx * sy / sw) / (sxx - sx * sx / sw)
}

/// Criterion 12: marginal-exponent regressions.
pub fn criterion_12_marginal_exponents(scale: &McScale) -> Vec<VerificationReport> {
    let cases: [(ScenarioName, u64, f64, &str); 6] = [
        (ScenarioName::XHs, scale.fraction_samples, 3.0, "12a-x-hs-slope"),
        (ScenarioName::XK5, scale.crossover_x_k5, 5.0, "12b-x-k5-slope"),
        (ScenarioName::QubitK3, scale.fraction_samples, 4.0, "12c-qubit-k3-slope"),
        (ScenarioName::QubitK4, scale.fraction_samples, 6.0, "12d-qubit-k4-slope"),
        (ScenarioName::QubitK5, scale.fraction_samples, 8.0, "12e-qubit-k5-slope"),
        (ScenarioName::Rebit, scale.fraction_samples, 3.5, "12f-rebit-slope"),
    ];
    cases
        .into_iter()
        .map(|(name, samples, target, label)| {
            let out = run_cached(&fraction_spec(name, samples));
            let slope = marginal_log_slope(&out, 0.05, 0.9, 50);
            check(
                label,
                &format!("weighted log marginal counts vs log(1-r^2), n={samples}"),
                slope,
                target,
                0.1,
            )
        })
        .collect()
}

/// Criterion 13: qutrit and hybrid scans.
pub fn criterion_13_qutrit_hybrid(scale: &McScale) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    let k24 = run_cached(&fraction_spec(ScenarioName::QutritK24, scale.qutrit_k24_samples));
    reports.push(check(
        "13a-qutrit-k24-ppt-fraction",
        &format!("two-qutrit induced K=24 PPT fraction at n={}", scale.qutrit_k24_samples),
        k24.report.separable_fraction,
        0.71179,
        0.005,
    ));
    let hs = run_cached(&fraction_spec(ScenarioName::QutritHs, scale.qutrit_hs_samples));
    reports.push(check(
        "13b-qutrit-hs-ppt-fraction",
        &format!("two-qutrit HS PPT fraction at n={} (30% band)", scale.qutrit_hs_samples),
        hs.report.separable_fraction,
        1.0218e-4,
        0.3 * 1.0218e-4,
    ));
    reports.push(check_bool(
        "13c-qutrit-hs-radius-range",
        "largest generalized Bloch radius seen stays below 0.58",
        hs.report.max_radius_seen,
        hs.report.max_radius_seen < 0.58,
    ));

    let qq = run_cached(&fraction_spec(ScenarioName::QubitQutritHs, scale.qubitqutrit_samples));
    reports.push(check_bool(
        "13d-qubitqutrit-curves-emitted",
        &format!("curves: {:?}", qq.report.curve_names),
        qq.curves.len() as f64,
        qq.report.curve_names
            == vec![
                "diagonal".to_string(),
                "antidiagonal".to_string(),
                "antidiagonal_reversed".to_string(),
            ],
    ));
    let diag = &qq.curves[0].1;
    let anti = &qq.curves[1].1;
    let mut dominated = 0usize;
    let mut compared = 0usize;
    for k in 0..diag.abscissae.len() {
        let x = diag.abscissae[k];
        if (0.3..=0.5).contains(&x) {
            continue;
        }
        if let (Some(da), Some(aa)) = (diag.probabilities[k], anti.probabilities[k]) {
            compared += 1;
            if aa > da {
                dominated += 1;
            }
        }
    }
    let frac = if compared > 0 {
        dominated as f64 / compared as f64
    } else {
        f64::NAN
    };
    reports.push(check_bool(
        "13e-qubitqutrit-anti-dominance",
        &format!("anti > diag on {dominated}/{compared} defined bins outside [0.3, 0.5]"),
        frac,
        compared > 0 && frac >= 0.8,
    ));
    reports
}

/// Extra pinned spec examples riding on the acceptance runs.
pub fn extra_checks(scale: &McScale) -> Vec<VerificationReport> {
    let mut reports = Vec::new();
    let xhs = run_cached(&fraction_spec(ScenarioName::XHs, scale.fraction_samples));
    // The sampled statistic is the plain Pearson correlation, whose exact
    // values follow from the rational moments of the volume surfaces.
    let pearson_all = closedform::x_correlation(false).pearson;
    let pearson_sep = closedform::x_correlation(true).pearson;
    if let Some(corr) = xhs.report.correlation_all {
        reports.push(check(
            "x-hs-corr-all",
            "sampled radius Pearson correlation vs exact 495/5359",
            corr,
            pearson_all,
            0.002,
        ));
    }
    if let Some(corr) = xhs.report.correlation_separable {
        reports.push(check(
            "x-hs-corr-separable",
            "sampled separable-subset Pearson correlation vs exact moments",
            corr,
            pearson_sep,
            0.002,
        ));
    }
    // Histogram symmetry statistic for a symmetric measure.
    let h = &xhs.histogram;
    let mut worst = 0.0f64;
    for i in 0..h.nbins() {
        for j in (i + 1)..h.nbins() {
            let (a, b) = (h.total_at(i, j) as f64, h.total_at(j, i) as f64);
            let stat = (a - b).abs() / (a + b + 1.0).sqrt();
            worst = worst.max(stat);
        }
    }
    reports.push(check_bool(
        "x-hs-histogram-symmetry",
        "max |T_ij - T_ji| / sqrt(T_ij + T_ji + 1) over the upper triangle",
        worst,
        worst < 5.0,
    ));
    // X K=5 probability near the center matches Eq. (15) at r_A = r_B = 1/2.
    let xk5 = run_cached(&fraction_spec(ScenarioName::XK5, scale.crossover_x_k5));
    let hk5 = &xk5.histogram;
    let n2 = hk5.nbins() / 2;
    let mut tot = 0u64;
    let mut sep = 0u64;
    for i in [n2 - 1, n2] {
        for j in [n2 - 1, n2] {
            tot += hk5.total_at(i, j);
            sep += hk5.separable_at(i, j);
        }
    }
    if tot > 0 {
        let p = sep as f64 / tot as f64;
        let target = 1261.0 / 2176.0;
        reports.push(check(
            "x-k5-center-probability",
            &format!("pooled center bins vs 1261/2176 ({tot} samples)"),
            p,
            target,
            4.0 * (target * (1.0 - target) / tot as f64).sqrt() + 0.004,
        ));
    }
    reports
}

/// The full acceptance suite.
pub fn full_suite() -> Vec<VerificationReport> {
    let scale = McScale::full();
    let mut out = exact_suite();
    out.extend(criterion_08_fractions(&scale));
    out.extend(criterion_09_curve_chi_squared(&scale));
    out.extend(criterion_10_crossovers(&scale));
    out.extend(criterion_11_bures(&scale));
    out.extend(criterion_12_marginal_exponents(&scale));
    out.extend(criterion_13_qutrit_hybrid(&scale));
    out.extend(extra_checks(&scale));
    out
}

/// Exact checks plus a quick Monte Carlo smoke test.
pub fn fast_suite() -> Vec<VerificationReport> {
    let scale = McScale::fast();
    let mut out = exact_suite();
    for (name, target, label) in [
        (ScenarioName::XHs, 0.4, "2/5"),
        (ScenarioName::QubitK4, 8.0 / 33.0, "8/33"),
    ] {
        let run = run_cached(&fraction_spec(name, scale.fraction_samples));
        out.push(check(
            &format!("smoke-{}-fraction", name),
            &format!("fraction vs {label} at n={} (4 sigma)", scale.fraction_samples),
            run.report.separable_fraction,
            target,
            (4.0 / 3.0) * binomial_3sigma(target, scale.fraction_samples),
        ));
    }
    let bures = run_cached(&fraction_spec(ScenarioName::Bures, scale.bures_samples));
    out.push(check_bool(
        "smoke-bures-fraction-band",
        "Bures separability fraction inside (0.07, 0.09)",
        bures.report.separable_fraction,
        bures.report.separable_fraction > 0.07 && bures.report.separable_fraction < 0.09,
    ));
    let k24 = run_cached(&fraction_spec(ScenarioName::QutritK24, scale.qutrit_k24_samples));
    out.push(check(
        "smoke-qutrit-k24-fraction",
        "qutrit K=24 PPT fraction (4 sigma + model band)",
        k24.report.separable_fraction,
        0.71179,
        0.005,
    ));
    out
}
