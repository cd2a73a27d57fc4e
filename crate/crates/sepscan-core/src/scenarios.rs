//! End-to-end named experiments: sample -> radii -> histogram -> curves ->
//! crossover -> report.
//!
//! Parallelism and reproducibility: a run with `workers = W` partitions the
//! `n` samples over `W` logical RNG streams (stream `w` draws samples
//! `w, w+W, ...`), each with a private histogram and accumulators, merged in
//! stream order at the end. Results are therefore bit-identical for a fixed
//! `(seed, workers, samples)` triple no matter how many OS threads actually
//! execute the streams.

use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::histogram::{
    estimate_crossover, fit_crossover, CorrelationAccumulator, CurveEstimate, HistogramError,
    JointRadialHistogram,
};
use crate::measures::{MatrixSampler, MeasureError, MeasureFamily, MeasureSpec, SampleStats, XStateSampler};
use crate::qstate::{StateError, Subsystem};
use crate::radii::{bloch_radius, generalized_bloch_radius, xstate_radii, RadiusError, RadiusPair};

/// Seed used by the verification suite and as the CLI default.
pub const DEFAULT_SEED: u64 = 20_260_810;
/// Logical stream count default. Fixed (rather than tied to the machine's
/// core count) so default-configuration artifacts are machine-independent.
pub const DEFAULT_WORKERS: u64 = 8;
/// Default PPT tolerance.
pub const DEFAULT_PPT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Histogram(#[from] HistogramError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Radius(#[from] RadiusError),
    #[error("unknown scenario name: {0}")]
    UnknownScenario(String),
}

/// The named experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioName {
    /// Flat (Hilbert-Schmidt) measure on X-states.
    XHs,
    /// Random induced K=5 measure on X-states.
    XK5,
    /// Full two-qubit states, induced K=3.
    QubitK3,
    /// Full two-qubit states, Hilbert-Schmidt (K=4).
    QubitK4,
    /// Full two-qubit states, induced K=5.
    QubitK5,
    /// Two-rebit states (real entries), Hilbert-Schmidt.
    Rebit,
    /// Two-qubit states under the Bures measure.
    Bures,
    /// Two-qutrit states, Hilbert-Schmidt (K=N=9).
    QutritHs,
    /// Two-qutrit states, induced K=24.
    QutritK24,
    /// Qubit-qutrit (6x6) states, Hilbert-Schmidt.
    QubitQutritHs,
}

impl ScenarioName {
    pub fn all() -> [ScenarioName; 10] {
        use ScenarioName::*;
        [
            XHs, XK5, QubitK3, QubitK4, QubitK5, Rebit, Bures, QutritHs, QutritK24, QubitQutritHs,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::XHs => "x-hs",
            ScenarioName::XK5 => "x-k5",
            ScenarioName::QubitK3 => "qubit-k3",
            ScenarioName::QubitK4 => "qubit-k4",
            ScenarioName::QubitK5 => "qubit-k5",
            ScenarioName::Rebit => "rebit",
            ScenarioName::Bures => "bures",
            ScenarioName::QutritHs => "qutrit-hs",
            ScenarioName::QutritK24 => "qutrit-k24",
            ScenarioName::QubitQutritHs => "qubitqutrit-hs",
        }
    }
}

impl std::fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioName::all()
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| ScenarioError::UnknownScenario(s.to_string()))
    }
}

/// Static per-scenario configuration.
struct ScenarioDef {
    family: MeasureFamily,
    n: usize,
    k: usize,
    split: (usize, usize),
    /// Default quasi-antidiagonal offset (1.0 = the plain antidiagonal).
    offset: f64,
    /// Width of the crossover fit window below the anchor.
    window_below: f64,
    /// Polynomial degree of the crossover fit.
    fit_degree: usize,
}

fn def(name: ScenarioName) -> ScenarioDef {
    use MeasureFamily as F;
    use ScenarioName as S;
    match name {
        S::XHs => ScenarioDef { family: F::XFlat, n: 4, k: 4, split: (2, 2), offset: 1.0, window_below: 0.18, fit_degree: 3 },
        S::XK5 => ScenarioDef { family: F::XInduced, n: 4, k: 5, split: (2, 2), offset: 1.0, window_below: 0.24, fit_degree: 3 },
        S::QubitK3 => ScenarioDef { family: F::GinibreInduced, n: 4, k: 3, split: (2, 2), offset: 1.0, window_below: 0.09, fit_degree: 2 },
        S::QubitK4 => ScenarioDef { family: F::GinibreInduced, n: 4, k: 4, split: (2, 2), offset: 1.0, window_below: 0.12, fit_degree: 2 },
        S::QubitK5 => ScenarioDef { family: F::GinibreInduced, n: 4, k: 5, split: (2, 2), offset: 1.0, window_below: 0.15, fit_degree: 2 },
        S::Rebit => ScenarioDef { family: F::RealHs, n: 4, k: 4, split: (2, 2), offset: 1.0, window_below: 0.08, fit_degree: 2 },
        S::Bures => ScenarioDef { family: F::Bures, n: 4, k: 4, split: (2, 2), offset: 1.0, window_below: 0.15, fit_degree: 2 },
        S::QutritHs => ScenarioDef { family: F::GinibreInduced, n: 9, k: 9, split: (3, 3), offset: 0.435, window_below: 0.12, fit_degree: 2 },
        S::QutritK24 => ScenarioDef { family: F::GinibreInduced, n: 9, k: 24, split: (3, 3), offset: 0.265, window_below: 0.08, fit_degree: 2 },
        S::QubitQutritHs => ScenarioDef { family: F::GinibreInduced, n: 6, k: 6, split: (2, 3), offset: 1.0, window_below: 0.15, fit_degree: 2 },
    }
}

/// Full description of one scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    pub samples: u64,
    pub seed: u64,
    /// Logical stream count; part of the reproducibility key.
    pub workers: u64,
    pub nbins: usize,
    /// Quasi-antidiagonal offset; `None` uses the scenario default.
    pub offset: Option<f64>,
    pub ppt_tol: f64,
}

impl ScenarioSpec {
    pub fn new(name: ScenarioName, samples: u64) -> Self {
        Self {
            name,
            samples,
            seed: DEFAULT_SEED,
            workers: DEFAULT_WORKERS,
            nbins: 100,
            offset: None,
            ppt_tol: DEFAULT_PPT_TOL,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn effective_offset(&self) -> f64 {
        self.offset.unwrap_or_else(|| def(self.name).offset)
    }

    fn measure_spec(&self, stream: u64) -> MeasureSpec {
        let d = def(self.name);
        MeasureSpec {
            family: d.family,
            n: d.n,
            k: d.k,
            split: d.split,
            seed: self.seed,
            stream,
        }
    }
}

/// Crossover verdict carried by the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CrossoverOutcome {
    /// Fitted descending zero of (anti - diag) below the anchor.
    Found {
        root: f64,
        se: f64,
        min_z: f64,
        points: usize,
    },
    /// No statistically significant crossing below the anchor.
    NoCrossing,
    /// Not enough defined bins to attempt the fit.
    NotEstimated,
}

/// JSON-serializable summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub samples: u64,
    pub seed: u64,
    pub workers: u64,
    pub nbins: usize,
    pub offset: f64,
    pub ppt_tol: f64,
    /// Overall separable (or PPT) fraction.
    pub separable_fraction: f64,
    /// Three-sigma binomial half-width.
    pub ci_halfwidth: f64,
    pub separable_count: u64,
    pub crossover: CrossoverOutcome,
    /// Raw per-bin interpolation estimate (noise-sensitive; see the fitted
    /// `crossover` field for the scan verdict).
    pub crossover_raw_interpolation: Option<f64>,
    pub correlation_all: Option<f64>,
    pub correlation_separable: Option<f64>,
    pub max_radius_seen: f64,
    pub sampler_stats: SampleStats,
    pub curve_names: Vec<String>,
    pub runtime_seconds: f64,
    pub version: String,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct ScenarioOutputs {
    pub spec: ScenarioSpec,
    pub histogram: JointRadialHistogram,
    pub curves: Vec<(String, CurveEstimate)>,
    pub report: ScenarioReport,
}

struct WorkerOut {
    hist: JointRadialHistogram,
    corr_all: CorrelationAccumulator,
    corr_sep: CorrelationAccumulator,
    stats: SampleStats,
    max_radius: f64,
}

fn run_stream(spec: &ScenarioSpec, stream: u64) -> Result<WorkerOut, ScenarioError> {
    let d = def(spec.name);
    let count = (spec.samples + spec.workers - 1 - stream) / spec.workers;
    let mut hist = JointRadialHistogram::new(spec.nbins, 1.0);
    let mut corr_all = CorrelationAccumulator::new();
    let mut corr_sep = CorrelationAccumulator::new();
    let mut max_radius = 0.0f64;
    let mut record = |pair: RadiusPair,
                      hist: &mut JointRadialHistogram|
     -> Result<(), ScenarioError> {
        max_radius = max_radius.max(pair.r_a).max(pair.r_b);
        hist.accumulate(&pair)?;
        corr_all.push(pair.r_a, pair.r_b);
        if pair.separable {
            corr_sep.push(pair.r_a, pair.r_b);
        }
        Ok(())
    };

    let stats = match d.family {
        MeasureFamily::XFlat | MeasureFamily::XInduced => {
            let mut sampler = XStateSampler::new(spec.measure_spec(stream))?;
            for _ in 0..count {
                let x = sampler.sample();
                record(xstate_radii(&x), &mut hist)?;
            }
            sampler.stats()
        }
        _ => {
            let mut sampler = MatrixSampler::new(spec.measure_spec(stream))?;
            let (da, _db) = d.split;
            for _ in 0..count {
                let rho = sampler.sample();
                let separable = rho.is_ppt_fast(spec.ppt_tol)?;
                let red_a = rho.partial_trace(Subsystem::A)?;
                let red_b = rho.partial_trace(Subsystem::B)?;
                let r_a = if da == 2 {
                    bloch_radius(&red_a)?
                } else {
                    generalized_bloch_radius(&red_a)?
                };
                let r_b = if d.split.1 == 2 {
                    bloch_radius(&red_b)?
                } else {
                    generalized_bloch_radius(&red_b)?
                };
                record(
                    RadiusPair {
                        r_a: r_a.min(1.0),
                        r_b: r_b.min(1.0),
                        separable,
                    },
                    &mut hist,
                )?;
            }
            sampler.stats()
        }
    };
    Ok(WorkerOut {
        hist,
        corr_all,
        corr_sep,
        stats,
        max_radius,
    })
}

/// Execute a scan.
pub fn run(spec: &ScenarioSpec) -> Result<ScenarioOutputs, ScenarioError> {
    spec.measure_spec(0).validate()?;
    let start = Instant::now();
    let workers: Vec<Result<WorkerOut, ScenarioError>> = (0..spec.workers)
        .into_par_iter()
        .map(|w| run_stream(spec, w))
        .collect();

    let mut hist = JointRadialHistogram::new(spec.nbins, 1.0);
    let mut corr_all = CorrelationAccumulator::new();
    let mut corr_sep = CorrelationAccumulator::new();
    let mut stats = SampleStats::default();
    let mut max_radius = 0.0f64;
    for w in workers {
        let w = w?;
        hist.merge_from(&w.hist)?;
        corr_all.merge(&w.corr_all);
        corr_sep.merge(&w.corr_sep);
        stats.accepted += w.stats.accepted;
        stats.disk_rejects += w.stats.disk_rejects;
        stats.det_rejects += w.stats.det_rejects;
        max_radius = max_radius.max(w.max_radius);
    }

    let offset = spec.effective_offset();
    let anchor = (offset * spec.nbins as f64).round() / spec.nbins as f64 / 2.0;
    let d = def(spec.name);

    let diag = hist.diagonal_curve();
    let anti = hist.quasi_antidiagonal_curve(offset);
    let mut curves: Vec<(String, CurveEstimate)> = Vec::new();
    curves.push(("diagonal".to_string(), diag.clone()));
    let anti_name = if offset == 1.0 {
        "antidiagonal"
    } else {
        "quasi_antidiagonal"
    };
    curves.push((anti_name.to_string(), anti.clone()));
    if spec.name == ScenarioName::QubitQutritHs {
        // The reversal p(r_A, 1 - r_A) of the antidiagonal p(1 - R_B, R_B).
        let mut reversed = anti.clone();
        reversed.probabilities.reverse();
        reversed.counts.reverse();
        curves.push(("antidiagonal_reversed".to_string(), reversed));
    } else {
        curves.push((
            "half_section".to_string(),
            hist.column_curve(spec.nbins / 2),
        ));
    }

    let crossover = match fit_crossover(&diag, &anti, (anchor - d.window_below, anchor), d.fit_degree, 100) {
        Ok(fit) => CrossoverOutcome::Found {
            root: fit.root,
            se: fit.se,
            min_z: fit.min_z,
            points: fit.points,
        },
        Err(HistogramError::NoCrossing) => CrossoverOutcome::NoCrossing,
        Err(_) => CrossoverOutcome::NotEstimated,
    };
    let crossover_raw = estimate_crossover(&diag, &anti, anchor).ok();

    let total = hist.grand_total();
    let separable = hist.grand_separable();
    let fraction = separable as f64 / total as f64;
    let ci = 3.0 * (fraction * (1.0 - fraction) / total as f64).sqrt();

    let report = ScenarioReport {
        scenario: spec.name.to_string(),
        samples: spec.samples,
        seed: spec.seed,
        workers: spec.workers,
        nbins: spec.nbins,
        offset,
        ppt_tol: spec.ppt_tol,
        separable_fraction: fraction,
        ci_halfwidth: ci,
        separable_count: separable,
        crossover,
        crossover_raw_interpolation: crossover_raw,
        correlation_all: corr_all.correlation().ok(),
        correlation_separable: corr_sep.correlation().ok(),
        max_radius_seen: max_radius,
        sampler_stats: stats,
        curve_names: curves.iter().map(|(n, _)| n.clone()).collect(),
        runtime_seconds: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };

    Ok(ScenarioOutputs {
        spec: spec.clone(),
        histogram: hist,
        curves,
        report,
    })
}

/// Write `total.csv`, `separable.csv`, `curve_<name>.csv`, and `report.json`
/// into `dir`.
pub fn write_artifacts(out: &ScenarioOutputs, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    out.histogram.write_counts_csv(dir)?;
    for (name, curve) in &out.curves {
        curve.write_csv(&dir.join(format!("curve_{name}.csv")))?;
    }
    let json = serde_json::to_string_pretty(&out.report)?;
    fs::write(dir.join("report.json"), json)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_round_trip() {
        for name in ScenarioName::all() {
            assert_eq!(name.as_str().parse::<ScenarioName>().unwrap(), name);
        }
        assert!("nope".parse::<ScenarioName>().is_err());
    }

    #[test]
    fn runs_are_bit_reproducible() {
        let spec = ScenarioSpec::new(ScenarioName::XHs, 20_000);
        let a = run(&spec).unwrap();
        let b = run(&spec).unwrap();
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.report.separable_fraction, b.report.separable_fraction);
        assert_eq!(a.report.correlation_all, b.report.correlation_all);
    }

    #[test]
    fn stream_partition_is_worker_count_keyed() {
        // Different logical stream counts legitimately change the sample
        // set; fixed counts reproduce exactly (also across thread pools).
        let spec4 = ScenarioSpec {
            workers: 4,
            ..ScenarioSpec::new(ScenarioName::XHs, 10_000)
        };
        let a = run(&spec4).unwrap();
        let b = run(&spec4).unwrap();
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.histogram.grand_total(), 10_000);
    }

    #[test]
    fn matrix_scenario_smoke() {
        let spec = ScenarioSpec::new(ScenarioName::QubitK4, 20_000);
        let out = run(&spec).unwrap();
        assert_eq!(out.histogram.grand_total(), 20_000);
        let f = out.report.separable_fraction;
        // 8/33 with a generous band at 2e4 samples.
        assert!((f - 8.0 / 33.0).abs() < 0.02, "fraction {f}");
        assert_eq!(out.curves.len(), 3);
    }

    #[test]
    fn qutrit_scenario_uses_offset_and_generalized_radii() {
        let spec = ScenarioSpec::new(ScenarioName::QutritHs, 3_000);
        let out = run(&spec).unwrap();
        assert_eq!(out.report.offset, 0.435);
        // Two-qutrit HS radii stay small.
        assert!(out.report.max_radius_seen < 0.58);
        assert!(out
            .curves
            .iter()
            .any(|(n, _)| n == "quasi_antidiagonal"));
    }

    #[test]
    fn qubit_qutrit_emits_three_curves_with_reversal() {
        let spec = ScenarioSpec::new(ScenarioName::QubitQutritHs, 5_000);
        let out = run(&spec).unwrap();
        let names: Vec<&str> = out.curves.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            ["diagonal", "antidiagonal", "antidiagonal_reversed"]
        );
        let anti = &out.curves[1].1;
        let rev = &out.curves[2].1;
        let k = 30;
        assert_eq!(anti.probabilities[k], rev.probabilities[99 - k]);
        assert_eq!(anti.counts[k], rev.counts[99 - k]);
    }

    #[test]
    fn artifacts_written_and_reloadable() {
        let dir = tempfile::tempdir().unwrap();
        let spec = ScenarioSpec::new(ScenarioName::XHs, 5_000);
        let out = run(&spec).unwrap();
        write_artifacts(&out, dir.path()).unwrap();
        let reloaded =
            JointRadialHistogram::read_counts_csv(dir.path(), 1.0).unwrap();
        assert_eq!(reloaded, out.histogram);
        let text = fs::read_to_string(dir.path().join("report.json")).unwrap();
        let parsed: ScenarioReport = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, out.report);
        assert!(dir.path().join("curve_diagonal.csv").exists());
        assert!(dir.path().join("curve_antidiagonal.csv").exists());
        assert!(dir.path().join("curve_half_section.csv").exists());
    }
}
