//! Joint-radius binning, curve extraction, and data-driven crossover
//! estimation.
//!
//! The scans discretize sampled radius pairs into an `nbins x nbins`
//! (default 100x100) pair of integer count matrices, one for all samples and
//! one for the separable subset. Bin `i` covers `[i/n, (i+1)/n) * scale` and
//! is attributed the midpoint `(i + 1/2)/n * scale`. The boundary value
//! `r = scale` clamps into the top bin.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radii::RadiusPair;

#[derive(Debug, Error)]
pub enum HistogramError {
    #[error("radius pair ({r_a}, {r_b}) outside [0, {scale}]")]
    OutOfRange { r_a: f64, r_b: f64, scale: f64 },
    #[error("histogram shapes differ: {0} vs {1} bins")]
    ShapeMismatch(usize, usize),
    #[error("no crossing of the two curves below the anchor")]
    NoCrossing,
    #[error("need at least two samples with nonzero variance")]
    InsufficientData,
    #[error("curve data is empty or entirely undefined")]
    NoData,
    #[error("malformed count matrix: {0}")]
    BadCsv(String),
}

/// Paired total/separable count matrices over binned `(r_A, r_B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointRadialHistogram {
    nbins: usize,
    radius_scale: f64,
    total: Vec<u64>,
    separable: Vec<u64>,
}

/// One-dimensional cross-section of a histogram: per-point midpoints,
/// estimated probabilities (`None` where the total count is zero), and total
/// counts for error bars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEstimate {
    pub abscissae: Vec<f64>,
    pub probabilities: Vec<Option<f64>>,
    pub counts: Vec<u64>,
}

/// Marginal counts over one axis plus the per-bin separable/total ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalEstimate {
    pub abscissae: Vec<f64>,
    pub totals: Vec<u64>,
    pub separables: Vec<u64>,
    pub ratios: Vec<Option<f64>>,
}

/// Axis selector for marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    RA,
    RB,
}

impl JointRadialHistogram {
    pub fn new(nbins: usize, radius_scale: f64) -> Self {
        assert!(nbins > 0 && radius_scale > 0.0);
        Self {
            nbins,
            radius_scale,
            total: vec![0; nbins * nbins],
            separable: vec![0; nbins * nbins],
        }
    }

    pub fn nbins(&self) -> usize {
        self.nbins
    }

    pub fn radius_scale(&self) -> f64 {
        self.radius_scale
    }

    pub fn midpoint(&self, bin: usize) -> f64 {
        (bin as f64 + 0.5) / self.nbins as f64 * self.radius_scale
    }

    fn bin_of(&self, r: f64) -> usize {
        let raw = (r / self.radius_scale * self.nbins as f64) as usize;
        raw.min(self.nbins - 1)
    }

    pub fn total_at(&self, i: usize, j: usize) -> u64 {
        self.total[i * self.nbins + j]
    }

    pub fn separable_at(&self, i: usize, j: usize) -> u64 {
        self.separable[i * self.nbins + j]
    }

    /// Probability estimate at a bin, `None` when no samples landed there.
    pub fn probability_at(&self, i: usize, j: usize) -> Option<f64> {
        let t = self.total_at(i, j);
        (t > 0).then(|| self.separable_at(i, j) as f64 / t as f64)
    }

    pub fn grand_total(&self) -> u64 {
        self.total.iter().sum()
    }

    pub fn grand_separable(&self) -> u64 {
        self.separable.iter().sum()
    }

    /// Record one sample.
    pub fn accumulate(&mut self, p: &RadiusPair) -> Result<(), HistogramError> {
        let in_range = |r: f64| (0.0..=self.radius_scale).contains(&r);
        if !in_range(p.r_a) || !in_range(p.r_b) {
            return Err(HistogramError::OutOfRange {
                r_a: p.r_a,
                r_b: p.r_b,
                scale: self.radius_scale,
            });
        }
        let idx = self.bin_of(p.r_a) * self.nbins + self.bin_of(p.r_b);
        self.total[idx] += 1;
        if p.separable {
            self.separable[idx] += 1;
        }
        Ok(())
    }

    /// Entrywise sum of two histograms.
    pub fn merge(a: &Self, b: &Self) -> Result<Self, HistogramError> {
        let mut out = a.clone();
        out.merge_from(b)?;
        Ok(out)
    }

    pub fn merge_from(&mut self, other: &Self) -> Result<(), HistogramError> {
        if self.nbins != other.nbins || self.radius_scale != other.radius_scale {
            return Err(HistogramError::ShapeMismatch(self.nbins, other.nbins));
        }
        for (t, o) in self.total.iter_mut().zip(&other.total) {
            *t += o;
        }
        for (s, o) in self.separable.iter_mut().zip(&other.separable) {
            *s += o;
        }
        Ok(())
    }

    fn curve_from_bins(&self, bins: impl Iterator<Item = (f64, usize, usize)>) -> CurveEstimate {
        let mut abscissae = Vec::new();
        let mut probabilities = Vec::new();
        let mut counts = Vec::new();
        for (x, i, j) in bins {
            abscissae.push(x);
            probabilities.push(self.probability_at(i, j));
            counts.push(self.total_at(i, j));
        }
        CurveEstimate {
            abscissae,
            probabilities,
            counts,
        }
    }

    /// Separability probability along `r_A = r_B` (bins `(i, i)`).
    pub fn diagonal_curve(&self) -> CurveEstimate {
        self.curve_from_bins((0..self.nbins).map(|i| (self.midpoint(i), i, i)))
    }

    /// Separability probability along `r_A + r_B = 1` (bins `(i, n-1-i)`,
    /// so the midpoints sum exactly to the scale).
    pub fn antidiagonal_curve(&self) -> CurveEstimate {
        self.curve_from_bins((0..self.nbins).map(|i| (self.midpoint(i), i, self.nbins - 1 - i)))
    }

    /// Quasi-antidiagonal for an offset `c`: bins `(i, round(c n) - 1 - i)`,
    /// pairing midpoints that sum to about `c * scale`.
    pub fn quasi_antidiagonal_curve(&self, c: f64) -> CurveEstimate {
        let top = (c * self.nbins as f64).round() as isize - 1;
        self.curve_from_bins((0..self.nbins).filter_map(|i| {
            let j = top - i as isize;
            (0..self.nbins as isize)
                .contains(&j)
                .then(|| (self.midpoint(i), i, j as usize))
        }))
    }

    /// Fixed-`r_B` section: bins `(i, j)` over all `i` (j = n/2 realizes the
    /// `r_B = 1/2` sections up to bin quantization).
    pub fn column_curve(&self, j: usize) -> CurveEstimate {
        assert!(j < self.nbins);
        self.curve_from_bins((0..self.nbins).map(|i| (self.midpoint(i), i, j)))
    }

    /// Fixed-`r_A` section.
    pub fn row_curve(&self, i: usize) -> CurveEstimate {
        assert!(i < self.nbins);
        self.curve_from_bins((0..self.nbins).map(|j| (self.midpoint(j), i, j)))
    }

    /// Per-bin totals and separable totals summed over the other axis.
    pub fn marginal(&self, axis: Axis) -> MarginalEstimate {
        let mut totals = vec![0u64; self.nbins];
        let mut separables = vec![0u64; self.nbins];
        for i in 0..self.nbins {
            for j in 0..self.nbins {
                let k = match axis {
                    Axis::RA => i,
                    Axis::RB => j,
                };
                totals[k] += self.total_at(i, j);
                separables[k] += self.separable_at(i, j);
            }
        }
        let ratios = totals
            .iter()
            .zip(&separables)
            .map(|(&t, &s)| (t > 0).then(|| s as f64 / t as f64))
            .collect();
        MarginalEstimate {
            abscissae: (0..self.nbins).map(|i| self.midpoint(i)).collect(),
            totals,
            separables,
            ratios,
        }
    }

    /// Write `total.csv` and `separable.csv` (one row per `r_A` bin, comma
    /// separated integer counts) into `dir`.
    pub fn write_counts_csv(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        for (name, data) in [("total.csv", &self.total), ("separable.csv", &self.separable)] {
            let mut out = String::new();
            for i in 0..self.nbins {
                let row = &data[i * self.nbins..(i + 1) * self.nbins];
                let line = row
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&line);
                out.push('\n');
            }
            fs::write(dir.join(name), out)?;
        }
        Ok(())
    }

    /// Rebuild a histogram from `total.csv` / `separable.csv` written by
    /// [`JointRadialHistogram::write_counts_csv`].
    pub fn read_counts_csv(dir: &Path, radius_scale: f64) -> Result<Self, HistogramError> {
        let parse = |name: &str| -> Result<Vec<Vec<u64>>, HistogramError> {
            let text = fs::read_to_string(dir.join(name))
                .map_err(|e| HistogramError::BadCsv(format!("{name}: {e}")))?;
            text.lines()
                .map(|line| {
                    line.split(',')
                        .map(|tok| {
                            tok.trim()
                                .parse::<u64>()
                                .map_err(|e| HistogramError::BadCsv(format!("{name}: {e}")))
                        })
                        .collect()
                })
                .collect()
        };
        let total_rows = parse("total.csv")?;
        let sep_rows = parse("separable.csv")?;
        let nbins = total_rows.len();
        if nbins == 0 || sep_rows.len() != nbins {
            return Err(HistogramError::BadCsv("row count mismatch".into()));
        }
        let flatten = |rows: Vec<Vec<u64>>| -> Result<Vec<u64>, HistogramError> {
            let mut flat = Vec::with_capacity(nbins * nbins);
            for row in rows {
                if row.len() != nbins {
                    return Err(HistogramError::BadCsv("ragged row".into()));
                }
                flat.extend(row);
            }
            Ok(flat)
        };
        let total = flatten(total_rows)?;
        let separable = flatten(sep_rows)?;
        if total
            .iter()
            .zip(&separable)
            .any(|(t, s)| s > t)
        {
            return Err(HistogramError::BadCsv(
                "separable count exceeds total count".into(),
            ));
        }
        Ok(Self {
            nbins,
            radius_scale,
            total,
            separable,
        })
    }
}

impl CurveEstimate {
    /// Number of points with at least one sample.
    pub fn defined_points(&self) -> usize {
        self.probabilities.iter().flatten().count()
    }

    /// Write `midpoint,probability,count` rows; undefined probabilities are
    /// left as an empty field.
    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut out = String::from("midpoint,probability,count\n");
        for k in 0..self.abscissae.len() {
            match self.probabilities[k] {
                Some(p) => {
                    let _ = writeln!(out, "{},{},{}", self.abscissae[k], p, self.counts[k]);
                }
                None => {
                    let _ = writeln!(out, "{},,{}", self.abscissae[k], self.counts[k]);
                }
            }
        }
        fs::write(path, out)
    }
}

// ----------------------------------------------------------------------
// Crossover estimation
// ----------------------------------------------------------------------

/// Raw crossover estimate: the largest abscissa strictly below `anchor`
/// (1/2 for the qubit scans) where the linear interpolant of
/// `anti - diag` between adjacent defined points crosses zero. Scanning runs
/// from the anchor downward so noise-induced crossings at small radii are
/// ignored. Returns `NoCrossing` when the difference has constant sign.
///
/// This estimator interpolates raw per-bin values and is only meaningful
/// when per-bin noise is small against the curve gap; scan reports use
/// [`fit_crossover`].
pub fn estimate_crossover(
    diag: &CurveEstimate,
    anti: &CurveEstimate,
    anchor: f64,
) -> Result<f64, HistogramError> {
    let pts: Vec<(f64, f64)> = join_defined(diag, anti)
        .into_iter()
        .filter_map(|(x, (pd, _), (pa, _))| (x < anchor).then_some((x, pa - pd)))
        .collect();
    for w in pts.windows(2).rev() {
        let (x0, d0) = w[0];
        let (x1, d1) = w[1];
        if d0 == 0.0 {
            return Ok(x0);
        }
        if d0 * d1 < 0.0 {
            return Ok(x0 + (x1 - x0) * d0 / (d0 - d1));
        }
    }
    Err(HistogramError::NoCrossing)
}

/// Join two curves on (nearly) equal abscissae, keeping points where both
/// have at least one sample. Yields `(x, (p_diag, n_diag), (p_anti, n_anti))`.
fn join_defined(
    a: &CurveEstimate,
    b: &CurveEstimate,
) -> Vec<(f64, (f64, u64), (f64, u64))> {
    let mut out = Vec::new();
    let mut j = 0usize;
    for (k, &x) in a.abscissae.iter().enumerate() {
        while j < b.abscissae.len() && b.abscissae[j] < x - 1e-9 {
            j += 1;
        }
        if j >= b.abscissae.len() || (b.abscissae[j] - x).abs() > 1e-9 {
            continue;
        }
        if let (Some(pa), Some(pb)) = (a.probabilities[k], b.probabilities[j]) {
            out.push((x, (pa, a.counts[k]), (pb, b.counts[j])));
        }
    }
    out
}

/// Result of the fitted crossover estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverFit {
    /// Abscissa where the fitted difference crosses from positive to
    /// negative (descending root closest to the anchor).
    pub root: f64,
    /// Delta-method standard error of the root.
    pub se: f64,
    /// Most negative z-score of the fitted difference beyond the root; the
    /// detection significance.
    pub min_z: f64,
    /// Points entering the fit.
    pub points: usize,
}

/// z-score threshold below which a negative excursion of `anti - diag`
/// counts as a detected crossover.
pub const CROSSOVER_GATE_Z: f64 = 3.0;

/// Noise-robust crossover estimate.
///
/// Per-bin curve noise at attainable sample counts is larger than the
/// diag/anti gap near the anchor, so instead of interpolating raw bins this
/// fits a weighted polynomial (degree `degree`, weights from the binomial
/// variance of each bin pair) to `anti - diag` over `window` and reports the
/// descending zero of the fit closest to the anchor. A crossover is claimed
/// only when the fitted difference is significantly negative somewhere
/// beyond the root (z <= -[`CROSSOVER_GATE_Z`]); otherwise `NoCrossing`.
pub fn fit_crossover(
    diag: &CurveEstimate,
    anti: &CurveEstimate,
    window: (f64, f64),
    degree: usize,
    min_count: u64,
) -> Result<CrossoverFit, HistogramError> {
    assert!(degree >= 1 && degree <= 4);
    let anchor = window.1;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for (x, (pd, nd), (pa, na)) in join_defined(diag, anti) {
        if x < window.0 || x >= anchor || nd < min_count || na < min_count {
            continue;
        }
        let var = |p: f64, n: u64| (p * (1.0 - p) / n as f64).max(0.25 / (n as f64 * n as f64));
        let v = var(pd, nd) + var(pa, na);
        xs.push(x - anchor);
        ys.push(pa - pd);
        ws.push(1.0 / v);
    }
    let npts = xs.len();
    if npts < degree + 2 {
        return Err(HistogramError::NoData);
    }

    // Weighted least squares in the monomial basis of (x - anchor).
    let m = degree + 1;
    let mut xtx = nalgebra::DMatrix::<f64>::zeros(m, m);
    let mut xty = nalgebra::DVector::<f64>::zeros(m);
    for k in 0..npts {
        let mut basis = vec![1.0; m];
        for p in 1..m {
            basis[p] = basis[p - 1] * xs[k];
        }
        for i in 0..m {
            for j in 0..m {
                xtx[(i, j)] += ws[k] * basis[i] * basis[j];
            }
            xty[i] += ws[k] * basis[i] * ys[k];
        }
    }
    let xtx_inv = xtx
        .clone()
        .try_inverse()
        .ok_or(HistogramError::NoData)?;
    let coef = &xtx_inv * &xty;

    let eval = |u: f64| -> f64 {
        let mut acc = 0.0;
        let mut b = 1.0;
        for i in 0..m {
            acc += coef[i] * b;
            b *= u;
        }
        acc
    };
    let se_at = |u: f64| -> f64 {
        let mut basis = vec![1.0; m];
        for p in 1..m {
            basis[p] = basis[p - 1] * u;
        }
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                acc += basis[i] * xtx_inv[(i, j)] * basis[j];
            }
        }
        acc.max(0.0).sqrt()
    };

    // Scan the fitted polynomial from the anchor downward for its first
    // descending (+ -> -) zero.
    let lo = window.0 - anchor;
    let steps = 4000;
    let du = -lo / steps as f64;
    let mut root = None;
    let mut prev_u = 0.0;
    let mut prev_v = eval(0.0);
    for s in 1..=steps {
        let u = -(s as f64) * du;
        let v = eval(u);
        // Moving from u (more negative) to prev_u: descending root means
        // v > 0 at u and < 0 at prev_u.
        if v > 0.0 && prev_v <= 0.0 {
            let t = v / (v - prev_v);
            root = Some(u + t * (prev_u - u));
            break;
        }
        prev_u = u;
        prev_v = v;
    }
    let Some(u_root) = root else {
        return Err(HistogramError::NoCrossing);
    };

    // Significance: the fit must be convincingly negative somewhere between
    // the root and the anchor.
    let mut min_z = f64::INFINITY;
    let zsteps = 200;
    for s in 0..=zsteps {
        let u = u_root * (s as f64) / zsteps as f64; // from u_root up to 0
        let se = se_at(u);
        if se > 0.0 {
            min_z = min_z.min(eval(u) / se);
        }
    }
    if min_z > -CROSSOVER_GATE_Z {
        return Err(HistogramError::NoCrossing);
    }

    // Delta-method standard error of the root: se(f(u*)) / |f'(u*)|.
    let h = 1e-5;
    let deriv = (eval(u_root + h) - eval(u_root - h)) / (2.0 * h);
    let se = if deriv.abs() > 0.0 {
        se_at(u_root) / deriv.abs()
    } else {
        f64::INFINITY
    };
    Ok(CrossoverFit {
        root: u_root + anchor,
        se,
        min_z,
        points: npts,
    })
}

// ----------------------------------------------------------------------
// Correlation
// ----------------------------------------------------------------------

/// One-pass (Welford-style) accumulator for the Pearson correlation of
/// radius pairs, mergeable across workers.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct CorrelationAccumulator {
    n: u64,
    mean_a: f64,
    mean_b: f64,
    m2_a: f64,
    m2_b: f64,
    cov: f64,
}

impl CorrelationAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r_a: f64, r_b: f64) {
        self.n += 1;
        let n = self.n as f64;
        let da = r_a - self.mean_a;
        let db = r_b - self.mean_b;
        self.mean_a += da / n;
        self.mean_b += db / n;
        // da uses the old mean, (r - new_mean) the updated one.
        self.m2_a += da * (r_a - self.mean_a);
        self.m2_b += db * (r_b - self.mean_b);
        self.cov += da * (r_b - self.mean_b);
    }

    pub fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let (n1, n2) = (self.n as f64, other.n as f64);
        let n = n1 + n2;
        let da = other.mean_a - self.mean_a;
        let db = other.mean_b - self.mean_b;
        self.m2_a += other.m2_a + da * da * n1 * n2 / n;
        self.m2_b += other.m2_b + db * db * n1 * n2 / n;
        self.cov += other.cov + da * db * n1 * n2 / n;
        self.mean_a += da * n2 / n;
        self.mean_b += db * n2 / n;
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn correlation(&self) -> Result<f64, HistogramError> {
        if self.n < 2 || self.m2_a <= 0.0 || self.m2_b <= 0.0 {
            return Err(HistogramError::InsufficientData);
        }
        Ok(self.cov / (self.m2_a * self.m2_b).sqrt())
    }
}

/// Pearson correlation of a stream of radius pairs, optionally restricted to
/// the separable subset.
pub fn sample_correlation<I>(pairs: I, separable_only: bool) -> Result<f64, HistogramError>
where
    I: IntoIterator<Item = RadiusPair>,
{
    let mut acc = CorrelationAccumulator::new();
    for p in pairs {
        if !separable_only || p.separable {
            acc.push(p.r_a, p.r_b);
        }
    }
    acc.correlation()
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, HistogramError> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return Err(HistogramError::InsufficientData);
    }
    let ranks = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).unwrap());
        let mut out = vec![0.0; v.len()];
        let mut s = 0;
        while s < idx.len() {
            let mut e = s;
            while e + 1 < idx.len() && v[idx[e + 1]] == v[idx[s]] {
                e += 1;
            }
            let rank = (s + e) as f64 / 2.0 + 1.0;
            for &k in &idx[s..=e] {
                out[k] = rank;
            }
            s = e + 1;
        }
        out
    };
    let ra = ranks(xs);
    let rb = ranks(ys);
    sample_correlation(
        ra.iter().zip(&rb).map(|(&r_a, &r_b)| RadiusPair {
            r_a,
            r_b,
            separable: true,
        }),
        false,
    )
}
