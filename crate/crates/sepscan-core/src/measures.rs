//! Seeded random generation of density matrices under each measure used in
//! the scans.
//!
//! Determinism contract: a `(seed, stream)` pair fully determines the sample
//! sequence. Every sampler owns a ChaCha8 generator seeded with `seed` on
//! stream `stream`; distinct streams are statistically independent, so
//! parallel workers can each own one stream.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qstate::{DensityMatrix, XStateParams};

/// Maximum determinant of any 4x4 density matrix, attained by the maximally
/// mixed state: (1/4)^4. Used as the accept-reject envelope for the induced
/// X-state measure.
pub const X_DET_MAX: f64 = 1.0 / 256.0;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("invalid measure spec: {0}")]
    InvalidSpec(String),
}

/// Which random ensemble to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureFamily {
    /// `G G^H / tr`, `G` an NxK complex Ginibre matrix. K=N is the
    /// Hilbert-Schmidt measure; K<N gives rank-deficient boundary states;
    /// K>N weights by `det(rho)^(K-N)`.
    GinibreInduced,
    /// `G G^T / tr` with a real NxN Ginibre matrix (two-rebit states).
    RealHs,
    /// `(I+U) G G^H (I+U^H) / tr` with Haar-random U (minimal monotone
    /// measure).
    Bures,
    /// Lebesgue (Hilbert-Schmidt) measure on the seven-dimensional X-state
    /// body.
    XFlat,
    /// X-state measure with density proportional to `det(rho)^(K-4)`
    /// relative to the flat one.
    XInduced,
}

/// Full description of a sampling stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub family: MeasureFamily,
    /// Total Hilbert-space dimension.
    pub n: usize,
    /// Induced-measure environment dimension (ignored by RealHs/Bures/XFlat).
    pub k: usize,
    pub split: (usize, usize),
    pub seed: u64,
    pub stream: u64,
}

impl MeasureSpec {
    pub fn validate(&self) -> Result<(), MeasureError> {
        let (da, db) = self.split;
        if da * db != self.n {
            return Err(MeasureError::InvalidSpec(format!(
                "split {da}x{db} inconsistent with N={}",
                self.n
            )));
        }
        match self.family {
            MeasureFamily::GinibreInduced => {
                if self.k == 0 {
                    return Err(MeasureError::InvalidSpec("induced measure needs K >= 1".into()));
                }
            }
            MeasureFamily::RealHs | MeasureFamily::Bures => {
                if self.n != 4 {
                    return Err(MeasureError::InvalidSpec(format!(
                        "{:?} sampling is defined here for N=4 only, got N={}",
                        self.family, self.n
                    )));
                }
            }
            MeasureFamily::XFlat | MeasureFamily::XInduced => {
                if self.n != 4 || self.split != (2, 2) {
                    return Err(MeasureError::InvalidSpec(
                        "X-state measures require N=4 with split (2,2)".into(),
                    ));
                }
                if self.family == MeasureFamily::XInduced && self.k < 4 {
                    return Err(MeasureError::InvalidSpec(
                        "induced X-state measure requires K >= N = 4".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Draw statistics, reported by the CLI alongside scan artifacts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    pub accepted: u64,
    /// Uniform-disk proposals rejected while placing the X off-diagonals.
    pub disk_rejects: u64,
    /// Whole X-state proposals rejected by the det^(K-4) thinning step.
    pub det_rejects: u64,
}

impl SampleStats {
    /// Accepted fraction of det-thinning proposals (1.0 for flat sampling).
    pub fn det_acceptance(&self) -> f64 {
        let proposals = self.accepted + self.det_rejects;
        if proposals == 0 {
            1.0
        } else {
            self.accepted as f64 / proposals as f64
        }
    }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Lower-triangle accumulation of `W = G G^H`, mirrored to the upper half.
fn gram(g: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (n, k) = (g.nrows(), g.ncols());
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = Complex64::ZERO;
            for t in 0..k {
                acc += g[(i, t)] * g[(j, t)].conj();
            }
            w[(i, j)] = acc;
            if i != j {
                w[(j, i)] = acc.conj();
            }
        }
    }
    w
}

fn normalize_trace(mut w: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let tr: f64 = (0..w.nrows()).map(|i| w[(i, i)].re).sum();
    w /= Complex64::new(tr, 0.0);
    w
}

/// Sampler for the matrix-valued families (GinibreInduced, RealHs, Bures).
#[derive(Debug, Clone)]
pub struct MatrixSampler {
    spec: MeasureSpec,
    rng: ChaCha8Rng,
    stats: SampleStats,
}

impl MatrixSampler {
    pub fn new(spec: MeasureSpec) -> Result<Self, MeasureError> {
        spec.validate()?;
        match spec.family {
            MeasureFamily::GinibreInduced | MeasureFamily::RealHs | MeasureFamily::Bures => {}
            other => {
                return Err(MeasureError::InvalidSpec(format!(
                    "{other:?} produces X-state parameters; use XStateSampler"
                )))
            }
        }
        let rng = spec.rng();
        Ok(Self {
            spec,
            rng,
            stats: SampleStats::default(),
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn stats(&self) -> SampleStats {
        self.stats
    }

    pub fn sample(&mut self) -> DensityMatrix {
        self.stats.accepted += 1;
        let mat = match self.spec.family {
            MeasureFamily::GinibreInduced => self.sample_induced(),
            MeasureFamily::RealHs => self.sample_real_hs(),
            MeasureFamily::Bures => self.sample_bures(),
            _ => unreachable!("checked in new"),
        };
        DensityMatrix::from_matrix_unchecked(mat, Some(self.spec.split))
    }

    fn sample_induced(&mut self) -> DMatrix<Complex64> {
        let (n, k) = (self.spec.n, self.spec.k);
        let g = DMatrix::from_fn(n, k, |_, _| complex_normal(&mut self.rng));
        normalize_trace(gram(&g))
    }

    fn sample_real_hs(&mut self) -> DMatrix<Complex64> {
        let n = self.spec.n;
        let g = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(self.rng.sample(StandardNormal), 0.0)
        });
        normalize_trace(gram(&g))
    }

    /// Osipov-Sommers-Zyczkowski construction: `(I+U) G G^H (I+U^H)` with
    /// `U` Haar-random. The Haar unitary comes from QR-factorizing an
    /// independent Ginibre matrix and rotating each column by the phase of
    /// the corresponding diagonal entry of R (without this phase correction
    /// the Q factor is not Haar distributed).
    fn sample_bures(&mut self) -> DMatrix<Complex64> {
        let n = self.spec.n;
        let g = DMatrix::from_fn(n, n, |_, _| complex_normal(&mut self.rng));
        let h = DMatrix::from_fn(n, n, |_, _| complex_normal(&mut self.rng));
        let qr = h.qr();
        let r = qr.r();
        let mut u = qr.q();
        for j in 0..n {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                rjj / rjj.norm()
            };
            for i in 0..n {
                u[(i, j)] *= phase;
            }
        }
        let b = (DMatrix::identity(n, n) + u) * g;
        normalize_trace(gram(&b))
    }
}

/// Sampler for the X-state families (XFlat, XInduced).
#[derive(Debug, Clone)]
pub struct XStateSampler {
    spec: MeasureSpec,
    rng: ChaCha8Rng,
    stats: SampleStats,
}

impl XStateSampler {
    pub fn new(spec: MeasureSpec) -> Result<Self, MeasureError> {
        spec.validate()?;
        match spec.family {
            MeasureFamily::XFlat | MeasureFamily::XInduced => {}
            other => {
                return Err(MeasureError::InvalidSpec(format!(
                    "{other:?} produces matrices; use MatrixSampler"
                )))
            }
        }
        let rng = spec.rng();
        Ok(Self {
            spec,
            rng,
            stats: SampleStats::default(),
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn stats(&self) -> SampleStats {
        self.stats
    }

    pub fn sample(&mut self) -> XStateParams {
        match self.spec.family {
            MeasureFamily::XFlat => {
                self.stats.accepted += 1;
                self.sample_flat()
            }
            MeasureFamily::XInduced => self.sample_induced(),
            _ => unreachable!("checked in new"),
        }
    }

    /// One draw from the flat (Hilbert-Schmidt) measure on the X-state body.
    ///
    /// Lebesgue measure on the body factorizes: integrating out the
    /// off-diagonals leaves the diagonal with density proportional to the
    /// product of the two disk areas, pi*ad * pi*bc, i.e. Dirichlet(2,2,2,2);
    /// conditionally on the diagonal, z14 and z23 are uniform on disks of
    /// radius sqrt(ad) and sqrt(bc). Sampling those two factors directly is
    /// exact and needs no body-level rejection.
    fn sample_flat(&mut self) -> XStateParams {
        // Dirichlet(2,2,2,2) via Gamma(2) = -ln(u1 u2).
        let mut gam = [0.0f64; 4];
        for gi in gam.iter_mut() {
            let u1: f64 = self.rng.random();
            let u2: f64 = self.rng.random();
            *gi = -(u1 * u2).ln();
        }
        let total: f64 = gam.iter().sum();
        let (a, b, c, d) = (
            gam[0] / total,
            gam[1] / total,
            gam[2] / total,
            gam[3] / total,
        );
        let z14 = self.uniform_disk((a * d).sqrt());
        let z23 = self.uniform_disk((b * c).sqrt());
        XStateParams {
            a,
            b,
            c,
            d,
            z14,
            z23,
        }
    }

    fn uniform_disk(&mut self, radius: f64) -> Complex64 {
        loop {
            let x: f64 = 2.0 * self.rng.random::<f64>() - 1.0;
            let y: f64 = 2.0 * self.rng.random::<f64>() - 1.0;
            if x * x + y * y <= 1.0 {
                return Complex64::new(radius * x, radius * y);
            }
            self.stats.disk_rejects += 1;
        }
    }

    /// Accept-reject thinning of the flat sampler with acceptance
    /// probability `(det(rho)/X_DET_MAX)^(K-4)`. K=4 short-circuits to the
    /// flat sampler so the two produce identical streams.
    fn sample_induced(&mut self) -> XStateParams {
        if self.spec.k == 4 {
            self.stats.accepted += 1;
            return self.sample_flat();
        }
        let exponent = (self.spec.k - 4) as i32;
        loop {
            let x = self.sample_flat();
            let weight = (x.det() / X_DET_MAX).powi(exponent);
            let u: f64 = self.rng.random();
            if u < weight {
                self.stats.accepted += 1;
                return x;
            }
            self.stats.det_rejects += 1;
        }
    }
}
