//! Density matrices, bipartite reductions, and the PPT separability test.
//!
//! Basis ordering is row-major tensor order: for a split `(dA, dB)` the
//! composite basis index is `i = iA * dB + iB`. All partial trace and partial
//! transpose bookkeeping below uses this convention and is pinned against
//! hand-built 4x4 cases in the tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::eigen::HermitianEigs;

/// Default tolerance for Hermiticity and unit-trace checks.
pub const TOL_HERMITIAN: f64 = 1e-12;
/// Default tolerance for positive semidefiniteness and the PPT test.
pub const TOL_PSD: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("not Hermitian: worst asymmetry {max_violation:.3e}")]
    NotHermitian { max_violation: f64 },
    #[error("trace is not 1: got {trace:.12}")]
    NotUnitTrace { trace: f64 },
    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("no bipartite split metadata on this state")]
    NoSplit,
    #[error("split {d_a}x{d_b} does not match dimension {dim}")]
    BadSplit { d_a: usize, d_b: usize, dim: usize },
    #[error("expected dimension {expected}, got {got}")]
    WrongDim { expected: usize, got: usize },
    #[error("invalid X-state parameters: {0}")]
    InvalidXParams(String),
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A finite-dimensional density matrix: Hermitian, unit trace, positive
/// semidefinite, with optional bipartite split metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
    split: Option<(usize, usize)>,
}

impl DensityMatrix {
    /// Validate a candidate matrix. Hermiticity and trace are checked at
    /// `tol`; positivity at `max(tol, TOL_PSD)` (eigen-solvers on small
    /// matrices keep errors well below 1e-10, but not below 1e-12). The trace
    /// is renormalized to exactly 1 when it is within `tol` of 1.
    pub fn validate(mat: DMatrix<Complex64>, tol: f64) -> Result<Self, StateError> {
        Self::validate_with_split(mat, None, tol)
    }

    /// Like [`DensityMatrix::validate`] but attaches split metadata.
    pub fn validate_with_split(
        mut mat: DMatrix<Complex64>,
        split: Option<(usize, usize)>,
        tol: f64,
    ) -> Result<Self, StateError> {
        let n = mat.nrows();
        if mat.ncols() != n {
            return Err(StateError::NotSquare {
                rows: n,
                cols: mat.ncols(),
            });
        }
        if let Some((da, db)) = split {
            if da * db != n {
                return Err(StateError::BadSplit {
                    d_a: da,
                    d_b: db,
                    dim: n,
                });
            }
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max(mat[(i, i)].im.abs());
            for j in i + 1..n {
                let diff = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                worst = worst.max(diff);
            }
        }
        if worst > tol {
            return Err(StateError::NotHermitian {
                max_violation: worst,
            });
        }
        let trace: f64 = (0..n).map(|i| mat[(i, i)].re).sum();
        if (trace - 1.0).abs() > tol {
            return Err(StateError::NotUnitTrace { trace });
        }
        mat /= Complex64::new(trace, 0.0);
        let min_ev = HermitianEigs::new().min_eigenvalue(&mat);
        if min_ev < -TOL_PSD.max(tol) {
            return Err(StateError::NotPositive {
                min_eigenvalue: min_ev,
            });
        }
        Ok(Self { mat, split })
    }

    /// Wrap a matrix that is a valid density matrix by construction
    /// (e.g. `G G^H / tr` from a sampler). No checks are performed.
    pub fn from_matrix_unchecked(mat: DMatrix<Complex64>, split: Option<(usize, usize)>) -> Self {
        Self { mat, split }
    }

    /// The maximally mixed state `I/n`.
    pub fn maximally_mixed(n: usize, split: Option<(usize, usize)>) -> Self {
        let mat = DMatrix::from_diagonal_element(n, n, Complex64::new(1.0 / n as f64, 0.0));
        Self { mat, split }
    }

    /// Diagonal state from real populations (must sum to 1; unchecked).
    pub fn from_diagonal(diag: &[f64], split: Option<(usize, usize)>) -> Self {
        let n = diag.len();
        let mat = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        Self { mat, split }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn split(&self) -> Option<(usize, usize)> {
        self.split
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    fn split_or_err(&self) -> Result<(usize, usize), StateError> {
        self.split.ok_or(StateError::NoSplit)
    }

    /// Reduced state of one subsystem (trace over the other factor).
    pub fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix, StateError> {
        let (da, db) = self.split_or_err()?;
        let mat = match keep {
            Subsystem::A => DMatrix::from_fn(da, da, |ia, ja| {
                (0..db).map(|b| self.mat[(ia * db + b, ja * db + b)]).sum()
            }),
            Subsystem::B => DMatrix::from_fn(db, db, |ib, jb| {
                (0..da).map(|a| self.mat[(a * db + ib, a * db + jb)]).sum()
            }),
        };
        Ok(DensityMatrix { mat, split: None })
    }

    /// Partial transpose of one tensor factor. The output is Hermitian and
    /// trace-preserving but in general not positive.
    pub fn partial_transpose(&self, sub: Subsystem) -> Result<DMatrix<Complex64>, StateError> {
        let (_da, db) = self.split_or_err()?;
        let n = self.dim();
        let mat = match sub {
            Subsystem::B => DMatrix::from_fn(n, n, |r, c| {
                let (ia, ib) = (r / db, r % db);
                let (ja, jb) = (c / db, c % db);
                self.mat[(ia * db + jb, ja * db + ib)]
            }),
            Subsystem::A => DMatrix::from_fn(n, n, |r, c| {
                let (ia, ib) = (r / db, r % db);
                let (ja, jb) = (c / db, c % db);
                self.mat[(ja * db + ib, ia * db + jb)]
            }),
        };
        Ok(mat)
    }

    /// `tr(rho^2)`, in `[1/n, 1]`.
    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Peres-Horodecki test: true iff the partial transpose over B has
    /// minimum eigenvalue >= -tol. Exactly separability for dA*dB <= 6.
    pub fn is_ppt(&self, tol: f64) -> Result<bool, StateError> {
        let pt = self.partial_transpose(Subsystem::B)?;
        Ok(HermitianEigs::new().min_eigenvalue(&pt) >= -tol)
    }

    /// Same verdict as [`DensityMatrix::is_ppt`] (up to round-off exactly at
    /// the threshold), via a Cholesky positive-definiteness probe of
    /// `PT(rho) + tol I` instead of an eigenvalue computation. This is the
    /// sampling-loop fast path; the two routes are cross-checked in tests.
    pub fn is_ppt_fast(&self, tol: f64) -> Result<bool, StateError> {
        let (da, db) = self.split_or_err()?;
        Ok(ppt_shifted_cholesky(&self.mat, da, db, tol))
    }
}

/// Cholesky positive-definiteness probe of `PT_B(mat) + shift I`, without
/// materializing the transposed matrix. `mat` need not be normalized; pass
/// `shift = tol * trace` for an unnormalized Wishart-style matrix.
pub(crate) fn ppt_shifted_cholesky(
    mat: &DMatrix<Complex64>,
    da: usize,
    db: usize,
    shift: f64,
) -> bool {
    let n = da * db;
    debug_assert_eq!(mat.nrows(), n);
    let pt = |r: usize, c: usize| -> Complex64 {
        let (ia, ib) = (r / db, r % db);
        let (ja, jb) = (c / db, c % db);
        mat[(ia * db + jb, ja * db + ib)]
    };
    // In-place complex Cholesky on a stack-ish buffer (n <= 9 in practice).
    let mut l = [Complex64::ZERO; 81];
    debug_assert!(n * n <= l.len());
    for j in 0..n {
        let mut diag = pt(j, j).re + shift;
        for k in 0..j {
            diag -= l[j * n + k].norm_sqr();
        }
        if diag <= 0.0 {
            return false;
        }
        let dsqrt = diag.sqrt();
        l[j * n + j] = Complex64::new(dsqrt, 0.0);
        for i in j + 1..n {
            let mut acc = pt(i, j);
            for k in 0..j {
                acc -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = acc / dsqrt;
        }
    }
    true
}

/// Smallest eigenvalue of a Hermitian matrix. Errors if the input deviates
/// from Hermiticity by more than 1e-10.
pub fn min_eigenvalue(h: &DMatrix<Complex64>) -> Result<f64, StateError> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(StateError::NotSquare {
            rows: n,
            cols: h.ncols(),
        });
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max(h[(i, i)].im.abs());
        for j in i + 1..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    if worst > 1e-10 {
        return Err(StateError::NotHermitian {
            max_violation: worst,
        });
    }
    Ok(HermitianEigs::new().min_eigenvalue(h))
}

/// Parameters of a two-qubit X-state in the basis |00>, |01>, |10>, |11>:
/// diagonal `(a, b, c, d)` plus anti-diagonal corners `z14` at (1,4) and
/// `z23` at (2,3). The eight remaining entries are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub z14: Complex64,
    pub z23: Complex64,
}

impl XStateParams {
    /// Validated constructor: nonnegative diagonal summing to 1 and
    /// positivity `|z14|^2 <= a d`, `|z23|^2 <= b c` (with 1e-12 slack).
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        z14: Complex64,
        z23: Complex64,
    ) -> Result<Self, StateError> {
        const SLACK: f64 = 1e-12;
        if [a, b, c, d].iter().any(|&x| x < -SLACK) {
            return Err(StateError::InvalidXParams(format!(
                "negative diagonal entry in ({a}, {b}, {c}, {d})"
            )));
        }
        let sum = a + b + c + d;
        if (sum - 1.0).abs() > SLACK {
            return Err(StateError::InvalidXParams(format!(
                "diagonal sums to {sum}, not 1"
            )));
        }
        if z14.norm_sqr() > a * d + SLACK {
            return Err(StateError::InvalidXParams(format!(
                "|z14|^2 = {} exceeds a*d = {}",
                z14.norm_sqr(),
                a * d
            )));
        }
        if z23.norm_sqr() > b * c + SLACK {
            return Err(StateError::InvalidXParams(format!(
                "|z23|^2 = {} exceeds b*c = {}",
                z23.norm_sqr(),
                b * c
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            z14,
            z23,
        })
    }

    /// The 4x4 density matrix with split (2,2).
    pub fn to_density(self) -> DensityMatrix {
        let mut mat = DMatrix::zeros(4, 4);
        mat[(0, 0)] = Complex64::new(self.a, 0.0);
        mat[(1, 1)] = Complex64::new(self.b, 0.0);
        mat[(2, 2)] = Complex64::new(self.c, 0.0);
        mat[(3, 3)] = Complex64::new(self.d, 0.0);
        mat[(0, 3)] = self.z14;
        mat[(3, 0)] = self.z14.conj();
        mat[(1, 2)] = self.z23;
        mat[(2, 1)] = self.z23.conj();
        DensityMatrix {
            mat,
            split: Some((2, 2)),
        }
    }

    /// Closed-form PPT test for the X pattern: the partial transpose swaps
    /// the two positivity constraints, so the state is separable iff
    /// `|z14|^2 <= b c` and `|z23|^2 <= a d`.
    pub fn is_separable(&self) -> bool {
        self.z14.norm_sqr() <= self.b * self.c && self.z23.norm_sqr() <= self.a * self.d
    }

    /// Determinant of the density matrix: `(ad - |z14|^2)(bc - |z23|^2)`.
    pub fn det(&self) -> f64 {
        (self.a * self.d - self.z14.norm_sqr()) * (self.b * self.c - self.z23.norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_state() -> DensityMatrix {
        // (|00> + |11>)(<00| + <11|) / 2
        let mut m = DMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = c(0.5, 0.0);
        }
        DensityMatrix::validate_with_split(m, Some((2, 2)), TOL_HERMITIAN).unwrap()
    }

    fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let g = DMatrix::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let w = &g * g.adjoint();
        let tr: f64 = (0..n).map(|i| w[(i, i)].re).sum();
        w / c(tr, 0.0)
    }

    // ------------------------------------------------------------------
    // validate
    // ------------------------------------------------------------------

    #[test]
    fn validate_maximally_mixed() {
        let m = DMatrix::from_diagonal_element(4, 4, c(0.25, 0.0));
        let rho = DensityMatrix::validate(m, TOL_HERMITIAN).unwrap();
        let tr: f64 = (0..4).map(|i| rho.matrix()[(i, i)].re).sum();
        assert!((tr - 1.0).abs() < 1e-15);
        let evs = crate::eigen::hermitian_eigenvalues(rho.matrix());
        assert!((evs[0] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn validate_pure_boundary() {
        let rho = DensityMatrix::validate(
            DMatrix::from_fn(4, 4, |i, j| {
                if i == 0 && j == 0 {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            }),
            TOL_HERMITIAN,
        )
        .unwrap();
        let evs = crate::eigen::hermitian_eigenvalues(rho.matrix());
        assert!(evs[0].abs() < 1e-14);
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            if i != j {
                return c(0.0, 0.0);
            }
            c([1.5, -0.5, 0.0, 0.0][i], 0.0)
        });
        match DensityMatrix::validate(m, TOL_HERMITIAN) {
            Err(StateError::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.5).abs() < 1e-12);
            }
            other => panic!("expected NotPositive, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_non_hermitian_and_bad_trace() {
        let mut m = DMatrix::from_diagonal_element(2, 2, c(0.5, 0.0));
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::validate(m, TOL_HERMITIAN),
            Err(StateError::NotHermitian { .. })
        ));
        let m = DMatrix::from_diagonal_element(2, 2, c(0.6, 0.0));
        assert!(matches!(
            DensityMatrix::validate(m, TOL_HERMITIAN),
            Err(StateError::NotUnitTrace { .. })
        ));
    }

    #[test]
    fn validate_renormalizes_trace_within_tol() {
        let eps = 4e-13;
        let m = DMatrix::from_diagonal_element(2, 2, c(0.5 + eps / 2.0, 0.0));
        let rho = DensityMatrix::validate(m, TOL_HERMITIAN).unwrap();
        let tr: f64 = (0..2).map(|i| rho.matrix()[(i, i)].re).sum();
        assert!((tr - 1.0).abs() < 1e-16);
    }

    // ------------------------------------------------------------------
    // partial_trace
    // ------------------------------------------------------------------

    #[test]
    fn partial_trace_product_pure_state() {
        let rho = DensityMatrix::from_diagonal(&[1.0, 0.0, 0.0, 0.0], Some((2, 2)));
        let a = rho.partial_trace(Subsystem::A).unwrap();
        assert!((a.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(a.matrix()[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn partial_trace_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(4, Some((2, 2)));
        for sub in [Subsystem::A, Subsystem::B] {
            let r = rho.partial_trace(sub).unwrap();
            assert!((r.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
            assert!((r.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_requires_split() {
        let rho = DensityMatrix::maximally_mixed(4, None);
        assert!(matches!(
            rho.partial_trace(Subsystem::A),
            Err(StateError::NoSplit)
        ));
    }

    /// Brute-force oracle: reduced X-state populations are (a+b, c+d) for A
    /// and (a+c, b+d) for B. Checked against an explicitly built matrix.
    #[test]
    fn partial_trace_xstate_diagonals() {
        let x = XStateParams::new(0.4, 0.3, 0.2, 0.1, c(0.05, 0.02), c(0.1, -0.03)).unwrap();
        let rho = x.to_density();
        let ra = rho.partial_trace(Subsystem::A).unwrap();
        let rb = rho.partial_trace(Subsystem::B).unwrap();
        assert!((ra.matrix()[(0, 0)].re - 0.7).abs() < 1e-15);
        assert!((ra.matrix()[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!(ra.matrix()[(0, 1)].norm() < 1e-15);
        assert!((rb.matrix()[(0, 0)].re - 0.6).abs() < 1e-15);
        assert!((rb.matrix()[(1, 1)].re - 0.4).abs() < 1e-15);
        assert!(rb.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn partial_traces_of_samples_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rho = DensityMatrix::from_matrix_unchecked(random_density(6, &mut rng), Some((2, 3)));
            for sub in [Subsystem::A, Subsystem::B] {
                let red = rho.partial_trace(sub).unwrap();
                DensityMatrix::validate(red.matrix().clone(), 1e-12).unwrap();
            }
        }
    }

    // ------------------------------------------------------------------
    // partial_transpose / min_eigenvalue / is_ppt
    // ------------------------------------------------------------------

    #[test]
    fn partial_transpose_diagonal_invariant() {
        let rho = DensityMatrix::from_diagonal(&[0.4, 0.3, 0.2, 0.1], Some((2, 2)));
        let pt = rho.partial_transpose(Subsystem::B).unwrap();
        assert_eq!(&pt, rho.matrix());
    }

    #[test]
    fn partial_transpose_bell_min_eigenvalue() {
        let rho = bell_state();
        let pt = rho.partial_transpose(Subsystem::B).unwrap();
        let min = min_eigenvalue(&pt).unwrap();
        assert!((min + 0.5).abs() < 1e-12, "min = {min}");
        assert!(!rho.is_ppt(TOL_PSD).unwrap());
        assert!(!rho.is_ppt_fast(TOL_PSD).unwrap());
    }

    #[test]
    fn partial_transpose_involution_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rho = DensityMatrix::from_matrix_unchecked(random_density(4, &mut rng), Some((2, 2)));
            let pt = rho.partial_transpose(Subsystem::A).unwrap();
            let tr: f64 = (0..4).map(|i| pt[(i, i)].re).sum();
            assert!((tr - 1.0).abs() < 1e-13);
            let herm = (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| (pt[(i, j)] - pt[(j, i)].conj()).norm())
                .fold(0.0f64, f64::max);
            assert!(herm < 1e-14);
            let wrapped = DensityMatrix::from_matrix_unchecked(pt, Some((2, 2)));
            let back = wrapped.partial_transpose(Subsystem::A).unwrap();
            let diff = (&back - rho.matrix()).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            assert!(diff <= 1e-14);
        }
    }

    #[test]
    fn ppt_verdict_same_for_either_subsystem() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rho = DensityMatrix::from_matrix_unchecked(random_density(4, &mut rng), Some((2, 2)));
            let min_b = min_eigenvalue(&rho.partial_transpose(Subsystem::B).unwrap()).unwrap();
            let min_a = min_eigenvalue(&rho.partial_transpose(Subsystem::A).unwrap()).unwrap();
            assert!((min_a - min_b).abs() < 1e-12);
        }
    }

    #[test]
    fn product_states_are_ppt() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = random_density(2, &mut rng);
            let b = random_density(2, &mut rng);
            let prod = DMatrix::from_fn(4, 4, |r, c_| {
                a[(r / 2, c_ / 2)] * b[(r % 2, c_ % 2)]
            });
            let rho = DensityMatrix::from_matrix_unchecked(prod, Some((2, 2)));
            assert!(rho.is_ppt(TOL_PSD).unwrap());
        }
    }

    #[test]
    fn maximally_mixed_9x9_is_ppt() {
        let rho = DensityMatrix::maximally_mixed(9, Some((3, 3)));
        assert!(rho.is_ppt(TOL_PSD).unwrap());
        assert!(rho.is_ppt_fast(TOL_PSD).unwrap());
    }

    #[test]
    fn min_eigenvalue_rejects_non_hermitian() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.3, 0.0);
        assert!(matches!(
            min_eigenvalue(&m),
            Err(StateError::NotHermitian { .. })
        ));
    }

    #[test]
    fn min_eigenvalue_simple_cases() {
        let id4 = DMatrix::from_diagonal_element(4, 4, c(0.25, 0.0));
        assert!((min_eigenvalue(&id4).unwrap() - 0.25).abs() < 1e-15);
        let m = DensityMatrix::from_diagonal(&[0.7, 0.3, 0.0, 0.0], None);
        assert!(min_eigenvalue(m.matrix()).unwrap().abs() < 1e-15);
    }

    /// Independent route: smallest root of the characteristic polynomial,
    /// with coefficients from Newton's identities over power-sum traces.
    fn char_poly_min_root(h: &DMatrix<Complex64>) -> f64 {
        let n = h.nrows();
        // Power sums p_k = tr(h^k).
        let mut pow: DMatrix<Complex64> = DMatrix::identity(n, n);
        let mut psums = vec![0.0f64; n + 1];
        for k in 1..=n {
            pow = &pow * h;
            psums[k] = (0..n).map(|i| pow[(i, i)].re).sum();
        }
        // Elementary symmetric polynomials e_k.
        let mut e = vec![0.0f64; n + 1];
        e[0] = 1.0;
        for k in 1..=n {
            let mut acc = 0.0;
            for i in 1..=k {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                acc += sign * e[k - i] * psums[i];
            }
            e[k] = acc / k as f64;
        }
        // det(xI - H) = sum_k (-1)^k e_k x^(n-k)
        let eval = |x: f64| -> f64 {
            let mut acc = 0.0;
            for k in 0..=n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * e[k] * x.powi((n - k) as i32);
            }
            acc
        };
        // Gershgorin lower bound, then scan for the first sign change.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let center = h[(i, i)].re;
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)].norm()).sum();
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        let lo = lo - 1e-9;
        let steps = 4000;
        let dx = (hi + 1e-9 - lo) / steps as f64;
        let s0 = eval(lo).signum();
        let mut bracket = None;
        for i in 1..=steps {
            let x = lo + dx * i as f64;
            if eval(x).signum() != s0 {
                bracket = Some((lo + dx * (i - 1) as f64, x));
                break;
            }
        }
        let (mut a, mut b) = bracket.expect("characteristic polynomial must change sign");
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if eval(mid).signum() == s0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn min_eigenvalue_matches_char_poly_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..300 {
            let g = DMatrix::from_fn(4, 4, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let h = (&g + g.adjoint()) * c(0.5, 0.0);
            let fast = min_eigenvalue(&h).unwrap();
            let oracle = char_poly_min_root(&h);
            assert!((fast - oracle).abs() < 1e-8, "{fast} vs {oracle}");
        }
    }

    #[test]
    fn cholesky_fast_path_agrees_with_eigen_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..2000 {
            let rho = DensityMatrix::from_matrix_unchecked(random_density(4, &mut rng), Some((2, 2)));
            assert_eq!(
                rho.is_ppt(TOL_PSD).unwrap(),
                rho.is_ppt_fast(TOL_PSD).unwrap()
            );
        }
        for _ in 0..200 {
            let rho = DensityMatrix::from_matrix_unchecked(random_density(9, &mut rng), Some((3, 3)));
            assert_eq!(
                rho.is_ppt(TOL_PSD).unwrap(),
                rho.is_ppt_fast(TOL_PSD).unwrap()
            );
        }
    }

    // ------------------------------------------------------------------
    // purity
    // ------------------------------------------------------------------

    #[test]
    fn purity_examples() {
        assert!((DensityMatrix::maximally_mixed(4, None).purity() - 0.25).abs() < 1e-15);
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0], None);
        assert!((pure.purity() - 1.0).abs() < 1e-15);
        let qubit = DensityMatrix::from_diagonal(&[0.75, 0.25], None);
        assert!((qubit.purity() - 0.625).abs() < 1e-15);
    }

    // ------------------------------------------------------------------
    // X-states
    // ------------------------------------------------------------------

    #[test]
    fn xstate_to_density_examples() {
        let mm = XStateParams::new(0.25, 0.25, 0.25, 0.25, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let rho = mm.to_density();
        let diff = (rho.matrix() - DensityMatrix::maximally_mixed(4, None).matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-15);

        // Bell state: valid X-state, not PPT.
        let bell = XStateParams::new(0.5, 0.0, 0.0, 0.5, c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        let rho = bell.to_density();
        DensityMatrix::validate_with_split(rho.matrix().clone(), Some((2, 2)), 1e-12).unwrap();
        assert!(!bell.is_separable());
        assert!(!rho.is_ppt(TOL_PSD).unwrap());
        let expected = bell_state();
        let diff = (rho.matrix() - expected.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-15);

        let pure00 = XStateParams::new(1.0, 0.0, 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((pure00.to_density().matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn xstate_rejects_invalid_params() {
        assert!(XStateParams::new(0.5, 0.5, 0.2, -0.2, c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(XStateParams::new(0.3, 0.3, 0.3, 0.3, c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(XStateParams::new(0.25, 0.25, 0.25, 0.25, c(0.3, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn xstate_separability_examples() {
        let diag = XStateParams::new(0.4, 0.3, 0.2, 0.1, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(diag.is_separable());
        // Boundary case |z14| = |z23| = 1/4 with a=b=c=d=1/4.
        let boundary =
            XStateParams::new(0.25, 0.25, 0.25, 0.25, c(0.25, 0.0), c(0.25, 0.0)).unwrap();
        assert!(boundary.is_separable());
        assert!(boundary
            .to_density()
            .is_ppt(TOL_PSD)
            .unwrap());
    }

    #[test]
    fn xstate_closed_form_agrees_with_ppt_on_random_states() {
        // 10^4 random X-states: closed form must agree with the PPT route.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut checked = 0;
        while checked < 10_000 {
            let (a, b, cdiag) = {
                let mut u = [
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                    rng.random::<f64>(),
                ];
                u.sort_by(|x, y| x.partial_cmp(y).unwrap());
                (u[0], u[1] - u[0], u[2] - u[1])
            };
            let d = 1.0 - a - b - cdiag;
            let z14 = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let z23 = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            if z14.norm_sqr() > a * d || z23.norm_sqr() > b * cdiag {
                continue;
            }
            let x = XStateParams::new(a, b, cdiag, d, z14, z23).unwrap();
            assert_eq!(
                x.is_separable(),
                x.to_density().is_ppt(TOL_PSD).unwrap(),
                "disagreement at {x:?}"
            );
            checked += 1;
        }
    }
}
