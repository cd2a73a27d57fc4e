//! Eigenvalue solver for small Hermitian matrices.
//!
//! The Monte Carlo scans need eigenvalues of 4x4 .. 9x9 Hermitian matrices at
//! high throughput, so this module implements the classic two-stage scheme
//! directly instead of going through a general-purpose decomposition:
//!
//! 1. Householder reduction of the Hermitian matrix to tridiagonal form. Only
//!    the *magnitudes* of the off-diagonal entries are kept: a Hermitian
//!    tridiagonal matrix is unitarily similar (by a diagonal phase matrix) to
//!    the real symmetric tridiagonal matrix with the same diagonal and
//!    absolute off-diagonals, so the spectrum is unchanged.
//! 2. Implicit-shift QL iteration on the real tridiagonal matrix,
//!    eigenvalues only.
//!
//! A [`HermitianEigs`] value owns the scratch buffers so a sampling loop can
//! reuse them across millions of calls without allocating.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_QL_ITERS: usize = 64;

/// Reusable workspace for eigenvalue computations.
#[derive(Debug, Default, Clone)]
pub struct HermitianEigs {
    a: Vec<Complex64>,
    v: Vec<Complex64>,
    p: Vec<Complex64>,
    d: Vec<f64>,
    e: Vec<f64>,
}

impl HermitianEigs {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The caller is expected
    /// to pass a (numerically) Hermitian matrix; only the lower triangle and
    /// the real parts of the diagonal are read.
    pub fn eigenvalues(&mut self, mat: &DMatrix<Complex64>) -> &[f64] {
        let n = mat.nrows();
        assert_eq!(n, mat.ncols(), "matrix must be square");
        self.load(mat);
        self.tridiagonalize(n);
        ql_implicit(&mut self.d, &mut self.e, n);
        self.d[..n].sort_by(|x, y| x.partial_cmp(y).expect("non-NaN eigenvalues"));
        &self.d[..n]
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&mut self, mat: &DMatrix<Complex64>) -> f64 {
        let n = mat.nrows();
        assert_eq!(n, mat.ncols(), "matrix must be square");
        self.load(mat);
        self.tridiagonalize(n);
        ql_implicit(&mut self.d, &mut self.e, n);
        self.d[..n].iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn load(&mut self, mat: &DMatrix<Complex64>) {
        let n = mat.nrows();
        self.a.clear();
        self.a.extend((0..n).flat_map(|i| (0..n).map(move |j| mat[(i, j)])));
        self.v.resize(n, Complex64::ZERO);
        self.p.resize(n, Complex64::ZERO);
        self.d.resize(n, 0.0);
        self.e.resize(n, 0.0);
    }

    /// Householder reduction to tridiagonal form. `self.a` is row-major.
    /// On exit `d` holds the diagonal and `e[0..n-1]` the subdiagonal
    /// magnitudes.
    fn tridiagonalize(&mut self, n: usize) {
        let a = &mut self.a;
        for k in 0..n.saturating_sub(2) {
            // Column below the diagonal: x = a[k+1.., k].
            let mut sigma2 = 0.0;
            for i in k + 1..n {
                sigma2 += a[i * n + k].norm_sqr();
            }
            let sigma = sigma2.sqrt();
            let x0 = a[(k + 1) * n + k];
            if sigma == 0.0 {
                self.e[k] = 0.0;
                continue;
            }
            // alpha = -phase(x0) * sigma, avoiding cancellation in v0.
            let phase = if x0.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            let alpha = -phase * sigma;
            // v = x - alpha e1, tau = 2 / |v|^2.
            let v = &mut self.v;
            for i in k + 1..n {
                v[i] = a[i * n + k];
            }
            v[k + 1] -= alpha;
            let vnorm2 = 2.0 * sigma2 + 2.0 * sigma * x0.norm();
            if vnorm2 == 0.0 {
                self.e[k] = sigma;
                continue;
            }
            let tau = 2.0 / vnorm2;

            // Hermitian rank-2 update of the trailing block:
            //   p = tau A v;  q = p - (tau/2)(v^H p) v;  A -= v q^H + q v^H.
            let p = &mut self.p;
            for i in k + 1..n {
                let mut acc = Complex64::ZERO;
                for j in k + 1..n {
                    acc += a[i * n + j] * v[j];
                }
                p[i] = tau * acc;
            }
            let mut vhp = Complex64::ZERO;
            for i in k + 1..n {
                vhp += v[i].conj() * p[i];
            }
            let kappa = 0.5 * tau * vhp;
            for i in k + 1..n {
                p[i] -= kappa * v[i];
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                    a[i * n + j] -= upd;
                }
            }
            self.e[k] = sigma;
            // The reduced column is now (-phase * sigma) at row k+1; only its
            // magnitude matters for the spectrum.
        }
        if n >= 2 {
            self.e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
        }
        for i in 0..n {
            self.d[i] = a[i * n + i].re;
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix
/// (diagonal `d[0..n]`, subdiagonal `e[0..n-1]`), eigenvalues only.
fn ql_implicit(d: &mut [f64], e: &mut [f64], n: usize) {
    if n == 0 {
        return;
    }
    if n >= 1 {
        e[n - 1] = 0.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible subdiagonal element to split the problem.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= MAX_QL_ITERS, "QL iteration failed to converge");

            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// One-shot eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(mat: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ws = HermitianEigs::new();
    ws.eigenvalues(mat).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let g = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        h
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.7, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.2, 0.0),
        ]));
        let evs = hermitian_eigenvalues(&m);
        assert_eq!(evs.len(), 4);
        let expect = [-0.2, 0.0, 0.3, 0.7];
        for (got, want) in evs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn pauli_x_tensor_identity() {
        // sigma_x ⊗ I has eigenvalues {-1, -1, 1, 1}.
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 2)] = Complex64::new(1.0, 0.0);
        m[(2, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 3)] = Complex64::new(1.0, 0.0);
        m[(3, 1)] = Complex64::new(1.0, 0.0);
        let evs = hermitian_eigenvalues(&m);
        let expect = [-1.0, -1.0, 1.0, 1.0];
        for (got, want) in evs.iter().zip(expect) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn matches_nalgebra_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [2usize, 3, 4, 6, 9] {
            for _ in 0..200 {
                let h = random_hermitian(n, &mut rng);
                let mine = hermitian_eigenvalues(&h);
                let mut reference = h.symmetric_eigenvalues().iter().copied().collect::<Vec<_>>();
                reference.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let scale = reference.iter().fold(1.0f64, |m, x| m.max(x.abs()));
                for (a, b) in mine.iter().zip(&reference) {
                    assert!(
                        (a - b).abs() <= 1e-12 * scale.max(1.0),
                        "n={n}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn trace_and_sum_of_squares_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let h = random_hermitian(5, &mut rng);
            let evs = hermitian_eigenvalues(&h);
            let tr: f64 = (0..5).map(|i| h[(i, i)].re).sum();
            let fro2: f64 = h.iter().map(|z| z.norm_sqr()).sum();
            let ev_sum: f64 = evs.iter().sum();
            let ev_sq: f64 = evs.iter().map(|x| x * x).sum();
            assert!((tr - ev_sum).abs() < 1e-12);
            assert!((fro2 - ev_sq).abs() < 1e-11);
        }
    }
}
