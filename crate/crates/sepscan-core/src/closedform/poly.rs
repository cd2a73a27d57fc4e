//! Exact-rational polynomials, rational functions, and piecewise expressions.
//!
//! Coefficients are stored as `BigRational` so sign tests and special-point
//! values are exact; a parallel `f64` coefficient cache makes bulk evaluation
//! (plotting, quadrature) cheap.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClosedFormError {
    #[error("no sign change on the given bracket")]
    NoSignChange,
    #[error("quadrature tolerance not reached: error estimate {err:.3e} > {tol:.3e}")]
    ToleranceNotReached { err: f64, tol: f64 },
    #[error("abscissa {x} is outside every piece of the curve")]
    OutsidePieces { x: f64 },
    #[error("range [{lo}, {hi}] is not interior to a single piece")]
    SpansPieces { lo: f64, hi: f64 },
    #[error("piecewise construction failed: {0}")]
    BadConstruction(String),
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact dyadic rational equal to the given float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

// ----------------------------------------------------------------------
// Univariate polynomials
// ----------------------------------------------------------------------

/// Dense univariate polynomial, ascending coefficients, exact rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
    coeffs_f64: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        let coeffs_f64 = coeffs.iter().map(|c| c.to_f64().unwrap()).collect();
        Self { coeffs, coeffs_f64 }
    }

    /// Ascending integer coefficients.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| big(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![BigRational::zero()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs_f64.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * big(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&big(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(x) -> p(a + b x)` composition with a linear map.
    pub fn compose_linear(&self, a: &BigRational, b: &BigRational) -> Poly {
        let mut acc = Poly::zero();
        let shift = Poly::new(vec![a.clone(), b.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&Poly::constant(c.clone()));
        }
        acc
    }
}

/// Exact sign of `p` at a rational point: -1, 0, or 1.
pub fn sign_at(p: &Poly, x: &BigRational) -> i8 {
    let v = p.eval_exact(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Rigorous enclosure of a polynomial root found by bisection with exact
/// sign evaluations.
#[derive(Debug, Clone)]
pub struct RootBracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootBracket {
    pub fn midpoint_f64(&self) -> f64 {
        let two = big(2);
        ((&self.lo + &self.hi) / two).to_f64().unwrap()
    }
}

/// Bisection to bracket width `tol` with exact rational sign tests, so the
/// final bracket is rigorous. Requires a sign change on `[lo, hi]`.
pub fn poly_root(p: &Poly, lo: f64, hi: f64, tol: f64) -> Result<RootBracket, ClosedFormError> {
    let mut a = from_f64(lo);
    let mut b = from_f64(hi);
    let sa = sign_at(p, &a);
    let sb = sign_at(p, &b);
    if sa == 0 {
        return Ok(RootBracket { lo: a.clone(), hi: a });
    }
    if sb == 0 {
        return Ok(RootBracket { lo: b.clone(), hi: b });
    }
    if sa == sb {
        return Err(ClosedFormError::NoSignChange);
    }
    let tol = from_f64(tol.max(f64::EPSILON));
    let two = big(2);
    while (&b - &a) > tol {
        let mid = (&a + &b) / &two;
        let sm = sign_at(p, &mid);
        if sm == 0 {
            return Ok(RootBracket {
                lo: mid.clone(),
                hi: mid,
            });
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(RootBracket { lo: a, hi: b })
}

// ----------------------------------------------------------------------
// Univariate rational functions
// ----------------------------------------------------------------------

/// Ratio of two polynomials with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    pub fn from_integers(num: &[i64], den: &[i64]) -> Self {
        Self::new(Poly::from_integers(num), Poly::from_integers(den))
    }

    pub fn poly(num: Poly) -> Self {
        Self::new(num, Poly::from_integers(&[1]))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Exact value; `None` when the denominator vanishes.
    pub fn eval_exact(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_exact(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_exact(x) / d)
        }
    }

    /// Numerator of the derivative: `num' den - num den'`. Its sign equals
    /// the sign of the derivative wherever `den^2 > 0`.
    pub fn derivative_numerator(&self) -> Poly {
        self.num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()))
    }

    /// `self - other` as a rational function.
    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(
            self.num
                .mul(&other.den)
                .sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

// ----------------------------------------------------------------------
// Piecewise curves
// ----------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CurvePiece {
    pub lo: f64,
    pub hi: f64,
    pub f: RationalFn,
}

/// Piecewise rational curve on an interval, continuity-checked at joins.
#[derive(Debug, Clone)]
pub struct PiecewiseCurve {
    pieces: Vec<CurvePiece>,
}

impl PiecewiseCurve {
    /// Build from contiguous pieces. Adjacent pieces must agree at their
    /// shared knot: exactly when both are defined there in exact arithmetic,
    /// and to 1e-12 in floating point otherwise. A disagreement means a
    /// transcription error, so construction fails loudly.
    pub fn new(pieces: Vec<CurvePiece>) -> Result<Self, ClosedFormError> {
        if pieces.is_empty() {
            return Err(ClosedFormError::BadConstruction("no pieces".into()));
        }
        for w in pieces.windows(2) {
            if (w[0].hi - w[1].lo).abs() > 1e-15 {
                return Err(ClosedFormError::BadConstruction(format!(
                    "pieces not contiguous at {} vs {}",
                    w[0].hi, w[1].lo
                )));
            }
            let knot = w[0].hi;
            let knot_q = from_f64(knot);
            match (w[0].f.eval_exact(&knot_q), w[1].f.eval_exact(&knot_q)) {
                (Some(a), Some(b)) => {
                    if a != b {
                        return Err(ClosedFormError::BadConstruction(format!(
                            "pieces disagree exactly at knot {knot}: {} vs {}",
                            a.to_f64().unwrap_or(f64::NAN),
                            b.to_f64().unwrap_or(f64::NAN)
                        )));
                    }
                }
                _ => {
                    let a = w[0].f.eval_f64(knot - 1e-9);
                    let b = w[1].f.eval_f64(knot + 1e-9);
                    if (a - b).abs() > 1e-6 {
                        return Err(ClosedFormError::BadConstruction(format!(
                            "pieces disagree near knot {knot}: {a} vs {b}"
                        )));
                    }
                }
            }
        }
        Ok(Self { pieces })
    }

    /// Single-expression curve.
    pub fn single(lo: f64, hi: f64, f: RationalFn) -> Self {
        Self {
            pieces: vec![CurvePiece { lo, hi, f }],
        }
    }

    pub fn pieces(&self) -> &[CurvePiece] {
        &self.pieces
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.pieces.first().unwrap().lo,
            self.pieces.last().unwrap().hi,
        )
    }

    fn piece_for(&self, x: f64) -> Result<&CurvePiece, ClosedFormError> {
        self.pieces
            .iter()
            .find(|p| x >= p.lo && x <= p.hi)
            .ok_or(ClosedFormError::OutsidePieces { x })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self.piece_for(x) {
            Ok(p) => p.f.eval_f64(x),
            Err(_) => f64::NAN,
        }
    }

    /// Exact value at a rational point (using the piece containing it).
    pub fn eval_exact(&self, x: &BigRational) -> Option<BigRational> {
        let xf = x.to_f64()?;
        self.piece_for(xf).ok()?.f.eval_exact(x)
    }

    /// Pointwise difference, with piece boundaries at the union of both
    /// curves' knots.
    pub fn difference(&self, other: &PiecewiseCurve) -> PiecewiseCurve {
        let mut knots: Vec<f64> = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .flat_map(|p| [p.lo, p.hi])
            .collect();
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        knots.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let mut pieces = Vec::new();
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let (Ok(pa), Ok(pb)) = (self.piece_for(mid), other.piece_for(mid)) else {
                continue;
            };
            pieces.push(CurvePiece {
                lo,
                hi,
                f: pa.f.sub(&pb.f),
            });
        }
        PiecewiseCurve { pieces }
    }
}

/// Extremum kind for [`curve_extremum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumMode {
    Max,
    Min,
}

/// Extremum of a piecewise-rational curve on `[lo, hi]`, which must lie
/// inside a single piece. Interior critical points are the exact-bisection
/// roots of the derivative numerator (a rational-coefficient polynomial), so
/// the abscissa is resolved well below the requested 1e-10.
pub fn curve_extremum(
    curve: &PiecewiseCurve,
    lo: f64,
    hi: f64,
    mode: ExtremumMode,
) -> Result<(f64, f64), ClosedFormError> {
    let piece = curve
        .pieces
        .iter()
        .find(|p| lo >= p.lo && hi <= p.hi)
        .ok_or(ClosedFormError::SpansPieces { lo, hi })?;
    let dnum = piece.f.derivative_numerator();
    let mut candidates = vec![lo, hi];
    // Bracket derivative sign changes on a grid, then refine exactly.
    let grid = 2048;
    let step = (hi - lo) / grid as f64;
    let mut prev_x = lo;
    let mut prev_s = dnum.eval_f64(prev_x);
    for k in 1..=grid {
        let x = lo + step * k as f64;
        let s = dnum.eval_f64(x);
        if prev_s == 0.0 {
            candidates.push(prev_x);
        } else if prev_s * s < 0.0 {
            let bracket = poly_root(&dnum, prev_x, x, 1e-13)?;
            candidates.push(bracket.midpoint_f64());
        }
        prev_x = x;
        prev_s = s;
    }
    let mut best: Option<(f64, f64)> = None;
    for x in candidates {
        let v = piece.f.eval_f64(x);
        let better = match (best, mode) {
            (None, _) => true,
            (Some((_, bv)), ExtremumMode::Max) => v > bv,
            (Some((_, bv)), ExtremumMode::Min) => v < bv,
        };
        if better {
            best = Some((x, v));
        }
    }
    Ok(best.expect("candidates nonempty"))
}

/// All roots of `c1 - c2` on `[lo, hi]`, isolated by sign scanning on a
/// 10^4-point grid and bisected to 1e-10.
pub fn intersect_curves(c1: &PiecewiseCurve, c2: &PiecewiseCurve, lo: f64, hi: f64) -> Vec<f64> {
    let f = |x: f64| c1.eval_f64(x) - c2.eval_f64(x);
    let grid = 10_000;
    let step = (hi - lo) / grid as f64;
    let mut roots: Vec<f64> = Vec::new();
    let push_root = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().map_or(true, |&p| (r - p).abs() > 1e-8) {
            roots.push(r);
        }
    };
    let mut prev_x = lo;
    let mut prev_v = f(prev_x);
    for k in 1..=grid {
        let x = lo + step * k as f64;
        let v = f(x);
        if prev_v == 0.0 {
            push_root(prev_x, &mut roots);
        } else if prev_v.is_finite() && v.is_finite() && prev_v * v < 0.0 {
            let (mut a, mut b, mut fa) = (prev_x, x, prev_v);
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
                if b - a < 1e-12 {
                    break;
                }
            }
            push_root(0.5 * (a + b), &mut roots);
        }
        prev_x = x;
        prev_v = v;
    }
    if prev_v == 0.0 {
        push_root(hi, &mut roots);
    }
    roots
}

// ----------------------------------------------------------------------
// Bivariate polynomials and piecewise surfaces
// ----------------------------------------------------------------------

/// Dense bivariate polynomial: `coeffs[i][j]` multiplies `x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    coeffs: Vec<Vec<BigRational>>,
    coeffs_f64: Vec<Vec<f64>>,
}

impl Poly2 {
    pub fn new(coeffs: Vec<Vec<BigRational>>) -> Self {
        let coeffs_f64 = coeffs
            .iter()
            .map(|row| row.iter().map(|c| c.to_f64().unwrap()).collect())
            .collect();
        Self { coeffs, coeffs_f64 }
    }

    pub fn zero() -> Self {
        Self::new(vec![vec![BigRational::zero()]])
    }

    /// Lift a univariate polynomial in x (j = 0 column).
    pub fn from_x(p: &Poly) -> Self {
        Self::new(p.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// Lift a univariate polynomial in y (i = 0 row).
    pub fn from_y(p: &Poly) -> Self {
        Self::new(vec![p.coeffs().to_vec()])
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let ni = self.coeffs.len().max(other.coeffs.len());
        let nj = self
            .coeffs
            .iter()
            .chain(other.coeffs.iter())
            .map(Vec::len)
            .max()
            .unwrap();
        let mut out = vec![vec![BigRational::zero(); nj]; ni];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i][j] += c;
            }
        }
        for (i, row) in other.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i][j] += c;
            }
        }
        Poly2::new(out)
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let ni = self.coeffs.len() + other.coeffs.len() - 1;
        let nj = self.coeffs.iter().map(Vec::len).max().unwrap()
            + other.coeffs.iter().map(Vec::len).max().unwrap()
            - 1;
        let mut out = vec![vec![BigRational::zero(); nj]; ni];
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, r2) in other.coeffs.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let prod = c1 * c2;
                        out[i1 + i2][j1 + j2] += prod;
                    }
                }
            }
        }
        Poly2::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Poly2 {
        Poly2::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().map(|c| c * s).collect())
                .collect(),
        )
    }

    /// Swap the two variables (transpose the coefficient matrix).
    pub fn swap_vars(&self) -> Poly2 {
        let ni = self.coeffs.iter().map(Vec::len).max().unwrap();
        let nj = self.coeffs.len();
        let mut out = vec![vec![BigRational::zero(); nj]; ni];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[j][i] = c.clone();
            }
        }
        Poly2::new(out)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.coeffs_f64.iter().rev() {
            let mut ry = 0.0;
            for &c in row.iter().rev() {
                ry = ry * y + c;
            }
            acc = acc * x + ry;
        }
        acc
    }

    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for row in self.coeffs.iter().rev() {
            let mut ry = BigRational::zero();
            for c in row.iter().rev() {
                ry = ry * y + c;
            }
            acc = acc * x + ry;
        }
        acc
    }

    /// Substitute y = x, producing a univariate polynomial (the diagonal).
    pub fn restrict_diagonal(&self) -> Poly {
        let deg = self.coeffs.len() + self.coeffs.iter().map(Vec::len).max().unwrap();
        let mut out = vec![BigRational::zero(); deg];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i + j] += c;
            }
        }
        Poly::new(out)
    }

    /// Exact `int_0^1 int_0^x x^ix y^iy p(x, y) dy dx` over the lower-right
    /// triangle `y < x` (term-wise: `1 / ((j+1)(i+j+2))`).
    pub fn moment_upper_triangle(&self, ix: u32, iy: u32) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let jj = j as i64 + iy as i64;
                let ii = i as i64 + ix as i64;
                acc += c / (big(jj + 1) * big(ii + jj + 2));
            }
        }
        acc
    }
}

/// Bivariate rational function.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn2 {
    pub num: Poly2,
    pub den: Poly2,
}

impl RationalFn2 {
    pub fn new(num: Poly2, den: Poly2) -> Self {
        Self { num, den }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.num.eval_f64(x, y) / self.den.eval_f64(x, y)
    }

    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_exact(x, y);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_exact(x, y) / d)
        }
    }

    pub fn swap_vars(&self) -> RationalFn2 {
        RationalFn2::new(self.num.swap_vars(), self.den.swap_vars())
    }
}

/// Piecewise expression over the unit square, split along the diagonal:
/// `upper` on `r_A > r_B`, `lower` on `r_A < r_B`. The diagonal itself is
/// evaluated as the shared one-sided limit (the pieces agree there by
/// continuity, which is validated at construction).
#[derive(Debug, Clone)]
pub struct PiecewiseSurface {
    pub upper: RationalFn2,
    pub lower: RationalFn2,
    /// Power of pi^2 multiplying the rational part (1 for the volume
    /// surfaces, 0 for probabilities). Carried symbolically so rational
    /// evaluation stays exact.
    pub pi2_power: u8,
    pub symmetric: bool,
}

impl PiecewiseSurface {
    pub fn new(
        upper: RationalFn2,
        lower: RationalFn2,
        pi2_power: u8,
        symmetric: bool,
    ) -> Result<Self, ClosedFormError> {
        let s = Self {
            upper,
            lower,
            pi2_power,
            symmetric,
        };
        if symmetric && s.lower != s.upper.swap_vars() {
            return Err(ClosedFormError::BadConstruction(
                "symmetric surface whose lower piece is not the coefficient-level swap".into(),
            ));
        }
        // Continuity across the diagonal at 10^3 probe points.
        for k in 1..1000 {
            let r = k as f64 / 1000.0;
            let a = s.upper.eval_f64(r, r);
            let b = s.lower.eval_f64(r, r);
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                return Err(ClosedFormError::BadConstruction(format!(
                    "one-sided limits disagree at r={r}: {a} vs {b}"
                )));
            }
        }
        Ok(s)
    }

    /// Scale factor `(pi^2)^pi2_power`.
    pub fn scale_f64(&self) -> f64 {
        (std::f64::consts::PI * std::f64::consts::PI).powi(self.pi2_power as i32)
    }

    pub fn eval_f64(&self, r_a: f64, r_b: f64) -> f64 {
        let rational = if r_a >= r_b {
            self.upper.eval_f64(r_a, r_b)
        } else {
            self.lower.eval_f64(r_a, r_b)
        };
        rational * self.scale_f64()
    }

    /// Exact rational-part value (excluding any pi^2 factor).
    pub fn eval_exact_rational_part(
        &self,
        r_a: &BigRational,
        r_b: &BigRational,
    ) -> Option<BigRational> {
        if r_a >= r_b {
            self.upper.eval_exact(r_a, r_b)
        } else {
            self.lower.eval_exact(r_a, r_b)
        }
    }
}

/// Convenience: `(x + c)` and similar linear factors.
pub fn linear(c0: i64, c1: i64) -> Poly {
    Poly::from_integers(&[c0, c1])
}

/// `p^k` by repeated multiplication.
pub fn poly_pow(p: &Poly, k: u32) -> Poly {
    let mut acc = Poly::from_integers(&[1]);
    for _ in 0..k {
        acc = acc.mul(p);
    }
    acc
}
