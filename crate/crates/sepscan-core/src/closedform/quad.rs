//! Adaptive Gauss-Kronrod quadrature, one- and two-dimensional.
//!
//! The two-dimensional integrals run over the unit square split into the two
//! triangles `r_A > r_B` and `r_A < r_B`, so each integrand piece is smooth;
//! the outer integral is adaptive over `r_A` and the inner one adaptive over
//! `r_B` at a tighter tolerance.

use super::poly::ClosedFormError;

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// Gauss-Kronrod 7-15 pair on `[a, b]`: returns (Kronrod value, |K - G|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kron += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kron *= half;
    gauss *= half;
    (kron, (kron - gauss).abs())
}

/// Adaptive 1-D integration to absolute tolerance `tol`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, ClosedFormError> {
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut err_total = 0.0;
    // (a, b, tol, depth) work stack.
    let mut stack = vec![(a, b, tol.max(1e-15), 0u32)];
    while let Some((a, b, tol, depth)) = stack.pop() {
        let (val, err) = gk15(f, a, b);
        if err <= tol || depth >= 48 {
            total += val;
            err_total += err;
        } else {
            let mid = 0.5 * (a + b);
            stack.push((a, mid, 0.5 * tol, depth + 1));
            stack.push((mid, b, 0.5 * tol, depth + 1));
        }
    }
    if err_total > tol.max(1e-15) * 4.0 {
        return Err(ClosedFormError::ToleranceNotReached {
            err: err_total,
            tol,
        });
    }
    Ok(total)
}

/// Integral over the unit square of a function given by two smooth pieces,
/// `upper(x, y)` on the triangle `y < x` and `lower(x, y)` on `y > x`.
pub fn integrate_two_triangles<U, L>(upper: &U, lower: &L, tol: f64) -> Result<f64, ClosedFormError>
where
    U: Fn(f64, f64) -> f64,
    L: Fn(f64, f64) -> f64,
{
    let inner_tol = tol * 1e-3;
    let up = integrate_1d(
        &|x: f64| integrate_1d(&|y: f64| upper(x, y), 0.0, x, inner_tol).unwrap_or(f64::NAN),
        0.0,
        1.0,
        0.45 * tol,
    )?;
    let low = integrate_1d(
        &|x: f64| integrate_1d(&|y: f64| lower(x, y), x, 1.0, inner_tol).unwrap_or(f64::NAN),
        0.0,
        1.0,
        0.45 * tol,
    )?;
    if !(up.is_finite() && low.is_finite()) {
        return Err(ClosedFormError::ToleranceNotReached {
            err: f64::INFINITY,
            tol,
        });
    }
    Ok(up + low)
}
