//! Standard and generalized Bloch radii of reduced subsystem states.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qstate::{DensityMatrix, Subsystem, XStateParams};

#[derive(Debug, Error)]
pub enum RadiusError {
    #[error("expected a state of dimension {expected}, got {got}")]
    WrongDim { expected: usize, got: usize },
}

/// Joint Bloch radii of the two reduced states of one sample, plus its
/// separability (PPT) flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusPair {
    pub r_a: f64,
    pub r_b: f64,
    pub separable: bool,
}

/// Bloch-vector length of a qubit state: `sqrt(2 tr(rho^2) - 1)`, clamped at
/// zero against round-off for near-maximally-mixed states.
pub fn bloch_radius(rho: &DensityMatrix) -> Result<f64, RadiusError> {
    if rho.dim() != 2 {
        return Err(RadiusError::WrongDim {
            expected: 2,
            got: rho.dim(),
        });
    }
    Ok((2.0 * rho.purity() - 1.0).max(0.0).sqrt())
}

/// Generalized Bloch radius of a d-level state, normalized so that pure
/// states map to 1 and the maximally mixed state to 0:
/// `sqrt((d tr(rho^2) - 1) / (d - 1))`. Reduces to [`bloch_radius`] at d=2.
pub fn generalized_bloch_radius(rho: &DensityMatrix) -> Result<f64, RadiusError> {
    let d = rho.dim();
    if d < 2 {
        return Err(RadiusError::WrongDim {
            expected: 2,
            got: d,
        });
    }
    let p = rho.purity();
    Ok(((d as f64 * p - 1.0) / (d as f64 - 1.0)).max(0.0).sqrt())
}

/// Radii of an X-state's reduced subsystems. Both reductions are diagonal,
/// so `r_A = |2(a+b) - 1|` and `r_B = |2(a+c) - 1|`.
pub fn xstate_radii(x: &XStateParams) -> RadiusPair {
    RadiusPair {
        r_a: (2.0 * (x.a + x.b) - 1.0).abs(),
        r_b: (2.0 * (x.a + x.c) - 1.0).abs(),
        separable: x.is_separable(),
    }
}

/// Radius of a reduced state picked by subsystem, dispatching on dimension:
/// standard Bloch radius for qubits, generalized radius otherwise.
pub fn reduced_radius(rho: &DensityMatrix, sub: Subsystem) -> Result<f64, RadiusError> {
    let red = rho
        .partial_trace(sub)
        .map_err(|_| RadiusError::WrongDim { expected: 0, got: rho.dim() })?;
    if red.dim() == 2 {
        bloch_radius(&red)
    } else {
        generalized_bloch_radius(&red)
    }
}
