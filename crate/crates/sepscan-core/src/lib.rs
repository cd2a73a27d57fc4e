//! Separability probabilities of bipartite quantum states as joint functions
//! of the subsystem Bloch radii.
//!
//! The crate has two halves that check each other:
//!
//! - [`closedform`] and [`fits`] evaluate exact (and fitted) piecewise
//!   rational separability-probability surfaces and curves with
//!   rational-coefficient arithmetic, isolate the roots of the crossover
//!   polynomials, and integrate the surfaces numerically.
//! - [`measures`], [`radii`], [`histogram`] and [`scenarios`] regenerate the
//!   same quantities by Monte Carlo: seeded sampling of random density
//!   matrices under Hilbert-Schmidt, random-induced, Bures, real, and X-state
//!   measures, a PPT separability test per sample, and joint binning over the
//!   subsystem Bloch radii into 100x100 count matrices.

pub mod closedform;
pub mod eigen;
pub mod fits;
pub mod histogram;
pub mod measures;
pub mod qstate;
pub mod radii;
pub mod scenarios;
pub mod verify;

pub use histogram::{CurveEstimate, JointRadialHistogram};
pub use measures::{MeasureFamily, MeasureSpec};
pub use qstate::{DensityMatrix, StateError, Subsystem, XStateParams};
pub use radii::RadiusPair;
pub use scenarios::{ScenarioName, ScenarioSpec};
