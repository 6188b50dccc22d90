//! Circular distributions built from Brownian-motion exit points: the
//! wrapped Cauchy and its four-parameter extension, with exact densities,
//! closed-form interval probabilities and trigonometric moments, shape
//! diagnostics, samplers, Mobius-invariance checks, a spherical
//! generalization, and maximum-likelihood fitting.

pub mod angle;
pub mod brownian;
pub mod density;
pub mod error;
pub mod fit;
pub mod interval;
pub mod mobius;
pub mod moments;
pub mod params;
pub mod quad;
pub mod sampling;
pub mod shape;
pub mod sphere;
pub mod stats;
pub mod verify;

pub use angle::CircAngle;
pub use error::{EwcError, Result};
pub use params::{DiskPoint, EwcParams, WcParams};
