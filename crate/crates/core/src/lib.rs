//! Fusion frames on finite-dimensional Hilbert spaces and on tensor products
//! `H ⊗ K`: frame operators, optimal bounds, canonical and alternative duals,
//! resolutions of the identity, and a seeded verification harness that checks
//! the frame identities and inequalities on random instances.

pub mod error;
pub mod file;
pub mod fixtures;
pub mod fusion;
pub mod linalg;
pub mod random;
pub mod tensor;
pub mod tolerance;
pub mod verify;

pub use error::{FrameError, Result};
pub use fusion::{CoefficientFamily, FrameBounds, FusionSystem, IdentityCheck, WeightedSubspace};
pub use linalg::{OperatorMatrix, Scalar, Spectrum, SubspaceBasis, VectorH};
pub use tensor::{RoiFamily, TensorSystem};
pub use tolerance::Tolerances;
pub use verify::{CheckId, CheckSpec, VerificationReport};
