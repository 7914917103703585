//! Achievable end-to-end distortion for lossy transmission over a relay
//! channel when the relay observes side information correlated with the
//! source.
//!
//! The crate is organized around four pieces:
//!
//! - [`gauss`]: the normalized quadratic-Gaussian model and an exact
//!   covariance-conditioning MMSE oracle.
//! - [`schemes`]: closed-form distortion evaluators for the cut-set lower
//!   bound and the achievable schemes (direct transmission, DF, CF, uncoded
//!   source cooperation, and the joint source-channel DF family).
//! - [`optimize`]: deterministic grid-plus-refinement search on the unit box.
//! - [`dm`]: discrete memoryless feasibility checking and brute-force
//!   distortion search for the joint source-channel DF conditions.
//!
//! [`sweep`] turns scenarios into CSV sweeps and figure data.

pub mod dm;
mod error;
pub mod gauss;
pub mod optimize;
pub mod schemes;
pub mod sweep;

pub use error::{Error, Result};
pub use gauss::{GaussScenario, GaussianLinearModel, JointGaussian, LinkSnrs};
pub use optimize::{BoxMinimum, BoxSearchConfig};
pub use schemes::{Degeneracy, EvalResult, Param, SchemeId};
pub use nalgebra::DMatrix;
