//! Batch active learning as sparse subset approximation.
//!
//! Pool points are embedded as expected log-likelihood vectors under the
//! current posterior, and a Frank-Wolfe sparse approximation of their sum
//! picks a diverse weighted batch. Closed-form Fisher kernels are provided for
//! Bayesian linear regression and probit regression, plus a random-projection
//! variant that runs in O(MJ) per iteration.

pub mod acquisition;
pub mod coreset;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod models;
pub mod special;

pub use acquisition::{SelectionContext, SelectionStrategy, Strategy};
pub use coreset::{acs_fw_projected, binarize, fw_construct, fw_construct_projected, Batch, FwState};
pub use error::{Error, Result};
pub use kernels::{fisher_kernel, project, DenseKernel, KernelProvider, ProjectionMatrix};
pub use models::{GaussianPosterior, LinRegModel, Model, ModelSpec, ProbitModel, Task};
