//! Fourier-Dunkl systems on (-1,1): special functions, the measure
//! `dμ_α`, the orthonormal system `e_j`, its partial-sum kernels, and weighted
//! norm tools for studying mean convergence.

mod dd;
pub mod dunkl;
pub mod error;
pub mod fmt;
pub mod measure;
pub mod pnorm;
mod quad;
pub mod specfun;
pub mod weights;

pub use error::{Error, Result};
pub use specfun::AlphaParam;
