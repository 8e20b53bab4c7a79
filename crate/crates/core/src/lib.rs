//! Lyapunov–Schmidt functionals of Hill operators with trigonometric
//! polynomial potentials, their spectra, and Riesz-basis criteria.

pub mod beta;
pub mod criteria;
pub mod error;
pub mod numerics;
pub mod potential;
pub mod report;
pub mod spectra;
pub mod walks;

pub use error::{Error, Result};
