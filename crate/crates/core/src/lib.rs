//! Numerical models of tunneling proximity resonances in coupled dielectric
//! resonators.
//!
//! Three levels of description are provided:
//!
//! * [`diskmode`]: exact single-disk dispersion of a dielectric rod between
//!   conducting plates, evanescent decay constants and loss-budget Q.
//! * [`doublewell`]: a 1D double well with complex (absorbing) potential whose
//!   even/odd quasi-bound doublets reproduce the splitting and width ratios.
//! * [`effmodel`]: N-site non-Hermitian effective Hamiltonians with common and
//!   individual decay channels.
//!
//! [`numerics`] carries the special functions, root finders and the small
//! dense complex eigensolver shared by all of them.

pub mod diskmode;
pub mod doublewell;
pub mod effmodel;
mod error;
pub mod numerics;

pub use error::{Error, Result};
pub use num_complex::Complex64;
