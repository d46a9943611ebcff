//! Shared numerical building blocks.

pub mod bessel;
mod branch;
pub mod eigen;
mod matrix;
pub mod roots;

pub use bessel::{bessel_i, bessel_i_prime, bessel_j, bessel_j_prime, bessel_k, bessel_k_prime};
pub use branch::sqrt_decaying;
pub(crate) use branch::{sinc, sinhc};
pub use eigen::{eig_complex_dense, EigenDecomposition, EigenPair};
pub use matrix::{inner, vec_norm, ComplexMatrix};
pub use roots::{brent, find_root_complex, scan_seeds, ComplexBox, RootFindConfig};
