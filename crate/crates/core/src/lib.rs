//! Orthogonal Cartan subalgebras, Coxeter-element logarithms, SU(2)-rotation
//! descent and bracket factorizations in the compact classical Lie algebras
//! su(n), so(n) and sp(n).

pub mod cartan;
pub mod coxeter;
pub mod descent;
pub mod error;
pub mod json;
pub mod liealg;
pub mod numkernel;

pub use error::{Error, Result};
