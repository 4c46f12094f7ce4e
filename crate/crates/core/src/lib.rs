//! Exact computations in Hochschild theory: Hochschild cohomology and homology
//! of finite-dimensional algebras, first-order deformation classes, diagrams of
//! algebras over posets, finite A-infinity categories, and Cech cohomology of
//! polyvector fields over affine covers.
//!
//! All arithmetic is exact over the rationals or over rational functions in a
//! single parameter `q`.

pub mod ainf;
pub mod algebra;
pub mod cech;
pub mod cli;
pub mod complex;
pub mod deform;
pub mod diagram;
pub mod error;
pub mod io;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod weights;

pub use error::{Error, Result};
pub use linalg::{kernel_basis, solve, ExactMatrix, SparseVec};
pub use scalar::{Derivation, Scalar};
