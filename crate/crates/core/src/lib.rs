//! Spectral degeneracies of non-Hermitian Bloch Hamiltonians.
//!
//! This crate locates band degeneracies of 2-, 3-, and 4-band non-Hermitian
//! tight-binding models and classifies each one as a defective exceptional
//! point (the matrix casts a Jordan block), a non-defective exceptional point
//! (diagonalizable at the point, but non-diagonalizable arbitrarily close to
//! it along certain directions), or an ordinary nodal point (diagonalizable
//! in a full punctured neighborhood).
//!
//! The main pieces:
//!
//! - [`basis`]: identity-plus-SU(n) generator bases (Pauli, Gell-Mann,
//!   generalized Gell-Mann) and the coefficient decomposition `H = d_mu Y^mu`.
//! - [`spectral`]: characteristic-polynomial coefficients, the discriminant
//!   constraint scalars eta/nu/kappa, eigen-decomposition, Jordan multiplicity
//!   structure, and the closed-form 2x2 Jordan decomposition.
//! - [`symmetry`]: PT, CP, pseudo-Hermiticity and TRS-dagger residual checks
//!   plus the symmetry-reduced constraint tables.
//! - [`models`]: a small term-sum model language, the built-in model zoo, and
//!   open-boundary (slab) Hamiltonians built from Bloch data.
//! - [`finder`]: Brillouin-zone scanning, simplex refinement, neighborhood
//!   classification, zero-set extraction and bulk-Fermi region maps.

pub mod basis;
pub mod error;
pub mod finder;
pub mod linalg;
pub mod models;
pub mod slab;
pub mod spectral;
pub mod symmetry;

pub use error::{Error, Result};
pub use linalg::{C64, CMatrix};
