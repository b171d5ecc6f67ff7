//! Arithmetic over F₃ and F₈₁, packed F₃[t] polynomials, and the search and
//! geometry tools for the weighted del Pezzo surface of degree 2
//! `w² = −x⁴ + y·z³ − y³·z` over F₃.

pub mod field;
pub mod format;
pub mod geometry;
pub mod gf;
pub mod lattice;
pub mod orbits;
pub mod poly;
pub mod search;

pub use field::FiniteField;
pub use gf::{Gf3, Gf81};
pub use lattice::Matrix;
pub use poly::{PackedPoly, PackedWord};

/// Packed polynomial with room for 64 coefficients.
pub type Poly = PackedPoly<u128>;
/// Packed polynomial with room for 32 coefficients.
pub type Poly64 = PackedPoly<u64>;
/// Integer matrix used for Picard lattice computations.
pub type IntMatrix = Matrix<i64>;
