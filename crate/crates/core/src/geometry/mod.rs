//! Arithmetic invariants of the surface `−w² = x⁴ + y³z − yz³` over F₃:
//! bitangents of the branch quartic, the 56 exceptional curves, the Picard
//! lattice with its Frobenius action, point counts, `H¹` and automorphisms.

mod automorphisms;
mod bitangent;
mod curves;
mod picard;
mod points;
mod report;

use thiserror::Error;

use crate::field::FiniteField;
use crate::lattice::LatticeError;

pub use automorphisms::{automorphism_group, AutomorphismGroup, Mat3};
pub use bitangent::{b_values, bitangents, eighth_roots_of_minus_one, BitangentKind, BitangentLine};
pub use curves::{
    eckardt_points, exceptional_curves, frobenius_permutation, intersect, intersection_matrix, ExcCurve, Sign,
};
pub use picard::{
    anticanonical, class_of, frobenius_matrix, gram_matrix, h1_galois, picard_basis, reference_frobenius_matrix,
    PicardBasis,
};
pub use points::{count_points, surface_points, PointCount};
pub use report::{run_geometry, Check, GeometryReport};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("inconsistent geometry: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The branch quartic `x⁴ + y³z − yz³`.
pub fn quartic<F: FiniteField>([x, y, z]: [F; 3]) -> F {
    let x2 = x * x;
    x2 * x2 + y * y * y * z - y * z * z * z
}

pub(crate) fn dot<F: FiniteField>(a: [F; 3], b: [F; 3]) -> F {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross<F: FiniteField>(a: [F; 3], b: [F; 3]) -> [F; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
