use num_traits::{One, Zero};
use serde::Serialize;

use crate::field::FiniteField;
use crate::gf::Gf81;
use crate::IntMatrix;

use super::{quartic, GeometryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub k: u32,
    pub q: u64,
    pub enumerated: u64,
    /// `q² + q·tr(mᵏ) + 1`
    pub weil: i64,
}

/// Normalized points of P² over F_{3^k}: first nonzero coordinate 1.
fn plane_points(field: &[Gf81]) -> Vec<[Gf81; 3]> {
    let (o, z) = (Gf81::one(), Gf81::zero());
    let mut pts = Vec::with_capacity(field.len() * field.len() + field.len() + 1);
    for &b in field {
        for &c in field {
            pts.push([o, b, c]);
        }
    }
    for &c in field {
        pts.push([z, o, c]);
    }
    pts.push([z, z, o]);
    pts
}

fn check_degree(k: u32) -> Result<(), GeometryError> {
    if matches!(k, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(GeometryError::Inconsistent(format!("F_3^{k} is not a subfield of F81")))
    }
}

/// Every point `[x:y:z:w]` of the surface over F_{3^k}, `k ∈ {1, 2, 4}`,
/// with `(x, y, z)` normalized.
pub fn surface_points(k: u32) -> Result<Vec<[Gf81; 4]>, GeometryError> {
    check_degree(k)?;
    let field = Gf81::subfield(k);
    let mut out = Vec::new();
    for p in plane_points(&field) {
        let target = -quartic(p);
        for &w in &field {
            if w * w == target {
                out.push([p[0], p[1], p[2], w]);
            }
        }
    }
    Ok(out)
}

/// Enumerated point count over F_{3^k} next to the Weil prediction from
/// the Frobenius matrix.
pub fn count_points(k: u32, frobenius: &IntMatrix) -> Result<PointCount, GeometryError> {
    check_degree(k)?;
    let field = Gf81::subfield(k);
    let q = field.len() as u64;
    let half = (q - 1) / 2;
    let enumerated = plane_points(&field)
        .into_iter()
        .map(|p| {
            let v = -quartic(p);
            if v.is_zero() {
                1
            } else if v.pow(half).is_one() {
                2
            } else {
                0
            }
        })
        .sum();
    let tr = frobenius.pow(k)?.trace()?;
    let q = q as i64;
    Ok(PointCount { k, q: q as u64, enumerated, weil: q * q + q * tr + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_points() {
        let pts = surface_points(1).unwrap();
        let g = |v: [i64; 4]| v.map(|c| Gf81::from_ints([c, 0, 0, 0]));
        let expect = vec![g([0, 0, 1, 0]), g([0, 1, 0, 0]), g([0, 1, 1, 0]), g([0, 1, 2, 0])];
        let mut got = pts.clone();
        got.sort();
        let mut expect = expect;
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn counting_agrees_with_listing() {
        let id = IntMatrix::identity(8);
        for k in [1, 2] {
            assert_eq!(count_points(k, &id).unwrap().enumerated, surface_points(k).unwrap().len() as u64);
        }
        assert!(count_points(3, &id).is_err());
    }
}
