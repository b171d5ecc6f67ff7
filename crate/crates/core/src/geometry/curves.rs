use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::field::FiniteField;
use crate::gf::Gf81;

use super::{bitangents, cross, dot, quartic, BitangentKind, BitangentLine, GeometryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn value(self) -> Gf81 {
        match self {
            Sign::Plus => Gf81::one(),
            Sign::Minus => -Gf81::one(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Preimage of a bitangent: the line together with `w = ±√−1·ℓ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExcCurve {
    pub line: BitangentLine,
    pub sign: Sign,
}

impl fmt::Display for ExcCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}[{}]", self.sign, self.line.kind)
    }
}

fn branch(sign: Sign, tangent: [Gf81; 3], p: [Gf81; 3]) -> Gf81 {
    let l = dot(tangent, p);
    sign.value() * Gf81::SQRT_MINUS_ONE * l * l
}

impl ExcCurve {
    pub fn kind(&self) -> BitangentKind {
        self.line.kind
    }

    /// `w` on the curve over the plane point `p` (scales with weight 2).
    pub fn w_at(&self, p: [Gf81; 3]) -> Gf81 {
        branch(self.sign, self.line.tangent, p)
    }

    /// `w² = −Q` at every point of the line.
    pub fn lies_on_surface(&self) -> bool {
        self.line.points().into_iter().all(|p| {
            let w = self.w_at(p);
            w * w == -quartic(p)
        })
    }

    /// Membership of the weighted point `(x, y, z, w)`.
    pub fn contains(&self, p: [Gf81; 4]) -> bool {
        let v = [p[0], p[1], p[2]];
        self.line.contains(v) && self.w_at(v) == p[3]
    }

    pub fn is_conjugate(&self, other: &ExcCurve) -> bool {
        self.line.kind == other.line.kind && self.sign != other.sign
    }

    /// Whether the data `(line, ℓ, sign)` describes this curve.
    fn matches(&self, coeffs: [Gf81; 3], tangent: [Gf81; 3], sign: Sign) -> bool {
        if !self.line.same_line(coeffs) {
            return false;
        }
        let [u, v] = self.line.basis();
        let uv = [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
        [u, v, uv].into_iter().all(|p| self.w_at(p) == branch(sign, tangent, p))
    }
}

/// The 56 curves in bitangent order, `+` before `−`.
pub fn exceptional_curves() -> Vec<ExcCurve> {
    bitangents()
        .into_iter()
        .flat_map(|line| [Sign::Plus, Sign::Minus].map(|sign| ExcCurve { line, sign }))
        .collect()
}

/// `−1` on the diagonal, 2 for conjugate pairs, otherwise 1 iff the two
/// branches agree over the common point of the two lines.
pub fn intersect(c1: &ExcCurve, c2: &ExcCurve) -> i64 {
    if c1 == c2 {
        return -1;
    }
    if c1.is_conjugate(c2) {
        return 2;
    }
    let p = cross(c1.line.coeffs, c2.line.coeffs);
    i64::from(c1.w_at(p) == c2.w_at(p))
}

pub fn intersection_matrix(curves: &[ExcCurve]) -> Vec<Vec<i64>> {
    curves
        .iter()
        .map(|a| curves.iter().map(|b| intersect(a, b)).collect())
        .collect()
}

/// Image index of every curve under coefficient-wise Frobenius.
pub fn frobenius_permutation(curves: &[ExcCurve]) -> Result<Vec<usize>, GeometryError> {
    curves
        .iter()
        .map(|c| {
            let coeffs = c.line.coeffs.map(|a| a.frobenius());
            let tangent = c.line.tangent.map(|a| a.frobenius());
            // Frobenius sends √−1 to −√−1
            let sign = c.sign.flip();
            curves
                .iter()
                .position(|d| d.matches(coeffs, tangent, sign))
                .ok_or_else(|| GeometryError::Inconsistent(format!("Frobenius image of {c} is not exceptional")))
        })
        .collect()
}

/// The points `[1:0:0:±√−1]` and the indices of the curves through each.
pub fn eckardt_points(curves: &[ExcCurve]) -> Vec<([Gf81; 4], Vec<usize>)> {
    [Gf81::SQRT_MINUS_ONE, -Gf81::SQRT_MINUS_ONE]
        .into_iter()
        .map(|w| {
            let p = [Gf81::one(), Gf81::zero(), Gf81::zero(), w];
            let through = (0..curves.len()).filter(|&i| curves[i].contains(p)).collect();
            (p, through)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(curves: &[ExcCurve], kind: BitangentKind, sign: Sign) -> ExcCurve {
        *curves.iter().find(|c| c.kind() == kind && c.sign == sign).unwrap()
    }

    #[test]
    fn all_curves_on_surface() {
        let curves = exceptional_curves();
        assert_eq!(curves.len(), 56);
        assert!(curves.iter().all(|c| c.lies_on_surface()));
    }

    #[test]
    fn special_intersections() {
        let cs = exceptional_curves();
        let yz_p = find(&cs, BitangentKind::YEqZ, Sign::Plus);
        let yz_m = find(&cs, BitangentKind::YEqZ, Sign::Minus);
        let y0_p = find(&cs, BitangentKind::YZero, Sign::Plus);
        let y0_m = find(&cs, BitangentKind::YZero, Sign::Minus);
        assert_eq!(intersect(&yz_p, &yz_m), 2);
        assert_eq!(intersect(&yz_p, &y0_p), 1);
        assert_eq!(intersect(&yz_p, &y0_m), 0);
        assert_eq!(intersect(&yz_p, &yz_p), -1);
        let meet = [Gf81::one(), Gf81::zero(), Gf81::zero(), Gf81::SQRT_MINUS_ONE];
        assert!(yz_p.contains(meet) && y0_p.contains(meet));
    }

    #[test]
    fn frobenius_flips_signs_and_has_order_four() {
        let cs = exceptional_curves();
        let perm = frobenius_permutation(&cs).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            assert_ne!(cs[i].sign, cs[j].sign);
        }
        let mut sorted = perm.clone();
        sorted.sort();
        assert_eq!(sorted, (0..56).collect::<Vec<_>>());
        for i in 0..56 {
            let mut k = i;
            for _ in 0..4 {
                k = perm[k];
            }
            assert_eq!(k, i);
        }
        assert!((0..56).any(|i| perm[perm[i]] != i));
    }

    #[test]
    fn eckardt_points_carry_four_curves() {
        let cs = exceptional_curves();
        for (_, through) in eckardt_points(&cs) {
            assert_eq!(through.len(), 4);
        }
    }

    #[test]
    fn slanted_group_meetings() {
        let cs = exceptional_curves();
        let m = intersection_matrix(&cs);
        let group = |c: &ExcCurve| match c.kind() {
            BitangentKind::Slanted { a, .. } => Some(a),
            _ => None,
        };
        for (i, ci) in cs.iter().enumerate() {
            let Some(gi) = group(ci) else { continue };
            for a2 in 1..=8 {
                let met: Vec<usize> = (0..56)
                    .filter(|&j| group(&cs[j]) == Some(a2) && j != i && m[i][j] > 0)
                    .collect();
                let same = met.iter().filter(|&&j| cs[j].sign == ci.sign).count();
                if a2 == gi {
                    // the conjugate plus two curves of the same sign
                    assert_eq!(met.len(), 3);
                    assert_eq!(same, 2);
                } else {
                    assert_eq!(met.len(), 3);
                    assert_eq!(same, 1);
                }
            }
            // exactly one of the two curves over each special line; over y=0 the same-sign one
            for kind in [BitangentKind::YEqZ, BitangentKind::YEqNegZ, BitangentKind::YZero, BitangentKind::ZZero] {
                let met: Vec<usize> = (0..56).filter(|&j| cs[j].kind() == kind && m[i][j] > 0).collect();
                assert_eq!(met.len(), 1);
                if kind == BitangentKind::YZero {
                    assert_eq!(cs[met[0]].sign, ci.sign);
                }
            }
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let z0 = cs.iter().position(|c| c.kind() == BitangentKind::ZZero && c.sign == sign).unwrap();
            for a in 1..=8 {
                let n = (0..56).filter(|&j| group(&cs[j]) == Some(a) && m[z0][j] > 0).count();
                assert_eq!(n, 3);
            }
        }
    }
}
