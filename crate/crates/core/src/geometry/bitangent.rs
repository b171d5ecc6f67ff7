use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::field::FiniteField;
use crate::gf::{roots_in_gf81, Gf3, Gf81};

use super::{cross, dot, quartic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BitangentKind {
    YEqZ,
    YEqNegZ,
    YZero,
    ZZero,
    /// `x = a·z + b·y`, with 1-based labels of `a` and `b`.
    Slanted { a: usize, b: usize },
}

impl fmt::Display for BitangentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitangentKind::YEqZ => write!(f, "y=z"),
            BitangentKind::YEqNegZ => write!(f, "y=-z"),
            BitangentKind::YZero => write!(f, "y=0"),
            BitangentKind::ZZero => write!(f, "z=0"),
            BitangentKind::Slanted { a, b } => write!(f, "{a},{b}"),
        }
    }
}

/// A bitangent `l·(x,y,z) = 0` of the branch quartic together with a linear
/// form `ℓ` such that the quartic restricted to the line is `ℓ⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitangentLine {
    pub kind: BitangentKind,
    pub coeffs: [Gf81; 3],
    pub tangent: [Gf81; 3],
    pub a: Option<Gf81>,
    pub b: Option<Gf81>,
}

/// Roots of `x⁸ + 1`: ζ and its Frobenius images, then the roots of
/// `x⁴ + 2x² + 2` in Frobenius order starting from the smallest.
pub fn eighth_roots_of_minus_one() -> Vec<Gf81> {
    let cycle = |start: Gf81| (0..4).map(move |k| start.frobenius_pow(k));
    let g = |v: u8| Gf3::new(v);
    let second = roots_in_gf81(&[g(2), g(0), g(2), g(0), g(1)]).expect("nonzero polynomial");
    let start = *second.iter().min().expect("quartic splits in F81");
    cycle(Gf81::ZETA).chain(cycle(start)).collect()
}

/// Solutions `b` of `a·b³ − a³·b + 1 = 0`, sorted by coefficient tuple.
pub fn b_values(a: Gf81) -> Vec<Gf81> {
    let a3 = a * a * a;
    let mut bs: Vec<Gf81> = Gf81::elements()
        .into_iter()
        .filter(|&b| (a * b * b * b - a3 * b + Gf81::one()).is_zero())
        .collect();
    bs.sort();
    bs
}

/// The 28 bitangents: four special lines, then `x = az + by` by root label.
pub fn bitangents() -> Vec<BitangentLine> {
    let o = Gf81::one();
    let z = Gf81::zero();
    let x_form = [o, z, z];
    let special = [
        (BitangentKind::YEqZ, [z, o, -o]),
        (BitangentKind::YEqNegZ, [z, o, o]),
        (BitangentKind::YZero, [z, o, z]),
        (BitangentKind::ZZero, [z, z, o]),
    ];
    let mut out: Vec<BitangentLine> = special
        .into_iter()
        .map(|(kind, coeffs)| BitangentLine { kind, coeffs, tangent: x_form, a: None, b: None })
        .collect();
    for (ai, a) in eighth_roots_of_minus_one().into_iter().enumerate() {
        let a5 = a.pow(5);
        for (bi, b) in b_values(a).into_iter().enumerate() {
            out.push(BitangentLine {
                kind: BitangentKind::Slanted { a: ai + 1, b: bi + 1 },
                coeffs: [o, -b, -a],
                tangent: [o, a5, z],
                a: Some(a),
                b: Some(b),
            });
        }
    }
    out
}

impl BitangentLine {
    /// Two vectors spanning the line.
    pub fn basis(&self) -> [[Gf81; 3]; 2] {
        let l = self.coeffs;
        let k = (0..3).find(|&k| !l[k].is_zero()).expect("nonzero line");
        let inv = l[k].inv().unwrap();
        let mut vs = [[Gf81::zero(); 3]; 2];
        for (slot, j) in (0..3).filter(|&j| j != k).enumerate() {
            vs[slot][j] = Gf81::one();
            vs[slot][k] = -l[j] * inv;
        }
        vs
    }

    /// All 82 points of the line over F₈₁, one representative each.
    pub fn points(&self) -> Vec<[Gf81; 3]> {
        let [u, v] = self.basis();
        let mut pts: Vec<[Gf81; 3]> = Gf81::elements()
            .into_iter()
            .map(|t| [u[0] + t * v[0], u[1] + t * v[1], u[2] + t * v[2]])
            .collect();
        pts.push(v);
        pts
    }

    pub fn contains(&self, p: [Gf81; 3]) -> bool {
        dot(self.coeffs, p).is_zero()
    }

    pub fn same_line(&self, coeffs: [Gf81; 3]) -> bool {
        cross(self.coeffs, coeffs).iter().all(|c| c.is_zero())
    }

    /// The quartic restricted to the line equals `ℓ⁴` at every point, and
    /// `ℓ` is not identically zero there, so the line meets the quartic in a
    /// single point of multiplicity 4.
    pub fn tangency_certified(&self) -> bool {
        let pts = self.points();
        let fourth = |p: [Gf81; 3]| dot(self.tangent, p).pow(4);
        pts.iter().all(|&p| quartic(p) == fourth(p)) && pts.iter().any(|&p| !dot(self.tangent, p).is_zero())
    }

    /// Point where `ℓ` vanishes on the line.
    pub fn tangency_point(&self) -> [Gf81; 3] {
        cross(self.coeffs, self.tangent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_eighth_roots() {
        let roots = eighth_roots_of_minus_one();
        assert_eq!(roots.len(), 8);
        for r in &roots {
            assert_eq!(r.pow(8), -Gf81::one());
        }
        let mut sorted = roots.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        assert_eq!(roots[0], Gf81::ZETA);
    }

    #[test]
    fn b_values_for_zeta() {
        let expect = vec![
            Gf81::from_ints([0, 0, 0, 2]),
            Gf81::from_ints([0, 1, 0, 2]),
            Gf81::from_ints([0, 2, 0, 2]),
        ];
        assert_eq!(b_values(Gf81::ZETA), expect);
    }

    #[test]
    fn twenty_eight_certified_bitangents() {
        let lines = bitangents();
        assert_eq!(lines.len(), 28);
        assert!(lines.iter().all(|l| l.tangency_certified()));
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                assert!(!a.same_line(b.coeffs));
            }
        }
    }

    #[test]
    fn special_line_restriction_is_x_fourth() {
        let l = bitangents()[0];
        for p in l.points() {
            assert_eq!(quartic(p), p[0].pow(4));
        }
    }
}
