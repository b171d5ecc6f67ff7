//! Curves as orbits of parametrizations under reparametrization by PGL₂(F₃).
//!
//! A Möbius map `t ↦ (a·t + b)/(c·t + e)` acts on a level-`d` quadruple by
//! substitution and clearing denominators with `(c·t + e)^d` for `x, y, z` and
//! `(c·t + e)^(2d)` for `w`, followed by scalar normalization.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::Mul;

use num_traits::Zero;
use thiserror::Error;

use crate::field::FiniteField;
use crate::gf::Gf3;
use crate::search::Param;
use crate::Poly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("x = y = z = 0 has no scalar normalization: {0}")]
    Degenerate(Box<Param>),
    #[error("input member is not scalar-normalized: {0}")]
    NotNormalized(Box<Param>),
    #[error("orbit of {member} leaves the input set at {image}")]
    Incomplete { member: Box<Param>, image: Box<Param> },
}

/// Invertible 2×2 matrix over F₃ modulo scalars, stored with its first
/// nonzero entry (row-major) equal to 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Moebius {
    m: [[Gf3; 2]; 2],
}

impl Moebius {
    /// `None` for singular matrices.
    pub fn new(a: Gf3, b: Gf3, c: Gf3, e: Gf3) -> Option<Self> {
        if (a * e - b * c).is_zero() {
            return None;
        }
        let lead = [a, b, c, e].into_iter().find(|v| !v.is_zero()).unwrap();
        let s = lead.inv().unwrap();
        Some(Moebius { m: [[a * s, b * s], [c * s, e * s]] })
    }

    pub fn identity() -> Self {
        Moebius::new(Gf3::ONE, Gf3::ZERO, Gf3::ZERO, Gf3::ONE).unwrap()
    }

    /// All 24 elements of PGL₂(F₃), sorted.
    pub fn all() -> Vec<Moebius> {
        let mut out = BTreeSet::new();
        for n in 0..81u8 {
            let d = |k: u32| Gf3::new(n / 3u8.pow(k) % 3);
            if let Some(g) = Moebius::new(d(0), d(1), d(2), d(3)) {
                out.insert(g);
            }
        }
        out.into_iter().collect()
    }

    pub fn matrix(&self) -> [[Gf3; 2]; 2] {
        self.m
    }

    /// Smallest `k ≥ 1` with `g^k = 1`.
    pub fn order(&self) -> usize {
        let id = Moebius::identity();
        let mut acc = *self;
        let mut k = 1;
        while acc != id {
            acc = acc * *self;
            k += 1;
        }
        k
    }

    pub fn inverse(&self) -> Moebius {
        let [[a, b], [c, e]] = self.m;
        Moebius::new(e, -b, -c, a).unwrap()
    }

    /// Image of a point of P¹(F) (`None` is ∞).
    pub fn apply<F: FiniteField>(&self, t: Option<F>) -> Option<F> {
        let [[a, b], [c, e]] = self.m.map(|r| r.map(F::from_gf3));
        let (num, den) = match t {
            Some(t) => (a * t + b, c * t + e),
            None => (a, c),
        };
        den.inv().map(|inv| num * inv)
    }
}

/// Composition in substitution order: `act(g * h, p) = act(g, act(h, p))`,
/// i.e. `g * h` is the map `t ↦ h(g(t))`.
impl Mul for Moebius {
    type Output = Moebius;
    fn mul(self, rhs: Moebius) -> Moebius {
        let g = self.m;
        let h = rhs.m;
        let e = |i: usize, j: usize| h[i][0] * g[0][j] + h[i][1] * g[1][j];
        Moebius::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1)).unwrap()
    }
}

impl fmt::Debug for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, e]] = self.m;
        write!(f, "[[{a},{b}],[{c},{e}]]")
    }
}

/// Canonical representative of `{(x,y,z,w), (2x,2y,2z,w)}`: the first
/// nonzero coefficient of `x, y, z` (in that order, ascending degree) is 1.
pub fn scalar_normalize(p: &Param) -> Result<Param, OrbitError> {
    let lead = [p.x, p.y, p.z]
        .into_iter()
        .find_map(|q| q.coeffs().into_iter().find(|c| !c.is_zero()))
        .ok_or(OrbitError::Degenerate(Box::new(*p)))?;
    Ok(if lead == Gf3::ONE { *p } else { p.scale_xyz() })
}

/// `Σ q_i (a t + b)^i (c t + e)^(budget − i)`.
fn substitute(q: Poly, budget: usize, num: &[Poly], den: &[Poly]) -> Poly {
    let mut acc = Poly::zero();
    for (i, c) in q.coeffs().into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = num[i].mul(den[budget - i]).expect("degree stays within the budget");
        acc = acc + term.scale(c);
    }
    acc
}

fn powers(base: Poly, n: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly::one());
    for k in 1..=n {
        out.push(out[k - 1].mul(base).expect("degree stays within the budget"));
    }
    out
}

/// Reparametrizes by `t ↦ (a t + b)/(c t + e)` and normalizes the scalar.
pub fn act(g: &Moebius, p: &Param) -> Param {
    let [[a, b], [c, e]] = g.m;
    let d = p.level as usize;
    let num = powers(Poly::monomial(a, 1) + Poly::monomial(b, 0), 2 * d);
    let den = powers(Poly::monomial(c, 1) + Poly::monomial(e, 0), 2 * d);
    let q = Param::new(
        substitute(p.x, d, &num, &den),
        substitute(p.y, d, &num, &den),
        substitute(p.z, d, &num, &den),
        substitute(p.w, 2 * d, &num, &den),
        p.level,
    );
    scalar_normalize(&q).unwrap_or(q)
}

/// One curve: the PGL₂(F₃)-orbit of a normalized parametrization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveOrbit {
    /// Least member in the canonical order.
    pub representative: Param,
    pub members: Vec<Param>,
}

impl CurveOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Orbit of `p`, sorted.
pub fn orbit_of(p: &Param) -> Vec<Param> {
    let set: BTreeSet<Param> = Moebius::all().iter().map(|g| act(g, p)).collect();
    set.into_iter().collect()
}

/// Partitions normalized, level-exact, nondegenerate parametrizations into
/// orbits, sorted by representative.
pub fn orbit_partition(params: &[Param]) -> Result<Vec<CurveOrbit>, OrbitError> {
    let input: HashSet<Param> = params.iter().copied().collect();
    for p in params {
        if scalar_normalize(p)? != *p {
            return Err(OrbitError::NotNormalized(Box::new(*p)));
        }
    }
    let mut sorted: Vec<Param> = input.iter().copied().collect();
    sorted.sort_unstable();
    let mut seen: HashSet<Param> = HashSet::new();
    let mut out = Vec::new();
    for p in sorted {
        if seen.contains(&p) {
            continue;
        }
        let members = orbit_of(&p);
        for m in &members {
            if !input.contains(m) {
                return Err(OrbitError::Incomplete { member: Box::new(p), image: Box::new(*m) });
            }
            seen.insert(*m);
        }
        out.push(CurveOrbit { representative: members[0], members });
    }
    out.sort_by_key(|o| o.representative);
    Ok(out)
}

/// Orbit size → number of orbits with that size.
pub fn size_histogram(orbits: &[CurveOrbit]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for o in orbits {
        *out.entry(o.size()).or_insert(0) += 1;
    }
    out
}
