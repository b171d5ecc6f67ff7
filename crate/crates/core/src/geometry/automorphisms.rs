use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;

use crate::gf::{Gf3, Gf81};

use super::quartic;

pub type Mat3 = [[Gf3; 3]; 3];

/// Ternary form of degree ≤ 4 over F₃, dense in the exponents of x, y, z.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Form([[[Gf3; 5]; 5]; 5]);

impl Form {
    fn zero() -> Self {
        Form([[[Gf3::ZERO; 5]; 5]; 5])
    }

    fn linear(row: [Gf3; 3]) -> Self {
        let mut f = Self::zero();
        f.0[1][0][0] = row[0];
        f.0[0][1][0] = row[1];
        f.0[0][0][1] = row[2];
        f
    }

    fn mul(&self, other: &Form) -> Form {
        let mut out = Self::zero();
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in a.iter().enumerate() {
                for (k, &c) in b.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (i2, a2) in other.0.iter().enumerate().take(5 - i) {
                        for (j2, b2) in a2.iter().enumerate().take(5 - j) {
                            for (k2, &c2) in b2.iter().enumerate().take(5 - k) {
                                out.0[i + i2][j + j2][k + k2] += c * c2;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn add(&self, other: &Form, sign: Gf3) -> Form {
        let mut out = *self;
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    out.0[i][j][k] += sign * other.0[i][j][k];
                }
            }
        }
        out
    }

    fn scale(&self, c: Gf3) -> Form {
        self.add(self, c - Gf3::ONE)
    }
}

/// `Q(M·v)` as a form in `v`.
fn pullback(m: &Mat3) -> Form {
    let [l1, l2, l3] = m.map(Form::linear);
    let x2 = l1.mul(&l1);
    let y3 = l2.mul(&l2).mul(&l2);
    let z3 = l3.mul(&l3).mul(&l3);
    x2.mul(&x2).add(&y3.mul(&l3), Gf3::ONE).add(&l2.mul(&z3), Gf3::TWO)
}

fn det(m: &Mat3) -> Gf3 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Gf3::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(Gf3::ZERO, |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    out
}

fn identity() -> Mat3 {
    let mut m = [[Gf3::ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Gf3::ONE;
    }
    m
}

fn order(m: &Mat3) -> usize {
    let id = identity();
    let mut acc = *m;
    let mut k = 1;
    while acc != id {
        acc = mat_mul(&acc, m);
        k += 1;
    }
    k
}

fn apply(m: &Mat3, p: [Gf81; 4]) -> [Gf81; 4] {
    let v = [p[0], p[1], p[2]];
    let row = |r: [Gf3; 3]| (0..3).fold(Gf81::zero(), |acc, k| acc + Gf81::from(r[k]) * v[k]);
    [row(m[0]), row(m[1]), row(m[2]), p[3]]
}

fn all_matrices() -> impl Iterator<Item = Mat3> {
    (0..3usize.pow(9)).map(|mut n| {
        let mut m = [[Gf3::ZERO; 3]; 3];
        for row in m.iter_mut() {
            for c in row.iter_mut() {
                *c = Gf3::new((n % 3) as u8);
                n /= 3;
            }
        }
        m
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismGroup {
    /// Invertible matrices with `Q∘M = Q`.
    #[serde(skip)]
    pub preserving: Vec<Mat3>,
    /// Invertible matrices with `Q∘M = −Q` (no F₃-rational lift to the surface).
    pub anti_preserving: usize,
    /// Image of the preserving matrices in PGL₃(F₃).
    pub projective_order: usize,
    /// Preserving matrices of determinant 1.
    pub det_one: usize,
    /// Every determinant-1 element is `diag(1, A)` with `A ∈ SL(2, F₃)`.
    pub block_structure: bool,
    /// Element orders of the determinant-1 part match SL(2, 3).
    pub sl23_orders: bool,
    pub contains_yz_swap: bool,
    /// The lifts commute with `w ↦ −w` and preserve the surface over F₉.
    pub involution_commutes: bool,
    /// Surface automorphisms: projective elements times `w ↦ ±w`.
    pub surface_order: usize,
}

/// Matrices of GL₃(F₃) fixing the branch quartic up to a scalar.
pub fn automorphism_group() -> AutomorphismGroup {
    let q = pullback(&identity());
    let minus_q = q.scale(Gf3::TWO);
    let mut preserving = Vec::new();
    let mut anti_preserving = 0;
    for m in all_matrices().filter(|m| !det(m).is_zero()) {
        let p = pullback(&m);
        if p == q {
            preserving.push(m);
        } else if p == minus_q {
            anti_preserving += 1;
        }
    }
    let neg = |m: &Mat3| m.map(|r| r.map(|c| -c));
    let projective: HashSet<Mat3> = preserving.iter().map(|m| m.min(&neg(m)).to_owned()).collect();
    let det_one: Vec<Mat3> = preserving.iter().copied().filter(|m| det(m) == Gf3::ONE).collect();
    let z = Gf3::ZERO;
    let block_structure = det_one.iter().all(|m| {
        m[0] == [Gf3::ONE, z, z] && m[1][0] == z && m[2][0] == z && m[1][1] * m[2][2] - m[1][2] * m[2][1] == Gf3::ONE
    });
    let mut orders = [0usize; 7];
    for m in &det_one {
        let o = order(m);
        if o < orders.len() {
            orders[o] += 1;
        }
    }
    let sl23_orders = orders == [0, 1, 1, 8, 6, 0, 8];
    let swap: Mat3 = [[Gf3::ONE, z, z], [z, z, Gf3::ONE], [z, Gf3::TWO, z]];
    let contains_yz_swap = preserving.contains(&swap);

    let points = super::surface_points(2).unwrap_or_default();
    let on_surface = |p: [Gf81; 4]| -(p[3] * p[3]) == quartic([p[0], p[1], p[2]]);
    let flip = |p: [Gf81; 4]| [p[0], p[1], p[2], -p[3]];
    let involution_commutes = preserving.iter().all(|m| {
        points.iter().all(|&p| {
            let image = apply(m, p);
            on_surface(image) && apply(m, flip(p)) == flip(image)
        })
    });
    AutomorphismGroup {
        anti_preserving,
        projective_order: projective.len(),
        det_one: det_one.len(),
        block_structure,
        sl23_orders,
        contains_yz_swap,
        involution_commutes,
        surface_order: 2 * projective.len(),
        preserving,
    }
}
