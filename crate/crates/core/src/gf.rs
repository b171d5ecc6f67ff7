//! Arithmetic in F₃ and in F₈₁ = F₃[ζ]/(ζ⁴ + ζ² + 2).
//!
//! `Gf81` stores the four F₃ coordinates of `c0 + c1·ζ + c2·ζ² + c3·ζ³`.
//! Reduction uses `ζ⁴ = 2ζ² + 1`. The modulus is one of the two irreducible
//! quartic factors of `x⁸ + 1` over F₃, so ζ is a primitive 16th root of unity
//! and `ζ² + 2` squares to `-1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{eval_dense, FiniteField};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("root search on the zero polynomial")]
    ZeroPolynomial,
}

/// Residue class modulo 3, always kept in `{0, 1, 2}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Gf3(u8);

impl Gf3 {
    pub const ZERO: Gf3 = Gf3(0);
    pub const ONE: Gf3 = Gf3(1);
    pub const TWO: Gf3 = Gf3(2);

    pub const fn new(v: u8) -> Self {
        Gf3(v % 3)
    }

    pub fn from_i64(v: i64) -> Self {
        Gf3(v.rem_euclid(3) as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// Symmetric lift to `{-1, 0, 1}`.
    pub fn signed(self) -> i64 {
        match self.0 {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }
}

impl fmt::Debug for Gf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Gf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Gf3 {
    type Output = Gf3;
    fn add(self, rhs: Gf3) -> Gf3 {
        let s = self.0 + rhs.0;
        Gf3(if s >= 3 { s - 3 } else { s })
    }
}

impl Sub for Gf3 {
    type Output = Gf3;
    fn sub(self, rhs: Gf3) -> Gf3 {
        self + (-rhs)
    }
}

impl Neg for Gf3 {
    type Output = Gf3;
    fn neg(self) -> Gf3 {
        Gf3(if self.0 == 0 { 0 } else { 3 - self.0 })
    }
}

impl Mul for Gf3 {
    type Output = Gf3;
    fn mul(self, rhs: Gf3) -> Gf3 {
        Gf3((self.0 * rhs.0) % 3)
    }
}

impl AddAssign for Gf3 {
    fn add_assign(&mut self, rhs: Gf3) {
        *self = *self + rhs;
    }
}

impl SubAssign for Gf3 {
    fn sub_assign(&mut self, rhs: Gf3) {
        *self = *self - rhs;
    }
}

impl MulAssign for Gf3 {
    fn mul_assign(&mut self, rhs: Gf3) {
        *self = *self * rhs;
    }
}

impl Zero for Gf3 {
    fn zero() -> Self {
        Gf3(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Gf3 {
    fn one() -> Self {
        Gf3(1)
    }
}

impl FiniteField for Gf3 {
    const ORDER: usize = 3;

    fn elements() -> Vec<Self> {
        vec![Gf3(0), Gf3(1), Gf3(2)]
    }

    fn from_gf3(c: Gf3) -> Self {
        c
    }

    fn frobenius(self) -> Self {
        self
    }

    fn inv(self) -> Option<Self> {
        // 1·1 = 1 and 2·2 = 4 = 1
        (self.0 != 0).then_some(self)
    }
}

/// Element `c0 + c1·ζ + c2·ζ² + c3·ζ³` of F₈₁.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Gf81 {
    c: [Gf3; 4],
}

impl Gf81 {
    pub const ZERO: Gf81 = Gf81 { c: [Gf3::ZERO; 4] };
    pub const ONE: Gf81 = Gf81 { c: [Gf3::ONE, Gf3::ZERO, Gf3::ZERO, Gf3::ZERO] };
    /// The fixed root ζ of `x⁴ + x² + 2`.
    pub const ZETA: Gf81 = Gf81 { c: [Gf3::ZERO, Gf3::ONE, Gf3::ZERO, Gf3::ZERO] };
    /// `ζ² + 2`, the chosen square root of -1.
    pub const SQRT_MINUS_ONE: Gf81 = Gf81 { c: [Gf3::TWO, Gf3::ZERO, Gf3::ONE, Gf3::ZERO] };

    pub const fn from_coeffs(c: [Gf3; 4]) -> Self {
        Gf81 { c }
    }

    /// Coordinates from small integers, reduced mod 3.
    pub fn from_ints(c: [i64; 4]) -> Self {
        Gf81 { c: c.map(Gf3::from_i64) }
    }

    pub fn coeffs(self) -> [Gf3; 4] {
        self.c
    }

    /// Base-3 index `c0 + 3c1 + 9c2 + 27c3` in `0..81`.
    pub fn index(self) -> usize {
        self.c.iter().rev().fold(0, |acc, c| acc * 3 + c.value() as usize)
    }

    pub fn from_index(mut n: usize) -> Self {
        let mut c = [Gf3::ZERO; 4];
        for slot in c.iter_mut() {
            *slot = Gf3::new((n % 3) as u8);
            n /= 3;
        }
        Gf81 { c }
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_gf3(self) -> Option<Gf3> {
        (self.c[1..].iter().all(|c| c.is_zero())).then_some(self.c[0])
    }

    /// Elements fixed by `frobenius^k` (the subfield F_{3^k} for k | 4).
    pub fn subfield(k: u32) -> Vec<Gf81> {
        Self::elements()
            .into_iter()
            .filter(|a| a.frobenius_pow(k) == *a)
            .collect()
    }

    pub fn frobenius_pow(self, k: u32) -> Self {
        (0..k).fold(self, |acc, _| acc.frobenius())
    }
}

impl fmt::Debug for Gf81 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders `c3*z^3+c2*z^2+c1*z+c0`, omitting zero terms and unit coefficients.
impl fmt::Display for Gf81 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for k in (0..4).rev() {
            let c = self.c[k].value();
            if c == 0 {
                continue;
            }
            let term = match (k, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "z".to_string(),
                (1, _) => format!("{c}*z"),
                (_, 1) => format!("z^{k}"),
                _ => format!("{c}*z^{k}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Add for Gf81 {
    type Output = Gf81;
    fn add(self, rhs: Gf81) -> Gf81 {
        Gf81 { c: std::array::from_fn(|i| self.c[i] + rhs.c[i]) }
    }
}

impl Sub for Gf81 {
    type Output = Gf81;
    fn sub(self, rhs: Gf81) -> Gf81 {
        Gf81 { c: std::array::from_fn(|i| self.c[i] - rhs.c[i]) }
    }
}

impl Neg for Gf81 {
    type Output = Gf81;
    fn neg(self) -> Gf81 {
        Gf81 { c: self.c.map(|c| -c) }
    }
}

impl Mul for Gf81 {
    type Output = Gf81;
    fn mul(self, rhs: Gf81) -> Gf81 {
        let mut prod = [Gf3::ZERO; 7];
        for i in 0..4 {
            for j in 0..4 {
                prod[i + j] += self.c[i] * rhs.c[j];
            }
        }
        // ζ^k = 2ζ^(k-2) + ζ^(k-4) for k ≥ 4
        for k in (4..7).rev() {
            let top = prod[k];
            prod[k] = Gf3::ZERO;
            prod[k - 2] += Gf3::TWO * top;
            prod[k - 4] += top;
        }
        Gf81 { c: [prod[0], prod[1], prod[2], prod[3]] }
    }
}

impl AddAssign for Gf81 {
    fn add_assign(&mut self, rhs: Gf81) {
        *self = *self + rhs;
    }
}

impl SubAssign for Gf81 {
    fn sub_assign(&mut self, rhs: Gf81) {
        *self = *self - rhs;
    }
}

impl MulAssign for Gf81 {
    fn mul_assign(&mut self, rhs: Gf81) {
        *self = *self * rhs;
    }
}

impl Zero for Gf81 {
    fn zero() -> Self {
        Gf81::ZERO
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }
}

impl One for Gf81 {
    fn one() -> Self {
        Gf81::ONE
    }
}

impl From<Gf3> for Gf81 {
    fn from(c: Gf3) -> Self {
        Gf81 { c: [c, Gf3::ZERO, Gf3::ZERO, Gf3::ZERO] }
    }
}

impl FiniteField for Gf81 {
    const ORDER: usize = 81;

    fn elements() -> Vec<Self> {
        (0..81).map(Gf81::from_index).collect()
    }

    fn from_gf3(c: Gf3) -> Self {
        c.into()
    }

    fn frobenius(self) -> Self {
        self * self * self
    }
}

/// Cubing map; an automorphism of order 4 fixing exactly F₃.
pub fn frobenius(a: Gf81) -> Gf81 {
    a.frobenius()
}

pub fn gf81_mul(a: Gf81, b: Gf81) -> Gf81 {
    a * b
}

/// Every root in F₈₁ of a nonzero F₃-polynomial (ascending coefficients),
/// by scanning all 81 elements. Multiplicities are ignored.
pub fn roots_in_gf81(coeffs: &[Gf3]) -> Result<Vec<Gf81>, GfError> {
    let lifted: Vec<Gf81> = coeffs.iter().map(|&c| c.into()).collect();
    roots_in(&lifted)
}

/// Roots of a nonzero polynomial with coefficients in `F`, by exhaustive scan.
pub fn roots_in<F: FiniteField>(coeffs: &[F]) -> Result<Vec<F>, GfError> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(GfError::ZeroPolynomial);
    }
    Ok(F::elements()
        .into_iter()
        .filter(|&a| eval_dense(coeffs, a).is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: [i64; 4]) -> Gf81 {
        Gf81::from_ints(c)
    }

    #[test]
    fn gf3_tables() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                assert_eq!((Gf3::new(a) + Gf3::new(b)).value(), (a + b) % 3);
                assert_eq!((Gf3::new(a) * Gf3::new(b)).value(), (a * b) % 3);
            }
            let x = Gf3::new(a);
            if a != 0 {
                assert_eq!(x * x * x * x, Gf3::ONE);
                assert_eq!(x.inv(), Some(x));
            }
        }
    }

    #[test]
    fn zeta_times_zeta_cubed() {
        assert_eq!(Gf81::ZETA * g([0, 0, 0, 1]), g([1, 0, 2, 0]));
    }

    #[test]
    fn sqrt_minus_one() {
        let i = Gf81::SQRT_MINUS_ONE;
        assert_eq!(i * i, g([2, 0, 0, 0]));
        let roots: Vec<Gf81> = Gf81::elements()
            .into_iter()
            .filter(|a| *a * *a == -Gf81::ONE)
            .collect();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&i) && roots.contains(&-i));
    }

    #[test]
    fn identity_and_group_order() {
        for a in Gf81::elements() {
            assert_eq!(Gf81::ONE * a, a);
            assert_eq!(a.pow(81), a);
            if !a.is_zero() {
                assert_eq!(a.pow(80), Gf81::ONE);
                assert_eq!(a * a.inv().unwrap(), Gf81::ONE);
            }
        }
    }

    #[test]
    fn frobenius_properties() {
        for c in 0..3 {
            let a: Gf81 = Gf3::new(c).into();
            assert_eq!(frobenius(a), a);
        }
        assert_eq!(Gf81::ZETA.frobenius_pow(4), Gf81::ZETA);
        assert_ne!(Gf81::ZETA.frobenius_pow(2), Gf81::ZETA);
        // (ζ²+2)³ expanded by hand: ζ⁶ + 2 = ζ²(2ζ²+1) + 2 = 2ζ⁴ + ζ² + 2
        //   = 2(2ζ²+1) + ζ² + 2 = 5ζ² + 4 = 2ζ² + 1 = -(ζ²+2)
        assert_eq!(frobenius(Gf81::SQRT_MINUS_ONE), g([1, 0, 2, 0]));
        assert_eq!(frobenius(Gf81::SQRT_MINUS_ONE), -Gf81::SQRT_MINUS_ONE);
        let fixed = Gf81::elements().into_iter().filter(|a| frobenius(*a) == *a).count();
        assert_eq!(fixed, 3);
        assert_eq!(Gf81::subfield(2).len(), 9);
        assert_eq!(Gf81::subfield(4).len(), 81);
    }

    #[test]
    fn frobenius_is_a_ring_map() {
        let all = Gf81::elements();
        for &a in &all {
            for &b in &all {
                assert_eq!(frobenius(a * b), frobenius(a) * frobenius(b));
                assert_eq!(frobenius(a + b), frobenius(a) + frobenius(b));
            }
        }
    }

    #[test]
    fn multiplication_laws() {
        let all = Gf81::elements();
        for &a in all.iter().step_by(5) {
            for &b in all.iter().step_by(3) {
                assert_eq!(a * b, b * a);
                for &c in all.iter().step_by(7) {
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }

    #[test]
    fn quartic_roots() {
        let p = |c: &[i64]| c.iter().map(|&v| Gf3::from_i64(v)).collect::<Vec<_>>();
        let first = roots_in_gf81(&p(&[2, 0, 1, 0, 1])).unwrap();
        assert_eq!(first.len(), 4);
        assert!(first.contains(&Gf81::ZETA));
        for r in &first {
            assert!(first.contains(&frobenius(*r)));
        }
        // the orbit of ζ is the whole root set
        let orbit: Vec<Gf81> = (0..4).map(|k| Gf81::ZETA.frobenius_pow(k)).collect();
        for r in &first {
            assert!(orbit.contains(r));
        }
        let eighth = roots_in_gf81(&p(&[1, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(eighth.len(), 8);
        let second = roots_in_gf81(&p(&[2, 0, 2, 0, 1])).unwrap();
        for r in first.iter().chain(&second) {
            assert!(eighth.contains(r));
        }
        assert_eq!(roots_in_gf81(&p(&[2, 1])).unwrap(), vec![Gf81::ONE]);
        assert_eq!(roots_in_gf81(&p(&[0, 0])), Err(GfError::ZeroPolynomial));
    }

    #[test]
    fn display() {
        assert_eq!(Gf81::ZERO.to_string(), "0");
        assert_eq!(g([1, 0, 2, 2]).to_string(), "2*z^3+2*z^2+1");
        assert_eq!(g([0, 1, 1, 0]).to_string(), "z^2+z");
        assert_eq!(Gf81::from_index(g([2, 1, 0, 1]).index()), g([2, 1, 0, 1]));
    }
}
