//! Bit-packed polynomials over F₃.
//!
//! Coefficient `i` lives in bits `2i..2i+1` of a machine word with the
//! encoding `0 ↦ 00`, `1 ↦ 01`, `2 ↦ 10`; the pattern `11` is never produced.
//! Addition works lane-parallel on the whole word, multiplication by `t^k` is
//! a shift, and multiplication by 2 swaps the two bits of every lane. This
//! makes `y·z³ − y³·z` and `x⁴ + w²` cheap enough to tabulate by the billion.
//!
//! With this layout comparing packed words compares coefficient sequences from
//! the top degree down, which is the same as comparing [`PolyIndex`] values.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{PrimInt, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FiniteField;
use crate::gf::Gf3;
use crate::search::Param;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("result needs degree {needed} but capacity is {capacity} coefficients")]
    CapacityOverflow { needed: usize, capacity: usize },
    #[error("index {0} is out of range for the packed capacity")]
    IndexOutOfRange(u128),
    #[error("invalid packed word: a coefficient uses the bit pattern 11")]
    InvalidWord,
    #[error("malformed polynomial text {0:?}")]
    Parse(String),
}

/// Machine word able to hold packed F₃ coefficients.
pub trait PackedWord: PrimInt + Hash + fmt::Debug + Default + Send + Sync + 'static {
    /// `0b0101…01`: the low bit of every 2-bit lane.
    const LO: Self;
    /// Number of coefficients that fit.
    const CAPACITY: usize;

    fn to_le_vec(self) -> Vec<u8>;
    fn from_le_slice(bytes: &[u8]) -> Option<Self>;
}

macro_rules! packed_word {
    ($t:ty, $lo:expr) => {
        impl PackedWord for $t {
            const LO: Self = $lo;
            const CAPACITY: usize = <$t>::BITS as usize / 2;

            fn to_le_vec(self) -> Vec<u8> {
                self.to_le_bytes().to_vec()
            }

            fn from_le_slice(bytes: &[u8]) -> Option<Self> {
                Some(<$t>::from_le_bytes(bytes.try_into().ok()?))
            }
        }
    };
}

packed_word!(u32, 0x5555_5555);
packed_word!(u64, 0x5555_5555_5555_5555);
packed_word!(u128, 0x5555_5555_5555_5555_5555_5555_5555_5555);

/// Lane-wise sum mod 3 of two packed words.
#[inline(always)]
pub fn packed_add<W: PackedWord>(a: W, b: W) -> W {
    let lo = W::LO;
    let al = a & lo;
    let ah = (a >> 1) & lo;
    let bl = b & lo;
    let bh = (b >> 1) & lo;
    let za = !(al | ah);
    let zb = !(bl | bh);
    // result is 1 for 0+1, 1+0, 2+2 and 2 for 0+2, 2+0, 1+1
    let rl = (al & zb) | (bl & za) | (ah & bh);
    let rh = (ah & zb) | (bh & za) | (al & bl);
    rl | (rh << 1)
}

/// Lane-wise negation (swap the two bits of each lane).
#[inline(always)]
pub fn packed_neg<W: PackedWord>(a: W) -> W {
    ((a & W::LO) << 1) | ((a >> 1) & W::LO)
}

#[inline(always)]
pub fn packed_sub<W: PackedWord>(a: W, b: W) -> W {
    packed_add(a, packed_neg(b))
}

/// Base-3 index of a polynomial: digit `i` is the coefficient of `t^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct PolyIndex(pub u128);

/// Polynomial over F₃ packed two bits per coefficient into one word `W`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PackedPoly<W: PackedWord> {
    bits: W,
}

impl<W: PackedWord> PackedPoly<W> {
    pub const CAPACITY: usize = W::CAPACITY;

    pub fn zero() -> Self {
        PackedPoly { bits: W::zero() }
    }

    pub fn one() -> Self {
        Self::monomial(Gf3::ONE, 0)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(Gf3::ONE, 1)
    }

    /// `c·t^k`; `k` must be below the capacity.
    pub fn monomial(c: Gf3, k: usize) -> Self {
        assert!(k < W::CAPACITY, "monomial degree {k} exceeds capacity");
        PackedPoly { bits: W::from(c.value()).unwrap() << (2 * k) }
    }

    /// Wraps a raw word, rejecting any `11` lane.
    pub fn from_word(bits: W) -> Result<Self, PolyError> {
        if (bits & (bits >> 1) & W::LO) != W::zero() {
            return Err(PolyError::InvalidWord);
        }
        Ok(PackedPoly { bits })
    }

    /// Wraps a word known to be valid (produced by packed arithmetic).
    #[inline(always)]
    pub(crate) fn from_word_unchecked(bits: W) -> Self {
        PackedPoly { bits }
    }

    #[inline(always)]
    pub fn word(self) -> W {
        self.bits
    }

    pub fn from_coeffs(coeffs: &[Gf3]) -> Result<Self, PolyError> {
        let mut bits = W::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i >= W::CAPACITY {
                return Err(PolyError::CapacityOverflow { needed: i, capacity: W::CAPACITY });
            }
            bits = bits | (W::from(c.value()).unwrap() << (2 * i));
        }
        Ok(PackedPoly { bits })
    }

    /// Ascending coefficients up to the degree; empty for zero.
    pub fn coeffs(self) -> Vec<Gf3> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i)).collect(),
        }
    }

    /// Ascending coefficients padded or truncated to exactly `len` entries.
    pub fn coeffs_padded(self, len: usize) -> Vec<Gf3> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    #[inline]
    pub fn coeff(self, i: usize) -> Gf3 {
        if i >= W::CAPACITY {
            return Gf3::ZERO;
        }
        let v = (self.bits >> (2 * i)) & W::from(3u8).unwrap();
        Gf3::new(v.to_u8().unwrap())
    }

    pub fn is_zero(self) -> bool {
        self.bits.is_zero()
    }

    /// Highest index with a nonzero coefficient; `None` for the zero polynomial.
    #[inline]
    pub fn degree(self) -> Option<usize> {
        if self.bits.is_zero() {
            None
        } else {
            let top = W::CAPACITY * 2 - 1 - self.bits.leading_zeros() as usize;
            Some(top / 2)
        }
    }

    /// Degree or `-1`-free fallback for bound checks: zero counts as degree 0.
    fn degree_or_zero(self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn scale(self, c: Gf3) -> Self {
        match c.value() {
            0 => Self::zero(),
            1 => self,
            _ => -self,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(self, k: usize) -> Result<Self, PolyError> {
        match self.degree() {
            None => Ok(self),
            Some(d) if d + k < W::CAPACITY => Ok(PackedPoly { bits: self.bits << (2 * k) }),
            Some(d) => Err(PolyError::CapacityOverflow { needed: d + k, capacity: W::CAPACITY }),
        }
    }

    /// Coefficient-wise convolution mod 3.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Result<Self, PolyError> {
        let (Some(dp), Some(dq)) = (self.degree(), other.degree()) else {
            return Ok(Self::zero());
        };
        if dp + dq >= W::CAPACITY {
            return Err(PolyError::CapacityOverflow { needed: dp + dq, capacity: W::CAPACITY });
        }
        let neg = packed_neg(self.bits);
        let mut acc = W::zero();
        for i in 0..=dq {
            match other.coeff(i).value() {
                0 => {}
                1 => acc = packed_add(acc, self.bits << (2 * i)),
                _ => acc = packed_add(acc, neg << (2 * i)),
            }
        }
        Ok(PackedPoly { bits: acc })
    }

    /// `p(t)³ = p(t³)` over F₃: coefficient `i` moves to position `3i`.
    pub fn cube(self) -> Result<Self, PolyError> {
        let Some(d) = self.degree() else {
            return Ok(self);
        };
        if 3 * d >= W::CAPACITY {
            return Err(PolyError::CapacityOverflow { needed: 3 * d, capacity: W::CAPACITY });
        }
        let three = W::from(3u8).unwrap();
        let mut out = W::zero();
        for i in 0..=d {
            let lane = (self.bits >> (2 * i)) & three;
            out = out | (lane << (6 * i));
        }
        Ok(PackedPoly { bits: out })
    }

    pub fn index(self) -> PolyIndex {
        let mut n: u128 = 0;
        if let Some(d) = self.degree() {
            for i in (0..=d).rev() {
                n = n * 3 + self.coeff(i).value() as u128;
            }
        }
        PolyIndex(n)
    }

    pub fn from_index(index: PolyIndex) -> Result<Self, PolyError> {
        let mut n = index.0;
        let mut bits = W::zero();
        let mut i = 0;
        while n > 0 {
            if i >= W::CAPACITY {
                return Err(PolyError::IndexOutOfRange(index.0));
            }
            let digit = (n % 3) as u8;
            bits = bits | (W::from(digit).unwrap() << (2 * i));
            n /= 3;
            i += 1;
        }
        Ok(PackedPoly { bits })
    }

    /// Re-packs into another word size, failing if the degree does not fit.
    pub fn convert<V: PackedWord>(self) -> Result<PackedPoly<V>, PolyError> {
        match self.degree() {
            None => Ok(PackedPoly::zero()),
            Some(d) if d < V::CAPACITY => {
                let mut bits = V::zero();
                for i in 0..=d {
                    let c = self.coeff(i).value();
                    if c != 0 {
                        bits = bits | (V::from(c).unwrap() << (2 * i));
                    }
                }
                Ok(PackedPoly { bits })
            }
            Some(d) => Err(PolyError::CapacityOverflow { needed: d, capacity: V::CAPACITY }),
        }
    }

    /// Evaluates at a point of any extension field.
    pub fn eval<F: FiniteField>(self, at: F) -> F {
        let mut acc = F::zero();
        if let Some(d) = self.degree() {
            for i in (0..=d).rev() {
                acc = acc * at + F::from_gf3(self.coeff(i));
            }
        }
        acc
    }

    /// True when `(t − c)^mult` divides the polynomial (zero is divisible by everything).
    pub fn divisible_by_linear(self, c: Gf3, mult: usize) -> bool {
        let mut coeffs = self.coeffs();
        for _ in 0..mult {
            if coeffs.is_empty() {
                return true;
            }
            // synthetic division by (t − c)
            let mut carry = Gf3::ZERO;
            let mut quotient = vec![Gf3::ZERO; coeffs.len().saturating_sub(1)];
            for k in (0..coeffs.len()).rev() {
                let v = coeffs[k] + carry * c;
                if k == 0 {
                    if !v.is_zero() {
                        return false;
                    }
                } else {
                    quotient[k - 1] = v;
                }
                carry = v;
            }
            while quotient.last().is_some_and(|c| c.is_zero()) {
                quotient.pop();
            }
            coeffs = quotient;
        }
        true
    }

    /// Little-endian bytes of the packed word.
    pub fn to_le_bytes(self) -> Vec<u8> {
        self.bits.to_le_vec()
    }

    pub fn from_le_bytes(bytes: &[u8]) -> Result<Self, PolyError> {
        let bits = W::from_le_slice(bytes).ok_or(PolyError::InvalidWord)?;
        Self::from_word(bits)
    }
}

impl<W: PackedWord> std::ops::Add for PackedPoly<W> {
    type Output = Self;
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        PackedPoly { bits: packed_add(self.bits, rhs.bits) }
    }
}

impl<W: PackedWord> std::ops::Sub for PackedPoly<W> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, rhs: Self) -> Self {
        PackedPoly { bits: packed_sub(self.bits, rhs.bits) }
    }
}

impl<W: PackedWord> std::ops::Neg for PackedPoly<W> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        PackedPoly { bits: packed_neg(self.bits) }
    }
}

impl<W: PackedWord> fmt::Debug for PackedPoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text form: ascending coefficient digits, `[0]` for zero.
impl<W: PackedWord> fmt::Display for PackedPoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        if coeffs.is_empty() {
            return write!(f, "[0]");
        }
        write!(f, "[")?;
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl<W: PackedWord> FromStr for PackedPoly<W> {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let coeffs = inner
            .split(',')
            .map(|d| match d.trim() {
                "0" => Ok(Gf3::ZERO),
                "1" => Ok(Gf3::ONE),
                "2" => Ok(Gf3::TWO),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coeffs(&coeffs)
    }
}

pub fn mul<W: PackedWord>(p: PackedPoly<W>, q: PackedPoly<W>) -> Result<PackedPoly<W>, PolyError> {
    p.mul(q)
}

pub fn cube<W: PackedWord>(p: PackedPoly<W>) -> Result<PackedPoly<W>, PolyError> {
    p.cube()
}

/// Left side `x⁴ + w²`, with `x⁴ = x³·x`.
pub fn lhs<W: PackedWord>(x: PackedPoly<W>, w: PackedPoly<W>) -> Result<PackedPoly<W>, PolyError> {
    Ok(x.cube()?.mul(x)? + w.mul(w)?)
}

/// Right side `y·z³ − y³·z`.
pub fn rhs<W: PackedWord>(y: PackedPoly<W>, z: PackedPoly<W>) -> Result<PackedPoly<W>, PolyError> {
    let needed = (y.degree_or_zero() + 3 * z.degree_or_zero()).max(3 * y.degree_or_zero() + z.degree_or_zero());
    if needed >= W::CAPACITY {
        return Err(PolyError::CapacityOverflow { needed, capacity: W::CAPACITY });
    }
    Ok(y.mul(z.cube()?)? - y.cube()?.mul(z)?)
}

/// `x⁴ + w² = y·z³ − y³·z` as polynomials; false if anything overflows.
pub fn verify_param(p: &Param) -> bool {
    match (lhs(p.x, p.w), rhs(p.y, p.z)) {
        (Ok(l), Ok(r)) => l == r,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn lane_add_matches_table() {
        for a in 0..3u8 {
            for b in 0..3u8 {
                let s = packed_add(a as u64, b as u64);
                assert_eq!(s, ((a + b) % 3) as u64, "{a}+{b}");
                assert_eq!(packed_neg(a as u64), ((3 - a) % 3) as u64);
            }
        }
    }

    #[test]
    fn small_products() {
        assert_eq!(p("[1,1]").mul(p("[2,1]")).unwrap(), p("[2,0,1]"));
        assert_eq!(p("[1,2,1]").mul(Poly::zero()).unwrap(), Poly::zero());
    }

    #[test]
    fn cube_examples() {
        assert_eq!(p("[1,1]").cube().unwrap(), p("[1,0,0,1]"));
        assert_eq!(p("[0,1,2]").cube().unwrap(), p("[0,0,0,1,0,0,2]"));
        assert_eq!(Poly::zero().cube().unwrap(), Poly::zero());
    }

    #[test]
    fn lhs_examples() {
        assert_eq!(lhs(p("[0,1]"), p("[0,0,1]")).unwrap(), p("[0,0,0,0,2]"));
        let v = lhs(p("[0,1]"), p("[0,1]")).unwrap();
        assert_eq!(v, p("[0,0,1,0,1]"));
        assert_eq!(v.coeff(0), Gf3::ZERO);
        assert_eq!(v.coeff(1), Gf3::ZERO);
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(rhs(p("[0,1]"), p("[1]")).unwrap(), p("[0,1,0,2]"));
        for a in 0..3 {
            for b in 0..3 {
                let y = Poly::monomial(Gf3::new(a), 0);
                let z = Poly::monomial(Gf3::new(b), 0);
                assert!(rhs(y, z).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn degree_and_text() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(p("[0,1,0,2]").degree(), Some(3));
        assert_eq!(p("[0,1,0,2,0,0]").to_string(), "[0,1,0,2]");
        assert_eq!(Poly::zero().to_string(), "[0]");
        assert_eq!(p("[]"), Poly::zero());
        assert!("[0,3]".parse::<Poly>().is_err());
        assert!("0,1".parse::<Poly>().is_err());
    }

    #[test]
    fn invalid_words_rejected() {
        assert_eq!(PackedPoly::<u64>::from_word(0b11), Err(PolyError::InvalidWord));
        assert!(PackedPoly::<u64>::from_word(0b1001).is_ok());
    }

    #[test]
    fn capacity_overflow() {
        let big = Poly::monomial(Gf3::ONE, 40);
        assert!(matches!(big.mul(big), Err(PolyError::CapacityOverflow { .. })));
        assert!(matches!(big.cube(), Err(PolyError::CapacityOverflow { .. })));
        let small = PackedPoly::<u64>::monomial(Gf3::ONE, 20);
        assert!(matches!(small.mul(small), Err(PolyError::CapacityOverflow { .. })));
        assert_eq!(Poly::CAPACITY, 64);
        assert!(Poly::monomial(Gf3::ONE, 16).mul(Poly::monomial(Gf3::ONE, 16)).is_ok());
    }

    #[test]
    fn linear_factor_test() {
        // t² + 2 = (t − 1)(t + 1)
        let q = p("[2,0,1]");
        assert!(q.divisible_by_linear(Gf3::ONE, 1));
        assert!(q.divisible_by_linear(Gf3::TWO, 1));
        assert!(!q.divisible_by_linear(Gf3::ONE, 2));
        assert!(!q.divisible_by_linear(Gf3::ZERO, 1));
        assert!(p("[0,0,1]").divisible_by_linear(Gf3::ZERO, 2));
        assert!(Poly::zero().divisible_by_linear(Gf3::ONE, 5));
    }

    #[test]
    fn index_round_trip_exhaustive() {
        for n in 0..3u128.pow(10) {
            let q = Poly::from_index(PolyIndex(n)).unwrap();
            assert_eq!(q.index(), PolyIndex(n));
        }
    }

    #[test]
    fn cube_matches_triple_product_exhaustive() {
        for n in 0..81u128 {
            let q = Poly::from_index(PolyIndex(n)).unwrap();
            assert_eq!(q.cube().unwrap(), q.mul(q).unwrap().mul(q).unwrap());
        }
    }

    #[test]
    fn le_bytes_round_trip() {
        let q = p("[0,1,2,0,0,1]");
        assert_eq!(Poly::from_le_bytes(&q.to_le_bytes()).unwrap(), q);
        assert_eq!(q.to_le_bytes().len(), 16);
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0u8..3, 0..=max_deg + 1)
            .prop_map(|v| Poly::from_coeffs(&v.into_iter().map(Gf3::new).collect::<Vec<_>>()).unwrap())
    }

    proptest! {
        #[test]
        fn cube_is_triple_product(q in arb_poly(10)) {
            prop_assert_eq!(q.cube().unwrap(), q.mul(q).unwrap().mul(q).unwrap());
        }

        #[test]
        fn ordering_matches_index(a in arb_poly(20), b in arb_poly(20)) {
            prop_assert_eq!(a.cmp(&b), a.index().cmp(&b.index()));
        }

        #[test]
        fn coeff_round_trip(q in arb_poly(40)) {
            prop_assert_eq!(Poly::from_coeffs(&q.coeffs()).unwrap(), q);
            prop_assert_eq!(q.to_string().parse::<Poly>().unwrap(), q);
            prop_assert_eq!(q.convert::<u128>().unwrap(), q);
        }

        #[test]
        fn ring_laws(a in arb_poly(10), b in arb_poly(10), c in arb_poly(10)) {
            prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
            prop_assert_eq!(a.mul(b + c).unwrap(), a.mul(b).unwrap() + a.mul(c).unwrap());
            prop_assert_eq!((a - b) + b, a);
            prop_assert_eq!(-(-a), a);
        }

        #[test]
        fn rhs_constant_term_vanishes(y in arb_poly(8), z in arb_poly(8)) {
            prop_assert_eq!(rhs(y, z).unwrap().coeff(0), Gf3::ZERO);
        }

        #[test]
        fn rhs_top_coefficient_vanishes(y in arb_poly(8), z in arb_poly(8)) {
            if let (Some(dy), Some(dz)) = (y.degree(), z.degree()) {
                if dy == dz {
                    prop_assert_eq!(rhs(y, z).unwrap().coeff(dy + 3 * dz), Gf3::ZERO);
                }
            }
        }

        #[test]
        fn rhs_antisymmetry(y in arb_poly(8), z in arb_poly(8)) {
            prop_assert_eq!(rhs(z, -y).unwrap(), rhs(y, z).unwrap());
        }

        #[test]
        fn lhs_low_terms(x in arb_poly(7), w in arb_poly(15)) {
            let v = lhs(x, w).unwrap();
            let both_zero = x.coeff(0).is_zero() && w.coeff(0).is_zero();
            prop_assert_eq!(v.coeff(0).is_zero(), both_zero);
            if both_zero {
                prop_assert_eq!(v.coeff(1), Gf3::ZERO);
            }
        }

        #[test]
        fn lhs_top_coefficient_nonzero(x in arb_poly(7), w in arb_poly(15), e in 1usize..8) {
            let xd = x.degree() == Some(e);
            let wd = w.degree() == Some(2 * e);
            let x = if x.degree().is_some_and(|d| d > e) { Poly::zero() } else { x };
            let w = if w.degree().is_some_and(|d| d > 2 * e) { Poly::zero() } else { w };
            if xd || wd {
                prop_assert!(!lhs(x, w).unwrap().coeff(4 * e).is_zero());
            }
        }
    }
}
