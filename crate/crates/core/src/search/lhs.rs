use std::ops::Range;

use crate::poly::{packed_add, PackedPoly, PolyIndex};
use crate::Poly;

type P64 = PackedPoly<u64>;

/// A rectangle of admissible left-hand pairs.
///
/// Admissible means `x = t·x'` with `deg x' ≤ d−2` and `w = t·w'` with
/// `deg w' ≤ 2d−2`; the ranges are over the base-3 indices of `x'` and `w'`.
/// In folded mode only `x'` and `w'` that are zero or have leading
/// coefficient 1 are visited; the signs are restored at reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LhsBlock {
    pub level: u32,
    pub x_range: Range<u32>,
    pub w_range: Range<u32>,
    pub folded: bool,
}

#[inline(always)]
pub(crate) fn leading_is_one(word: u64) -> bool {
    if word == 0 {
        return true;
    }
    let top = 63 - word.leading_zeros();
    (word >> (top & !1)) & 3 == 1
}

/// `t·p` for the base-3 index of `p`.
#[inline]
pub(crate) fn shifted(index: u32) -> P64 {
    P64::from_word_unchecked(P64::from_index(PolyIndex(index as u128)).unwrap().word() << 2)
}

pub(crate) fn x_count(level: u32) -> u32 {
    3u32.pow(level - 1)
}

pub(crate) fn w_count(level: u32) -> u32 {
    3u32.pow(2 * level - 1)
}

/// Number of admissible `(x, w)` pairs, or of sign representatives when folded.
pub fn lhs_pair_count(level: u32, folded: bool) -> u64 {
    let (nx, nw) = (x_count(level) as u64, w_count(level) as u64);
    if folded {
        nx.div_ceil(2) * nw.div_ceil(2)
    } else {
        nx * nw
    }
}

impl LhsBlock {
    /// Packed `x` words of the block that are visited.
    pub(crate) fn x_words(&self) -> Vec<u64> {
        self.x_range
            .clone()
            .map(|i| shifted(i).word())
            .filter(|&w| !self.folded || leading_is_one(w))
            .collect()
    }

    pub fn len(&self) -> u64 {
        self.iter_words().count() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn iter_words(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        let xs: Vec<(u64, u64)> = self
            .x_words()
            .into_iter()
            .map(|x| {
                let p = P64::from_word_unchecked(x);
                (x, p.cube().unwrap().mul(p).unwrap().word())
            })
            .collect();
        self.w_range.clone().flat_map(move |wi| {
            let w = shifted(wi);
            let keep = !self.folded || leading_is_one(w.word());
            let w2 = w.mul(w).unwrap().word();
            xs.clone()
                .into_iter()
                .filter(move |_| keep)
                .map(move |(x, x4)| (x, w.word(), packed_add(x4, w2)))
        })
    }

    /// Materializes `(x, w, x⁴ + w²)` for every pair in the block.
    pub fn iter(&self) -> impl Iterator<Item = (Poly, Poly, Poly)> + '_ {
        self.iter_words().map(|(x, w, v)| {
            let conv = |word: u64| P64::from_word_unchecked(word).convert::<u128>().unwrap();
            (conv(x), conv(w), conv(v))
        })
    }
}

/// Splits the admissible left-hand pairs of `level` into blocks of roughly
/// `block_size` pairs. Blocks cover every pair exactly once.
pub fn gen_lhs_blocks(level: u32, block_size: usize, folded: bool) -> impl Iterator<Item = LhsBlock> {
    let nx = x_count(level);
    let nw = w_count(level);
    let per_w = if folded { nx.div_ceil(2) } else { nx } as usize;
    let chunk = (block_size / per_w.max(1)).clamp(1, nw as usize) as u32;
    (0..nw.div_ceil(chunk)).map(move |k| LhsBlock {
        level,
        x_range: 0..nx,
        w_range: k * chunk..((k + 1) * chunk).min(nw),
        folded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Gf3;
    use crate::poly::lhs;
    use std::collections::BTreeSet;

    #[test]
    fn level_one_has_three_pairs() {
        let pairs: Vec<_> = gen_lhs_blocks(1, 10, false).flat_map(|b| b.iter().collect::<Vec<_>>()).collect();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|(x, _, _)| x.is_zero()));
        let ws: BTreeSet<Poly> = pairs.iter().map(|p| p.1).collect();
        let expect: BTreeSet<Poly> = ["[0]", "[0,1]", "[0,2]"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(ws, expect);
        assert_eq!(lhs_pair_count(1, false), 3);
    }

    #[test]
    fn counts() {
        assert_eq!(lhs_pair_count(8, false), 3u64.pow(22));
        assert_eq!(lhs_pair_count(2, false), 3 * 27);
        assert_eq!(lhs_pair_count(2, true), 2 * 14);
    }

    #[test]
    fn blocks_partition_the_naive_set() {
        // all (x, w) with deg x ≤ 1, deg w ≤ 3 and zero constant terms
        let mut naive = BTreeSet::new();
        for xi in 0..3u128.pow(2) {
            for wi in 0..3u128.pow(4) {
                let x = Poly::from_index(PolyIndex(xi)).unwrap();
                let w = Poly::from_index(PolyIndex(wi)).unwrap();
                if x.coeff(0) == Gf3::ZERO && w.coeff(0) == Gf3::ZERO {
                    naive.insert((x, w, lhs(x, w).unwrap()));
                }
            }
        }
        for block_size in [1, 7, 50, 10_000] {
            let mut seen = BTreeSet::new();
            let mut total = 0;
            for block in gen_lhs_blocks(2, block_size, false) {
                for item in block.iter() {
                    total += 1;
                    seen.insert(item);
                }
            }
            assert_eq!(total, naive.len());
            assert_eq!(seen, naive);
        }
    }

    #[test]
    fn folded_blocks_are_sign_representatives() {
        let mut reps = BTreeSet::new();
        for block in gen_lhs_blocks(3, 100, true) {
            for (x, w, v) in block.iter() {
                reps.insert((x, w));
                assert_eq!(lhs(-x, -w).unwrap(), v);
            }
        }
        assert_eq!(reps.len() as u64, lhs_pair_count(3, true));
        let mut unfolded = BTreeSet::new();
        for (x, w) in &reps {
            for sx in [*x, -*x] {
                for sw in [*w, -*w] {
                    unfolded.insert((sx, sw));
                }
            }
        }
        assert_eq!(unfolded.len() as u64, lhs_pair_count(3, false));
    }
}
