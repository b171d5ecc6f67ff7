//! Meet-in-the-middle search for solutions of `x⁴ + w² = y·z³ − y³·z` in F₃[t].
//!
//! A level-`d` search tabulates right-hand sides over all `(y, z)` with
//! `deg ≤ d`, streams left-hand sides over the admissible `(x, w)`
//! (`x(0) = w(0) = 0`, `deg x ≤ d−1`, `deg w ≤ 2d−1`) in blocks, and
//! reconstructs every quadruple whose two sides agree.
//!
//! Both sides can be folded by symmetries that fix the value being matched:
//! `rhs(A·(y, z)) = det(A)·rhs(y, z)` for every `A ∈ GL₂(F₃)`, and `x⁴ + w²`
//! only sees `x` and `w` up to sign. Folding only changes how candidates are
//! enumerated; the reconstructed solution set is the unfolded one.

mod degeneracy;
mod lhs;
mod matcher;
pub mod oracle;
mod table;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::gf::Gf3;
use crate::poly::{verify_param, PolyError};
use crate::Poly;

pub use degeneracy::{degeneracy_filter, image_point, Degeneracy};
pub use lhs::{gen_lhs_blocks, lhs_pair_count, LhsBlock};
pub use matcher::{match_blocks, run_level, run_level_with_table, LevelReport};
pub use table::{estimate_table_bytes, gen_rhs_table, sl2_f3, RhsEntry, RhsTable, TableMode, RHS_CACHE_MAGIC};

/// Highest level whose right-hand sides fit one 64-bit packed word.
pub const MAX_LEVEL: u32 = 8;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("level {0} is outside the supported range 1..={MAX_LEVEL}")]
    UnsupportedLevel(u32),
    #[error("the right-hand side table needs about {estimate} bytes, over the budget of {budget} bytes")]
    MemoryBudget { estimate: u64, budget: u64 },
    #[error("worker failed after {completed} of {total} blocks: {message}")]
    Worker { completed: usize, total: usize, message: String },
    #[error("solution set is not closed under {0}")]
    Symmetry(&'static str),
    #[error("reconstructed quadruple fails the surface equation: {0}")]
    Unverified(Param),
    #[error("rhs cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Tunables for one search run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub level: u32,
    pub threads: usize,
    /// Approximate number of `(x, w)` pairs per left-hand block.
    pub block_size: usize,
    pub memory_budget: u64,
    pub mode: TableMode,
    /// Drop table values with a nonzero linear coefficient (no admissible
    /// left side has one).
    pub purge_linear: bool,
    /// Enumerate left sides up to the signs of `x` and `w`.
    pub fold_lhs: bool,
    /// Also return the level-exact matches rejected as degenerate.
    pub keep_degenerate: bool,
}

impl SearchConfig {
    pub fn new(level: u32) -> Self {
        SearchConfig {
            level,
            threads: 1,
            block_size: 1 << 20,
            memory_budget: 4 << 30,
            mode: TableMode::Folded,
            purge_linear: true,
            fold_lhs: true,
            keep_degenerate: false,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.level == 0 || self.level > MAX_LEVEL {
            return Err(SearchError::UnsupportedLevel(self.level));
        }
        Ok(())
    }

    /// Short description of the filters in effect, recorded in output headers.
    pub fn filter_summary(&self) -> String {
        let mut parts = vec!["const-term", "deg-x<d", "deg-w<2d"];
        if self.purge_linear {
            parts.push("linear-term");
        }
        if self.mode == TableMode::Folded {
            parts.push("fold-sl2");
        }
        if self.fold_lhs {
            parts.push("fold-signs");
        }
        parts.join(",")
    }
}

/// A solution candidate `(x, y, z, w)` at level `d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Param {
    pub x: Poly,
    pub y: Poly,
    pub z: Poly,
    pub w: Poly,
    pub level: u32,
}

impl Param {
    pub fn new(x: Poly, y: Poly, z: Poly, w: Poly, level: u32) -> Self {
        Param { x, y, z, w, level }
    }

    pub fn verify(&self) -> bool {
        verify_param(self)
    }

    /// Canonical sort key: the four base-3 indices.
    pub fn key(&self) -> (Poly, Poly, Poly, Poly) {
        (self.x, self.y, self.z, self.w)
    }

    /// `deg y = d`, `deg z = d` or `deg w = 2d − 1`; anything else is a
    /// lower-level solution whose homogenization is divisible by `s`.
    pub fn is_level_exact(&self) -> bool {
        let d = self.level as usize;
        self.y.degree() == Some(d) || self.z.degree() == Some(d) || self.w.degree() == Some(2 * d - 1)
    }

    /// Degree bounds and zero constant terms expected of search output.
    pub fn within_bounds(&self) -> bool {
        let d = self.level as usize;
        let le = |p: Poly, bound: usize| p.degree().is_none_or(|e| e <= bound);
        self.level >= 1
            && le(self.x, d - 1)
            && le(self.y, d)
            && le(self.z, d)
            && le(self.w, 2 * d - 1)
            && self.x.coeff(0) == Gf3::ZERO
            && self.w.coeff(0) == Gf3::ZERO
    }

    /// `(x, z, −y, w)`: the antisymmetry of the right-hand side.
    pub fn swap_yz(&self) -> Param {
        Param { y: self.z, z: -self.y, ..*self }
    }

    pub fn negate_w(&self) -> Param {
        Param { w: -self.w, ..*self }
    }

    /// `(2x, 2y, 2z, w)`, the weighted scaling by `λ = 2`.
    pub fn scale_xyz(&self) -> Param {
        Param { x: -self.x, y: -self.y, z: -self.z, ..*self }
    }
}

impl PartialOrd for Param {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Param {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, self.key()).cmp(&(other.level, other.key()))
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Output line form: `d=<d>; x=[..]; y=[..]; z=[..]; w=[..]`.
impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}; x={}; y={}; z={}; w={}", self.level, self.x, self.y, self.z, self.w)
    }
}

/// Counters collected while reconstructing one level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchCounts {
    /// Unfolded quadruples whose two sides matched.
    pub raw: u64,
    pub level_exact: u64,
    pub constant_map: u64,
    pub reducible: u64,
    /// Nondegenerate level-exact solutions before scalar normalization.
    pub kept: u64,
    /// Distinct solutions after scalar normalization.
    pub normalized: u64,
    /// Left-hand candidates actually probed (after folding).
    pub probes: u64,
    pub table_entries: u64,
}

/// Level-exact nondegenerate solutions of one level, canonically sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionSet {
    pub level: u32,
    pub params: Vec<Param>,
    pub counts: SearchCounts,
    /// Degenerate level-exact matches, sorted; only filled on request.
    pub degenerate: Vec<(Param, Degeneracy)>,
}

impl SolutionSet {
    pub fn new(level: u32, mut params: Vec<Param>, counts: SearchCounts) -> Self {
        params.sort_unstable();
        params.dedup();
        SolutionSet { level, params, counts, degenerate: Vec::new() }
    }

    /// Scalar-normalized members, deduplicated and sorted.
    pub fn normalized(&self) -> Vec<Param> {
        let mut out: Vec<Param> = self
            .params
            .iter()
            .filter_map(|p| crate::orbits::scalar_normalize(p).ok())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks closure under `(x,z,−y,w)`, `w ↦ −w` and `(2x,2y,2z,w)`, and
    /// re-verifies every member against the surface equation.
    pub fn check_symmetries(&self) -> Result<(), SearchError> {
        let set: HashSet<&Param> = self.params.iter().collect();
        for p in &self.params {
            if !p.verify() {
                return Err(SearchError::Unverified(*p));
            }
            if !set.contains(&p.swap_yz()) {
                return Err(SearchError::Symmetry("(x,y,z,w) -> (x,z,-y,w)"));
            }
            if !set.contains(&p.negate_w()) {
                return Err(SearchError::Symmetry("w -> -w"));
            }
            if !set.contains(&p.scale_xyz()) {
                return Err(SearchError::Symmetry("(x,y,z,w) -> (2x,2y,2z,w)"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn verify_examples() {
        for d in 1..=8 {
            let q = Param::new(Poly::zero(), p("[1]"), p("[2]"), Poly::zero(), d);
            assert!(q.verify());
        }
        let t = p("[0,1]");
        assert!(!Param::new(t, t, t, t, 1).verify());
    }

    #[test]
    fn level_exactness() {
        let q = Param::new(Poly::zero(), p("[0,1]"), p("[1]"), Poly::zero(), 1);
        assert!(q.is_level_exact());
        let q = Param::new(Poly::zero(), p("[0,1]"), p("[1]"), Poly::zero(), 2);
        assert!(!q.is_level_exact());
        let q = Param::new(Poly::zero(), p("[1]"), p("[1]"), p("[0,0,0,1]"), 2);
        assert!(q.is_level_exact());
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(0).validate().is_err());
        assert!(SearchConfig::new(9).validate().is_err());
        assert!(SearchConfig::new(8).validate().is_ok());
    }
}
