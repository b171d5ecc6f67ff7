//! Unfiltered reference solver for small levels.

use crate::poly::{lhs, rhs};
use crate::Poly;

use super::{degeneracy_filter, Degeneracy, Param, SearchError};

/// Highest level the reference solver accepts; the loop is `3^(5d+4)`.
pub const ORACLE_MAX_LEVEL: u32 = 3;

fn all_polys(max_degree: usize) -> Vec<Poly> {
    (0..3u128.pow(max_degree as u32 + 1)).map(|n| Poly::from_index(crate::poly::PolyIndex(n)).unwrap()).collect()
}

/// Every `(x, y, z, w)` with `deg x, y, z ≤ d` and `deg w ≤ 2d` solving the
/// equation whose homogenization is not divisible by `s`, classified by
/// [`degeneracy_filter`]. No admissibility filter is applied.
pub fn naive_level(level: u32) -> Result<Vec<(Param, Degeneracy)>, SearchError> {
    if level == 0 || level > ORACLE_MAX_LEVEL {
        return Err(SearchError::UnsupportedLevel(level));
    }
    let d = level as usize;
    let small = all_polys(d);
    let wide = all_polys(2 * d);
    let mut right = Vec::with_capacity(small.len() * small.len());
    for &y in &small {
        for &z in &small {
            right.push((rhs(y, z)?, y, z));
        }
    }
    let exact = |x: Poly, y: Poly, z: Poly, w: Poly| {
        x.degree() == Some(d)
            || y.degree() == Some(d)
            || z.degree() == Some(d)
            || w.degree().is_some_and(|e| e + 1 >= 2 * d)
    };
    let mut out = Vec::new();
    for &x in &small {
        for &w in &wide {
            let left = lhs(x, w)?;
            for &(value, y, z) in &right {
                if value == left && exact(x, y, z, w) {
                    let p = Param::new(x, y, z, w, level);
                    out.push((p, degeneracy_filter(&p)));
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
