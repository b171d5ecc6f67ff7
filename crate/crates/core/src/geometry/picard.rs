use crate::lattice::{h1_cyclic, LatticeError};
use crate::IntMatrix;

use super::{frobenius_permutation, intersection_matrix, ExcCurve, GeometryError};

/// Seven pairwise disjoint curves `d₁..d₇` and three curves whose sum is
/// `d₈`, all as indices into the curve list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardBasis {
    pub disjoint: [usize; 7],
    pub triple: [usize; 3],
}

/// Frobenius on the Picard lattice in a reference labeling of the basis;
/// only its conjugacy invariants are comparable with ours.
pub fn reference_frobenius_matrix() -> IntMatrix {
    IntMatrix::from_i64_rows(&[
        &[-1, 0, -1, 0, -1, -1, -1, -2],
        &[-1, -1, -1, 0, -1, 0, -1, -2],
        &[0, 0, -1, 0, 0, 0, -1, -1],
        &[-1, -1, -2, -1, -1, -1, -1, -3],
        &[0, -1, -1, 0, -1, -1, -1, -2],
        &[-1, -1, -1, 0, 0, -1, -1, -2],
        &[-1, -1, -1, -1, -1, -1, -2, -3],
        &[2, 2, 3, 1, 2, 2, 3, 6],
    ])
}

/// The anticanonical class `(−1, …, −1, 3)`.
pub fn anticanonical() -> Vec<i64> {
    let mut k = vec![-1; 7];
    k.push(3);
    k
}

/// First basis found by backtracking over the curve list in order.
pub fn picard_basis(curves: &[ExcCurve]) -> Result<PicardBasis, GeometryError> {
    let m = intersection_matrix(curves);
    let n = curves.len();
    let mut stack = Vec::with_capacity(7);
    let found = search_disjoint(&m, n, 0, &mut stack, &mut |set| find_triple(&m, set));
    found.ok_or_else(|| GeometryError::Inconsistent("no orthogonal basis among the exceptional curves".into()))
}

fn search_disjoint(
    m: &[Vec<i64>],
    n: usize,
    from: usize,
    stack: &mut Vec<usize>,
    done: &mut dyn FnMut(&[usize]) -> Option<[usize; 3]>,
) -> Option<PicardBasis> {
    if stack.len() == 7 {
        return done(stack).map(|triple| PicardBasis { disjoint: stack.as_slice().try_into().unwrap(), triple });
    }
    for c in from..n {
        if stack.iter().all(|&s| m[s][c] == 0) {
            stack.push(c);
            if let Some(b) = search_disjoint(m, n, c + 1, stack, done) {
                return Some(b);
            }
            stack.pop();
        }
    }
    None
}

fn find_triple(m: &[Vec<i64>], disjoint: &[usize]) -> Option<[usize; 3]> {
    let n = m.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let t = [i, j, k];
                let self_int: i64 = t.iter().flat_map(|&a| t.iter().map(move |&b| m[a][b])).sum();
                if self_int == 1 && disjoint.iter().all(|&d| t.iter().map(|&a| m[d][a]).sum::<i64>() == 0) {
                    return Some(t);
                }
            }
        }
    }
    None
}

fn pairing(m: &[Vec<i64>], c: usize, basis: &PicardBasis) -> Vec<i64> {
    let mut out: Vec<i64> = basis.disjoint.iter().map(|&d| m[c][d]).collect();
    out.push(basis.triple.iter().map(|&t| m[c][t]).sum());
    out
}

/// Coordinates of a curve class: `cᵢ = −C·dᵢ` for `i ≤ 7`, `c₈ = C·d₈`.
pub fn class_of(curves: &[ExcCurve], basis: &PicardBasis, c: usize) -> Vec<i64> {
    let m = intersection_matrix(curves);
    class_of_with(&m, basis, c)
}

pub(crate) fn class_of_with(m: &[Vec<i64>], basis: &PicardBasis, c: usize) -> Vec<i64> {
    let mut v = pairing(m, c, basis);
    for x in &mut v[..7] {
        *x = -*x;
    }
    v
}

/// Gram matrix of `d₁..d₈` computed from curve intersections.
pub fn gram_matrix(curves: &[ExcCurve], basis: &PicardBasis) -> IntMatrix {
    let m = intersection_matrix(curves);
    let members: Vec<Vec<usize>> = basis
        .disjoint
        .iter()
        .map(|&d| vec![d])
        .chain(std::iter::once(basis.triple.to_vec()))
        .collect();
    let rows: Vec<Vec<i64>> = members
        .iter()
        .map(|a| {
            members
                .iter()
                .map(|b| a.iter().flat_map(|&i| b.iter().map(move |&j| (i, j))).map(|(i, j)| m[i][j]).sum())
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

/// Column `i` is the class of the Frobenius image of `dᵢ`.
pub fn frobenius_matrix(curves: &[ExcCurve], basis: &PicardBasis) -> Result<IntMatrix, GeometryError> {
    let m = intersection_matrix(curves);
    let perm = frobenius_permutation(curves)?;
    let mut cols: Vec<Vec<i64>> = basis.disjoint.iter().map(|&d| class_of_with(&m, basis, perm[d])).collect();
    let mut d8 = vec![0; 8];
    for &t in &basis.triple {
        for (acc, v) in d8.iter_mut().zip(class_of_with(&m, basis, perm[t])) {
            *acc += v;
        }
    }
    cols.push(d8);
    Ok(IntMatrix::from_columns(&cols))
}

/// Invariant factors of `ker(Σ mᵏ) / im(m − 1)`.
pub fn h1_galois(m: &IntMatrix) -> Result<Vec<i64>, LatticeError> {
    h1_cyclic(m)
}
