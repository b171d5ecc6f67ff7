use num_traits::Zero;

use crate::field::FiniteField;
use crate::gf::{Gf3, Gf81};

use super::Param;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degeneracy {
    Keep,
    /// The induced map to P(1,1,1,2) is constant.
    ConstantMap,
    /// `(t − c)` divides `x, y, z` and `(t − c)²` divides `w` for some `c ∈ F₃`.
    Reducible,
}

/// Image of a point of the projective line: `Some(t)` is the affine point,
/// `None` the point at infinity (top coefficients at degrees `d, d, d, 2d`).
pub fn image_point<F: FiniteField>(p: &Param, at: Option<F>) -> [F; 4] {
    match at {
        Some(t) => [p.x.eval(t), p.y.eval(t), p.z.eval(t), p.w.eval(t)],
        None => {
            let d = p.level as usize;
            let top = |q: crate::Poly, k: usize| F::from_gf3(q.coeff(k));
            [top(p.x, d), top(p.y, d), top(p.z, d), top(p.w, 2 * d)]
        }
    }
}

/// Equality in P(1,1,1,2) over the algebraic closure: `q = (λa, λb, λc, λ²e)`.
pub(crate) fn same_weighted_point<F: FiniteField>(p: &[F; 4], q: &[F; 4]) -> bool {
    let Some(k) = (0..3).find(|&k| !p[k].is_zero()) else {
        // [0:0:0:w] is a single point for any w ≠ 0
        return q[..3].iter().all(|c| c.is_zero()) && p[3].is_zero() == q[3].is_zero();
    };
    let lambda = q[k] * p[k].inv().unwrap();
    if lambda.is_zero() {
        return false;
    }
    (0..3).all(|i| q[i] == lambda * p[i]) && q[3] == lambda * lambda * p[3]
}

/// Classifies a solution as reducible through a lower level, constant, or kept.
/// The divisibility test runs first.
///
/// Constancy is decided from the images of all 82 points of P¹(F₈₁); points
/// where all four coordinates vanish are skipped.
pub fn degeneracy_filter(p: &Param) -> Degeneracy {
    let reducible = Gf3::elements().into_iter().any(|c| {
        p.x.divisible_by_linear(c, 1)
            && p.y.divisible_by_linear(c, 1)
            && p.z.divisible_by_linear(c, 1)
            && p.w.divisible_by_linear(c, 2)
    });
    if reducible {
        return Degeneracy::Reducible;
    }
    let mut first: Option<[Gf81; 4]> = None;
    let points = Gf81::elements().into_iter().map(Some).chain(std::iter::once(None));
    for at in points {
        let img = image_point(p, at);
        if img.iter().all(|c| c.is_zero()) {
            continue;
        }
        match &first {
            None => first = Some(img),
            Some(f) if !same_weighted_point(f, &img) => return Degeneracy::Keep,
            _ => {}
        }
    }
    Degeneracy::ConstantMap
}
