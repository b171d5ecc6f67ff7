use dp2_core::orbits::{act, scalar_normalize, Moebius};
use dp2_core::poly::{cube, lhs, mul, rhs, PolyIndex};
use dp2_core::search::{run_level, Degeneracy, Param, SearchConfig};
use dp2_core::{Gf3, Poly};
use proptest::prelude::*;

fn poly_upto(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0u8..3, 0..=max_degree + 1)
        .prop_map(|c| Poly::from_coeffs(&c.into_iter().map(Gf3::new).collect::<Vec<_>>()).unwrap())
}

/// Level-exact constant-map solutions at levels 2..=4. Reducible ones are
/// left out: a base point moved to infinity breaks level-exactness.
fn sample_solutions() -> Vec<Param> {
    let mut out = Vec::new();
    for level in 2..=4 {
        let mut cfg = SearchConfig::new(level);
        cfg.keep_degenerate = true;
        let s = run_level(&cfg).unwrap().solutions;
        out.extend(s.degenerate.iter().filter(|(p, c)| *c == Degeneracy::ConstantMap && !(p.x.is_zero() && p.y.is_zero() && p.z.is_zero())).map(|(p, _)| *p));
    }
    out
}

#[test]
fn cube_exhaustive_to_degree_three() {
    for n in 0..3u128.pow(4) {
        let p = Poly::from_index(PolyIndex(n)).unwrap();
        assert_eq!(cube(p).unwrap(), mul(mul(p, p).unwrap(), p).unwrap());
    }
}

#[test]
fn action_preserves_solutions_and_exactness() {
    let sols = sample_solutions();
    assert!(!sols.is_empty());
    let group = Moebius::all();
    for p in sols.iter().step_by(7) {
        for g in &group {
            let q = act(g, p);
            assert!(q.verify(), "{g:?} {p}");
            assert!(q.is_level_exact());
        }
    }
}

#[test]
fn symmetry_closure_of_sample() {
    for p in sample_solutions() {
        assert!(p.swap_yz().verify());
        assert!(p.negate_w().verify());
        assert!(p.scale_xyz().verify());
    }
}

proptest! {
    #[test]
    fn cube_is_triple_product(p in poly_upto(10)) {
        prop_assert_eq!(cube(p).unwrap(), mul(mul(p, p).unwrap(), p).unwrap());
    }

    #[test]
    fn rhs_constant_term_and_leading_cancellation(y in poly_upto(8), z in poly_upto(8)) {
        let r = rhs(y, z).unwrap();
        prop_assert_eq!(r.coeff(0), Gf3::ZERO);
        if let (Some(a), Some(b)) = (y.degree(), z.degree()) {
            if a == b {
                prop_assert_eq!(r.coeff(a + 3 * b), Gf3::ZERO);
            }
        }
    }

    #[test]
    fn observation_one(x in poly_upto(4), y in poly_upto(4), z in poly_upto(4), w in poly_upto(8)) {
        let p = Param::new(x, y, z, w, 4);
        prop_assert_eq!(p.verify(), p.swap_yz().verify());
        prop_assert_eq!(rhs(z, -y).unwrap(), rhs(y, z).unwrap());
    }

    #[test]
    fn lhs_low_terms(x in poly_upto(6), w in poly_upto(12)) {
        let l = lhs(x, w).unwrap();
        let zero_consts = x.coeff(0) == Gf3::ZERO && w.coeff(0) == Gf3::ZERO;
        prop_assert_eq!(l.coeff(0) == Gf3::ZERO, zero_consts);
        if zero_consts {
            prop_assert_eq!(l.coeff(1), Gf3::ZERO);
        }
    }

    #[test]
    fn lhs_top_term(x in poly_upto(6), w in poly_upto(12)) {
        let e = x.degree().unwrap_or(0).max(w.degree().unwrap_or(0).div_ceil(2));
        prop_assume!(e > 0 && (x.degree() == Some(e) || w.degree() == Some(2 * e)));
        prop_assert_ne!(lhs(x, w).unwrap().coeff(4 * e), Gf3::ZERO);
    }

    #[test]
    fn index_round_trip(n in 0u128..3u128.pow(40)) {
        prop_assert_eq!(Poly::from_index(PolyIndex(n)).unwrap().index(), PolyIndex(n));
    }

    #[test]
    fn action_composes(i in 0usize..24, j in 0usize..24, x in poly_upto(2), y in poly_upto(3), z in poly_upto(3), w in poly_upto(5)) {
        prop_assume!(!(x.is_zero() && y.is_zero() && z.is_zero()));
        let group = Moebius::all();
        let (g, h) = (group[i], group[j]);
        let p = Param::new(x, y, z, w, 3);
        prop_assert_eq!(act(&(g * h), &p), act(&g, &act(&h, &p)));
        prop_assert_eq!(act(&Moebius::identity(), &p), scalar_normalize(&p).unwrap());
    }
}
