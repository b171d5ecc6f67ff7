//! Independent checks of a `search` output file for one level.
//!
//! 1. Closure under the surface automorphisms `(x, y, z) ↦ M·(x, y, z)`.
//! 2. Random sampling: draw unfolded `(y, z)`, solve `w² = rhs − x⁴` for
//!    every admissible `x` through a table of squares, and look every
//!    nondegenerate level-exact hit up in the file. No right-hand table,
//!    folding or purge is involved.
//!
//! Usage: `crosscheck <file> [level] [pairs] [seed]`

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::BufReader;

use dp2_core::format::read_params;
use dp2_core::geometry::automorphism_group;
use dp2_core::orbits::scalar_normalize;
use dp2_core::poly::{rhs, PolyIndex};
use dp2_core::search::{degeneracy_filter, Degeneracy, Param};
use dp2_core::{Gf3, Poly};

fn nth(i: u64) -> Poly {
    Poly::from_index(PolyIndex(i as u128)).unwrap()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let path = args.get(1).expect("usage: crosscheck <file> [level] [pairs] [seed]");
    let level: u32 = args.get(2).map_or(8, |s| s.parse().unwrap());
    let pairs: u64 = args.get(3).map_or(1_000_000, |s| s.parse().unwrap());
    let mut state: u64 = args.get(4).map_or(0x9E37_79B9_7F4A_7C15, |s| s.parse().unwrap());
    let d = level as usize;

    let params: Vec<Param> = read_params(BufReader::new(File::open(path).unwrap()))
        .unwrap()
        .into_iter()
        .filter(|p| p.level == level)
        .collect();
    let found: HashSet<Param> = params.iter().copied().collect();

    let group = automorphism_group();
    let mut outside = 0;
    for p in &params {
        for m in &group.preserving {
            let v = [p.x, p.y, p.z];
            let row = |r: usize| v.iter().zip(m[r]).fold(Poly::zero(), |a, (q, s)| a + q.scale(s));
            let q = Param::new(row(0), row(1), row(2), p.w, level);
            if !found.contains(&scalar_normalize(&q).unwrap()) {
                outside += 1;
            }
        }
    }
    println!("automorphism images outside the file: {outside}");

    let t = Poly::t();
    let pow3 = |n: usize| 3u64.pow(n as u32);
    let mut roots: HashMap<u128, Poly> = HashMap::new();
    for i in 0..pow3(2 * d - 1) {
        let w = t.mul(nth(i)).unwrap();
        roots.entry(w.mul(w).unwrap().word()).or_insert(w);
    }
    let xs: Vec<(Poly, Poly)> = (0..pow3(d - 1))
        .map(|i| {
            let x = t.mul(nth(i)).unwrap();
            let x2 = x.mul(x).unwrap();
            (x, x2.mul(x2).unwrap())
        })
        .collect();
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % pow3(d + 1)
    };
    let (mut hits, mut missing) = (0u64, 0u64);
    for _ in 0..pairs {
        let (y, z) = (nth(next()), nth(next()));
        let v = rhs(y, z).unwrap();
        if v.coeff(1) != Gf3::ZERO {
            continue;
        }
        for &(x, x4) in &xs {
            let Some(&w) = roots.get(&(v - x4).word()) else { continue };
            for w in [w, -w] {
                let p = Param::new(x, y, z, w, level);
                if !p.is_level_exact() || degeneracy_filter(&p) != Degeneracy::Keep {
                    continue;
                }
                hits += 1;
                if !found.contains(&scalar_normalize(&p).unwrap()) {
                    missing += 1;
                    println!("missing: {p}");
                }
            }
        }
    }
    let expected = pairs as f64 * 2.0 * params.len() as f64 / (pow3(d + 1) * pow3(d + 1)) as f64;
    println!("sampled pairs={pairs} hits={hits} (expected about {expected:.0}) missing={missing}");
}
