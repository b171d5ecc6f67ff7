use dp2_core::geometry::run_geometry;
use dp2_core::orbits::Moebius;
use dp2_core::poly::{cube, lhs, mul, rhs};
use dp2_core::search::{run_level, SearchConfig, TableMode};
use dp2_core::{FiniteField, Gf81, Poly};

use crate::CliError;

fn p(s: &str) -> Poly {
    s.parse().expect("literal")
}

fn checks() -> Vec<(&'static str, bool)> {
    let mut out = Vec::new();
    let i = Gf81::SQRT_MINUS_ONE;
    out.push(("gf81_sqrt_minus_one", i * i == -Gf81::ONE));
    out.push(("gf81_frobenius_order", Gf81::elements().iter().all(|a| a.frobenius_pow(4) == *a)));
    let t1 = p("[1,1]");
    let cube_ok = cube(t1).ok() == Some(p("[1,0,0,1]"));
    let mul_ok = mul(t1, p("[2,1]")).ok() == Some(p("[2,0,1]"));
    out.push(("poly_arithmetic", cube_ok && mul_ok));
    out.push(("poly_sides", lhs(p("[0,1]"), p("[0,0,1]")).ok() == Some(p("[0,0,0,0,2]"))
        && rhs(p("[0,1]"), p("[1]")).ok() == Some(p("[0,1,0,2]"))));
    out.push(("moebius_group", Moebius::all().len() == 24));

    let transparent = (1..=3).all(|level| {
        let mut full = SearchConfig::new(level);
        full.mode = TableMode::Full;
        full.fold_lhs = false;
        full.purge_linear = false;
        let folded = SearchConfig::new(level);
        match (run_level(&full), run_level(&folded)) {
            (Ok(a), Ok(b)) => a.solutions.params == b.solutions.params && a.solutions.counts.raw == b.solutions.counts.raw,
            _ => false,
        }
    });
    out.push(("search_folding_transparent", transparent));
    out.push(("geometry", run_geometry().map(|r| r.all_passed()).unwrap_or(false)));
    out
}

pub fn run() -> Result<(), CliError> {
    let results = checks();
    for (name, pass) in &results {
        println!("{name}={}", if *pass { "pass" } else { "FAIL" });
    }
    let failed: Vec<&str> = results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("selftest failed: {}", failed.join(", "))))
    }
}
