use dp2_core::search::oracle::naive_level;
use dp2_core::search::{run_level, Degeneracy, Param, SearchConfig, TableMode};

fn pipeline(level: u32, mode: TableMode, fold: bool) -> Vec<(Param, Degeneracy)> {
    let mut cfg = SearchConfig::new(level);
    cfg.mode = mode;
    cfg.fold_lhs = fold;
    cfg.keep_degenerate = true;
    cfg.block_size = 97;
    let s = run_level(&cfg).unwrap().solutions;
    let mut all = s.degenerate.clone();
    all.extend(s.params.iter().map(|&p| (p, Degeneracy::Keep)));
    all.sort_unstable();
    all
}

#[test]
fn filtered_pipeline_matches_unfiltered_loop() {
    for level in 1..=2 {
        let naive = naive_level(level).unwrap();
        assert!(!naive.is_empty());
        for (mode, fold) in [(TableMode::Full, false), (TableMode::Folded, true)] {
            assert_eq!(pipeline(level, mode, fold), naive, "level {level}");
        }
        let kept: Vec<_> = naive.iter().filter(|(_, c)| *c == Degeneracy::Keep).collect();
        assert!(kept.is_empty());
    }
}

#[test]
fn oracle_solutions_respect_derived_bounds() {
    for (p, _) in naive_level(2).unwrap() {
        assert!(p.within_bounds(), "{p}");
        assert!(p.is_level_exact());
    }
}
