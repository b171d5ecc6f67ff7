use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::poly::{packed_add, PackedPoly};
use crate::Poly;

use super::lhs::{leading_is_one, shifted};
use super::{
    degeneracy_filter, gen_lhs_blocks, gen_rhs_table, Degeneracy, LhsBlock, Param, RhsTable, SearchConfig,
    SearchCounts, SearchError, SolutionSet,
};

type P64 = PackedPoly<u64>;
type ScannedBlock = (LhsBlock, Vec<(u64, u64)>);

/// Outcome of one level, with timings for telemetry. `scan_time` covers
/// matching and reconstruction.
#[derive(Clone, Debug)]
pub struct LevelReport {
    pub solutions: SolutionSet,
    pub table_bytes: usize,
    pub table_time: Duration,
    pub scan_time: Duration,
}

/// Probes every left side of a block against the table; returns matched
/// `(x, w)` words (sign representatives when the block is folded).
fn scan_block(table: &RhsTable, block: &LhsBlock) -> (Vec<(u64, u64)>, u64) {
    let xs: Vec<(u64, u64)> = block
        .x_words()
        .into_iter()
        .map(|x| {
            let p = P64::from_word_unchecked(x);
            (x, p.cube().unwrap().mul(p).unwrap().word())
        })
        .collect();
    let mut found = Vec::new();
    let mut probes = 0u64;
    for wi in block.w_range.clone() {
        let w = shifted(wi);
        if block.folded && !leading_is_one(w.word()) {
            continue;
        }
        let w2 = w.mul(w).unwrap().word();
        for &(x, x4) in &xs {
            if table.contains(packed_add(x4, w2)) {
                found.push((x, w.word()));
            }
        }
        probes += xs.len() as u64;
    }
    (found, probes)
}

fn signs(word: u64, folded: bool) -> Vec<Poly> {
    let p: Poly = P64::from_word_unchecked(word).convert().unwrap();
    if folded && !p.is_zero() {
        vec![p, -p]
    } else {
        vec![p]
    }
}

/// Intersects the table with the streamed left sides and reconstructs the
/// level-exact nondegenerate solutions. The result does not depend on the
/// thread count or the block partition.
pub fn match_blocks<I>(
    table: &RhsTable,
    blocks: I,
    threads: usize,
    keep_degenerate: bool,
) -> Result<SolutionSet, SearchError>
where
    I: IntoIterator<Item = LhsBlock>,
{
    let level = table.level();
    let blocks: Vec<LhsBlock> = blocks.into_iter().collect();
    let total = blocks.len();
    let completed = AtomicUsize::new(0);
    let probes = AtomicU64::new(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| SearchError::Worker { completed: 0, total, message: e.to_string() })?;

    let scanned: Result<Vec<ScannedBlock>, String> = pool.install(|| {
        blocks
            .par_iter()
            .map(|block| {
                catch_unwind(AssertUnwindSafe(|| scan_block(table, block)))
                    .map(|(found, n)| {
                        completed.fetch_add(1, Ordering::Relaxed);
                        probes.fetch_add(n, Ordering::Relaxed);
                        (block.clone(), found)
                    })
                    .map_err(|e| {
                        e.downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| e.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "worker panicked".to_string())
                    })
            })
            .collect()
    });
    let scanned = scanned.map_err(|message| SearchError::Worker {
        completed: completed.load(Ordering::Relaxed),
        total,
        message,
    })?;

    let mut counts = SearchCounts {
        probes: probes.load(Ordering::Relaxed),
        table_entries: table.len() as u64,
        ..SearchCounts::default()
    };
    let mut kept = Vec::new();
    let mut degenerate = Vec::new();
    for (block, found) in scanned {
        for (xw, ww) in found {
            let x0: Poly = P64::from_word_unchecked(xw).convert().unwrap();
            let w0: Poly = P64::from_word_unchecked(ww).convert().unwrap();
            let value = crate::poly::lhs(x0, w0)?.convert::<u64>()?.word();
            let entries = table.lookup(value);
            for x in signs(xw, block.folded) {
                for w in signs(ww, block.folded) {
                    for entry in entries {
                        for (y, z) in table.pairs(entry) {
                            counts.raw += 1;
                            let p = Param::new(x, y, z, w, level);
                            if !p.is_level_exact() {
                                continue;
                            }
                            counts.level_exact += 1;
                            let class = degeneracy_filter(&p);
                            match class {
                                Degeneracy::ConstantMap => counts.constant_map += 1,
                                Degeneracy::Reducible => counts.reducible += 1,
                                Degeneracy::Keep => {}
                            }
                            match class {
                                Degeneracy::ConstantMap | Degeneracy::Reducible => {
                                    if keep_degenerate {
                                        degenerate.push((p, class));
                                    }
                                }
                                Degeneracy::Keep => {
                                    if !p.verify() {
                                        return Err(SearchError::Unverified(p));
                                    }
                                    kept.push(p);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut set = SolutionSet::new(level, kept, counts);
    set.counts.kept = set.params.len() as u64;
    set.counts.normalized = set.normalized().len() as u64;
    degenerate.sort_unstable();
    set.degenerate = degenerate;
    set.check_symmetries()?;
    Ok(set)
}

/// Builds the table for one level, scans all left sides and reconstructs.
pub fn run_level(config: &SearchConfig) -> Result<LevelReport, SearchError> {
    config.validate()?;
    let start = Instant::now();
    let table = gen_rhs_table(config.level, config.mode, config.purge_linear, config.memory_budget)?;
    run_level_with_table(config, &table, start.elapsed())
}

/// Same as [`run_level`] with a prebuilt (for example cached) table.
pub fn run_level_with_table(
    config: &SearchConfig,
    table: &RhsTable,
    table_time: Duration,
) -> Result<LevelReport, SearchError> {
    config.validate()?;
    if table.level() != config.level {
        return Err(SearchError::Cache(format!(
            "table is for level {} but the search is at level {}",
            table.level(),
            config.level
        )));
    }
    let scan_start = Instant::now();
    let blocks = gen_lhs_blocks(config.level, config.block_size, config.fold_lhs);
    let solutions = match_blocks(table, blocks, config.threads, config.keep_degenerate)?;
    let elapsed = scan_start.elapsed();
    Ok(LevelReport {
        solutions,
        table_bytes: table.heap_bytes(),
        table_time,
        scan_time: elapsed,
    })
}
