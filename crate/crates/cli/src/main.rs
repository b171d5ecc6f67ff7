//! `dp2`: search for rational curves on `−w² = x⁴ + y³z − yz³` over F₃,
//! group them into curves, re-verify solution files, and print the
//! geometry report.
//!
//! Exit codes: 0 success, 1 failed check or I/O error, 2 memory budget
//! exceeded, 64 usage error, 65 malformed input.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use thiserror::Error;

use dp2_core::format::{self, FormatError};
use dp2_core::geometry::run_geometry;
use dp2_core::orbits::{orbit_partition, scalar_normalize, size_histogram, OrbitError};
use dp2_core::search::{
    degeneracy_filter, gen_rhs_table, run_level_with_table, Degeneracy, Param, RhsTable, SearchConfig,
    SearchCounts, SearchError, TableMode, MAX_LEVEL,
};

mod selftest;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
            CliError::Budget(_) => 2,
            CliError::Failed(_) | CliError::Io { .. } => 1,
        }
    }

    fn io(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::MemoryBudget { .. } => CliError::Budget(e.to_string()),
            SearchError::UnsupportedLevel(_) => CliError::Usage(e.to_string()),
            SearchError::Io(source) => CliError::Io { context: "search".into(), source },
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Malformed { .. } => CliError::Data(e.to_string()),
            FormatError::Io(source) => CliError::Io { context: "reading input".into(), source },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "dp2", version, about = "Rational curves on a degree-2 del Pezzo surface over F3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the meet-in-the-middle search for levels 1..=degree.
    Search(SearchArgs),
    /// Group normalized parametrizations into curves (PGL2(F3)-orbits).
    Dedup {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Re-check every line of a solution file.
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Print the geometry report and its checks.
    Geometry {
        #[arg(long)]
        json: bool,
    },
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_LEVEL as i64))]
    degree: u32,
    /// First level to run (lower levels are skipped).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=MAX_LEVEL as i64))]
    from: u32,
    #[arg(long, env = "DP2_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Left-hand pairs per work block.
    #[arg(long, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    block_size: u64,
    /// Table memory limit in bytes; K, M and G suffixes are accepted.
    #[arg(long, env = "DP2_MEMORY_BUDGET", default_value = "4G", value_parser = parse_bytes)]
    memory_budget: u64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Directory for right-hand table cache files.
    #[arg(long, value_name = "DIR")]
    cache_rhs: Option<PathBuf>,
    /// Enumerate both sides without symmetry folding.
    #[arg(long)]
    no_fold: bool,
    /// Keep table values with a nonzero linear coefficient.
    #[arg(long)]
    no_purge_linear: bool,
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, mult) = match s.char_indices().last() {
        Some((i, c)) if c.is_ascii_alphabetic() => {
            let m = match c.to_ascii_uppercase() {
                'K' => 1u64 << 10,
                'M' => 1 << 20,
                'G' => 1 << 30,
                'T' => 1 << 40,
                _ => return Err(format!("unknown size suffix `{c}`")),
            };
            (&s[..i], m)
        }
        _ => (s, 1),
    };
    let n: u64 = digits.trim().parse().map_err(|e| format!("invalid size `{s}`: {e}"))?;
    n.checked_mul(mult).ok_or_else(|| format!("size `{s}` overflows"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Search(args) => cmd_search(args),
        Command::Dedup { input, out } => cmd_dedup(&input, out.as_deref()),
        Command::Verify { input } => cmd_verify(&input),
        Command::Geometry { json } => cmd_geometry(json),
        Command::Selftest => selftest::run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dp2: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(CliError::io(format!("creating {}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_input(path: &Path) -> Result<Vec<(usize, Param)>, CliError> {
    let f = File::open(path).map_err(CliError::io(format!("opening {}", path.display())))?;
    Ok(format::read_numbered(BufReader::new(f))?)
}

fn cache_path(dir: &Path, cfg: &SearchConfig) -> PathBuf {
    let mode = match cfg.mode {
        TableMode::Full => "full",
        TableMode::Folded => "folded",
    };
    let purge = if cfg.purge_linear { "purged" } else { "all" };
    dir.join(format!("rhs-d{}-{mode}-{purge}.bin", cfg.level))
}

fn load_or_build(cfg: &SearchConfig, cache: Option<&Path>) -> Result<(RhsTable, Duration, &'static str), CliError> {
    let start = Instant::now();
    if let Some(dir) = cache {
        let path = cache_path(dir, cfg);
        if path.exists() {
            let f = File::open(&path).map_err(CliError::io(format!("opening {}", path.display())))?;
            let table = RhsTable::read_cache(BufReader::new(f))?;
            if table.level() == cfg.level && table.mode() == cfg.mode && table.linear_purged() == cfg.purge_linear {
                return Ok((table, start.elapsed(), "cache"));
            }
            return Err(CliError::Failed(format!("{} does not match the search settings", path.display())));
        }
        let table = gen_rhs_table(cfg.level, cfg.mode, cfg.purge_linear, cfg.memory_budget)?;
        let elapsed = start.elapsed();
        std::fs::create_dir_all(dir).map_err(CliError::io(format!("creating {}", dir.display())))?;
        let f = File::create(&path).map_err(CliError::io(format!("creating {}", path.display())))?;
        let mut w = BufWriter::new(f);
        table.write_cache(&mut w)?;
        w.flush().map_err(CliError::io(format!("writing {}", path.display())))?;
        return Ok((table, elapsed, "built+cached"));
    }
    let table = gen_rhs_table(cfg.level, cfg.mode, cfg.purge_linear, cfg.memory_budget)?;
    Ok((table, start.elapsed(), "built"))
}

fn cmd_search(args: SearchArgs) -> Result<(), CliError> {
    if args.from > args.degree {
        return Err(CliError::Usage(format!("--from {} exceeds --degree {}", args.from, args.degree)));
    }
    let threads = match args.threads {
        Some(t) => t as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let mut base = SearchConfig::new(args.degree);
    base.threads = threads;
    base.block_size = usize::try_from(args.block_size).unwrap_or(usize::MAX);
    base.memory_budget = args.memory_budget;
    base.purge_linear = !args.no_purge_linear;
    if args.no_fold {
        base.mode = TableMode::Full;
        base.fold_lhs = false;
    }
    base.validate()?;
    let mut out = open_output(args.out.as_deref())?;

    let mut levels: Vec<(u32, SearchCounts)> = Vec::new();
    let mut solutions = Vec::new();
    for level in args.from..=args.degree {
        let cfg = SearchConfig { level, ..base.clone() };
        let (table, table_time, source) = load_or_build(&cfg, args.cache_rhs.as_deref())?;
        eprintln!(
            "[level {level}] table: {} entries, {} bytes, {:.3}s ({source})",
            table.len(),
            table.heap_bytes(),
            table_time.as_secs_f64()
        );
        let report = run_level_with_table(&cfg, &table, table_time)?;
        drop(table);
        let c = report.solutions.counts;
        eprintln!(
            "[level {level}] scan: {} probes, {} raw, {} level-exact, {} constant, {} reducible, {} kept, {} normalized, {:.3}s",
            c.probes,
            c.raw,
            c.level_exact,
            c.constant_map,
            c.reducible,
            c.kept,
            c.normalized,
            report.scan_time.as_secs_f64()
        );
        solutions.extend(report.solutions.normalized());
        levels.push((level, c));
    }
    format::write_solutions(&mut out, &base, args.from, &levels, &solutions)
        .and_then(|_| out.flush())
        .map_err(CliError::io("writing solutions"))?;
    eprintln!("solutions={}", solutions.len());
    Ok(())
}

fn cmd_dedup(input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let numbered = read_input(input)?;
    let mut params = Vec::with_capacity(numbered.len());
    for (line, p) in numbered {
        let n = scalar_normalize(&p).map_err(|e| CliError::Data(format!("line {line}: {e}")))?;
        params.push(n);
    }
    params.sort_unstable();
    params.dedup();
    let orbits = orbit_partition(&params).map_err(|e| match e {
        OrbitError::Incomplete { .. } => CliError::Failed(e.to_string()),
        other => CliError::Data(other.to_string()),
    })?;
    let hist: BTreeMap<usize, usize> = size_histogram(&orbits);
    let mut w = open_output(out)?;
    format::write_curves(&mut w, &orbits, &hist)
        .and_then(|_| w.flush())
        .map_err(CliError::io("writing curves"))?;
    let summary = format!("orbits={}\norbit_sizes={}", orbits.len(), format::histogram_text(&hist));
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn check_line(p: &Param) -> Result<(), &'static str> {
    if !p.within_bounds() {
        return Err("degree bounds or zero constant terms violated");
    }
    if !p.verify() {
        return Err("x^4 + w^2 != y*z^3 - y^3*z");
    }
    if !p.is_level_exact() {
        return Err("not level-exact");
    }
    match degeneracy_filter(p) {
        Degeneracy::Keep => Ok(()),
        Degeneracy::ConstantMap => Err("constant map"),
        Degeneracy::Reducible => Err("reducible through a lower level"),
    }
}

fn cmd_verify(input: &Path) -> Result<(), CliError> {
    let numbered = read_input(input)?;
    for (line, p) in &numbered {
        if let Err(why) = check_line(p) {
            return Err(CliError::Failed(format!("line {line}: {why}")));
        }
    }
    println!("verified={}", numbered.len());
    Ok(())
}

fn cmd_geometry(json: bool) -> Result<(), CliError> {
    let report = run_geometry().map_err(|e| CliError::Failed(e.to_string()))?;
    let mut stdout = io::stdout().lock();
    let text = if json {
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Failed(e.to_string()))? + "\n"
    } else {
        report.to_text()
    };
    stdout.write_all(text.as_bytes()).map_err(CliError::io("writing report"))?;
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        Err(CliError::Failed(format!("geometry checks failed: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_sizes() {
        assert_eq!(parse_bytes("123"), Ok(123));
        assert_eq!(parse_bytes("4G"), Ok(4 << 30));
        assert_eq!(parse_bytes("16m"), Ok(16 << 20));
        assert!(parse_bytes("4X").is_err());
        assert!(parse_bytes("").is_err());
    }
}
