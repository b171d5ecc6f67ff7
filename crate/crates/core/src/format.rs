//! Text formats: solution files and curve lists.
//!
//! A solution file is a header of `#` lines followed by one parametrization
//! per line, `d=<d>; x=[..]; y=[..]; z=[..]; w=[..]`. Curve lists use the
//! same line form with a trailing `; orbit_size=<n>`.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::orbits::CurveOrbit;
use crate::search::{Param, SearchConfig, SearchCounts, MAX_LEVEL};
use crate::Poly;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parses one parametrization line. A trailing `orbit_size=` field is accepted
/// and ignored.
pub fn parse_param(line: &str) -> Result<Param, String> {
    let mut fields = line.split(';').map(str::trim).filter(|f| !f.is_empty());
    let mut take = |key: &str| -> Result<&str, String> {
        let f = fields.next().ok_or_else(|| format!("missing field `{key}`"))?;
        let (k, v) = f.split_once('=').ok_or_else(|| format!("expected `{key}=...`, found `{f}`"))?;
        if k.trim() != key {
            return Err(format!("expected field `{key}`, found `{}`", k.trim()));
        }
        Ok(v.trim())
    };
    let level: u32 = take("d")?.parse().map_err(|e| format!("bad level: {e}"))?;
    if level == 0 || level > MAX_LEVEL {
        return Err(format!("level {level} outside 1..={MAX_LEVEL}"));
    }
    let mut poly = |key: &str| -> Result<Poly, String> {
        take(key)?.parse::<Poly>().map_err(|e| format!("field `{key}`: {e}"))
    };
    let (x, y, z, w) = (poly("x")?, poly("y")?, poly("z")?, poly("w")?);
    for rest in fields {
        match rest.split_once('=') {
            Some(("orbit_size", v)) if v.trim().parse::<usize>().is_ok() => {}
            _ => return Err(format!("unexpected trailing field `{rest}`")),
        }
    }
    Ok(Param::new(x, y, z, w, level))
}

/// Reads every parametrization, skipping blank and `#` lines. Errors carry
/// 1-based line numbers.
pub fn read_params<R: BufRead>(reader: R) -> Result<Vec<Param>, FormatError> {
    read_numbered(reader).map(|v| v.into_iter().map(|(_, p)| p).collect())
}

/// Like [`read_params`], keeping the line number of each entry.
pub fn read_numbered<R: BufRead>(reader: R) -> Result<Vec<(usize, Param)>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let p = parse_param(trimmed).map_err(|message| FormatError::Malformed { line: i + 1, message })?;
        out.push((i + 1, p));
    }
    Ok(out)
}

/// Per-level header line.
pub fn counts_line(level: u32, c: &SearchCounts) -> String {
    format!(
        "# level={level} raw={} level_exact={} constant_map={} reducible={} kept={} normalized={} probes={} table_entries={}",
        c.raw, c.level_exact, c.constant_map, c.reducible, c.kept, c.normalized, c.probes, c.table_entries
    )
}

/// Writes a search result. The header records the degree range, the
/// filters and the per-level counts; thread count and block size are left
/// out so output is identical across runs.
pub fn write_solutions<W: Write>(
    mut out: W,
    config: &SearchConfig,
    from_level: u32,
    levels: &[(u32, SearchCounts)],
    params: &[Param],
) -> io::Result<()> {
    writeln!(out, "# dp2 search degree={} from={} filters={}", config.level, from_level, config.filter_summary())?;
    for (level, counts) in levels {
        writeln!(out, "{}", counts_line(*level, counts))?;
    }
    writeln!(out, "# solutions={}", params.len())?;
    for p in params {
        writeln!(out, "{p}")?;
    }
    Ok(())
}

/// Orbit sizes and their multiplicities.
pub fn histogram_text(hist: &BTreeMap<usize, usize>) -> String {
    if hist.is_empty() {
        return "none".to_string();
    }
    hist.iter().map(|(size, n)| format!("{size}x{n}")).collect::<Vec<_>>().join(",")
}

pub fn write_curves<W: Write>(mut out: W, orbits: &[CurveOrbit], hist: &BTreeMap<usize, usize>) -> io::Result<()> {
    writeln!(out, "# orbits={}", orbits.len())?;
    writeln!(out, "# orbit_sizes={}", histogram_text(hist))?;
    for o in orbits {
        writeln!(out, "{}; orbit_size={}", o.representative, o.size())?;
    }
    Ok(())
}
