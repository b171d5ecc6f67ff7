use std::io::{Read, Write};

use crate::gf::Gf3;
use crate::poly::{packed_add, packed_neg, rhs, PackedPoly, PolyIndex};
use crate::Poly;

use super::SearchError;

type P64 = PackedPoly<u64>;

pub const RHS_CACHE_MAGIC: &[u8; 7] = b"DP2RHS1";

const EMPTY: u64 = u64::MAX;
const HASH_MUL: u64 = 0x9E37_79B9_7F4A_7C15;

/// How the `(y, z)` pairs behind each value are stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    /// One entry per pair.
    Full,
    /// One entry per SL₂(F₃)-orbit of pairs spanning a plane; entries with
    /// value 0 (dependent pairs) are stored individually.
    Folded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RhsEntry {
    /// Packed `y·z³ − y³·z`.
    pub value: u64,
    /// Base-3 index of `y`.
    pub y: u32,
    pub z: u32,
}

#[derive(Clone, Copy)]
struct Slot {
    key: u64,
    start: u32,
    len: u32,
}

/// Open-addressing index from a value to its run in the sorted entry list.
struct KeyIndex {
    shift: u32,
    mask: usize,
    slots: Vec<Slot>,
}

impl KeyIndex {
    fn build(entries: &[RhsEntry]) -> Self {
        let distinct = entries.chunk_by(|a, b| a.value == b.value).count().max(1);
        let bits = (usize::BITS - (2 * distinct - 1).leading_zeros()).max(4);
        let size = 1usize << bits;
        let mut index = KeyIndex {
            shift: 64 - bits,
            mask: size - 1,
            slots: vec![Slot { key: EMPTY, start: 0, len: 0 }; size],
        };
        let mut start = 0usize;
        for run in entries.chunk_by(|a, b| a.value == b.value) {
            let mut pos = index.home(run[0].value);
            while index.slots[pos].key != EMPTY {
                pos = (pos + 1) & index.mask;
            }
            index.slots[pos] = Slot { key: run[0].value, start: start as u32, len: run.len() as u32 };
            start += run.len();
        }
        index
    }

    #[inline(always)]
    fn home(&self, key: u64) -> usize {
        (key.wrapping_mul(HASH_MUL) >> self.shift) as usize
    }

    #[inline(always)]
    fn find(&self, key: u64) -> Option<(u32, u32)> {
        let mut pos = self.home(key);
        loop {
            let slot = unsafe { self.slots.get_unchecked(pos) };
            if slot.key == key {
                return Some((slot.start, slot.len));
            }
            if slot.key == EMPTY {
                return None;
            }
            pos = (pos + 1) & self.mask;
        }
    }

    fn bytes(&self) -> usize {
        self.slots.len() * std::mem::size_of::<Slot>()
    }
}

/// Right-hand sides sorted by value, with constant-time lookup.
pub struct RhsTable {
    level: u32,
    mode: TableMode,
    linear_purged: bool,
    entries: Vec<RhsEntry>,
    index: KeyIndex,
}

impl std::fmt::Debug for RhsTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RhsTable")
            .field("level", &self.level)
            .field("mode", &self.mode)
            .field("linear_purged", &self.linear_purged)
            .field("entries", &self.entries.len())
            .finish()
    }
}

/// The 24 matrices `[[a, b], [c, e]]` over F₃ with determinant 1.
pub fn sl2_f3() -> Vec<[[Gf3; 2]; 2]> {
    let mut out = Vec::with_capacity(24);
    for n in 0..81u8 {
        let d = |k: u32| Gf3::new(n / 3u8.pow(k) % 3);
        let m = [[d(0), d(1)], [d(2), d(3)]];
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] == Gf3::ONE {
            out.push(m);
        }
    }
    out
}

#[inline(always)]
fn linear_coeff(v: u64) -> u64 {
    (v >> 2) & 3
}

fn p64(index: u32) -> P64 {
    P64::from_index(PolyIndex(index as u128)).expect("index fits")
}

fn idx(p: P64) -> u32 {
    p.index().0 as u32
}

/// Rough peak size in bytes of the table for a level and mode.
pub fn estimate_table_bytes(level: u32, mode: TableMode, purge_linear: bool) -> u64 {
    let n = level as i32 + 1;
    let q = 3f64;
    let keep = if purge_linear { 0.5 } else { 1.0 };
    let entries = match mode {
        TableMode::Full => q.powi(2 * n) * keep,
        TableMode::Folded => {
            let planes = (q.powi(n) - 1.0) * (q.powi(n - 1) - 1.0) / ((q * q - 1.0) * (q - 1.0));
            2.0 * planes * keep + 4.0 * q.powi(n)
        }
    };
    // entry + two index slots per entry in the worst case + sort scratch
    (entries * (16.0 + 32.0 + 16.0)) as u64
}

/// Tabulates `y·z³ − y³·z` for all `(y, z)` with `deg ≤ level`.
///
/// The constant term of every value is zero. With `purge_linear`, values with
/// a nonzero `t`-coefficient are dropped: admissible left sides never have one.
pub fn gen_rhs_table(
    level: u32,
    mode: TableMode,
    purge_linear: bool,
    memory_budget: u64,
) -> Result<RhsTable, SearchError> {
    if level == 0 || level > super::MAX_LEVEL {
        return Err(SearchError::UnsupportedLevel(level));
    }
    let estimate = estimate_table_bytes(level, mode, purge_linear);
    if estimate > memory_budget {
        return Err(SearchError::MemoryBudget { estimate, budget: memory_budget });
    }
    let mut entries = match mode {
        TableMode::Full => full_entries(level, purge_linear),
        TableMode::Folded => folded_entries(level, purge_linear),
    };
    entries.sort_unstable();
    Ok(RhsTable::from_sorted(level, mode, purge_linear, entries))
}

fn full_entries(level: u32, purge_linear: bool) -> Vec<RhsEntry> {
    let n = level as usize + 1;
    let count = 3u32.pow(n as u32);
    let mut out = Vec::new();
    for zi in 0..count {
        let z = p64(zi);
        // y ↦ rhs(y, z) is F₃-linear, so stepping one base-3 digit of y
        // adds the image of the matching monomial
        let images: Vec<u64> = (0..n)
            .map(|i| rhs(P64::monomial(Gf3::ONE, i), z).unwrap().word())
            .collect();
        let mut digits = vec![0u8; n];
        let mut value = 0u64;
        for yi in 0..count {
            if yi > 0 {
                let mut i = 0;
                loop {
                    value = packed_add(value, images[i]);
                    digits[i] += 1;
                    if digits[i] == 3 {
                        digits[i] = 0;
                        i += 1;
                    } else {
                        break;
                    }
                }
            }
            if !purge_linear || linear_coeff(value) == 0 {
                out.push(RhsEntry { value, y: yi, z: zi });
            }
        }
    }
    out
}

fn folded_entries(level: u32, purge_linear: bool) -> Vec<RhsEntry> {
    let d = level as usize;
    let mut out = Vec::new();
    // dependent pairs (α·g, β·g) all give 0
    out.push(RhsEntry { value: 0, y: 0, z: 0 });
    for e in 0..=d {
        for low in 0..3u32.pow(e as u32) {
            let g = p64(low) + P64::monomial(Gf3::ONE, e);
            for a in 0..3u8 {
                for b in 0..3u8 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let y = g.scale(Gf3::new(a));
                    let z = g.scale(Gf3::new(b));
                    out.push(RhsEntry { value: 0, y: idx(y), z: idx(z) });
                }
            }
        }
    }
    // planes, via the unique basis (b1, b2) with monic b1, b2,
    // deg b1 > deg b2 and b1 free of the t^(deg b2) term
    for e1 in 1..=d {
        for e2 in 0..e1 {
            for low2 in 0..3u32.pow(e2 as u32) {
                let b2 = p64(low2) + P64::monomial(Gf3::ONE, e2);
                for low1 in 0..3u32.pow(e1 as u32) {
                    let b1 = p64(low1);
                    if b1.coeff(e2) != Gf3::ZERO {
                        continue;
                    }
                    let b1 = b1 + P64::monomial(Gf3::ONE, e1);
                    let v = rhs(b1, b2).unwrap().word();
                    if purge_linear && linear_coeff(v) != 0 {
                        continue;
                    }
                    out.push(RhsEntry { value: v, y: idx(b1), z: idx(b2) });
                    // (b2, b1) differs by a determinant −1 matrix
                    out.push(RhsEntry { value: packed_neg(v), y: idx(b2), z: idx(b1) });
                }
            }
        }
    }
    out
}

impl RhsTable {
    fn from_sorted(level: u32, mode: TableMode, linear_purged: bool, entries: Vec<RhsEntry>) -> Self {
        let index = KeyIndex::build(&entries);
        RhsTable { level, mode, linear_purged, entries, index }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }

    pub fn linear_purged(&self) -> bool {
        self.linear_purged
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[RhsEntry] {
        &self.entries
    }

    pub fn heap_bytes(&self) -> usize {
        self.entries.len() * std::mem::size_of::<RhsEntry>() + self.index.bytes()
    }

    /// Entries whose value equals `key` (packed word).
    #[inline(always)]
    pub fn lookup(&self, key: u64) -> &[RhsEntry] {
        match self.index.find(key) {
            Some((start, len)) => &self.entries[start as usize..(start + len) as usize],
            None => &[],
        }
    }

    #[inline(always)]
    pub fn contains(&self, key: u64) -> bool {
        self.index.find(key).is_some()
    }

    /// All `(y, z)` pairs an entry stands for.
    pub fn pairs(&self, entry: &RhsEntry) -> Vec<(Poly, Poly)> {
        let y: Poly = p64(entry.y).convert().unwrap();
        let z: Poly = p64(entry.z).convert().unwrap();
        if self.mode == TableMode::Full || entry.value == 0 {
            return vec![(y, z)];
        }
        sl2_f3()
            .into_iter()
            .map(|[[a, b], [c, e]]| (y.scale(a) + z.scale(b), y.scale(c) + z.scale(e)))
            .collect()
    }

    /// Writes `DP2RHS1 | level u32 | flags u8 | count u64 | records`, little-endian.
    /// Each record is `value u64, y u32, z u32`. Flags: bit 0 folded, bit 1 linear purge.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<(), SearchError> {
        out.write_all(RHS_CACHE_MAGIC)?;
        out.write_all(&self.level.to_le_bytes())?;
        let flags = (self.mode == TableMode::Folded) as u8 | ((self.linear_purged as u8) << 1);
        out.write_all(&[flags])?;
        out.write_all(&(self.entries.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * 4096);
        for chunk in self.entries.chunks(4096) {
            buf.clear();
            for e in chunk {
                buf.extend_from_slice(&e.value.to_le_bytes());
                buf.extend_from_slice(&e.y.to_le_bytes());
                buf.extend_from_slice(&e.z.to_le_bytes());
            }
            out.write_all(&buf)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_cache<R: Read>(mut input: R) -> Result<RhsTable, SearchError> {
        let bad = |m: &str| SearchError::Cache(m.to_string());
        let mut magic = [0u8; 7];
        input.read_exact(&mut magic)?;
        if &magic != RHS_CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut b4 = [0u8; 4];
        input.read_exact(&mut b4)?;
        let level = u32::from_le_bytes(b4);
        if level == 0 || level > super::MAX_LEVEL {
            return Err(SearchError::UnsupportedLevel(level));
        }
        let mut flags = [0u8; 1];
        input.read_exact(&mut flags)?;
        let mut b8 = [0u8; 8];
        input.read_exact(&mut b8)?;
        let count = u64::from_le_bytes(b8) as usize;
        let mut entries = Vec::with_capacity(count);
        let mut rec = [0u8; 16];
        for _ in 0..count {
            input.read_exact(&mut rec)?;
            let value = u64::from_le_bytes(rec[0..8].try_into().unwrap());
            if P64::from_word(value).is_err() {
                return Err(bad("invalid packed value"));
            }
            entries.push(RhsEntry {
                value,
                y: u32::from_le_bytes(rec[8..12].try_into().unwrap()),
                z: u32::from_le_bytes(rec[12..16].try_into().unwrap()),
            });
        }
        if !entries.windows(2).all(|w| w[0] <= w[1]) {
            return Err(bad("records are not sorted"));
        }
        let mode = if flags[0] & 1 == 1 { TableMode::Folded } else { TableMode::Full };
        Ok(RhsTable::from_sorted(level, mode, flags[0] & 2 == 2, entries))
    }
}
