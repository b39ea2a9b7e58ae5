//! Dense cell sets over a fixed lattice, stored as a bitmap keyed by the
//! lattice's linear index, plus the line-oriented text interchange format.

use crate::error::{Error, Result};
use crate::lattice::{Cell, LatticeSpec};

/// Set of cells of one lattice. Indices follow [`LatticeSpec::index_of`];
/// iteration is always in ascending index order, which makes every derived
/// ordering in the crate deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    words: Vec<u64>,
    capacity: usize,
    count: usize,
}

impl CellSet {
    pub fn empty(capacity: usize) -> Self {
        CellSet {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
            count: 0,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = CellSet::empty(capacity);
        for idx in 0..capacity {
            s.insert(idx);
        }
        s
    }

    pub fn from_indices(capacity: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = CellSet::empty(capacity);
        for idx in indices {
            s.insert(idx);
        }
        s
    }

    pub fn from_cells(spec: &LatticeSpec, cells: &[Cell]) -> Result<Self> {
        let mut s = CellSet::empty(spec.cell_count());
        for c in cells {
            s.insert(spec.index_of(c)?);
        }
        Ok(s)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Cached cardinality; O(1).
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.capacity && self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Returns true if the cell was newly inserted.
    pub fn insert(&mut self, idx: usize) -> bool {
        assert!(idx < self.capacity, "index {idx} out of range");
        let w = &mut self.words[idx / 64];
        let m = 1u64 << (idx % 64);
        if *w & m == 0 {
            *w |= m;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, idx: usize) -> bool {
        assert!(idx < self.capacity, "index {idx} out of range");
        let w = &mut self.words[idx / 64];
        let m = 1u64 << (idx % 64);
        if *w & m != 0 {
            *w &= !m;
            self.count -= 1;
            true
        } else {
            false
        }
    }

    pub fn union_with(&mut self, other: &CellSet) {
        assert_eq!(self.capacity, other.capacity);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        self.recount();
    }

    pub fn intersect_with(&mut self, other: &CellSet) {
        assert_eq!(self.capacity, other.capacity);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        self.recount();
    }

    pub fn is_subset_of(&self, other: &CellSet) -> bool {
        assert_eq!(self.capacity, other.capacity);
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }

    fn recount(&mut self) {
        self.count = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    /// Ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// Parse the text interchange format: one cell per line as comma-separated
/// 1-based coordinates; `#` starts a comment; blank lines are skipped.
pub fn parse_cells(spec: &LatticeSpec, text: &str) -> Result<CellSet> {
    let mut set = CellSet::empty(spec.cell_count());
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cell: Cell = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("line {}: bad coordinate {f:?}", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        if !spec.contains(&cell) {
            return Err(Error::Parse(format!(
                "line {}: cell ({line}) outside the lattice",
                lineno + 1
            )));
        }
        set.insert(spec.index_of(&cell)?);
    }
    Ok(set)
}

/// Write the text format in ascending index order, LF-terminated. Reparsing
/// the output reproduces the set bit-for-bit.
pub fn write_cells(spec: &LatticeSpec, set: &CellSet) -> String {
    let mut out = String::new();
    for idx in set.iter() {
        let cell = spec.cell_of(idx);
        let line = cell
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&line);
        out.push('\n');
    }
    out
}
