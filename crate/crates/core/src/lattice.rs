//! Finite lattice geometry: axis layout, per-cell infection thresholds,
//! neighbourhoods, and the row-major cell indexing shared by every engine.
//!
//! A lattice has `d` "long" axes of common side `n` followed by `ell` "thick"
//! axes. Cells use 1-based coordinates, long axes first. The linear index is
//! row-major with the last axis varying fastest; all set containers and
//! deterministic orderings rely on that single convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1-based coordinate vector of length `d + ell`, long axes first.
pub type Cell = Vec<u32>;

pub const MAX_CELLS: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    /// Every cell needs `r` infected neighbours.
    Uniform,
    /// Base threshold `r`, plus one for every thick coordinate strictly
    /// between 1 and `k`.
    Thick,
    /// Base threshold 1 with per-axis thick sides, plus one for every thick
    /// coordinate strictly between 1 and that axis' side.
    Slab,
}

/// Validated lattice description. Construct via [`LatticeSpec::uniform`],
/// [`LatticeSpec::thick`], [`LatticeSpec::slab`] or deserialize from the JSON
/// interchange form `{"kind","d","ell","n","k","r"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct LatticeSpec {
    kind: LatticeKind,
    d: usize,
    n: u32,
    /// Sides of the thick axes (length `ell`; all equal for `Thick`).
    thick_sides: Vec<u32>,
    r: u32,
    /// Cached mixed-radix strides, last axis fastest.
    strides: Vec<u64>,
    cells: u64,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: LatticeKind,
    d: usize,
    #[serde(default)]
    ell: usize,
    n: u32,
    #[serde(default)]
    k: Option<KField>,
    r: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum KField {
    Scalar(u32),
    PerAxis(Vec<u32>),
}

impl TryFrom<RawSpec> for LatticeSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw.kind {
            LatticeKind::Uniform => {
                if raw.ell != 0 {
                    return Err(Error::domain("uniform lattice requires ell = 0"));
                }
                LatticeSpec::uniform(raw.d, raw.n, raw.r)
            }
            LatticeKind::Thick => {
                let k = match raw.k {
                    Some(KField::Scalar(k)) => k,
                    _ => return Err(Error::domain("thick lattice requires scalar k")),
                };
                LatticeSpec::thick(raw.d, raw.ell, raw.n, k, raw.r)
            }
            LatticeKind::Slab => {
                let ks = match raw.k {
                    Some(KField::PerAxis(ks)) => ks,
                    Some(KField::Scalar(k)) => vec![k; raw.ell],
                    None => return Err(Error::domain("slab lattice requires k as a list")),
                };
                if ks.len() != raw.ell {
                    return Err(Error::domain(format!(
                        "slab k list has length {}, expected ell = {}",
                        ks.len(),
                        raw.ell
                    )));
                }
                if raw.r != 1 {
                    return Err(Error::domain("slab lattice has base threshold r = 1"));
                }
                LatticeSpec::slab(raw.d, raw.n, &ks)
            }
        }
    }
}

impl From<LatticeSpec> for RawSpec {
    fn from(spec: LatticeSpec) -> Self {
        let k = match spec.kind {
            LatticeKind::Uniform => None,
            LatticeKind::Thick => Some(KField::Scalar(spec.thick_sides[0])),
            LatticeKind::Slab => Some(KField::PerAxis(spec.thick_sides.clone())),
        };
        RawSpec {
            kind: spec.kind,
            d: spec.d,
            ell: spec.thick_sides.len(),
            n: spec.n,
            k,
            r: spec.r,
        }
    }
}

impl LatticeSpec {
    pub fn uniform(d: usize, n: u32, r: u32) -> Result<Self> {
        Self::build(LatticeKind::Uniform, d, n, Vec::new(), r)
    }

    pub fn thick(d: usize, ell: usize, n: u32, k: u32, r: u32) -> Result<Self> {
        if ell == 0 {
            return Err(Error::domain("thick lattice requires ell >= 1"));
        }
        Self::build(LatticeKind::Thick, d, n, vec![k; ell], r)
    }

    /// Slab rule: base threshold 1, one thick axis per entry of `ks`.
    pub fn slab(d: usize, n: u32, ks: &[u32]) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::domain("slab lattice requires at least one thick axis"));
        }
        Self::build(LatticeKind::Slab, d, n, ks.to_vec(), 1)
    }

    fn build(kind: LatticeKind, d: usize, n: u32, thick_sides: Vec<u32>, r: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("lattice requires at least one long axis"));
        }
        if n == 0 || thick_sides.contains(&0) {
            return Err(Error::domain("axis sides must be >= 1"));
        }
        if r == 0 {
            return Err(Error::domain("threshold must be >= 1"));
        }
        let mut cells: u64 = 1;
        for &side in std::iter::repeat_n(&n, d).chain(thick_sides.iter()) {
            cells = cells.saturating_mul(side as u64);
            if cells > MAX_CELLS {
                return Err(Error::domain(format!("lattice exceeds {MAX_CELLS} cells")));
            }
        }
        let mut spec = LatticeSpec {
            kind,
            d,
            n,
            thick_sides,
            r,
            strides: Vec::new(),
            cells,
        };
        let sides = spec.sides();
        let mut strides = vec![1u64; sides.len()];
        for a in (0..sides.len() - 1).rev() {
            strides[a] = strides[a + 1] * sides[a + 1] as u64;
        }
        spec.strides = strides;
        Ok(spec)
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Number of long axes.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of thick axes.
    pub fn ell(&self) -> usize {
        self.thick_sides.len()
    }

    /// Total number of axes, `d + ell`.
    pub fn axes(&self) -> usize {
        self.d + self.thick_sides.len()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn thick_sides(&self) -> &[u32] {
        &self.thick_sides
    }

    /// Base threshold before thick-interior increments.
    pub fn base_threshold(&self) -> u32 {
        self.r
    }

    pub fn cell_count(&self) -> usize {
        self.cells as usize
    }

    /// Side of the given axis (long axes first, then thick).
    pub fn side(&self, axis: usize) -> u32 {
        if axis < self.d {
            self.n
        } else {
            self.thick_sides[axis - self.d]
        }
    }

    pub fn sides(&self) -> Vec<u32> {
        let mut s = vec![self.n; self.d];
        s.extend_from_slice(&self.thick_sides);
        s
    }

    pub fn contains(&self, cell: &[u32]) -> bool {
        cell.len() == self.axes()
            && cell
                .iter()
                .enumerate()
                .all(|(a, &c)| c >= 1 && c <= self.side(a))
    }

    fn check(&self, cell: &[u32]) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::OutOfBounds(cell.to_vec()))
        }
    }

    /// Infected-neighbour count required for `cell` to become infected:
    /// the base threshold plus one per thick coordinate strictly between the
    /// ends of its axis.
    pub fn threshold(&self, cell: &[u32]) -> Result<u32> {
        self.check(cell)?;
        let interior = (self.d..self.axes())
            .filter(|&a| {
                let c = cell[a];
                c != 1 && c != self.side(a)
            })
            .count();
        Ok(self.r + interior as u32)
    }

    /// Axis-adjacent cells inside the lattice, in (axis, -1/+1) order.
    pub fn neighbours(&self, cell: &[u32]) -> Result<Vec<Cell>> {
        self.check(cell)?;
        let mut out = Vec::with_capacity(2 * self.axes());
        for a in 0..self.axes() {
            if cell[a] > 1 {
                let mut c = cell.to_vec();
                c[a] -= 1;
                out.push(c);
            }
            if cell[a] < self.side(a) {
                let mut c = cell.to_vec();
                c[a] += 1;
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Row-major linear index (long axes first, last axis fastest).
    pub fn index_of(&self, cell: &[u32]) -> Result<usize> {
        self.check(cell)?;
        Ok(cell
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c as u64 - 1) * s)
            .sum::<u64>() as usize)
    }

    pub fn cell_of(&self, mut index: usize) -> Cell {
        assert!(index < self.cell_count(), "index {index} out of range");
        let mut cell = vec![0u32; self.axes()];
        for (c, &stride) in cell.iter_mut().zip(&self.strides) {
            let s = stride as usize;
            *c = (index / s) as u32 + 1;
            index %= s;
        }
        cell
    }

    /// Neighbour indices without materializing coordinate vectors.
    pub(crate) fn neighbour_indices(&self, index: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut rest = index;
        for a in 0..self.axes() {
            let s = self.strides[a] as usize;
            let c = rest / s; // 0-based coordinate
            rest %= s;
            if c > 0 {
                out.push(index - s);
            }
            if c + 1 < self.side(a) as usize {
                out.push(index + s);
            }
        }
    }

    /// Linear-index stride of an axis (product of later axes' sides).
    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.strides[axis] as usize
    }

    pub(crate) fn threshold_by_index(&self, index: usize) -> u32 {
        let mut rest = index;
        let mut t = self.r;
        for a in 0..self.axes() {
            let s = self.strides[a] as usize;
            let c = rest / s;
            rest %= s;
            if a >= self.d && c != 0 && c + 1 != self.side(a) as usize {
                t += 1;
            }
        }
        t
    }
}

/// Axis-aligned box over the long axes, inclusive 1-based bounds; thick axes
/// are always spanned in full.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl Rect {
    pub fn new(spec: &LatticeSpec, lo: Vec<u32>, hi: Vec<u32>) -> Result<Self> {
        if lo.len() != spec.d() || hi.len() != spec.d() {
            return Err(Error::domain(format!(
                "rect must have {} long-axis bounds",
                spec.d()
            )));
        }
        for a in 0..lo.len() {
            if lo[a] < 1 || hi[a] > spec.n() || lo[a] > hi[a] {
                return Err(Error::domain(format!(
                    "rect bounds {},{} invalid on axis {} (side {})",
                    lo[a],
                    hi[a],
                    a + 1,
                    spec.n()
                )));
            }
        }
        Ok(Rect { lo, hi })
    }

    pub fn full(spec: &LatticeSpec) -> Self {
        Rect {
            lo: vec![1; spec.d()],
            hi: vec![spec.n(); spec.d()],
        }
    }

    pub fn lo(&self) -> &[u32] {
        &self.lo
    }

    pub fn hi(&self) -> &[u32] {
        &self.hi
    }

    /// Side lengths per long axis.
    pub fn dims(&self) -> Vec<u32> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| h - l + 1)
            .collect()
    }

    /// Longest side.
    pub fn long(&self) -> u32 {
        self.dims().into_iter().max().unwrap()
    }

    /// Shortest side.
    pub fn short(&self) -> u32 {
        self.dims().into_iter().min().unwrap()
    }

    /// Semi-perimeter size measure: the sum of the side lengths.
    pub fn phi(&self) -> u64 {
        self.dims().into_iter().map(u64::from).sum()
    }

    /// Does the cell's long-axis projection fall inside?
    pub fn contains_cell(&self, cell: &[u32]) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(cell)
            .all(|((&l, &h), &c)| c >= l && c <= h)
    }

    /// Number of lattice cells covered (thick axes included in full).
    pub fn cell_count(&self, spec: &LatticeSpec) -> u64 {
        let long: u64 = self.dims().into_iter().map(u64::from).product();
        let thick: u64 = spec.thick_sides().iter().map(|&k| k as u64).product();
        long * thick
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_follow_thick_interiors() {
        let spec = LatticeSpec::thick(2, 1, 3, 3, 2).unwrap();
        assert_eq!(spec.threshold(&[3, 3, 1]).unwrap(), 2);
        assert_eq!(spec.threshold(&[3, 3, 3]).unwrap(), 2);
        assert_eq!(spec.threshold(&[3, 3, 2]).unwrap(), 3);

        let uni = LatticeSpec::uniform(3, 4, 3).unwrap();
        assert_eq!(uni.threshold(&[2, 2, 2]).unwrap(), 3);
        assert_eq!(uni.threshold(&[1, 1, 1]).unwrap(), 3);
    }

    #[test]
    fn slab_threshold_uses_per_axis_sides() {
        let spec = LatticeSpec::slab(1, 5, &[4, 2]).unwrap();
        // corner in both thick axes
        assert_eq!(spec.threshold(&[3, 1, 2]).unwrap(), 1);
        // interior in the first thick axis only; side 2 has no interior
        assert_eq!(spec.threshold(&[3, 2, 1]).unwrap(), 2);
        assert_eq!(spec.threshold(&[3, 3, 2]).unwrap(), 2);
    }

    #[test]
    fn degenerate_thick_axis_never_bumps() {
        let spec = LatticeSpec::slab(2, 3, &[1]).unwrap();
        for idx in 0..spec.cell_count() {
            assert_eq!(spec.threshold_by_index(idx), 1);
        }
    }

    #[test]
    fn corner_and_interior_neighbour_counts() {
        let spec = LatticeSpec::uniform(2, 3, 2).unwrap();
        assert_eq!(spec.neighbours(&[1, 1]).unwrap().len(), 2);
        assert_eq!(spec.neighbours(&[2, 2]).unwrap().len(), 4);
        assert_eq!(spec.neighbours(&[2, 1]).unwrap().len(), 3);
        assert!(spec.neighbours(&[0, 1]).is_err());
        assert!(spec.neighbours(&[4, 1]).is_err());
    }

    #[test]
    fn indexing_round_trips_and_orders_last_axis_fastest() {
        let spec = LatticeSpec::thick(2, 1, 3, 2, 2).unwrap();
        assert_eq!(spec.cell_count(), 18);
        for idx in 0..spec.cell_count() {
            let cell = spec.cell_of(idx);
            assert_eq!(spec.index_of(&cell).unwrap(), idx);
        }
        assert_eq!(spec.index_of(&[1, 1, 1]).unwrap(), 0);
        assert_eq!(spec.index_of(&[1, 1, 2]).unwrap(), 1);
        assert_eq!(spec.index_of(&[1, 2, 1]).unwrap(), 2);
        assert_eq!(spec.index_of(&[2, 1, 1]).unwrap(), 6);
    }

    #[test]
    fn neighbour_indices_match_coordinate_neighbours() {
        let spec = LatticeSpec::slab(2, 4, &[3]).unwrap();
        let mut buf = Vec::new();
        for idx in 0..spec.cell_count() {
            let cell = spec.cell_of(idx);
            let mut want: Vec<usize> = spec
                .neighbours(&cell)
                .unwrap()
                .iter()
                .map(|c| spec.index_of(c).unwrap())
                .collect();
            want.sort_unstable();
            spec.neighbour_indices(idx, &mut buf);
            let mut got = buf.clone();
            got.sort_unstable();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn json_round_trip_all_kinds() {
        for spec in [
            LatticeSpec::uniform(2, 32, 2).unwrap(),
            LatticeSpec::thick(2, 2, 8, 3, 2).unwrap(),
            LatticeSpec::slab(1, 9, &[4, 3]).unwrap(),
        ] {
            let js = serde_json::to_string(&spec).unwrap();
            let back: LatticeSpec = serde_json::from_str(&js).unwrap();
            assert_eq!(back, spec);
        }
        let spec: LatticeSpec =
            serde_json::from_str(r#"{"kind":"uniform","d":2,"ell":0,"n":4,"r":2}"#).unwrap();
        assert_eq!(spec.cell_count(), 16);
        let spec: LatticeSpec =
            serde_json::from_str(r#"{"kind":"slab","d":1,"ell":2,"n":5,"k":[4,2],"r":1}"#).unwrap();
        assert_eq!(spec.thick_sides(), &[4, 2]);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(LatticeSpec::uniform(0, 3, 2).is_err());
        assert!(LatticeSpec::uniform(2, 0, 2).is_err());
        assert!(LatticeSpec::uniform(2, 3, 0).is_err());
        assert!(LatticeSpec::uniform(2, 1 << 16, 2).is_err()); // 2^32 cells
        assert!(serde_json::from_str::<LatticeSpec>(
            r#"{"kind":"slab","d":1,"ell":2,"n":5,"k":[4,2],"r":2}"#
        )
        .is_err());
        assert!(serde_json::from_str::<LatticeSpec>(
            r#"{"kind":"thick","d":2,"ell":1,"n":5,"k":[4],"r":2}"#
        )
        .is_err());
    }

    #[test]
    fn rect_measures() {
        let spec = LatticeSpec::uniform(2, 8, 2).unwrap();
        let r = Rect::new(&spec, vec![2, 3], vec![5, 4]).unwrap();
        assert_eq!(r.dims(), vec![4, 2]);
        assert_eq!(r.long(), 4);
        assert_eq!(r.short(), 2);
        assert_eq!(r.phi(), 6);
        assert!(r.contains_cell(&[2, 4]));
        assert!(!r.contains_cell(&[1, 4]));
        assert!(Rect::new(&spec, vec![3, 3], vec![2, 4]).is_err());
        assert!(Rect::new(&spec, vec![0, 3], vec![2, 4]).is_err());
        assert!(Rect::new(&spec, vec![1, 3], vec![9, 4]).is_err());
    }
}
