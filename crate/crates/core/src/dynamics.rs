//! Closure dynamics: the monotone infection process, percolation and span
//! queries, crossing events with half-space boundary credit, and the
//! reduced-threshold block coupling.
//!
//! The engine is frontier-based: it keeps a per-cell counter of infected
//! neighbours and a queue of cells that just reached their threshold, so a
//! closure costs O(cells + edges) rather than O(rounds · cells · degree).
//! Rounds are synchronous: `history_sizes[t]` is |A_t| of the textbook
//! iteration A_{t+1} = A_t ∪ {v : |N(v) ∩ A_t| ≥ threshold(v)}.

use serde::{Deserialize, Serialize};

use crate::cellset::CellSet;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Rect};

/// Growth assistance at the boundary of the region under study. Half-space
/// modes model an infected half-space beyond one face of the region along a
/// long axis (used by crossing events): every face cell receives +1 initial
/// neighbour credit instead of materializing exterior cells. `AllOutside`
/// treats every lattice cell outside the region as infected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    None,
    /// Infected half-space below the region's low face of the given long
    /// axis (0-based).
    HalfSpaceLow(usize),
    /// Infected half-space beyond the region's high face.
    HalfSpaceHigh(usize),
    AllOutside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub closure: CellSet,
    /// Number of synchronous rounds that added at least one cell.
    pub generations: usize,
    /// |A_t| for t = 0..=generations; strictly increasing.
    pub history_sizes: Vec<usize>,
}

/// Bounding rectangles of the closure's connected components, ordered by the
/// components' smallest cell index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanDecomposition {
    pub rects: Vec<Rect>,
}

/// Inclusive per-axis bounds over all `d + ell` axes; the working region of
/// one engine run. Public `Rect` regions always span thick axes in full,
/// internal callers (Γ-sets) may restrict them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Window {
    pub lo: Vec<u32>,
    pub hi: Vec<u32>,
    full: bool,
}

impl Window {
    pub fn full(spec: &LatticeSpec) -> Self {
        Window {
            lo: vec![1; spec.axes()],
            hi: spec.sides(),
            full: true,
        }
    }

    pub fn from_rect(spec: &LatticeSpec, rect: &Rect) -> Self {
        let mut w = Window::full(spec);
        w.lo[..spec.d()].copy_from_slice(rect.lo());
        w.hi[..spec.d()].copy_from_slice(rect.hi());
        w.full = w.lo.iter().all(|&l| l == 1)
            && w.hi
                .iter()
                .enumerate()
                .all(|(a, &h)| h == spec.side(a));
        w
    }

    pub(crate) fn from_bounds(spec: &LatticeSpec, lo: Vec<u32>, hi: Vec<u32>) -> Self {
        let full = lo.iter().all(|&l| l == 1)
            && hi.iter().enumerate().all(|(a, &h)| h == spec.side(a));
        debug_assert_eq!(lo.len(), spec.axes());
        Window { lo, hi, full }
    }

    #[inline]
    pub fn contains_index(&self, spec: &LatticeSpec, mut index: usize) -> bool {
        if self.full {
            return true;
        }
        for a in 0..spec.axes() {
            let s = spec.stride(a);
            let c = (index / s) as u32 + 1;
            index %= s;
            if c < self.lo[a] || c > self.hi[a] {
                return false;
            }
        }
        true
    }

    /// Visit every cell index inside the window, ascending.
    pub fn for_each_index(&self, spec: &LatticeSpec, mut f: impl FnMut(usize, &[u32])) {
        let axes = spec.axes();
        let mut cur = self.lo.clone();
        loop {
            let idx = index_unchecked(spec, &cur);
            f(idx, &cur);
            // odometer increment, last axis fastest
            let mut a = axes;
            loop {
                if a == 0 {
                    return;
                }
                a -= 1;
                if cur[a] < self.hi[a] {
                    cur[a] += 1;
                    break;
                }
                cur[a] = self.lo[a];
            }
        }
    }
}

#[inline]
fn index_unchecked(spec: &LatticeSpec, cell: &[u32]) -> usize {
    spec.index_of(cell).expect("window cell in bounds")
}

/// Initial neighbour credit for `cell` under `bc` relative to `window`.
fn boundary_credit(spec: &LatticeSpec, window: &Window, bc: BoundaryCondition, cell: &[u32]) -> u8 {
    match bc {
        BoundaryCondition::None => 0,
        BoundaryCondition::HalfSpaceLow(j) => u8::from(cell[j] == window.lo[j]),
        BoundaryCondition::HalfSpaceHigh(j) => u8::from(cell[j] == window.hi[j]),
        BoundaryCondition::AllOutside => {
            let mut credit = 0u8;
            for (a, &c) in cell.iter().enumerate() {
                if c == window.lo[a] && window.lo[a] > 1 {
                    credit += 1;
                }
                if c == window.hi[a] && window.hi[a] < spec.side(a) {
                    credit += 1;
                }
            }
            credit
        }
    }
}

/// Core engine. `threshold_of` maps a cell index to its infection threshold;
/// the public operations pass the spec's own rule, the block coupling passes
/// a reduced one.
pub(crate) fn run_closure(
    spec: &LatticeSpec,
    seeds: &CellSet,
    bc: BoundaryCondition,
    window: &Window,
    threshold_of: impl Fn(usize) -> u32,
) -> ClosureResult {
    let n = spec.cell_count();
    let mut infected = CellSet::empty(n);
    let mut frontier: Vec<usize> = Vec::new();
    for idx in seeds.iter() {
        if window.contains_index(spec, idx) {
            infected.insert(idx);
            frontier.push(idx);
        }
    }

    let mut counts = vec![0u8; n];
    let mut history = vec![infected.len()];
    let mut nbuf: Vec<usize> = Vec::with_capacity(2 * spec.axes());
    let mut pending: Vec<usize> = Vec::new();

    if bc != BoundaryCondition::None {
        // Seed the counters with boundary credit, spread the initial
        // frontier, then sweep once: a cell whose credit alone meets its
        // threshold infects in round one like any other.
        window.for_each_index(spec, |idx, cell| {
            counts[idx] = boundary_credit(spec, window, bc, cell);
        });
        for &v in &frontier {
            spec.neighbour_indices(v, &mut nbuf);
            for &u in &nbuf {
                if !infected.contains(u) && window.contains_index(spec, u) {
                    counts[u] = counts[u].saturating_add(1);
                }
            }
        }
        window.for_each_index(spec, |idx, _| {
            if !infected.contains(idx) && counts[idx] as u32 >= threshold_of(idx) {
                pending.push(idx);
            }
        });
    } else {
        for &v in &frontier {
            spec.neighbour_indices(v, &mut nbuf);
            for &u in &nbuf {
                if !infected.contains(u) && window.contains_index(spec, u) {
                    counts[u] += 1;
                    if counts[u] as u32 == threshold_of(u) {
                        pending.push(u);
                    }
                }
            }
        }
        // counters only grow, so each cell crosses its threshold once and
        // enters `pending` at most once
    }

    let mut generations = 0;
    while !pending.is_empty() {
        frontier.clear();
        for &v in &pending {
            if infected.insert(v) {
                frontier.push(v);
            }
        }
        pending.clear();
        generations += 1;
        history.push(infected.len());
        for &v in &frontier {
            spec.neighbour_indices(v, &mut nbuf);
            for &u in &nbuf {
                if !infected.contains(u) && window.contains_index(spec, u) {
                    counts[u] += 1;
                    if counts[u] as u32 == threshold_of(u) {
                        pending.push(u);
                    }
                }
            }
        }
    }

    ClosureResult {
        closure: infected,
        generations,
        history_sizes: history,
    }
}

fn check_bc(spec: &LatticeSpec, bc: BoundaryCondition) -> Result<()> {
    match bc {
        BoundaryCondition::HalfSpaceLow(j) | BoundaryCondition::HalfSpaceHigh(j)
            if j >= spec.d() =>
        {
            Err(Error::domain(format!(
                "boundary axis {} out of range (d = {})",
                j + 1,
                spec.d()
            )))
        }
        _ => Ok(()),
    }
}

fn check_set(spec: &LatticeSpec, s: &CellSet, what: &str) -> Result<()> {
    if s.capacity() != spec.cell_count() {
        return Err(Error::domain(format!(
            "{what} indexes a lattice of {} cells, spec has {}",
            s.capacity(),
            spec.cell_count()
        )));
    }
    Ok(())
}

/// Closure of `a` over the whole lattice.
pub fn closure(spec: &LatticeSpec, a: &CellSet, bc: BoundaryCondition) -> Result<ClosureResult> {
    check_bc(spec, bc)?;
    check_set(spec, a, "initial set")?;
    let window = Window::full(spec);
    Ok(run_closure(spec, a, bc, &window, |idx| {
        spec.threshold_by_index(idx)
    }))
}

/// Closure of `a ∩ rect` with the process confined to `rect`.
pub fn closure_in(
    spec: &LatticeSpec,
    a: &CellSet,
    bc: BoundaryCondition,
    rect: &Rect,
) -> Result<ClosureResult> {
    check_bc(spec, bc)?;
    check_set(spec, a, "initial set")?;
    let window = Window::from_rect(spec, rect);
    Ok(run_closure(spec, a, bc, &window, |idx| {
        spec.threshold_by_index(idx)
    }))
}

pub fn percolates(spec: &LatticeSpec, a: &CellSet) -> Result<bool> {
    let res = closure(spec, a, BoundaryCondition::None)?;
    Ok(res.closure.len() == spec.cell_count())
}

/// Maximal connected subsets of `s` under lattice adjacency, ordered by their
/// smallest cell index.
pub fn components(spec: &LatticeSpec, s: &CellSet) -> Result<Vec<CellSet>> {
    check_set(spec, s, "set")?;
    let n = spec.cell_count();
    let mut seen = CellSet::empty(n);
    let mut out = Vec::new();
    let mut nbuf = Vec::with_capacity(2 * spec.axes());
    for start in s.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = CellSet::empty(n);
        let mut stack = vec![start];
        seen.insert(start);
        comp.insert(start);
        while let Some(v) = stack.pop() {
            spec.neighbour_indices(v, &mut nbuf);
            for &u in &nbuf {
                if s.contains(u) && seen.insert(u) {
                    comp.insert(u);
                    stack.push(u);
                }
            }
        }
        out.push(comp);
    }
    Ok(out)
}

/// Per-axis min/max (1-based) over all `d + ell` axes.
fn full_bbox(spec: &LatticeSpec, s: &CellSet) -> Option<(Vec<u32>, Vec<u32>)> {
    let mut lo: Option<Vec<u32>> = None;
    let mut hi: Vec<u32> = Vec::new();
    for idx in s.iter() {
        let cell = spec.cell_of(idx);
        match &mut lo {
            None => {
                lo = Some(cell.clone());
                hi = cell;
            }
            Some(lo) => {
                for a in 0..cell.len() {
                    lo[a] = lo[a].min(cell[a]);
                    hi[a] = hi[a].max(cell[a]);
                }
            }
        }
    }
    lo.map(|l| (l, hi))
}

/// Largest `‖x − y‖_∞ + 1` over pairs connected within `s`; 0 when empty.
pub fn diam(spec: &LatticeSpec, s: &CellSet) -> Result<u32> {
    let mut best = 0;
    for comp in components(spec, s)? {
        let (lo, hi) = full_bbox(spec, &comp).expect("component nonempty");
        let extent = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &h)| h - l)
            .max()
            .unwrap_or(0);
        best = best.max(extent + 1);
    }
    Ok(best)
}

/// Smallest rectangle containing `s` (long-axis projection).
pub fn bounding_rect(spec: &LatticeSpec, s: &CellSet) -> Result<Rect> {
    check_set(spec, s, "set")?;
    let (lo, hi) = full_bbox(spec, s).ok_or(Error::EmptyInput("bounding_rect input"))?;
    Rect::new(spec, lo[..spec.d()].to_vec(), hi[..spec.d()].to_vec())
}

/// Bounding rectangles of the closure components of `a`.
pub fn span(spec: &LatticeSpec, a: &CellSet) -> Result<SpanDecomposition> {
    let closed = closure(spec, a, BoundaryCondition::None)?.closure;
    let rects = components(spec, &closed)?
        .iter()
        .map(|c| bounding_rect(spec, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpanDecomposition { rects })
}

/// Does `a ∩ rect`, evolving inside `rect` alone, fill a component whose
/// bounding rectangle is `rect` itself?
pub fn internally_spanned(spec: &LatticeSpec, rect: &Rect, a: &CellSet) -> Result<bool> {
    let closed = closure_in(spec, a, BoundaryCondition::None, rect)?.closure;
    for comp in components(spec, &closed)? {
        if &bounding_rect(spec, &comp)? == rect {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Crossing event along `axis`: close `(a ∩ rect) ∪ forced` inside `rect`
/// with an infected half-space below the low face, and ask whether a single
/// component touches both faces of `axis`. The connecting path stays inside
/// `rect`; half-space cells only contribute neighbour credit.
pub fn crossed(
    spec: &LatticeSpec,
    rect: &Rect,
    a: &CellSet,
    axis: usize,
    forced: &CellSet,
) -> Result<bool> {
    check_set(spec, a, "initial set")?;
    check_set(spec, forced, "forced set")?;
    if axis >= spec.d() {
        return Err(Error::domain(format!(
            "crossing axis {} out of range (d = {})",
            axis + 1,
            spec.d()
        )));
    }
    for idx in forced.iter() {
        let cell = spec.cell_of(idx);
        if !rect.contains_cell(&cell) {
            return Err(Error::domain(format!(
                "forced cell ({}) lies outside the rect",
                cell.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )));
        }
    }
    let mut seeds = a.clone();
    seeds.union_with(forced);
    let closed = closure_in(spec, &seeds, BoundaryCondition::HalfSpaceLow(axis), rect)?.closure;
    let (lo_face, hi_face) = (rect.lo()[axis], rect.hi()[axis]);
    for comp in components(spec, &closed)? {
        let mut touch_lo = false;
        let mut touch_hi = false;
        for idx in comp.iter() {
            let c = spec.cell_of(idx)[axis];
            touch_lo |= c == lo_face;
            touch_hi |= c == hi_face;
            if touch_lo && touch_hi {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Partition `rect` into blocks of width `block_len` along `axis`, reduce the
/// base threshold by one, and let the block's own slice of `axis` act as a
/// thick axis (its two boundary layers keep the reduced threshold, interior
/// layers pay +1). Each block evolves independently with no boundary credit;
/// the union of the block closures dominates the confined closure that real
/// half-space credit would produce.
///
/// Blocks must be at least 2 wide: the domination argument rests on every
/// cell having at most one neighbour outside its own block along `axis`,
/// and a width-1 block exposes both of its cells' `axis`-neighbours (a cell
/// between two seeded width-1 blocks can be infected in the real dynamics
/// while its own empty block stays empty).
pub fn coupled_block_closure(
    spec: &LatticeSpec,
    rect: &Rect,
    a: &CellSet,
    block_len: u32,
    axis: usize,
) -> Result<CellSet> {
    check_set(spec, a, "initial set")?;
    if axis >= spec.d() {
        return Err(Error::domain(format!(
            "block axis {} out of range (d = {})",
            axis + 1,
            spec.d()
        )));
    }
    if spec.base_threshold() < 2 {
        return Err(Error::domain(
            "block coupling needs base threshold >= 2 to reduce",
        ));
    }
    let width = rect.dims()[axis];
    if block_len < 2 {
        return Err(Error::domain(
            "block length must be at least 2 for the union of block closures \
             to dominate the half-space-credit closure",
        ));
    }
    if !width.is_multiple_of(block_len) {
        return Err(Error::domain(format!(
            "block length {block_len} does not divide rect side {width}"
        )));
    }
    let reduced = spec.base_threshold() - 1;
    let mut union = CellSet::empty(spec.cell_count());
    let stride = spec.stride(axis);
    let side = spec.side(axis) as usize;
    for b in 0..(width / block_len) {
        let lo_j = rect.lo()[axis] + b * block_len;
        let hi_j = lo_j + block_len - 1;
        let mut window = Window::from_rect(spec, rect);
        window.lo[axis] = lo_j;
        window.hi[axis] = hi_j;
        let window = Window::from_bounds(spec, window.lo, window.hi);
        let res = run_closure(spec, a, BoundaryCondition::None, &window, |idx| {
            let c = (idx / stride % side) as u32 + 1;
            let bump = u32::from(c != lo_j && c != hi_j);
            reduced + (spec.threshold_by_index(idx) - spec.base_threshold()) + bump
        });
        union.union_with(&res.closure);
    }
    Ok(union)
}
