//! Scale-pinning constructions: spanned windows at a prescribed scale,
//! small internally filled components, double gaps, and Γ-neighbourhoods.

use crate::cellset::CellSet;
use crate::dynamics::{
    closure, components, diam, internally_spanned, run_closure, span, BoundaryCondition, Window,
};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Rect};

/// Advance `cur` one step in ascending order (last axis fastest) within the
/// per-axis bounds; false once exhausted.
fn odometer_next(cur: &mut [u32], lo: &[u32], hi: &[u32]) -> bool {
    let mut a = cur.len();
    loop {
        if a == 0 {
            return false;
        }
        a -= 1;
        if cur[a] < hi[a] {
            cur[a] += 1;
            return true;
        }
        cur[a] = lo[a];
    }
}

/// Extent-based diameter of a *connected* set: largest per-axis spread plus
/// one; 0 when empty.
fn connected_diam(spec: &LatticeSpec, s: &CellSet) -> u32 {
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
    match lo {
        None => 0,
        Some(lo) => lo.iter().zip(&hi).map(|(&l, &h)| h - l).max().unwrap_or(0) + 1,
    }
}

/// Connected component of `start` inside `s`.
fn component_of(spec: &LatticeSpec, s: &CellSet, start: usize) -> CellSet {
    let mut comp = CellSet::empty(spec.cell_count());
    let mut stack = vec![start];
    comp.insert(start);
    let mut nbuf = Vec::with_capacity(2 * spec.axes());
    while let Some(v) = stack.pop() {
        spec.neighbour_indices(v, &mut nbuf);
        for &u in &nbuf {
            if s.contains(u) && comp.insert(u) {
                stack.push(u);
            }
        }
    }
    comp
}

/// Finds an internally spanned rectangle whose longest side lies in
/// `[L, 2L]`, by exhaustive scan in ascending `(lo, hi)` order.  Exposed for
/// threshold-2 structures, where such a window is guaranteed whenever some
/// component of the closure has a bounding rectangle with longest side at
/// least `L`.  (The closure's thick-axis extent does not count: a pair of
/// seeds stacked along a thick axis has diameter 2 but spans nothing wider
/// than a single column, so a diameter-based precondition would promise
/// windows that cannot exist.)
pub fn al_window(spec: &LatticeSpec, a: &CellSet, l: u32) -> Result<Rect> {
    if spec.base_threshold() != 2 {
        return Err(Error::domain(
            "window extraction at a prescribed scale is exposed for threshold-2 structures only",
        ));
    }
    if l == 0 {
        return Err(Error::domain("target scale L must be at least 1"));
    }
    let reach = span(spec, a)?
        .rects
        .iter()
        .map(Rect::long)
        .max()
        .unwrap_or(0);
    if l > reach {
        return Err(Error::domain(format!(
            "target scale L = {l} exceeds the longest spanned-rectangle side {reach}"
        )));
    }
    let d = spec.d();
    let ones = vec![1u32; d];
    let tops: Vec<u32> = (0..d).map(|axis| spec.side(axis)).collect();
    let mut lo = ones.clone();
    loop {
        let hi_cap: Vec<u32> = (0..d).map(|axis| (lo[axis] + 2 * l - 1).min(tops[axis])).collect();
        let mut hi = lo.clone();
        loop {
            let long = hi.iter().zip(&lo).map(|(&h, &l0)| h - l0 + 1).max().unwrap();
            if long >= l {
                let rect = Rect::new(spec, lo.clone(), hi.clone())?;
                if internally_spanned(spec, &rect, a)? {
                    return Ok(rect);
                }
            }
            if !odometer_next(&mut hi, &lo, &hi_cap) {
                break;
            }
        }
        if !odometer_next(&mut lo, &ones, &tops) {
            break;
        }
    }
    Err(Error::Impossible(format!(
        "no internally spanned rectangle with longest side in [{l}, {}], \
         although the closure reaches that scale",
        2 * l
    )))
}

/// Re-derives `x ⊆ [a ∩ x]` through the engine; failure means the
/// construction is broken, not the input.
fn verify_filled(spec: &LatticeSpec, a: &CellSet, x: &CellSet) -> Result<()> {
    let mut seeds = a.clone();
    seeds.intersect_with(x);
    let grown = closure(spec, &seeds, BoundaryCondition::None)?.closure;
    if !x.is_subset_of(&grown) {
        return Err(Error::Impossible(
            "extracted component is not internally filled".into(),
        ));
    }
    Ok(())
}

/// Grows `a` one cell at a time (always the smallest eligible index) and
/// returns the first connected component whose diameter reaches `L`; the
/// single-cell steps cap that diameter at `2L`.  Seed components already at
/// scale `L` are trimmed to a ball instead of grown.
pub fn small_component(spec: &LatticeSpec, a: &CellSet, l: u32) -> Result<CellSet> {
    if l == 0 {
        return Err(Error::domain("target scale L must be at least 1"));
    }
    let closed = closure(spec, a, BoundaryCondition::None)?.closure;
    let reach = diam(spec, &closed)?;
    if l > reach {
        return Err(Error::domain(format!(
            "target scale L = {l} exceeds the closure diameter {reach}"
        )));
    }
    let n = spec.cell_count();

    let finish = |x: CellSet| -> Result<CellSet> {
        let dx = connected_diam(spec, &x);
        if dx < l || dx > 2 * l {
            return Err(Error::Impossible(format!(
                "extracted component has diameter {dx}, outside [{l}, {}]",
                2 * l
            )));
        }
        verify_filled(spec, a, &x)?;
        Ok(x)
    };

    // Seed components that already reach scale L: take the whole component
    // when it fits, otherwise grow a ball around its first cell one hop at
    // a time (each hop adds at most 2 to the diameter).
    for comp in components(spec, a)? {
        let dc = connected_diam(spec, &comp);
        if dc < l {
            continue;
        }
        if dc <= 2 * l {
            return finish(comp);
        }
        let start = comp.iter().next().expect("component nonempty");
        let mut ball = CellSet::empty(n);
        ball.insert(start);
        let mut frontier = vec![start];
        let mut nbuf = Vec::with_capacity(2 * spec.axes());
        while connected_diam(spec, &ball) < l {
            let mut next = Vec::new();
            for &v in &frontier {
                spec.neighbour_indices(v, &mut nbuf);
                for &u in &nbuf {
                    if comp.contains(u) && ball.insert(u) {
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        return finish(ball);
    }

    // All seed components are below scale; add infections one at a time and
    // watch the merged component around each new cell.
    let mut x = a.clone();
    let mut nbuf = Vec::with_capacity(2 * spec.axes());
    loop {
        let mut chosen = None;
        for idx in 0..n {
            if x.contains(idx) {
                continue;
            }
            spec.neighbour_indices(idx, &mut nbuf);
            let cnt = nbuf.iter().filter(|&&u| x.contains(u)).count() as u32;
            if cnt >= spec.threshold_by_index(idx) {
                chosen = Some(idx);
                break;
            }
        }
        let Some(v) = chosen else {
            return Err(Error::Impossible(
                "growth stalled before any component reached the target scale".into(),
            ));
        };
        x.insert(v);
        let comp = component_of(spec, &x, v);
        if connected_diam(spec, &comp) >= l {
            return finish(comp);
        }
    }
}

/// Two adjacent hyperplanes of `rect` perpendicular to `axis`, both free of
/// seeds.  `axis` may be any of the `d + ell` axes (0-based); thick axes use
/// their full range, long axes the rectangle's.
pub fn has_double_gap(spec: &LatticeSpec, rect: &Rect, a: &CellSet, axis: usize) -> Result<bool> {
    if axis >= spec.axes() {
        return Err(Error::domain(format!(
            "axis {} out of range (structure has {})",
            axis,
            spec.axes()
        )));
    }
    for (ax, (&l0, &h0)) in rect.lo().iter().zip(rect.hi()).enumerate() {
        if l0 < 1 || h0 > spec.side(ax) || l0 > h0 {
            return Err(Error::OutOfBounds(rect.hi().to_vec()));
        }
    }
    let window = Window::from_rect(spec, rect);
    let lo = window.lo[axis];
    let hi = window.hi[axis];
    if hi - lo < 1 {
        return Ok(false);
    }
    let mut occupied = vec![false; (hi - lo + 1) as usize];
    for idx in a.iter() {
        let cell = spec.cell_of(idx);
        if rect.contains_cell(&cell) {
            occupied[(cell[axis] - lo) as usize] = true;
        }
    }
    Ok(occupied.windows(2).any(|w| !w[0] && !w[1]))
}

/// Cells reachable from `x` through some connected, internally filled set of
/// diameter at most `m`.  Enumerates every box around `x` with all sides at
/// most `m` and collects the component of `x` in the closure confined to the
/// box; sound because thresholds of at least 2 keep any candidate set inside
/// its own bounding box.
pub fn gamma_set(spec: &LatticeSpec, a: &CellSet, m: u32, x: &[u32]) -> Result<CellSet> {
    if m == 0 {
        return Err(Error::domain("diameter bound m must be at least 1"));
    }
    if spec.base_threshold() < 2 {
        return Err(Error::domain(
            "Γ-neighbourhoods need every update threshold to be at least 2; \
             a base threshold of 1 lets growth escape any bounding box",
        ));
    }
    let xi = spec.index_of(x)?;
    let axes = spec.axes();
    let n = spec.cell_count();
    let mut out = CellSet::empty(n);

    // Per-axis candidate (lo, hi) ranges containing x with span <= m.
    let ranges: Vec<Vec<(u32, u32)>> = (0..axes)
        .map(|t| {
            let side = spec.side(t);
            let mut v = Vec::new();
            for lo in x[t].saturating_sub(m - 1).max(1)..=x[t] {
                for hi in x[t]..=(lo + m - 1).min(side) {
                    v.push((lo, hi));
                }
            }
            v
        })
        .collect();

    let mut pick = vec![0usize; axes];
    loop {
        let lo: Vec<u32> = (0..axes).map(|t| ranges[t][pick[t]].0).collect();
        let hi: Vec<u32> = (0..axes).map(|t| ranges[t][pick[t]].1).collect();
        let window = Window::from_bounds(spec, lo, hi);
        let closed = run_closure(spec, a, BoundaryCondition::None, &window, |i| {
            spec.threshold_by_index(i)
        })
        .closure;
        if closed.contains(xi) {
            out.union_with(&component_of(spec, &closed, xi));
        }
        // advance the box odometer
        let mut t = axes;
        loop {
            if t == 0 {
                return Ok(out);
            }
            t -= 1;
            pick[t] += 1;
            if pick[t] < ranges[t].len() {
                break;
            }
            pick[t] = 0;
        }
    }
}
