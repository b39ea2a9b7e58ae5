//! The variational cost functional over coordinatewise increasing paths:
//! along an axis-parallel step the other coordinates are frozen, so the
//! step's cost is exactly its length times the rate at the frozen product.
//! Minimisation restricts to staircase paths on a product grid, which is a
//! monotone DAG shortest-path problem.

use crate::error::{Error, Result};

/// An axis-parallel increasing path: a strictly positive start point and a
/// sequence of (axis, positive length) steps.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPoly {
    start: Vec<f64>,
    steps: Vec<(usize, f64)>,
}

impl PathPoly {
    pub fn new(start: Vec<f64>, steps: Vec<(usize, f64)>) -> Result<Self> {
        if start.is_empty() {
            return Err(Error::EmptyInput("path start point"));
        }
        if start.iter().any(|&x| x.is_nan() || x <= 0.0 || !x.is_finite()) {
            return Err(Error::domain("start coordinates must be positive and finite"));
        }
        for &(axis, len) in &steps {
            if axis >= start.len() {
                return Err(Error::domain(format!(
                    "step axis {axis} out of range for {} coordinates",
                    start.len()
                )));
            }
            if len.is_nan() || len <= 0.0 || !len.is_finite() {
                return Err(Error::domain(format!("step length {len} must be positive")));
            }
        }
        Ok(PathPoly { start, steps })
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn steps(&self) -> &[(usize, f64)] {
        &self.steps
    }

    pub fn end(&self) -> Vec<f64> {
        let mut cur = self.start.clone();
        for &(axis, len) in &self.steps {
            cur[axis] += len;
        }
        cur
    }
}

/// Cost of a concrete path under rate `f`: the sum over steps of
/// `length * f(product of the other coordinates)`.  Exact — the integrand
/// is constant along each step.
pub fn w_path(f: impl Fn(f64) -> f64, path: &PathPoly) -> f64 {
    let mut cur = path.start.clone();
    let mut total = 0.0;
    for &(axis, len) in &path.steps {
        let prod: f64 = cur
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != axis)
            .map(|(_, &x)| x)
            .product();
        total += len * f(prod);
        cur[axis] += len;
    }
    total
}

const MAX_NODES: usize = 1 << 24;

fn axis_nodes(a: f64, b: f64, grid: u32) -> Vec<f64> {
    if a == b {
        return vec![a];
    }
    let m = grid as usize;
    let mut xs = Vec::with_capacity(m + 1);
    if b / a > 10.0 {
        // Wide ranges get geometrically spaced nodes so the cheap far end
        // does not starve the resolution near the start.
        let ratio = (b / a).ln();
        for t in 0..=m {
            xs.push(a * (ratio * t as f64 / m as f64).exp());
        }
    } else {
        for t in 0..=m {
            xs.push(a + (b - a) * t as f64 / m as f64);
        }
    }
    xs[0] = a;
    xs[m] = b;
    xs
}

/// Minimum cost over staircase paths from `a` to `b` whose corners lie on a
/// per-axis grid with `grid` segments.  Requires `0 < a <= b` coordinatewise
/// and `grid >= 2`.  The result is an upper bound on the true infimum that
/// decreases as the grid refines (doubling the grid keeps all old corners).
pub fn w_min(f: impl Fn(f64) -> f64, a: &[f64], b: &[f64], grid: u32) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptyInput("path endpoints"));
    }
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "endpoint dimensions differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if grid < 2 {
        return Err(Error::domain(format!("grid = {grid} must be at least 2")));
    }
    for (&lo, &hi) in a.iter().zip(b) {
        if lo.is_nan() || hi.is_nan() || lo <= 0.0 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain("endpoints must be positive and finite"));
        }
        if lo > hi {
            return Err(Error::domain(format!(
                "start coordinate {lo} exceeds end coordinate {hi}"
            )));
        }
    }

    let nodes: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(&lo, &hi)| axis_nodes(lo, hi, grid))
        .collect();
    let dims: Vec<usize> = nodes.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    if total > MAX_NODES {
        return Err(Error::domain(format!(
            "grid of {total} nodes exceeds the limit of {MAX_NODES}; reduce grid or dimension"
        )));
    }

    // Strides for a row-major linearisation; predecessors always have a
    // smaller linear index, so one ascending sweep settles every node.
    let d = dims.len();
    let mut strides = vec![1usize; d];
    for j in (0..d.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let mut cost = vec![f64::INFINITY; total];
    cost[0] = 0.0;
    let mut idx = vec![0usize; d];
    for lin in 0..total {
        if cost[lin].is_finite() {
            let here = cost[lin];
            for j in 0..d {
                if idx[j] + 1 < dims[j] {
                    let prod: f64 = (0..d)
                        .filter(|&i| i != j)
                        .map(|i| nodes[i][idx[i]])
                        .product();
                    let seg = nodes[j][idx[j] + 1] - nodes[j][idx[j]];
                    let next = lin + strides[j];
                    let cand = here + seg * f(prod);
                    if cand < cost[next] {
                        cost[next] = cand;
                    }
                }
            }
        }
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok(cost[total - 1])
}

/// `w_min` at grid `2 * grid` together with the discretisation slack
/// `|w(grid) - w(2 grid)|`, the honest uncertainty of the staircase value.
pub fn w_min_refined(f: impl Fn(f64) -> f64, a: &[f64], b: &[f64], grid: u32) -> Result<(f64, f64)> {
    let coarse = w_min(&f, a, b, grid)?;
    let fine = w_min(&f, a, b, grid * 2)?;
    Ok((fine, (coarse - fine).abs()))
}
