//! Seeded Monte Carlo estimators: percolation probability, critical-density
//! bisection, crossing and diameter events, and Γ-set expectations.
//!
//! Randomness is counter-based: `uniform(stream, cell)` hashes the pair, so
//! a trial's sample depends only on `(master_seed, trial_index)` and never
//! on execution order.  Every reduction is over integers, which makes
//! reports bit-identical for any thread count.  The same per-cell uniforms
//! serve every density — a cell is occupied iff its uniform falls below `p`
//! — so coupled trials are monotone in `p` by construction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cellset::CellSet;
use crate::dynamics::{closure, crossed, diam, percolates, BoundaryCondition};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Rect};
use crate::structure::gamma_set;

/// One estimated probability (or mean, for Γ-sizes) with a 95%
/// normal-approximation half-width and the inputs needed to reproduce it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub estimate: f64,
    pub half_width: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub p: f64,
}

/// Result of bisecting for the density where the percolation probability
/// crosses `target`.  The bracket is exact for the coupled empirical
/// process: the per-trial indicator is monotone in `p`, so the crossing
/// really lies inside `[p_lo, p_hi]` for these streams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    pub p_lo: f64,
    pub p_hi: f64,
    pub p_mid: f64,
    pub trials_per_probe: u64,
    pub target: f64,
    pub master_seed: u64,
}

fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Stream identifier for one trial of one campaign.
pub fn stream_seed(master_seed: u64, trial: u64) -> u64 {
    mix64(master_seed ^ mix64(trial.wrapping_add(0x9e3779b97f4a7c15)))
}

fn uniform(stream: u64, cell: u64) -> f64 {
    let bits = mix64(stream ^ mix64(cell.wrapping_mul(0xd1342543de82ef95).wrapping_add(1)));
    (bits >> 11) as f64 / (1u64 << 53) as f64
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("density p = {p} must lie in [0, 1]")));
    }
    Ok(())
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    Ok(())
}

/// Samples an initial set: cell `c` is occupied iff `uniform(stream, c) < p`.
/// Raising `p` with the stream fixed only ever adds cells.
pub fn sample_set(spec: &LatticeSpec, p: f64, stream: u64) -> Result<CellSet> {
    check_p(p)?;
    let count = spec.cell_count();
    Ok(CellSet::from_indices(
        count,
        (0..count).filter(|&i| uniform(stream, i as u64) < p),
    ))
}

fn report(successes: u64, trials: u64, master_seed: u64, p: f64) -> TrialReport {
    let est = successes as f64 / trials as f64;
    TrialReport {
        estimate: est,
        half_width: 1.96 * (est * (1.0 - est) / trials as f64).sqrt(),
        trials,
        master_seed,
        p,
    }
}

fn bernoulli_campaign(
    trials: u64,
    master_seed: u64,
    p: f64,
    event: impl Fn(&CellSet) -> Result<bool> + Sync,
    spec: &LatticeSpec,
) -> Result<TrialReport> {
    check_p(p)?;
    check_trials(trials)?;
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = sample_set(spec, p, stream_seed(master_seed, t))?;
            Ok(u64::from(event(&a)?))
        })
        .try_reduce(|| 0u64, |x, y| Ok(x + y))?;
    Ok(report(successes, trials, master_seed, p))
}

/// Fraction of sampled initial sets whose closure is the whole lattice.
pub fn percolation_prob(
    spec: &LatticeSpec,
    p: f64,
    trials: u64,
    master_seed: u64,
) -> Result<TrialReport> {
    bernoulli_campaign(trials, master_seed, p, |a| percolates(spec, a), spec)
}

/// Bisects for the density whose percolation probability reaches `target`
/// (1/2 for the critical density), reusing the same trial streams at every
/// probe so the empirical curve is genuinely nondecreasing and the bracket
/// never lies.  Stops once `p_hi - p_lo <= tol`.
pub fn pc_estimate(
    spec: &LatticeSpec,
    trials_per_probe: u64,
    tol: f64,
    master_seed: u64,
    target: f64,
) -> Result<PcEstimate> {
    check_trials(trials_per_probe)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    if target.is_nan() || !(0.0 < target && target < 1.0) {
        return Err(Error::domain(format!("target {target} must lie in (0, 1)")));
    }
    let probe = |p: f64| -> Result<f64> {
        Ok(percolation_prob(spec, p, trials_per_probe, master_seed)?.estimate)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    // Full occupation always percolates and p = 0 never does (the empty set
    // is closed), so the initial bracket is valid.
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PcEstimate {
        p_lo: lo,
        p_hi: hi,
        p_mid: 0.5 * (lo + hi),
        trials_per_probe,
        target,
        master_seed,
    })
}

/// Probability that the sampled set, helped by an infected half-space below
/// the low face, crosses `rect` along `axis`.
pub fn crossing_prob(
    spec: &LatticeSpec,
    rect: &Rect,
    p: f64,
    axis: usize,
    trials: u64,
    master_seed: u64,
) -> Result<TrialReport> {
    let no_forced = CellSet::empty(spec.cell_count());
    crossed(spec, rect, &no_forced, axis, &no_forced)?;
    bernoulli_campaign(
        trials,
        master_seed,
        p,
        |a| crossed(spec, rect, a, axis, &no_forced),
        spec,
    )
}

/// Probability that the closure's diameter reaches `threshold_len`.
pub fn diam_event_prob(
    spec: &LatticeSpec,
    p: f64,
    threshold_len: u32,
    trials: u64,
    master_seed: u64,
) -> Result<TrialReport> {
    if threshold_len == 0 {
        return Err(Error::domain("diameter threshold must be at least 1"));
    }
    bernoulli_campaign(
        trials,
        master_seed,
        p,
        |a| {
            let closed = closure(spec, a, BoundaryCondition::None)?.closure;
            Ok(diam(spec, &closed)? >= threshold_len)
        },
        spec,
    )
}

/// Monte Carlo mean of the Γ-set size at `x`: `estimate` is the average
/// number of cells reachable from `x` through internally filled components
/// of diameter at most `m`, and `half_width` is the 95% CI from the sample
/// variance (the size is not a probability).
pub fn gamma_expectation(
    spec: &LatticeSpec,
    p: f64,
    m: u32,
    x: &[u32],
    trials: u64,
    master_seed: u64,
) -> Result<TrialReport> {
    check_p(p)?;
    check_trials(trials)?;
    // Validate (spec, m, x) once up front so per-trial calls cannot fail.
    gamma_set(spec, &CellSet::empty(spec.cell_count()), m, x)?;
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(u64, u128)> {
            let a = sample_set(spec, p, stream_seed(master_seed, t))?;
            let size = gamma_set(spec, &a, m, x)?.len() as u64;
            Ok((size, u128::from(size) * u128::from(size)))
        })
        .try_reduce(|| (0u64, 0u128), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;
    let n = trials as f64;
    let mean = sum as f64 / n;
    let half_width = if trials > 1 {
        let var = (sum_sq as f64 - n * mean * mean) / (n - 1.0);
        1.96 * (var.max(0.0) / n).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(TrialReport {
        estimate: mean,
        half_width,
        trials,
        master_seed,
        p,
    })
}
