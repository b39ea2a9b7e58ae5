//! The sharp-threshold constant `lambda(d, r)` as an improper integral of
//! the cost rate, plus the limiting constant for neighbourhood thresholds
//! growing with the dimension.

use crate::error::{Error, Result};
use crate::special::growth::g_raw;
use crate::special::quad::{integrate, QuadResult};

/// `lambda(d, r) = \int_0^infty g(r-1, z^{d-r+1}) dz` for `2 <= r <= d`.
///
/// The integrand has a logarithmic singularity at the origin and decays
/// exponentially, so the computation splits at 1: the unit interval is
/// handled in log coordinates and the far side is truncated at a point
/// where the analytic tail bound `g(k, y) <= 2 e^{-k y}` absorbs the rest.
/// Both truncation bounds are folded into the reported error estimate.
pub fn lambda(d: u32, r: u32, tol: f64) -> Result<QuadResult> {
    if r < 2 || d < r {
        return Err(Error::domain(format!(
            "lambda(d, r) needs 2 <= r <= d, got d = {d}, r = {r}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let k = r - 1;
    let a = f64::from(d - r + 1);
    let share = tol / 4.0;

    // Near 0: g(k, z^a) <= (a/2)(-ln z) + 1/2, so the integral over (0, z0]
    // is at most z0 ((a/2)(1 - ln z0) + 1/2).  Walk t0 = ln z0 down until
    // that bound fits in the error share.
    let mut t0 = -20.0;
    let tail_low = |t: f64| t.exp() * (0.5 * a * (1.0 - t) + 0.5);
    while tail_low(t0) > share && t0 > -500.0 / a {
        t0 -= 5.0;
    }
    let (low, e_low) = integrate(
        |t| g_raw(k, (a * t).exp()) * t.exp(),
        t0,
        0.0,
        share,
    )?;

    // Far side: for z >= z1 >= 3 the tail is below 2 e^{-k z1^a} / k.
    let mut z1 = 3.0f64;
    let tail_high = |z: f64| 2.0 * (-f64::from(k) * z.powf(a)).exp() / f64::from(k);
    while tail_high(z1) > share {
        z1 += 1.0;
    }
    let (high, e_high) = integrate(|z| g_raw(k, z.powf(a)), 1.0, z1, share)?;

    Ok(QuadResult {
        value: low + high,
        abs_error_estimate: e_low + e_high + tail_low(t0) + tail_high(z1),
        truncation_point: z1,
    })
}

/// All `lambda(d, r)` with `2 <= r <= d <= d_max`, in increasing `(r, d)`
/// order.
pub fn lambda_table(d_max: u32, tol: f64) -> Result<Vec<(u32, u32, QuadResult)>> {
    if d_max < 2 {
        return Err(Error::domain(format!("d_max = {d_max} must be at least 2")));
    }
    let mut out = Vec::new();
    for r in 2..=d_max {
        for d in r..=d_max {
            out.push((d, r, lambda(d, r, tol)?));
        }
    }
    Ok(out)
}

/// The alternating series `sum_k (-1)^k x^k / (2^{k^2 - k} k!)` whose first
/// positive root is the limiting threshold constant as `r, d -> infinity`
/// with `d - r` fixed.
pub fn highdim_series(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = 1u32;
    loop {
        // ratio of consecutive terms: -x / (k 4^{k-1})
        term *= -x / (f64::from(k) * 4f64.powi(k as i32 - 1));
        sum += term;
        if term.abs() < 1e-18 || k > 60 {
            return sum;
        }
        k += 1;
    }
}

/// Smallest positive root of the high-dimensional threshold series,
/// bracketed by an upward scan and then bisected to width below `tol`.
pub fn lambda_highdim(tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let step = 0.05;
    let mut lo = 0.0;
    let mut f_lo = highdim_series(lo);
    let mut hi = lo;
    let mut bracketed = false;
    while hi < 40.0 {
        hi += step;
        let f_hi = highdim_series(hi);
        if f_lo > 0.0 && f_hi <= 0.0 {
            bracketed = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    if !bracketed {
        return Err(Error::Convergence {
            context: "no sign change found for the high-dimensional series".into(),
            partial: f64::NAN,
            achieved: f64::INFINITY,
        });
    }
    for _ in 0..500 {
        if hi - lo <= 0.25 * tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if highdim_series(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_value_is_pi_squared_over_18() {
        let res = lambda(2, 2, 1e-9).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 18.0;
        assert!((res.value - exact).abs() <= 1e-6, "got {}", res.value);
        assert!(res.abs_error_estimate <= 1e-9);
        assert!(res.truncation_point >= 3.0);
    }

    #[test]
    fn spot_values_match_reference_table() {
        // Four-decimal reference values; the rest of the table is exercised
        // by the acceptance suite.
        for (d, r, want) in [(3, 2, 0.9924), (4, 3, 0.8810), (7, 7, 0.1979)] {
            let got = lambda(d, r, 1e-9).unwrap().value;
            assert!((got - want).abs() <= 5e-5, "lambda({d},{r}) = {got}");
        }
    }

    #[test]
    fn table_enumerates_the_triangle() {
        let table = lambda_table(4, 1e-7).unwrap();
        let keys: Vec<(u32, u32)> = table.iter().map(|&(d, r, _)| (d, r)).collect();
        assert_eq!(keys, vec![(2, 2), (3, 2), (4, 2), (3, 3), (4, 3), (4, 4)]);
        for (_, _, res) in &table {
            assert!(res.abs_error_estimate <= 1e-7);
        }
    }

    #[test]
    fn series_and_root() {
        assert_eq!(highdim_series(0.0), 1.0);
        assert!(highdim_series(1.0) > 0.0);
        assert!(highdim_series(1.2) < 0.0);
        let root = lambda_highdim(1e-10).unwrap();
        assert!((1.165..=1.167).contains(&root), "root {root}");
        assert!(highdim_series(root).abs() <= 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(lambda(1, 1, 1e-8).is_err());
        assert!(lambda(2, 3, 1e-8).is_err());
        assert!(lambda(3, 1, 1e-8).is_err());
        assert!(lambda(2, 2, 0.0).is_err());
        assert!(lambda_table(1, 1e-8).is_err());
        assert!(lambda_highdim(-1.0).is_err());
    }
}
