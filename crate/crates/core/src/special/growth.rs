//! Growth-rate machinery for the sharp-threshold constant: the root
//! `beta(k, u)` of the two-sided growth recursion, its logarithmic cost rate
//! `g`, and the parameter maps from site density to the rates.

use crate::error::{Error, Result};

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("growth index k must be at least 1"));
    }
    Ok(())
}

/// The larger root of `x^2 = (1 - w) x + u w` with `w = (1-u)^k`: the
/// asymptotic per-step retention rate of a width-k front at density `u`.
///
/// Increasing in `u`, with `beta(k, 0) = 0` and `beta(k, 1) = 1`.
pub fn beta(k: u32, u: f64) -> Result<f64> {
    check_k(k)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("density u = {u} must lie in [0, 1]")));
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    // w = (1-u)^k and s = 1 - w through the log scale, so small u keeps full
    // precision; s and the discriminant are nonnegative, so no cancellation.
    let log_w = f64::from(k) * (-u).ln_1p();
    let w = log_w.exp();
    let s = -log_w.exp_m1();
    Ok(0.5 * (s + (s * s + 4.0 * u * w).sqrt()))
}

/// `g(k, z) = -ln beta(k, 1 - e^{-z})` for `z > 0`: continuous, strictly
/// decreasing and convex, with a logarithmic blow-up at 0 and exponential
/// decay (at most `2 e^{-kz}` for `z >= 3`) at infinity.
pub fn g(k: u32, z: f64) -> Result<f64> {
    check_k(k)?;
    if z.is_nan() || z <= 0.0 {
        return Err(Error::domain(format!("g is defined for z > 0, got {z}")));
    }
    Ok(g_raw(k, z))
}

/// `g` without the argument checks, for use inside integrand closures.
pub(crate) fn g_raw(k: u32, z: f64) -> f64 {
    // Here 1 - u = e^{-z} exactly, so w = e^{-kz} and s = 1 - w are sharp.
    let kz = f64::from(k) * z;
    let u = -(-z).exp_m1();
    let w = (-kz).exp();
    let s = -(-kz).exp_m1();
    let disc = (s * s + 4.0 * u * w).sqrt();
    // 1 - beta = 2w(1-u) / (1 + w + disc); use it directly while beta is
    // close to 1, otherwise take the plain logarithm.
    let eps = 2.0 * w * (1.0 - u) / (1.0 + w + disc);
    if eps < 0.5 {
        -(-eps).ln_1p()
    } else {
        std::f64::consts::LN_2 - (s + disc).ln()
    }
}

/// Converts an inclusion probability `p` in `[0, 1)` to the exponential rate
/// `q = -ln(1 - p)`.
pub fn q_of_p(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("probability p = {p} must lie in [0, 1)")));
    }
    Ok(-(-p).ln_1p())
}

/// Occupation density of a line of rescaled length `x` at rate `q`:
/// `u = 1 - e^{-qx}`.
pub fn u_param(q: f64, x: f64) -> f64 {
    -(-q * x).exp_m1()
}

/// Density seen by axis `j` of a box with rescaled side lengths `dims`:
/// `u` evaluated at the product of the other sides.
pub fn u_scaled(dims: &[f64], p: f64, j: usize) -> Result<f64> {
    if j >= dims.len() {
        return Err(Error::domain(format!(
            "axis {j} out of range for {} dimensions",
            dims.len()
        )));
    }
    if dims.iter().any(|&x| x.is_nan() || x <= 0.0) {
        return Err(Error::domain("all side lengths must be positive"));
    }
    let q = q_of_p(p)?;
    let prod: f64 = dims
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &x)| x)
        .product();
    Ok(u_param(q, prod))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*state >> 11) as f64 / (1u64 << 53) as f64
    }

    #[test]
    fn beta_satisfies_its_quadratic() {
        let b = beta(2, 0.5).unwrap();
        assert!((b * b - (0.75 * b + 0.125)).abs() < 1e-15);
        let mut st = 0x9e3779b97f4a7c15u64;
        for _ in 0..1000 {
            let k = 1 + (lcg(&mut st) * 8.0) as u32;
            let u = lcg(&mut st);
            let w = (1.0 - u).powi(k as i32);
            let b = beta(k, u).unwrap();
            assert!(
                (b * b - ((1.0 - w) * b + u * w)).abs() < 1e-12,
                "k={k} u={u} b={b}"
            );
        }
    }

    #[test]
    fn beta_endpoints_and_bounds() {
        for k in 1..6 {
            assert_eq!(beta(k, 0.0).unwrap(), 0.0);
            assert_eq!(beta(k, 1.0).unwrap(), 1.0);
        }
        let mut st = 7u64;
        for _ in 0..200 {
            let u = lcg(&mut st);
            let b1 = beta(1, u).unwrap();
            assert!(b1 + 1e-15 >= u.sqrt(), "beta_1({u}) = {b1} < sqrt(u)");
            for k in 1..5 {
                let lo = beta(k, u).unwrap();
                let hi = beta(k + 1, u).unwrap();
                assert!(hi + 1e-15 >= lo, "beta not increasing in k at u={u}");
                assert!(lo >= u - 1e-15);
            }
        }
    }

    #[test]
    fn beta_is_increasing_in_u() {
        for k in [1, 2, 5] {
            let mut prev = 0.0;
            for i in 0..=100 {
                let b = beta(k, i as f64 / 100.0).unwrap();
                assert!(b >= prev - 1e-15);
                prev = b;
            }
        }
    }

    #[test]
    fn g_shape() {
        // Decreasing and convex in z, decreasing in k, tiny far out.
        for k in 1..5 {
            let zs: Vec<f64> = (1..60).map(|i| 0.1 * i as f64).collect();
            let vals: Vec<f64> = zs.iter().map(|&z| g(k, z).unwrap()).collect();
            for w in vals.windows(2) {
                assert!(w[1] <= w[0] + 1e-15);
            }
            for w in vals.windows(3) {
                assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-12);
            }
        }
        for z in [0.3, 1.0, 4.0] {
            assert!(g(2, z).unwrap() <= g(1, z).unwrap() + 1e-15);
        }
        assert!(g(1, 50.0).unwrap() < 1e-12);
        assert!(g(1, 800.0).unwrap() >= 0.0);
    }

    #[test]
    fn g_exponential_tail_bound() {
        for k in 1..=5 {
            let mut z = 3.0;
            while z <= 40.0 {
                let bound = 2.0 * (-f64::from(k) * z).exp();
                assert!(g(k, z).unwrap() <= bound, "k={k} z={z}");
                z += 0.7;
            }
        }
    }

    #[test]
    fn density_round_trip_matches_g() {
        // beta(k, 1 - (1-p)^n) must equal e^{-g(k, n q)} with q = -ln(1-p).
        let mut st = 42u64;
        for _ in 0..400 {
            let k = 1 + (lcg(&mut st) * 5.0) as u32;
            let p = 0.001 + 0.6 * lcg(&mut st);
            let n = 1.0 + 300.0 * lcg(&mut st);
            let q = q_of_p(p).unwrap();
            let u = u_param(q, n);
            let direct = beta(k, u).unwrap();
            let via_g = (-g(k, n * q).unwrap()).exp();
            assert!((direct - via_g).abs() < 1e-12, "k={k} p={p} n={n}");
        }
    }

    #[test]
    fn parameter_maps() {
        assert_eq!(q_of_p(0.0).unwrap(), 0.0);
        let q = q_of_p(1.0 - (-1.0f64).exp()).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        assert!(q_of_p(1.0).is_err());
        assert!(q_of_p(-0.1).is_err());
        assert_eq!(u_param(0.5, 0.0), 0.0);

        let dims = [2.0, 3.0, 4.0];
        let u = u_scaled(&dims, 0.1, 0).unwrap();
        assert!((u - u_param(q_of_p(0.1).unwrap(), 12.0)).abs() < 1e-15);
        assert!(u_scaled(&dims, 0.1, 3).is_err());
        assert!(u_scaled(&[1.0, -2.0], 0.1, 0).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(beta(0, 0.5).is_err());
        assert!(beta(2, 1.5).is_err());
        assert!(beta(2, f64::NAN).is_err());
        assert!(g(2, 0.0).is_err());
        assert!(g(2, -1.0).is_err());
    }
}
