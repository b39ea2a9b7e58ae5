//! Exact probability that an array of independent events leaves no L-gap.
//!
//! Positions `1..=m` carry events `U_1..U_{m+1}` (each occurring with
//! probability `u`) and side events `V_i^(1..ell)` (same probability,
//! all independent).  Position `i` is an *L-gap* when `U_i`, `U_{i+1}` and
//! all of `V_i^(1..ell)` fail.  The no-gap probability factors over a
//! two-state recursion on whether the previous `U` occurred, since only
//! consecutive positions share an event.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

fn validate(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("position count m must be at least 1"));
    }
    Ok(())
}

/// No-gap probability in double precision.
///
/// State after scanning `U_1..U_i` with no gap so far: `occ` accumulates
/// runs ending with `U_i` occurring, `fail` those ending with `U_i` failing
/// (position `i`'s side events not yet examined -- they only matter if
/// `U_{i+1}` also fails).
pub fn lgap_probability_exact(m: u32, ell: u32, u: f64) -> Result<f64> {
    validate(m)?;
    if !(0.0..=1.0).contains(&u) || u.is_nan() {
        return Err(Error::domain(format!("probability u = {u} outside [0,1]")));
    }
    let escape = 1.0 - (1.0 - u).powi(ell as i32);
    let mut occ = u;
    let mut fail = 1.0 - u;
    for _ in 1..=m {
        let next_occ = u * (occ + fail);
        let next_fail = (1.0 - u) * (occ + fail * escape);
        occ = next_occ;
        fail = next_fail;
    }
    Ok(occ + fail)
}

/// Same recursion in exact rational arithmetic.
pub fn lgap_probability_rational(m: u32, ell: u32, u: &BigRational) -> Result<BigRational> {
    validate(m)?;
    let zero = BigRational::from(BigInt::from(0));
    let one = BigRational::one();
    if *u < zero || *u > one {
        return Err(Error::domain(format!("probability u = {u} outside [0,1]")));
    }
    let comp = &one - u;
    let mut comp_pow = BigRational::one();
    for _ in 0..ell {
        comp_pow *= &comp;
    }
    let escape = &one - &comp_pow;
    let mut occ = u.clone();
    let mut fail = comp.clone();
    for _ in 1..=m {
        let next_occ = u * (&occ + &fail);
        let next_fail = &comp * (&occ + &fail * &escape);
        occ = next_occ;
        fail = next_fail;
    }
    Ok(occ + fail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{ToPrimitive, Zero};

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn closed_form_for_single_position() {
        // One position, no side events: a gap needs U_1 and U_2 to fail.
        for u in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let expect = 1.0 - (1.0 - u) * (1.0 - u);
            assert!((lgap_probability_exact(1, 0, u).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_probabilities() {
        for m in [1, 3, 17] {
            for ell in [0, 2] {
                assert_eq!(lgap_probability_exact(m, ell, 1.0).unwrap(), 1.0);
                assert_eq!(lgap_probability_exact(m, ell, 0.0).unwrap(), 0.0);
            }
        }
    }

    /// Sums over every outcome of the (m+1) + m*ell independent events,
    /// checking the gap condition literally.
    fn enumeration_oracle(m: u32, ell: u32, u: &BigRational) -> BigRational {
        let m = m as usize;
        let ell = ell as usize;
        let bits = (m + 1) + m * ell;
        assert!(bits <= 20, "oracle is exponential");
        let comp = BigRational::one() - u;
        let mut total = BigRational::zero();
        for mask in 0u32..(1 << bits) {
            let u_at = |i: usize| mask >> i & 1 == 1; // U_{i+1}
            let v_at = |pos: usize, t: usize| mask >> (m + 1 + pos * ell + t) & 1 == 1;
            let mut gap = false;
            for pos in 0..m {
                let side_occurs = (0..ell).any(|t| v_at(pos, t));
                if !u_at(pos) && !u_at(pos + 1) && !side_occurs {
                    gap = true;
                    break;
                }
            }
            if gap {
                continue;
            }
            let mut weight = BigRational::one();
            for i in 0..bits {
                weight *= if mask >> i & 1 == 1 { u } else { &comp };
            }
            total += weight;
        }
        total
    }

    #[test]
    fn rational_dp_matches_enumeration() {
        let us = [ratio(0, 1), ratio(1, 3), ratio(3, 7), ratio(1, 1)];
        for m in 1..=4u32 {
            for ell in 0..=2u32 {
                if (m + 1) + m * ell > 13 {
                    continue;
                }
                for u in &us {
                    let dp = lgap_probability_rational(m, ell, u).unwrap();
                    assert_eq!(dp, enumeration_oracle(m, ell, u), "m={m} ell={ell} u={u}");
                }
            }
        }
    }

    #[test]
    fn float_dp_tracks_rational_dp() {
        for m in [1u32, 5, 12] {
            for ell in 0..=3u32 {
                let u = ratio(2, 5);
                let exact = lgap_probability_rational(m, ell, &u).unwrap();
                let float = lgap_probability_exact(m, ell, 0.4).unwrap();
                assert!((float - exact.to_f64().unwrap()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(lgap_probability_exact(0, 0, 0.5).is_err());
        assert!(lgap_probability_exact(3, 1, -0.1).is_err());
        assert!(lgap_probability_exact(3, 1, 1.1).is_err());
        assert!(lgap_probability_exact(3, 1, f64::NAN).is_err());
        assert!(lgap_probability_rational(2, 1, &ratio(7, 5)).is_err());
    }
}
