//! Closed-form Franck-Condon factors of two harmonic wells with equal
//! frequency whose minima are separated by a displacement b.
//!
//! f_{m,n'}(b) = |<m|n'(b)>|^2, where |n'(b)> is the n-th eigenstate of the
//! displaced well. Two independent routes are provided: the tabulated
//! polynomial forms for levels up to 3, and an associated-Laguerre expression
//! valid for arbitrary levels, which doubles as the reference oracle for the
//! truncated-basis pipelines. Both depend on b only through alpha^2 = b^2/2
//! and are symmetric under m <-> n.

use crate::error::{Error, Result};

/// Highest level covered by the tabulated closed forms.
pub const MAX_TABLE_LEVEL: usize = 3;

/// Largest level index accepted by the oracle (factorials stay representable).
pub const MAX_ORACLE_LEVEL: usize = 170;

/// Direct factorial ratios are used up to this index; log-factorials above.
const LOG_FACTORIAL_SWITCH: usize = 20;

/// Tabulated f_{m,n'}(b) for m, n <= 3.
pub fn fcf_closed_form(m: usize, n: usize, b: f64) -> Result<f64> {
    if m > MAX_TABLE_LEVEL {
        return Err(Error::LevelOutOfRange { level: m, dim: MAX_TABLE_LEVEL + 1 });
    }
    if n > MAX_TABLE_LEVEL {
        return Err(Error::LevelOutOfRange { level: n, dim: MAX_TABLE_LEVEL + 1 });
    }
    if !b.is_finite() {
        return Err(Error::NonFinite { what: "displacement", value: b });
    }
    let (lo, hi) = (m.min(n), m.max(n));
    let b2 = b * b;
    let poly = match (lo, hi) {
        (0, 0) => 1.0,
        (0, 1) => b2 / 2.0,
        (0, 2) => b2 * b2 / 8.0,
        (0, 3) => b2 * b2 * b2 / 48.0,
        (1, 1) => (b2 - 2.0).powi(2) / 4.0,
        (1, 2) => (b2 * b - 4.0 * b).powi(2) / 16.0,
        (1, 3) => (b2 * b2 - 6.0 * b2).powi(2) / 96.0,
        (2, 2) => (b2 * b2 - 8.0 * b2 + 8.0).powi(2) / 64.0,
        (2, 3) => (b2 * b2 * b - 12.0 * b2 * b + 24.0 * b).powi(2) / 384.0,
        (3, 3) => (b2 * b2 * b2 - 18.0 * b2 * b2 + 72.0 * b2 - 48.0).powi(2) / 2304.0,
        _ => unreachable!("lo <= hi <= 3"),
    };
    Ok((-b2 / 2.0).exp() * poly)
}

/// Franck-Condon factor for arbitrary levels via the associated-Laguerre
/// form: with alpha^2 = b^2/2 and n >= m,
/// f = exp(-alpha^2) alpha^(2(n-m)) (m!/n!) [L_m^(n-m)(alpha^2)]^2.
pub fn fcf_oracle(m: usize, n: usize, b: f64) -> Result<f64> {
    if m > MAX_ORACLE_LEVEL {
        return Err(Error::IndexTooLarge { index: m, max: MAX_ORACLE_LEVEL });
    }
    if n > MAX_ORACLE_LEVEL {
        return Err(Error::IndexTooLarge { index: n, max: MAX_ORACLE_LEVEL });
    }
    if !b.is_finite() {
        return Err(Error::NonFinite { what: "displacement", value: b });
    }
    let (lo, hi) = (m.min(n), m.max(n));
    let k = hi - lo;
    let alpha2 = b * b / 2.0;
    if alpha2 == 0.0 {
        // Orthonormality: overlap is delta_{m,n}.
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let lag = associated_laguerre(lo, k, alpha2);
    let value = if hi <= LOG_FACTORIAL_SWITCH {
        // lo!/hi! = 1 / prod_{j=lo+1..=hi} j, exactly representable here.
        let mut ratio = 1.0;
        for j in (lo + 1)..=hi {
            ratio /= j as f64;
        }
        (-alpha2).exp() * alpha2.powi(k as i32) * ratio * lag * lag
    } else {
        // Work in logs so large indices neither overflow nor underflow early.
        let log_pref =
            -alpha2 + k as f64 * alpha2.ln() + ln_factorial(lo) - ln_factorial(hi);
        log_pref.exp() * lag * lag
    };
    Ok(value)
}

/// Fraction of a displaced ground state captured by the four lowest levels:
/// F(b) = sum_{j=0..3} f_{0,j'}(b) = [1 + b^2/2 + b^4/8 + b^6/48] exp(-b^2/2).
pub fn four_level_norm(b: f64) -> f64 {
    let b2 = b * b;
    (1.0 + b2 / 2.0 + b2 * b2 / 8.0 + b2 * b2 * b2 / 48.0) * (-b2 / 2.0).exp()
}

/// Whether the overlap f_{m,n'}(b) is classically forbidden: the allowed
/// regions of level m (|x| <= sqrt(2m+1)) and of displaced level n
/// (|x - b| <= sqrt(2n+1)) no longer intersect once
/// b >= sqrt(2m+1) + sqrt(2n+1), so any remaining overlap is tunneling.
pub fn beyond_turning_points(m: usize, n: usize, b: f64) -> bool {
    b >= (2.0 * m as f64 + 1.0).sqrt() + (2.0 * n as f64 + 1.0).sqrt()
}

/// Associated Laguerre polynomial L_n^(k)(x) by the three-term recurrence.
fn associated_laguerre(n: usize, k: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let kf = k as f64;
    let mut prev = 1.0;
    let mut curr = 1.0 + kf - x;
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + kf - x) * curr - (fi + kf) * prev) / (fi + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// ln(n!) by direct summation; exact enough for n <= 170.
fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_to_first_excited_at_unit_displacement() {
        // f_{0,1'}(1) = exp(-1/2)/2.
        let f = fcf_closed_form(0, 1, 1.0).unwrap();
        assert!((f - 0.303_265_329_856_316_7).abs() < 1e-15);
        assert!((f - 0.30327).abs() < 1e-5);
    }

    #[test]
    fn node_of_diagonal_factor() {
        // f_{1,1'}(sqrt 2) = 0: the polynomial (b^2 - 2)^2 has a node there.
        let f = fcf_closed_form(1, 1, 2.0_f64.sqrt()).unwrap();
        assert!(f.abs() < 1e-28);
    }

    #[test]
    fn highest_tabulated_entry_against_frozen_value() {
        let f = fcf_closed_form(2, 3, 1.0).unwrap();
        assert!((f - 0.266_936_670_550_612_1).abs() < 1e-15);
    }

    #[test]
    fn closed_form_is_symmetric() {
        for b in [0.0, 0.4, 1.3, 3.7] {
            for m in 0..=3 {
                for n in 0..=3 {
                    let fmn = fcf_closed_form(m, n, b).unwrap();
                    let fnm = fcf_closed_form(n, m, b).unwrap();
                    assert_eq!(fmn, fnm, "m={m} n={n} b={b}");
                }
            }
        }
    }

    #[test]
    fn closed_form_rejects_untabulated_levels() {
        assert!(matches!(
            fcf_closed_form(4, 0, 1.0),
            Err(Error::LevelOutOfRange { level: 4, .. })
        ));
        assert!(fcf_closed_form(0, 0, f64::INFINITY).is_err());
    }

    #[test]
    fn oracle_agrees_with_closed_forms() {
        let mut b = 0.0;
        while b <= 4.0 + 1e-9 {
            for m in 0..=3 {
                for n in m..=3 {
                    let oracle = fcf_oracle(m, n, b).unwrap();
                    let table = fcf_closed_form(m, n, b).unwrap();
                    assert!(
                        (oracle - table).abs() < 1e-12,
                        "m={m} n={n} b={b}: {oracle} vs {table}"
                    );
                }
            }
            b += 0.05;
        }
    }

    #[test]
    fn oracle_is_kronecker_delta_at_zero_displacement() {
        for m in 0..5 {
            for n in 0..5 {
                let expect = if m == n { 1.0 } else { 0.0 };
                assert_eq!(fcf_oracle(m, n, 0.0).unwrap(), expect);
            }
        }
    }

    #[test]
    fn oracle_completeness_over_final_levels() {
        // sum_n f_{3,n'}(4) -> 1: a displaced eigenstate has unit norm.
        let total: f64 = (0..=64).map(|n| fcf_oracle(3, n, 4.0).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9, "sum = {total}");
    }

    #[test]
    fn oracle_handles_large_indices_through_log_route() {
        // 170! overflows f64; the log route must still produce a sane value.
        let tiny = fcf_oracle(0, 170, 2.0).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-200, "f(0,170',2) = {tiny:e}");
        let diag = fcf_oracle(150, 150, 1.0).unwrap();
        assert!(diag.is_finite() && (0.0..=1.0).contains(&diag));
    }

    #[test]
    fn oracle_rejects_indices_past_factorial_range() {
        assert!(matches!(
            fcf_oracle(0, 171, 1.0),
            Err(Error::IndexTooLarge { index: 171, max: 170 })
        ));
    }

    #[test]
    fn four_level_norm_matches_frozen_value_at_two() {
        // F(2) = (19/3) exp(-2).
        assert!((four_level_norm(2.0) - 0.857_123_460_498_547).abs() < 1e-14);
        assert!((four_level_norm(2.0) - 0.85712).abs() < 1e-5);
    }

    #[test]
    fn four_level_norm_is_the_sum_of_ground_row() {
        for b in [0.0, 0.7, 1.9, 3.3] {
            let sum: f64 = (0..=3).map(|j| fcf_closed_form(0, j, b).unwrap()).sum();
            assert!((four_level_norm(b) - sum).abs() < 1e-14, "b={b}");
        }
    }

    #[test]
    fn turning_point_thresholds() {
        // Ground-ground: forbidden from b = 2; ground-first: from 1 + sqrt(3).
        assert!(!beyond_turning_points(0, 0, 1.99));
        assert!(beyond_turning_points(0, 0, 2.0));
        assert!(!beyond_turning_points(0, 1, 2.73));
        assert!(beyond_turning_points(0, 1, 1.0 + 3.0_f64.sqrt()));
    }
}
