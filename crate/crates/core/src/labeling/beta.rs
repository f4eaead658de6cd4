//! Exact arithmetic for powers of β = 2^(50/19).
//!
//! No predicate here touches floating point: `x < β^k·y` is decided as
//! `x^19 < 2^(50k)·y^19` on big integers.

use num_bigint::BigUint;
use num_traits::One;

use super::LabelError;

/// β as a float, for reporting only.
pub fn beta() -> f64 {
    2f64.powf(50.0 / 19.0)
}

fn pow19(x: u64) -> BigUint {
    BigUint::from(x).pow(19)
}

fn two_pow(bits: u64) -> BigUint {
    BigUint::one() << bits
}

/// Least `k >= 0` with `d <= β^k`, i.e. with `d^19 <= 2^(50k)`.
pub fn ceil_log_beta(d: u64) -> Result<u32, LabelError> {
    if d == 0 {
        return Err(LabelError::ZeroDegree);
    }
    let lhs = pow19(d);
    // Start from the bit-length estimate and correct in both directions.
    let mut k = (lhs.bits().saturating_sub(1) / 50) as u32;
    while lhs > two_pow(50 * k as u64) {
        k += 1;
    }
    while k > 0 && lhs <= two_pow(50 * (k as u64 - 1)) {
        k -= 1;
    }
    Ok(k)
}

/// `2^ceil_log_beta(d)`: the size of the label range of a degree-`d` vertex.
pub fn lambda_of(d: u64) -> Result<u64, LabelError> {
    Ok(1u64 << ceil_log_beta(d)?)
}

/// Label range size, with isolated vertices getting the single label 0.
pub fn label_range(d: u64) -> u64 {
    if d == 0 {
        1
    } else {
        1u64 << ceil_log_beta(d).expect("nonzero degree")
    }
}

/// `d(u)/β < d(v) < β·d(u)`, the window inside which an edge can be risky.
/// Symmetric in its arguments. Equality never occurs since β is irrational.
pub fn ratio_gate(du: u64, dv: u64) -> bool {
    if du == 0 || dv == 0 {
        return false;
    }
    let (a, b) = (pow19(du), pow19(dv));
    let scale = two_pow(50);
    a < &scale * &b && b < &scale * &a
}

/// `x/β^power < y < β^power·x`.
pub fn within_beta_power(x: u64, y: u64, power: u32) -> bool {
    if x == 0 || y == 0 {
        return false;
    }
    let (a, b) = (pow19(x), pow19(y));
    let scale = two_pow(50 * power as u64);
    a < &scale * &b && b < &scale * &a
}

/// `⌊β·d⌋`, the largest integer `m` with `m^19 < 2^50·d^19`.
pub fn floor_beta_times(d: u64) -> u64 {
    if d == 0 {
        return 0;
    }
    let limit = two_pow(50) * pow19(d);
    let mut m = (beta() * d as f64).floor() as u64;
    while pow19(m + 1) < limit {
        m += 1;
    }
    while m > 0 && pow19(m) >= limit {
        m -= 1;
    }
    m
}

/// `d^(19/50) >= c`, i.e. `d^0.38 >= c`, decided exactly as `d^19 >= c^50`.
pub fn pow038_at_least(d: u64, c: u64) -> bool {
    pow19(d) >= BigUint::from(c).pow(50)
}

/// Per-vertex exponent `⌈log_β d(v)⌉`, with isolated vertices mapped to 0.
pub fn exponents(degrees: &[usize]) -> Vec<u32> {
    let mut cache = std::collections::HashMap::new();
    degrees
        .iter()
        .map(|&d| {
            if d == 0 {
                0
            } else {
                *cache
                    .entry(d)
                    .or_insert_with(|| ceil_log_beta(d as u64).expect("nonzero degree"))
            }
        })
        .collect()
}
