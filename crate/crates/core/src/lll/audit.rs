//! Recomputes the printed numeric constants of the construction and checks
//! that each threshold is where the underlying inequality changes sign.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::LllError;
use crate::labeling::{beta, floor_beta_times};

pub const CLAIM_IDS: [&str; 11] = [
    "beta_window",
    "lll_threshold",
    "f10",
    "fprime_root",
    "double_use_16",
    "double_use_219",
    "f_degree_24",
    "window_44",
    "window_2664",
    "ratio_617",
    "chain15",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub formula: String,
    pub computed: f64,
    pub printed: String,
    pub pass: bool,
    /// For thresholds: the inequality fails at 0.99× and holds at 1.01× the value.
    pub tightness: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub claims: Vec<ClaimReport>,
    pub all_pass: bool,
}

pub fn audit_constants() -> AuditReport {
    let claims: Vec<ClaimReport> = CLAIM_IDS
        .iter()
        .map(|id| audit_claim(id).expect("known claim id"))
        .collect();
    let all_pass = claims.iter().all(|c| c.pass);
    AuditReport { claims, all_pass }
}

fn f(d: f64) -> f64 {
    d.powf(0.24) / 3.0 - (2.0 * d.powi(3)).ln()
}

fn report(
    id: &str,
    formula: &str,
    computed: f64,
    printed: &str,
    pass: bool,
    tightness: Option<bool>,
    detail: String,
) -> ClaimReport {
    ClaimReport {
        claim_id: id.to_string(),
        formula: formula.to_string(),
        computed,
        printed: printed.to_string(),
        pass: pass && tightness.unwrap_or(true),
        tightness,
        detail,
    }
}

/// A threshold printed as an integer, and a margin that should change sign there.
fn threshold(
    id: &str,
    formula: &str,
    value: f64,
    printed: u64,
    margin: impl Fn(f64) -> f64,
) -> ClaimReport {
    let rounds = value.round() == printed as f64;
    let (below, above) = (margin(0.99 * value), margin(1.01 * value));
    let tight = below < 0.0 && above > 0.0;
    report(
        id,
        formula,
        value,
        &printed.to_string(),
        rounds,
        Some(tight),
        format!("margin at 0.99x = {below:.6e}, at 1.01x = {above:.6e}"),
    )
}

fn pow_big(base: u64, exp: u32) -> BigUint {
    BigUint::from(base).pow(exp)
}

pub fn audit_claim(id: &str) -> Option<ClaimReport> {
    let b = beta();
    Some(match id {
        "beta_window" => {
            // 6.19 < β < 6.2 with β^19 = 2^50: 619^19 < 2^50·100^19 and 2^50·10^19 < 62^19.
            let two50 = BigUint::one() << 50u32;
            let lower = pow_big(619, 19) < &two50 * pow_big(100, 19);
            let upper = &two50 * pow_big(10, 19) < pow_big(62, 19);
            report(
                id,
                "6.19 < 2^(50/19) < 6.2",
                b,
                "6.19 < beta < 6.2",
                lower && upper,
                None,
                format!("exact: lower {lower}, upper {upper}"),
            )
        }
        "lll_threshold" => threshold(
            id,
            "(3*25*beta^6)^(1/1.24)",
            (75.0 * b.powi(6)).powf(1.0 / 1.24),
            221_460,
            |d| d.powf(0.24) / 3.0 - 25.0 * b.powi(6) / d,
        ),
        "f10" => {
            let v = f(1e10);
            report(
                id,
                "f(d) = d^0.24/3 - ln(2d^3) at d = 1e10",
                v,
                "14",
                (v - 14.0).abs() <= 0.5 && v > 0.0,
                None,
                format!("f(1e10) = {v:.6}"),
            )
        }
        "fprime_root" => threshold(
            id,
            "(3/0.08)^(1/0.24)",
            (3.0f64 / 0.08).powf(1.0 / 0.24),
            3_617_959,
            |d| 0.08 / d.powf(0.76) - 3.0 / d,
        ),
        "double_use_16" => threshold(
            id,
            "16^(1/0.14)",
            16f64.powf(1.0 / 0.14),
            398_893_555,
            |d| d.powf(0.76) - 16.0 * d.powf(0.62),
        ),
        "double_use_219" => threshold(
            id,
            "(3*73)^(1/0.24)",
            219f64.powf(1.0 / 0.24),
            5_647_425_084,
            |d| d / 3.0 - d.powf(0.76) - 72.0 * d.powf(0.76),
        ),
        "f_degree_24" => threshold(
            id,
            "24^(1/0.14)",
            24f64.powf(1.0 / 0.14),
            7_221_904_256,
            |d| 0.5 * d.powf(0.38) - 12.0 * d.powf(0.24),
        ),
        "window_44" => threshold(id, "44^(1/0.38)", 44f64.powf(1.0 / 0.38), 21_129, |d| {
            2.0 / 3.0 * d - (4.0 / 9.0 * d + 88.0 / 9.0 * d.powf(0.62))
        }),
        "window_2664" => threshold(
            id,
            "(8*333)^(1/0.38)",
            2664f64.powf(1.0 / 0.38),
            1_034_102_857,
            |d| d / 9.0 - 8.0 * d.powf(0.62) - 4.0 / 37.0 * d,
        ),
        "ratio_617" => {
            // (2/3)/(4/37) = 37/6 < 617/100, and 6.17 < β as 617^19 < 2^50·100^19.
            let below = 37 * 100 < 617 * 6;
            let beta_above = pow_big(617, 19) < (BigUint::one() << 50u32) * pow_big(100, 19);
            report(
                id,
                "(2/3)/(4/37) < 6.17 < beta",
                37.0 / 6.0,
                "6.17",
                below && beta_above,
                None,
                format!("exact: 37/6 < 6.17 {below}, 6.17 < beta {beta_above}"),
            )
        }
        "chain15" => chain(),
        _ => return None,
    })
}

/// The Local Lemma condition at `d = 1e10`, step by step.
fn chain() -> ClaimReport {
    let d_int: u128 = 10_000_000_000;
    let d = d_int as f64;
    let b = beta();
    // Out-degree plus one is at most 25d², so the product has at most 25d² factors.
    let exponent = 4 + 4 * d_int * floor_beta_times(d_int as u64) as u128;
    let s1 = exponent <= 25 * d_int * d_int;
    // x/(1+x) > e^(-1/x) ⇔ ln(1 + z) < z with z = 1/x. For small z the
    // alternating series gives z - ln(1+z) >= z²/2 - z³/3 > 0; f64 cannot
    // resolve the difference directly.
    let y = (d / (b * b)).powi(3);
    let z = 1.0 / y;
    let gap = z * z / 2.0 - z * z * z / 3.0;
    let s2 = z > 0.0 && z < 1.0 && gap > 0.0;
    let lll_margin = d.powf(0.24) / 3.0 - 25.0 * b.powi(6) / d;
    let s3 = lll_margin > 0.0;
    let fv = f(d);
    let s4 = fv > 0.0;
    // The A, B, C tails 2e^(-4d^0.62/3) are below the F tail 2e^(-2d^0.24/3).
    let s5 = 4.0 * d.powf(0.62) >= 2.0 * d.powf(0.24);
    let pass = s1 && s2 && s3 && s4 && s5;
    report(
        "chain15",
        "x_L * prod(1 - x_Q) > 2e^(-2d^0.24/3) at d = 1e10 with x_L = 1/(1+d^3)",
        fv,
        "holds",
        pass,
        None,
        format!(
            "out-degree+1 <= 25d^2: {s1}; log gap {gap:.3e}: {s2}; \
             25beta^6/d <= d^0.24/3 (margin {lll_margin:.4}): {s3}; f(d) = {fv:.4}: {s4}; \
             ABC tails below F tail: {s5}"
        ),
    )
}

/// `2e^(-t²/(3np))`, valid for `0 <= t <= np`.
pub fn chernoff_bound(n: u64, p: f64, t: f64) -> Result<f64, LllError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(LllError::InvalidParameters(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    let mean = n as f64 * p;
    if !(t >= 0.0 && t <= mean) {
        return Err(LllError::InvalidParameters(format!(
            "t = {t} outside [0, np = {mean}]"
        )));
    }
    if t == 0.0 {
        return Ok(2.0);
    }
    Ok(2.0 * (-t * t / (3.0 * mean)).exp())
}

/// `Pr(|BIN(n, p) - np| > t)` by summing the probability mass function, for `n <= 25`.
pub fn binomial_tail_exact(n: u64, p: f64, t: f64) -> Result<f64, LllError> {
    if n > 25 {
        return Err(LllError::InvalidParameters(format!(
            "exact tail needs n <= 25, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(LllError::InvalidParameters(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    let mean = n as f64 * p;
    let mut binom = 1.0;
    let mut tail = 0.0;
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        if (k as f64 - mean).abs() > t {
            tail += binom * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
        }
    }
    Ok(tail)
}
