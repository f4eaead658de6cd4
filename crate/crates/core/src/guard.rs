//! Guarded comparisons of integer counts against real-valued thresholds such
//! as `8·d^0.62`. A comparison that falls within one ulp of the threshold is
//! reported as undecided rather than resolved either way.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Violated,
    WithinGuard,
}

impl Verdict {
    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }
}

/// Compares `value <= threshold`.
pub fn at_most(value: f64, threshold: f64) -> Verdict {
    if threshold == f64::INFINITY {
        return Verdict::Holds;
    }
    let ulp = (threshold.next_up() - threshold).abs();
    let diff = value - threshold;
    if diff.abs() <= ulp {
        Verdict::WithinGuard
    } else if diff > 0.0 {
        Verdict::Violated
    } else {
        Verdict::Holds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(at_most(3.0, 4.5), Verdict::Holds);
        assert_eq!(at_most(5.0, 4.5), Verdict::Violated);
        assert_eq!(at_most(4.0, 4.0), Verdict::WithinGuard);
        assert_eq!(at_most(4.0, 4.0f64.next_up()), Verdict::WithinGuard);
        assert_eq!(at_most(1e300, f64::INFINITY), Verdict::Holds);
    }
}
