use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::LllError;
use crate::labeling::{ceil_log_beta, ratio_gate, risky_congruence, Endpoint, RiskType};

/// Membership of the edge `uv` in a risky set, from the point of view of `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RiskEvent {
    Type1,
    Type2,
    Type3,
    /// Risky of types 2 and 3 at once, i.e. `u ∈ F(v)`.
    TwoAndThree,
}

impl RiskEvent {
    /// Slots the event reads, in the order `c1(u), c2(u), c1(v), c2(v)`.
    fn relevant(self) -> [bool; 4] {
        match self {
            RiskEvent::Type1 => [true, false, true, false],
            RiskEvent::Type2 => [false, true, false, true],
            RiskEvent::Type3 | RiskEvent::TwoAndThree => [true; 4],
        }
    }

    fn holds(self, u: &Endpoint, v: &Endpoint) -> bool {
        match self {
            RiskEvent::Type1 => risky_congruence(RiskType::One, u, v),
            RiskEvent::Type2 => risky_congruence(RiskType::Two, u, v),
            RiskEvent::Type3 => risky_congruence(RiskType::Three, u, v),
            RiskEvent::TwoAndThree => {
                risky_congruence(RiskType::Two, u, v) && risky_congruence(RiskType::Three, u, v)
            }
        }
    }
}

/// Fixed label values; `None` slots are uniformly random.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditioning {
    pub c1u: Option<u64>,
    pub c2u: Option<u64>,
    pub c1v: Option<u64>,
    pub c2v: Option<u64>,
}

impl Conditioning {
    fn slots(&self) -> [Option<u64>; 4] {
        [self.c1u, self.c2u, self.c1v, self.c2v]
    }

    fn from_slots(s: [Option<u64>; 4]) -> Self {
        Self {
            c1u: s[0],
            c2u: s[1],
            c1v: s[2],
            c2v: s[3],
        }
    }
}

struct Pair {
    du: u64,
    dv: u64,
    ku: u32,
    kv: u32,
}

impl Pair {
    fn new(du: u64, dv: u64) -> Result<Self, LllError> {
        if !ratio_gate(du, dv) {
            return Err(LllError::GateFails { du, dv });
        }
        Ok(Self {
            du,
            dv,
            ku: ceil_log_beta(du).expect("gate implies positive degree"),
            kv: ceil_log_beta(dv).expect("gate implies positive degree"),
        })
    }

    fn ranges(&self) -> [u64; 4] {
        let (lu, lv) = (1u64 << self.ku, 1u64 << self.kv);
        [lu, lu, lv, lv]
    }

    /// `(hits, total)` over the free relevant slots, fixed slots taken from `fixed`.
    fn count(&self, event: RiskEvent, fixed: [Option<u64>; 4]) -> (u64, u64) {
        let ranges = self.ranges();
        let relevant = event.relevant();
        let free: Vec<usize> = (0..4)
            .filter(|&i| relevant[i] && fixed[i].is_none())
            .collect();
        let mut values = fixed.map(|x| x.unwrap_or(0));
        let mut hits = 0;
        let mut total = 0;
        loop {
            let u = Endpoint {
                degree: self.du,
                exponent: self.ku,
                c1: values[0],
                c2: values[1],
            };
            let v = Endpoint {
                degree: self.dv,
                exponent: self.kv,
                c1: values[2],
                c2: values[3],
            };
            total += 1;
            if event.holds(&u, &v) {
                hits += 1;
            }
            // Odometer over the free slots.
            let mut i = 0;
            loop {
                if i == free.len() {
                    return (hits, total);
                }
                let s = free[i];
                values[s] += 1;
                if values[s] < ranges[s] {
                    break;
                }
                values[s] = 0;
                i += 1;
            }
        }
    }
}

/// Exact probability that `uv` is risky in the sense of `event` for an edge
/// with endpoint degrees `du`, `dv`, given the fixed labels in `conditioned`.
pub fn exact_edge_risk_probability(
    du: u64,
    dv: u64,
    event: RiskEvent,
    conditioned: &Conditioning,
) -> Result<BigRational, LllError> {
    let pair = Pair::new(du, dv)?;
    let fixed = conditioned.slots();
    for (i, (value, range)) in fixed.iter().zip(pair.ranges()).enumerate() {
        if let Some(x) = value {
            if *x >= range {
                let name = ["c1(u)", "c2(u)", "c1(v)", "c2(v)"][i];
                return Err(LllError::InvalidConditioning(format!(
                    "{name} = {x} outside 0..{range}"
                )));
            }
        }
    }
    let (hits, total) = pair.count(event, fixed);
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Worst-case conditional probability bounds of the form
/// `Pr(event | fixed slots) <= c / d(v)^(e/50)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionalBound {
    /// `Pr(u ∈ A(v) | c1(v)) <= 2/d(v)^0.38`.
    TypeOneGivenC1v,
    /// `Pr(u ∈ B(v) | c2(v)) <= 2/d(v)^0.38`.
    TypeTwoGivenC2v,
    /// `Pr(u ∈ C(v) | c1(v), c2(v), c2(u)) <= 4/d(v)^0.38`.
    TypeThreeGivenC1vC2vC2u,
    /// `Pr(u ∈ C(v) | c1(v), c2(v)) <= 4/d(v)^0.38`.
    TypeThreeGivenC1vC2v,
    /// `Pr(u ∈ F(v) | c1(v), c2(v)) <= 8/d(v)^0.76`.
    TwoAndThreeGivenC1vC2v,
}

impl ConditionalBound {
    pub const ALL: [ConditionalBound; 5] = [
        ConditionalBound::TypeOneGivenC1v,
        ConditionalBound::TypeTwoGivenC2v,
        ConditionalBound::TypeThreeGivenC1vC2vC2u,
        ConditionalBound::TypeThreeGivenC1vC2v,
        ConditionalBound::TwoAndThreeGivenC1vC2v,
    ];

    pub fn event(self) -> RiskEvent {
        match self {
            ConditionalBound::TypeOneGivenC1v => RiskEvent::Type1,
            ConditionalBound::TypeTwoGivenC2v => RiskEvent::Type2,
            ConditionalBound::TypeThreeGivenC1vC2vC2u | ConditionalBound::TypeThreeGivenC1vC2v => {
                RiskEvent::Type3
            }
            ConditionalBound::TwoAndThreeGivenC1vC2v => RiskEvent::TwoAndThree,
        }
    }

    /// Fixed slots, in the order `c1(u), c2(u), c1(v), c2(v)`.
    fn fixed(self) -> [bool; 4] {
        match self {
            ConditionalBound::TypeOneGivenC1v => [false, false, true, false],
            ConditionalBound::TypeTwoGivenC2v => [false, false, false, true],
            ConditionalBound::TypeThreeGivenC1vC2vC2u => [false, true, true, true],
            ConditionalBound::TypeThreeGivenC1vC2v | ConditionalBound::TwoAndThreeGivenC1vC2v => {
                [false, false, true, true]
            }
        }
    }

    /// `(c, e)` with the bound equal to `c / d^(e/50)`.
    pub fn constants(self) -> (u64, u32) {
        match self {
            ConditionalBound::TypeOneGivenC1v | ConditionalBound::TypeTwoGivenC2v => (2, 19),
            ConditionalBound::TypeThreeGivenC1vC2vC2u | ConditionalBound::TypeThreeGivenC1vC2v => {
                (4, 19)
            }
            ConditionalBound::TwoAndThreeGivenC1vC2v => (8, 38),
        }
    }

    pub fn value(self, dv: u64) -> f64 {
        let (c, e) = self.constants();
        c as f64 / (dv as f64).powf(e as f64 / 50.0)
    }

    /// `hits/total <= c / dv^(e/50)`, decided as `hits^50·dv^e <= c^50·total^50`.
    fn admits(self, dv: u64, hits: u64, total: u64) -> bool {
        let (c, e) = self.constants();
        let lhs = BigUint::from(hits).pow(50) * BigUint::from(dv).pow(e);
        let rhs = BigUint::from(c).pow(50) * BigUint::from(total).pow(50);
        lhs <= rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub bound: ConditionalBound,
    pub du: u64,
    pub dv: u64,
    /// Largest conditional probability over all fixed values, reduced.
    pub worst: (u64, u64),
    pub worst_at: Conditioning,
    pub holds: bool,
}

impl BoundCheck {
    pub fn worst_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.worst.0), BigInt::from(self.worst.1))
    }
}

/// Maximises the conditional probability over every value of the fixed
/// slots and compares the maximum with the bound exactly.
pub fn check_conditional_bound(
    du: u64,
    dv: u64,
    bound: ConditionalBound,
) -> Result<BoundCheck, LllError> {
    let pair = Pair::new(du, dv)?;
    let ranges = pair.ranges();
    let mask = bound.fixed();
    let fixed_slots: Vec<usize> = (0..4).filter(|&i| mask[i]).collect();
    let mut values = [0u64; 4];
    let mut best: Option<(u64, u64, [Option<u64>; 4])> = None;
    loop {
        let fixed = std::array::from_fn(|i| mask[i].then_some(values[i]));
        let (hits, total) = pair.count(bound.event(), fixed);
        // Every conditioning has the same total, so compare hits.
        if best.is_none_or(|(h, _, _)| hits > h) {
            best = Some((hits, total, fixed));
        }
        let mut i = 0;
        loop {
            if i == fixed_slots.len() {
                let (hits, total, at) = best.expect("at least one conditioning");
                let g = hits.gcd(&total);
                return Ok(BoundCheck {
                    bound,
                    du,
                    dv,
                    worst: (hits / g, total / g),
                    worst_at: Conditioning::from_slots(at),
                    holds: bound.admits(dv, hits, total),
                });
            }
            let s = fixed_slots[i];
            values[s] += 1;
            if values[s] < ranges[s] {
                break;
            }
            values[s] = 0;
            i += 1;
        }
    }
}
