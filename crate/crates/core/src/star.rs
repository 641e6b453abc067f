//! Condition (*) on levels: a divisor of `N` carries a suitable pair of
//! newforms, either from the built-in table or from a weight-2 newform of
//! prime level.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, factorize, is_prime, kronecker};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewformRecord {
    pub n0: u64,
    pub f1: String,
    pub f2: String,
    pub nebentype: String,
}

const TABLE: [(u64, &str, &str, &str); 12] = [
    (16, "16.4.e.a", "16.2.e.a", "16.e"),
    (27, "27.4.a.a", "27.2.a.a", "triv"),
    (25, "25.4.d.a", "25.2.d.a", "25.d"),
    (49, "49.4.a.a", "49.2.a.a", "triv"),
    (13, "13.4.e.a", "13.2.e.a", "13.e"),
    (24, "24.4.a.a", "24.2.a.a", "triv"),
    (18, "18.4.c.a", "18.2.c.a", "18.c"),
    (20, "20.4.a.a", "20.2.a.a", "triv"),
    (14, "14.4.a.a", "14.2.a.a", "triv"),
    (15, "15.4.a.a", "15.2.a.a", "triv"),
    (21, "21.4.a.a", "21.2.a.a", "triv"),
    (35, "35.4.a.a", "35.2.a.a", "triv"),
];

/// The newform table, in its original row order.
pub fn builtin_table() -> Vec<NewformRecord> {
    TABLE
        .iter()
        .map(|&(n0, f1, f2, e)| NewformRecord { n0, f1: f1.into(), f2: f2.into(), nebentype: e.into() })
        .collect()
}

/// Genus of `X₀(p)` from the index, elliptic points and cusps.
pub fn genus_x0(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mu = p as i64 + 1;
    let nu2 = if p == 2 { 1 } else { 1 + kronecker(-1, p) as i64 };
    let nu3 = if p == 3 { 1 } else { 1 + kronecker(-3, p) as i64 };
    let g = Ratio::from_integer(1) + Ratio::new(mu, 12) - Ratio::new(nu2, 4) - Ratio::new(nu3, 3) - Ratio::new(2, 2);
    assert!(g.is_integer() && g >= Ratio::from_integer(0), "genus formula gave {g}");
    Ok(g.to_integer() as u64)
}

/// `q = 11` or `q ≥ 17`.
pub fn prime_rule(q: u64) -> bool {
    q == 11 || q >= 17
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    Table(NewformRecord),
    PrimeLevel { genus: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub divisor: u64,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarVerdict {
    pub n: u64,
    pub satisfied: bool,
    pub witness: Option<Witness>,
}

impl fmt::Display for StarVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "N={} not satisfied", self.n),
            Some(Witness { divisor, rule: Rule::Table(r) }) => {
                write!(f, "N={} satisfied witness={} rule=table ({}, {}, {})", self.n, divisor, r.f1, r.f2, r.nebentype)
            }
            Some(Witness { divisor, rule: Rule::PrimeLevel { genus } }) => {
                write!(f, "N={} satisfied witness={} rule=prime (genus {})", self.n, divisor, genus)
            }
        }
    }
}

/// Witness search: table levels in ascending order, then the smallest prime
/// divisor passing the prime rule. The prime rule is cross-checked against
/// the genus of `X₀(q)`.
pub fn satisfies_star(n: u64) -> Result<StarVerdict> {
    if n == 0 {
        return Err(Error::Zero("level".into()));
    }
    let mut table = builtin_table();
    table.sort_by_key(|r| r.n0);
    if let Some(r) = table.into_iter().find(|r| n % r.n0 == 0) {
        return Ok(StarVerdict { n, satisfied: true, witness: Some(Witness { divisor: r.n0, rule: Rule::Table(r) }) });
    }
    for (q, _) in factorize(n) {
        let genus = genus_x0(q)?;
        if prime_rule(q) != (genus >= 1) {
            return Err(Error::Unsupported(format!("prime rule and genus disagree at {q}")));
        }
        if genus >= 1 {
            return Ok(StarVerdict {
                n,
                satisfied: true,
                witness: Some(Witness { divisor: q, rule: Rule::PrimeLevel { genus } }),
            });
        }
    }
    Ok(StarVerdict { n, satisfied: false, witness: None })
}

/// Re-checks a verdict's witness from scratch.
pub fn witness_is_valid(v: &StarVerdict) -> bool {
    match &v.witness {
        None => !v.satisfied && divisors(v.n).iter().all(|&d| {
            builtin_table().iter().all(|r| r.n0 != d) && !(is_prime(d) && prime_rule(d))
        }),
        Some(w) => {
            v.satisfied
                && v.n % w.divisor == 0
                && match &w.rule {
                    Rule::Table(r) => builtin_table().contains(r) && r.n0 == w.divisor,
                    Rule::PrimeLevel { genus } => {
                        is_prime(w.divisor) && prime_rule(w.divisor) && genus_x0(w.divisor).ok() == Some(*genus)
                    }
                }
        }
    }
}

pub const EXPECTED_NEGATIVE: [u64; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12];

#[derive(Clone, Debug, Serialize)]
pub struct RangeReport {
    pub n_max: u64,
    pub failures: Vec<u64>,
    pub negative_set: Vec<u64>,
}

impl RangeReport {
    pub fn negative_set_exact(&self) -> bool {
        self.negative_set == EXPECTED_NEGATIVE
    }
}

/// Every `N ∈ {11} ∪ [13, N_max]` must satisfy (*) and every `N ≤ 12`,
/// `N ≠ 11`, must not; violations of either kind are failures.
pub fn verify_theorem_range(n_max: u64) -> Result<RangeReport> {
    if n_max < 13 {
        return Err(Error::Unsupported(format!("range bound {n_max} is below 13")));
    }
    let verdicts: Vec<(u64, bool)> = (1..=n_max)
        .into_par_iter()
        .map(|n| satisfies_star(n).map(|v| (n, v.satisfied)))
        .collect::<Result<_>>()?;
    let expected = |n: u64| n == 11 || n >= 13;
    let failures = verdicts.iter().filter(|&&(n, s)| s != expected(n)).map(|&(n, _)| n).collect();
    let negative_set = verdicts.iter().filter(|&&(_, s)| !s).map(|&(n, _)| n).collect();
    Ok(RangeReport { n_max, failures, negative_set })
}
