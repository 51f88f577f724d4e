//! Bounded search for admissible groups over real quadratic fields.
//!
//! An admissible group of type `e` over `k = Q(sqrt(d))` with `Ram(A)` made of
//! the conjugate pairs over split primes `p_1, …, p_m` satisfies
//! `e = I * B_2/12 * prod (p_i - 1)^2` with `I` its index in `Gamma(1)`. Since
//! `e <= 36` and `B_2 >= 3 d_k^{3/2}/50`, only `d_k <= 372` can occur.

use std::fmt;

use crate::arith::integer::{is_prime, primes_up_to};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::quadratic::{QuadField, Splitting};
use crate::quaternion::QuaternionAlgebraData;
use crate::torsion::gamma1_torsion_orders;

pub const TYPES: [i64; 7] = [12, 16, 20, 24, 28, 32, 36];
pub const MAX_DISCRIMINANT: i64 = 372;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Candidate,
    Pruned(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Candidate => f.write_str("Candidate"),
            RowStatus::Pruned(_) => f.write_str("Pruned"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRow {
    /// Fundamental discriminant.
    pub disc: i64,
    pub d: i64,
    pub b2: Rational,
    pub e: i64,
    /// Split rational primes whose conjugate pairs ramify.
    pub ram_primes: Vec<u64>,
    pub index: u64,
    pub status: RowStatus,
}

impl CandidateRow {
    fn sort_key(&self) -> (i64, i64, u64, Vec<u64>) {
        (self.e, self.disc, self.index, self.ram_primes.clone())
    }

    /// `I * B_2/12 * prod (p - 1)^2`.
    pub fn euler_number(&self) -> Rational {
        let pairs: Rational = self.ram_primes.iter().map(|&p| Rational::from((p - 1) * (p - 1))).product();
        Rational::from(self.index) * self.b2 / Rational::from(12i64) * pairs
    }

    pub fn algebra(&self) -> QuaternionAlgebraData {
        let k = QuadField::new(self.d).expect("row field is valid");
        QuaternionAlgebraData::over_quadratic_split_primes(k, &self.ram_primes).expect("row primes split")
    }
}

/// Fundamental discriminants of real quadratic fields in `[lo, hi]`.
pub fn fundamental_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(5)..=hi)
        .filter(|&dd| {
            let d = if dd % 4 == 0 { dd / 4 } else { dd };
            QuadField::new(d).map(|k| k.discriminant() == dd).unwrap_or(false)
        })
        .collect()
}

fn subsets(
    primes: &[u64],
    budget: Rational,
    start: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<(Vec<u64>, Rational)>,
) {
    for i in start..primes.len() {
        let p = primes[i];
        let w = Rational::from((p - 1) * (p - 1));
        if w > budget {
            break;
        }
        current.push(p);
        out.push((current.clone(), budget / w));
        subsets(primes, budget / w, i + 1, current, out);
        current.pop();
    }
}

/// All `(D, e, S, I)` with `I = 12e / (B_2 prod_{p in S} (p - 1)^2)` a positive
/// integer, `S` a nonempty set of split primes.
pub fn enumerate_candidates(e_values: &[i64]) -> Result<Vec<CandidateRow>> {
    if let Some(&e) = e_values.iter().find(|e| !TYPES.contains(e)) {
        return Err(Error::InvalidArgument(format!("type {e} is not one of {TYPES:?}")));
    }
    let twelve = Rational::from(12i64);
    let mut rows = Vec::new();
    for disc in fundamental_discriminants(5, MAX_DISCRIMINANT) {
        let d = if disc % 4 == 0 { disc / 4 } else { disc };
        let k = QuadField::new(d)?;
        let b2 = k.bernoulli2();
        if b2 / twelve > Rational::from(36i64) {
            continue;
        }
        // (p - 1)^2 <= 12 * 36 / B_2.
        let limit = Rational::from(432i64) / b2;
        let p_max = 1 + (limit.to_f64().sqrt().floor() as u64);
        let split: Vec<u64> = primes_up_to(p_max)
            .into_iter()
            .filter(|&p| k.splitting_type(p).map(|q| q.splitting == Splitting::Split).unwrap_or(false))
            .collect();
        for &e in e_values {
            let budget = twelve * Rational::from(e) / b2;
            let mut found = Vec::new();
            subsets(&split, budget, 0, &mut Vec::new(), &mut found);
            for (ram_primes, index) in found {
                if let Some(i) = index.to_integer() {
                    rows.push(CandidateRow {
                        disc,
                        d,
                        b2,
                        e,
                        ram_primes,
                        index: i as u64,
                        status: RowStatus::Candidate,
                    });
                }
            }
        }
    }
    rows.sort_by_key(CandidateRow::sort_key);
    Ok(rows)
}

/// A torsion-free subgroup has index divisible by the order of every finite
/// subgroup, in particular by every element order occurring in `Gamma(1)`.
pub fn prune_by_torsion(rows: Vec<CandidateRow>) -> Vec<CandidateRow> {
    rows.into_iter()
        .map(|mut row| {
            if row.status == RowStatus::Candidate {
                let orders = gamma1_torsion_orders(&row.algebra());
                if let Some(m) = orders.iter().find(|&&m| row.index % m as u64 != 0) {
                    row.status = RowStatus::Pruned(format!("order {m} torsion, {m} does not divide {}", row.index));
                }
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRow {
    pub e: i64,
    pub disc: i64,
    pub ram_primes: &'static [u64],
    pub index: u64,
}

/// The classification of admissible groups over real quadratic fields.
pub const REFERENCE_TABLE: [ReferenceRow; 14] = [
    ReferenceRow { e: 12, disc: 17, ram_primes: &[2], index: 18 },
    ReferenceRow { e: 16, disc: 13, ram_primes: &[3], index: 12 },
    ReferenceRow { e: 16, disc: 17, ram_primes: &[2], index: 24 },
    ReferenceRow { e: 20, disc: 17, ram_primes: &[2], index: 30 },
    ReferenceRow { e: 24, disc: 13, ram_primes: &[3], index: 18 },
    ReferenceRow { e: 24, disc: 17, ram_primes: &[2], index: 36 },
    ReferenceRow { e: 24, disc: 8, ram_primes: &[7], index: 4 },
    ReferenceRow { e: 24, disc: 33, ram_primes: &[2], index: 12 },
    ReferenceRow { e: 28, disc: 17, ram_primes: &[2], index: 42 },
    ReferenceRow { e: 32, disc: 13, ram_primes: &[3], index: 24 },
    ReferenceRow { e: 32, disc: 17, ram_primes: &[2], index: 48 },
    ReferenceRow { e: 32, disc: 28, ram_primes: &[3], index: 6 },
    ReferenceRow { e: 36, disc: 17, ram_primes: &[2], index: 54 },
    ReferenceRow { e: 36, disc: 33, ram_primes: &[2], index: 18 },
];

impl ReferenceRow {
    fn matches(&self, row: &CandidateRow) -> bool {
        self.e == row.e
            && self.disc == row.disc
            && self.ram_primes == row.ram_primes.as_slice()
            && self.index == row.index
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub matched: Vec<CandidateRow>,
    /// Surviving rows absent from the reference, with a tag.
    pub extra: Vec<(CandidateRow, String)>,
    pub missing: Vec<ReferenceRow>,
}

pub fn compare_to_reference(rows: &[CandidateRow]) -> Comparison {
    let survivors: Vec<&CandidateRow> = rows.iter().filter(|r| r.status == RowStatus::Candidate).collect();
    let matched: Vec<CandidateRow> =
        survivors.iter().filter(|r| REFERENCE_TABLE.iter().any(|t| t.matches(r))).map(|r| (*r).clone()).collect();
    let extra = survivors
        .iter()
        .filter(|r| !REFERENCE_TABLE.iter().any(|t| t.matches(r)))
        .map(|r| ((*r).clone(), "extra: passes documented necessary conditions".to_string()))
        .collect();
    let missing = REFERENCE_TABLE.iter().filter(|t| !survivors.iter().any(|r| t.matches(r))).copied().collect();
    Comparison { matched, extra, missing }
}

/// One line of the intermediate table of necessary conditions, expanded:
/// `(disc, e, ram_primes, index)`.
pub type IntermediateEntry = (i64, i64, &'static [u64], u64);

pub fn printed_intermediate_table() -> Vec<IntermediateEntry> {
    let mut t: Vec<IntermediateEntry> = vec![
        (137, 16, &[2], 1),
        (113, 12, &[2], 1),
        (109, 36, &[3], 1),
        (105, 12, &[2], 1),
        (85, 24, &[3], 1),
        (40, 28, &[3], 3),
        (37, 20, &[3], 3),
        (33, 24, &[2], 12),
        (29, 16, &[5], 1),
        (29, 32, &[5], 2),
        (29, 36, &[7], 1),
        (28, 16, &[3], 3),
        (28, 32, &[3], 6),
        (24, 16, &[5], 1),
        (24, 32, &[5], 2),
    ];
    for k in 0..7i64 {
        let e = 12 + 4 * k;
        t.push((17, e, &[2], (3 * e / 2) as u64));
        t.push((13, e, &[3], (9 + 3 * k) as u64));
    }
    for (e, i) in [(12, 2), (24, 4), (36, 6)] {
        t.push((8, e, &[7], i));
    }
    t.push((5, 20, &[11], 3));
    t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermediateCoverage {
    pub missing: Vec<IntermediateEntry>,
    /// Enumerated rows the printed table does not list.
    pub unlisted: Vec<CandidateRow>,
}

pub fn intermediate_coverage(rows: &[CandidateRow]) -> IntermediateCoverage {
    let printed = printed_intermediate_table();
    let key = |r: &CandidateRow| (r.disc, r.e, r.ram_primes.clone(), r.index);
    let missing = printed
        .iter()
        .filter(|(dd, e, s, i)| !rows.iter().any(|r| key(r) == (*dd, *e, s.to_vec(), *i)))
        .copied()
        .collect();
    let unlisted = rows
        .iter()
        .filter(|r| !printed.iter().any(|(dd, e, s, i)| key(r) == (*dd, *e, s.to_vec(), *i)))
        .cloned()
        .collect();
    IntermediateCoverage { missing, unlisted }
}

/// Runs enumeration and pruning for the given types.
pub fn run_search(e_values: &[i64]) -> Result<Vec<CandidateRow>> {
    Ok(prune_by_torsion(enumerate_candidates(e_values)?))
}

/// Whether every ramified prime splits in `k` and `e = I * B_2/12 * prod (p - 1)^2` holds exactly.
pub fn row_is_consistent(row: &CandidateRow) -> bool {
    let k = match QuadField::new(row.d) {
        Ok(k) => k,
        Err(_) => return false,
    };
    row.ram_primes
        .iter()
        .all(|&p| is_prime(p) && k.splitting_type(p).map(|q| q.splitting == Splitting::Split).unwrap_or(false))
        && row.euler_number() == Rational::from(row.e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_list() {
        let ds = fundamental_discriminants(5, 40);
        assert_eq!(ds, vec![5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40]);
    }

    #[test]
    fn enumeration_examples() {
        let rows = enumerate_candidates(&TYPES).unwrap();
        let has =
            |dd, e, s: &[u64], i| rows.iter().any(|r| r.disc == dd && r.e == e && r.ram_primes == s && r.index == i);
        assert!(has(113, 12, &[2], 1));
        for k in 0..7 {
            assert!(has(13, 12 + 4 * k, &[3], (9 + 3 * k) as u64));
        }
        assert!(has(8, 24, &[7], 4));
        assert!(has(33, 36, &[2], 18));
        assert!(rows.iter().all(row_is_consistent));
    }

    #[test]
    fn pruning_examples() {
        let rows = run_search(&TYPES).unwrap();
        let status = |dd, e, i| {
            rows.iter().find(|r| r.disc == dd && r.e == e && r.index == i).map(|r| r.status.clone()).unwrap()
        };
        assert!(matches!(status(29, 16, 1), RowStatus::Pruned(_)));
        assert_eq!(status(8, 24, 4), RowStatus::Candidate);
        assert!(matches!(status(5, 20, 3), RowStatus::Pruned(_)));
    }

    #[test]
    fn rejects_bad_types() {
        assert!(enumerate_candidates(&[13]).is_err());
        assert!(enumerate_candidates(&[40]).is_err());
    }

    #[test]
    fn empty_comparison() {
        let c = compare_to_reference(&[]);
        assert_eq!(c.missing.len(), 14);
        assert!(c.matched.is_empty() && c.extra.is_empty());
    }
}
