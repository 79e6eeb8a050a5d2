//! The non-nilpotent groups `Z_q ⋊ Z_p` of order `pq`, whose `σ₁` tends to 2.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, nth_prime};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::lattice;
use crate::report::decimal;
use crate::sigma::{self, Verdict};
use crate::spec::GroupSpec;
use crate::{Limits, Rational};

/// `⌊50·p·ln p⌋ + 100`
pub fn default_search_cap(p: u64) -> u64 {
    (50.0 * p as f64 * (p as f64).ln()).floor() as u64 + 100
}

/// Smallest prime `q ≤ cap` with `q ≡ 1 (mod p)`.
pub fn dirichlet_search(p: u64, cap: u64) -> Result<u64> {
    assert!(is_prime(p), "{p} is not prime");
    (1..)
        .map(|k| k * p + 1)
        .take_while(|&q| q <= cap)
        .find(|&q| is_prime(q))
        .ok_or(Error::SearchCapExceeded { p, cap })
}

/// `2 + (1 + 1/q)/p`
pub fn sigma1_formula(p: u64, q: u64) -> Rational {
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    Rational::from_integer(BigInt::from(2)) + Rational::new(&q + 1, &p * &q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessStatus {
    Enumerated,
    /// `pq` is above the order cap; only the closed form is available.
    SkippedLarge,
}

#[derive(Clone, Debug)]
pub struct PQWitness {
    /// 1-based position in the sequence of primes.
    pub index: usize,
    pub p: u64,
    pub q: u64,
    pub status: WitnessStatus,
    pub group: Option<Group>,
    pub sigma1_formula: Rational,
    pub sigma1_lattice: Option<Rational>,
    pub census: Option<BTreeMap<usize, usize>>,
    pub is_nilpotent: Option<bool>,
    pub verdict: Option<Verdict>,
}

impl PQWitness {
    pub fn expected_census(&self) -> BTreeMap<usize, usize> {
        let (p, q) = (self.p as usize, self.q as usize);
        BTreeMap::from([(1, 1), (p, q), (q, 1), (p * q, 1)])
    }

    /// Violated witness invariants, empty when everything checks out.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.q - 1).is_multiple_of(self.p) {
            out.push(format!("{} does not divide q-1 = {}", self.p, self.q - 1));
        }
        if self.sigma1_formula != sigma1_formula(self.p, self.q) {
            out.push("closed form mismatch".into());
        }
        if let Some(lat) = &self.sigma1_lattice {
            if *lat != self.sigma1_formula {
                out.push(format!("lattice σ₁ {lat} != formula {}", self.sigma1_formula));
            }
        }
        if let Some(census) = &self.census {
            if *census != self.expected_census() {
                out.push(format!("census {census:?} != {:?}", self.expected_census()));
            }
        }
        if self.is_nilpotent == Some(true) {
            out.push("group is nilpotent".into());
        }
        out
    }
}

/// Builds the `n`-th witness: `p` the `n`-th prime, `q` the smallest prime
/// `≡ 1 (mod p)`. Enumerates the lattice when `pq` fits under the cap.
pub fn build_witness(n: usize, limits: &Limits, search_cap: Option<u64>) -> Result<PQWitness> {
    let p = nth_prime(n);
    let q = dirichlet_search(p, search_cap.unwrap_or_else(|| default_search_cap(p)))?;
    let mut w = PQWitness {
        index: n,
        p,
        q,
        status: WitnessStatus::SkippedLarge,
        group: None,
        sigma1_formula: sigma1_formula(p, q),
        sigma1_lattice: None,
        census: None,
        is_nilpotent: None,
        verdict: None,
    };
    if limits.check_order(p as u128 * q as u128).is_ok() {
        let g = GroupSpec::SemidirectPQ { p: p as usize, q: q as usize, t: None }.build(limits)?;
        let lat = lattice::enumerate(&g, limits)?;
        let class = sigma::classify(&g, &lat);
        w.sigma1_lattice = Some(class.sigma1.clone());
        w.census = Some(lat.census().clone());
        w.is_nilpotent = Some(lattice::is_nilpotent(&g, &lat));
        w.verdict = Some(class.verdict);
        w.group = Some(g);
        w.status = WitnessStatus::Enumerated;
    }
    let bad = w.violations();
    assert!(bad.is_empty(), "witness {n} (p={p}, q={q}): {bad:?}");
    Ok(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub index: usize,
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma1: Rational,
    /// Display only, 12 places.
    pub sigma1_decimal: String,
    /// `σ₁ − 2 = (1 + 1/q)/p`
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub excess: Rational,
    pub status: WitnessStatus,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Whether `σ₁` happened to decrease strictly along the computed rows.
    pub observed_strictly_decreasing: bool,
}

/// The first `count` witnesses. Checks `2 < σ₁(G_n)` and
/// `σ₁(G_n) − 2 ≤ 2/p_n` on every row.
pub fn convergence_report(
    count: usize,
    limits: &Limits,
    search_cap: Option<u64>,
) -> Result<ConvergenceReport> {
    assert!(count >= 1);
    let witnesses = (1..=count)
        .into_par_iter()
        .map(|n| build_witness(n, limits, search_cap))
        .collect::<Result<Vec<_>>>()?;
    let two = Rational::from_integer(BigInt::from(2));
    let rows: Vec<ConvergenceRow> = witnesses
        .into_iter()
        .map(|w| {
            let excess = &w.sigma1_formula - &two;
            assert!(excess > Rational::from_integer(0.into()), "σ₁ not above 2 at p={}", w.p);
            assert!(excess <= Rational::new(2.into(), w.p.into()), "σ₁ − 2 exceeds 2/p at p={}", w.p);
            ConvergenceRow {
                index: w.index,
                p: w.p,
                q: w.q,
                sigma1_decimal: decimal(&w.sigma1_formula, 12),
                sigma1: w.sigma1_formula,
                excess,
                status: w.status,
                verdict: w.verdict,
            }
        })
        .collect();
    let observed_strictly_decreasing = rows.windows(2).all(|w| w[1].sigma1 < w[0].sigma1);
    Ok(ConvergenceReport { rows, observed_strictly_decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn smallest_q() {
        assert_eq!(dirichlet_search(2, 100).unwrap(), 3);
        assert_eq!(dirichlet_search(3, 100).unwrap(), 7);
        assert_eq!(dirichlet_search(7, 100).unwrap(), 29);
        assert!(matches!(dirichlet_search(7, 28), Err(Error::SearchCapExceeded { p: 7, cap: 28 })));
    }

    #[test]
    fn first_witnesses() {
        let lim = Limits::default();
        let w = build_witness(1, &lim, None).unwrap();
        assert_eq!((w.p, w.q), (2, 3));
        assert_eq!(w.sigma1_lattice, Some(r(8, 3)));
        assert_eq!(w.verdict, Some(Verdict::AtThreshold));

        let w = build_witness(2, &lim, None).unwrap();
        assert_eq!((w.p, w.q), (3, 7));
        assert_eq!(w.sigma1_formula, r(50, 21));
        assert_eq!(w.census, Some(BTreeMap::from([(1, 1), (3, 7), (7, 1), (21, 1)])));
        assert_eq!(w.is_nilpotent, Some(false));

        let w = build_witness(3, &lim, None).unwrap();
        assert_eq!((w.q, w.sigma1_formula.clone()), (11, r(122, 55)));
        assert_eq!(w.sigma1_lattice, Some(r(122, 55)));
    }

    #[test]
    fn skipped_when_too_large() {
        let lim = Limits { max_order: 50, ..Limits::default() };
        let w = build_witness(4, &lim, None).unwrap();
        assert_eq!(w.status, WitnessStatus::SkippedLarge);
        assert!(w.group.is_none() && w.sigma1_lattice.is_none());
        assert_eq!(w.sigma1_formula, r(2, 1) + r(30, 203));
    }

    #[test]
    fn report_rows() {
        let rep = convergence_report(4, &Limits::default(), None).unwrap();
        let excess: Vec<Rational> = rep.rows.iter().map(|r| r.excess.clone()).collect();
        assert_eq!(excess, vec![r(2, 3), r(8, 21), r(12, 55), r(30, 203)]);
        assert_eq!(rep.rows[0].sigma1_decimal, "2.666666666667");
        let one = convergence_report(1, &Limits::default(), None).unwrap();
        assert_eq!((one.rows[0].p, one.rows[0].q, one.rows[0].sigma1.clone()), (2, 3, r(8, 3)));
    }
}
