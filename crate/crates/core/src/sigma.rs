//! Exact `σ₁` and the classification against `2 + 4/n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::divisor_sum;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::lattice::{self, Lattice, Recognized, StructuralProfile};
use crate::{Limits, Rational};

/// `Σ |H| / |G|` over the whole lattice.
pub fn sigma1(g: &Group, lat: &Lattice) -> Rational {
    debug_assert_eq!(lat.group_order(), g.order());
    let total: BigInt = lat.subgroups().iter().map(|h| BigInt::from(h.order())).sum();
    Rational::new(total, BigInt::from(g.order()))
}

/// `2 + 4/n`
pub fn threshold(n: &BigInt) -> Rational {
    Rational::from_integer(BigInt::from(2)) + Rational::new(BigInt::from(4), n.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    BelowThreshold,
    AtThreshold,
    AboveThreshold,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Structure {
    Cyclic,
    Z2xZ2,
    Z3xZ3,
    S3,
    Other,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Recognized> for Structure {
    fn from(r: Recognized) -> Self {
        match r {
            Recognized::CyclicN => Structure::Cyclic,
            Recognized::Z2xZ2 => Structure::Z2xZ2,
            Recognized::Z3xZ3 => Structure::Z3xZ3,
            Recognized::S3 => Structure::S3,
            Recognized::None => Structure::Other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub structure: Structure,
    pub consistent: bool,
    pub sigma1: Rational,
    pub threshold: Rational,
}

/// The verdict the threshold classification assigns to a group of order `n`
/// with the given recognized structure.
pub fn predicted_verdict(structure: Structure, n: usize) -> Verdict {
    match structure {
        Structure::Cyclic => {
            let s = divisor_sum(n as u64);
            match s.cmp(&(2 * n as u64 + 4)) {
                std::cmp::Ordering::Less => Verdict::BelowThreshold,
                std::cmp::Ordering::Equal => Verdict::AtThreshold,
                std::cmp::Ordering::Greater => Verdict::AboveThreshold,
            }
        }
        Structure::Z2xZ2 => Verdict::BelowThreshold,
        Structure::Z3xZ3 | Structure::S3 => Verdict::AtThreshold,
        Structure::Other => Verdict::AboveThreshold,
    }
}

pub fn classify(g: &Group, lat: &Lattice) -> Classification {
    classify_with_profile(g, lat, &lattice::recognize(g, lat))
}

/// The verdict comes from the exact comparison alone; the structure from the
/// recognizers alone. Consistency is checked only afterwards.
pub fn classify_with_profile(g: &Group, lat: &Lattice, profile: &StructuralProfile) -> Classification {
    let sigma1 = sigma1(g, lat);
    let threshold = threshold(&BigInt::from(g.order()));
    let verdict = match sigma1.cmp(&threshold) {
        std::cmp::Ordering::Less => Verdict::BelowThreshold,
        std::cmp::Ordering::Equal => Verdict::AtThreshold,
        std::cmp::Ordering::Greater => Verdict::AboveThreshold,
    };
    let structure = Structure::from(profile.recognized_as);
    Classification {
        verdict,
        structure,
        consistent: predicted_verdict(structure, g.order()) == verdict,
        sigma1,
        threshold,
    }
}

/// Builds `∏ parts`, enumerates it and compares `σ₁(∏)` with `∏ σ₁(part)`.
pub fn check_multiplicativity(parts: &[Group], limits: &Limits) -> Result<bool> {
    let orders: Vec<usize> = parts.iter().map(Group::order).collect();
    for (i, a) in orders.iter().enumerate() {
        for b in &orders[i + 1..] {
            if num_integer::gcd(*a, *b) != 1 {
                return Err(Error::NotCoprime(orders));
            }
        }
    }
    let total: u128 = orders.iter().map(|&o| o as u128).product();
    limits.check_order(total)?;

    let mut product = Group::trivial();
    let mut expected = Rational::one();
    for part in parts {
        expected *= sigma1(part, &lattice::enumerate(part, limits)?);
        product = Group::direct_product(&product, part);
    }
    Ok(sigma1(&product, &lattice::enumerate(&product, limits)?) == expected)
}

/// `σ₁(G) ≥ σ₁(G/N)` for every normal `N` in the lattice.
pub fn check_quotient_monotonicity(g: &Group, lat: &Lattice, limits: &Limits) -> Result<bool> {
    let whole = sigma1(g, lat);
    for n in lat.subgroups() {
        if !lattice::is_normal(g, n) {
            continue;
        }
        let q = g.quotient(n)?;
        if sigma1(&q, &lattice::enumerate(&q, limits)?) > whole {
            return Ok(false);
        }
    }
    Ok(true)
}
