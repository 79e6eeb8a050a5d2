//! Divisor sums, Gaussian binomials and the scalar inequalities behind the
//! threshold classification.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Largest sieve the library will allocate (about 16 bytes per entry).
pub const MAX_SIEVE_LIMIT: usize = 20_000_000;

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least `k ≥ 1` with `a^k ≡ 1 (mod m)`, or `None` when `gcd(a, m) ≠ 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    Some(k)
}

/// The `n`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1);
    (2u64..).filter(|&x| is_prime(x)).nth(n - 1).unwrap()
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `σ(n)` from the factorisation of `n`.
pub fn divisor_sum(n: u64) -> u64 {
    assert!(n >= 1);
    factorize(n).into_iter().map(|(p, e)| (p.pow(e + 1) - 1) / (p - 1)).product()
}

/// `(p, a)` when `n = p^a` with `a ≥ 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, a)] => Some((*p, *a)),
        _ => None,
    }
}

/// `σ(n)` for every `1 ≤ n ≤ limit`.
#[derive(Clone, Debug)]
pub struct SigmaSieve {
    limit: usize,
    sigma: Vec<u64>,
}

/// Builds the table through smallest prime factors: writing `n = p^e·m`
/// with `p = spf(n)` and `p ∤ m`, `σ(n) = σ(p^e)·σ(m)`.
pub fn build_sieve(limit: usize) -> Result<SigmaSieve> {
    if limit == 0 {
        return Err(Error::InvalidSpec("sieve limit must be at least 1".into()));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::LimitTooLarge { limit, max: MAX_SIEVE_LIMIT });
    }
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if p > spf[i] || ip > limit {
                break;
            }
            spf[ip] = p;
        }
    }
    // prime_part[n] = p^e, the full power of spf(n) dividing n.
    let mut prime_part = vec![1u32; limit + 1];
    let mut sigma = vec![0u64; limit + 1];
    sigma[1] = 1;
    for n in 2..=limit {
        let p = spf[n] as usize;
        let m = n / p;
        prime_part[n] = if spf[m] as usize == p { prime_part[m] * p as u32 } else { p as u32 };
        let pe = prime_part[n] as usize;
        sigma[n] = if pe == n {
            let p = p as u64;
            (p * pe as u64 - 1) / (p - 1)
        } else {
            sigma[pe] * sigma[n / pe]
        };
    }
    Ok(SigmaSieve { limit, sigma })
}

impl SigmaSieve {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn sigma(&self, n: usize) -> u64 {
        assert!((1..=self.limit).contains(&n), "{n} outside sieve range");
        self.sigma[n]
    }

    pub fn sigma_big(&self, n: usize) -> BigUint {
        BigUint::from(self.sigma(n))
    }
}

/// Split of `1..=limit` by the sign of `σ(n) − (2n + 4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdScan {
    pub limit: usize,
    pub below: usize,
    pub equal: Vec<u64>,
    pub above: usize,
}

pub fn scan_threshold(sieve: &SigmaSieve) -> ThresholdScan {
    let mut scan = ThresholdScan { limit: sieve.limit, below: 0, equal: Vec::new(), above: 0 };
    for n in 1..=sieve.limit {
        let target = 2 * n as u64 + 4;
        match sieve.sigma(n).cmp(&target) {
            std::cmp::Ordering::Less => scan.below += 1,
            std::cmp::Ordering::Equal => scan.equal.push(n as u64),
            std::cmp::Ordering::Greater => scan.above += 1,
        }
    }
    scan
}

/// Number of subgroups of order `p^i` in `Z_p^k` (the Gaussian binomial
/// `[k choose i]_p`).
///
/// Uses `[k, j+1] = [k, j]·(p^(k−j) − 1)/(p^(j+1) − 1)`, so every
/// intermediate value is itself a Gaussian binomial and each division is exact.
pub fn gaussian_subgroup_count(k: u32, p: u64, i: u32) -> BigUint {
    assert!(i <= k, "subgroup rank {i} exceeds ambient rank {k}");
    assert!(p >= 2);
    let p = BigUint::from(p);
    let one = BigUint::one();
    let mut acc = BigUint::one();
    for j in 0..i {
        acc *= p.pow(k - j) - &one;
        let (q, r) = acc.div_rem(&(p.pow(j + 1) - &one));
        assert!(r.is_zero(), "inexact Gaussian binomial step");
        acc = q;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPartScan {
    pub limit: usize,
    pub checked: usize,
    /// Odd `n' > 1` with `11σ(n') ≤ 8n' + 4`.
    pub violations: Vec<u64>,
}

/// Checks `11σ(n') > 8n' + 4` for every odd `1 < n' ≤ limit`. `n' = 1` is
/// the bare `Z_2 × Z_2` case and is not part of the scan.
pub fn odd_part_inequality_scan(sieve: &SigmaSieve) -> OddPartScan {
    let mut scan = OddPartScan { limit: sieve.limit, checked: 0, violations: Vec::new() };
    for n in (3..=sieve.limit).step_by(2) {
        scan.checked += 1;
        if 11 * sieve.sigma(n) <= 8 * n as u64 + 4 {
            scan.violations.push(n as u64);
        }
    }
    scan
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PGroupBoundBranch {
    /// `k ≥ 3`: only the layers of order `p^(n−k)`, `p^(n−k+1)`, `p^(n−1)`, `p^n` are counted.
    RankAtLeastThree,
    /// `k = 2`, `n > 2`: the trivial subgroup, `p + 1` maximals, `Φ(G)` and `G`.
    RankTwoLarge,
    /// `k = n = 2`: the exact value for `Z_p × Z_p`.
    RankTwoSquare,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGroupBoundCheck {
    pub branch: PGroupBoundBranch,
    pub lower_bound: Rational,
    pub threshold: Rational,
    /// `lower_bound > threshold`, i.e. a group of this shape cannot sit at or
    /// below the threshold.
    pub exceeds: bool,
}

/// Evaluates the lower bound for `σ_1` of a non-cyclic group of order `p^n`
/// with Frattini quotient of rank `k`, against `2 + 4/p^n`.
pub fn pgroup_bound_check(p: u64, n: u32, k: u32) -> PGroupBoundCheck {
    assert!(k >= 2 && n >= k, "need 2 <= k <= n");
    let pb = |e: u32| BigUint::from(p).pow(e);
    let order = pb(n);
    let (branch, bound) = if k >= 3 {
        let layer = (pb(k) - 1u32) / (p - 1);
        let num = BigUint::one() + &layer * p + &layer * pb(k - 1) + pb(k);
        (PGroupBoundBranch::RankAtLeastThree, Rational::new(num.into(), pb(k).into()))
    } else if n > 2 {
        let num = BigUint::one() + pb(n - 1) * (p + 1) + pb(n - 2) + &order;
        (PGroupBoundBranch::RankTwoLarge, Rational::new(num.into(), order.clone().into()))
    } else {
        // Φ(G) is trivial here, so it is not counted twice.
        let num = BigUint::one() + BigUint::from(p) * (p + 1) + &order;
        (PGroupBoundBranch::RankTwoSquare, Rational::new(num.into(), order.clone().into()))
    };
    let threshold = crate::sigma::threshold(&order.into());
    PGroupBoundCheck { branch, exceeds: bound > threshold, lower_bound: bound, threshold }
}
