//! Finite groups stored as dense Cayley tables.
//!
//! Elements are indices `0..n` with the identity pinned at `0`. The table is
//! row-major: `table[a * n + b]` is the index of `a·b`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{self, Subgroup};
use crate::Limits;

/// Tables up to this order get a full n³ associativity scan; larger ones
/// get `10·n²` random triples.
pub const FULL_ASSOCIATIVITY_MAX: usize = 512;

const ASSOC_SAMPLE_SEED: u64 = 0x5eed_0fa5_50c0;

#[derive(Debug)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    label: String,
    generators: OnceLock<Vec<usize>>,
}

impl Clone for Group {
    fn clone(&self) -> Self {
        Self {
            order: self.order,
            table: self.table.clone(),
            inverse: self.inverse.clone(),
            label: self.label.clone(),
            generators: self.generators.clone(),
        }
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for Group {}

impl Group {
    /// Builds a group from a table known to be a group table, filling in inverses.
    fn from_trusted(order: usize, table: Vec<u32>, label: impl Into<String>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inverse[a] = row.iter().position(|&x| x == 0).expect("row without identity") as u32;
        }
        Self { order, table, inverse, label: label.into(), generators: OnceLock::new() }
    }

    /// Validates a user-supplied table: Latin square, identity at 0, inverses
    /// and associativity. Rows are products `a·b` for fixed `a`.
    pub fn from_table(rows: Vec<Vec<usize>>, label: impl Into<String>, limits: &Limits) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        limits.check_order(n as u128)?;
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range in row {a}")));
                }
                table.push(x as u32);
            }
        }
        check_latin(n, &table)?;
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(Error::InvalidTable(format!(
                    "index 0 is not the identity (fails at element {a})"
                )));
            }
        }
        check_associative(n, &table)?;
        Ok(Self::from_trusted(n, table, label))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        Self::from_trusted(n, table, format!("C{n}"))
    }

    /// `Z_q ⋊ Z_p` where the generator of `Z_p` acts on `Z_q` by `x ↦ t·x`.
    /// Elements `(x, y)` are stored at index `x + q·y` and multiply as
    /// `(x1, y1)(x2, y2) = (x1 + t^y1·x2, y1 + y2)`.
    ///
    /// Callers must ensure `t^p ≡ 1 (mod q)`.
    pub fn semidirect_cyclic(q: usize, p: usize, t: usize, label: impl Into<String>) -> Self {
        let n = q * p;
        let mut tpow = vec![1 % q; p];
        for y in 1..p {
            tpow[y] = tpow[y - 1] * t % q;
        }
        debug_assert_eq!(tpow[p - 1] * t % q, 1 % q, "t must have order dividing p");
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            let (x1, y1) = (a % q, a / q);
            for b in 0..n {
                let (x2, y2) = (b % q, b / q);
                let x = (x1 + tpow[y1] * x2) % q;
                let y = (y1 + y2) % p;
                table.push((x + q * y) as u32);
            }
        }
        Self::from_trusted(n, table, label)
    }

    /// Symmetries of the regular `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        Self::semidirect_cyclic(n, 2, n - 1, format!("D{n}"))
    }

    /// Direct product; the pair `(a, b)` is stored at `a·|B| + b`.
    pub fn direct_product(a: &Group, b: &Group) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..n {
                let (ya, yb) = (y / nb, y % nb);
                table.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32);
            }
        }
        Self::from_trusted(n, table, format!("{}x{}", a.label, b.label))
    }

    pub fn elementary_abelian(p: usize, k: u32) -> Self {
        let mut g = Self::trivial();
        for _ in 0..k {
            g = Self::direct_product(&g, &Self::cyclic(p));
        }
        g.label = format!("C{p}^{k}");
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `x·a·x⁻¹`
    #[inline]
    pub fn conjugate(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        debug_assert_eq!(self.order % k, 0);
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    /// Element order → number of elements of that order.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for a in 0..self.order {
            *out.entry(self.element_order(a)).or_insert(0) += 1;
        }
        out
    }

    /// A small generating set, found greedily in index order.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut gens = Vec::new();
            let mut span = BitSet::new(self.order);
            span.insert(0);
            for x in 0..self.order {
                if !span.contains(x) {
                    span = self.extend_closure(&span, &gens, x);
                    gens.push(x);
                }
            }
            gens
        })
    }

    /// `⟨H, x⟩` for a subgroup `H = ⟨base_gens⟩` given as a bit set.
    ///
    /// The result is built as a union of right cosets of `H`, closed under
    /// right multiplication by the generators, so each coset is touched once.
    pub(crate) fn extend_closure(&self, base: &BitSet, base_gens: &[usize], x: usize) -> BitSet {
        let base_elems: Vec<usize> = base.iter().collect();
        self.extend_closure_from(base, &base_elems, base_gens, x)
    }

    /// As [`Group::extend_closure`], with the members of `base` listed.
    pub(crate) fn extend_closure_from(
        &self,
        base: &BitSet,
        base_elems: &[usize],
        base_gens: &[usize],
        x: usize,
    ) -> BitSet {
        if base.contains(x) {
            return base.clone();
        }
        let mut span = base.clone();
        let mut reps = vec![0usize];
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            i += 1;
            for &s in base_gens.iter().chain(std::iter::once(&x)) {
                let rs = self.mul(r, s);
                if !span.contains(rs) {
                    for &h in base_elems {
                        span.insert(self.mul(h, rs));
                    }
                    reps.push(rs);
                }
            }
        }
        span
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[usize]) -> Subgroup {
        let mut bits = BitSet::new(self.order);
        bits.insert(0);
        let mut used = Vec::new();
        for &g in gens {
            if !bits.contains(g) {
                bits = self.extend_closure(&bits, &used, g);
                used.push(g);
            }
        }
        Subgroup::from_parts(bits, used)
    }

    /// The coset group `G/N`. Cosets are indexed in order of their minimal
    /// member, so the identity coset is index 0.
    pub fn quotient(&self, normal: &Subgroup) -> Result<Group> {
        if !lattice::is_normal(self, normal) {
            return Err(Error::NotNormal);
        }
        let n = self.order;
        let members: Vec<usize> = normal.members().iter().collect();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::with_capacity(n / members.len());
        for a in 0..n {
            if coset_of[a] == usize::MAX {
                let id = reps.len();
                reps.push(a);
                for &m in &members {
                    coset_of[self.mul(a, m)] = id;
                }
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &ra in &reps {
            for &rb in &reps {
                table.push(coset_of[self.mul(ra, rb)] as u32);
            }
        }
        debug_assert_eq!(m * normal.order(), n);
        Ok(Self::from_trusted(m, table, format!("{}/[{}]", self.label, normal.order())))
    }

    /// The subgroup `h` as a group in its own right, members relabelled
    /// `0..|h|` in increasing parent-index order.
    pub fn subgroup_as_group(&self, h: &Subgroup, label: impl Into<String>) -> Group {
        let members: Vec<usize> = h.members().iter().collect();
        let mut local = vec![u32::MAX; self.order];
        for (i, &m) in members.iter().enumerate() {
            local[m] = i as u32;
        }
        let table = members
            .iter()
            .flat_map(|&a| members.iter().map(move |&b| (a, b)))
            .map(|(a, b)| local[self.mul(a, b)])
            .collect();
        Self::from_trusted(members.len(), table, label)
    }

    /// Re-runs the full validation used for user tables.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        check_latin(n, &self.table)?;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidTable("identity law fails".into()));
            }
            if self.mul(a, self.inv(a)) != 0 {
                return Err(Error::InvalidTable(format!("bad inverse for {a}")));
            }
        }
        check_associative(n, &self.table)
    }
}

fn check_latin(n: usize, table: &[u32]) -> Result<()> {
    let mut seen = vec![0usize; n];
    for a in 0..n {
        for b in 0..n {
            let x = table[a * n + b] as usize;
            if seen[x] == a + 1 {
                return Err(Error::InvalidTable(format!("row {a} repeats {x}")));
            }
            seen[x] = a + 1;
        }
    }
    seen.iter_mut().for_each(|s| *s = 0);
    for b in 0..n {
        for a in 0..n {
            let x = table[a * n + b] as usize;
            if seen[x] == b + 1 {
                return Err(Error::InvalidTable(format!("column {b} repeats {x}")));
            }
            seen[x] = b + 1;
        }
    }
    Ok(())
}

fn check_associative(n: usize, table: &[u32]) -> Result<()> {
    let m = |a: usize, b: usize| table[a * n + b] as usize;
    let fail = |a, b, c| Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
    if n <= FULL_ASSOCIATIVITY_MAX {
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return fail(a, b, c);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SAMPLE_SEED);
        for _ in 0..10 * n * n {
            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if m(m(a, b), c) != m(a, m(b, c)) {
                return fail(a, b, c);
            }
        }
    }
    Ok(())
}
