//! The full subgroup lattice and the structural data read off it:
//! normality, conjugacy, normalizers, maximal and Frattini subgroups,
//! Sylow decomposition and nilpotency.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::arith::{factorize, prime_power};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::Limits;

/// A subgroup as a bit set over the parent's element indices, together with
/// a generating set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: BitSet,
    order: usize,
    generators: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_parts(members: BitSet, generators: Vec<usize>) -> Self {
        let order = members.count();
        Self { members, order, generators }
    }

    /// Wraps a member set already known to be a subgroup of `g`.
    pub fn from_members(g: &Group, members: BitSet) -> Self {
        let gens = members.iter().collect::<Vec<_>>();
        let sub = g.span(&gens);
        debug_assert_eq!(sub.members, members, "member set is not closed");
        sub
    }

    pub fn trivial(g: &Group) -> Self {
        g.span(&[])
    }

    pub fn full(g: &Group) -> Self {
        Self::from_parts(BitSet::full(g.order()), g.generators().to_vec())
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by size, then by the member bit vector.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order).then_with(|| self.members.cmp(&other.members))
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    group_order: usize,
    subgroups: Vec<Subgroup>,
    census: BTreeMap<usize, usize>,
    index: FxHashMap<BitSet, usize>,
}

impl Lattice {
    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// All subgroups in canonical order; the first is trivial, the last is the group.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Subgroup order → number of subgroups of that order.
    pub fn census(&self) -> &BTreeMap<usize, usize> {
        &self.census
    }

    pub fn position(&self, members: &BitSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn contains(&self, members: &BitSet) -> bool {
        self.index.contains_key(members)
    }

    pub fn full(&self) -> &Subgroup {
        self.subgroups.last().unwrap()
    }

    pub fn of_order(&self, order: usize) -> impl Iterator<Item = &Subgroup> {
        self.subgroups.iter().filter(move |h| h.order == order)
    }
}

/// Enumerates every subgroup of `g` exactly once.
///
/// Starts from the cyclic subgroups and repeatedly extends each known
/// subgroup `H` by one element `x ∉ H`, recording `⟨H, x⟩` when new. Every
/// subgroup is reachable this way by adding its generators one at a time.
/// For a fixed `H`, all `x` in one right coset `Hx` give the same extension,
/// so each coset is tried once.
pub fn enumerate(g: &Group, limits: &Limits) -> Result<Lattice> {
    let n = g.order();
    limits.check_order(n as u128)?;
    let mut subgroups: Vec<Subgroup> = Vec::new();
    let mut seen: FxHashSet<BitSet> = FxHashSet::default();
    let mut record = |bits: BitSet, gens: &dyn Fn() -> Vec<usize>, subgroups: &mut Vec<Subgroup>| {
        if seen.contains(&bits) {
            return Ok(());
        }
        if subgroups.len() >= limits.max_subgroups {
            return Err(Error::LatticeTooLarge { cap: limits.max_subgroups });
        }
        seen.insert(bits.clone());
        subgroups.push(Subgroup::from_parts(bits, gens()));
        Ok(())
    };

    let trivial = Subgroup::trivial(g);
    record(trivial.members.clone(), &Vec::new, &mut subgroups)?;
    for a in 1..n {
        let bits = g.extend_closure_from(&trivial.members, &[0], &[], a);
        record(bits, &|| vec![a], &mut subgroups)?;
    }

    let mut next = 0;
    while next < subgroups.len() {
        let (base, gens) = {
            let h = &subgroups[next];
            (h.members.clone(), h.generators.clone())
        };
        next += 1;
        let elems: Vec<usize> = base.iter().collect();
        if elems.len() == n {
            continue;
        }
        let mut covered = base.clone();
        for x in 0..n {
            if covered.contains(x) {
                continue;
            }
            for &h in &elems {
                covered.insert(g.mul(h, x));
            }
            let bits = g.extend_closure_from(&base, &elems, &gens, x);
            let extended = || {
                let mut v = gens.clone();
                v.push(x);
                v
            };
            record(bits, &extended, &mut subgroups)?;
        }
    }

    subgroups.sort_unstable();
    let mut census = BTreeMap::new();
    let mut index = FxHashMap::default();
    for (i, h) in subgroups.iter().enumerate() {
        *census.entry(h.order).or_insert(0) += 1;
        index.insert(h.members.clone(), i);
    }
    debug_assert!(subgroups.iter().all(|h| n.is_multiple_of(h.order)));
    Ok(Lattice { group_order: n, subgroups, census, index })
}

pub fn is_normal(g: &Group, h: &Subgroup) -> bool {
    g.generators().iter().all(|&x| h.generators.iter().all(|&s| h.contains(g.conjugate(x, s))))
}

/// `x·H·x⁻¹`
pub fn conjugate_by(g: &Group, h: &Subgroup, x: usize) -> Subgroup {
    let mut bits = BitSet::new(g.order());
    for a in h.elements() {
        bits.insert(g.conjugate(x, a));
    }
    let gens = h.generators.iter().map(|&s| g.conjugate(x, s)).collect();
    Subgroup::from_parts(bits, gens)
}

/// The distinct conjugates of `h`, in canonical order.
pub fn conjugates(g: &Group, h: &Subgroup) -> Vec<Subgroup> {
    let mut seen: FxHashSet<BitSet> = FxHashSet::default();
    seen.insert(h.members.clone());
    let mut orbit = vec![h.clone()];
    let mut i = 0;
    while i < orbit.len() {
        for &x in g.generators() {
            let c = conjugate_by(g, &orbit[i], x);
            if seen.insert(c.members.clone()) {
                orbit.push(c);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

pub fn normalizer(g: &Group, h: &Subgroup) -> Subgroup {
    let mut bits = BitSet::new(g.order());
    for x in 0..g.order() {
        if h.generators.iter().all(|&s| h.contains(g.conjugate(x, s))) {
            bits.insert(x);
        }
    }
    Subgroup::from_members(g, bits)
}

/// Subgroups `H ≠ G` with nothing strictly between `H` and `G`.
pub fn maximal_subgroups(lat: &Lattice) -> Vec<&Subgroup> {
    let n = lat.group_order;
    let mut maximal: Vec<&Subgroup> = Vec::new();
    for h in lat.subgroups.iter().rev() {
        if h.order == n {
            continue;
        }
        if !maximal.iter().any(|m| m.order > h.order && h.is_subgroup_of(m)) {
            maximal.push(h);
        }
    }
    maximal.sort_unstable();
    maximal
}

/// Intersection of all maximal subgroups; the whole group when there are none.
pub fn frattini(g: &Group, lat: &Lattice) -> Subgroup {
    let maximal = maximal_subgroups(lat);
    let mut bits = BitSet::full(g.order());
    for m in maximal {
        bits = bits.intersection(&m.members);
    }
    let pos = lat.position(&bits).expect("Frattini subgroup missing from lattice");
    lat.subgroups[pos].clone()
}

/// `k` with `|G/Φ(G)| = p^k` for a nontrivial p-group `G`.
pub fn frattini_rank(g: &Group, lat: &Lattice) -> Result<u32> {
    let (p, _) = prime_power(g.order() as u64).ok_or(Error::NotAPGroup(g.order()))?;
    let phi = frattini(g, lat);
    let quotient = g.quotient(&phi)?;
    let (qp, k) = prime_power(quotient.order() as u64).unwrap_or((p, 0));
    debug_assert_eq!(qp, p);
    if !is_cyclic(g) {
        assert!(k >= 2, "non-cyclic p-group with Frattini rank {k}");
    }
    Ok(k)
}

#[derive(Clone, Debug)]
pub enum SylowDecomposition {
    /// One normal Sylow subgroup per prime divisor, in increasing prime order.
    Nilpotent(Vec<Subgroup>),
    NotNilpotent,
}

pub fn sylow_decomposition(g: &Group, lat: &Lattice) -> SylowDecomposition {
    let n = g.order();
    let mut factors = Vec::new();
    for (p, a) in factorize(n as u64) {
        let pa = p.pow(a) as usize;
        if lat.census.get(&pa) != Some(&1) {
            return SylowDecomposition::NotNilpotent;
        }
        let sylow = lat.of_order(pa).next().unwrap();
        assert!(is_normal(g, sylow), "unique Sylow subgroup is not normal");
        factors.push(sylow.clone());
    }
    assert_eq!(factors.iter().map(Subgroup::order).product::<usize>(), n);
    SylowDecomposition::Nilpotent(factors)
}

/// Every maximal subgroup is normal. Cross-checked against the Sylow
/// criterion; disagreement panics.
pub fn is_nilpotent(g: &Group, lat: &Lattice) -> bool {
    let by_maximals = maximal_subgroups(lat).into_iter().all(|m| is_normal(g, m));
    let by_sylow = matches!(sylow_decomposition(g, lat), SylowDecomposition::Nilpotent(_));
    assert_eq!(by_maximals, by_sylow, "nilpotency criteria disagree on {}", g.label());
    by_maximals
}

pub fn is_cyclic(g: &Group) -> bool {
    let n = g.order();
    (0..n).any(|a| g.element_order(a) == n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Recognized {
    CyclicN,
    Z2xZ2,
    Z3xZ3,
    S3,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralProfile {
    pub is_cyclic: bool,
    pub is_abelian: bool,
    pub is_nilpotent: bool,
    /// The prime `p` when the group is a nontrivial p-group.
    pub p_group: Option<u64>,
    pub frattini_rank: Option<u32>,
    pub recognized_as: Recognized,
}

pub fn recognize(g: &Group, lat: &Lattice) -> StructuralProfile {
    let n = g.order();
    let is_cyclic = is_cyclic(g);
    let is_abelian = g.is_abelian();
    let p_group = prime_power(n as u64).map(|(p, _)| p);
    let frattini_rank = p_group.map(|_| frattini_rank(g, lat).expect("p-group"));
    let recognized_as = if is_cyclic {
        Recognized::CyclicN
    } else if n == 4 && g.exponent() == 2 {
        Recognized::Z2xZ2
    } else if n == 9 && g.exponent() == 3 {
        Recognized::Z3xZ3
    } else if n == 6 && !is_abelian {
        Recognized::S3
    } else {
        Recognized::None
    };
    StructuralProfile {
        is_cyclic,
        is_abelian,
        is_nilpotent: is_nilpotent(g, lat),
        p_group,
        frattini_rank,
        recognized_as,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(g: &Group) -> Lattice {
        enumerate(g, &Limits::default()).unwrap()
    }

    fn census(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    fn s3() -> Group {
        Group::semidirect_cyclic(3, 2, 2, "S3")
    }

    #[test]
    fn small_censuses() {
        assert_eq!(lat(&Group::trivial()).len(), 1);
        assert_eq!(lat(&Group::elementary_abelian(2, 2)).census(), &census(&[(1, 1), (2, 3), (4, 1)]));
        assert_eq!(lat(&s3()).census(), &census(&[(1, 1), (2, 3), (3, 1), (6, 1)]));
        let c12 = lat(&Group::cyclic(12));
        assert_eq!(c12.len(), 6);
        assert!(c12.census().values().all(|&c| c == 1));
        // D4: 1 + 5 + 3 + 1
        assert_eq!(lat(&Group::dihedral(4)).census(), &census(&[(1, 1), (2, 5), (4, 3), (8, 1)]));
    }

    #[test]
    fn canonical_order_and_ends() {
        let l = lat(&Group::dihedral(6));
        assert!(l.subgroups().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(l.subgroups()[0].order(), 1);
        assert_eq!(l.full().order(), 12);
    }

    #[test]
    fn lattice_cap() {
        let lim = Limits { max_subgroups: 10, ..Limits::default() };
        assert!(matches!(
            enumerate(&Group::elementary_abelian(2, 4), &lim),
            Err(Error::LatticeTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn normality_in_s3() {
        let g = s3();
        let l = lat(&g);
        assert!(is_normal(&g, l.full()));
        assert!(is_normal(&g, l.of_order(3).next().unwrap()));
        for h in l.of_order(2) {
            assert!(!is_normal(&g, h));
            assert_eq!(conjugates(&g, h).len(), 3);
            assert_eq!(&normalizer(&g, h), h);
        }
        assert_eq!(normalizer(&g, &l.subgroups()[0]).order(), 6);
    }

    #[test]
    fn conjugates_in_pq21() {
        let g = Group::semidirect_cyclic(7, 3, 2, "pq");
        let l = lat(&g);
        let h = l.of_order(3).next().unwrap();
        let cs = conjugates(&g, h);
        assert_eq!(cs.len(), 7);
        assert_eq!(l.census()[&3], 7);
        assert!(!is_nilpotent(&g, &l));
    }

    #[test]
    fn maximal_subgroups_examples() {
        let c12 = lat(&Group::cyclic(12));
        let orders: Vec<usize> = maximal_subgroups(&c12).iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![4, 6]);
        let s3l = lat(&s3());
        let orders: Vec<usize> = maximal_subgroups(&s3l).iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![2, 2, 2, 3]);
        let e9 = lat(&Group::elementary_abelian(3, 2));
        assert_eq!(maximal_subgroups(&e9).len(), 4);
    }

    #[test]
    fn frattini_examples() {
        for (p, k) in [(2, 3), (3, 2), (5, 2)] {
            let g = Group::elementary_abelian(p, k);
            assert_eq!(frattini(&g, &lat(&g)).order(), 1);
        }
        let c4 = Group::cyclic(4);
        assert_eq!(frattini(&c4, &lat(&c4)).order(), 2);
        let c12 = Group::cyclic(12);
        assert_eq!(frattini(&c12, &lat(&c12)).order(), 2);
        let t = Group::trivial();
        assert_eq!(frattini(&t, &lat(&t)).order(), 1);
    }

    #[test]
    fn frattini_rank_examples() {
        let c8 = Group::cyclic(8);
        assert_eq!(frattini_rank(&c8, &lat(&c8)).unwrap(), 1);
        let v4 = Group::elementary_abelian(2, 2);
        assert_eq!(frattini_rank(&v4, &lat(&v4)).unwrap(), 2);
        let d4 = Group::dihedral(4);
        assert_eq!(frattini_rank(&d4, &lat(&d4)).unwrap(), 2);
        let c6 = Group::cyclic(6);
        assert!(matches!(frattini_rank(&c6, &lat(&c6)), Err(Error::NotAPGroup(6))));
    }

    #[test]
    fn sylow_examples() {
        let orders = |g: &Group| match sylow_decomposition(g, &lat(g)) {
            SylowDecomposition::Nilpotent(f) => Some(f.iter().map(Subgroup::order).collect::<Vec<_>>()),
            SylowDecomposition::NotNilpotent => None,
        };
        assert_eq!(orders(&Group::cyclic(12)), Some(vec![4, 3]));
        assert_eq!(orders(&s3()), None);
        let g = Group::direct_product(&Group::elementary_abelian(2, 2), &Group::cyclic(9));
        assert_eq!(orders(&g), Some(vec![4, 9]));
    }

    #[test]
    fn recognizers() {
        let p = |g: &Group| recognize(g, &lat(g));
        assert_eq!(p(&Group::cyclic(6)).recognized_as, Recognized::CyclicN);
        assert_eq!(p(&s3()).recognized_as, Recognized::S3);
        assert_eq!(p(&Group::elementary_abelian(3, 2)).recognized_as, Recognized::Z3xZ3);
        let v4 = p(&Group::elementary_abelian(2, 2));
        assert_eq!(v4.recognized_as, Recognized::Z2xZ2);
        assert_eq!((v4.p_group, v4.frattini_rank), (Some(2), Some(2)));
        assert!(v4.is_nilpotent && v4.is_abelian && !v4.is_cyclic);
        assert_eq!(p(&Group::dihedral(4)).recognized_as, Recognized::None);
        assert_eq!(p(&Group::trivial()).p_group, None);
    }

    #[test]
    fn quotients() {
        let g = s3();
        let l = lat(&g);
        let q = g.quotient(l.of_order(3).next().unwrap()).unwrap();
        assert_eq!(q.order(), 2);
        q.validate().unwrap();
        let same = g.quotient(&l.subgroups()[0]).unwrap();
        assert_eq!(same.order_statistics(), g.order_statistics());
        assert_eq!(g.quotient(l.full()).unwrap().order(), 1);
        assert!(matches!(g.quotient(l.of_order(2).next().unwrap()), Err(Error::NotNormal)));
    }
}
