//! Permutation groups given by generators, turned into Cayley tables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::Limits;

/// One-line form: `images[i]` is the image of point `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation { degree, detail: format!("{images:?}") });
            }
        }
        Ok(Self { images: images.into_iter().map(|x| x as u32).collect() })
    }

    /// Builds a permutation of `0..degree` from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree || std::mem::replace(&mut moved[x], true) {
                    return Err(Error::NotAPermutation { degree, detail: format!("bad cycle {cycle:?}") });
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Parse(format!("malformed cycle notation: {text:?}")))?;
            let cycle = body
                .0
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body.1.trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self` applied first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }
}

/// Closes `gens` under composition. The identity gets index 0; the remaining
/// elements are numbered breadth-first by word length, each layer sorted by
/// one-line form. Products are "left factor acts first".
pub fn closure_from_generators(degree: usize, gens: &[Permutation], limits: &Limits) -> Result<Group> {
    if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::NotAPermutation {
            degree,
            detail: format!("generator has degree {}", bad.degree()),
        });
    }
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut frontier = 0..1;
    while !frontier.is_empty() {
        let mut layer: Vec<Permutation> = Vec::new();
        for p in &elements[frontier.clone()] {
            for g in gens {
                let q = p.then(g);
                if !index.contains_key(&q) {
                    layer.push(q);
                }
            }
        }
        layer.sort_unstable();
        layer.dedup();
        let start = elements.len();
        for q in layer {
            index.insert(q.clone(), elements.len());
            elements.push(q);
        }
        limits.check_order(elements.len() as u128)?;
        frontier = start..elements.len();
    }

    let n = elements.len();
    let mut rows = Vec::with_capacity(n);
    for a in &elements {
        rows.push(elements.iter().map(|b| index[&a.then(b)]).collect());
    }
    Group::from_table(rows, format!("perm{degree}[{n}]"), limits)
}

pub fn symmetric(m: usize, limits: &Limits) -> Result<Group> {
    let factorial: u128 = (1..=m as u128).product();
    limits.check_order(factorial)?;
    let mut gens = Vec::new();
    if m >= 2 {
        gens.push(Permutation::from_cycles(m, &[(0..m).collect()])?);
        gens.push(Permutation::from_cycles(m, &[vec![0, 1]])?);
    }
    Ok(closure_from_generators(m, &gens, limits)?.with_label(format!("S{m}")))
}
