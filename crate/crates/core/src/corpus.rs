//! Corpus generation and the batch verification of the threshold
//! classification and its companion properties.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, prime_power};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::lattice::{self, Lattice, Recognized};
use crate::report::{self, AnalysisReport};
use crate::sigma::{Structure, Verdict};
use crate::spec::GroupSpec;
use crate::{Limits, Rational};

#[derive(Clone, Debug)]
pub enum EntrySource {
    Spec(GroupSpec),
    Group(Group),
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub label: String,
    pub source: EntrySource,
}

impl CorpusEntry {
    pub fn spec(spec: GroupSpec) -> Self {
        Self { label: spec.to_string(), source: EntrySource::Spec(spec) }
    }

    pub fn group(g: Group) -> Self {
        Self { label: g.label().to_string(), source: EntrySource::Group(g) }
    }

    pub fn build(&self, limits: &Limits) -> Result<Group> {
        match &self.source {
            EntrySource::Spec(s) => Ok(s.build(limits)?.with_label(self.label.clone())),
            EntrySource::Group(g) => Ok(g.clone()),
        }
    }
}

/// Bounds for the generated families; `None` drops a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub cyclic_max: Option<usize>,
    /// Elementary abelian `Z_p^k` with `p^k` at most this.
    pub elem_max: Option<usize>,
    pub dihedral_max: Option<usize>,
    /// Nonabelian `Z_q ⋊ Z_p` with `pq` at most this.
    pub pq_max: Option<usize>,
    /// Every subgroup of `S_m`, `m` up to this, as a group of its own.
    pub sym_max: Option<usize>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            cyclic_max: Some(200),
            elem_max: Some(256),
            dihedral_max: Some(30),
            pq_max: Some(500),
            sym_max: Some(5),
        }
    }
}

impl CorpusConfig {
    pub fn empty() -> Self {
        Self { cyclic_max: None, elem_max: None, dihedral_max: None, pq_max: None, sym_max: None }
    }
}

/// Isomorphism invariants used to drop obvious duplicates. Distinct groups
/// may collide; that only costs a skipped entry of an already-seen shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    pub element_orders: BTreeMap<usize, usize>,
    pub census: BTreeMap<usize, usize>,
}

pub fn fingerprint(g: &Group, lat: &Lattice) -> Fingerprint {
    Fingerprint {
        order: g.order(),
        abelian: g.is_abelian(),
        element_orders: g.order_statistics(),
        census: lat.census().clone(),
    }
}

pub fn pq_pairs(max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in (2..=max).filter(|&p| is_prime(p as u64)) {
        for q in (p + 1..=max / p).filter(|&q| is_prime(q as u64)) {
            if (q - 1) % p == 0 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Pairwise non-isomorphic (by fingerprint) subgroups of `S_1 … S_max`.
pub fn symmetric_subgroups(max: usize, limits: &Limits) -> Result<Vec<Group>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in 1..=max {
        let sm = crate::perm::symmetric(m, limits)?;
        let lat = lattice::enumerate(&sm, limits)?;
        for (i, h) in lat.subgroups().iter().enumerate() {
            let g = sm.subgroup_as_group(h, format!("sub(sym:{m})#{i}"));
            let fp = fingerprint(&g, &lattice::enumerate(&g, limits)?);
            if seen.insert(fp) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

pub fn default_corpus(config: &CorpusConfig, limits: &Limits) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    if let Some(max) = config.cyclic_max {
        out.extend((1..=max).map(|n| CorpusEntry::spec(GroupSpec::Cyclic(n))));
    }
    if let Some(max) = config.elem_max {
        for p in (2..=max).filter(|&p| is_prime(p as u64)) {
            let mut k = 1u32;
            while p.pow(k) <= max {
                out.push(CorpusEntry::spec(GroupSpec::ElementaryAbelian { p, k }));
                k += 1;
            }
        }
    }
    if let Some(max) = config.dihedral_max {
        out.extend((1..=max).map(|n| CorpusEntry::spec(GroupSpec::Dihedral(n))));
    }
    if let Some(max) = config.pq_max {
        out.extend(
            pq_pairs(max)
                .into_iter()
                .map(|(p, q)| CorpusEntry::spec(GroupSpec::SemidirectPQ { p, q, t: None })),
        );
    }
    if let Some(max) = config.sym_max {
        out.extend(symmetric_subgroups(max, limits)?.into_iter().map(CorpusEntry::group));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub error_kind: Option<ErrorClass>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ErrorClass {
    CapExceeded,
    InvalidInput,
    Other,
}

fn error_class(e: &Error) -> ErrorClass {
    match e {
        Error::OrderCapExceeded { .. } | Error::LatticeTooLarge { .. } => ErrorClass::CapExceeded,
        Error::InvalidSpec(_) | Error::InvalidTable(_) | Error::Parse(_) | Error::NotAPermutation { .. } => {
            ErrorClass::InvalidInput
        }
        _ => ErrorClass::Other,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl CheckSummary {
    fn new(name: &str) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    fn record(&mut self, ok: bool, label: &str) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(label.to_string());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Hit {
    pub label: String,
    pub order: usize,
    pub structure: Structure,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma1: Rational,
    /// Set on cyclic hits: these come from the divisor-sum search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryOutcome>,
    pub analyzed: usize,
    pub errors: usize,
    pub checks: Vec<CheckSummary>,
    pub below_hits: Vec<Hit>,
    pub at_hits: Vec<Hit>,
}

impl CorpusReport {
    /// Total failures across all property checks.
    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Reports whose groups are recognised as one of the named structures
    /// at the threshold, as `(structure, order)` pairs.
    pub fn at_threshold_types(&self) -> BTreeSet<(Structure, usize)> {
        self.at_hits.iter().map(|h| (h.structure, h.order)).collect()
    }

    pub fn infrastructure_errors(&self) -> impl Iterator<Item = &EntryOutcome> {
        self.entries.iter().filter(|e| e.error.is_some())
    }
}

pub const CHECK_CLASSIFICATION: &str = "threshold-classification";
pub const CHECK_NONCYCLIC_STRUCTURES: &str = "unique-noncyclic-below-and-nonabelian-at";
pub const CHECK_NILPOTENT: &str = "below-nilpotent-at-nilpotent-or-s3";
pub const CHECK_PGROUP: &str = "noncyclic-p-groups";
pub const CHECK_SIGMA_AT_MOST_TWO: &str = "sigma1-at-most-2-is-cyclic";

/// Analyzes every entry (in parallel) and evaluates the classification and
/// its companion properties on each. Per-entry failures are isolated.
pub fn verify_corpus(entries: &[CorpusEntry], limits: &Limits) -> CorpusReport {
    let outcomes: Vec<EntryOutcome> = entries
        .par_iter()
        .map(|entry| match entry.build(limits).and_then(|g| report::analyze(&g, limits)) {
            Ok(rep) => EntryOutcome {
                label: entry.label.clone(),
                report: Some(rep.without_timing()),
                error: None,
                error_kind: None,
            },
            Err(e) => EntryOutcome {
                label: entry.label.clone(),
                report: None,
                error_kind: Some(error_class(&e)),
                error: Some(e.to_string()),
            },
        })
        .collect();

    let mut classification = CheckSummary::new(CHECK_CLASSIFICATION);
    let mut structures = CheckSummary::new(CHECK_NONCYCLIC_STRUCTURES);
    let mut nilpotent = CheckSummary::new(CHECK_NILPOTENT);
    let mut pgroup = CheckSummary::new(CHECK_PGROUP);
    let mut at_most_two = CheckSummary::new(CHECK_SIGMA_AT_MOST_TWO);
    let mut below_hits = Vec::new();
    let mut at_hits = Vec::new();
    let two = Rational::from_integer(2.into());

    for out in &outcomes {
        let Some(rep) = &out.report else { continue };
        let prof = &rep.profile;
        classification.record(rep.consistent, &rep.label);

        let hit = || Hit {
            label: rep.label.clone(),
            order: rep.order,
            structure: rep.structure,
            sigma1: rep.sigma1.clone(),
            note: (rep.structure == Structure::Cyclic)
                .then(|| "cyclic witness found by divisor-sum search".to_string()),
        };
        match rep.verdict {
            Verdict::BelowThreshold => {
                structures.record(prof.is_cyclic || prof.recognized_as == Recognized::Z2xZ2, &rep.label);
                nilpotent.record(prof.is_nilpotent, &rep.label);
                below_hits.push(hit());
            }
            Verdict::AtThreshold => {
                structures.record(prof.is_abelian || prof.recognized_as == Recognized::S3, &rep.label);
                nilpotent.record(prof.is_nilpotent || prof.recognized_as == Recognized::S3, &rep.label);
                at_hits.push(hit());
            }
            Verdict::AboveThreshold => {}
        }
        if prime_power(rep.order as u64).is_some() && !prof.is_cyclic {
            let ok = match rep.verdict {
                Verdict::BelowThreshold => prof.recognized_as == Recognized::Z2xZ2,
                Verdict::AtThreshold => prof.recognized_as == Recognized::Z3xZ3,
                Verdict::AboveThreshold => true,
            };
            pgroup.record(ok, &rep.label);
        }
        if rep.sigma1 <= two {
            at_most_two.record(prof.is_cyclic, &rep.label);
        }
    }

    let errors = outcomes.iter().filter(|o| o.error.is_some()).count();
    CorpusReport {
        analyzed: outcomes.len() - errors,
        errors,
        entries: outcomes,
        checks: vec![classification, structures, nilpotent, pgroup, at_most_two],
        below_hits,
        at_hits,
    }
}
