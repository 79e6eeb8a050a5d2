//! Per-group analysis report and its serialized form.
//!
//! Rationals serialize as `{"numerator": "..", "denominator": ".."}` with
//! decimal strings, never floats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::group::Group;
use crate::lattice::{self, StructuralProfile};
use crate::sigma::{self, Structure, Verdict};
use crate::{Limits, Rational};

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("numerator", &r.numer().to_string())?;
    st.serialize_field("denominator", &r.denom().to_string())?;
    st.end()
}

fn ser_rational_with_decimal<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 3)?;
    st.serialize_field("numerator", &r.numer().to_string())?;
    st.serialize_field("denominator", &r.denom().to_string())?;
    st.serialize_field("decimal", &decimal(r, 12))?;
    st.end()
}

/// Fixed-point rendering with `digits` places, rounding half to even.
pub fn decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let mut whole = scaled.floor().to_integer();
    let frac = scaled.fract();
    let half = Rational::new(1.into(), 2.into());
    if frac > half || (frac == half && whole.is_odd()) {
        whole += 1;
    }
    let (int_part, frac_part) = whole.div_rem(&scale);
    let mut out = String::new();
    if r.is_negative() && !(int_part.is_zero() && frac_part.is_zero()) {
        out.push('-');
    }
    write!(out, "{int_part}").unwrap();
    if digits > 0 {
        write!(out, ".{:0>width$}", frac_part.to_string(), width = digits as usize).unwrap();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub label: String,
    pub order: usize,
    pub subgroup_count: usize,
    /// Subgroup order → number of subgroups, ascending.
    pub census: BTreeMap<usize, usize>,
    #[serde(serialize_with = "ser_rational_with_decimal")]
    pub sigma1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub threshold: Rational,
    pub verdict: Verdict,
    pub structure: Structure,
    pub profile: StructuralProfile,
    #[serde(rename = "theorem1_consistent")]
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Enumerates the lattice of `g` and fills in every report field.
pub fn analyze(g: &Group, limits: &Limits) -> Result<AnalysisReport> {
    let start = Instant::now();
    let lat = lattice::enumerate(g, limits)?;
    let profile = lattice::recognize(g, &lat);
    let class = sigma::classify_with_profile(g, &lat, &profile);
    Ok(AnalysisReport {
        label: g.label().to_string(),
        order: g.order(),
        subgroup_count: lat.len(),
        census: lat.census().clone(),
        sigma1: class.sigma1,
        threshold: class.threshold,
        verdict: class.verdict,
        structure: class.structure,
        profile,
        consistent: class.consistent,
        timing_ms: Some(start.elapsed().as_millis() as u64),
    })
}

impl AnalysisReport {
    pub fn without_timing(mut self) -> Self {
        self.timing_ms = None;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.profile;
        writeln!(out, "group:        {}", self.label).unwrap();
        writeln!(out, "order:        {}", self.order).unwrap();
        writeln!(out, "subgroups:    {}", self.subgroup_count).unwrap();
        let census: Vec<String> = self.census.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        writeln!(out, "census:       {{{}}}", census.join(", ")).unwrap();
        writeln!(out, "sigma1:       {}  (~{})", self.sigma1, decimal(&self.sigma1, 12)).unwrap();
        writeln!(out, "threshold:    {}", self.threshold).unwrap();
        writeln!(out, "verdict:      {}", self.verdict).unwrap();
        writeln!(out, "structure:    {}", self.structure).unwrap();
        writeln!(
            out,
            "flags:        cyclic={} abelian={} nilpotent={} p-group={} frattini-rank={}",
            p.is_cyclic,
            p.is_abelian,
            p.is_nilpotent,
            p.p_group.map_or("no".to_string(), |q| q.to_string()),
            p.frattini_rank.map_or("-".to_string(), |k| k.to_string()),
        )
        .unwrap();
        writeln!(out, "recognized:   {:?}", p.recognized_as).unwrap();
        writeln!(out, "consistent:   {}", self.consistent).unwrap();
        if let Some(ms) = self.timing_ms {
            writeln!(out, "time:         {ms} ms").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&r(8, 3), 12), "2.666666666667");
        assert_eq!(decimal(&r(2, 1), 12), "2.000000000000");
        assert_eq!(decimal(&r(1, 8), 2), "0.12"); // 12.5 → 12
        assert_eq!(decimal(&r(3, 8), 2), "0.38"); // 37.5 → 38
        assert_eq!(decimal(&r(-1, 3), 3), "-0.333");
        assert_eq!(decimal(&r(7, 2), 0), "4");
    }

    #[test]
    fn report_fields() {
        let rep = analyze(&Group::dihedral(4), &Limits::default()).unwrap();
        assert_eq!(rep.subgroup_count, 10);
        assert_eq!(rep.census.values().sum::<usize>(), rep.subgroup_count);
        assert_eq!(rep.sigma1, r(31, 8));
        assert_eq!(rep.verdict, Verdict::AboveThreshold);
        assert!(rep.to_text().contains("sigma1:       31/8"));
    }
}
