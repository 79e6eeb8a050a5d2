//! Declarative group descriptions and the `variant:params` mini-grammar.
//!
//! ```text
//! cyclic:12   elem:3,2   dihedral:4   sym:4   pq:3,7   pq:3,7,2
//! product:elem:2,2+cyclic:9   table:<path>   perm:<path>
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::arith::{is_prime, multiplicative_order};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::io;
use crate::perm::{self, Permutation};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    ElementaryAbelian {
        p: usize,
        k: u32,
    },
    /// Symmetries of the `n`-gon (order `2n`).
    Dihedral(usize),
    Symmetric(usize),
    /// The nonabelian group `Z_q ⋊ Z_p`; `t` defaults to the smallest
    /// `t ≥ 2` of multiplicative order `p` modulo `q`.
    SemidirectPQ {
        p: usize,
        q: usize,
        t: Option<usize>,
    },
    DirectProduct(Vec<GroupSpec>),
    RawTable(PathBuf),
    PermGenerators {
        degree: usize,
        gens: Vec<Permutation>,
    },
}

impl GroupSpec {
    /// The order of the group this spec builds, when it is known up front.
    pub fn order(&self) -> Option<u128> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n as u128),
            GroupSpec::ElementaryAbelian { p, k } => (*p as u128).checked_pow(*k),
            GroupSpec::Dihedral(n) => Some(2 * *n as u128),
            GroupSpec::Symmetric(m) => (1..=*m as u128).try_fold(1u128, |a, b| a.checked_mul(b)),
            GroupSpec::SemidirectPQ { p, q, .. } => Some(*p as u128 * *q as u128),
            GroupSpec::DirectProduct(parts) => {
                parts.iter().try_fold(1u128, |acc, s| s.order().and_then(|o| acc.checked_mul(o)))
            }
            GroupSpec::RawTable(_) | GroupSpec::PermGenerators { .. } => None,
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<Group> {
        if let Some(order) = self.order() {
            limits.check_order(order)?;
        } else if matches!(
            self,
            GroupSpec::ElementaryAbelian { .. } | GroupSpec::Symmetric(_) | GroupSpec::DirectProduct(_)
        ) {
            return Err(Error::OrderCapExceeded { order: u128::MAX, cap: limits.max_order });
        }
        let label = self.to_string();
        let group = match self {
            GroupSpec::Cyclic(n) => {
                require(*n >= 1, "cyclic order must be at least 1")?;
                Group::cyclic(*n)
            }
            GroupSpec::ElementaryAbelian { p, k } => {
                require(is_prime(*p as u64), "elementary abelian needs a prime p")?;
                Group::elementary_abelian(*p, *k)
            }
            GroupSpec::Dihedral(n) => {
                require(*n >= 1, "dihedral parameter must be at least 1")?;
                Group::dihedral(*n)
            }
            GroupSpec::Symmetric(m) => {
                require(*m >= 1, "symmetric degree must be at least 1")?;
                perm::symmetric(*m, limits)?
            }
            GroupSpec::SemidirectPQ { p, q, t } => {
                let t = semidirect_twist(*p, *q, *t)?;
                Group::semidirect_cyclic(*q, *p, t, label.clone())
            }
            GroupSpec::DirectProduct(parts) => {
                require(!parts.is_empty(), "product needs at least one factor")?;
                let mut acc = Group::trivial();
                for part in parts {
                    acc = Group::direct_product(&acc, &part.build(limits)?);
                }
                acc
            }
            GroupSpec::RawTable(path) => io::read_table_file(path, limits)?,
            GroupSpec::PermGenerators { degree, gens } => {
                perm::closure_from_generators(*degree, gens, limits)?
            }
        };
        Ok(group.with_label(label))
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidSpec(msg.into()))
    }
}

/// Checks the `Z_q ⋊ Z_p` constraints and resolves the twisting exponent.
pub fn semidirect_twist(p: usize, q: usize, t: Option<usize>) -> Result<usize> {
    require(is_prime(p as u64) && is_prime(q as u64), "pq needs primes p and q")?;
    require((q - 1).is_multiple_of(p), "pq needs p | q-1")?;
    match t {
        Some(t) => {
            require(
                multiplicative_order(t as u64 % q as u64, q as u64) == Some(p as u64),
                "t must have multiplicative order exactly p mod q",
            )?;
            Ok(t % q)
        }
        None => (2..q)
            .find(|&t| multiplicative_order(t as u64, q as u64) == Some(p as u64))
            .ok_or_else(|| Error::InvalidSpec("no element of order p mod q".into())),
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::ElementaryAbelian { p, k } => write!(f, "elem:{p},{k}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(m) => write!(f, "sym:{m}"),
            GroupSpec::SemidirectPQ { p, q, t: None } => write!(f, "pq:{p},{q}"),
            GroupSpec::SemidirectPQ { p, q, t: Some(t) } => write!(f, "pq:{p},{q},{t}"),
            GroupSpec::DirectProduct(parts) => {
                f.write_str("product:")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
            GroupSpec::RawTable(path) => write!(f, "table:{}", path.display()),
            GroupSpec::PermGenerators { degree, .. } => write!(f, "perm:<{degree}>"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, params) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("expected variant:params, got {s:?}")))?;
        let nums = |expected: &[usize]| -> Result<Vec<usize>> {
            let v = params
                .split(',')
                .map(|x| {
                    x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {x:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if expected.contains(&v.len()) {
                Ok(v)
            } else {
                Err(Error::Parse(format!("wrong number of parameters in {s:?}")))
            }
        };
        Ok(match kind {
            "cyclic" => GroupSpec::Cyclic(nums(&[1])?[0]),
            "elem" => {
                let v = nums(&[2])?;
                let k = u32::try_from(v[1]).map_err(|_| Error::Parse(format!("rank too large in {s:?}")))?;
                GroupSpec::ElementaryAbelian { p: v[0], k }
            }
            "dihedral" => GroupSpec::Dihedral(nums(&[1])?[0]),
            "sym" => GroupSpec::Symmetric(nums(&[1])?[0]),
            "pq" => {
                let v = nums(&[2, 3])?;
                GroupSpec::SemidirectPQ { p: v[0], q: v[1], t: v.get(2).copied() }
            }
            "product" => GroupSpec::DirectProduct(
                params
                    .split('+')
                    .map(|part| {
                        if part.trim_start().starts_with("product:") {
                            Err(Error::Parse("nested products are not supported".into()))
                        } else {
                            part.parse()
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
            "table" => GroupSpec::RawTable(PathBuf::from(params)),
            "perm" => {
                let (degree, gens) = io::read_perm_file(std::path::Path::new(params))?;
                GroupSpec::PermGenerators { degree, gens }
            }
            _ => return Err(Error::Parse(format!("unknown group variant {kind:?}"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "cyclic:12",
            "elem:3,2",
            "dihedral:4",
            "sym:4",
            "pq:3,7",
            "pq:3,7,2",
            "product:cyclic:4+cyclic:9",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn parse_errors() {
        for s in ["cyclic", "cyclic:x", "elem:2", "pq:1,2,3,4", "torus:3", "product:product:cyclic:2"] {
            assert!(matches!(s.parse::<GroupSpec>(), Err(Error::Parse(_))), "{s}");
        }
    }

    #[test]
    fn builds_expected_orders() {
        let lim = Limits::default();
        let cases = [
            ("cyclic:1", 1),
            ("pq:2,3", 6),
            ("elem:3,2", 9),
            ("product:elem:2,2+cyclic:9", 36),
            ("sym:4", 24),
            ("dihedral:4", 8),
        ];
        for (s, n) in cases {
            let g = s.parse::<GroupSpec>().unwrap().build(&lim).unwrap();
            assert_eq!(g.order(), n, "{s}");
            assert_eq!(g.label(), s);
        }
        let g = "product:elem:2,2+cyclic:9".parse::<GroupSpec>().unwrap().build(&lim).unwrap();
        assert!(g.is_abelian());
    }

    #[test]
    fn semidirect_constraints() {
        assert!(matches!(semidirect_twist(2, 5, None), Ok(4)));
        assert!(matches!(semidirect_twist(3, 7, None), Ok(2)));
        assert!(matches!(semidirect_twist(3, 5, None), Err(Error::InvalidSpec(_))));
        assert!(matches!(semidirect_twist(4, 5, None), Err(Error::InvalidSpec(_))));
        assert!(matches!(semidirect_twist(3, 7, Some(6)), Err(Error::InvalidSpec(_))));
        assert!(matches!(semidirect_twist(3, 7, Some(4)), Ok(4)));
    }

    #[test]
    fn order_cap_checked_before_building() {
        let lim = Limits::default();
        for s in ["cyclic:2001", "sym:7", "elem:2,11", "elem:2,200", "product:cyclic:50+cyclic:41"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert!(matches!(spec.build(&lim), Err(Error::OrderCapExceeded { .. })), "{s}");
        }
        assert!(matches!("cyclic:0".parse::<GroupSpec>().unwrap().build(&lim), Err(Error::InvalidSpec(_))));
    }
}
