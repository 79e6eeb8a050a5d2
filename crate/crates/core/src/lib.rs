//! Subgroup lattices of finite groups and the subgroup-order sum
//!
//! ```text
//! σ₁(G) = Σ_{H ≤ G} |H| / |G|
//! ```
//!
//! computed exactly, classified against the threshold `2 + 4/|G|`, and
//! checked over corpora of small groups.

pub mod arith;
pub mod bitset;
pub mod corpus;
pub mod error;
pub mod families;
pub mod group;
pub mod io;
pub mod lattice;
pub mod perm;
pub mod report;
pub mod sigma;
pub mod spec;

pub use error::{Error, Result};
pub use group::Group;
pub use lattice::{Lattice, Recognized, StructuralProfile, Subgroup};
pub use report::AnalysisReport;
pub use sigma::{Classification, Structure, Verdict};
pub use spec::GroupSpec;

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub const DEFAULT_MAX_ORDER: usize = 2000;
pub const DEFAULT_MAX_SUBGROUPS: usize = 500_000;

/// Size caps applied to group construction and lattice enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub max_subgroups: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_order: DEFAULT_MAX_ORDER, max_subgroups: DEFAULT_MAX_SUBGROUPS }
    }
}

impl Limits {
    pub fn check_order(&self, order: u128) -> Result<()> {
        if order > self.max_order as u128 {
            Err(Error::OrderCapExceeded { order, cap: self.max_order })
        } else {
            Ok(())
        }
    }
}
