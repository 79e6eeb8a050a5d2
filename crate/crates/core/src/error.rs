use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("group order {order} exceeds the order cap {cap}")]
    OrderCapExceeded { order: u128, cap: usize },

    #[error("not a permutation of 0..{degree}: {detail}")]
    NotAPermutation { degree: usize, detail: String },

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("subgroup lattice has more than {cap} subgroups")]
    LatticeTooLarge { cap: usize },

    #[error("group of order {0} is not a p-group")]
    NotAPGroup(usize),

    #[error("factor orders are not pairwise coprime: {0:?}")]
    NotCoprime(Vec<usize>),

    #[error("no prime q <= {cap} with q = 1 mod {p}")]
    SearchCapExceeded { p: u64, cap: u64 },

    #[error("sieve limit {limit} exceeds the supported maximum {max}")]
    LimitTooLarge { limit: usize, max: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
