//! Text formats for groups.
//!
//! Raw table: first line `n`, then `n` rows of `n` space-separated indices
//! (row `a` lists `a·b`), identity at index 0.
//!
//! Permutation generators: first line `perm <degree>`, then one generator
//! per line in disjoint-cycle notation, fixed points omitted.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Permutation;
use crate::Limits;

pub fn parse_table(text: &str, label: &str, limits: &Limits) -> Result<Group> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::InvalidTable("empty file".into()))?;
    let n: usize = header.parse().map_err(|_| Error::InvalidTable(format!("bad order line {header:?}")))?;
    limits.check_order(n as u128)?;
    let mut rows = Vec::with_capacity(n);
    for line in lines {
        let row = line
            .split_whitespace()
            .map(|x| x.parse::<usize>().map_err(|_| Error::InvalidTable(format!("bad entry {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::InvalidTable(format!("expected {n} rows, found {}", rows.len())));
    }
    Group::from_table(rows, label, limits)
}

pub fn read_table_file(path: &Path, limits: &Limits) -> Result<Group> {
    let text = std::fs::read_to_string(path)?;
    parse_table(&text, &path.display().to_string(), limits)
}

pub fn format_table(g: &Group) -> String {
    let n = g.order();
    let mut out = String::with_capacity(n * n * 4);
    writeln!(out, "{n}").unwrap();
    for a in 0..n {
        let row = g.row(a);
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{x}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_perm_generators(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty permutation file".into()))?;
    let degree = header
        .strip_prefix("perm")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("expected `perm <degree>`, got {header:?}")))?;
    let gens = lines.map(|l| Permutation::parse_cycles(degree, l)).collect::<Result<Vec<_>>>()?;
    Ok((degree, gens))
}

pub fn read_perm_file(path: &Path) -> Result<(usize, Vec<Permutation>)> {
    parse_perm_generators(&std::fs::read_to_string(path)?)
}

/// True if `text` looks like a permutation-generator file.
pub fn is_perm_format(text: &str) -> bool {
    text.lines().map(str::trim).find(|l| !l.is_empty()).is_some_and(|l| l.starts_with("perm"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::closure_from_generators;

    #[test]
    fn table_round_trip() {
        let lim = Limits::default();
        let g = Group::dihedral(5);
        let text = format_table(&g);
        assert!(text.starts_with("10\n0 1 2"));
        let back = parse_table(&text, "d5", &lim).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn table_errors() {
        let lim = Limits::default();
        assert!(matches!(parse_table("", "x", &lim), Err(Error::InvalidTable(_))));
        assert!(matches!(parse_table("2\n0 1\n", "x", &lim), Err(Error::InvalidTable(_))));
        assert!(matches!(parse_table("2\n0 1\n1 a\n", "x", &lim), Err(Error::InvalidTable(_))));
        assert!(matches!(parse_table("2\n0 1\n1 2\n", "x", &lim), Err(Error::InvalidTable(_))));
        assert!(matches!(parse_table("3000\n", "x", &lim), Err(Error::OrderCapExceeded { .. })));
    }

    #[test]
    fn perm_file() {
        let text = "perm 5\n(0 1 2 3 4)\n(1 4)(2 3)\n";
        assert!(is_perm_format(text));
        let (degree, gens) = parse_perm_generators(text).unwrap();
        assert_eq!(degree, 5);
        let g = closure_from_generators(degree, &gens, &Limits::default()).unwrap();
        assert_eq!(g.order(), 10);
        assert!(matches!(parse_perm_generators("perm x\n"), Err(Error::Parse(_))));
    }
}
