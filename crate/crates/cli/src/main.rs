use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use subsum_core::arith::{build_sieve, scan_threshold};
use subsum_core::corpus::{self, CorpusConfig, CorpusEntry, CorpusReport};
use subsum_core::families::{convergence_report, WitnessStatus};
use subsum_core::report::{analyze, decimal};
use subsum_core::{io, lattice, Error, Group, GroupSpec, Limits};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INVALID_TABLE: u8 = 4;
const EXIT_INFRA: u8 = 5;

#[derive(Parser)]
#[command(name = "subsum", version)]
#[command(about = "Subgroup lattices and the subgroup-order sum sigma_1 of finite groups")]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Largest group order that will be constructed
    #[arg(long, global = true, default_value_t = subsum_core::DEFAULT_MAX_ORDER)]
    max_order: usize,

    /// Largest subgroup lattice that will be enumerated
    #[arg(long, global = true, default_value_t = subsum_core::DEFAULT_MAX_SUBGROUPS)]
    max_subgroups: usize,

    /// Worker threads for batch commands (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Upper bound for the prime search in `sequence` (default: 50 p ln p + 100)
    #[arg(long, global = true)]
    search_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one group: a spec such as `cyclic:12`, `pq:3,7`,
    /// `product:elem:2,2+cyclic:9`, or a table / permutation file
    Analyze {
        input: String,
        /// Leave out the timing field
        #[arg(long)]
        no_timing: bool,
    },
    /// Check the threshold classification over a corpus of groups
    Verify {
        /// Generated families to include (cyclic, elem, dihedral, pq, sym)
        #[arg(long, value_delimiter = ',', default_value = "cyclic,elem,dihedral,pq,sym")]
        families: Vec<String>,
        #[arg(long, default_value_t = 200)]
        cyclic_max: usize,
        /// Bound on p^k for elementary abelian groups
        #[arg(long, default_value_t = 256)]
        elem_max: usize,
        #[arg(long, default_value_t = 30)]
        dihedral_max: usize,
        /// Bound on pq for the nonabelian pq-groups
        #[arg(long, default_value_t = 500)]
        pq_max: usize,
        /// Include every subgroup of S_m for m up to this
        #[arg(long, default_value_t = 5)]
        sym_max: usize,
        /// Additional groups (spec strings or files)
        #[arg(long)]
        extra: Vec<String>,
        /// Keep only non-cyclic groups of prime-power order
        #[arg(long)]
        noncyclic_p_groups: bool,
    },
    /// List n <= LIMIT with sigma(n) = 2n + 4
    SigmaScan {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Tabulate the non-nilpotent pq-groups G_1..G_COUNT
    Sequence {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
    },
    /// Print the Cayley table of a group in the raw table format
    DumpTable {
        input: String,
        /// Write to this file instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    label: String,
    message: String,
}

impl Failure {
    fn new(label: &str, e: &Error) -> Self {
        Self { code: exit_code(e), label: label.to_string(), message: e.to_string() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, label: "usage".into(), message: message.into() }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidSpec(_) => EXIT_USAGE,
        Error::OrderCapExceeded { .. }
        | Error::LatticeTooLarge { .. }
        | Error::LimitTooLarge { .. }
        | Error::SearchCapExceeded { .. } => EXIT_CAP,
        Error::InvalidTable(_) | Error::NotAPermutation { .. } => EXIT_INVALID_TABLE,
        _ => EXIT_INFRA,
    }
}

/// A file path (table or permutation format) or a spec string.
fn load_group(input: &str, limits: &Limits) -> Result<Group, Error> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        if io::is_perm_format(&text) {
            let (degree, gens) = io::parse_perm_generators(&text)?;
            let g = subsum_core::perm::closure_from_generators(degree, &gens, limits)?;
            return Ok(g.with_label(input));
        }
        return io::parse_table(&text, input, limits);
    }
    input.parse::<GroupSpec>()?.build(limits)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let limits = Limits { max_order: cli.max_order, max_subgroups: cli.max_subgroups };
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Failure::usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(|e| Failure {
            code: EXIT_INFRA,
            label: "workers".into(),
            message: e.to_string(),
        })?;
    }

    match cli.command {
        Command::Analyze { input, no_timing } => {
            let g = load_group(&input, &limits).map_err(|e| Failure::new(&input, &e))?;
            let mut rep = analyze(&g, &limits).map_err(|e| Failure::new(&input, &e))?;
            if no_timing {
                rep = rep.without_timing();
            }
            if cli.json {
                print_json(&rep);
            } else {
                print!("{}", rep.to_text());
            }
            Ok(0)
        }

        Command::Verify {
            families,
            cyclic_max,
            elem_max,
            dihedral_max,
            pq_max,
            sym_max,
            extra,
            noncyclic_p_groups,
        } => {
            let mut config = CorpusConfig::empty();
            for fam in families.iter().map(|f| f.trim()).filter(|f| !f.is_empty()) {
                match fam {
                    "cyclic" => config.cyclic_max = Some(cyclic_max),
                    "elem" => config.elem_max = Some(elem_max),
                    "dihedral" => config.dihedral_max = Some(dihedral_max),
                    "pq" => config.pq_max = Some(pq_max),
                    "sym" => config.sym_max = Some(sym_max),
                    other => return Err(Failure::usage(format!("unknown family {other:?}"))),
                }
            }
            let mut entries =
                corpus::default_corpus(&config, &limits).map_err(|e| Failure::new("corpus", &e))?;
            for input in &extra {
                let g = load_group(input, &limits).map_err(|e| Failure::new(input, &e))?;
                entries.push(CorpusEntry::group(g.with_label(input.clone())));
            }
            if noncyclic_p_groups {
                entries = restrict_to_noncyclic_p_groups(entries, &limits)?;
            }
            if entries.is_empty() {
                return Err(Failure::usage("the selected corpus is empty"));
            }
            let report = corpus::verify_corpus(&entries, &limits);
            for e in report.infrastructure_errors() {
                eprintln!("{}: {}", e.label, e.error.as_deref().unwrap_or_default());
            }
            if cli.json {
                print_json(&report);
            } else {
                print_verify_text(&report);
            }
            Ok(if report.violations() > 0 {
                EXIT_VIOLATION
            } else if report.errors > 0 {
                EXIT_INFRA
            } else {
                0
            })
        }

        Command::SigmaScan { limit } => {
            let sieve = build_sieve(limit as usize).map_err(|e| Failure::new("sigma-scan", &e))?;
            let scan = scan_threshold(&sieve);
            if cli.json {
                print_json(&json!({
                    "limit": scan.limit,
                    "witnesses": scan.equal,
                    "below": scan.below,
                    "equal": scan.equal.len(),
                    "above": scan.above,
                }));
            } else {
                println!("n <= {} with sigma(n) = 2n + 4:", scan.limit);
                for n in &scan.equal {
                    println!("  {n}");
                }
                println!("below: {}  equal: {}  above: {}", scan.below, scan.equal.len(), scan.above);
            }
            Ok(0)
        }

        Command::Sequence { count } => {
            let rep = convergence_report(count as usize, &limits, cli.search_cap)
                .map_err(|e| Failure::new("sequence", &e))?;
            if cli.json {
                print_json(&rep);
            } else {
                println!(
                    "{:>4} {:>6} {:>8} {:>24} {:>16} {:>24} {:>10}",
                    "n", "p", "q", "sigma1", "~sigma1", "sigma1-2", "enumerated"
                );
                for row in &rep.rows {
                    println!(
                        "{:>4} {:>6} {:>8} {:>24} {:>16} {:>24} {:>10}",
                        row.index,
                        row.p,
                        row.q,
                        row.sigma1.to_string(),
                        row.sigma1_decimal,
                        row.excess.to_string(),
                        if row.status == WitnessStatus::Enumerated { "yes" } else { "no" },
                    );
                }
                println!(
                    "strictly decreasing over these rows: {}",
                    if rep.observed_strictly_decreasing { "yes" } else { "no" }
                );
            }
            Ok(0)
        }

        Command::DumpTable { input, output } => {
            let g = load_group(&input, &limits).map_err(|e| Failure::new(&input, &e))?;
            let text = io::format_table(&g);
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::new(&path.display().to_string(), &e.into()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn restrict_to_noncyclic_p_groups(
    entries: Vec<CorpusEntry>,
    limits: &Limits,
) -> Result<Vec<CorpusEntry>, Failure> {
    let mut kept = Vec::new();
    for entry in entries {
        let g = entry.build(limits).map_err(|e| Failure::new(&entry.label, &e))?;
        if subsum_core::arith::prime_power(g.order() as u64).is_some() && !lattice::is_cyclic(&g) {
            kept.push(CorpusEntry::group(g.with_label(entry.label)));
        }
    }
    Ok(kept)
}

fn print_verify_text(report: &CorpusReport) {
    println!("groups analyzed: {}  errors: {}", report.analyzed, report.errors);
    for check in &report.checks {
        let status = if check.failed == 0 { "PASS" } else { "FAIL" };
        println!("{status} {:<44} passed {:>5}  failed {:>3}", check.name, check.passed, check.failed);
        for label in &check.failures {
            println!("     counterexample: {label}");
        }
    }
    for (title, hits) in [("below threshold", &report.below_hits), ("at threshold", &report.at_hits)] {
        println!("{title}: {}", hits.len());
        for h in hits.iter() {
            let note = h.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default();
            println!(
                "  {:<28} order {:>4}  {:<6} sigma1 = {} (~{}){note}",
                h.label,
                h.order,
                h.structure.to_string(),
                h.sigma1,
                decimal(&h.sigma1, 12)
            );
        }
    }
    println!("violations: {}", report.violations());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}: {}", f.label, f.message);
            ExitCode::from(f.code)
        }
    }
}
