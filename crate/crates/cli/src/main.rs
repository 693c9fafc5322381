//! `permclosure` command-line tool.
//!
//! Exit codes: 0 ok, 1 parse or input error, 2 not a permutation automaton,
//! 3 phases did not stabilize, 4 inequivalent (or oracle mismatch),
//! 5 budget exceeded, 6 internal error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use permclosure::decomposition::{build_family, default_step_budget, group_property_report};
use permclosure::io::{chain_dot, dfa_from_json, dfa_to_json, grid_dot, grid_tsv};
use permclosure::oracle::{verify_closure, Verification, VerifyOptions, DEFAULT_SEED};
use permclosure::{
    build_closure, closure::unstable_report, equivalent, group_bound, jfa_to_dfa, minimize,
    sigma_grid, ClosureOptions, Dfa, Equivalence, Error, GridBox,
};

#[derive(Parser)]
#[command(name = "permclosure", version, about = "Commutative closures of regular languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Tsv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainFormat {
    Table,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Letter permutation status, cycles, orders and the size bound.
    Check { path: PathBuf },
    /// Dump the state-label grid over a box.
    Labels {
        path: PathBuf,
        /// Extent per axis, comma separated; a single value applies to all axes.
        #[arg(long, default_value = "5")]
        extent: String,
        #[arg(long, value_enum, default_value = "tsv")]
        format: GridFormat,
    },
    /// Build a DFA for the commutative closure.
    Closure {
        path: PathBuf,
        /// Keep the unminimized phase automaton.
        #[arg(long)]
        raw: bool,
        /// Per-axis extent of the explored box for non-permutation input.
        #[arg(long)]
        budget: Option<usize>,
        /// Write the DFA here; the report then goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Unary chain automata along one axis.
    Decompose {
        path: PathBuf,
        /// Axis as a 1-based index or a letter name.
        #[arg(long)]
        axis: String,
        /// Extents of the other axes, comma separated; a single value applies to all.
        #[arg(long, default_value = "4")]
        region: String,
        #[arg(long, value_enum, default_value = "table")]
        format: ChainFormat,
        /// Write one DOT file per base point into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Language equivalence of two DFAs over the same alphabet.
    Equiv { a: PathBuf, b: PathBuf },
    /// Compare a candidate against the brute-force closure of a source.
    ///
    /// With one path the candidate is built from it by the closure pipeline.
    OracleCheck {
        /// Candidate DFA, or the source when no second path is given.
        candidate: PathBuf,
        source: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, env = "PERMCLOSURE_SEED", value_parser = parse_seed)]
        seed: Option<u64>,
    },
    /// Minimal equivalent DFA.
    Minimize {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DFA for the language of a permutation automaton read as a jumping automaton.
    Jfa2dfa {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::InvalidDfa(_)
            | Error::UnknownSymbol(_)
            | Error::UnknownLetter(_)
            | Error::AlphabetMismatch(..)
            | Error::RegionMismatch(_)
            | Error::TooManyStates(_) => 1,
            Error::NotPermutation(_) | Error::NotPermutationAutomaton => 2,
            Error::NotStabilized(_) => 3,
            Error::BoxTooLarge { .. }
            | Error::BudgetExceeded(_)
            | Error::StateBudgetExceeded { .. }
            | Error::LengthExceeded { .. } => 5,
            _ => 6,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    // usage errors share the parse exit code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { path } => check(&load(&path)?),
        Command::Labels { path, extent, format } => labels(&load(&path)?, &extent, format),
        Command::Closure { path, raw, budget, out, report } => {
            closure(&load(&path)?, raw, budget, out.as_deref(), report.as_deref())
        }
        Command::Decompose { path, axis, region, format, out_dir, steps } => {
            decompose(&load(&path)?, &axis, &region, format, out_dir.as_deref(), steps)
        }
        Command::Equiv { a, b } => equiv(&load(&a)?, &load(&b)?),
        Command::OracleCheck { candidate, source, max_len, seed } => {
            let first = load(&candidate)?;
            let (candidate, source) = match source {
                Some(p) => (first, load(&p)?),
                None => (build_closure(&first, &ClosureOptions::default())?.dfa, first),
            };
            oracle_check(&candidate, &source, max_len, seed.unwrap_or(DEFAULT_SEED))
        }
        Command::Minimize { path, out } => emit_dfa(&minimize(&load(&path)?), out.as_deref()),
        Command::Jfa2dfa { path, out } => emit_dfa(&jfa_to_dfa(&load(&path)?)?, out.as_deref()),
    }
}

fn load(path: &Path) -> Result<Dfa, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    dfa_from_json(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure { code: 6, message: format!("cannot write {}: {e}", path.display()) })
}

fn emit_dfa(d: &Dfa, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => write_file(p, &dfa_to_json(d))?,
        None => print!("{}", dfa_to_json(d)),
    }
    Ok(0)
}

/// Parses `5` or `5,3,2`; a single value is repeated `dims` times.
fn extents(text: &str, dims: usize) -> Result<Vec<usize>, Failure> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input_error(format!("invalid extents `{text}`: {e}")))?;
    match values.len() {
        1 => Ok(vec![values[0]; dims]),
        n if n == dims => Ok(values),
        n => Err(input_error(format!("expected 1 or {dims} extents, got {n}"))),
    }
}

fn check(d: &Dfa) -> Outcome {
    println!("states: {}, letters: {}", d.state_count(), d.letter_count());
    let mut orders = Vec::new();
    for j in 0..d.letter_count() {
        let name = &d.alphabet()[j];
        match d.cycle_structure(j) {
            Ok(cs) => {
                let cycles: String = cs
                    .cycles
                    .iter()
                    .map(|c| {
                        let states: Vec<String> = c.iter().map(|s| format!("s{s}")).collect();
                        format!("({})", states.join(" "))
                    })
                    .collect();
                println!("letter {name}: permutation {cycles}, order {}", cs.order);
                orders.push(cs.order);
            }
            Err(Error::NotPermutation(_)) => println!("letter {name}: not a permutation"),
            Err(e) => return Err(e.into()),
        }
    }
    if orders.len() < d.letter_count() {
        return Ok(2);
    }
    let mut line = String::new();
    for (j, l) in orders.iter().enumerate() {
        write!(line, "L_{}={l} ", j + 1).unwrap();
    }
    println!("{line}bound={}", group_bound(d)?);
    Ok(0)
}

fn labels(d: &Dfa, extent: &str, format: GridFormat) -> Outcome {
    let bounds = GridBox::new(extents(extent, d.letter_count())?)?;
    let grid = sigma_grid(d, &bounds)?;
    match format {
        GridFormat::Tsv => print!("{}", grid_tsv(&grid)),
        GridFormat::Dot => print!("{}", grid_dot(&grid)),
    }
    Ok(0)
}

fn closure(
    d: &Dfa,
    raw: bool,
    budget: Option<usize>,
    out: Option<&Path>,
    report_path: Option<&Path>,
) -> Outcome {
    let options = ClosureOptions { raw, exploration_extent: budget, ..ClosureOptions::default() };
    let (report, code) = match build_closure(d, &options) {
        Ok(c) => {
            match out {
                Some(p) => write_file(p, &dfa_to_json(&c.dfa))?,
                None => print!("{}", dfa_to_json(&c.dfa)),
            }
            (c.report, 0)
        }
        Err(Error::NotStabilized(lines)) => {
            eprintln!("error: label phases did not stabilize on {} line(s)", lines.len());
            for l in lines.iter().take(10) {
                let base: Vec<String> = l.base.iter().map(usize::to_string).collect();
                eprintln!(
                    "  line along {} through ({}) shows no repetition",
                    d.alphabet()[l.axis],
                    base.join(",")
                );
            }
            if lines.len() > 10 {
                eprintln!("  ... {} more", lines.len() - 10);
            }
            (unstable_report(d), 3)
        }
        Err(e) => return Err(e.into()),
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure { code: 6, message: e.to_string() })?;
    if let Some(p) = report_path {
        write_file(p, &format!("{json}\n"))?;
    }
    if out.is_some() || code != 0 {
        println!("{json}");
    } else if report_path.is_none() {
        eprintln!("{json}");
    }
    Ok(code)
}

fn decompose(
    d: &Dfa,
    axis: &str,
    region: &str,
    format: ChainFormat,
    out_dir: Option<&Path>,
    steps: Option<usize>,
) -> Outcome {
    let k = d.letter_count();
    let axis = match axis.parse::<usize>() {
        Ok(j) if (1..=k).contains(&j) => j - 1,
        Ok(j) => return Err(input_error(format!("axis {j} out of range 1..={k}"))),
        Err(_) => d
            .letter_index(axis)
            .ok_or_else(|| input_error(format!("unknown letter `{axis}`")))?,
    };
    let mut ext = if k == 1 { Vec::new() } else { extents(region, k - 1)? };
    ext.insert(axis, 1);
    let region = GridBox::new(ext)?;
    let budget = steps.unwrap_or_else(|| default_step_budget(d, axis, &region));
    let family = build_family(d, axis, &region, budget)?;
    let checks = if d.is_permutation_automaton() {
        Some(group_property_report(d, &family)?)
    } else {
        None
    };
    println!("base\tindex\tperiod\tlength{}", if checks.is_some() { "\tchecks" } else { "" });
    for (i, u) in family.automata().iter().enumerate() {
        let p = u.unary_index_period()?;
        let base: Vec<String> = u.base.iter().map(usize::to_string).collect();
        let mut row = format!("({})\t{}\t{}\t{}", base.join(","), p.index, p.period, u.chain.len());
        if let Some(r) = &checks {
            row.push_str(if r.chains[i].passed() { "\tok" } else { "\tFAILED" });
        }
        println!("{row}");
    }
    let agg = family.aggregate_profile()?;
    println!("aggregate\t{}\t{}", agg.index, agg.period);
    for u in family.automata() {
        let dot = chain_dot(u, d.alphabet());
        let name: Vec<String> = u.base.iter().map(usize::to_string).collect();
        if let Some(dir) = out_dir {
            fs::create_dir_all(dir)
                .map_err(|e| Failure { code: 6, message: format!("{}: {e}", dir.display()) })?;
            write_file(&dir.join(format!("chain_{}.dot", name.join("_"))), &dot)?;
        } else if matches!(format, ChainFormat::Dot) {
            print!("{dot}");
        }
    }
    Ok(0)
}

fn equiv(a: &Dfa, b: &Dfa) -> Outcome {
    match equivalent(a, b)? {
        Equivalence::Equivalent => {
            println!("equivalent");
            Ok(0)
        }
        Equivalence::Counterexample(w) => {
            let first = a.accepts(&w)?;
            println!(
                "inequivalent: {} accepted by {} only",
                a.format_word(&w),
                if first { "the first" } else { "the second" }
            );
            Ok(4)
        }
    }
}

fn oracle_check(candidate: &Dfa, source: &Dfa, max_len: usize, seed: u64) -> Outcome {
    let opts = VerifyOptions { seed, ..VerifyOptions::new(max_len) };
    match verify_closure(candidate, source, &opts)? {
        Verification::Pass { words_checked } => {
            println!("pass: {words_checked} words up to length {max_len}");
            Ok(0)
        }
        Verification::Counterexample(w) => {
            println!("counterexample: {}", source.format_word(&w));
            Ok(4)
        }
    }
}
