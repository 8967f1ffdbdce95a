//! Command-line surface over `gscsp`.
//!
//! Exit codes: 0 ok, 1 infeasible or empty domain, 2 usage or input error,
//! 3 class precondition violated, 4 internal invariant violated.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gscsp::acids::{extract_bound_solutions, run_acids_with, AcResult, AcStatus, AcidsOptions};
use gscsp::algebra;
use gscsp::classify::{classify, gs_direction, is_ds, is_us, Order};
use gscsp::format::{parse, serialize, serialize_constraint};
use gscsp::network::Network;
use gscsp::oracle::{
    ac3_reference, brute_force_solutions, diff_chain, generate, infeasible_chain, planted_chain,
    GenKind, GenSpec, Topology,
};
use gscsp::solver::{solve_dscsp, solve_network, SolveOutcome};
use gscsp::{Assignment, CspInstance, Direction, Error, RowConvexConstraint, VarId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_SOLUTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CLASS: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Set to a non-empty value other than `0` to check ACiDS invariants.
pub const INVARIANTS_ENV: &str = "GSCSP_CHECK_INVARIANTS";

#[derive(Parser, Debug)]
#[command(name = "gscsp", version, about = "Staircase constraint networks: classify, propagate, solve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class table for every constraint
    Classify { file: PathBuf },
    /// Arc consistency
    Ac {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = AcEngine::Acids)]
        engine: AcEngine,
        /// Defaults to the class shared by all constraints
        #[arg(long, value_enum)]
        direction: Option<Dir>,
        #[arg(long)]
        check_invariants: bool,
    },
    /// Find a solution
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveEngine::Dscsp)]
        engine: SolveEngine,
        /// Operation count and time on stderr
        #[arg(long)]
        stats: bool,
    },
    /// List solutions by enumeration
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Seeded random instance
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// chain, cycle or random:<c>
        #[arg(long, default_value = "chain", value_parser = parse_topology)]
        topology: Topology,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Constraint algebra on instance files
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Operation-count scaling runs
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024")]
        d_list: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Solution depth for planted chains
        #[arg(long, default_value_t = 8)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "acids,dscsp")]
        engines: Vec<BenchEngine>,
        /// Defaults to stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraOp {
    /// C_ji from C_ij
    Transpose {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["ROW", "COL"])]
        pair: Vec<String>,
    },
    /// Intersection with the same pair's constraint in another file
    Intersect {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["ROW", "COL"])]
        pair: Vec<String>,
        #[arg(long)]
        with: PathBuf,
    },
    /// C_ij composed with C_jk
    Compose {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["J", "K"])]
        then: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AcEngine {
    Acids,
    Ac3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SolveEngine {
    Dscsp,
    Acids,
    Brute,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Ds,
    Us,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Ds => Direction::Ds,
            Dir::Us => Direction::Us,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    BoundedDiff,
    RandomDs,
    RandomUs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    DiffChain,
    PlantedChain,
    InfeasibleChain,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BenchEngine {
    Acids,
    Dscsp,
    Ac3,
}

fn parse_topology(s: &str) -> Result<Topology, String> {
    match s {
        "chain" => Ok(Topology::Chain),
        "cycle" => Ok(Topology::Cycle),
        _ => s
            .strip_prefix("random:")
            .and_then(|c| c.parse().ok())
            .map(Topology::Random)
            .ok_or_else(|| format!("expected chain, cycle or random:<c>, found `{s}`")),
    }
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ClassMismatch { .. }
            | Error::NotGs
            | Error::MixedClasses
            | Error::NotRepresentable
            | Error::NotApplicable(_) => EXIT_CLASS,
            Error::InvariantViolated(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

/// Like `From<Error>`, with variable names instead of indices.
fn named(inst: &CspInstance, e: Error) -> Failure {
    match e {
        Error::ClassMismatch { row, col, expected } => Failure {
            code: EXIT_CLASS,
            msg: format!("constraint ({}, {}) is not {expected}", inst.name(row), inst.name(col)),
        },
        e => e.into(),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Classify { file } => cmd_classify(&load(&file)?, out),
        Command::Ac { file, engine, direction, check_invariants } => {
            let check = check_invariants || env_flag();
            cmd_ac(&load(&file)?, engine, direction.map(Into::into), check, out)
        }
        Command::Solve { file, engine, stats } => cmd_solve(&load(&file)?, engine, stats, out, err),
        Command::Oracle { file, limit } => cmd_oracle(&load(&file)?, limit, out),
        Command::Gen { kind, n, d, density, seed, topology, output } => {
            let kind = match kind {
                Kind::BoundedDiff => GenKind::BoundedDiff,
                Kind::RandomDs => GenKind::RandomDs,
                Kind::RandomUs => GenKind::RandomUs,
            };
            let inst = generate(&GenSpec { kind, n, d, density, seed, topology })?;
            emit(&serialize(&inst), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Algebra { op } => cmd_algebra(op, out),
        Command::Bench { family, d_list, n, s, seed, engines, csv } => {
            cmd_bench(family, &d_list, n, s, seed, &engines, csv.as_deref(), out)
        }
    }
}

fn env_flag() -> bool {
    std::env::var(INVARIANTS_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<CspInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_fail(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_classify(inst: &CspInstance, out: &mut dyn Write) -> Outcome {
    let rows: Vec<[String; 8]> = inst
        .constraints()
        .iter()
        .map(|c| {
            let rep = classify(c);
            let stairs: Vec<String> = Order::ALL
                .iter()
                .flat_map(|&a| Order::ALL.map(move |b| (a, b)))
                .filter(|&(a, b)| rep.staircase(a, b))
                .map(|(a, b)| format!("({a},{b})"))
                .collect();
            [
                format!("{} {}", inst.name(c.row_var()), inst.name(c.col_var())),
                yes(rep.row_convex).into(),
                yes(rep.ds).into(),
                yes(rep.us).into(),
                yes(rep.crc).into(),
                yes(rep.min_closed).into(),
                yes(rep.max_closed).into(),
                if stairs.is_empty() { "-".into() } else { stairs.join(" ") },
            ]
        })
        .collect();
    let header = ["constraint", "row_convex", "ds", "us", "crc", "min_closed", "max_closed", "staircase"];
    let mut widths = header.map(str::len);
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> =
            cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut text = line(header.to_vec()) + "\n";
    for r in &rows {
        text += &(line(r.iter().map(String::as_str).collect()) + "\n");
    }
    emit(&text, None, out)?;
    Ok(EXIT_OK)
}

/// Class shared by every constraint, DS preferred.
fn common_direction(inst: &CspInstance) -> Result<Direction, Failure> {
    if inst.constraints().iter().all(is_ds) {
        Ok(Direction::Ds)
    } else if inst.constraints().iter().all(is_us) {
        Ok(Direction::Us)
    } else {
        Err(Failure {
            code: EXIT_CLASS,
            msg: "constraints do not share one staircase class".into(),
        })
    }
}

fn assignment_line(tag: &str, inst: &CspInstance, a: &Assignment) -> String {
    let mut s = tag.to_string();
    for (v, x) in a.values(inst).iter().enumerate() {
        s += &format!(" {}={x}", inst.name(VarId(v)));
    }
    s + "\n"
}

fn write_closure(inst: &CspInstance, res: &AcResult, out: &mut dyn Write) -> Outcome {
    let text = match res.status {
        AcStatus::Consistent => {
            let mut s = String::from("CONSISTENT\n");
            for (v, vals) in res.surviving_values(inst).iter().enumerate() {
                let vals: Vec<String> = vals.iter().map(i64::to_string).collect();
                s += &format!("{}: {}\n", inst.name(VarId(v)), vals.join(" "));
            }
            s
        }
        AcStatus::EmptyDomain(v) => format!("EMPTY_DOMAIN {}\n", inst.name(v)),
    };
    emit(&text, None, out)?;
    Ok(if res.status.is_consistent() { EXIT_OK } else { EXIT_NO_SOLUTION })
}

fn cmd_ac(
    inst: &CspInstance,
    engine: AcEngine,
    direction: Option<Direction>,
    check: bool,
    out: &mut dyn Write,
) -> Outcome {
    let res = match engine {
        AcEngine::Ac3 => ac3_reference(inst),
        AcEngine::Acids => {
            let dir = match direction {
                Some(d) => d,
                None => common_direction(inst)?,
            };
            run_acids_with(inst, dir, AcidsOptions { check_invariants: check }).map_err(|e| named(inst, e))?
        }
    };
    write_closure(inst, &res, out)
}

fn cmd_solve(
    inst: &CspInstance,
    engine: SolveEngine,
    stats: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let start = Instant::now();
    let (text, ops, found) = match engine {
        SolveEngine::Dscsp => {
            let res = solve_dscsp(inst).map_err(|e| named(inst, e))?;
            match res.outcome {
                SolveOutcome::Solution(a) => (assignment_line("SOLUTION", inst, &a), res.op_count, true),
                SolveOutcome::Infeasible => ("INFEASIBLE\n".to_string(), res.op_count, false),
            }
        }
        SolveEngine::Acids => {
            if !inst.constraints().iter().all(is_ds) {
                let msg = if inst.constraints().iter().all(is_us) {
                    "arc consistency is not known to decide up staircase networks; use `ac --direction us`"
                } else {
                    "the acids solver needs down staircase constraints"
                };
                return Err(Failure { code: EXIT_CLASS, msg: msg.into() });
            }
            let res = run_acids_with(inst, Direction::Ds, AcidsOptions { check_invariants: env_flag() })?;
            match extract_bound_solutions(inst, &res) {
                Ok((first, last)) => (
                    assignment_line("SOLUTION", inst, &first) + &assignment_line("SOLUTION_LAST", inst, &last),
                    res.op_count,
                    true,
                ),
                Err(_) => ("INFEASIBLE\n".to_string(), res.op_count, false),
            }
        }
        SolveEngine::Brute => {
            let sols = brute_force_solutions(inst, 1)?;
            match sols.first() {
                Some(a) => (assignment_line("SOLUTION", inst, a), 0, true),
                None => ("INFEASIBLE\n".to_string(), 0, false),
            }
        }
    };
    emit(&text, None, out)?;
    if stats {
        let _ = writeln!(err, "ops={ops} ms={:.3}", start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(if found { EXIT_OK } else { EXIT_NO_SOLUTION })
}

fn cmd_oracle(inst: &CspInstance, limit: usize, out: &mut dyn Write) -> Outcome {
    let sols = brute_force_solutions(inst, limit)?;
    let mut text: String = sols.iter().map(|a| assignment_line("SOLUTION", inst, a)).collect();
    text += &format!("COUNT {}\n", sols.len());
    emit(&text, None, out)?;
    Ok(if sols.is_empty() { EXIT_NO_SOLUTION } else { EXIT_OK })
}

fn var(inst: &CspInstance, name: &str) -> Result<VarId, Failure> {
    inst.var_by_name(name).ok_or_else(|| usage(format!("unknown variable `{name}`")))
}

/// The constraint on `(a, b)` oriented with `a` as the row variable.
fn oriented(inst: &CspInstance, pair: &[String]) -> Result<RowConvexConstraint, Failure> {
    let (a, b) = (var(inst, &pair[0])?, var(inst, &pair[1])?);
    let c = inst
        .constraint_between(a, b)
        .ok_or_else(|| usage(format!("no constraint between {} and {}", pair[0], pair[1])))?;
    if c.row_var() == a {
        Ok(c.clone())
    } else {
        Ok(algebra::transpose(c)?)
    }
}

fn cmd_algebra(op: AlgebraOp, out: &mut dyn Write) -> Outcome {
    let (inst, result) = match op {
        AlgebraOp::Transpose { file, pair } => {
            let inst = load(&file)?;
            let c = oriented(&inst, &pair)?;
            let t = algebra::transpose(&c)?;
            (inst, t)
        }
        AlgebraOp::Intersect { file, pair, with } => {
            let inst = load(&file)?;
            let other = load(&with)?;
            if other.domains() != inst.domains() || other.names() != inst.names() {
                return Err(Error::DomainMismatch.into());
            }
            let r = algebra::intersect(&oriented(&inst, &pair)?, &oriented(&other, &pair)?)?;
            (inst, r)
        }
        AlgebraOp::Compose { file, pair, then } => {
            let inst = load(&file)?;
            if pair[1] != then[0] {
                return Err(usage(format!("`{}` and `{}` do not share a variable", pair.join(" "), then.join(" "))));
            }
            let r = algebra::compose(&oriented(&inst, &pair)?, &oriented(&inst, &then)?)?;
            (inst, r)
        }
    };
    let class = gs_direction(&result).map_or("none".to_string(), |d| d.to_string());
    let text = format!("# class: {class}\n{}", serialize_constraint(&inst, &result));
    emit(&text, None, out)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    family: Family,
    d_list: &[usize],
    n: usize,
    s: usize,
    seed: u64,
    engines: &[BenchEngine],
    csv_path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    if d_list.is_empty() || d_list.contains(&0) {
        return Err(usage("--d-list needs positive sizes"));
    }
    if n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| usage(e.to_string());
    wtr.write_record(["engine", "n", "c", "d", "opCount", "ms", "outcome"]).map_err(csv_err)?;
    for &d in d_list {
        let inst = match family {
            Family::DiffChain => diff_chain(n, d, seed),
            Family::PlantedChain => {
                if s == 0 || s > d || n >= 99 {
                    return Err(usage("planted chains need 1 <= s <= d and n < 99"));
                }
                planted_chain(n, d, s, seed)
            }
            Family::InfeasibleChain => infeasible_chain(n, d, seed),
        };
        for &engine in engines {
            let start = Instant::now();
            let (name, ops, outcome) = match engine {
                BenchEngine::Acids => {
                    let r = run_acids_with(&inst, Direction::Ds, AcidsOptions::default())?;
                    ("acids", r.op_count, if r.status.is_consistent() { "CONSISTENT" } else { "EMPTY_DOMAIN" })
                }
                BenchEngine::Dscsp => {
                    let net = Network::build(&inst, Direction::Ds)?;
                    let r = solve_network(&net);
                    let o = if r.outcome.solution().is_some() { "SOLUTION" } else { "INFEASIBLE" };
                    ("dscsp", r.op_count, o)
                }
                BenchEngine::Ac3 => {
                    let r = ac3_reference(&inst);
                    ("ac3", r.op_count, if r.status.is_consistent() { "CONSISTENT" } else { "EMPTY_DOMAIN" })
                }
            };
            let ms = start.elapsed().as_secs_f64() * 1e3;
            wtr.write_record([
                name.to_string(),
                inst.num_vars().to_string(),
                inst.num_constraints().to_string(),
                d.to_string(),
                ops.to_string(),
                format!("{ms:.3}"),
                outcome.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = wtr.into_inner().map_err(|e| usage(e.to_string()))?;
    emit(&String::from_utf8(bytes).expect("csv output is utf-8"), csv_path, out)?;
    Ok(EXIT_OK)
}
