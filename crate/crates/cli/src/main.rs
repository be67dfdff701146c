//! `sheafcomp`: sheaf computations on finite topological spaces.
//!
//! Exit codes: 0 on success, 1 on domain violations (invalid bases, axiom
//! failures, rule errors), 2 on usage and parse errors.

mod spacefile;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sheafcomp::builtin::{
    chain_space, quadric_space, staircase_space, AlignmentScoring, ChainRule, Grid, GridCost,
    NwRule, ScoredNwRule,
};
use sheafcomp::builtin::QuadricRule;
use sheafcomp::sampling::{random_cover, random_section};
use sheafcomp::{
    glue, run, sections_equal_on_cover, ConstantRule, ExtensionRule, Integers, PrimeField, Rat,
    Rationals, Ring, SchedulingPolicy, Section, Topology,
};

#[derive(Parser)]
#[command(name = "sheafcomp", version, about = "Sheaf computations on finite topological spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate space files and inspect their open-set lattices
    Topology {
        #[command(subcommand)]
        command: TopologyCommand,
    },
    /// Run a sheaf computation and print its trace
    Compute(ComputeArgs),
    /// Align two sequences on the staircase space
    Align(AlignArgs),
    /// Run the sheaf-axiom and well-definedness suites on a space file
    Verify {
        /// Space file to verify
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum TopologyCommand {
    /// Check the base properties and report the lattice size
    Check { file: PathBuf },
    /// List every open in canonical order, in space-file format
    Opens { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuiltinSpace {
    Chain,
    Staircase,
    Quadric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleKind {
    /// σ(0) = 0, σ(i) = σ(i-1) + 1
    Chain,
    /// Single-cost table recurrence on a grid
    Nw,
    /// Slope sections on the quadric surface
    Quadric,
    /// Constant zero
    Zero,
}

#[derive(Args)]
struct ComputeArgs {
    /// Built-in space
    #[arg(long, value_enum, conflicts_with = "space")]
    builtin: Option<BuiltinSpace>,
    /// Space file
    #[arg(long)]
    space: Option<PathBuf>,
    /// Chain length / staircase column extent
    #[arg(long)]
    n: Option<usize>,
    /// Staircase row extent
    #[arg(long)]
    m: Option<usize>,
    /// Field prime for the quadric
    #[arg(long)]
    p: Option<u64>,
    /// Extension rule
    #[arg(long, value_enum)]
    rule: RuleKind,
    /// Cost table file (nw rule)
    #[arg(long)]
    costs: Option<PathBuf>,
    /// Slope function: identity, pow:K, or table:v0,v1,… (quadric rule)
    #[arg(long, default_value = "identity")]
    f: String,
    /// Value assigned outside both distinguished opens (quadric rule)
    #[arg(long = "default", default_value_t = 1)]
    default_value: u64,
    /// Print only the result line
    #[arg(long)]
    result_only: bool,
}

#[derive(Args)]
struct AlignArgs {
    /// First sequence
    #[arg(long)]
    seq_a: Option<String>,
    /// Second sequence
    #[arg(long)]
    seq_b: Option<String>,
    /// Cost of aligning two equal characters
    #[arg(long = "match", default_value = "0")]
    match_cost: String,
    /// Cost of aligning two different characters
    #[arg(long, default_value = "1")]
    mismatch: String,
    /// Cost of aligning a character against a gap
    #[arg(long, default_value = "1")]
    gap: String,
    /// Cost table file: use the single-cost recurrence instead of scoring
    #[arg(long)]
    costs: Option<PathBuf>,
    /// Also print one optimal alignment
    #[arg(long)]
    traceback: bool,
}

/// Errors mapped to exit codes: usage/parse → 2, domain violations → 1.
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn exit(&self) -> ExitCode {
        let (code, message) = match self {
            CliError::Usage(m) => (2, m),
            CliError::Domain(m) => (1, m),
        };
        eprintln!("error: {message}");
        ExitCode::from(code)
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn domain(message: impl ToString) -> CliError {
    CliError::Domain(message.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Topology { command } => match command {
            TopologyCommand::Check { file } => cmd_topology_check(&file),
            TopologyCommand::Opens { file } => cmd_topology_opens(&file),
        },
        Command::Compute(args) => cmd_compute(&args),
        Command::Align(args) => cmd_align(&args),
        Command::Verify { file } => cmd_verify(&file),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.exit(),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses, validates, and generates; violations are printed to stdout.
fn load_topology(path: &Path) -> Result<Topology, CliError> {
    let base = parse_base(path)?;
    let violations = base.validate();
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        return Err(domain(format!(
            "{} base violation(s) in {}",
            violations.len(),
            path.display()
        )));
    }
    Topology::generate(&base).map_err(domain)
}

fn parse_base(path: &Path) -> Result<sheafcomp::Base, CliError> {
    let text = read_file(path)?;
    spacefile::parse_space(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_topology_check(file: &Path) -> Result<(), CliError> {
    let topology = load_topology(file)?;
    let extension_violations = topology.check_minimal_extension_property();
    for v in &extension_violations {
        println!("violation: {v}");
    }
    if !extension_violations.is_empty() {
        return Err(domain("minimal extension property fails"));
    }
    if !topology.is_noetherian() {
        return Err(domain("ascending chain condition fails"));
    }
    println!("OK: {} opens", topology.opens().len());
    Ok(())
}

fn cmd_topology_opens(file: &Path) -> Result<(), CliError> {
    let topology = load_topology(file)?;
    print!("{}", spacefile::render_opens(&topology));
    Ok(())
}

fn run_and_print<R: Ring>(
    topology: &Topology,
    ring: &R,
    rule: &impl ExtensionRule<R>,
    result_only: bool,
) -> Result<(), CliError> {
    let trace = run(topology, ring, rule, &SchedulingPolicy::Canonical).map_err(domain)?;
    if result_only {
        println!("{}", trace.render_result(ring));
    } else {
        print!("{}", trace.render(ring));
    }
    Ok(())
}

fn cmd_compute(args: &ComputeArgs) -> Result<(), CliError> {
    if args.rule == RuleKind::Quadric {
        if args.builtin != Some(BuiltinSpace::Quadric) {
            return Err(usage("--rule quadric requires --builtin quadric"));
        }
        let p = args.p.ok_or(usage("--builtin quadric requires --p"))?;
        let space = quadric_space(p).map_err(|e| usage(e.to_string()))?;
        let f = spacefile::parse_monadic(&args.f).map_err(usage)?;
        let rule = QuadricRule::new(&space, f, args.default_value)
            .map_err(|e| usage(e.to_string()))?;
        return run_and_print(&space.topology, &space.field, &rule, args.result_only);
    }

    let topology = match (args.builtin, &args.space) {
        (Some(BuiltinSpace::Chain), _) => {
            chain_space(args.n.ok_or(usage("--builtin chain requires --n"))?)
        }
        (Some(BuiltinSpace::Staircase), _) => staircase_space(
            args.m.ok_or(usage("--builtin staircase requires --m"))?,
            args.n.ok_or(usage("--builtin staircase requires --n"))?,
        ),
        (Some(BuiltinSpace::Quadric), _) => {
            let p = args.p.ok_or(usage("--builtin quadric requires --p"))?;
            quadric_space(p).map_err(|e| usage(e.to_string()))?.topology
        }
        (None, Some(path)) => load_topology(path)?,
        (None, None) => return Err(usage("supply --builtin or --space")),
    };

    match args.rule {
        RuleKind::Chain => run_and_print(&topology, &Integers, &ChainRule, args.result_only),
        RuleKind::Zero => {
            run_and_print(&topology, &Integers, &ConstantRule(0i64), args.result_only)
        }
        RuleKind::Nw => {
            let path = args.costs.as_ref().ok_or(usage("--rule nw requires --costs"))?;
            let table = spacefile::parse_cost_table(&read_file(path)?)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            run_and_print(&topology, &Rationals, &NwRule::new(table), args.result_only)
        }
        RuleKind::Quadric => unreachable!("handled above"),
    }
}

enum AlignMode {
    Scored(AlignmentScoring<Rat>),
    Literal(GridCost<Rat>),
}

fn cmd_align(args: &AlignArgs) -> Result<(), CliError> {
    let sequences = match (&args.seq_a, &args.seq_b) {
        (Some(a), Some(b)) => Some((a.as_bytes().to_vec(), b.as_bytes().to_vec())),
        (None, None) => None,
        _ => return Err(usage("supply both --seq-a and --seq-b")),
    };

    let (mode, m, n) = match &args.costs {
        Some(path) => {
            let table = spacefile::parse_cost_table(&read_file(path)?)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let grid = table.grid();
            let (m, n) = (grid.rows() - 1, grid.cols() - 1);
            if let Some((a, b)) = &sequences {
                if a.len() != m || b.len() != n {
                    return Err(usage(format!(
                        "cost table is for extents ({m}, {n}) but the sequences have lengths \
                         ({}, {})",
                        a.len(),
                        b.len()
                    )));
                }
            }
            (AlignMode::Literal(table), m, n)
        }
        None => {
            let (a, b) = sequences
                .clone()
                .ok_or(usage("supply --seq-a and --seq-b (or --costs)"))?;
            let scoring = AlignmentScoring {
                match_cost: spacefile::parse_rational(&args.match_cost).map_err(usage)?,
                mismatch_cost: spacefile::parse_rational(&args.mismatch).map_err(usage)?,
                gap_cost: spacefile::parse_rational(&args.gap).map_err(usage)?,
                seq_a: a,
                seq_b: b,
            };
            let (m, n) = scoring.extents();
            (AlignMode::Scored(scoring), m, n)
        }
    };

    let topology = staircase_space(m, n);
    let grid = Grid::new(m, n);
    let trace = match &mode {
        AlignMode::Scored(scoring) => run(
            &topology,
            &Rationals,
            &ScoredNwRule::new(&Rationals, scoring),
            &SchedulingPolicy::Canonical,
        ),
        AlignMode::Literal(table) => run(
            &topology,
            &Rationals,
            &NwRule::new(table.clone()),
            &SchedulingPolicy::Canonical,
        ),
    }
    .map_err(domain)?;

    let value = |i: usize, j: usize| -> Rat {
        *trace
            .result
            .value_at(grid.point(i, j))
            .expect("global section is total")
    };
    for i in 0..=m {
        let row: Vec<String> = (0..=n).map(|j| Rationals.render(&value(i, j))).collect();
        println!("{}", row.join(" "));
    }
    println!("score: {}", Rationals.render(&value(m, n)));

    if args.traceback {
        let (a, b) = sequences
            .as_ref()
            .ok_or(usage("--traceback requires --seq-a and --seq-b"))?;
        let (top, bottom) = traceback(&value, a, b, &mode, m, n);
        println!("alignment:");
        println!("{top}");
        println!("{bottom}");
    }
    Ok(())
}

/// Standard predecessor walk over the finished table, preferring diagonal,
/// then vertical, then horizontal moves.
fn traceback(
    value: &dyn Fn(usize, usize) -> Rat,
    a: &[u8],
    b: &[u8],
    mode: &AlignMode,
    m: usize,
    n: usize,
) -> (String, String) {
    let move_cost = |si: usize, sj: usize, diagonal: bool| -> Rat {
        match mode {
            AlignMode::Scored(scoring) => {
                if diagonal {
                    *scoring.substitution(si, sj)
                } else {
                    scoring.gap_cost
                }
            }
            AlignMode::Literal(table) => *table.at(si, sj),
        }
    };
    let (mut i, mut j) = (m, n);
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    while (i, j) != (0, 0) {
        if i > 0 && j > 0 && value(i, j) == value(i - 1, j - 1) + move_cost(i - 1, j - 1, true) {
            top.push(a[i - 1]);
            bottom.push(b[j - 1]);
            i -= 1;
            j -= 1;
        } else if i > 0 && value(i, j) == value(i - 1, j) + move_cost(i - 1, j, false) {
            top.push(a[i - 1]);
            bottom.push(b'-');
            i -= 1;
        } else {
            debug_assert!(j > 0 && value(i, j) == value(i, j - 1) + move_cost(i, j - 1, false));
            top.push(b'-');
            bottom.push(b[j - 1]);
            j -= 1;
        }
    }
    top.reverse();
    bottom.reverse();
    (
        String::from_utf8_lossy(&top).into_owned(),
        String::from_utf8_lossy(&bottom).into_owned(),
    )
}

fn cmd_verify(file: &Path) -> Result<(), CliError> {
    let topology = load_topology(file)?;
    println!("opens: {}", topology.opens().len());

    let extension_violations = topology.check_minimal_extension_property();
    if extension_violations.is_empty() {
        println!("minimal extension property: OK");
    } else {
        for v in &extension_violations {
            println!("violation: {v}");
        }
        return Err(domain("minimal extension property fails"));
    }

    if topology.is_noetherian() {
        println!("noetherian: OK");
    } else {
        return Err(domain("ascending chain condition fails"));
    }

    let field = PrimeField::new(3).expect("3 is prime");
    let mut rng = StdRng::seed_from_u64(0x5eaf);
    let fail = |what: &str| -> CliError { domain(format!("{what} fails")) };
    for _ in 0..64 {
        let u = topology.opens()[rng.gen_range(0..topology.opens().len())].clone();
        let sigma = random_section(&mut rng, &field, &u);

        if sigma.restrict(&u).map_err(domain)? != sigma {
            return Err(fail("restriction identity"));
        }
        let inside: Vec<_> = topology.opens().iter().filter(|v| v.is_subset(&u)).collect();
        let v = inside[rng.gen_range(0..inside.len())].clone();
        let deeper: Vec<_> = inside.iter().copied().filter(|w| w.is_subset(&v)).collect();
        let w = deeper[rng.gen_range(0..deeper.len())].clone();
        let composed = sigma
            .restrict(&v)
            .and_then(|s| s.restrict(&w))
            .map_err(domain)?;
        if composed != sigma.restrict(&w).map_err(domain)? {
            return Err(fail("restriction composition"));
        }

        let cover = random_cover(&mut rng, &topology, &u);
        let tau = random_section(&mut rng, &field, &u);
        if sections_equal_on_cover(&field, &sigma, &tau, &cover).map_err(domain)?
            != (sigma == tau)
        {
            return Err(fail("uniqueness"));
        }

        let parts: Vec<Section<PrimeField>> = cover
            .iter()
            .map(|c| sigma.restrict(c))
            .collect::<Result<_, _>>()
            .map_err(domain)?;
        let glued = glue(&field, &parts).map_err(domain)?;
        if glued != sigma {
            return Err(fail("gluing round-trip"));
        }
        for (c, part) in cover.iter().zip(&parts) {
            if &glued.restrict(c).map_err(domain)? != part {
                return Err(fail("glue-then-restrict"));
            }
        }
    }
    println!("restriction identity: OK");
    println!("restriction composition: OK");
    println!("uniqueness: OK");
    println!("gluing: OK");
    Ok(())
}
