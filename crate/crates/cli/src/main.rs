//! `ybe`: command-line front end to `ybe-core`.
//!
//! Exit codes: 0 success or true, 1 negative verdict, 2 input error,
//! 3 axiom failure, 4 resource cap.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ybe_core::brace::{
    asymmetric_product, ideal_check, permutation_brace, validate_brace, AsymmetricBrace, AsymmetricParams, BraceError,
};
use ybe_core::census::{run, write_jsonl, CensusError, CensusRun, CensusSpec, Constraint};
use ybe_core::families::{
    fixture, p2_solution, permutation_solution, rectangular_solution, square_solution, FamilyError,
    RectangularFamilyParams, SquareFamilyParams,
};
use ybe_core::perm::PermError;
use ybe_core::quotients::{covering_solution, find_isomorphism, fundamental_group, is_simple, QuotientError};
use ybe_core::solution::{validate, SolutionError};
use ybe_core::{Perm, Solution, SolutionReport};

#[derive(Parser)]
#[command(name = "ybe", version, about = "Involutive set-theoretic solutions of the Yang-Baxter equation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms; prints the report.
    Verify(Input),
    /// Report plus every structural predicate, as JSON.
    Analyze(Input),
    /// Build a solution from a family or fixture.
    #[command(subcommand)]
    Construct(Construct),
    /// Exit 0 if simple, 1 with a congruence witness otherwise.
    SimpleCheck(Input),
    /// Exit 0 with an isomorphism (1-based images), 1 if none exists.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        cycle_set: bool,
    },
    /// The retraction and its class map.
    Retract(Input),
    /// Covering solution on the permutation group, based at a point.
    Cover {
        #[command(flatten)]
        input: Input,
        /// Base point, 1-based.
        #[arg(long, default_value_t = 1)]
        x: usize,
    },
    #[command(subcommand)]
    Brace(BraceCmd),
    /// Isomorph-free census, written as JSON Lines.
    Census(CensusArgs),
}

#[derive(Args)]
struct Input {
    /// Solution JSON file, or `-` for stdin.
    file: PathBuf,
    /// Read the cycle-set format instead.
    #[arg(long)]
    cycle_set: bool,
}

#[derive(Subcommand)]
enum Construct {
    Square {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
    },
    Rect {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    P2 {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
    },
    /// `σ_x = σ` for every point.
    Perm {
        #[arg(long)]
        n: usize,
        /// 1-based cycles, e.g. "(1,2,3)".
        #[arg(long)]
        sigma: String,
    },
    Fixture { name: String },
}

#[derive(Subcommand)]
enum BraceCmd {
    /// The asymmetric product of order n^(n+1).
    Asym {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
        /// Print the solution restricted to the distinguished subset instead.
        #[arg(long)]
        restrict: bool,
    },
    /// The brace on the permutation group of a solution.
    OfSolution(Input),
    /// Validate a brace file `{"order", "add", "mul"}`.
    Check { file: PathBuf },
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated: indecomposable, irretractable, square_free, simple, block_form(p).
    #[arg(long, value_delimiter = ',')]
    require: Vec<String>,
    /// Worker threads; 0 picks the default.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    split_depth: usize,
    /// Allow unconstrained orders up to 9.
    #[arg(long)]
    stretch: bool,
    /// Stop after this many work items (the checkpoint keeps the rest).
    #[arg(long)]
    stop_after: Option<usize>,
}

/// A failure carrying its exit code.
struct Fail(u8, String);

impl Fail {
    fn input(e: impl ToString) -> Self {
        Fail(2, e.to_string())
    }
}

impl From<SolutionError> for Fail {
    fn from(e: SolutionError) -> Self {
        match e {
            SolutionError::Axiom(_) | SolutionError::CycleSetLaw(_) | SolutionError::DegenerateSquares(..) => {
                Fail(3, e.to_string())
            }
            SolutionError::Perm(PermError::GroupTooLarge { .. }) => Fail(4, e.to_string()),
            _ => Fail(2, e.to_string()),
        }
    }
}

impl From<PermError> for Fail {
    fn from(e: PermError) -> Self {
        match e {
            PermError::GroupTooLarge { .. } => Fail(4, e.to_string()),
            _ => Fail(2, e.to_string()),
        }
    }
}

impl From<QuotientError> for Fail {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::Solution(s) => s.into(),
            QuotientError::Perm(p) => p.into(),
            QuotientError::TooManyPoints { .. } | QuotientError::LatticeTooLarge(_) => Fail(4, e.to_string()),
            _ => Fail(1, e.to_string()),
        }
    }
}

impl From<FamilyError> for Fail {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::NotASolution(_) => Fail(3, e.to_string()),
            _ => Fail(2, e.to_string()),
        }
    }
}

impl From<BraceError> for Fail {
    fn from(e: BraceError) -> Self {
        match e {
            BraceError::Invalid(_) | BraceError::Inconsistent(_) => Fail(3, e.to_string()),
            BraceError::Cap { .. } | BraceError::TooLarge { .. } | BraceError::Overflow => Fail(4, e.to_string()),
            BraceError::Solution(s) => s.into(),
            _ => Fail(2, e.to_string()),
        }
    }
}

impl From<CensusError> for Fail {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Infeasible(_) => Fail(4, e.to_string()),
            _ => Fail(2, e.to_string()),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail(2, e.to_string())
    }
}

type Outcome = Result<u8, Fail>;

fn read_text(path: &PathBuf) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Fail::input(format!("{}: {e}", path.display())))
    }
}

fn load(input: &Input) -> Result<Solution, Fail> {
    load_path(&input.file, input.cycle_set)
}

fn load_path(path: &PathBuf, cycle_set: bool) -> Result<Solution, Fail> {
    let text = read_text(path)?;
    let s = if cycle_set {
        Solution::from_cycle_set_json(&text)
    } else {
        Solution::from_json(&text)
    };
    Ok(s?)
}

/// The raw σ-table of a solution file, before any axiom is checked.
fn load_table(input: &Input) -> Result<Vec<Vec<usize>>, Fail> {
    let text = read_text(&input.file)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(Fail::input)?;
    let field = if input.cycle_set { "dot" } else { "sigma" };
    let table: Vec<Vec<usize>> = serde_json::from_value(v.get(field).cloned().unwrap_or_default())
        .map_err(|e| Fail::input(format!("{field}: {e}")))?;
    if let Some(n) = v.get("n").and_then(|n| n.as_u64()) {
        if n as usize != table.len() {
            return Err(Fail::input(format!("n = {n} but {} rows", table.len())));
        }
    }
    if !input.cycle_set {
        return Ok(table);
    }
    // σ_x is the inverse of row x of the cycle-set table
    let s = Solution::from_cycle_set_json(&text);
    match s {
        Ok(s) => Ok(s.table()),
        Err(e) => Err(e.into()),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect()
}

fn verify(input: &Input) -> Outcome {
    let table = load_table(input)?;
    let report = validate(&table).map_err(Fail::input)?;
    print_json(&report);
    Ok(if report.is_valid() { 0 } else { 3 })
}

#[derive(Serialize)]
struct AnalysisBundle {
    n: usize,
    report: SolutionReport,
    group_order: Option<usize>,
    indecomposable: bool,
    irretractable: bool,
    primitive: bool,
    square_free: bool,
    simple: bool,
    /// 1-based blocks.
    block_systems: Vec<Vec<Vec<usize>>>,
    multipermutation_level: Option<usize>,
}

fn analyze(input: &Input) -> Outcome {
    let table = load_table(input)?;
    let report = validate(&table).map_err(Fail::input)?;
    if !report.is_valid() {
        print_json(&report);
        return Ok(3);
    }
    let s = Solution::from_table(table)?;
    let simple = match is_simple(&s) {
        Ok((v, _)) => v,
        Err(QuotientError::TooSmall) => false,
        Err(e) => return Err(e.into()),
    };
    let bundle = AnalysisBundle {
        n: s.n(),
        report,
        group_order: Some(s.permutation_group()?.order()),
        indecomposable: s.is_indecomposable(),
        irretractable: s.is_irretractable(),
        primitive: s.is_primitive(),
        square_free: s.is_square_free(),
        simple,
        block_systems: s.block_systems().iter().map(|sys| one_based(sys)).collect(),
        multipermutation_level: s.multipermutation_level(),
    };
    print_json(&bundle);
    Ok(0)
}

fn construct(c: &Construct) -> Outcome {
    let s = match c {
        Construct::Square { n, t, j } => {
            let (s, claims) = square_solution(&SquareFamilyParams::new(*n, *t, j.clone()))?;
            eprint!("{claims}");
            s
        }
        Construct::Rect { m, n } => {
            let s = rectangular_solution(&RectangularFamilyParams { m: *m, n: *n })?;
            eprintln!("order {}", s.n());
            s
        }
        Construct::P2 { p, t, j } => {
            let (_, claims) = square_solution(&SquareFamilyParams::new(*p, *t, j.clone()))?;
            eprint!("{claims}");
            p2_solution(*p, *t, j)?
        }
        Construct::Perm { n, sigma } => {
            let p = Perm::parse_cycles(*n, sigma)?;
            eprintln!("permutation solution, σ = {p}");
            permutation_solution(&p)
        }
        Construct::Fixture { name } => fixture(name)?,
    };
    println!("{}", s.to_json());
    Ok(0)
}

fn simple_check(input: &Input) -> Outcome {
    let s = load(input)?;
    let (simple, witness) = is_simple(&s)?;
    #[derive(Serialize)]
    struct Out {
        simple: bool,
        witness: Option<Vec<Vec<usize>>>,
    }
    print_json(&Out {
        simple,
        witness: witness.map(|c| one_based(&c.classes())),
    });
    Ok(if simple { 0 } else { 1 })
}

fn iso(a: &PathBuf, b: &PathBuf, cycle_set: bool) -> Outcome {
    let (s, t) = (load_path(a, cycle_set)?, load_path(b, cycle_set)?);
    match find_isomorphism(&s, &t) {
        Some(f) => {
            print_json(&serde_json::json!({ "isomorphic": true, "map": f.iter().map(|x| x + 1).collect::<Vec<_>>() }));
            Ok(0)
        }
        None => {
            print_json(&serde_json::json!({ "isomorphic": false }));
            Ok(1)
        }
    }
}

fn retract(input: &Input) -> Outcome {
    let s = load(input)?;
    let (r, class_of) = s.retract();
    eprintln!(
        "retract of order {} -> {}, multipermutation level {:?}",
        s.n(),
        r.n(),
        s.multipermutation_level()
    );
    eprintln!("classes (1-based): {:?}", class_of.iter().map(|c| c + 1).collect::<Vec<_>>());
    println!("{}", r.to_json());
    Ok(0)
}

fn cover(input: &Input, x: usize) -> Outcome {
    let s = load(input)?;
    if x == 0 || x > s.n() {
        return Err(Fail::input(format!("base point {x} is not in 1..={}", s.n())));
    }
    let (c, proj, _) = covering_solution(&s, x - 1)?;
    let pi1 = fundamental_group(&s, x - 1)?;
    eprintln!("covering of order {}, fundamental group of order {}", c.n(), pi1.order());
    eprintln!("projection (1-based): {:?}", proj.iter().map(|p| p + 1).collect::<Vec<_>>());
    println!("{}", c.to_json());
    Ok(0)
}

fn brace(cmd: &BraceCmd) -> Outcome {
    match cmd {
        BraceCmd::Asym { n, j, restrict } => {
            let p = AsymmetricParams::new(*n, j.clone())?;
            if *restrict {
                println!("{}", AsymmetricBrace::new(p).restricted_solution()?.to_json());
            } else {
                let prod = asymmetric_product(&p)?;
                eprintln!(
                    "order {}, socle of order {}, nonsingular circulant: {}",
                    prod.brace.order(),
                    prod.brace.socle().len(),
                    prod.nonsingular
                );
                println!("{}", prod.brace.to_json());
            }
            Ok(0)
        }
        BraceCmd::OfSolution(input) => {
            let s = load(input)?;
            let g = permutation_brace(&s)?;
            let check = ideal_check(&s)?;
            eprintln!("{check:?}");
            println!("{}", g.brace.to_json());
            Ok(0)
        }
        BraceCmd::Check { file } => {
            let text = read_text(file)?;
            let v: serde_json::Value = serde_json::from_str(&text).map_err(Fail::input)?;
            let table = |k: &str| -> Result<Vec<Vec<usize>>, Fail> {
                serde_json::from_value(v.get(k).cloned().unwrap_or_default()).map_err(|e| Fail::input(format!("{k}: {e}")))
            };
            let b = match validate_brace(table("add")?, table("mul")?) {
                Ok(b) => b,
                Err(BraceError::Invalid(violation)) => {
                    print_json(&serde_json::json!({ "valid": false, "violation": violation.to_string() }));
                    return Ok(3);
                }
                Err(e) => return Err(e.into()),
            };
            print_json(&serde_json::json!({
                "valid": true,
                "order": b.order(),
                "trivial": b.is_trivial(),
                "socle": b.socle(),
                "star_ideal": b.star_ideal()?,
            }));
            Ok(0)
        }
    }
}

fn census(a: &CensusArgs) -> Outcome {
    let constraints = a
        .require
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Constraint>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(Fail::input)?;
    let mut spec = CensusSpec::new(a.n).with_constraints(&constraints);
    spec.jobs = a.jobs;
    spec.checkpoint = a.checkpoint.clone();
    spec.split_depth = a.split_depth;
    spec.stretch = a.stretch;
    spec.stop_after = a.stop_after;
    let records = match run(&spec)? {
        CensusRun::Complete(r) => r,
        CensusRun::Interrupted { next_item, total_items } => {
            eprintln!("stopped at work item {next_item} of {total_items}");
            return Ok(0);
        }
    };
    eprintln!("{} classes", records.len());
    match &a.out {
        Some(path) => write_jsonl(&records, io::BufWriter::new(fs::File::create(path)?))?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_jsonl(&records, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Verify(i) => verify(i),
        Cmd::Analyze(i) => analyze(i),
        Cmd::Construct(c) => construct(c),
        Cmd::SimpleCheck(i) => simple_check(i),
        Cmd::Iso { a, b, cycle_set } => iso(a, b, *cycle_set),
        Cmd::Retract(i) => retract(i),
        Cmd::Cover { input, x } => cover(input, *x),
        Cmd::Brace(b) => brace(b),
        Cmd::Census(c) => census(c),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
