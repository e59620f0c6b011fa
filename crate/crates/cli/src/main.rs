//! Command-line front door: server-count sweeps as plot-ready CSV,
//! protocol runs on matrix files, bound and verdict reports, security
//! audits, and exhaustive table searches.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input, 3 point selection
//! exhausted (retryable with another seed), 4 search or audit refused as
//! too large.

use std::fmt::Write as _;
use std::hash::{BuildHasher, Hasher, RandomState};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use num_traits::ToPrimitive;

use sdmm::audit::{exhaustive_mi_audit, rank_audit, MaskMode};
use sdmm::degree_table::{build_gasp_exponents, count_servers, SchemeParams};
use sdmm::field::DEFAULT_MODULUS;
use sdmm::formulas::{
    collusion_tolerance, compare_small_big, complexity_exponent, lower_bounds,
    n_small_pre_symmetric, optimality_check, parse_ratio, ComplexityParams, Optimality,
};
use sdmm::matrix_io::{matrix_to_string, read_matrix_file, write_matrix_file};
use sdmm::protocol::{run_protocol, SchemeInstance, DEFAULT_MAX_ATTEMPTS};
use sdmm::search::{exhaustive_search, SearchResult, SearchSpace};
use sdmm::{Error, PrimeField};

#[derive(Parser)]
#[command(
    name = "sdmm",
    version,
    about = "Secure distributed matrix multiplication: counts, protocol runs, audits, searches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Server counts of the chain constructions over a T sweep, as CSV
    Tables(TablesArgs),
    /// Multiply two matrix files through the full protocol
    Multiply(MultiplyArgs),
    /// Lower bounds and the optimality verdict at one parameter point
    Bounds(PointArgs),
    /// Compare the shortest and longest chain constructions
    Compare(PointArgs),
    /// Server budget when a fraction of all servers may collude
    Collusion(CollusionArgs),
    /// User-side cost exponents of the asymptotic scheme family
    Complexity(ComplexityArgs),
    /// Security audit of a concrete instance
    Audit(AuditArgs),
    /// Exhaustive search over admissible degree tables
    Search(SearchArgs),
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long = "K")]
    k: u32,
    #[arg(long = "L")]
    l: u32,
    /// Sweep T from 1 to this value inclusive
    #[arg(long = "T-max")]
    t_max: u32,
    /// Chain lengths to tabulate, comma separated
    #[arg(long = "r-list", value_delimiter = ',', required = true)]
    r_list: Vec<u32>,
    /// Count only the servers needed after offline precomputation, and
    /// append the lower-bound reference series
    #[arg(long)]
    precompute: bool,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MultiplyArgs {
    /// Expected modulus; must match the one declared in both files
    #[arg(long)]
    q: Option<u64>,
    #[arg(long = "K")]
    k: u32,
    #[arg(long = "L")]
    l: u32,
    #[arg(long = "T")]
    t: u32,
    /// Chain length of the exponent construction
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long = "a-file")]
    a_file: PathBuf,
    #[arg(long = "b-file")]
    b_file: PathBuf,
    /// Masking and point-selection seed; defaults to OS entropy, echoed
    /// on standard error so any run can be reproduced
    #[arg(long)]
    seed: Option<u64>,
    /// Write the product here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report server count, per-server traffic, and precompute size
    /// (on standard output with --out, on standard error otherwise)
    #[arg(long)]
    transcript: bool,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long = "K")]
    k: u32,
    #[arg(long = "L")]
    l: u32,
    #[arg(long = "T")]
    t: u32,
    /// Machine-readable metric,value output
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CollusionArgs {
    #[arg(long = "K")]
    k: u32,
    #[arg(long = "L")]
    l: u32,
    /// Colluding fraction of all servers: a/b, integer, or decimal
    #[arg(long)]
    delta: String,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Machine-readable metric,value output
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Server-side matrix multiplication exponent: a/b, integer, or decimal
    #[arg(long)]
    omega: String,
    /// Block-split parameter in [0, 1]; the optimum is reported regardless
    #[arg(long, default_value = "0")]
    epsilon: String,
    /// Colluding fraction of all servers
    #[arg(long, default_value = "0")]
    delta: String,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Machine-readable metric,value output
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long = "K")]
    k: u32,
    #[arg(long = "L")]
    l: u32,
    #[arg(long = "T")]
    t: u32,
    /// Chain length of the exponent construction
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Field modulus
    #[arg(long, default_value_t = DEFAULT_MODULUS)]
    q: u64,
    /// Point-selection seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AuditKind::Rank)]
    mode: AuditKind,
    /// Colluding subset size (mi mode only); defaults to the tolerance T
    #[arg(long = "subset-size")]
    subset_size: Option<usize>,
    /// Mask distribution (mi mode only)
    #[arg(long, value_enum, default_value_t = MaskKind::Uniform)]
    mask: MaskKind,
    /// Machine-readable metric,value output
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long = "K")]
    k: u32,
    #[arg(long = "L")]
    l: u32,
    #[arg(long = "T")]
    t: u32,
    /// Largest exponent allowed in a candidate table; defaults to the
    /// chain construction's maximum plus 2
    #[arg(long = "D")]
    max_exponent: Option<u64>,
    /// Machine-readable CSV output
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Offline bundle available
    Pre,
    /// No precomputation
    Nopre,
}

impl Mode {
    fn precompute(self) -> bool {
        self == Mode::Pre
    }

    fn describe(self) -> &'static str {
        match self {
            Mode::Pre => "with precomputation",
            Mode::Nopre => "without precomputation",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AuditKind {
    /// Invertibility screen of every mask power submatrix
    Rank,
    /// Exhaustive mutual-information enumeration (tiny instances only)
    Mi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MaskKind {
    /// Honest uniform masks
    Uniform,
    /// Broken implementation hook: the matrix-A masks forced to zero
    ZeroR,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::PointSelectionFailed { .. } => 3,
        Error::SearchTooLarge { .. } | Error::AuditTooLarge(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Tables(args) => cmd_tables(&args),
        Command::Multiply(args) => cmd_multiply(&args),
        Command::Bounds(args) => cmd_bounds(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Collusion(args) => cmd_collusion(&args),
        Command::Complexity(args) => cmd_complexity(&args),
        Command::Audit(args) => cmd_audit(&args),
        Command::Search(args) => cmd_search(&args),
    }
}

/// k, l, t at least 1 and within range; the r = 1 chain always exists then.
fn require_klt(k: u32, l: u32, t: u32) -> Result<(), Error> {
    SchemeParams::new(k, l, t, 1).map(|_| ())
}

fn entropy_seed() -> u64 {
    RandomState::new().build_hasher().finish()
}

fn decimal(r: Rational64) -> String {
    match r.to_f64() {
        Some(v) => format!("{v}"),
        None => "?".to_string(),
    }
}

fn cmd_tables(args: &TablesArgs) -> Result<(), Error> {
    require_klt(args.k, args.l, args.t_max)?;
    let mut out = String::new();
    let kind = if args.precompute { "N_pre" } else { "N" };
    let _ = writeln!(
        out,
        "# chain construction server counts for K={} L={}",
        args.k, args.l
    );
    let _ = writeln!(out, "T,r,{kind}");
    for t in 1..=args.t_max {
        for &r in &args.r_list {
            match SchemeParams::new(args.k, args.l, t, r) {
                Ok(params) => {
                    let n = count_servers(&build_gasp_exponents(&params), args.precompute);
                    let _ = writeln!(out, "{t},{r},{n}");
                }
                Err(err) => {
                    let _ = writeln!(out, "# T={t} r={r} skipped: {err}");
                }
            }
        }
        if args.precompute {
            // the always-valid first bound is the reference series
            let bound = lower_bounds(args.k, args.l, t).bound1;
            let _ = writeln!(out, "{t},bound,{bound}");
        }
    }
    emit(args.out.as_deref(), &out)
}

fn emit(path: Option<&std::path::Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_multiply(args: &MultiplyArgs) -> Result<(), Error> {
    let a = read_matrix_file(&args.a_file)?;
    let b = read_matrix_file(&args.b_file)?;
    let (qa, qb) = (a.field().modulus(), b.field().modulus());
    if qa != qb {
        return Err(Error::FieldMismatch(qa, qb));
    }
    if let Some(q) = args.q {
        if q != qa {
            return Err(Error::InvalidParameters(format!(
                "--q {q} does not match the modulus {qa} declared in the files"
            )));
        }
    }
    let params = SchemeParams::new(args.k, args.l, args.t, args.r)?;
    let exps = build_gasp_exponents(&params);
    let seed = args.seed.unwrap_or_else(entropy_seed);
    eprintln!("seed: {seed}");
    let run = run_protocol(&a, &b, &exps, seed, DEFAULT_MAX_ATTEMPTS)?;
    match &args.out {
        Some(path) => write_matrix_file(path, &run.product)?,
        None => print!("{}", matrix_to_string(&run.product)),
    }
    if args.transcript {
        let tr = &run.transcript;
        let text = format!(
            "servers (N_pre): {}\nupload per server: {}\ndownload per server: {}\nprecomputed elements: {}\n",
            tr.servers, tr.upload_per_server, tr.download_per_server, tr.precomputed_elements
        );
        if args.out.is_some() {
            print!("{text}");
        } else {
            eprint!("{text}");
        }
    }
    Ok(())
}

fn cmd_bounds(args: &PointArgs) -> Result<(), Error> {
    require_klt(args.k, args.l, args.t)?;
    let report = lower_bounds(args.k, args.l, args.t);
    let achieved = n_small_pre_symmetric(args.k, args.l, args.t);
    let verdict = optimality_check(args.k, args.l, args.t);
    if args.csv {
        println!("metric,value");
        println!("bound1,{}", report.bound1);
        if let Some(b2) = report.bound2 {
            println!("bound2,{b2}");
        }
        for (i, b3) in report.bound3_by_m.iter().enumerate() {
            println!("bound3[m={}],{b3}", i + 1);
        }
        println!("best_bound,{}", report.best);
        println!("construction_n_pre,{achieved}");
        let gap = match verdict {
            Optimality::BoundAchieving => 0,
            Optimality::Gap(g) => g,
        };
        println!("optimality_gap,{gap}");
    } else {
        println!(
            "lower bounds on N_pre for K={} L={} T={}",
            args.k, args.l, args.t
        );
        println!("  bound 1: {}", report.bound1);
        match report.bound2 {
            Some(b2) => println!("  bound 2: {b2}"),
            None => println!("  bound 2: n/a (needs min(K, L, T) >= 2)"),
        }
        let series: Vec<String> = report.bound3_by_m.iter().map(i64::to_string).collect();
        println!("  bound 3 over m = 1..{}: {}", args.t, series.join(" "));
        println!("  best bound: {}", report.best);
        println!("shortest-chain construction N_pre: {achieved}");
        match verdict {
            Optimality::BoundAchieving => println!("verdict: bound-achieving"),
            Optimality::Gap(g) => println!("verdict: gap {g}"),
        }
    }
    Ok(())
}

fn cmd_compare(args: &PointArgs) -> Result<(), Error> {
    require_klt(args.k, args.l, args.t)?;
    let small = n_small_pre_symmetric(args.k, args.l, args.t);
    let big = big_chain_symmetric(args.k, args.l, args.t)?;
    let verdict = compare_small_big(args.k, args.l, args.t);
    if args.csv {
        println!("metric,value");
        println!("small_n_pre,{small}");
        println!("big_n_pre,{big}");
        println!("verdict,{verdict:?}");
    } else {
        println!("K={} L={} T={}", args.k, args.l, args.t);
        println!("  shortest chain (r=1) N_pre: {small}");
        println!("  longest chain (r=min(K,T)) N_pre: {big}");
        println!("verdict: {verdict:?}");
    }
    Ok(())
}

/// Longest-chain server count, taking the better of the two orientations
/// (each with its own admissible maximal r).
fn big_chain_symmetric(k: u32, l: u32, t: u32) -> Result<u64, Error> {
    let direct = SchemeParams::new(k, l, t, k.min(t))?;
    let flipped = SchemeParams::new(l, k, t, l.min(t))?;
    let a = count_servers(&build_gasp_exponents(&direct), true);
    let b = count_servers(&build_gasp_exponents(&flipped), true);
    Ok(a.min(b))
}

fn cmd_collusion(args: &CollusionArgs) -> Result<(), Error> {
    let delta = parse_ratio(&args.delta)?;
    let report = collusion_tolerance(args.k, args.l, delta, args.mode.precompute())?;
    if args.csv {
        println!("metric,value");
        println!("delta,{delta}");
        println!(
            "verdict,{}",
            if report.feasible { "feasible" } else { "infeasible" }
        );
        if let Some(threshold) = report.threshold {
            println!("threshold,{threshold}");
        }
        if let Some(servers) = report.servers_required {
            println!("servers_required,{servers}");
        }
    } else {
        println!(
            "colluding fraction {delta} {} at K={} L={}",
            args.mode.describe(),
            args.k,
            args.l
        );
        if report.feasible {
            println!("verdict: feasible");
            if let Some(threshold) = report.threshold {
                println!("  threshold: {threshold}");
            }
            if let Some(servers) = report.servers_required {
                println!("  servers required: {servers}");
            }
        } else {
            println!("verdict: infeasible (no finite server count suffices)");
        }
    }
    Ok(())
}

fn cmd_complexity(args: &ComplexityArgs) -> Result<(), Error> {
    let params = ComplexityParams {
        omega: parse_ratio(&args.omega)?,
        epsilon: parse_ratio(&args.epsilon)?,
        delta: parse_ratio(&args.delta)?,
    };
    let report = complexity_exponent(&params, args.mode.precompute())?;
    if args.csv {
        println!("metric,value");
        println!("omega,{}", params.omega);
        println!("epsilon,{}", params.epsilon);
        println!("exponent,{}", report.exponent);
        println!("optimal_epsilon,{}", report.optimal_epsilon);
        println!("optimal_exponent,{}", report.optimal_exponent);
        println!("optimal_exponent_decimal,{}", decimal(report.optimal_exponent));
    } else {
        println!(
            "user-side cost {} at omega = {}",
            args.mode.describe(),
            params.omega
        );
        println!(
            "  exponent at epsilon {}: {} (= {})",
            params.epsilon,
            report.exponent,
            decimal(report.exponent)
        );
        println!("  optimal epsilon: {}", report.optimal_epsilon);
        println!(
            "  optimal exponent: {} (= {})",
            report.optimal_exponent,
            decimal(report.optimal_exponent)
        );
    }
    Ok(())
}

fn cmd_audit(args: &AuditArgs) -> Result<(), Error> {
    if args.mode == AuditKind::Rank && (args.subset_size.is_some() || args.mask != MaskKind::Uniform)
    {
        return Err(Error::InvalidParameters(
            "--subset-size and --mask apply to the mi mode only".to_string(),
        ));
    }
    let params = SchemeParams::new(args.k, args.l, args.t, args.r)?;
    let exps = build_gasp_exponents(&params);
    let field = PrimeField::new(args.q)?;
    let instance = SchemeInstance::choose_points(field, &exps, args.seed, DEFAULT_MAX_ATTEMPTS)?;
    let report = match args.mode {
        AuditKind::Rank => rank_audit(&instance),
        AuditKind::Mi => {
            let subset_size = args.subset_size.unwrap_or(args.t as usize);
            let mask = match args.mask {
                MaskKind::Uniform => MaskMode::Uniform,
                MaskKind::ZeroR => MaskMode::BrokenZeroR,
            };
            exhaustive_mi_audit(&instance, subset_size, mask)?
        }
    };
    if args.csv {
        print!("{}", report.render_csv());
    } else {
        println!(
            "instance: K={} L={} T={} r={}, q={}, {} servers, seed {}",
            args.k,
            args.l,
            args.t,
            args.r,
            args.q,
            instance.servers(),
            args.seed
        );
        println!("{report}");
    }
    Ok(())
}

fn cmd_search(args: &SearchArgs) -> Result<(), Error> {
    let space = SearchSpace::new(args.k, args.l, args.t, args.max_exponent)?;
    let result = exhaustive_search(&space)?;
    if args.csv {
        println!("{}", SearchResult::CSV_HEADER);
        println!("{}", result.csv_row());
    } else {
        println!(
            "exhaustive search at K={} L={} T={}, exponents up to {}",
            args.k,
            args.l,
            args.t,
            space.max_exponent()
        );
        println!("  tables examined: {}", result.tables_examined);
        println!("  best N_pre: {}", result.best_n_pre);
        println!("  witness alpha_I: {:?}", result.witness.alpha_i());
        println!("  witness alpha_R: {:?}", result.witness.alpha_r());
        println!("  witness beta_I: {:?}", result.witness.beta_i());
        println!("  witness beta_R: {:?}", result.witness.beta_r());
        println!(
            "  best lower bound: {} (gap {})",
            result.best_bound, result.bound_gap
        );
    }
    Ok(())
}
