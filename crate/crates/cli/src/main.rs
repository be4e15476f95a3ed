//! `cyclerep` command-line front end.
//!
//! Exit codes: 0 ok, 1 I/O, 2 parse, 3 invalid parameters, 4 dynamics
//! failure, 5 no witness, 6 identity verification failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclerep::bounds::{
    best_cheb_bound, builtin_pub_values, comparison_csv, derivation_csv, quadratic_ceiling,
    table_derivation, table_pub_vs_cheb, SeedTable, TABLE_DEGREES,
};
use cyclerep::branches::{cheb_branches, full_branch_intervals, BranchSet};
use cyclerep::dynamics::{
    cycles_to_csv, integrate, worked_example, CompiledField, CycleConfig, IntegratorConfig,
    LiftConfig,
};
use cyclerep::numfmt::fmt_num;
use cyclerep::polycore::json::{from_json, to_json};
use cyclerep::polycore::{
    chebyshev, format_rat, parse_rat, rat::to_f64, Rat, UniPoly, VectorField2,
};
use cyclerep::pullback::{build_pullback, check_exact_degree, verify_conjugacy};
use cyclerep::{svg, Error};

#[derive(Parser)]
#[command(
    name = "cyclerep",
    version,
    about = "Limit-cycle replication through polynomial pullbacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pull a field back through T_m and verify the conjugacy identity.
    Pullback {
        /// Source field as JSON.
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replicate the radial cubic's cycle through T_m.
    Example(ExampleArgs),
    /// Seed-bound tables and replication arithmetic.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
        #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
        format: Format,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Full monotone branches of a polynomial on (-1, 1).
    Branches {
        /// Use T_M.
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        cheb: Option<usize>,
        /// Polynomial as JSON `{"coeffs": [...]}`.
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Also draw the graph with branches shaded.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExampleArgs {
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Cycle radius, a rational such as 1/2 or 0.3.
    #[arg(long, default_value = "1/2")]
    rho: String,
    /// Output directory.
    #[arg(long, default_value = "example-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    eps_fix: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps_hyp: f64,
    #[arg(long, default_value_t = 1e-3)]
    margin: f64,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Published bounds against the best one-step replication bound.
    Table1,
    /// Derivation of each replication bound.
    Table2,
    /// Best replication bound for degree N.
    Query { n: u32 },
    /// k0 ((N+1)/(n0+1))^2.
    Ceiling { k0: u64, n0: u64, n: u64 },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(..) => 1,
            Failure::Core(e) => match e {
                Error::Parse(_) => 2,
                Error::InvalidParameter(_) | Error::OutOfRange { .. } | Error::MissingSeed(_) => 3,
                Error::NoWitness { .. } => 5,
                Error::IntegrationFailure { .. }
                | Error::NoReturn { .. }
                | Error::DegenerateCrossing { .. }
                | Error::SearchFailure { .. }
                | Error::PartialLift { .. } => 4,
            },
            Failure::Verification(_) => 6,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Core(e) => e.to_string(),
            Failure::Verification(s) => s.clone(),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Tolerances and parameters shared by the numerical commands.
struct RunConfig {
    lift: LiftConfig,
    rho: Rat,
}

impl RunConfig {
    fn from_args(a: &ExampleArgs) -> Result<Self, Failure> {
        for (name, v) in [
            ("tol", a.tol),
            ("eps-fix", a.eps_fix),
            ("eps-hyp", a.eps_hyp),
            ("margin", a.margin),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(
                    Error::InvalidParameter(format!("--{name} must be positive, got {v}")).into(),
                );
            }
        }
        let rho = parse_rat(&a.rho)?;
        let r = to_f64(&rho);
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "--rho must lie in (0, 1), got {}",
                a.rho
            ))
            .into());
        }
        let mut cycle = CycleConfig::default();
        cycle.ret.integ = IntegratorConfig::with_tol(a.tol);
        cycle.eps_fix = a.eps_fix;
        cycle.eps_hyp = a.eps_hyp;
        Ok(Self {
            lift: LiftConfig {
                cycle,
                margin: a.margin,
                ..LiftConfig::default()
            },
            rho,
        })
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_pullback(field: &Path, m: u32, out: &Path) -> Outcome {
    let x: VectorField2 = from_json(&read(field)?)?;
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")).into());
    }
    let y = build_pullback(&x, &chebyshev(m as usize))?;
    if !verify_conjugacy(&y, &x) {
        return Err(Failure::Verification(
            "conjugacy identity does not hold".into(),
        ));
    }
    if !check_exact_degree(&y, &x) {
        return Err(Failure::Verification(format!(
            "pullback degree {} differs from m deg X + m - 1",
            y.field_degree
        )));
    }
    write(out, &to_json(&y))?;
    println!(
        "pullback by T_{m}: deg X = {}, deg Y = {}, identity verified",
        y.source_degree, y.field_degree
    );
    Ok(())
}

fn cmd_example(args: &ExampleArgs) -> Outcome {
    let cfg = RunConfig::from_args(args)?;
    let report = match worked_example(args.m, &cfg.rho, &cfg.lift) {
        Err(Error::PartialLift {
            failed,
            found,
            expected,
        }) => {
            let list: Vec<String> = failed.iter().map(|(i, j)| format!("({i},{j})")).collect();
            eprintln!("lift failed in rectangles {}", list.join(" "));
            return Err(Error::PartialLift {
                failed,
                found,
                expected,
            }
            .into());
        }
        r => r?,
    };
    let dir = &args.out;
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.clone(), e))?;
    write(&dir.join("pullback.json"), &to_json(&report.pullback))?;
    write(&dir.join("cycles.csv"), &cycles_to_csv(&report.lifts))?;
    write(
        &dir.join("cycles.json"),
        &serde_json::to_string_pretty(&report.lifts).expect("records serialize"),
    )?;
    let mut residuals = String::from("i,j,max_curve_residual\n");
    for (rec, r) in report.lifts.iter().zip(&report.curve_residuals) {
        let b = rec.rect.expect("lifted cycles carry a rectangle");
        let _ = writeln!(residuals, "{},{},{}", b.i, b.j, fmt_num(*r));
    }
    write(&dir.join("residuals.csv"), &residuals)?;

    let integ = cfg.lift.cycle.ret.integ;
    let source = CompiledField::new(&report.source);
    let base_orbit = integrate(&source, report.base.anchor, report.base.period, integ)?.sample(400);
    write(
        &dir.join("phase_portrait.svg"),
        &svg::phase_portrait(&source, &[base_orbit]),
    )?;
    let lifted = CompiledField::new(&report.pullback.field);
    let orbits = report
        .lifts
        .iter()
        .map(|rec| Ok(integrate(&lifted, rec.anchor, rec.period, integ)?.sample(400)))
        .collect::<Result<Vec<_>, Error>>()?;
    let set = cheb_branches(args.m as usize)?;
    write(
        &dir.join("branch_grid.svg"),
        &svg::branch_grid(&set, &orbits),
    )?;

    println!(
        "rho = {}, m = {}: deg Y = {}, base multiplier {}, {} cycles lifted",
        format_rat(&cfg.rho),
        args.m,
        report.pullback.field_degree,
        fmt_num(report.base.multiplier),
        report.lifts.len()
    );
    print!("{}", cycles_to_csv(&report.lifts));
    Ok(())
}

fn cmd_bounds(which: &BoundsCommand, format: Format, out: Option<&Path>) -> Outcome {
    let seeds = SeedTable::from_env()?;
    let text = match which {
        BoundsCommand::Table1 => {
            let rows = table_pub_vs_cheb(&seeds, &builtin_pub_values())?;
            match format {
                Format::Csv => comparison_csv(&rows),
                Format::Json => pretty(serde_json::to_value(&rows).expect("rows serialize")),
            }
        }
        BoundsCommand::Table2 => {
            let rows = table_derivation(&seeds, &TABLE_DEGREES)?;
            match format {
                Format::Csv => derivation_csv(&rows),
                Format::Json => pretty(serde_json::to_value(&rows).expect("rows serialize")),
            }
        }
        BoundsCommand::Query { n } => {
            let e = best_cheb_bound(*n, &seeds)?;
            match format {
                Format::Csv => {
                    let (wn, wm) = e.witness.expect("replication bounds carry a witness");
                    format!(
                        "N,value,\"witness (n,m)\",source,chain\n{},{},\"({wn},{wm})\",{},{}\n",
                        e.target_degree,
                        e.value,
                        e.source,
                        e.chain()
                    )
                }
                Format::Json => {
                    let mut v = serde_json::to_value(&e).expect("bound entries serialize");
                    v["chain"] = e.chain().into();
                    pretty(v)
                }
            }
        }
        BoundsCommand::Ceiling { k0, n0, n } => {
            let c = quadratic_ceiling(*k0, *n0, *n)?;
            let value = if c.is_integer() {
                c.to_integer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            match format {
                Format::Csv => format!("k0,n0,N,ceiling\n{k0},{n0},{n},{value}\n"),
                Format::Json => {
                    pretty(serde_json::json!({"k0": k0, "n0": n0, "N": n, "ceiling": value}))
                }
            }
        }
    };
    emit(out, &text)
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn cmd_branches(
    cheb: Option<usize>,
    poly: Option<&Path>,
    svg_out: Option<&Path>,
    tol: f64,
    out: Option<&Path>,
) -> Outcome {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("--tol must be positive, got {tol}")).into());
    }
    let (p, set): (UniPoly, BranchSet) = match (cheb, poly) {
        (Some(m), _) => (chebyshev(m), cheb_branches(m)?),
        (None, Some(path)) => {
            let p: UniPoly = from_json(&read(path)?)?;
            let set = full_branch_intervals(&p, tol)?;
            (p, set)
        }
        (None, None) => unreachable!("clap requires one of --cheb and --poly"),
    };
    for w in &set.degenerate {
        eprintln!(
            "warning: degenerate critical point near x = {} (|p'| = {})",
            fmt_num(w.at),
            fmt_num(w.derivative.abs())
        );
    }
    if let Some(path) = svg_out {
        write(path, &svg::polynomial_graph(&p, &set))?;
    }
    emit(
        out,
        &(serde_json::to_string_pretty(&set).expect("branch sets serialize") + "\n"),
    )
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Pullback { field, m, out } => cmd_pullback(&field, m, &out),
        Command::Example(args) => cmd_example(&args),
        Command::Bounds { which, format, out } => cmd_bounds(&which, format, out.as_deref()),
        Command::Branches {
            cheb,
            poly,
            svg,
            tol,
            out,
        } => cmd_branches(cheb, poly.as_deref(), svg.as_deref(), tol, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
