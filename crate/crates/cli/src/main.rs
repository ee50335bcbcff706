//! `qcone`: batch front end over the quasi-normed cone library.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when `check` finds a
//! property violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcone::check::{property_index, run_property, run_suite, PROPERTIES};
use qcone::cspace::{compare, ingest_series, parse_series_csv, DEFAULT_TRUNCATION};
use qcone::io::{parse_cone, parse_map, parse_norm, to_json, QuotientDoc};
use qcone::operators::{factorize, polar, Injectivity, LinMap, Openness};
use qcone::qnorm::{qmetric, sym_metric};
use qcone::quotient::{ClosedCertificate, QuotientOptions, QuotientSpace};
use qcone::{ConeSpace, PLQuasiNorm, QVec};

#[derive(Parser)]
#[command(name = "qcone", version, about = "Exact computations on quasi-normed cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-metric distance between two members of a cone.
    Dist {
        #[command(flatten)]
        normed: NormedArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Print max(d(x,y), d(y,x)) instead.
        #[arg(long)]
        symmetric: bool,
    },
    /// Quotient by a subcone: certificate, classes, p̂ and distances.
    Quotient {
        #[command(flatten)]
        quotient: QuotientArgs,
        /// Use p̂ even when it is only a prenorm.
        #[arg(long, global = true)]
        allow_prenorm: bool,
        #[command(subcommand)]
        action: QuotientAction,
    },
    /// Operator report for a linear map.
    Opnorm {
        #[arg(long)]
        map: PathBuf,
    },
    /// Same as `opnorm`.
    Analyze {
        #[arg(long)]
        map: PathBuf,
    },
    /// Generators of the polar of a subcone, with their norms.
    Polar {
        #[command(flatten)]
        quotient: QuotientArgs,
    },
    /// Factor a map through the quotient by its kernel.
    Factorize {
        #[arg(long)]
        map: PathBuf,
    },
    /// Complexity-space comparisons.
    Complexity {
        #[command(subcommand)]
        action: ComplexityAction,
    },
    /// Run the randomized invariant suite.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Run a single property by name.
        #[arg(long)]
        property: Option<String>,
    },
}

#[derive(Args)]
struct NormedArgs {
    /// Cone description (JSON).
    #[arg(long)]
    space: PathBuf,
    /// Quasi-norm description (JSON).
    #[arg(long)]
    norm: PathBuf,
}

#[derive(Args)]
struct QuotientArgs {
    #[command(flatten)]
    normed: NormedArgs,
    /// Subcone description (JSON).
    #[arg(long)]
    subcone: PathBuf,
}

#[derive(Subcommand)]
enum QuotientAction {
    /// Print the closedness certificate and the class coordinates.
    Build,
    /// Canonical representative of `[x]`.
    Class {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// `p̂([x])`.
    Hatp {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// `d_p̂([x], [y])`.
    Qdist {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Subcommand)]
enum ComplexityAction {
    /// Compare two cost series (`index,cost` CSV files).
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Truncation length.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        n: usize,
    },
}

enum Failure {
    Invalid(String),
    Violation(String),
}

impl From<qcone::Error> for Failure {
    fn from(e: qcone::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_normed(args: &NormedArgs) -> Result<(ConeSpace, PLQuasiNorm), Failure> {
    let space = parse_cone(&read(&args.space)?)?;
    let norm = parse_norm(&read(&args.norm)?, space.dim())?;
    Ok((space, norm))
}

fn load_quotient(args: &QuotientArgs, allow_prenorm: bool) -> Result<QuotientSpace, Failure> {
    let (space, norm) = load_normed(&args.normed)?;
    let subcone = parse_cone(&read(&args.subcone)?)?;
    Ok(QuotientSpace::build_with(
        space,
        norm,
        subcone,
        QuotientOptions { allow_prenorm },
    )?)
}

fn load_map(path: &Path) -> Result<LinMap, Failure> {
    Ok(parse_map(&read(path)?)?)
}

fn vector(text: &str, dim: usize) -> Result<QVec, Failure> {
    let v = QVec::parse_csv(text)?;
    v.check_dim(dim)?;
    Ok(v)
}

fn certificate_line(c: &ClosedCertificate) -> String {
    match c {
        ClosedCertificate::CertifiedClosed => "CERTIFIED_CLOSED".into(),
        ClosedCertificate::Falsified(w) => format!("FALSIFIED witness={w}"),
    }
}

fn injectivity_line(i: &Injectivity) -> String {
    match i {
        Injectivity::Yes => "yes".into(),
        Injectivity::No(x, y) => format!("no x={x} y={y}"),
    }
}

fn dist(normed: &NormedArgs, from: &str, to: &str, symmetric: bool) -> Outcome {
    let (space, norm) = load_normed(normed)?;
    let x = vector(from, space.dim())?;
    let y = vector(to, space.dim())?;
    let d = if symmetric {
        sym_metric(&norm, &space, &x, &y)?
    } else {
        qmetric(&norm, &space, &x, &y)?
    };
    println!("{d}");
    Ok(())
}

fn quotient(args: &QuotientArgs, allow_prenorm: bool, action: &QuotientAction) -> Outcome {
    if let QuotientAction::Build = action {
        // The certificate is reported even when the quotient is unusable.
        let qs = load_quotient(args, true)?;
        println!("{}", certificate_line(qs.certificate()));
        println!("lineality_dim={}", qs.g().dim());
        for b in qs.g().basis() {
            println!("lineality_basis {b}");
        }
        println!("class_dim={}", qs.class_dim());
        return Ok(());
    }
    let qs = load_quotient(args, allow_prenorm)?;
    let n = qs.space().dim();
    match action {
        QuotientAction::Build => unreachable!(),
        QuotientAction::Class { x } => {
            let c = qs.class_of(&vector(x, n)?)?;
            println!("rep={}", c.rep());
            println!("coords={}", qs.coords(&c)?);
        }
        QuotientAction::Hatp { x } => {
            let c = qs.class_of(&vector(x, n)?)?;
            println!("{}", qcone::rational::format_q(&qs.hat_p(&c)?));
        }
        QuotientAction::Qdist { x, y } => {
            let a = qs.class_of(&vector(x, n)?)?;
            let b = qs.class_of(&vector(y, n)?)?;
            println!("{}", qs.quotient_qmetric(&a, &b)?);
        }
    }
    Ok(())
}

fn analyze(path: &Path) -> Outcome {
    let f = load_map(path)?;
    let r = f.report()?;
    println!("continuous={}", r.continuous);
    println!("norm={}", r.norm);
    println!("p_injective={}", injectivity_line(&r.p_injective));
    println!("g_injective={}", injectivity_line(&r.g_injective));
    println!("kernel_lineality={}", certificate_line(&r.kernel_certificate));
    match &r.openness {
        Openness::Constant(m) => println!("openness={}", qcone::rational::format_q(m)),
        Openness::NotOpen(why) => println!("openness=not open ({why})"),
    }
    match &r.factorization_norms {
        Some((t, tilde)) => println!("factorization norm_t={t} norm_tilde={tilde}"),
        None => println!("factorization unavailable (kernel lineality not closed)"),
    }
    Ok(())
}

fn polar_cmd(args: &QuotientArgs) -> Outcome {
    let qs = load_quotient(args, true)?;
    let gens = polar(&qs)?;
    if gens.is_empty() {
        println!("only the zero functional");
    }
    for d in gens {
        println!(
            "functional={} norm={}",
            d.functional,
            qcone::rational::format_q(&d.norm)
        );
    }
    Ok(())
}

fn factorize_cmd(path: &Path) -> Outcome {
    let f = load_map(path)?;
    let fx = factorize(&f)?;
    println!("{}", to_json(&QuotientDoc::from_quotient(&fx.quotient)));
    println!("induced_matrix:");
    for row in fx.induced.matrix.rows() {
        println!("  {row}");
    }
    println!("norm_t={}", fx.norm_t);
    println!("norm_tilde={}", fx.norm_tilde);
    if let Some(k) = &fx.iso_constant {
        println!("iso_constant={}", qcone::rational::format_q(k));
    }
    Ok(())
}

fn complexity_compare(a: &Path, b: &Path, n: usize) -> Outcome {
    if n == 0 {
        return Err(Failure::Invalid("truncation length --n must be positive".into()));
    }
    let fa = ingest_series(&parse_series_csv(&read(a)?)?, n)?;
    let fb = ingest_series(&parse_series_csv(&read(b)?)?, n)?;
    for (name, ing) in [("a", &fa), ("b", &fb)] {
        if !ing.missing.is_empty() {
            eprintln!("note: series {name} has no cost at indices {:?}; using 0", ing.missing);
        }
    }
    println!("{}", compare(&fa.function, &fb.function)?);
    Ok(())
}

fn check(seed: u64, cases: usize, property: Option<&str>) -> Outcome {
    let outcomes = match property {
        Some(name) => {
            let i = property_index(name).ok_or_else(|| {
                let known: Vec<&str> = PROPERTIES.iter().map(|(n, _)| *n).collect();
                Failure::Invalid(format!("unknown property {name:?}; known: {}", known.join(", ")))
            })?;
            vec![run_property(i, seed, cases)]
        }
        None => run_suite(seed, cases),
    };
    let mut failed = 0;
    for out in &outcomes {
        let counts = format!("{} checked, {} skipped", out.checked, out.skipped);
        if out.passed() {
            println!("PASS {} ({counts})", out.name);
        } else {
            failed += 1;
            if out.checked < out.requested {
                println!("FAIL {} ({counts}; {} requested)", out.name, out.requested);
            } else {
                println!("FAIL {} ({} violations; {counts})", out.name, out.violations.len());
            }
            for v in out.violations.iter().take(5) {
                println!("  {v}");
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Violation(format!("{failed} properties violated")));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Dist {
            normed,
            from,
            to,
            symmetric,
        } => dist(normed, from, to, *symmetric),
        Command::Quotient {
            quotient: args,
            allow_prenorm,
            action,
        } => quotient(args, *allow_prenorm, action),
        Command::Opnorm { map } | Command::Analyze { map } => analyze(map),
        Command::Polar { quotient } => polar_cmd(quotient),
        Command::Factorize { map } => factorize_cmd(map),
        Command::Complexity {
            action: ComplexityAction::Compare { a, b, n },
        } => complexity_compare(a, b, *n),
        Command::Check {
            seed,
            cases,
            property,
        } => check(*seed, *cases, property.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
