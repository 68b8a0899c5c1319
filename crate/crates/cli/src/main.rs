use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tempcert::certify::{certify, CertificationReport, Tolerances};
use tempcert::fixtures::{write_fixtures, DEFAULT_SEED};
use tempcert::inequalities::{
    bound_formulas, build_in, classical_bound_bruteforce, evaluate, family, EvaluationReport, Inequality,
    MAX_BRUTE_FORCE_LABELS,
};
use tempcert::model::Realization;
use tempcert::{with_workers, Error};

#[derive(Parser)]
#[command(name = "tempcert", version, about = "Temporal non-contextuality inequalities and graph-state self-testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical and quantum bounds, with a brute-force check when feasible.
    Bounds {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Export an inequality as JSON.
    Build {
        #[arg(long)]
        n: usize,
        /// Inequality family: temporal or noncontextual.
        #[arg(long, default_value = "temporal")]
        family: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate an inequality on a realization file.
    Evaluate {
        /// Realization JSON.
        #[arg(long)]
        input: PathBuf,
        /// Exported inequality JSON; overrides --family/--n.
        #[arg(long)]
        inequality: Option<PathBuf>,
        #[arg(long, default_value = "temporal")]
        family: String,
        /// Qubit count of the built-in inequality (default: the realization's).
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the self-testing pipeline on a realization file.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tol_relation: Option<f64>,
        #[arg(long)]
        tol_rank: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Write the reproducible fixture set and its manifest.
    SelftestFixtures {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID_N: u8 = 2;
const EXIT_SCHEMA: u8 = 3;
const EXIT_OBSERVABLE: u8 = 4;
const EXIT_IO: u8 = 5;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::QubitCount(..)
        | Error::CoverTooLong(..)
        | Error::DenseLimit { .. }
        | Error::TooManyLabels(..)
        | Error::InvalidArgument(_) => EXIT_INVALID_N,
        Error::Schema(_) | Error::Parse(_) | Error::MissingLabel(_) | Error::DimMismatch(..) => EXIT_SCHEMA,
        Error::InvalidObservable { .. } | Error::InvalidState(_) | Error::NonReal(_) => EXIT_OBSERVABLE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_FAIL,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(common: &Common, text: &str) -> Result<(), Error> {
    match &common.output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn bounds(n: usize, common: &Common) -> Result<u8, Error> {
    let b = bound_formulas(n)?;
    let labels = 2 * n + n * (n - 1) / 2;
    let brute = if labels <= MAX_BRUTE_FORCE_LABELS {
        let ineq = build_in(n)?;
        Some(with_workers(common.workers, || classical_bound_bruteforce(&ineq, 0))??)
    } else {
        eprintln!("brute force skipped: {labels} labels > {MAX_BRUTE_FORCE_LABELS}");
        None
    };
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "n": n,
            "eta_C": b.eta_c,
            "eta_Q": b.eta_q,
            "alpha": b.alpha,
            "label_count": labels,
            "brute_force": brute,
            "agrees": brute.map(|v| v == b.eta_c),
        }))
        .expect("serialisable"),
        Format::Table => {
            let bf = match brute {
                Some(v) => format!("{v} ({})", if v == b.eta_c { "agrees" } else { "DISAGREES" }),
                None => format!("skipped ({labels} labels > {MAX_BRUTE_FORCE_LABELS})"),
            };
            format!(
                "n            {n}\nalpha        {}\neta_C        {}\neta_Q        {}\nbrute force  {bf}",
                b.alpha, b.eta_c, b.eta_q
            )
        }
    };
    emit(common, &text)?;
    Ok(0)
}

fn build(n: usize, fam: &str, common: &Common) -> Result<u8, Error> {
    let ineq = family(fam)?.build(n)?;
    let text = match common.format {
        Format::Json => ineq.to_json(),
        Format::Table => ineq
            .to_export()
            .iter()
            .map(|t| format!("{:>4}  {:<28} cover {}", t.coeff, t.labels.join(" "), t.cover.len()))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(common, &text)?;
    Ok(0)
}

fn evaluation_table(r: &EvaluationReport) -> String {
    let mut lines = vec![format!("{:>4}  {:<28} {:>14}", "coef", "term", "value")];
    for t in &r.terms {
        lines.push(format!("{:>4}  {:<28} {:>14.10}", t.coeff, t.labels.join(" "), t.value));
    }
    lines.push(format!("total    {:.10}", r.total));
    lines.push(format!("eta_C    {}", r.eta_c));
    lines.push(format!("eta_Q    {}", r.eta_q));
    lines.push(format!("deficit  {:.3e}", r.deficit));
    lines.push(format!("violated {}", r.violated));
    if let Some(s) = r.max_ordering_spread {
        lines.push(format!("ordering spread {s:.3e}"));
    }
    lines.join("\n")
}

fn run_evaluate(
    input: &Path,
    ineq_path: Option<&Path>,
    fam: &str,
    n: Option<usize>,
    common: &Common,
) -> Result<u8, Error> {
    let real = Realization::from_json(&read(input)?)?;
    let ineq = match ineq_path {
        Some(p) => Inequality::from_json(&read(p)?)?,
        None => family(fam)?.build(n.unwrap_or(real.n()))?,
    };
    let report = with_workers(common.workers, || evaluate(&ineq, &real))??;
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serialisable"),
        Format::Table => evaluation_table(&report),
    };
    emit(common, &text)?;
    Ok(0)
}

fn certify_table(r: &CertificationReport) -> String {
    let mut lines = vec![
        format!("n / dim         {} / {}", r.n, r.dim),
        format!("T_n             {:.10} (eta_C {}, eta_Q {})", r.tn_value, r.eta_c, r.eta_q),
        format!("max relation    {:.3e}", r.relation_residuals.max()),
        format!("max algebra     {:.3e}", r.algebra_residuals.max()),
        format!("subspace dim    {}", r.subspace_dim),
    ];
    if let Some(h) = &r.hatted_residuals {
        lines.push(format!("max hatted      {:.3e}", h.max()));
    }
    if !r.nij_signs.is_empty() {
        let signs: Vec<String> = r.nij_signs.iter().map(|(k, v)| format!("{k}:{v:+}")).collect();
        lines.push(format!("N signs         {}", signs.join(" ")));
    }
    if let Some(f) = r.fidelity {
        lines.push(format!("fidelity        {f:.12}"));
    }
    if let Some(s) = &r.stopped_at {
        lines.push(format!("stopped at      {s}"));
    }
    lines.push(format!("verdict         {}", r.verdict));
    for f in r.failures.iter().take(20) {
        lines.push(format!("  - {f}"));
    }
    if r.failures.len() > 20 {
        lines.push(format!("  ... {} more", r.failures.len() - 20));
    }
    lines.join("\n")
}

fn run_certify(input: &Path, rel: Option<f64>, rank: Option<f64>, common: &Common) -> Result<u8, Error> {
    let real = Realization::from_json(&read(input)?)?;
    let mut tol = Tolerances::for_provenance(real.provenance());
    if let Some(t) = rel {
        tol.relation = t;
    }
    if let Some(t) = rank {
        tol.rank = t;
    }
    let report = with_workers(common.workers, || certify(&real, tol))??;
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Table => certify_table(&report),
    };
    emit(common, &text)?;
    if !report.passed() {
        eprintln!("certification failed: {} check(s)", report.failures.len());
        return Ok(EXIT_FAIL);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Bounds { n, common } => bounds(n, &common),
        Command::Build { n, family, common } => build(n, &family, &common),
        Command::Evaluate {
            input,
            inequality,
            family,
            n,
            common,
        } => run_evaluate(&input, inequality.as_deref(), &family, n, &common),
        Command::Certify {
            input,
            tol_relation,
            tol_rank,
            common,
        } => run_certify(&input, tol_relation, tol_rank, &common),
        Command::SelftestFixtures { output, seed, workers } => {
            let manifest = with_workers(workers, || write_fixtures(&output, seed))??;
            eprintln!("wrote {} fixtures to {}", manifest.entries.len(), output.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
