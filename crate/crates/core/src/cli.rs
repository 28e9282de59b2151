//! The `expander-cdo` command line.
//!
//! Canonical outputs (graph, certificate, attack and report files) carry no
//! timestamps and do not depend on `--threads`. Progress goes to stderr.
//!
//! Exit status: 0 success, 1 verification failure or violated bound,
//! 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::adversary::{
    build_report, search_worst, theoretical_bounds, AdversaryError, AttackResult, BoundInputs, SearchMode,
    DEFAULT_BUDGET,
};
use crate::cdo_model::{read_model, read_tranches, tv_vector, value_profile, AssetModel, ModelError, ValueProfile};
use crate::expander::{
    build_cdo_graph, explicit_delta, verify_expansion, BipartiteGraph, BuildMode, ExpansionCertificate, GraphError,
    VerifyMode,
};

#[derive(Debug, Parser)]
#[command(name = "expander-cdo", version, about = "Expander-backed CDO families: build, verify, value, attack")]
pub struct Cli {
    /// Worker threads (0 = one per core). Never changes output bytes.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a (d, r)-biregular CDO graph and its expansion certificate.
    Construct(ConstructArgs),
    /// Exhaustively check expansion of a graph file.
    Verify(VerifyArgs),
    /// Print family tranche totals for one lemon placement.
    Value(ValueArgs),
    /// Search lemon placements for the extreme tranche totals.
    Attack(AttackArgs),
    /// Print theoretical error bounds for a graph, certificate and model.
    Bound(BoundArgs),
    /// Join an attack result with the bounds and flag violations.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BuildModeArg {
    Direct,
    Theorem,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyModeArg {
    Neighbor,
    Unique,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SearchModeArg {
    Exhaustive,
    Greedy,
    Random,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long, value_enum, default_value = "direct")]
    pub mode: BuildModeArg,
    /// Graph output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Certificate output file (default: `<out>.cert`).
    #[arg(long)]
    pub cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: i64,
    #[arg(long, value_enum, default_value = "neighbor")]
    pub mode: VerifyModeArg,
}

#[derive(Debug, Args)]
pub struct ModelFiles {
    #[arg(long)]
    pub graph: PathBuf,
    /// Asset model JSON.
    #[arg(long)]
    pub model: PathBuf,
    /// Attachment points `0 a_1 ... a_s`, one line.
    #[arg(long)]
    pub tranches: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    #[command(flatten)]
    pub files: ModelFiles,
    /// Comma-separated lemon indices.
    #[arg(long, conflicts_with = "placement")]
    pub lemons: Option<String>,
    /// File of lemon indices separated by whitespace or commas.
    #[arg(long)]
    pub placement: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[command(flatten)]
    pub files: ModelFiles,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: SearchModeArg,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attack result JSON (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub files: ModelFiles,
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub files: ModelFiles,
    #[arg(long)]
    pub cert: PathBuf,
    /// Attack result JSON written by `attack`.
    #[arg(long)]
    pub attack: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-tranche CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Graph { path: String, source: GraphError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Build(#[from] GraphError),
    #[error("{0}")]
    Usage(String),
}

/// Successful runs either pass (exit 0) or report a meaningful failure (exit 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

fn io_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Io { path: path.display().to_string(), message: e.to_string() }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn read_graph(path: &Path) -> Result<BipartiteGraph, CliError> {
    BipartiteGraph::parse(&read_text(path)?).map_err(|source| CliError::Graph { path: path.display().to_string(), source })
}

fn read_cert(path: &Path) -> Result<ExpansionCertificate, CliError> {
    read_text(path)?.parse().map_err(|source| CliError::Graph { path: path.display().to_string(), source })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_text(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn to_json<S: serde::Serialize>(v: &S) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn parse_indices(text: &str, source: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("{source}: bad lemon index {t:?}"))))
        .collect()
}

struct Loaded {
    graph: BipartiteGraph,
    model: AssetModel<f64>,
    profile: ValueProfile<f64>,
}

fn load(files: &ModelFiles) -> Result<Loaded, CliError> {
    let graph = read_graph(&files.graph)?;
    let model = read_model(&files.model)?;
    let tranches = read_tranches(&files.tranches)?;
    let r = graph
        .right_degree()
        .ok_or_else(|| CliError::Usage(format!("{}: graph is not right-regular", files.graph.display())))?;
    let profile = value_profile(&model, &tranches, r)?;
    Ok(Loaded { graph, model, profile })
}

fn bound_inputs(l: &Loaded, cert: &ExpansionCertificate, ell: usize) -> Result<BoundInputs<f64>, CliError> {
    let d = l.graph.left_degree().ok_or_else(|| CliError::Usage("graph is not left-regular".into()))?;
    if cert.degree() != d as i64 {
        return Err(CliError::Usage(format!("certificate is for left degree {}, graph has {d}", cert.degree())));
    }
    Ok(BoundInputs {
        d,
        r: l.profile.r,
        m: l.graph.m(),
        ell,
        delta_cert: cert.delta,
        delta_explicit: explicit_delta(cert.alpha, l.graph.n(), l.graph.m(), d),
        k_max: usize::try_from(cert.k_max_thm).unwrap_or(usize::MAX),
        mu: l.model.mu,
        delta: l.model.delta,
        dominated: l.model.dominated,
        tranches: l.profile.tranches.clone(),
    })
}

/// Runs one parsed command, writing canonical stdout output to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Construct(a) => {
            let mode = match a.mode {
                BuildModeArg::Direct => BuildMode::Direct,
                BuildModeArg::Theorem => BuildMode::Theorem,
            };
            let (g, cert) = build_cdo_graph(a.alpha, a.n, a.m, a.d, a.r, mode)?;
            let cert_path = a.cert.clone().unwrap_or_else(|| {
                let mut p = a.out.clone().into_os_string();
                p.push(".cert");
                PathBuf::from(p)
            });
            write_text(&a.out, &g.to_text())?;
            write_text(&cert_path, &cert.to_line())?;
            if cert.vacuous {
                eprintln!("warning: certificate is vacuous (gamma = {})", cert.gamma);
            }
            eprintln!("wrote {} and {}", a.out.display(), cert_path.display());
            Ok(Outcome::Pass)
        }
        Command::Verify(a) => {
            let g = read_graph(&a.graph)?;
            let mode = match a.mode {
                VerifyModeArg::Neighbor => VerifyMode::Neighbor,
                VerifyModeArg::Unique => VerifyMode::Unique,
            };
            let rep = verify_expansion(&g, a.k, a.gamma, mode)?;
            let witness = rep.worst_subset.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(",");
            let line = format!(
                "{} k={} gamma={} checked={} worst_ratio={} worst_count={} witness={}\n",
                if rep.passed { "PASS" } else { "FAIL" },
                rep.k_max,
                rep.gamma,
                rep.subsets_checked,
                rep.worst_ratio,
                rep.worst_count,
                witness
            );
            emit(out, None, &line)?;
            Ok(if rep.passed { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Value(a) => {
            let l = load(&a.files)?;
            let lemons = match (&a.lemons, &a.placement) {
                (Some(s), _) => parse_indices(s, "--lemons")?,
                (None, Some(p)) => parse_indices(&read_text(p)?, &p.display().to_string())?,
                (None, None) => Vec::new(),
            };
            let tv = tv_vector(&l.graph, &l.profile, &lemons)?;
            let v = serde_json::json!({ "lemons": lemons, "totals": tv.totals });
            emit(out, None, &to_json(&v))?;
            Ok(Outcome::Pass)
        }
        Command::Attack(a) => {
            let l = load(&a.files)?;
            let mode = match a.mode {
                SearchModeArg::Exhaustive => SearchMode::Exhaustive,
                SearchModeArg::Greedy => SearchMode::Greedy,
                SearchModeArg::Random => SearchMode::Random,
            };
            let res = search_worst(&l.graph, &l.profile, a.ell, mode, a.budget, a.seed)?;
            eprintln!("examined {} placements, max tranche gap {:?}", res.placements_examined, res.gap_per_tranche);
            emit(out, a.out.as_deref(), &to_json(&res))?;
            Ok(Outcome::Pass)
        }
        Command::Bound(a) => {
            let l = load(&a.files)?;
            let cert = read_cert(&a.cert)?;
            let b = theoretical_bounds(&bound_inputs(&l, &cert, a.ell)?);
            emit(out, a.out.as_deref(), &to_json(&b))?;
            Ok(Outcome::Pass)
        }
        Command::Report(a) => {
            let l = load(&a.files)?;
            let cert = read_cert(&a.cert)?;
            let attack: AttackResult<f64> = serde_json::from_str(&read_text(&a.attack)?)
                .map_err(|e| io_err(&a.attack, format!("attack result: {e}")))?;
            let rep = build_report(&attack, &bound_inputs(&l, &cert, attack.ell)?, &l.graph, &l.profile)?;
            emit(out, a.out.as_deref(), &to_json(&rep))?;
            if let Some(p) = &a.csv {
                write_text(p, &rep.to_csv(&attack.tranche_points))?;
            }
            for v in &rep.violations {
                eprintln!("{v}");
            }
            Ok(if rep.passed() { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

/// Parses `args`, runs the command in a pool of `--threads` workers and
/// returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: thread pool: {e}");
            return 2;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| execute(&cli, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(o) => o.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
