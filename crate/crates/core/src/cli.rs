//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library and maps the outcome
//! to an exit code: 0 success, 1 negative answer, 2 indeterminate, 3 usage or
//! I/O error. Every report is JSON with floats rounded to `1e-12`, so equal
//! inputs give byte-identical output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::certify::{search_stress, verify_super_stable, Certificate, Verdict};
use crate::construct::{
    add_edge_with, attach_ear, cone_certificate, gallery, lift_adjacency, realize_from_minor, remove_coincident, slice,
    slide, split_vertex_certificate, subdivide_cable_at, ConedCertificate, ConstructOptions, GalleryName, Hyperplane,
    SplitSpec,
};
use crate::error::Error;
use crate::minors::try_has_minor;
use crate::multigraph::{Multigraph, VertexId};
use crate::params::bounds::param_report_with_budget;
use crate::params::treedec::DEFAULT_TD_BUDGET;
use crate::params::{fold, fold_optimal, TreeDecomposition};
use crate::symmat::SymMatrix;
use crate::tensegrity::{Sign, Stress, Tensegrity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Objective evaluations spent by `verify` when no stress is supplied.
const SEARCH_BUDGET: usize = 4000;

#[derive(Parser, Debug)]
#[command(name = "superstab", version, about = "Super stable tensegrities and multigraph parameters")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Global {
    /// Tolerance for spectral and geometric decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check super stability of a tensegrity file.
    Verify {
        input: PathBuf,
        /// Stress file (`{"omega": [...]}`); otherwise the file's own
        /// `omega`, otherwise a seeded search.
        #[arg(long)]
        stress: Option<PathBuf>,
    },
    /// Emit a named gallery certificate, e.g. `prism` or `complete(5)`.
    Gallery { name: String },
    /// Apply a construction operator to a certificate.
    Construct {
        #[command(subcommand)]
        op: ConstructOp,
    },
    /// Bounds on λ, ν and rd with witnesses.
    Param {
        graph: PathBuf,
        /// Alias for `--out`.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TD_BUDGET)]
        budget: usize,
    },
    /// Test whether the second graph is a minor of the first.
    Minor { graph: PathBuf, minor: PathBuf },
    /// Fold a tensegrity along a lacking tree decomposition.
    Fold {
        input: PathBuf,
        /// Decomposition file; otherwise a lacking optimal one is searched.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TD_BUDGET)]
        budget: usize,
    },
    /// Run the jobs of a manifest in parallel.
    Batch { manifest: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SignArg {
    Cable,
    Strut,
}

#[derive(Subcommand, Debug)]
enum ConstructOp {
    Cone {
        input: PathBuf,
    },
    /// Lift a matrix in the adjacency space of a graph to a coned certificate.
    Lift {
        graph: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    Slide {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        scales: Vec<f64>,
    },
    Slice {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        normal: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        offset: f64,
    },
    RemoveCoincident {
        input: PathBuf,
    },
    AddEdge {
        input: PathBuf,
        u: VertexId,
        v: VertexId,
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
    },
    Subdivide {
        input: PathBuf,
        edge: usize,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
    },
    Ear {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        path: Vec<VertexId>,
    },
    Split {
        input: PathBuf,
        vertex: VertexId,
        /// Edges moved to the new vertex.
        #[arg(long, value_delimiter = ',', required = true)]
        block: Vec<usize>,
        #[arg(long)]
        injective: bool,
    },
    /// Build a certificate for a graph from a certificate for one of its minors.
    Realize {
        graph: PathBuf,
        #[arg(long)]
        from: PathBuf,
    },
}

/// A tensegrity file: the tensegrity fields plus an optional stress.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensegrityFile {
    #[serde(flatten)]
    pub tensegrity: Tensegrity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Stage { source, .. } => exit_code(source),
        Error::Verification(_) | Error::Continuation(_) | Error::NotLacking(_) | Error::Fold(_) => EXIT_NEGATIVE,
        Error::Indeterminate(_) => EXIT_INDETERMINATE,
        _ => EXIT_USAGE,
    }
}

struct Outcome {
    value: Value,
    code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Outcome {
        Outcome { value, code: EXIT_OK }
    }
}

/// Parse `argv` (program name first), run it and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let g = cli.global.clone();
    let mut out = g.out.clone();
    if let Command::Param { report: Some(r), .. } = &cli.command {
        out = Some(r.clone());
    }
    let outcome = dispatch(cli.command, &g)?;
    let text = render(&outcome.value, g.format);
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::usage(e.to_string()))?;
        }
    }
    Ok(outcome.code)
}

fn dispatch(command: Command, g: &Global) -> Result<Outcome, Failure> {
    match command {
        Command::Verify { input, stress } => verify(&input, stress.as_deref(), g),
        Command::Gallery { name } => {
            let name: GalleryName = name.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
            Ok(Outcome::ok(artifact(&gallery(&name)?)))
        }
        Command::Construct { op } => construct(op, g),
        Command::Param { graph, budget, .. } => {
            let graph: Multigraph = read_json(&graph)?;
            let report = param_report_with_budget(&graph, budget)?;
            Ok(Outcome::ok(to_value(&report)))
        }
        Command::Minor { graph, minor } => {
            let host: Multigraph = read_json(&graph)?;
            let h: Multigraph = read_json(&minor)?;
            let model = try_has_minor(&host, &h)?;
            let code = if model.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome { value: json!({ "minor": model.is_some(), "model": model }), code })
        }
        Command::Fold { input, td, budget } => {
            let file: TensegrityFile = read_json(&input)?;
            let t = file.tensegrity;
            let (td, res) = match td {
                Some(path) => {
                    let td: TreeDecomposition = read_json(&path)?;
                    let res = fold(&t, &td, g.tol)?;
                    (td, res)
                }
                None => fold_optimal(&t, budget, g.tol)?,
            };
            let code = if res.deformation.ok { EXIT_OK } else { EXIT_NEGATIVE };
            let value = json!({
                "dim": res.dim,
                "unchanged": res.unchanged,
                "deformation": res.deformation,
                "points": columns(&res.points),
                "decomposition": td,
            });
            Ok(Outcome { value, code })
        }
        Command::Batch { manifest } => batch(&manifest),
    }
}

fn verify(input: &Path, stress: Option<&Path>, g: &Global) -> Result<Outcome, Failure> {
    let file: TensegrityFile = read_json(input)?;
    let t = file.tensegrity;
    let omega = match stress {
        Some(path) => Some(read_json::<Stress>(path)?),
        None => file.omega.map(Stress::new),
    };
    let w = match omega {
        Some(w) => w,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            match search_stress(&t, g.tol, SEARCH_BUDGET, &mut rng) {
                Some(w) => w,
                None => {
                    let value = json!({
                        "verdict": Verdict::Indeterminate,
                        "diagnostics": ["no certifying stress found by search; this proves nothing"],
                    });
                    return Ok(Outcome { value, code: EXIT_INDETERMINATE });
                }
            }
        }
    };
    let cert = verify_super_stable(&t, &w, g.tol);
    let code = match cert.verdict {
        Verdict::SuperStable => EXIT_OK,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
        _ => EXIT_NEGATIVE,
    };
    let mut value = to_value(&cert.report());
    value["omega"] = to_value(&w.omega);
    Ok(Outcome { value, code })
}

fn construct(op: ConstructOp, g: &Global) -> Result<Outcome, Failure> {
    let opts = ConstructOptions { tol: g.tol, ..ConstructOptions::default() };
    let cert = match op {
        ConstructOp::Cone { input } => cone_certificate(&load_certificate(&input, g.tol)?)?.certificate,
        ConstructOp::Lift { graph, matrix } => {
            let graph: Multigraph = read_json(&graph)?;
            let a: SymMatrix = read_json(&matrix)?;
            lift_adjacency(&graph, &a)?.certificate
        }
        ConstructOp::Slide { input, scales } => slide(&load_coned(&input, g.tol)?, &scales)?.certificate,
        ConstructOp::Slice { input, normal, offset } => slice(&load_coned(&input, g.tol)?, &Hyperplane { normal, offset })?,
        ConstructOp::RemoveCoincident { input } => remove_coincident(&load_coned(&input, g.tol)?)?.certificate,
        ConstructOp::AddEdge { input, u, v, sign } => {
            let sign = sign.map(|s| match s {
                SignArg::Cable => Sign::Cable,
                SignArg::Strut => Sign::Strut,
            });
            add_edge_with(&load_certificate(&input, g.tol)?, u, v, sign, &opts)?
        }
        ConstructOp::Subdivide { input, edge, t } => subdivide_cable_at(&load_certificate(&input, g.tol)?, edge, t)?,
        ConstructOp::Ear { input, path } => attach_ear(&load_certificate(&input, g.tol)?, &path, &opts)?,
        ConstructOp::Split { input, vertex, block, injective } => {
            let cert = load_certificate(&input, g.tol)?;
            let out = split_vertex_certificate(&cert, &SplitSpec { vertex, block0: block }, &opts, injective)?;
            let mut value = artifact(&out.certificate);
            value["split"] = json!({
                "v0": out.v0,
                "v1": out.v1,
                "bridge": out.bridge,
                "eps": out.eps,
                "explicit_form": out.explicit_form.iter().copied().collect::<Vec<f64>>(),
            });
            return Ok(Outcome::ok(value));
        }
        ConstructOp::Realize { graph, from } => {
            let graph: Multigraph = read_json(&graph)?;
            realize_from_minor(&graph, &load_certificate(&from, g.tol)?, &opts)?
        }
    };
    Ok(Outcome::ok(artifact(&cert)))
}

/// A certifying tensegrity file; the stress must be present and verify.
fn load_certificate(path: &Path, tol: f64) -> Result<Certificate, Failure> {
    let file: TensegrityFile = read_json(path)?;
    let omega =
        file.omega.ok_or_else(|| Failure::usage(format!("{}: no \"omega\" stress in input", path.display())))?;
    Ok(verify_super_stable(&file.tensegrity, &Stress::new(omega), tol).require(&path.display().to_string())?)
}

fn load_coned(path: &Path, tol: f64) -> Result<ConedCertificate, Failure> {
    Ok(ConedCertificate::from_certificate(load_certificate(path, tol)?)?)
}

/// The tensegrity, its stress and the verification report.
fn artifact(cert: &Certificate) -> Value {
    let file = TensegrityFile { tensegrity: cert.tensegrity.clone(), omega: Some(cert.stress.omega.clone()) };
    let mut value = to_value(&file);
    value["report"] = to_value(&cert.report());
    value
}

fn columns(p: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..p.ncols()).map(|c| p.column(c).iter().copied().collect()).collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: malformed JSON: {e}", path.display())))
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r = (x * 1e12).round() / 1e12;
            let r = if r == 0.0 { 0.0 } else { r };
            *v = serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn flatten(prefix: &str, v: &Value, lines: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, lines);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, lines);
            }
        }
        _ => lines.push(format!("{prefix} = {v}")),
    }
}

fn render(value: &Value, format: Format) -> String {
    let mut v = value.clone();
    round_floats(&mut v);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", &v, &mut lines);
            lines.push(String::new());
            lines.join("\n")
        }
    }
}

/// One job of a batch manifest. Relative paths are taken from the manifest's
/// directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub command: String,
    /// Operator name for `construct` jobs.
    #[serde(default)]
    pub op: Option<String>,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    /// Extra arguments appended after the inputs.
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Exit code counted as a pass; 0 when absent.
    #[serde(default)]
    pub expect: Option<i32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub jobs: Vec<JobSpec>,
}

fn job_argv(job: &JobSpec, base: &Path) -> Vec<OsString> {
    let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base.join(p) };
    let mut argv: Vec<OsString> = vec!["superstab".into(), job.command.clone().into()];
    if let Some(op) = &job.op {
        argv.push(op.into());
    }
    argv.extend(job.inputs.iter().map(|p| resolve(p).into_os_string()));
    argv.extend(job.args.iter().map(OsString::from));
    if let Some(t) = job.tol {
        argv.extend(["--tol".into(), t.to_string().into()]);
    }
    if let Some(s) = job.seed {
        argv.extend(["--seed".into(), s.to_string().into()]);
    }
    if let Some(o) = &job.out {
        argv.extend(["--out".into(), resolve(o).into_os_string()]);
    }
    argv
}

/// Run one job in-process; the report is discarded unless the job names an
/// output file.
fn run_job(argv: Vec<OsString>) -> (i32, Option<String>) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => return (EXIT_USAGE, Some(e.to_string().lines().next().unwrap_or_default().to_string())),
    };
    if matches!(cli.command, Command::Batch { .. }) {
        return (EXIT_USAGE, Some("nested batch jobs are not allowed".into()));
    }
    let g = cli.global.clone();
    let out = match &cli.command {
        Command::Param { report: Some(r), .. } => Some(r.clone()),
        _ => g.out.clone(),
    };
    match dispatch(cli.command, &g) {
        Ok(o) => {
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, render(&o.value, g.format)) {
                    return (EXIT_USAGE, Some(format!("{}: {e}", path.display())));
                }
            }
            (o.code, None)
        }
        Err(f) => (f.code, Some(f.message)),
    }
}

fn batch(path: &Path) -> Result<Outcome, Failure> {
    let manifest: Manifest = read_json(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let results: Vec<(i32, Option<String>)> =
        manifest.jobs.par_iter().map(|job| run_job(job_argv(job, &base))).collect();
    let mut passed = 0;
    let jobs: Vec<Value> = manifest
        .jobs
        .iter()
        .zip(results)
        .enumerate()
        .map(|(i, (job, (code, message)))| {
            let expect = job.expect.unwrap_or(EXIT_OK);
            let pass = code == expect;
            passed += usize::from(pass);
            let mut entry = Map::new();
            entry.insert("name".into(), json!(job.name.clone().unwrap_or_else(|| format!("job{i}"))));
            entry.insert("command".into(), json!(job.command));
            entry.insert("exit".into(), json!(code));
            entry.insert("expect".into(), json!(expect));
            entry.insert("pass".into(), json!(pass));
            if let Some(m) = message {
                entry.insert("message".into(), json!(m));
            }
            Value::Object(entry)
        })
        .collect();
    let failed = jobs.len() - passed;
    let code = if failed == 0 { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome { value: json!({ "jobs": jobs, "passed": passed, "failed": failed }), code })
}
