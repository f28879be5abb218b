//! `ivol`: intrinsic volumes of ellipsoids from the command line.
//!
//! Every invocation prints one JSON object (or CSV rows) on standard output.
//! Exit status is 0 on success, 1 when a verification suite fails and 2 for
//! argument or domain errors.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ivol::intrinsic::{self, Backend};
use ivol::randsimplex::{mc_gaussian_gram_vk, SimplexExpectationRequest, SimplexModel};
use ivol::verify::{self, Suite};
use ivol::{Ellipsoid, QuadratureConfig, ScalarEstimate, SpectrumPSD};

#[derive(Parser, Debug)]
#[command(name = "ivol", version, about = "Intrinsic volumes of ellipsoids")]
struct Cli {
    /// Worker threads for Monte-Carlo runs (default: all cores). Results do
    /// not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intrinsic volumes V_k of an axis-aligned ellipsoid.
    Vk(VkArgs),
    /// Expected volume of a random simplex.
    #[command(subcommand)]
    Simplex(SimplexCommand),
    /// Volume of the parallel body E + rB.
    Steiner(SteinerArgs),
    /// Run an identity suite against independent oracles.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CommonNumeric {
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    /// Monte-Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Monte-Carlo seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct VkArgs {
    /// Comma-separated semiaxes.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    semiaxes: Vec<f64>,
    /// A single index k (0 ≤ k ≤ d).
    #[arg(long, conflicts_with = "all")]
    k: Option<usize>,
    /// All k = 0..d (the default when --k is absent).
    #[arg(long)]
    all: bool,
    /// Evaluation method; chosen per k when omitted.
    #[arg(long, value_enum)]
    backend: Option<CliBackend>,
    #[command(flatten)]
    common: CommonNumeric,
}

#[derive(Subcommand, Debug)]
enum SimplexCommand {
    /// k+1 points uniform in the ellipsoid.
    Uniform(UniformArgs),
    /// k+1 centred Gaussian points with the given covariance spectrum.
    Gaussian(GaussianArgs),
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Also estimate by direct Monte-Carlo and report the z-score.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct UniformArgs {
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    semiaxes: Vec<f64>,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    oracle: OracleArgs,
    #[command(flatten)]
    common: CommonNumeric,
}

#[derive(Args, Debug)]
struct GaussianArgs {
    /// Comma-separated covariance eigenvalues.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    eigenvalues: Vec<f64>,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    oracle: OracleArgs,
    #[command(flatten)]
    common: CommonNumeric,
}

#[derive(Args, Debug)]
struct SteinerArgs {
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    semiaxes: Vec<f64>,
    /// Parallel-body radius.
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
    #[command(flatten)]
    oracle: OracleArgs,
    #[command(flatten)]
    common: CommonNumeric,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo samples per check.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum CliBackend {
    Quadrature,
    Duality,
    Rfunction,
    SphereMc,
    GramMc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum SuiteArg {
    Ball,
    Duality,
    Prop3,
    Steiner,
    Simplex,
    All,
}

/// One result row; also the CSV row.
#[derive(Serialize, Debug)]
struct Row {
    k: Option<usize>,
    value: f64,
    error: f64,
    error_kind: &'static str,
    backend: &'static str,
    samples: u64,
}

impl Row {
    fn new(k: Option<usize>, est: ScalarEstimate, backend: &'static str) -> Self {
        Row {
            k,
            value: est.value,
            error: est.error,
            error_kind: est.error_kind.as_str(),
            backend,
            samples: est.samples,
        }
    }
}

#[derive(Serialize, Debug)]
struct OutputRecord {
    command: Vec<String>,
    inputs: Value,
    results: Value,
    version: Value,
    wall_time_ms: f64,
}

enum Failure {
    Usage(String),
}

impl From<ivol::Error> for Failure {
    fn from(e: ivol::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    inputs: Value,
    results: Value,
    rows: Vec<Row>,
    format: Format,
    passed: bool,
}

fn config(rel_tol: f64) -> Result<QuadratureConfig, Failure> {
    let cfg = QuadratureConfig::with_rel_tol(rel_tol);
    cfg.validate()?;
    Ok(cfg)
}

fn rows_value(rows: &[Row]) -> Value {
    serde_json::to_value(rows).expect("rows serialize")
}

fn run_vk(a: &VkArgs) -> Result<Output, Failure> {
    let e = Ellipsoid::new(a.semiaxes.clone())?;
    let cfg = config(a.common.rel_tol)?;
    let d = e.dim();
    let ks: Vec<usize> = match a.k {
        Some(k) => {
            if k > d {
                return Err(Failure::Usage(format!("k = {k} exceeds the dimension {d}")));
            }
            vec![k]
        }
        None => (0..=d).collect(),
    };
    let (n, seed) = (a.common.samples, a.common.seed);
    let mut rows = Vec::with_capacity(ks.len());
    for &k in &ks {
        let (est, backend) = match a.backend {
            _ if k == 0 => (ScalarEstimate::exact(1.0), Backend::ClosedForm.as_str()),
            None => {
                let b = intrinsic::default_backend(d, k);
                (intrinsic::vk_with(&e, k, b, &cfg)?, b.as_str())
            }
            Some(CliBackend::Quadrature) => (intrinsic::vk_quadrature(&e, k, &cfg)?, "quadrature"),
            Some(CliBackend::Duality) => (intrinsic::vk_duality(&e, k, &cfg)?, "duality"),
            Some(CliBackend::Rfunction) => (intrinsic::vk_rfunction(&e, k, &cfg)?, "rfunction"),
            Some(CliBackend::SphereMc) => (verify::vk_sphere_mc(&e, k, n, seed)?, "sphere_mc"),
            Some(CliBackend::GramMc) => (mc_gaussian_gram_vk(&e, k, n, seed)?, "gram_mc"),
        };
        rows.push(Row::new(Some(k), est, backend));
    }
    let mc = matches!(a.backend, Some(CliBackend::SphereMc | CliBackend::GramMc));
    let mut inputs = json!({
        "semiaxes": a.semiaxes,
        "k": a.k,
        "rel_tol": a.common.rel_tol,
        "backend": a.backend.and_then(|b| b.to_possible_value()).map(|v| v.get_name().to_string()),
    });
    if mc {
        inputs["samples"] = json!(n);
        inputs["seed"] = json!(seed);
    }
    Ok(Output {
        inputs,
        results: json!({
            "entries": rows_value(&rows),
            "warnings": intrinsic::precision_warnings(&e),
        }),
        rows,
        format: a.common.format,
        passed: true,
    })
}

fn with_oracle(
    formula: ScalarEstimate,
    oracle: Option<ScalarEstimate>,
    k: Option<usize>,
    formula_name: &'static str,
) -> (Vec<Row>, Value) {
    let mut rows = vec![Row::new(k, formula, formula_name)];
    let mut z = Value::Null;
    if let Some(mc) = oracle {
        z = json!(mc.z_score_against(&formula));
        rows.push(Row::new(k, mc, "monte_carlo"));
    }
    let results = json!({ "entries": rows_value(&rows), "z_score": z });
    (rows, results)
}

fn run_simplex(cmd: &SimplexCommand) -> Result<Output, Failure> {
    let (model, k, oracle, common, inputs) = match cmd {
        SimplexCommand::Uniform(a) => (
            SimplexModel::UniformInEllipsoid(Ellipsoid::new(a.semiaxes.clone())?),
            a.k,
            a.oracle.oracle,
            &a.common,
            json!({ "model": "uniform", "semiaxes": a.semiaxes, "k": a.k }),
        ),
        SimplexCommand::Gaussian(a) => (
            SimplexModel::Gaussian(SpectrumPSD::new(a.eigenvalues.clone())?),
            a.k,
            a.oracle.oracle,
            &a.common,
            json!({ "model": "gaussian", "eigenvalues": a.eigenvalues, "k": a.k }),
        ),
    };
    let cfg = config(common.rel_tol)?;
    let req = SimplexExpectationRequest::new(model, k)?;
    let formula = req.evaluate(&cfg)?;
    let mc = if oracle {
        Some(req.monte_carlo(common.samples, common.seed)?)
    } else {
        None
    };
    let (rows, results) = with_oracle(formula, mc, Some(k), "formula");
    Ok(Output {
        inputs: annotate(inputs, common, oracle),
        results,
        rows,
        format: common.format,
        passed: true,
    })
}

fn run_steiner(a: &SteinerArgs) -> Result<Output, Failure> {
    let e = Ellipsoid::new(a.semiaxes.clone())?;
    let cfg = config(a.common.rel_tol)?;
    let formula = intrinsic::steiner_volume(&e, a.r, &cfg)?;
    let mc = if a.oracle.oracle {
        Some(verify::steiner_mc_volume(
            &e,
            a.r,
            a.common.samples,
            a.common.seed,
        )?)
    } else {
        None
    };
    let (rows, results) = with_oracle(formula, mc, None, "steiner");
    Ok(Output {
        inputs: annotate(
            json!({ "semiaxes": a.semiaxes, "r": a.r }),
            &a.common,
            a.oracle.oracle,
        ),
        results,
        rows,
        format: a.common.format,
        passed: true,
    })
}

fn annotate(mut inputs: Value, common: &CommonNumeric, oracle: bool) -> Value {
    inputs["rel_tol"] = json!(common.rel_tol);
    inputs["oracle"] = json!(oracle);
    if oracle {
        inputs["samples"] = json!(common.samples);
        inputs["seed"] = json!(common.seed);
    }
    inputs
}

fn run_verify(a: &VerifyArgs) -> Result<Output, Failure> {
    let cfg = config(a.rel_tol)?;
    let suites: Vec<Suite> = match a.suite {
        SuiteArg::Ball => vec![Suite::Ball],
        SuiteArg::Duality => vec![Suite::Duality],
        SuiteArg::Prop3 => vec![Suite::Prop3],
        SuiteArg::Steiner => vec![Suite::Steiner],
        SuiteArg::Simplex => vec![Suite::Simplex],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut passed = true;
    let mut reports = Vec::new();
    for s in suites {
        let rep = verify::run_suite(s, a.seed, a.samples, &cfg)?;
        passed &= rep.passed();
        let checks: Vec<Value> = rep
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "measured": c.measured.value,
                    "measured_error": c.measured.error,
                    "reference": c.reference.value,
                    "reference_error": c.reference.error,
                    "metric": c.metric.as_str(),
                    "score": c.score,
                    "threshold": c.threshold,
                    "passed": c.passed(),
                })
            })
            .collect();
        reports.push(json!({ "suite": s.as_str(), "passed": rep.passed(), "checks": checks }));
    }
    Ok(Output {
        inputs: json!({ "suite": a.suite.to_possible_value().map(|v| v.get_name().to_string()), "seed": a.seed, "samples": a.samples, "rel_tol": a.rel_tol }),
        results: json!({ "passed": passed, "suites": reports }),
        rows: Vec::new(),
        format: Format::Json,
        passed,
    })
}

fn csv_field(x: f64) -> String {
    // shortest round-trip representation, same as the JSON output
    serde_json::to_string(&x).unwrap_or_default()
}

fn write_csv(rows: &[Row]) -> String {
    let mut out = String::from("k,value,error,error_kind,backend,samples\n");
    for r in rows {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{k},{},{},{},{},{}\n",
            csv_field(r.value),
            csv_field(r.error),
            r.error_kind,
            r.backend,
            r.samples
        ));
    }
    out
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Vk(a) => run_vk(a),
        Command::Simplex(c) => run_simplex(c),
        Command::Steiner(a) => run_steiner(a),
        Command::Verify(a) => run_verify(a),
    };
    let out = match outcome {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    match out.format {
        Format::Csv => print!("{}", write_csv(&out.rows)),
        Format::Json => {
            let record = OutputRecord {
                command: argv,
                inputs: out.inputs,
                results: out.results,
                version: json!({ "ivol": ivol::VERSION, "ivol-cli": env!("CARGO_PKG_VERSION") }),
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&record).expect("record serializes")
            );
        }
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
