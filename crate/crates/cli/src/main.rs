//! `burniat`: batch front end for burniat-core.
//!
//! Every command prints a JSON report `{command, inputs, results, status}`
//! (or writes it to `--out`). Exit codes: 0 ok, 2 input error, 3 degenerate
//! configuration, 4 verification failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use burniat_core::branch::{
    branch_table, census, natural_deformations_galois, negative_curves, tampered_branch_table,
    verify_branch_identities,
};
use burniat_core::cohomology::{eigenspace_table_for_case, CohomologyError};
use burniat_core::curves::{
    enumerate_minus1_classes, lines_on_weak_dp, lost_lines, max_line_count,
};
use burniat_core::invariants::{verify_invariants, InvariantCase, InvariantError};
use burniat_core::lattice::MAX_BLOWUPS;
use burniat_core::plane::{
    build_burniat_lines, classify, sample_configs, BurniatConfig, BurniatParams, ConfigError,
    ConfigFile, ProjPoint,
};
use burniat_core::rational::{parse_rational, serde_rational_vec, Rational, DEFAULT_SEED};
use burniat_core::{Case, DivisorClass, Exec};

#[derive(Parser)]
#[command(
    name = "burniat",
    version,
    about = "Exact computations for Burniat surfaces"
)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run the data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lines ((-1)-curves) on the blow-up of the plane in r points.
    EnumerateLines {
        #[arg(long)]
        r: usize,
        /// Effective (-2)-curve as `a,b1,...,br` for `aL - sum bj Ej`; repeatable.
        #[arg(long = "minus2")]
        minus2: Vec<String>,
    },
    /// Classify a 9-line configuration read from a JSON file.
    Classify { config: PathBuf },
    /// Write a configuration file for a case, from explicit or sampled parameters.
    BuildConfig {
        #[arg(long)]
        case: Case,
        /// Comma-separated rationals, e.g. `2,3/4,5`.
        #[arg(long)]
        params: Option<String>,
        /// Semicolon-separated points, e.g. `1:1:1;1:2:5`.
        #[arg(long)]
        points: Option<String>,
        /// Seed for sampled parameters when none are given.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Branch divisor classes, with optional identity verification.
    BranchData {
        #[arg(long)]
        case: Case,
        #[arg(long)]
        verify: bool,
        /// Alter one tabulated class (implies --verify).
        #[arg(long)]
        inject_error: bool,
    },
    /// Eigenspace dimensions of the tangent sheaf cohomology.
    CohomologyTable {
        #[arg(long)]
        case: Case,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Randomized exact checks of the invariant generators.
    VerifyInvariants {
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
    results: Value,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
            results: Value::Null,
        }
    }

    fn verification(message: impl ToString, results: Value) -> Self {
        Failure {
            code: 4,
            message: message.to_string(),
            results,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::Degenerate(_) | ConfigError::InvalidBurniat(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
            results: Value::Null,
        }
    }
}

impl From<CohomologyError> for Failure {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::Config(c) => c.into(),
            CohomologyError::Unsupported(_) | CohomologyError::BadIndex(_) => Failure::input(e),
            other => Failure::verification(other, Value::Null),
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: Value,
    results: Value,
    status: Value,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

fn parse_class(arg: &str, r: usize) -> Result<DivisorClass, Failure> {
    let nums: Vec<i64> = arg
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::input(format!("bad class `{arg}`: expected integers a,b1,...,br"))
        })?;
    if nums.len() != r + 1 {
        return Err(Failure::input(format!(
            "class `{arg}` has {} coefficients, expected {}",
            nums.len(),
            r + 1
        )));
    }
    Ok(DivisorClass::new(nums[0], nums[1..].to_vec()))
}

fn parse_point(arg: &str) -> Result<ProjPoint, Failure> {
    let coords: Vec<Rational> = arg
        .split(':')
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::input(format!("bad point `{arg}`: {e}")))?;
    let arr: [Rational; 3] = coords
        .try_into()
        .map_err(|_| Failure::input(format!("point `{arg}` needs three coordinates")))?;
    ProjPoint::new(arr).map_err(Failure::input)
}

fn enumerate_lines(r: usize, minus2: &[String]) -> Result<Value, Failure> {
    if r > MAX_BLOWUPS {
        return Err(Failure::input(format!("r = {r} outside 0..={MAX_BLOWUPS}")));
    }
    let classes: Vec<DivisorClass> = minus2
        .iter()
        .map(|s| parse_class(s, r))
        .collect::<Result<_, _>>()?;
    let lines = lines_on_weak_dp(r, &classes).map_err(Failure::input)?;
    let lost = lost_lines(r, &classes).map_err(Failure::input)?;
    let shown = |v: &[DivisorClass]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    Ok(json!({
        "r": r,
        "count": lines.len(),
        "minus1_classes": enumerate_minus1_classes(r).map_err(Failure::input)?.len(),
        "bound_a_le_2": max_line_count(r).map_err(Failure::input)?,
        "complete": r <= 7,
        "lines": shown(&lines.classes),
        "lost": shown(&lost),
    }))
}

fn read_config(path: &PathBuf) -> Result<BurniatConfig, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("bad config {}: {e}", path.display())))?;
    Ok(BurniatConfig::try_from(file)?)
}

fn classify_cmd(path: &PathBuf) -> Result<Value, Failure> {
    let cfg = read_config(path)?;
    let cls = classify(&cfg)?;
    let mut v = to_value(&cls);
    if let Some(declared) = cfg.case {
        v["declared_case"] = to_value(&declared);
        v["matches_declared"] = json!(declared == cls.case);
    }
    Ok(v)
}

fn build_config(
    case: Case,
    params: Option<&str>,
    points: Option<&str>,
    seed: u64,
) -> Result<Value, Failure> {
    let cfg = if params.is_none() && points.is_none() {
        sample_configs(case, 1, seed, Exec::Sequential)?.remove(0)
    } else {
        let scalars: Vec<Rational> = params
            .unwrap_or("")
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_rational(s.trim()))
            .collect::<Result<_, _>>()
            .map_err(Failure::input)?;
        let pts: Vec<ProjPoint> = points
            .unwrap_or("")
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(parse_point)
            .collect::<Result<_, _>>()?;
        build_burniat_lines(&BurniatParams::from_parts(case, &scalars, &pts)?)?
    };
    Ok(to_value(&ConfigFile::from(&cfg)))
}

fn branch_data(case: Case, verify: bool, inject: bool) -> Result<Value, Failure> {
    let bd = if inject {
        tampered_branch_table(case)
    } else {
        branch_table(case)
    }
    .map_err(Failure::input)?;
    let mut out = json!({ "table": to_value(&bd), "census": to_value(&census(&bd)) });
    if !(verify || inject) {
        return Ok(out);
    }
    let identities = verify_branch_identities(&bd);
    let failed = identities.iter().filter(|c| !c.pass).count();
    out["identities"] = to_value(&identities);
    let neg = negative_curves(&bd).map_err(Failure::input)?;
    let galois = natural_deformations_galois(&bd, &neg);
    out["natural_deformations_galois"] = match &galois {
        Ok(b) => json!(b),
        Err(e) => json!({ "error": e.to_string() }),
    };
    if failed > 0 {
        return Err(Failure::verification(
            format!("{failed} identities failed"),
            out,
        ));
    }
    if galois != Ok(true) {
        return Err(Failure::verification("Galois check did not certify", out));
    }
    Ok(out)
}

fn invariants_cmd(case: &str, trials: usize, seed: u64, exec: Exec) -> Result<Value, Failure> {
    let case: InvariantCase = case.parse().map_err(Failure::input)?;
    let report = verify_invariants(case, trials, seed, exec).map_err(|e| match e {
        InvariantError::Degenerate(_) => Failure::verification(e, Value::Null),
        _ => Failure::input(e),
    })?;
    let v = to_value(&report);
    if !report.passed() {
        return Err(Failure::verification(
            format!("{} failures", report.failures()),
            v,
        ));
    }
    Ok(v)
}

#[derive(Serialize)]
struct BuildInputs<'a> {
    case: Case,
    #[serde(with = "serde_rational_vec")]
    params: Vec<Rational>,
    points: Option<&'a str>,
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };

    let mut raw_output: Option<String> = None;
    let (command, inputs, outcome) = match &cli.command {
        Command::EnumerateLines { r, minus2 } => (
            "enumerate-lines",
            json!({ "r": r, "minus2": minus2 }),
            enumerate_lines(*r, minus2),
        ),
        Command::Classify { config } => (
            "classify",
            json!({ "config": config }),
            classify_cmd(config),
        ),
        Command::BuildConfig {
            case,
            params,
            points,
            seed,
        } => {
            let parsed: Vec<Rational> = params
                .as_deref()
                .unwrap_or("")
                .split(',')
                .filter_map(|s| parse_rational(s.trim()).ok())
                .collect();
            let inputs = to_value(&BuildInputs {
                case: *case,
                params: parsed,
                points: points.as_deref(),
                seed: *seed,
            });
            let outcome = build_config(*case, params.as_deref(), points.as_deref(), *seed);
            // the configuration itself is the output, ready for `classify`
            if let Ok(cfg) = &outcome {
                raw_output = Some(serde_json::to_string_pretty(cfg).unwrap());
            }
            ("build-config", inputs, outcome)
        }
        Command::BranchData {
            case,
            verify,
            inject_error,
        } => (
            "branch-data",
            json!({ "case": case, "verify": verify, "inject_error": inject_error }),
            branch_data(*case, *verify, *inject_error),
        ),
        Command::CohomologyTable { case, format } => {
            let outcome = eigenspace_table_for_case(*case).map_err(Failure::from);
            if let Ok(t) = &outcome {
                match format {
                    Format::Text => raw_output = Some(t.to_text()),
                    Format::Csv => raw_output = Some(t.to_csv()),
                    Format::Json => {}
                }
            }
            (
                "cohomology-table",
                json!({ "case": case }),
                outcome.map(|t| to_value(&t)),
            )
        }
        Command::VerifyInvariants { case, trials, seed } => (
            "verify-invariants",
            json!({ "case": case, "trials": trials, "seed": seed }),
            invariants_cmd(case, *trials, *seed, exec),
        ),
    };

    let (results, status, code) = match outcome {
        Ok(v) => (v, json!("ok"), 0u8),
        Err(f) => {
            eprintln!("burniat {command}: {}", f.message);
            (
                f.results,
                json!({ "error": { "code": f.code, "message": f.message } }),
                f.code,
            )
        }
    };
    let text = match raw_output {
        Some(t) if code == 0 => t,
        _ => serde_json::to_string_pretty(&Report {
            command,
            inputs,
            results,
            status,
        })
        .unwrap(),
    };
    let text = if text.ends_with('\n') {
        text
    } else {
        text + "\n"
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("burniat: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
