use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use itolog::ito::{
    format_log_flow, instantiate_all, log_flow_terms, matrix_exp, matrix_ito_taylor, matrix_log, DriverAlphabet,
};
use itolog::limits::{set_grade_cap, set_weight_cap, weight_cap};
use itolog::numeric::{evaluate, flow_study, simulate, Binding, DriverSpec, FlowProblem, Grid, PathBundle, PathSeed};
use itolog::qshuffle::qsh_expansions;
use itolog::surjection::{
    log_identity_closed_form, log_identity_series, log_identity_subset_form, strichartz_restriction, SurjElement,
};
use itolog::verify::{run_suite, Suite, SuiteConfig};
use itolog::{BracketWord, Error, Expansion};

#[derive(Parser)]
#[command(name = "itolog", version, about = "Quasi-shuffles, surjections and logarithms of Itô flows")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Master seed of every random stream
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Cap on grades and orders of series computations
    #[arg(long, global = true, value_name = "N")]
    max_grade: Option<usize>,
    /// Omit timestamps so that repeated runs produce identical output
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-shuffle product of word literals such as `1.2` or `[1,3].2`
    Qsh {
        #[arg(required = true, allow_hyphen_values = true)]
        words: Vec<String>,
    },
    /// Logarithm of the identity series in the surjection algebra
    SurjLog {
        #[arg(long, default_value_t = 3)]
        grade: usize,
        #[arg(long, value_enum, default_value_t = LogForm::Closed)]
        form: LogForm,
        /// Keep only bijections
        #[arg(long)]
        bijections: bool,
    },
    /// Terms of the logarithm of the Itô flow map
    Logflow {
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Number of primary drivers
        #[arg(long, default_value_t = 1)]
        drivers: usize,
        /// Continuous drivers with vanishing cross brackets and quadratic-variation letters
        #[arg(long)]
        continuous: bool,
        /// Expand the templates over every driver word
        #[arg(long)]
        instantiate: bool,
        /// Print the matrix-equation logarithm for matrices of this size instead
        #[arg(long, value_name = "DIM")]
        matrix: Option<usize>,
    },
    /// Entry-wise logarithm of the Itô–Taylor series of dX = X dM
    MatrixLog {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Also check exp(log) against the Itô–Taylor series
        #[arg(long)]
        check: bool,
    },
    /// Run a verification suite: algebra, theorem, pathwise or flow
    Verify {
        suite: String,
        #[arg(long, default_value_t = 4)]
        grade: usize,
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        paths: usize,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Simulate driver paths and optionally evaluate words on them
    Simulate {
        /// Driver spec (brownian[:σ], poisson:λ, drift[:a]); letter k is the k-th driver
        #[arg(long = "driver", required = true)]
        drivers: Vec<String>,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = 0)]
        path_index: u64,
        /// Word literal to evaluate at the horizon
        #[arg(long = "word")]
        words: Vec<String>,
    },
    /// Compare exp(truncated log), truncated Itô–Taylor and the reference recursion
    FlowCompare {
        /// Problem as JSON; defaults to A = [[0,1],[-1,0]], B = [[1,0],[0,-1]]
        #[arg(long, value_name = "FILE")]
        problem: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        horizon: f64,
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        #[arg(long, default_value_t = 200)]
        paths: usize,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LogForm {
    Closed,
    Series,
    Subset,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Format(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Output<'a> {
    global: &'a Global,
}

impl Output<'_> {
    fn emit(&self, text: &str, value: Value) -> Outcome {
        let body = if self.global.json {
            serde_json::to_string_pretty(&value).map_err(|e| Failure::Runtime(e.to_string()))? + "\n"
        } else {
            format!("{text}\n")
        };
        match &self.global.out {
            Some(path) => fs::write(path, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }

    fn seed(&self, needed_for: &str) -> Result<u64, Failure> {
        self.global
            .seed
            .ok_or_else(|| Failure::Usage(format!("{needed_for} is random: pass --seed")))
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Runtime(e.to_string()))
}

fn cmd_qsh(out: &Output, words: &[String]) -> Outcome {
    let mut product = Expansion::one();
    for w in words {
        let word = BracketWord::parse_literal(w).map_err(|e| Failure::Usage(format!("in {w:?}: {e}")))?;
        product = qsh_expansions(&product, &Expansion::from_word(word))?;
    }
    out.emit(&product.to_text(), to_value(&product)?)
}

fn graded_text(e: &SurjElement) -> String {
    e.grades()
        .into_iter()
        .map(|n| format!("grade {n}: {}", e.grade(n).to_text()))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_surj_log(out: &Output, grade: usize, form: LogForm, bijections: bool) -> Outcome {
    let log = if bijections {
        strichartz_restriction(grade)?
    } else {
        match form {
            LogForm::Closed => log_identity_closed_form(grade)?,
            LogForm::Series => log_identity_series(grade)?,
            LogForm::Subset => log_identity_subset_form(grade)?,
        }
    };
    out.emit(&graded_text(&log), to_value(&log.to_graded_json())?)
}

fn cmd_logflow(out: &Output, order: usize, drivers: usize, continuous: bool, instantiate: bool, matrix: Option<usize>) -> Outcome {
    if let Some(dim) = matrix {
        let surj = log_identity_closed_form(order)?;
        let m = matrix_log(dim, order)?;
        let text = format!("log X = Σ_n f(∫M^n) with\n{}\n\nentries:\n{}", graded_text(&surj), m.to_text());
        let value = json!({ "surjections": surj.to_graded_json(), "matrix": m });
        return out.emit(&text, value);
    }
    let alphabet = if continuous { DriverAlphabet::standard(drivers)? } else { DriverAlphabet::general(drivers)? };
    let terms = log_flow_terms(&alphabet, order)?;
    if instantiate {
        let inst = instantiate_all(&terms, &alphabet)?;
        let text = inst
            .iter()
            .map(|(word, e)| {
                let ops: Vec<String> = word.iter().map(|i| format!("V_{i}")).collect();
                format!("{}: {}", ops.join(" "), e.to_text())
            })
            .collect::<Vec<_>>()
            .join("\n");
        let value: Vec<Value> = inst
            .iter()
            .map(|(word, e)| Ok(json!({ "v_word": word, "expansion": to_value(e)? })))
            .collect::<Result<_, Failure>>()?;
        return out.emit(&text, Value::Array(value));
    }
    let value: Vec<_> = terms.iter().map(|t| t.to_json()).collect();
    out.emit(&format_log_flow(&terms), to_value(&value)?)
}

fn cmd_matrix_log(out: &Output, dim: usize, order: usize, check: bool) -> Outcome {
    let m = matrix_log(dim, order)?;
    if !check {
        return out.emit(&m.to_text(), to_value(&m)?);
    }
    let holds = matrix_exp(&m, order)? == matrix_ito_taylor(dim, order)?;
    let text = format!("{}\n\nexp(log) = Ito-Taylor through order {order}: {holds}", m.to_text());
    out.emit(&text, json!({ "log": m, "exp_log_equals_taylor": holds }))?;
    if holds {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_verify(out: &Output, suite: &str, cfg: SuiteConfig, seed_given: bool) -> Outcome {
    let suite: Suite = suite.parse()?;
    if matches!(suite, Suite::Pathwise | Suite::Flow) && !seed_given {
        return Err(Failure::Usage("randomized suites need --seed".into()));
    }
    let reports = run_suite(suite, &cfg)?;
    let text = reports.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    out.emit(&text, to_value(&reports)?)?;
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_simulate(out: &Output, drivers: &[String], steps: usize, horizon: f64, path_index: u64, words: &[String]) -> Outcome {
    let specs: Vec<DriverSpec> = drivers.iter().map(|d| d.parse()).collect::<Result<_, _>>()?;
    let seed = if specs.iter().any(DriverSpec::is_stochastic) { out.seed("a stochastic driver")? } else { out.global.seed.unwrap_or(0) };
    let grid = Grid::uniform(horizon, steps)?;
    let paths = specs
        .iter()
        .enumerate()
        .map(|(k, s)| simulate(s, &grid, PathSeed::new(seed, path_index, k as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = (1..=specs.len()).map(|k| format!("x{k}")).collect();
    let bundle = PathBundle::new(names, paths.clone())?;

    let binding: Binding = paths.into_iter().enumerate().map(|(k, p)| (k as u32 + 1, p)).collect();
    let mut values = Vec::new();
    for w in words {
        let word = BracketWord::parse_literal(w).map_err(|e| Failure::Usage(format!("in {w:?}: {e}")))?;
        let v = evaluate(&Expansion::from_word(word.clone()), &binding)?;
        values.push((word, v));
    }

    if let Some(path) = &out.global.out {
        bundle.save(path)?;
        let lines: Vec<String> = std::iter::once(format!("wrote {} paths x {} points to {}", specs.len(), steps + 1, path.display()))
            .chain(values.iter().map(|(w, v)| format!("{} = {v:.12e}", itolog::expansion::integral_symbol(w))))
            .collect();
        eprintln!("{}", lines.join("\n"));
        return Ok(());
    }
    if out.global.json || !values.is_empty() {
        let text = values
            .iter()
            .map(|(w, v)| format!("{} = {v:.12e}", itolog::expansion::integral_symbol(w)))
            .collect::<Vec<_>>()
            .join("\n");
        let terminal: Vec<f64> = bundle.paths.iter().map(|p| p.terminal()).collect();
        let evals: Vec<Value> = values.iter().map(|(w, v)| json!({ "word": w, "value": v })).collect();
        let value = json!({
            "seed": seed, "path_index": path_index, "grid_points": steps + 1, "horizon": horizon,
            "drivers": drivers, "terminal": terminal, "words": evals,
        });
        return out.emit(&text, value);
    }
    let mut buf = Vec::new();
    bundle.write_csv(&mut buf)?;
    std::io::stdout().write_all(&buf)?;
    Ok(())
}

fn cmd_flow_compare(out: &Output, problem: Option<&PathBuf>, horizon: f64, steps: usize, paths: usize, order: usize) -> Outcome {
    let seed = out.seed("flow comparison")?;
    let problem = match problem {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let p: FlowProblem = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            p.validate()?;
            p
        }
        None => FlowProblem::rotation_shear(horizon, steps)?,
    };
    let study = flow_study(&problem, order, paths, seed)?;
    let mut lines = vec![format!(
        "dim {}, T = {}, {} steps, {} paths, seed {}",
        problem.dim, problem.horizon, problem.steps, paths, seed
    )];
    lines.push("order  exp(log) error  taylor error  exp(log)-taylor  graded identity".into());
    for o in &study.orders {
        lines.push(format!(
            "{:>5}  {:>14.6e}  {:>12.6e}  {:>15.6e}  {:>15.2e}",
            o.order, o.log_error, o.taylor_error, o.log_taylor_gap, o.graded_identity_error
        ));
    }
    out.emit(&lines.join("\n"), to_value(&study)?)
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    if let Some(cap) = g.max_grade {
        set_grade_cap(cap);
        set_weight_cap(weight_cap().max(cap));
    }
    let out = Output { global: g };
    match &cli.command {
        Command::Qsh { words } => cmd_qsh(&out, words),
        Command::SurjLog { grade, form, bijections } => cmd_surj_log(&out, *grade, *form, *bijections),
        Command::Logflow { order, drivers, continuous, instantiate, matrix } => {
            cmd_logflow(&out, *order, *drivers, *continuous, *instantiate, *matrix)
        }
        Command::MatrixLog { dim, order, check } => cmd_matrix_log(&out, *dim, *order, *check),
        Command::Verify { suite, grade, steps, paths, order } => {
            let cfg = SuiteConfig {
                grade: *grade,
                seed: g.seed.unwrap_or(0),
                steps: *steps,
                paths: *paths,
                order: *order,
                deterministic: g.deterministic,
            };
            cmd_verify(&out, suite, cfg, g.seed.is_some())
        }
        Command::Simulate { drivers, steps, horizon, path_index, words } => {
            cmd_simulate(&out, drivers, *steps, *horizon, *path_index, words)
        }
        Command::FlowCompare { problem, horizon, steps, paths, order } => {
            cmd_flow_compare(&out, problem.as_ref(), *horizon, *steps, *paths, *order)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
