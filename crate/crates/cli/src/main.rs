use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nichols_core::sweep::{check_point, shorthand_points, Check};
use nichols_core::{parse_field_spec, BraidingParams, Field, MultiDegree, Oracle};
use rayon::prelude::*;
use serde_json::{json, Value};

mod report;

use report::Outcome;

/// Version tag added to every JSON document this tool prints.
const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "nichols", version, about = "Relations and root multiplicities in degrees m·α1 + 2·α2")]
struct Cli {
    /// Run every line of this file as a separate invocation.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and classify J up to a bound.
    Jset {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "max", visible_alias = "max-m", default_value_t = 6)]
        max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Multiplicity of m·α1 + 2·α2 for every m up to a bound.
    Multiplicity {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "max", visible_alias = "max-m", default_value_t = 6)]
        max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the predicted kernel basis of U_m against the symmetrizer.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// A single m; otherwise every m up to --max.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long = "max", visible_alias = "max-m", default_value_t = 6)]
        max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dimension of the Nichols algebra in one multidegree.
    Dim {
        #[command(flatten)]
        params: ParamArgs,
        /// Multidegree as a,b.
        #[arg(long, value_parser = parse_degree)]
        deg: MultiDegree,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the non-root table against the multiplicity formula.
    Table1 {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a check at every (q, r, s) over a finite field.
    Scan {
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "main")]
        check: Check,
        /// Largest m (main) or total degree (oracles).
        #[arg(long = "max", visible_alias = "max-m", default_value_t = 6)]
        max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    /// Q, Fp:<p> or ext:<base>:<c0,..,cd>.
    #[arg(long)]
    field: String,
    #[arg(long, allow_hyphen_values = true, requires_all = ["r", "s"], conflicts_with_all = ["q11", "q12", "q21", "q22"])]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["q12", "q21", "q22"])]
    q11: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q12: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q21: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q22: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_degree(s: &str) -> Result<MultiDegree, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got '{s}'"))?;
    let a = a.trim().parse().map_err(|e| format!("bad degree '{a}': {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad degree '{b}': {e}"))?;
    Ok(MultiDegree::new(a, b))
}

fn parse_field(spec: &str) -> Result<Field, Outcome> {
    parse_field_spec(spec).map_err(|e| Outcome::usage(format!("--field: {e}")))
}

impl ParamArgs {
    fn resolve(&self) -> Result<BraidingParams, Outcome> {
        let field = parse_field(&self.field)?;
        let el = |name: &str, v: &Option<String>| -> Result<_, Outcome> {
            let v = v.as_deref().ok_or_else(|| Outcome::usage(format!("missing --{name}")))?;
            field.parse_element(v).map_err(|e| Outcome::usage(format!("--{name}: {e}")))
        };
        let built = if self.q.is_some() {
            BraidingParams::shorthand(el("q", &self.q)?, el("r", &self.r)?, el("s", &self.s)?)
        } else if self.q11.is_some() {
            BraidingParams::new(
                el("q11", &self.q11)?,
                el("q12", &self.q12)?,
                el("q21", &self.q21)?,
                el("q22", &self.q22)?,
            )
        } else {
            return Err(Outcome::usage("give either --q --r --s or --q11 --q12 --q21 --q22"));
        };
        built.map_err(|e| Outcome::usage(e.to_string()))
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn emit(format: Format, text: String, value: Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => format!("{}\n", with_schema(value)),
    }
}

fn run(command: &Command) -> Result<(String, Outcome), Outcome> {
    match command {
        Command::Jset { params, max, output } => {
            let p = params.resolve()?;
            let cls = nichols_core::compute_j(*max, &p);
            Ok((emit(output.format, report::jset_text(&cls), cls.to_json_value()), Outcome::ok()))
        }
        Command::Multiplicity { params, max, output } => {
            let p = params.resolve()?;
            let rows = report::multiplicity_rows(&p, *max);
            Ok((
                emit(output.format, report::multiplicity_text(&rows), json!({ "rows": rows })),
                Outcome::ok(),
            ))
        }
        Command::Verify { params, m, max, output } => {
            let p = params.resolve()?;
            let oracle = Oracle::new(&p);
            if let Some(m) = m {
                let r = oracle.verify_main(*m).map_err(|e| Outcome::usage(e.to_string()))?;
                let outcome = if r.matches_theorem { Outcome::ok() } else { Outcome::failed() };
                let value = serde_json::to_value(&r).expect("report serialises");
                return Ok((emit(output.format, report::verify_text(&[Ok(r)]), value), outcome));
            }
            let results: Vec<_> = (0..=*max).map(|m| oracle.verify_main(m).map_err(|e| (m, e))).collect();
            let failed = results.iter().any(|r| matches!(r, Ok(r) if !r.matches_theorem));
            let value = json!({
                "reports": results.iter().filter_map(|r| r.as_ref().ok()).collect::<Vec<_>>(),
                "skipped": results
                    .iter()
                    .filter_map(|r| r.as_ref().err())
                    .map(|(m, e)| json!({ "m": m, "reason": e.to_string() }))
                    .collect::<Vec<_>>(),
            });
            let outcome = if failed { Outcome::failed() } else { Outcome::ok() };
            Ok((emit(output.format, report::verify_text(&results), value), outcome))
        }
        Command::Dim { params, deg, output } => {
            let p = params.resolve()?;
            let dim = Oracle::new(&p).nichols_dim(&[deg.a, deg.b]).map_err(|e| Outcome::usage(e.to_string()))?;
            let text = format!("dim B(V)_{deg} = {dim}\n");
            Ok((emit(output.format, text, json!({ "deg": [deg.a, deg.b], "dim": dim })), Outcome::ok()))
        }
        Command::Table1 { params, output } => {
            let p = params.resolve()?;
            let rows = report::table_rows(&p);
            let failed = rows.iter().any(|r| r.agrees == Some(false));
            let outcome = if failed { Outcome::failed() } else { Outcome::ok() };
            Ok((emit(output.format, report::table_text(&rows), json!({ "rows": rows })), outcome))
        }
        Command::Scan { field, check, max, output } => {
            let field = parse_field(field)?;
            let points = shorthand_points(&field).map_err(|e| Outcome::usage(e.to_string()))?;
            let outcomes: Vec<_> = points.par_iter().map(|p| check_point(*check, p, *max)).collect();
            let summary = report::ScanSummary::new(&field, *check, *max, &outcomes);
            let outcome = if summary.violations > 0 { Outcome::failed() } else { Outcome::ok() };
            let value = serde_json::to_value(&summary).expect("summary serialises");
            Ok((emit(output.format, summary.text(), value), outcome))
        }
    }
}

fn run_config(path: &PathBuf) -> u8 {
    let contents = match std::fs::read_to_string(path) {
        Ok(c) => c,
        Err(e) => return finish(Err(Outcome::usage(format!("{}: {e}", path.display())))),
    };
    let mut worst = 0;
    for (i, line) in contents.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let argv = std::iter::once("nichols").chain(line.split_whitespace());
        let code = match Cli::try_parse_from(argv) {
            Ok(Cli { command: Some(cmd), config: None }) => finish(run(&cmd)),
            Ok(_) => finish(Err(Outcome::usage(format!("line {}: expected a subcommand", i + 1)))),
            Err(e) => finish(Err(Outcome::usage(format!("line {}: {}", i + 1, e.to_string().trim_end())))),
        };
        worst = worst.max(code);
    }
    worst
}

/// Prints the output of one run and returns its exit code.
fn finish(result: Result<(String, Outcome), Outcome>) -> u8 {
    let outcome = match result {
        Ok((out, outcome)) => {
            print!("{out}");
            outcome
        }
        Err(outcome) => outcome,
    };
    if let Some(msg) = outcome.message() {
        eprintln!("error: {msg}");
    }
    outcome.code()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match (&cli.config, &cli.command) {
        (Some(path), None) => run_config(path),
        (None, Some(cmd)) => finish(run(cmd)),
        (Some(_), Some(_)) => finish(Err(Outcome::usage("--config cannot be combined with a subcommand"))),
        (None, None) => finish(Err(Outcome::usage("expected a subcommand or --config (see --help)"))),
    };
    ExitCode::from(code)
}
