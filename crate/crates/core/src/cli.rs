//! Command-line surface. Every subcommand returns a [`CommandResult`]; only
//! [`run`] and the binary touch stdout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::cobordism::{build_cobordism, validate_cobordism, Cobordism};
use crate::collapse::{circuit_graph, extract_factorization, verdict};
use crate::counterexample::{karu_counterexample, noncollapsible_bundle, ConeSummary};
use crate::doc::{self, CobordismDoc};
use crate::error::{Error, Result};
use crate::fan::{self, Fan};
use crate::linalg::IntVector;

#[derive(Parser, Debug)]
#[command(name = "toricfan", version, about = "Exact checks for simplicial fans and cobordisms")]
pub struct Cli {
    /// Print the structured report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DocKind {
    Fan,
    Cobordism,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a fan or cobordism document.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "fan")]
        kind: DocKind,
        /// Expected lower boundary fan (overrides the document's "bottom").
        #[arg(long)]
        bottom: Option<PathBuf>,
        /// Expected upper boundary fan (overrides the document's "top").
        #[arg(long)]
        top: Option<PathBuf>,
    },
    /// List the circuit of every π-dependent maximal cone.
    Circuits { path: PathBuf },
    /// Decide collapsibility and print an order or a cycle.
    Collapse {
        path: PathBuf,
        /// Write the circuit graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Factor a collapsible cobordism into moves between its boundary fans.
    Factorize {
        path: PathBuf,
        #[arg(long)]
        elide_identity: bool,
        /// Write the transcript as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the cobordism of a sequence of star subdivisions.
    Build {
        fan: PathBuf,
        /// Semicolon-separated integer tuples, e.g. "(1,1,0);(0,1,1)".
        #[arg(long, allow_hyphen_values = true)]
        centers: String,
        /// Output path; the document goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a worked example: karu or noncollapsible.
    Demo { name: String },
}

/// Exit code 0 means every check passed, 1 a geometric check failed and 2
/// the input could not be read.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub report: Value,
    pub text: String,
    pub artifacts: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl CommandResult {
    fn new(exit_code: i32, report: Value, text: String) -> CommandResult {
        CommandResult { exit_code, report, text, artifacts: Vec::new(), warnings: Vec::new() }
    }

    fn from_error(e: &Error) -> CommandResult {
        let code = exit_code_for(e);
        let mut report = json!({ "ok": false, "error": e.to_string() });
        if let Error::InvalidFan(r) | Error::InvalidCobordism(r) | Error::BrokenFan(r) = e {
            report["violations"] = serde_json::to_value(&r.violations).expect("serializable");
        }
        CommandResult::new(code, report, format!("error: {e}\n"))
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::DimensionMismatch { .. } | Error::ZeroVector => 2,
        _ => 1,
    }
}

/// Parses `"(1,1,0);(0,1,1)"`; blank input is the empty list.
pub fn parse_centers(s: &str) -> Result<Vec<IntVector>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let inner = t
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("center {t:?} is not a parenthesized tuple")))?;
            let coords = inner
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("center {t:?}: {e}"))))
                .collect::<Result<Vec<i64>>>()?;
            Ok(IntVector::from(coords))
        })
        .collect()
}

fn int_value(k: &BigInt) -> Value {
    k.to_i64().map_or_else(|| Value::String(k.to_string()), Value::from)
}

fn load_fan(path: &Path, warnings: &mut Vec<String>) -> Result<Fan> {
    let loaded = doc::read_fan(path)?;
    warnings.extend(loaded.warnings);
    Ok(loaded.value)
}

fn load_cobordism(path: &Path, warnings: &mut Vec<String>) -> Result<Cobordism> {
    let loaded = doc::read_cobordism(path)?;
    warnings.extend(loaded.warnings);
    Cobordism::new(loaded.value.fan)
}

fn write_artifact(path: &Path, contents: &str, out: &mut CommandResult) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    out.artifacts.push(path.to_path_buf());
    Ok(())
}

fn with_warnings(r: Result<CommandResult>, warnings: Vec<String>) -> CommandResult {
    let mut out = r.unwrap_or_else(|e| CommandResult::from_error(&e));
    out.warnings = warnings;
    out
}

pub fn cmd_validate(path: &Path, kind: DocKind, bottom: Option<&Path>, top: Option<&Path>) -> CommandResult {
    let mut warnings = Vec::new();
    let r = (|| {
        let report = match kind {
            DocKind::Fan => fan::validate_fan(&load_fan(path, &mut warnings)?),
            DocKind::Cobordism => {
                let loaded = doc::read_cobordism(path)?;
                warnings.extend(loaded.warnings);
                let input = loaded.value;
                let bottom = match bottom {
                    Some(p) => Some(load_fan(p, &mut warnings)?),
                    None => input.bottom,
                };
                let top = match top {
                    Some(p) => Some(load_fan(p, &mut warnings)?),
                    None => input.top,
                };
                validate_cobordism(&input.fan, bottom.as_ref(), top.as_ref())
            }
        };
        let ok = report.is_valid();
        Ok(CommandResult::new(
            if ok { 0 } else { 1 },
            json!({ "ok": ok, "violations": report.violations }),
            report.to_string(),
        ))
    })();
    with_warnings(r, warnings)
}

pub fn cmd_circuits(path: &Path) -> CommandResult {
    let mut warnings = Vec::new();
    let r = (|| {
        let cob = load_cobordism(path, &mut warnings)?;
        let mut rows = Vec::new();
        let mut text = String::new();
        for (cone, cc) in cob.circuits() {
            let Some(cc) = cc else { continue };
            let summary = ConeSummary::of(cone);
            let relation: Vec<Value> = cc.circuit.coeffs().iter().map(int_value).collect();
            let rels: Vec<String> = cc
                .circuit
                .rays()
                .iter()
                .zip(cc.circuit.coeffs())
                .map(|(r, k)| format!("{k}*{r}"))
                .collect();
            let _ = writeln!(text, "{summary}\n    relation {}", rels.join(" + "));
            rows.push(json!({
                "cone": cone,
                "class": summary.class,
                "circuit": cc.circuit.rays(),
                "relation": relation,
                "positive": summary.positive,
                "negative": summary.negative,
                "link": summary.link,
            }));
        }
        let independent = cob.max_cones().len() - rows.len();
        let _ = writeln!(text, "{} circuit cones, {independent} π-independent cones", rows.len());
        Ok(CommandResult::new(0, json!({ "ok": true, "rows": rows, "independent_cones": independent }), text))
    })();
    with_warnings(r, warnings)
}

pub fn cmd_collapse(path: &Path, dot: Option<&Path>) -> CommandResult {
    let mut warnings = Vec::new();
    let r = (|| {
        let cob = load_cobordism(path, &mut warnings)?;
        let graph = circuit_graph(&cob);
        let v = verdict(&graph);
        let edges: Vec<Value> = graph
            .edges()
            .iter()
            .map(|&(a, b)| json!([graph.nodes()[a].key, graph.nodes()[b].key]))
            .collect();
        let mut text = String::new();
        let _ = writeln!(text, "{} circuits, {} edges", graph.nodes().len(), graph.edges().len());
        let _ = writeln!(text, "{}", if v.collapsible { "collapsible; order:" } else { "not collapsible; cycle:" });
        for k in &v.witness {
            let _ = writeln!(text, "  {k}");
        }
        let mut out = CommandResult::new(
            if v.collapsible { 0 } else { 1 },
            json!({
                "ok": v.collapsible,
                "collapsible": v.collapsible,
                if v.collapsible { "order" } else { "cycle" }: v.witness,
                "edges": edges,
            }),
            text,
        );
        if let Some(p) = dot {
            let highlight = if v.collapsible { &[][..] } else { &v.witness[..] };
            write_artifact(p, &graph.to_dot(highlight), &mut out)?;
        }
        Ok(out)
    })();
    with_warnings(r, warnings)
}

pub fn cmd_factorize(path: &Path, elide_identity: bool, out_path: Option<&Path>) -> CommandResult {
    let mut warnings = Vec::new();
    let r = (|| {
        let cob = load_cobordism(path, &mut warnings)?;
        let steps = extract_factorization(&cob, elide_identity)?;
        let transcript = doc::transcript(cob.bottom(), &steps);
        let mut text = String::new();
        let _ = writeln!(text, "{} steps", steps.len());
        for (i, s) in steps.iter().enumerate() {
            let _ = writeln!(text, "{}. {} (circuit {}) -> {} cones", i + 1, s.kind, s.circuit, s.result.len());
        }
        let mut report = serde_json::to_value(&transcript).expect("serializable");
        report["ok"] = Value::Bool(true);
        let mut out = CommandResult::new(0, report, text);
        if let Some(p) = out_path {
            write_artifact(p, &doc::to_json(&transcript)?, &mut out)?;
        }
        Ok(out)
    })();
    with_warnings(r, warnings)
}

pub fn cmd_build(fan_path: &Path, centers: &str, out_path: Option<&Path>) -> CommandResult {
    let mut warnings = Vec::new();
    let r = (|| {
        let delta = load_fan(fan_path, &mut warnings)?;
        let centers = parse_centers(centers)?;
        let cob = build_cobordism(&delta, &centers)?;
        let document = CobordismDoc::from_cobordism(&cob);
        let json_doc = doc::to_json(&document)?;
        let census: Vec<ConeSummary> = cob.max_cones().iter().map(ConeSummary::of).collect();
        let mut text = String::new();
        let _ = writeln!(text, "{} maximal cones", census.len());
        for c in &census {
            let _ = writeln!(text, "  {c}");
        }
        let mut out = CommandResult::new(0, json!({ "ok": true, "census": census, "cobordism": document }), text);
        match out_path {
            Some(p) => write_artifact(p, &json_doc, &mut out)?,
            None => out.text.push_str(&json_doc),
        }
        Ok(out)
    })();
    with_warnings(r, warnings)
}

pub fn cmd_demo(name: &str) -> CommandResult {
    let r = match name {
        "karu" => karu_counterexample().map(|rep| {
            let mut v = serde_json::to_value(&rep).expect("serializable");
            v["ok"] = Value::Bool(true);
            CommandResult::new(0, v, rep.to_string())
        }),
        "noncollapsible" => noncollapsible_bundle().map(|rep| {
            let mut v = serde_json::to_value(&rep).expect("serializable");
            v["ok"] = Value::Bool(true);
            CommandResult::new(0, v, rep.to_string())
        }),
        other => Err(Error::Parse(format!("unknown demo {other:?}; expected karu or noncollapsible"))),
    };
    r.unwrap_or_else(|e| CommandResult::from_error(&e))
}

pub fn execute(cli: &Cli) -> CommandResult {
    match &cli.command {
        Command::Validate { path, kind, bottom, top } => cmd_validate(path, *kind, bottom.as_deref(), top.as_deref()),
        Command::Circuits { path } => cmd_circuits(path),
        Command::Collapse { path, dot } => cmd_collapse(path, dot.as_deref()),
        Command::Factorize { path, elide_identity, out } => cmd_factorize(path, *elide_identity, out.as_deref()),
        Command::Build { fan, centers, out } => cmd_build(fan, centers, out.as_deref()),
        Command::Demo { name } => cmd_demo(name),
    }
}

/// Parses arguments, runs the command and renders its output; returns the
/// exit code together with stdout and stderr text.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 { (0, rendered, String::new()) } else { (2, String::new(), rendered) };
        }
    };
    let result = execute(&cli);
    let mut stderr: String = result.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let stdout = if cli.json {
        let mut report = result.report.clone();
        report["artifacts"] = json!(result.artifacts);
        doc::to_json(&report).expect("serializable")
    } else if result.exit_code == 2 {
        stderr.push_str(&result.text);
        String::new()
    } else {
        result.text.clone()
    };
    (result.exit_code, stdout, stderr)
}
