//! `holo`: command-line front end for the decision procedures.
//!
//! Exit status: 0 for any computed answer (including "no"), 1 for input
//! errors, 2 for undecided or capped outcomes.

use clap::{Parser, Subcommand, ValueEnum};
use holo_core::affine::{is_affine, is_affine_alpha, AffineWitness};
use holo_core::decision::{verify_witness, DecideOptions, Decision, Outcome, DEFAULT_CAP};
use holo_core::holant::{eval_holant_with_limit, transform_grid, HolantError, DEFAULT_MAX_EDGES};
use holo_core::io::{
    dense_json, grid_json, parse_grid_text, parse_matrix, parse_set_text, parse_signature_text, scalar_json,
    symmetric_json, transform_json, IoError,
};
use holo_core::product::{factor, is_generalized_equality, ProductError};
use holo_core::scalars::{ScalarError, DEFAULT_MAX_PRECISION};
use holo_core::signatures::{compress, Signature, SignatureSet};
use holo_core::symmetric::{
    classify_affine, classify_product, decide_a_transformable_sym, decide_p_transformable_sym, decompose, theta,
    theta_label, ClassWitness, SymmetricError,
};
use serde_json::{json, Map, Value};
use std::process::ExitCode;

const DEFAULT_MAX_ARITY: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "holo",
    version,
    about = "Decides affine and product-type holographic transformability of Boolean signatures",
    after_help = "Signatures and sets are JSON files, inline JSON, or the symmetric shorthand '[f0, f1, ...]'.\n\
                  Exit status: 0 computed answer, 1 input error, 2 undecided or cap exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Profile bound for the alpha-twisted affine search
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Largest accepted signature arity
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ARITY)]
    max_arity: usize,
    /// Largest grid evaluated by brute force
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_EDGES)]
    max_edges: usize,
    /// Precision ceiling of certified zero tests, in bits
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PRECISION)]
    precision: u32,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for candidate verification and evaluation
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Class {
    #[value(name = "A")]
    A,
    #[value(name = "P")]
    P,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Membership of one signature in A (or D_alpha A with --alpha)
    CheckAffine {
        #[arg(long)]
        alpha: bool,
        signature: String,
    },
    /// Membership of one signature in P, with its factorization
    CheckProduct { signature: String },
    /// Irreducible factorization of a nonzero signature
    Factor { signature: String },
    /// Class A1, A2, A3, P1 or P2 of a symmetric signature
    Classify { signature: String },
    /// Whether a set is A- or P-transformable
    Decide {
        #[arg(value_enum, ignore_case = true)]
        class: Class,
        set: String,
        /// Use the symmetric deciders
        #[arg(long)]
        symmetric: bool,
    },
    /// Exact Holant value of a grid
    Eval { grid: String },
    /// Applies a holographic transformation to a grid
    Transform {
        #[arg(long)]
        grid: String,
        /// Four scalar literals a b c d for [[a, b], [c, d]]
        #[arg(long, num_args = 4, allow_hyphen_values = true)]
        matrix: Vec<String>,
    },
}

enum Failure {
    Input(String),
    Undecided(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ScalarError> for Failure {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::Undecided => Failure::Undecided(e.to_string()),
            ScalarError::DivisionByZero => Failure::Input(e.to_string()),
        }
    }
}

impl From<ProductError> for Failure {
    fn from(e: ProductError) -> Self {
        match e {
            ProductError::Scalar(s) => s.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<SymmetricError> for Failure {
    fn from(e: SymmetricError) -> Self {
        match e {
            SymmetricError::Scalar(s) => s.into(),
            SymmetricError::NestedRadical => Failure::Undecided(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// A finished report and whether it counts as undecided.
struct Report {
    body: Map<String, Value>,
    undecided: bool,
}

impl Report {
    fn new(undecided: bool) -> Self {
        Report {
            body: Map::new(),
            undecided,
        }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.body.insert(key.to_string(), v);
    }
}

/// Inline JSON or shorthand when it starts with `{` or `[`, else a file.
fn read_input(arg: &str) -> Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))
}

struct Ctx {
    max_arity: usize,
    max_edges: usize,
    precision: u32,
    opts: DecideOptions,
}

impl Ctx {
    fn check_arity(&self, name: &str, n: usize) -> Result<(), Failure> {
        if n > self.max_arity {
            return Err(Failure::Input(format!(
                "{name} has arity {n}, above --max-arity {}",
                self.max_arity
            )));
        }
        Ok(())
    }

    fn signature(&self, arg: &str) -> Result<Signature, Failure> {
        let s = parse_signature_text(&read_input(arg)?, self.precision)?;
        self.check_arity("signature", s.arity())?;
        Ok(s)
    }

    fn set(&self, arg: &str) -> Result<SignatureSet, Failure> {
        let set = parse_set_text(&read_input(arg)?, self.precision)?;
        for m in &set.members {
            self.check_arity(&m.name, m.sig.arity())?;
        }
        Ok(set)
    }
}

fn affine_witness_json(w: &AffineWitness) -> Value {
    let sup = &w.support;
    let origin: String = (0..sup.arity)
        .map(|j| if sup.origin >> (sup.arity - 1 - j) & 1 == 1 { '1' } else { '0' })
        .collect();
    let r = w.form.variables();
    let cross: Vec<[usize; 2]> = (0..r)
        .flat_map(|k| (k + 1..r).map(move |l| (k, l)))
        .filter(|&(k, l)| w.form.cross[k][l] % 2 == 1)
        .map(|(k, l)| [sup.free_positions[k], sup.free_positions[l]])
        .collect();
    json!({
        "scale": scalar_json(&w.scale),
        "support": {"free_variables": sup.free_positions, "origin": origin},
        "form": {"constant": w.form.constant, "linear": w.form.linear, "cross_terms": cross},
    })
}

fn decision_json(set: &SignatureSet, d: &Decision, report: &mut Report) -> Result<(), Failure> {
    report.set("decision", json!(d.outcome.as_str()));
    report.set("branch", d.branch.as_ref().map_or(Value::Null, |b| json!(b)));
    report.set("witness", d.witness.as_ref().map_or(Value::Null, transform_json));
    report.set("candidates_tested", json!(d.candidates_tested));
    report.set(
        "blockers",
        Value::Array(
            d.blockers
                .iter()
                .map(|b| json!({"signature": b.signature, "reason": b.reason}))
                .collect(),
        ),
    );
    let params: Map<String, Value> = d.parameters.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    report.set("parameters", Value::Object(params));
    if let Some(ok) = verify_witness(set, d)? {
        report.set("witness_verified", json!(ok));
    }
    report.undecided = matches!(d.outcome, Outcome::Undecided | Outcome::CapExceeded);
    Ok(())
}

fn class_witness_json(w: &ClassWitness) -> Value {
    json!({
        "transform": transform_json(&w.transform),
        "beta": scalar_json(&w.beta),
        "t": w.t,
        "r": w.r,
        "epsilon": w.epsilon,
        "orthogonal": w.orthogonal,
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let ctx = Ctx {
        max_arity: cli.max_arity,
        max_edges: cli.max_edges,
        precision: cli.precision,
        opts: DecideOptions {
            cap: cli.cap,
            max_precision: cli.precision,
        },
    };
    let mut report = Report::new(false);
    match &cli.command {
        Command::CheckAffine { alpha, signature } => {
            let f = ctx.signature(signature)?.to_dense();
            let w = if *alpha { is_affine_alpha(&f)? } else { is_affine(&f)? };
            report.set("decision", json!(if w.is_some() { "yes" } else { "no" }));
            report.set("branch", json!(if *alpha { "alphaA" } else { "A" }));
            report.set("witness", w.as_ref().map_or(Value::Null, affine_witness_json));
        }
        Command::CheckProduct { signature } => {
            let f = ctx.signature(signature)?.to_dense();
            if f.is_zero().map_err(ScalarError::from)? {
                report.set("decision", json!("yes"));
                report.set("factors", json!([]));
            } else {
                let fac = factor(&f)?;
                let mut all = true;
                let mut factors = Vec::new();
                for fa in &fac.factors {
                    let ge = is_generalized_equality(&fa.signature).map_err(ScalarError::from)?.is_some();
                    all &= ge;
                    factors.push(json!({
                        "variables": fa.variables,
                        "signature": dense_json(&fa.signature),
                        "generalized_equality": ge,
                    }));
                }
                report.set("decision", json!(if all { "yes" } else { "no" }));
                report.set("factors", Value::Array(factors));
            }
        }
        Command::Factor { signature } => {
            let f = ctx.signature(signature)?.to_dense();
            let fac = factor(&f)?;
            report.set("arity", json!(fac.arity));
            report.set(
                "factors",
                Value::Array(
                    fac.factors
                        .iter()
                        .map(|fa| json!({"variables": fa.variables, "signature": dense_json(&fa.signature)}))
                        .collect(),
                ),
            );
        }
        Command::Classify { signature } => {
            let s = match ctx.signature(signature)? {
                Signature::Symmetric(s) => s,
                Signature::Dense(d) => compress(&d)
                    .map_err(ScalarError::from)?
                    .ok_or_else(|| Failure::Input("signature is not symmetric".into()))?,
            };
            report.set("signature", symmetric_json(&s));
            let d = match decompose(&s) {
                Ok(d) => d,
                Err(e @ (SymmetricError::Degenerate | SymmetricError::ArityTooSmall { .. } | SymmetricError::NonUnique)) => {
                    report.set("label", json!("none"));
                    report.set("theta", json!("undefined"));
                    report.set("reason", json!(e.to_string()));
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            };
            let Some(d) = d else {
                report.set("label", json!("none"));
                report.set("theta", json!("undefined"));
                report.set("reason", json!("no decomposition with distinct vectors"));
                return Ok(report);
            };
            let th = theta(&d)?;
            report.set("theta", json!(theta_label(&th).map_err(ScalarError::from)?));
            let mut labels = Vec::new();
            let mut witnesses = Map::new();
            for w in [classify_affine(&s)?, classify_product(&s)?].into_iter().flatten() {
                labels.push(json!(w.label.as_str()));
                witnesses.insert(w.label.as_str().to_string(), class_witness_json(&w));
            }
            let first = labels.first().cloned().unwrap_or(json!("none"));
            report.set("witness", first.as_str().and_then(|l| witnesses.get(l).cloned()).unwrap_or(Value::Null));
            report.set("label", first);
            report.set("labels", Value::Array(labels));
            report.set("witnesses", Value::Object(witnesses));
        }
        Command::Decide { class, set, symmetric } => {
            let members = ctx.set(set)?;
            let d = match (class, symmetric) {
                (Class::A, false) => holo_core::affine::decide_a_transformable(&members, &ctx.opts)?,
                (Class::P, false) => holo_core::product::decide_p_transformable(&members, &ctx.opts)?,
                (Class::A, true) => decide_a_transformable_sym(&members, &ctx.opts)?,
                (Class::P, true) => decide_p_transformable_sym(&members, &ctx.opts)?,
            };
            decision_json(&members, &d, &mut report)?;
        }
        Command::Eval { grid } => {
            let g = parse_grid_text(&read_input(grid)?, ctx.precision)?;
            match eval_holant_with_limit(&g, ctx.max_edges) {
                Ok(v) => report.set("value", scalar_json(&v.value)),
                Err(e @ HolantError::TooManyEdges { .. }) => return Err(Failure::Undecided(e.to_string())),
                Err(e) => return Err(Failure::Input(e.to_string())),
            }
        }
        Command::Transform { grid, matrix } => {
            let g = parse_grid_text(&read_input(grid)?, ctx.precision)?;
            let t = parse_matrix(matrix)?;
            let out = transform_grid(&g, &t).map_err(|e| match e {
                HolantError::Scalar(s) => Failure::from(s),
                other => Failure::Input(other.to_string()),
            })?;
            report.set("transform", transform_json(&t));
            report.set("grid", grid_json(&out));
        }
    }
    Ok(report)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckAffine { .. } => "check-affine",
        Command::CheckProduct { .. } => "check-product",
        Command::Factor { .. } => "factor",
        Command::Classify { .. } => "classify",
        Command::Decide { .. } => "decide",
        Command::Eval { .. } => "eval",
        Command::Transform { .. } => "transform",
    }
}

fn header(cli: &Cli) -> Value {
    json!({
        "tool": "holo",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "settings": {
            "cap": cli.cap,
            "max_arity": cli.max_arity,
            "max_edges": cli.max_edges,
            "precision": cli.precision,
        },
    })
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", flat(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", flat(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", flat(other))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !matches!(x, Value::Object(_))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(flat).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn emit(cli: &Cli, body: Map<String, Value>) {
    let mut doc = Map::new();
    doc.insert("header".into(), header(cli));
    doc.insert("report".into(), Value::Object(body));
    let doc = Value::Object(doc);
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
        Format::Text => {
            let mut out = String::new();
            render_text(&doc, 0, &mut out);
            print!("{out}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("holo: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(report) => {
            let code = if report.undecided { 2 } else { 0 };
            emit(&cli, report.body);
            ExitCode::from(code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("holo: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Undecided(msg)) => {
            let mut body = Map::new();
            body.insert("decision".into(), json!("undecided"));
            body.insert("reason".into(), json!(msg));
            emit(&cli, body);
            ExitCode::from(2)
        }
    }
}
