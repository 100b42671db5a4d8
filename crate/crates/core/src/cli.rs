//! The `lamcell` command line.
//!
//! Structured output is one JSON document per invocation, pretty printed with
//! sorted keys, so equal inputs give byte-identical output.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cellular::{self, cellularize, is_cellular, is_hereditary_cellular, is_semi_cellular};
use crate::kernel::{parse_term, parse_type, print_term, KernelError, Signature, SimpleType, Term};
use crate::model::{Model, ModelConfig, ModelError, Strategy, Verdict};
use crate::oracle::{self, OracleError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "lamcell", version, about = "Cellular terms and minimal-model representatives")]
pub struct Cli {
    /// Comma separated ground constants, e.g. `a,b`.
    #[arg(long, global = true)]
    pub constants: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Ceiling on the summed size of the entries of one table.
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,
    /// Ceiling on the entries of one table.
    #[arg(long, global = true)]
    pub max_entries: Option<usize>,
    /// Ceiling on the number of candidates of one argument.
    #[arg(long, global = true)]
    pub max_candidates: Option<usize>,
    /// Wall-clock ceiling in seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Strategy::Auto, global = true)]
    pub strategy: Strategy,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and type a term, print its type and canonical form.
    Check { term: String },
    /// Print the β-normal η-long form.
    Normalize { term: String },
    /// Report the cellularity predicates.
    Cellular { term: String },
    /// Print a cellular equivalent.
    Cellularize {
        term: String,
        /// Also decide equivalence with the input.
        #[arg(long)]
        verify: bool,
    },
    /// Print the representative table of a type.
    Reps {
        #[arg(long = "type")]
        ty: String,
        /// Only one representative per class.
        #[arg(long)]
        dedup: bool,
    },
    /// Decide observational equivalence.
    Decide { left: String, right: String },
    /// Print the canonical representative of a term's class.
    Canon { term: String },
    /// Count the classes of a type.
    Classes {
        #[arg(long = "type")]
        ty: String,
        /// Cross-check with a brute-force quotient of enumerated terms.
        #[arg(long)]
        oracle: bool,
        /// Size bound of the enumerated terms.
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Size bound of the enumerated arguments.
        #[arg(long, default_value_t = 8)]
        arg_size: usize,
    },
    /// List all normal terms of a type up to a size.
    Enumerate {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        max_size: usize,
    },
    /// Print a seeded random corpus of closed terms.
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 40)]
        max_size: usize,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Failure {
        Failure {
            code,
            kind,
            message: message.into(),
        }
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Failure {
        Failure::new(EXIT_INPUT, "input", e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Failure {
        match e {
            ModelError::Budget { .. } | ModelError::Timeout => {
                Failure::new(EXIT_BUDGET, "budget", e.to_string())
            }
            ModelError::Internal(_) => Failure::new(EXIT_INTERNAL, "internal", e.to_string()),
            _ => Failure::new(EXIT_INPUT, "input", e.to_string()),
        }
    }
}

impl From<cellular::CellError> for Failure {
    fn from(e: cellular::CellError) -> Failure {
        match e {
            cellular::CellError::Internal(_) => Failure::new(EXIT_INTERNAL, "internal", e.to_string()),
            _ => Failure::new(EXIT_INPUT, "input", e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::Budget { .. } => Failure::new(EXIT_BUDGET, "budget", e.to_string()),
            _ => Failure::new(EXIT_INPUT, "input", e.to_string()),
        }
    }
}

/// Output of one command: the structured document and its text rendering.
struct Report {
    doc: Value,
    text: String,
    code: i32,
}

impl Report {
    fn ok(doc: Value, text: String) -> Report {
        Report {
            doc,
            text,
            code: EXIT_OK,
        }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok(r) => {
            let _ = match format {
                Format::Structured => writeln!(out, "{}", render_json(&r.doc)),
                Format::Text => writeln!(out, "{}", r.text),
            };
            r.code
        }
        Err(f) => {
            if format == Format::Structured {
                let doc = json!({ "error": { "kind": f.kind, "message": f.message, "exit": f.code } });
                let _ = writeln!(out, "{}", render_json(&doc));
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn signature(cli: &Cli) -> Result<Signature, Failure> {
    let text = cli
        .constants
        .as_deref()
        .ok_or_else(|| Failure::new(EXIT_USAGE, "usage", "--constants is required"))?;
    Signature::parse(text).map_err(|e| Failure::new(EXIT_USAGE, "usage", e.to_string()))
}

fn model(cli: &Cli) -> Result<Model, Failure> {
    let mut cfg = ModelConfig {
        strategy: cli.strategy,
        ..ModelConfig::default()
    };
    let positive = |v: Option<usize>, flag: &str| match v {
        Some(0) => Err(Failure::new(EXIT_USAGE, "usage", format!("{flag} must be positive"))),
        _ => Ok(v),
    };
    if let Some(n) = positive(cli.max_nodes, "--max-nodes")? {
        cfg.max_nodes = n;
    }
    if let Some(n) = positive(cli.max_entries, "--max-entries")? {
        cfg.max_entries = n;
    }
    if let Some(n) = positive(cli.max_candidates, "--max-candidates")? {
        cfg.max_candidates = n;
    }
    if let Some(s) = cli.time_limit {
        if !(s.is_finite() && s > 0.0) {
            return Err(Failure::new(EXIT_USAGE, "usage", "--time-limit must be positive"));
        }
        cfg.time_limit = Some(Duration::from_secs_f64(s));
    }
    Ok(Model::new(cfg))
}

fn names(sig: &Signature) -> Vec<&str> {
    sig.names().iter().map(|n| &**n).collect()
}

fn term_list(ts: &[Term]) -> Vec<String> {
    ts.iter().map(print_term).collect()
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let sig = signature(cli)?;
    let model = model(cli)?;
    let parse = |s: &str| -> Result<Term, Failure> { Ok(parse_term(s, &sig)?) };
    let ty_of = |s: &str| -> Result<SimpleType, Failure> { Ok(parse_type(s)?) };
    let consts = names(&sig);
    match &cli.command {
        Command::Check { term } => {
            let t = parse(term)?;
            let (ty, printed) = (t.ty().to_string(), print_term(&t));
            Ok(Report::ok(
                json!({ "command": "check", "constants": consts, "type": ty, "term": printed,
                        "size": t.size(), "order": t.ty().order() }),
                format!("{printed} : {ty}"),
            ))
        }
        Command::Normalize { term } => {
            let t = parse(term)?;
            let printed = print_term(&t);
            Ok(Report::ok(
                json!({ "command": "normalize", "constants": consts, "term": printed, "type": t.ty().to_string() }),
                printed,
            ))
        }
        Command::Cellular { term } => {
            let t = parse(term)?;
            let (c, s, h) = (is_cellular(&t)?, is_semi_cellular(&t)?, is_hereditary_cellular(&t)?);
            Ok(Report::ok(
                json!({ "command": "cellular", "constants": consts, "term": print_term(&t),
                        "cellular": c, "semi_cellular": s, "hereditary_cellular": h }),
                format!("cellular: {c}\nsemi-cellular: {s}\nhereditary cellular: {h}"),
            ))
        }
        Command::Cellularize { term, verify } => {
            let t = parse(term)?;
            let c = cellularize(&t)?;
            let cell = is_cellular(&c)?;
            let equivalent = if *verify {
                Some(model.decide_equiv(&t, &c, &sig)?.is_equivalent())
            } else {
                None
            };
            let mut text = format!("{}\ncellular: {cell}", print_term(&c));
            if let Some(e) = equivalent {
                text.push_str(&format!("\nequivalent: {e}"));
            }
            let ok = cell && equivalent != Some(false);
            Ok(Report {
                doc: json!({ "command": "cellularize", "constants": consts, "input": print_term(&t),
                             "output": print_term(&c), "cellular": cell, "equivalent": equivalent }),
                text,
                code: if ok { EXIT_OK } else { EXIT_INTERNAL },
            })
        }
        Command::Reps { ty, dedup } => {
            let ty = ty_of(ty)?;
            if *dedup {
                let reps = model.class_reps(&ty, &sig)?;
                let list = term_list(&reps);
                let text = list.join("\n");
                Ok(Report::ok(
                    json!({ "command": "reps", "constants": consts, "type": ty.to_string(),
                            "dedup": true, "classes": list }),
                    text,
                ))
            } else {
                let table = model.representatives(&ty, &sig)?;
                let mut text = format!(
                    "type {} over {} ({} strategy)\n",
                    table.for_type, table.constants, table.strategy
                );
                for a in &table.arguments {
                    text.push_str(&format!(
                        "argument {}: {} with K = {}, {} candidates\n",
                        a.index,
                        a.ty,
                        a.bound,
                        a.candidates.len()
                    ));
                }
                for e in &table.entries {
                    let used: Vec<String> = e.used.iter().map(|v| v.to_string()).collect();
                    text.push_str(&format!("{}  [{}]\n", print_term(&e.term), used.join(" ")));
                }
                let mut doc = table.to_json();
                doc["command"] = json!("reps");
                doc["dedup"] = json!(false);
                Ok(Report::ok(doc, text.trim_end().to_string()))
            }
        }
        Command::Decide { left, right } => {
            let (t, u) = (parse(left)?, parse(right)?);
            let v = model.decide_equiv(&t, &u, &sig)?;
            let text = match &v {
                Verdict::Equivalent => "equivalent".to_string(),
                Verdict::Inequivalent {
                    witness,
                    left,
                    right,
                } => format!(
                    "inequivalent\nwitness: {}\nresults: {left} vs {right}",
                    term_list(witness).join(" ; ")
                ),
            };
            let mut doc = v.to_json();
            doc["command"] = json!("decide");
            doc["constants"] = json!(consts);
            doc["terms"] = json!([print_term(&t), print_term(&u)]);
            Ok(Report::ok(doc, text))
        }
        Command::Canon { term } => {
            let t = parse(term)?;
            let r = model.canonical_rep(&t, &sig)?;
            let printed = print_term(&r);
            Ok(Report::ok(
                json!({ "command": "canon", "constants": consts, "input": print_term(&t), "canonical": printed }),
                printed,
            ))
        }
        Command::Classes {
            ty,
            oracle: with_oracle,
            max_size,
            arg_size,
        } => {
            let ty = ty_of(ty)?;
            let count = model.count_classes(&ty, &sig)?;
            let mut doc = json!({ "command": "classes", "constants": consts,
                                  "type": ty.to_string(), "count": count });
            let mut text = count.to_string();
            if *with_oracle {
                let terms = oracle::enumerate_terms(&ty, &sig, *max_size);
                let mut canon = BTreeSet::new();
                for t in &terms {
                    canon.insert(model.canonical_rep(t, &sig)?);
                }
                let brute = oracle::quotient_classes(&ty, &sig, *max_size, *arg_size)?.len();
                let agree = brute == count && canon.len() == count;
                doc["oracle"] = json!({ "term_bound": max_size, "arg_bound": arg_size,
                                        "terms": terms.len(), "decider_classes": canon.len(),
                                        "brute_classes": brute, "agrees": agree });
                text = format!(
                    "{count}\noracle: {} terms up to size {max_size}, {} classes by the decider, {} by brute force (arguments up to size {arg_size}){}",
                    terms.len(),
                    canon.len(),
                    brute,
                    if agree { "" } else { " -- disagreement" }
                );
            }
            Ok(Report::ok(doc, text))
        }
        Command::Enumerate { ty, max_size } => {
            let ty = ty_of(ty)?;
            let list = term_list(&oracle::enumerate_terms(&ty, &sig, *max_size));
            let text = list.join("\n");
            Ok(Report::ok(
                json!({ "command": "enumerate", "constants": consts, "type": ty.to_string(),
                        "max_size": max_size, "terms": list }),
                text,
            ))
        }
        Command::Corpus {
            count,
            max_order,
            max_size,
        } => {
            let mut gen = oracle::TermGen::new(cli.seed, sig.clone());
            let mut items = Vec::new();
            let mut attempts = 0usize;
            while items.len() < *count {
                attempts += 1;
                if attempts > count.saturating_mul(1000).max(1000) {
                    return Err(Failure::new(EXIT_BUDGET, "budget", "could not generate enough small terms"));
                }
                let ty = gen.ty(*max_order, 2);
                let t = gen.term(&ty);
                if t.size() <= *max_size {
                    items.push(t);
                }
            }
            let list = term_list(&items);
            let text = list.join("\n");
            Ok(Report::ok(
                json!({ "command": "corpus", "constants": consts, "seed": cli.seed, "terms": list,
                        "types": items.iter().map(|t| t.ty().to_string()).collect::<Vec<_>>() }),
                text,
            ))
        }
    }
}
