//! Command-line front end: JSON in, JSON report out, exit status by verdict.
//!
//! Exit codes: 0 pass, 1 mathematical failure (witness in the report),
//! 2 usage or parse error, 3 inconclusive (an enumeration cap was hit).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emtkit::cats::{
    check_adjunction, colimit, limit, probe_pool, random_adjunction_inputs, theorem_b_check, verify_universal,
    Adjunction, Diagram, Verdict,
};
use emtkit::json::{self, Document};
use emtkit::spaces::{is_emt, is_lsc};
use emtkit::{Caps, Config, EmtError, Functor, Space};
use serde_json::{json, Value};

mod suite;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "emtkit", version, about = "Exact finite e.m.t. space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Io {
    /// Input document; stdin when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Limit,
    Colimit,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a space or diagram document and report its properties.
    Validate(Io),
    /// E.m.t.-fication of a space.
    Emtfy(Io),
    /// Apply a named functor to a space.
    Functor {
        #[command(flatten)]
        io: Io,
        /// emt | gamma | gammabar | mc | geo | trunc:<λ> | disc:<λ|inf> | T
        #[arg(long)]
        name: String,
    },
    /// Limit of a diagram.
    Limit(Io),
    /// Colimit of a diagram.
    Colimit(Io),
    /// Verify the universal property of the computed (or a given) (co)limit.
    Verify {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value = "both")]
        kind: Which,
        /// Candidate (co)cone document to verify instead of the computed one.
        #[arg(long)]
        candidate: Option<PathBuf>,
        /// Largest probe space size.
        #[arg(long, default_value_t = 2)]
        probe_max: usize,
    },
    /// Check an adjunction as a hom-set bijection.
    Adjunction {
        /// emt | gamma | mc | trunc:<λ> | disc:<λ|inf> | T | geo
        #[arg(long)]
        name: String,
        /// Left input space; with --right, checks that single pair.
        #[arg(long)]
        left: Option<PathBuf>,
        #[arg(long)]
        right: Option<PathBuf>,
        /// Seed for random pairs when no inputs are given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The eight characterizations of an e.m.t. space.
    Theoremb {
        #[command(flatten)]
        io: Io,
        /// Accept non-Hausdorff inputs.
        #[arg(long)]
        relaxed: bool,
    },
    /// Run every property check on seeded random corpora.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    report: Value,
}

impl From<EmtError> for Failure {
    fn from(e: EmtError) -> Self {
        let (code, kind) = match &e {
            EmtError::Parse { .. } => (EXIT_USAGE, "parse"),
            EmtError::CapExceeded { .. } => (EXIT_INCONCLUSIVE, "cap"),
            EmtError::Domain(_) => (EXIT_USAGE, "domain"),
            EmtError::Inconsistent(_) => (EXIT_FAIL, "inconsistent"),
            _ => (EXIT_USAGE, "invalid"),
        };
        let mut err = json!({ "kind": kind, "message": e.to_string() });
        if let EmtError::Parse { pointer, .. } = &e {
            err["pointer"] = json!(pointer);
        }
        Failure { code, report: json!({ "error": err }) }
    }
}

fn io_failure(what: &str, path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        report: json!({ "error": { "kind": "io", "message": format!("{what} {}: {e}", path.display()) } }),
    }
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| io_failure("cannot read", p, e)),
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| io_failure("cannot read", &PathBuf::from("<stdin>"), e))?;
            Ok(s)
        }
    }
}

fn read_space(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<Arc<Space>, Failure> {
    Ok(Arc::new(json::parse_space(&read_input(path, stdin)?)?))
}

fn read_diagram(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<Diagram, Failure> {
    Ok(json::parse_diagram(&read_input(path, stdin)?)?)
}

fn verdict_code(verdicts: &[&Verdict]) -> i32 {
    if verdicts.iter().any(|v| v.is_fail()) {
        EXIT_FAIL
    } else if verdicts.iter().any(|v| v.is_inconclusive()) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

fn space_report(s: &Space) -> Result<Value, EmtError> {
    let names = s.names();
    let rho = s.recovered();
    let recovered: Vec<Vec<String>> =
        (0..s.len()).map(|x| (0..s.len()).map(|y| rho.get(x, y).to_string()).collect()).collect();
    let classes: Vec<Vec<&str>> = s
        .continuity_partition()
        .classes()
        .iter()
        .map(|c| c.iter().map(|&x| names[x].as_str()).collect())
        .collect();
    Ok(json!({
        "kind": "space",
        "valid": true,
        "points": s.len(),
        "hausdorff": s.topology().is_hausdorff(),
        "extended_metric": s.metric().is_extended_metric(),
        "lsc": is_lsc(s),
        "is_emt": is_emt(s)?,
        "continuity_classes": classes,
        "recovered": recovered,
    }))
}

fn validate(text: &str) -> Result<(i32, Value), Failure> {
    let invalid = |e: EmtError| Failure {
        code: EXIT_FAIL,
        report: json!({ "valid": false, "reason": e.to_string() }),
    };
    match json::parse_document(text) {
        Ok(Document::Space(s)) => Ok((EXIT_PASS, space_report(&s)?)),
        Ok(Document::Diagram(d)) => Ok((
            EXIT_PASS,
            json!({
                "kind": "diagram",
                "valid": true,
                "category": d.category.to_string(),
                "objects": d.objects.len(),
                "arrows": d.arrows.len(),
            }),
        )),
        Err(
            e @ (EmtError::InvalidTopology(_)
            | EmtError::InvalidMetric(_)
            | EmtError::InvalidSpace(_)
            | EmtError::InvalidMorphism(_)
            | EmtError::InvalidDiagram(_)),
        ) => Err(invalid(e)),
        Err(e) => Err(e.into()),
    }
}

fn theorem_b(s: &Arc<Space>, relaxed: bool, config: &Config) -> Result<(i32, Value), Failure> {
    let r = theorem_b_check(s, relaxed, config)?;
    let c = r.conditions;
    let in_domain = s.topology().is_hausdorff();
    // outside the Hausdorff domain only i, vi, vii and viii must agree
    let consistent = if in_domain { r.all_equal } else { [c[5], c[6], c[7]].iter().all(|&b| b == c[0]) };
    let labels = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"];
    let conditions: serde_json::Map<String, Value> =
        labels.iter().zip(c).map(|(l, b)| (l.to_string(), Value::Bool(b))).collect();
    let report = json!({
        "conditions": conditions,
        "all_equal": r.all_equal,
        "in_domain": in_domain,
        "relaxed": relaxed,
        "consistent": consistent,
    });
    Ok((if consistent { EXIT_PASS } else { EXIT_FAIL }, report))
}

fn adjunction(
    name: &str,
    left: &Option<PathBuf>,
    right: &Option<PathBuf>,
    seed: u64,
    count: usize,
    config: &Config,
) -> Result<(i32, Value), Failure> {
    let adj: Adjunction = name.parse()?;
    let read = |p: &PathBuf| -> Result<Arc<Space>, Failure> {
        let text = fs::read_to_string(p).map_err(|e| io_failure("cannot read", p, e))?;
        Ok(Arc::new(json::parse_space(&text)?))
    };
    match (left, right) {
        (Some(l), Some(r)) => {
            let v = check_adjunction(&adj, &read(l)?, &read(r)?, config)?;
            let code = verdict_code(&[&v]);
            Ok((code, json!({ "adjunction": adj.to_string(), "verdict": json::to_value(&v) })))
        }
        (None, None) => {
            let mut rng = emtkit::gen::rng(seed);
            let pairs: Vec<_> = (0..count).map(|_| random_adjunction_inputs(&mut rng, &adj)).collect();
            let verdicts = emtkit::exec::map_slice(config.exec, &pairs, |(l, r)| check_adjunction(&adj, l, r, config));
            let verdicts = verdicts.into_iter().collect::<Result<Vec<_>, _>>()?;
            let tally = |f: fn(&Verdict) -> bool| verdicts.iter().filter(|v| f(v)).count();
            let first = verdicts.iter().position(|v| !v.is_pass());
            let mut report = json!({
                "adjunction": adj.to_string(),
                "seed": seed,
                "pairs": count,
                "pass": tally(Verdict::is_pass),
                "fail": tally(Verdict::is_fail),
                "inconclusive": tally(Verdict::is_inconclusive),
            });
            if let Some(i) = first {
                let (l, r) = &pairs[i];
                report["first_problem"] = json!({
                    "index": i,
                    "left": json::space_to_value(l, &config.caps),
                    "right": json::space_to_value(r, &config.caps),
                    "verdict": json::to_value(&verdicts[i]),
                });
            }
            Ok((verdict_code(&verdicts.iter().collect::<Vec<_>>()), report))
        }
        _ => Err(Failure {
            code: EXIT_USAGE,
            report: json!({ "error": { "kind": "usage", "message": "give both --left and --right, or neither" } }),
        }),
    }
}

fn execute(command: &Command, config: &Config, stdin: &mut dyn Read) -> Result<(i32, Value), Failure> {
    let caps = &config.caps;
    match command {
        Command::Validate(io) => validate(&read_input(&io.input, stdin)?),
        Command::Emtfy(io) => {
            let r = emtkit::functors::emt_fication(&read_space(&io.input, stdin)?)?;
            Ok((EXIT_PASS, json::functor_result_to_value(&r, caps)))
        }
        Command::Functor { io, name } => {
            let f: Functor = name.parse()?;
            let r = f.apply(&read_space(&io.input, stdin)?)?;
            Ok((EXIT_PASS, json::functor_result_to_value(&r, caps)))
        }
        Command::Limit(io) => {
            let d = read_diagram(&io.input, stdin)?;
            Ok((EXIT_PASS, json!({ "category": d.category.to_string(), "limit": json::cone_to_value(&limit(&d, config)?, caps) })))
        }
        Command::Colimit(io) => {
            let d = read_diagram(&io.input, stdin)?;
            Ok((EXIT_PASS, json!({ "category": d.category.to_string(), "colimit": json::cone_to_value(&colimit(&d, config)?, caps) })))
        }
        Command::Verify { io, kind, candidate, probe_max } => {
            let d = read_diagram(&io.input, stdin)?;
            let probes = probe_pool(d.category, *probe_max);
            let mut report = json!({ "category": d.category.to_string(), "probes": probes.len() });
            let mut verdicts = Vec::new();
            if let Some(path) = candidate {
                let text = fs::read_to_string(path).map_err(|e| io_failure("cannot read", path, e))?;
                let cand = json::parse_cone(&text, &d)?;
                let v = verify_universal(&d, &cand, &probes, config)?;
                report["candidate"] = json::to_value(&v);
                verdicts.push(v);
            } else {
                if matches!(kind, Which::Limit | Which::Both) {
                    let v = Verdict::from_result(limit(&d, config).and_then(|c| verify_universal(&d, &c, &probes, config)))?;
                    report["limit"] = json::to_value(&v);
                    verdicts.push(v);
                }
                if matches!(kind, Which::Colimit | Which::Both) {
                    let v = Verdict::from_result(colimit(&d, config).and_then(|c| verify_universal(&d, &c, &probes, config)))?;
                    report["colimit"] = json::to_value(&v);
                    verdicts.push(v);
                }
            }
            Ok((verdict_code(&verdicts.iter().collect::<Vec<_>>()), report))
        }
        Command::Adjunction { name, left, right, seed, count, .. } => {
            adjunction(name, left, right, *seed, *count, config)
        }
        Command::Theoremb { io, relaxed } => theorem_b(&read_space(&io.input, stdin)?, *relaxed, config),
        Command::Suite { seed, count, .. } => {
            let report = suite::run_suite(*seed, *count, config);
            Ok((suite::exit_code(&report), report))
        }
    }
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Validate(io) | Command::Emtfy(io) | Command::Limit(io) | Command::Colimit(io) => io.out.as_ref(),
        Command::Functor { io, .. } | Command::Verify { io, .. } | Command::Theoremb { io, .. } => io.out.as_ref(),
        Command::Adjunction { out, .. } | Command::Suite { out, .. } => out.as_ref(),
    }
}

/// Runs one invocation; `argv[0]` is the program name. Never panics on
/// malformed input.
pub fn run_command<I, T>(argv: I, stdin: &mut dyn Read) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Response { code, stdout: String::new(), stderr: text }
            } else {
                Response { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => {
            let f = Failure::from(e);
            return Response { code: f.code, stdout: json::to_text(&f.report), stderr: String::new() };
        }
    };
    let config = Config::with_caps(caps);
    let (code, report) = match execute(&cli.command, &config, stdin) {
        Ok(r) => r,
        Err(f) => (f.code, f.report),
    };
    let text = json::to_text(&report);
    match out_path(&cli.command) {
        Some(p) => match fs::write(p, &text) {
            Ok(()) => Response { code, stdout: String::new(), stderr: String::new() },
            Err(e) => {
                let f = io_failure("cannot write", p, e);
                Response { code: f.code, stdout: json::to_text(&f.report), stderr: String::new() }
            }
        },
        None => Response { code, stdout: text, stderr: String::new() },
    }
}
