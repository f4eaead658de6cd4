mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use irrdec_core::decompose::{decompose3, PipelineConfig};
use irrdec_core::factor::SolveMode;
use irrdec_core::graph::{
    generate, is_locally_irregular_decomposition, parse_edge_list, serialize_edge_list, star,
    Family, Graph, TStep,
};
use irrdec_core::lll::{
    audit_claim, audit_constants, check_conditional_bound, exact_edge_risk_probability,
    ConditionalBound, Conditioning, LllError, RiskEvent, CLAIM_IDS,
};
use irrdec_core::oracle::{min_parts_with, OracleConfig, DEFAULT_EDGE_LIMIT};
use manifest::RunManifest;

const EXIT_DIAGNOSTIC: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "irrdec", version, about = "Locally irregular decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
    /// Run the three-part pipeline on an edge-list file.
    Decompose(DecomposeArgs),
    /// Least number of locally irregular parts, by exhaustive search.
    Oracle(OracleArgs),
    /// Recompute the numeric constants of the construction.
    Audit(AuditArgs),
    /// Exact probability that an edge is risky, with the matching bound.
    Riskprob(RiskprobArgs),
}

#[derive(Args)]
struct Common {
    /// Print the JSON record instead of the text rendering.
    #[arg(long)]
    json: bool,
    /// Also write the JSON record to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// path, cycle, complete, complete_bipartite, random_regular, gnp, spider, star or t_family.
    family: String,
    /// Family parameters; t_family takes a JSON list of {attach, length, triangle} steps.
    params: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the edge list here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Heuristic,
}

#[derive(Args)]
struct DecomposeArgs {
    input: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    slack: f64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Per-stage solver budget (search nodes or edge flips).
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 100_000)]
    max_rounds: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// Cap on colour assignments tried.
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AuditArgs {
    /// Audit a single claim.
    #[arg(long)]
    claim: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum RiskKind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "23")]
    TwoAndThree,
}

#[derive(Args)]
struct RiskprobArgs {
    du: u64,
    dv: u64,
    #[arg(value_enum)]
    kind: RiskKind,
    #[arg(long)]
    c1u: Option<u64>,
    #[arg(long)]
    c2u: Option<u64>,
    #[arg(long)]
    c1v: Option<u64>,
    #[arg(long)]
    c2v: Option<u64>,
    #[command(flatten)]
    common: Common,
}

/// A finished command: its record, the text rendering, and the exit status.
struct Outcome {
    result: Value,
    text: String,
    code: u8,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn data(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_DATA,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("irrdec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let start = Instant::now();
    let (name, parameters, seed, common, outcome) = match cli.command {
        Command::Gen(args) => return cmd_gen(args, start),
        Command::Decompose(args) => {
            let params = json!({
                "input": args.input.display().to_string(),
                "slack": args.slack,
                "mode": match args.mode { Mode::Exact => "exact", Mode::Heuristic => "heuristic" },
                "budget": args.budget,
                "strict": args.strict,
                "max_rounds": args.max_rounds,
            });
            let seed = args.seed;
            let outcome = cmd_decompose(&args)?;
            ("decompose", params, Some(seed), args.common, outcome)
        }
        Command::Oracle(args) => {
            let params = json!({
                "input": args.input.display().to_string(),
                "kmax": args.kmax,
                "budget": args.budget,
            });
            let outcome = cmd_oracle(&args)?;
            ("oracle", params, None, args.common, outcome)
        }
        Command::Audit(args) => {
            let params = json!({ "claim": args.claim });
            let outcome = cmd_audit(&args)?;
            ("audit", params, None, args.common, outcome)
        }
        Command::Riskprob(args) => {
            let params = json!({
                "du": args.du, "dv": args.dv, "type": kind_name(args.kind),
                "c1u": args.c1u, "c2u": args.c2u, "c1v": args.c1v, "c2v": args.c2v,
            });
            let outcome = cmd_riskprob(&args)?;
            ("riskprob", params, None, args.common, outcome)
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let manifest = RunManifest::new(name, parameters, seed, elapsed, &outcome.result);
    let record = json!({ "result": outcome.result, "manifest": manifest });
    emit(&record, &outcome.text, &common)?;
    Ok(outcome.code)
}

fn emit(record: &Value, text: &str, common: &Common) -> Result<(), Failure> {
    let pretty = serde_json::to_string_pretty(record).expect("JSON values serialize");
    if let Some(path) = &common.out {
        write_file(path, &(pretty.clone() + "\n"))?;
    }
    if common.json {
        say(&(pretty + "\n"));
    } else {
        say(text);
    }
    Ok(())
}

/// Writes to standard output, ignoring a closed pipe.
fn say(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn num<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T, Failure> {
    let raw = params
        .get(i)
        .ok_or_else(|| usage(format!("missing parameter <{what}>")))?;
    raw.parse()
        .map_err(|_| usage(format!("<{what}> must be a number, got {raw:?}")))
}

fn family_of(args: &GenArgs) -> Result<Option<Family>, Failure> {
    let p = &args.params;
    let need_seed = || {
        args.seed
            .ok_or_else(|| usage(format!("{} requires --seed", args.family)))
    };
    let expect = |count: usize| {
        if p.len() == count {
            Ok(())
        } else {
            Err(usage(format!(
                "{} takes {count} parameter(s), got {}",
                args.family,
                p.len()
            )))
        }
    };
    Ok(Some(match args.family.as_str() {
        "path" => {
            expect(1)?;
            Family::Path(num(p, 0, "m")?)
        }
        "cycle" => {
            expect(1)?;
            Family::Cycle(num(p, 0, "m")?)
        }
        "complete" => {
            expect(1)?;
            Family::Complete(num(p, 0, "n")?)
        }
        "complete_bipartite" => {
            expect(2)?;
            Family::CompleteBipartite(num(p, 0, "a")?, num(p, 1, "b")?)
        }
        "random_regular" => {
            expect(2)?;
            Family::RandomRegular {
                n: num(p, 0, "n")?,
                d: num(p, 1, "d")?,
                seed: need_seed()?,
            }
        }
        "gnp" => {
            expect(2)?;
            Family::Gnp {
                n: num(p, 0, "n")?,
                p: num(p, 1, "p")?,
                seed: need_seed()?,
            }
        }
        "spider" => {
            expect(1)?;
            Family::Spider(num(p, 0, "l")?)
        }
        "star" => {
            expect(1)?;
            return Ok(None);
        }
        "t_family" => {
            let script: Vec<TStep> = match p.as_slice() {
                [] => Vec::new(),
                [s] => serde_json::from_str(s).map_err(|e| usage(format!("bad script: {e}")))?,
                _ => return Err(usage("t_family takes one JSON script")),
            };
            Family::TFamily(script)
        }
        other => return Err(usage(format!("unknown family {other:?}"))),
    }))
}

fn cmd_gen(args: GenArgs, start: Instant) -> Result<u8, Failure> {
    let g = match family_of(&args)? {
        Some(family) => generate(&family).map_err(|e| usage(e.to_string()))?,
        None => star(num(&args.params, 0, "leaves")?),
    };
    let text = serialize_edge_list(&g);
    let result = json!({ "n": g.n(), "m": g.edge_count(), "edge_list": text });
    let manifest = RunManifest::new(
        "gen",
        json!({ "family": args.family, "params": args.params }),
        args.seed,
        start.elapsed().as_secs_f64() * 1e3,
        &result,
    );
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    if args.json {
        let record = json!({ "result": result, "manifest": manifest });
        say(&(serde_json::to_string_pretty(&record).expect("JSON values serialize") + "\n"));
    } else if args.out.is_none() {
        say(&text);
    } else {
        say(&format!("{} vertices, {} edges\n", g.n(), g.edge_count()));
    }
    Ok(0)
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<Outcome, Failure> {
    let g = read_graph(&args.input)?;
    let cfg = PipelineConfig {
        seed: args.seed,
        slack: args.slack,
        solver_mode: match args.mode {
            Mode::Exact => SolveMode::Exact,
            Mode::Heuristic => SolveMode::Heuristic,
        },
        solver_budget: args.budget.or(PipelineConfig::default().solver_budget),
        strict: args.strict,
        max_rounds: args.max_rounds,
        ..Default::default()
    };
    let out = decompose3(&g, &cfg);
    let trace = out.trace.summary_json();
    Ok(match out.result {
        Ok(dec) => {
            let valid = is_locally_irregular_decomposition(&g, &dec).unwrap_or(false);
            Outcome {
                text: format!(
                    "decomposition into 3 parts, valid: {valid}\n{}\n",
                    serde_json::to_string(&dec.to_json(&g)).expect("JSON values serialize")
                ),
                result: json!({
                    "status": "ok",
                    "valid": valid,
                    "decomposition": dec.to_json(&g),
                    "trace": trace,
                }),
                code: if valid { 0 } else { EXIT_DIAGNOSTIC },
            }
        }
        Err(diag) => Outcome {
            text: format!("diagnostic at stage {:?}: {diag}\n", diag.stage()),
            result: json!({
                "status": "diagnostic",
                "stage": diag.stage(),
                "diagnostic": diag,
                "trace": trace,
            }),
            code: EXIT_DIAGNOSTIC,
        },
    })
}

fn edge_limit() -> Result<usize, Failure> {
    match std::env::var("IRRDEC_EDGE_LIMIT") {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| usage(format!("IRRDEC_EDGE_LIMIT must be an integer, got {raw:?}"))),
        Err(_) => Ok(DEFAULT_EDGE_LIMIT),
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<Outcome, Failure> {
    let g = read_graph(&args.input)?;
    let cfg = OracleConfig {
        edge_limit: edge_limit()?,
        node_limit: args.budget,
    };
    let r = min_parts_with(&g, args.kmax, &cfg).map_err(|e| Failure {
        code: EXIT_DIAGNOSTIC,
        message: e.to_string(),
    })?;
    let text = match r.feasible_k {
        Some(k) => format!("least number of parts: {k}\n"),
        None if r.exhausted => format!("no decomposition with at most {} parts\n", args.kmax),
        None => format!("undecided after {} nodes\n", r.nodes_explored),
    };
    Ok(Outcome {
        result: r.to_json(&g),
        text,
        code: if r.feasible_k.is_some() {
            0
        } else {
            EXIT_DIAGNOSTIC
        },
    })
}

fn cmd_audit(args: &AuditArgs) -> Result<Outcome, Failure> {
    let claims = match &args.claim {
        Some(id) => vec![audit_claim(id).ok_or_else(|| {
            usage(format!(
                "unknown claim {id:?}; known: {}",
                CLAIM_IDS.join(", ")
            ))
        })?],
        None => audit_constants().claims,
    };
    let all_pass = claims.iter().all(|c| c.pass);
    let text: String = claims
        .iter()
        .map(|c| {
            format!(
                "{:<5} {:<16} {:>22} printed {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.claim_id,
                format!("{:.6}", c.computed),
                c.printed
            )
        })
        .collect();
    Ok(Outcome {
        result: json!({ "claims": claims, "all_pass": all_pass }),
        text,
        code: if all_pass { 0 } else { EXIT_DIAGNOSTIC },
    })
}

fn kind_name(kind: RiskKind) -> &'static str {
    match kind {
        RiskKind::One => "1",
        RiskKind::Two => "2",
        RiskKind::Three => "3",
        RiskKind::TwoAndThree => "23",
    }
}

fn cmd_riskprob(args: &RiskprobArgs) -> Result<Outcome, Failure> {
    let (event, bound) = match args.kind {
        RiskKind::One => (RiskEvent::Type1, ConditionalBound::TypeOneGivenC1v),
        RiskKind::Two => (RiskEvent::Type2, ConditionalBound::TypeTwoGivenC2v),
        RiskKind::Three => (RiskEvent::Type3, ConditionalBound::TypeThreeGivenC1vC2v),
        RiskKind::TwoAndThree => (
            RiskEvent::TwoAndThree,
            ConditionalBound::TwoAndThreeGivenC1vC2v,
        ),
    };
    let conditioning = Conditioning {
        c1u: args.c1u,
        c2u: args.c2u,
        c1v: args.c1v,
        c2v: args.c2v,
    };
    let lll_failure = |e: LllError| match e {
        LllError::GateFails { .. } => Failure {
            code: EXIT_DIAGNOSTIC,
            message: e.to_string(),
        },
        _ => usage(e.to_string()),
    };
    let p =
        exact_edge_risk_probability(args.du, args.dv, event, &conditioning).map_err(lll_failure)?;
    let check = check_conditional_bound(args.du, args.dv, bound).map_err(lll_failure)?;
    let value = p.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
        / p.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let text = format!(
        "probability {p} ({value:.6})\nbound {:?}: {:.6}, worst case {}/{}, holds: {}\n",
        bound,
        bound.value(args.dv),
        check.worst.0,
        check.worst.1,
        check.holds
    );
    Ok(Outcome {
        result: json!({
            "probability": p.to_string(),
            "value": value,
            "bound": {
                "name": bound,
                "value": bound.value(args.dv),
                "worst": format!("{}/{}", check.worst.0, check.worst.1),
                "holds": check.holds,
            },
        }),
        text,
        code: if check.holds { 0 } else { EXIT_DIAGNOSTIC },
    })
}
