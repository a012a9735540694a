use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use duality_lab::dsl::{buffer_workspace, parse_workspace, RelBody, Workspace};
use duality_lab::logic::{check_derivation, eval_formula, CheckOptions};
use duality_lab::modal::{
    buffer_fixture, classify_sim, greatest_fixpoint, Side, SimKind, SimReport,
};
use duality_lab::relations::{check_directionally_atomic, enumerate_lift, lower_lift, upper_lift};
use duality_lab::suite::{run_suite, Suite, SuiteParams};
use duality_lab::{EnumConfig, FinRel, LogicError, Models};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "duality-lab",
    version,
    about = "Relation liftings, CABA duality and relational modal logic on finite models"
)]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a workspace and report its declarations.
    Parse { file: PathBuf },
    /// Print the lower (or upper) lifting of a frame relation.
    Lift {
        file: PathBuf,
        #[arg(long)]
        rel: String,
        #[arg(long)]
        upper: bool,
    },
    /// Directional-atomicity diagnostics for a relation.
    CheckRel {
        file: PathBuf,
        #[arg(long)]
        rel: String,
    },
    /// Is the relation a simulation between its frames?
    CheckSim {
        file: PathBuf,
        #[arg(long)]
        rel: String,
    },
    /// Is the relation a bisimulation between its frames?
    CheckBisim {
        file: PathBuf,
        #[arg(long)]
        rel: String,
    },
    /// The largest bisimulation between two frames.
    GreatestBisim {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Run a seeded batch of duality checks.
    VerifyDuality {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Denotation of a formula, as a sorted list of worlds.
    Eval {
        file: PathBuf,
        /// A declared formula name, or formula text (then `--frame` picks the frame).
        #[arg(long)]
        formula: String,
        #[arg(long)]
        frame: Option<String>,
    },
    /// Check a derivation against its theory.
    CheckDerivation {
        file: PathBuf,
        #[arg(long)]
        derivation: String,
        /// Trust theory facts; the verdict is then conditional.
        #[arg(long)]
        assume: bool,
    },
    /// Write a generated workspace.
    #[command(subcommand)]
    Fixture(Fixture),
}

#[derive(Subcommand)]
enum Fixture {
    /// The buffer example, truncated at `n`.
    Buffer {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Lift { .. } => "lift",
            Command::CheckRel { .. } => "check-rel",
            Command::CheckSim { .. } => "check-sim",
            Command::CheckBisim { .. } => "check-bisim",
            Command::GreatestBisim { .. } => "greatest-bisim",
            Command::VerifyDuality { .. } => "verify-duality",
            Command::Eval { .. } => "eval",
            Command::CheckDerivation { .. } => "check-derivation",
            Command::Fixture(_) => "fixture",
        }
    }
}

/// Result of a command that ran to completion.
struct Outcome {
    ok: bool,
    text: String,
    witnesses: Vec<String>,
    report: Value,
    seed: Option<u64>,
}

impl Outcome {
    fn pass(text: String, report: Value) -> Self {
        Self {
            ok: true,
            text,
            witnesses: vec![],
            report,
            seed: None,
        }
    }

    fn verdict(ok: bool, text: String, witnesses: Vec<String>, report: Value) -> Self {
        Self {
            ok,
            text,
            witnesses,
            report,
            seed: None,
        }
    }
}

/// Usage, input and size errors; exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    command: &'a str,
    verdict: &'a str,
    witnesses: &'a [String],
    timings: Value,
    seed: Option<u64>,
    report: &'a Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = EnumConfig::from_env();
    let name = cli.command.name();
    let start = Instant::now();
    let result = run(cli.command, &cfg);
    let timings = json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 });
    let (code, verdict, outcome) = match result {
        Ok(o) if o.ok => (0, "pass", o),
        Ok(o) => (1, "fail", o),
        Err(Fatal(msg)) => {
            let o = Outcome {
                ok: false,
                text: String::new(),
                witnesses: vec![msg],
                report: Value::Null,
                seed: None,
            };
            (2, "error", o)
        }
    };
    if cli.json {
        let doc = JsonReport {
            command: name,
            verdict,
            witnesses: &outcome.witnesses,
            timings,
            seed: outcome.seed,
            report: &outcome.report,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("report serializes")
        );
    } else if code == 2 {
        eprintln!("error: {}", outcome.witnesses.join("\n"));
    } else {
        print!("{}", outcome.text);
        for w in &outcome.witnesses {
            println!("witness: {w}");
        }
    }
    ExitCode::from(code)
}

fn load(path: &Path) -> Result<Workspace, Fatal> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    parse_workspace(&text).map_err(|e| Fatal(format!("{}:\n{e}", path.display())))
}

fn frame_rel<'a>(ws: &'a Workspace, name: &str) -> Result<&'a FinRel, Fatal> {
    let decl = ws
        .relations
        .get(name)
        .ok_or_else(|| Fatal(format!("no relation named `{name}`")))?;
    decl.frame_relation()
        .ok_or_else(|| Fatal(format!("`{name}` relates CABAs, not frames")))
}

fn sim_outcome(ws: &Workspace, name: &str, kind: SimKind) -> Result<Outcome, Fatal> {
    let q = frame_rel(ws, name)?;
    let decl = &ws.relations[name];
    let report: SimReport = classify_sim(q, &ws.frames[&decl.src], &ws.frames[&decl.dst])?;
    let ok = match kind {
        SimKind::Simulation => report.is_simulation,
        SimKind::Bisimulation => report.is_bisimulation,
    };
    let witnesses = report
        .counterexamples
        .iter()
        .filter(|c| kind == SimKind::Bisimulation || c.side == Side::Forth)
        .map(|c| {
            let side = if c.side == Side::Forth {
                "forth"
            } else {
                "back"
            };
            format!(
                "({}, {}) fails {side} on {} -> {}",
                c.pair.0, c.pair.1, c.transition.0, c.transition.1
            )
        })
        .collect();
    let text = format!(
        "{name} : {} -> {}\nsimulation: {}\ncosimulation: {}\nbisimulation: {}\n",
        decl.src, decl.dst, report.is_simulation, report.is_cosimulation, report.is_bisimulation
    );
    Ok(Outcome::verdict(
        ok,
        text,
        witnesses,
        serde_json::to_value(&report)?,
    ))
}

fn sorted_worlds(frame: &duality_lab::Frame, set: duality_lab::Subset) -> Vec<String> {
    let mut v: Vec<String> = frame
        .worlds()
        .names(set)
        .into_iter()
        .map(str::to_owned)
        .collect();
    v.sort();
    v
}

fn run(command: Command, cfg: &EnumConfig) -> Result<Outcome, Fatal> {
    match command {
        Command::Parse { file } => {
            let ws = load(&file)?;
            let counts = json!({
                "frames": ws.frames.len(),
                "relations": ws.relations.len(),
                "functions": ws.functions.len(),
                "cabas": ws.cabas.len(),
                "formulas": ws.formulas.len(),
                "theories": ws.theories.len(),
                "derivations": ws.derivations.len(),
            });
            let text = ws
                .order
                .iter()
                .map(|(k, n, _)| format!("{} {n}\n", k.keyword()))
                .collect();
            Ok(Outcome::pass(text, counts))
        }
        Command::Lift { file, rel, upper } => {
            let ws = load(&file)?;
            let r = frame_rel(&ws, &rel)?;
            let lifted = if upper { upper_lift(r) } else { lower_lift(r) };
            let pairs = enumerate_lift(&lifted, cfg)?;
            let rendered: Vec<(String, String)> = pairs
                .iter()
                .map(|&(s, t)| (r.src().render(s), r.dst().render(t)))
                .collect();
            let arrow = if upper { "upper" } else { "lower" };
            let mut text = format!("{arrow} lifting of {rel}: {} pairs\n", rendered.len());
            for (s, t) in &rendered {
                text.push_str(&format!("{s} -> {t}\n"));
            }
            Ok(Outcome::pass(
                text,
                json!({ "lifting": arrow, "pairs": rendered }),
            ))
        }
        Command::CheckRel { file, rel } => {
            let ws = load(&file)?;
            let decl = ws
                .relations
                .get(&rel)
                .ok_or_else(|| Fatal(format!("no relation named `{rel}`")))?;
            let q = match &decl.body {
                RelBody::Frames(r) => lower_lift(r),
                RelBody::Cabas { rel, .. } => rel.clone(),
            };
            let report = check_directionally_atomic(&q, cfg)?;
            let line = |name: &str, c: &duality_lab::lattice::LawCheck| match &c.witness {
                None => format!("{name}: pass\n"),
                Some(w) => format!("{name}: fail at {w}\n"),
            };
            let text = [
                line("bimodule", &report.bimodule),
                line("left-disjunctive", &report.left_disjunctive),
                line("atomic-founded", &report.atomic_founded),
            ]
            .concat();
            let witnesses = report.first_failure().into_iter().collect();
            Ok(Outcome::verdict(
                report.all_pass(),
                text,
                witnesses,
                serde_json::to_value(&report)?,
            ))
        }
        Command::CheckSim { file, rel } => sim_outcome(&load(&file)?, &rel, SimKind::Simulation),
        Command::CheckBisim { file, rel } => {
            sim_outcome(&load(&file)?, &rel, SimKind::Bisimulation)
        }
        Command::GreatestBisim { file, left, right } => {
            let ws = load(&file)?;
            let frame = |n: &str| {
                ws.frames
                    .get(n)
                    .ok_or_else(|| Fatal(format!("no frame named `{n}`")))
            };
            let g = greatest_fixpoint(SimKind::Bisimulation, frame(&left)?, frame(&right)?);
            let pairs: Vec<(String, String)> = g
                .named_pairs()
                .into_iter()
                .map(|(a, b)| (a.to_owned(), b.to_owned()))
                .collect();
            let text = format!(
                "greatest bisimulation {left} -> {right}: {} pairs\n{g}\n",
                pairs.len()
            );
            Ok(Outcome::pass(text, json!({ "pairs": pairs })))
        }
        Command::VerifyDuality {
            suite,
            max_size,
            seed,
            samples,
        } => {
            let report = run_suite(
                suite,
                SuiteParams {
                    max_size,
                    seed,
                    samples,
                },
                cfg,
            )?;
            let mut text = String::new();
            for c in &report.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                text.push_str(&format!("[{mark}] {} ({} checked)\n", c.name, c.checked));
            }
            let witnesses = report
                .checks
                .iter()
                .filter_map(|c| c.witness.as_ref().map(|w| format!("{}: {w}", c.name)))
                .collect();
            let mut o = Outcome::verdict(
                report.all_pass(),
                text,
                witnesses,
                serde_json::to_value(&report)?,
            );
            o.seed = Some(seed);
            Ok(o)
        }
        Command::Eval {
            file,
            formula,
            frame,
        } => {
            let mut ws = load(&file)?;
            const INLINE: &str = "__eval";
            if !ws.formulas.contains_key(&formula) {
                let frame = match frame {
                    Some(f) => f,
                    None if ws.frames.len() == 1 => {
                        ws.frames.keys().next().cloned().unwrap_or_default()
                    }
                    None => {
                        return Err(Fatal(format!(
                            "`{formula}` is not a declared formula; pass --frame"
                        )))
                    }
                };
                let text = std::fs::read_to_string(&file)?;
                let extended = format!("{text}\nformula {INLINE} over {frame} = {formula} ;\n");
                ws =
                    parse_workspace(&extended).map_err(|e| Fatal(format!("in --formula:\n{e}")))?;
            }
            let key = if ws.formulas.contains_key(&formula) {
                formula.as_str()
            } else {
                INLINE
            };
            let decl = &ws.formulas[key];
            let f = &ws.frames[&decl.frame];
            let worlds = sorted_worlds(f, eval_formula(&decl.formula, f)?);
            let text = format!("{}\n", worlds.join(" "));
            Ok(Outcome::pass(
                text,
                json!({ "frame": decl.frame, "formula": decl.formula.to_string(), "worlds": worlds }),
            ))
        }
        Command::CheckDerivation {
            file,
            derivation,
            assume,
        } => {
            let ws = load(&file)?;
            let decl = ws
                .derivations
                .get(&derivation)
                .ok_or_else(|| Fatal(format!("no derivation named `{derivation}`")))?;
            let theory = &ws
                .theories
                .get(&decl.uses)
                .ok_or_else(|| Fatal(format!("no theory named `{}`", decl.uses)))?
                .theory;
            let models: Models = ws.models();
            match check_derivation(
                &decl.derivation,
                &models,
                theory,
                CheckOptions {
                    assume_theory: assume,
                },
            ) {
                Ok(r) => {
                    let status = match (r.root_true, r.conditional) {
                        (true, false) => "accepted",
                        (true, true) => "accepted (conditional: theory facts assumed)",
                        (false, _) => "accepted but the conclusion is false",
                    };
                    let text = format!(
                        "{derivation}: {status}\nconclusion: {}\nnodes: {}, entailment leaves: {}, facts verified: {}\n",
                        r.conclusion,
                        r.nodes.len(),
                        r.leaves_checked,
                        r.facts_checked
                    );
                    let witnesses = r
                        .nodes
                        .iter()
                        .filter(|n| !n.semantically_true)
                        .map(|n| format!("{}: {} is false", n.path, n.conclusion))
                        .collect();
                    Ok(Outcome::verdict(
                        r.root_true,
                        text,
                        witnesses,
                        serde_json::to_value(&r)?,
                    ))
                }
                Err(e @ (LogicError::Relation(_) | LogicError::Modal(_))) => Err(e.into()),
                Err(e) => Ok(Outcome::verdict(
                    false,
                    format!("{derivation}: rejected\n"),
                    vec![e.to_string()],
                    json!({ "rejected": e.to_string() }),
                )),
            }
        }
        Command::Fixture(Fixture::Buffer { n, out }) => {
            let text = buffer_workspace(&buffer_fixture(n)?).serialize();
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
                    Ok(Outcome::pass(
                        format!("wrote {}\n", path.display()),
                        json!({ "n": n, "out": path }),
                    ))
                }
                None => Ok(Outcome::pass(text, json!({ "n": n }))),
            }
        }
    }
}
