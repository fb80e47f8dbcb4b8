use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qaw_core::algebra::{bcp_to_text, compose_with_queue, control_of, parse_bcp, queue_spec, BcpFile, TermGraph};
use qaw_core::bisim::{bisim, Mode};
use qaw_core::compute::{check_computation, run_function, RunStatus};
use qaw_core::language::{accepts, AcceptVerdict};
use qaw_core::lts::to_dot;
use qaw_core::parse::{parse_qa, parse_qa2, parse_rtm, qa_to_text, rtm_to_text};
use qaw_core::symbol::{parse_word, word_to_display};
use qaw_core::transform::{eliminate_any_triggers, merge_two_queues, normalize, qa_to_rtm, rtm_to_qa};
use qaw_core::{corpus, explore, harness, Error, ExplorationBound, FiniteLts, QueueAutomaton, Rtm, TwoQueueAutomaton};

#[derive(Parser)]
#[command(name = "qaw", version, about = "Queue automata, reactive Turing machines and branching bisimilarity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Bounds {
    /// Maximum number of steps from the root.
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Do not expand configurations whose queue or tape would exceed this.
    #[arg(long)]
    max_queue: Option<usize>,
    #[arg(long, default_value_t = ExplorationBound::DEFAULT_MAX_STATES)]
    max_states: usize,
}

impl Bounds {
    fn bound(self) -> ExplorationBound {
        let b = ExplorationBound::depth(self.depth).with_states(self.max_states);
        match self.max_queue {
            Some(k) => b.with_queue(k),
            None => b,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bounded membership of an action word in a queue automaton's language.
    Accept {
        /// A file, or `corpus:<id>` for a built-in example.
        #[arg(long = "in")]
        input: String,
        /// Dot-separated action tokens; empty for the empty word.
        #[arg(long, default_value = "")]
        word: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the truncated process graph.
    Explore {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the truncated process graph in Graphviz format.
    Dot {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Compare two machines up to a bound.
    Bisim {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        bounds: Bounds,
        /// Depth for the right-hand side (defaults to --depth).
        #[arg(long)]
        right_depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Branching)]
        mode: ModeArg,
    },
    /// Apply a construction and write the result.
    Transform {
        #[arg(long, value_enum)]
        pass: Pass,
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        out: PathBuf,
        /// Also compare input and output truncations at this depth.
        #[arg(long)]
        check_depth: Option<usize>,
    },
    /// Run a queue automaton as a function from input to output.
    Compute {
        #[arg(long = "in")]
        input: String,
        /// Dot-separated input symbols.
        #[arg(long = "input", default_value = "")]
        word: String,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Depth of the determinism check run first.
        #[arg(long, default_value_t = 8)]
        check_depth: usize,
    },
    /// Process terms and the control/queue split.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Run the acceptance checks.
    Harness {
        /// A criterion number or tag (language, queue, transform, bisim, rtm, compute, algebra).
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// Print the recursive queue specification.
    Spec {
        /// Dot-separated data symbols.
        #[arg(long, default_value = "d")]
        data: String,
    },
    /// Print the finite control of a queue automaton (normalized first if needed).
    Control {
        #[arg(long = "in")]
        input: String,
    },
    /// Compose the control with a queue and compare with the automaton.
    Compose {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        bounds: Bounds,
        /// Depth for the composite (defaults to five times --depth).
        #[arg(long)]
        composite_depth: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strong,
    Branching,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pass {
    StarElim,
    Normalize,
    MergeQueues,
    ToRtm,
    FromRtm,
}

enum Model {
    Qa(QueueAutomaton),
    Qa2(TwoQueueAutomaton),
    Rtm(Rtm),
    Bcp(BcpFile),
}

/// Failures that map to exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn read(input: &str) -> Result<(String, String), Usage> {
    if let Some(id) = input.strip_prefix("corpus:") {
        let e = corpus::entry(id)?;
        return Ok((e.kind.extension().to_string(), e.text.to_string()));
    }
    let text = fs::read_to_string(input).map_err(|e| Usage(format!("{input}: {e}")))?;
    let ext = Path::new(input).extension().and_then(|e| e.to_str()).unwrap_or("");
    let kind = match ext {
        "qa" | "qa2" | "rtm" | "bcp" => ext.to_string(),
        // Fall back to the header line.
        _ => text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .filter(|l| matches!(*l, "qa" | "qa2" | "rtm"))
            .unwrap_or("bcp")
            .to_string(),
    };
    Ok((kind, text))
}

fn load(input: &str) -> Result<Model, Usage> {
    let (kind, text) = read(input)?;
    let wrap = |e: Error| Usage(format!("{input}: {e}"));
    Ok(match kind.as_str() {
        "qa" => Model::Qa(parse_qa(&text).map_err(wrap)?),
        "qa2" => Model::Qa2(parse_qa2(&text).map_err(wrap)?),
        "rtm" => Model::Rtm(parse_rtm(&text).map_err(wrap)?),
        _ => Model::Bcp(parse_bcp(&text).map_err(wrap)?),
    })
}

fn load_qa(input: &str) -> Result<QueueAutomaton, Usage> {
    match load(input)? {
        Model::Qa(q) => Ok(q),
        _ => Err(Usage(format!("{input}: expected a queue automaton"))),
    }
}

fn truncate(m: &Model, bound: ExplorationBound) -> Result<FiniteLts, Usage> {
    Ok(match m {
        Model::Qa(q) => explore(q, bound)?,
        Model::Qa2(q) => explore(q, bound)?,
        Model::Rtm(r) => explore(r, bound)?,
        Model::Bcp(f) => explore(&TermGraph::new(f.spec.clone(), f.root.clone())?, bound)?,
    })
}

fn report_bisim(a: &FiniteLts, b: &FiniteLts, mode: Mode) -> ExitCode {
    let v = bisim(a, b, mode);
    println!("left: {} states, right: {} states", a.len(), b.len());
    match v.witness() {
        None => {
            println!("related up to bound");
            ExitCode::SUCCESS
        }
        Some(w) => {
            println!("distinguished");
            println!("{w}");
            if w.touches_frontier {
                println!("(the witness reaches the truncation frontier)");
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    match cli.command {
        Command::Accept { input, word, bounds } => {
            let qa = load_qa(&input)?;
            let word: Vec<String> = word.split('.').filter(|s| !s.is_empty()).map(str::to_string).collect();
            match accepts(&qa, &word, bounds.bound())? {
                AcceptVerdict::Accepted { witness } => {
                    println!("accepted");
                    for (a, c) in witness {
                        println!("  --{a}--> {c}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                AcceptVerdict::Exhausted => {
                    println!("no accepting run within the bound");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Explore { input, bounds } => {
            print!("{}", truncate(&load(&input)?, bounds.bound())?.to_dump());
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { input, bounds } => {
            print!("{}", to_dot(&truncate(&load(&input)?, bounds.bound())?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bisim { left, right, bounds, right_depth, mode } => {
            let a = truncate(&load(&left)?, bounds.bound())?;
            let rb = Bounds { depth: right_depth.unwrap_or(bounds.depth), ..bounds };
            let b = truncate(&load(&right)?, rb.bound())?;
            let mode = match mode {
                ModeArg::Strong => Mode::Strong,
                ModeArg::Branching => Mode::Branching,
            };
            Ok(report_bisim(&a, &b, mode))
        }
        Command::Transform { pass, input, out, check_depth } => transform(pass, &input, &out, check_depth),
        Command::Compute { input, word, budget, check_depth } => {
            let qa = load_qa(&input)?;
            let verdict = check_computation(&qa, ExplorationBound::depth(check_depth))?;
            if !verdict.passes() {
                println!("not a computation up to depth {check_depth}: {:?}", verdict.determinism);
                return Ok(ExitCode::from(1));
            }
            let w = if word.is_empty() { vec![] } else { parse_word(&word)? };
            let r = run_function(&qa, &w, budget)?;
            println!("output: {}", word_to_display(&r.output));
            let status = match &r.status {
                RunStatus::Completed => "completed".to_string(),
                RunStatus::Stuck(c) => format!("stuck at {c}"),
                RunStatus::BudgetExhausted => "budget exhausted".to_string(),
            };
            println!("status: {status}");
            println!("consumed: {} of {}", r.consumed, w.len());
            let trace: Vec<String> = r.trace.iter().map(|a| a.to_string()).collect();
            println!("trace: {}", trace.join(" "));
            Ok(if r.status == RunStatus::Completed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Algebra { op } => algebra(op),
        Command::Harness { only } => {
            println!(
                "defaults: max_states={} (bounds per criterion in brackets)",
                ExplorationBound::DEFAULT_MAX_STATES
            );
            let outcomes = harness::run_all(only.as_deref());
            if outcomes.is_empty() {
                return Err(Usage(format!("no criterion matches '{}'", only.unwrap_or_default())));
            }
            for o in &outcomes {
                println!("{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} passed, {failed} failed", outcomes.len() - failed);
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn transform(pass: Pass, input: &str, out: &Path, check_depth: Option<usize>) -> Result<ExitCode, Usage> {
    let model = load(input)?;
    let (text, output, fresh, certificate) = match (pass, &model) {
        (Pass::StarElim, Model::Qa(q)) => {
            let r = eliminate_any_triggers(q)?;
            (qa_to_text(&r.output), Model::Qa(r.output), r.fresh_states, r.certificate)
        }
        (Pass::Normalize, Model::Qa(q)) => {
            let r = normalize(q)?;
            (qa_to_text(&r.output), Model::Qa(r.output), r.fresh_states, r.certificate)
        }
        (Pass::MergeQueues, Model::Qa2(q)) => {
            let r = merge_two_queues(q)?;
            (qa_to_text(&r.output), Model::Qa(r.output), r.fresh_states, r.certificate)
        }
        (Pass::ToRtm, Model::Qa(q)) => {
            let r = qa_to_rtm(q)?;
            (rtm_to_text(&r.output), Model::Rtm(r.output), r.fresh_states, r.certificate)
        }
        (Pass::FromRtm, Model::Rtm(m)) => {
            let r = rtm_to_qa(m)?;
            (qa_to_text(&r.output), Model::Qa(r.output), r.fresh_states, r.certificate)
        }
        _ => return Err(Usage(format!("{input}: wrong input kind for this pass"))),
    };
    fs::write(out, text).map_err(|e| Usage(format!("{}: {e}", out.display())))?;
    println!("wrote {} ({} fresh states; {certificate})", out.display(), fresh.len());
    match check_depth {
        None => Ok(ExitCode::SUCCESS),
        Some(d) => {
            let a = truncate(&model, ExplorationBound::depth(d))?;
            let b = truncate(&output, ExplorationBound::depth(d))?;
            Ok(report_bisim(&a, &b, Mode::Branching))
        }
    }
}

fn algebra(op: AlgebraOp) -> Result<ExitCode, Usage> {
    match op {
        AlgebraOp::Spec { data } => {
            let spec = queue_spec(&parse_word(&data)?.into_iter().collect())?;
            print!("{}", bcp_to_text(&BcpFile { spec, root: qaw_core::algebra::var("Qio") }));
            Ok(ExitCode::SUCCESS)
        }
        AlgebraOp::Control { input } => {
            let qa = normalized(load_qa(&input)?)?;
            let c = control_of(&qa)?;
            println!("# queue ports: {} (enqueue) {} (dequeue)", c.input, c.output);
            print!("{}", c.lts.to_dump());
            Ok(ExitCode::SUCCESS)
        }
        AlgebraOp::Compose { input, bounds, composite_depth } => {
            let qa = normalized(load_qa(&input)?)?;
            let c = control_of(&qa)?;
            let comp = compose_with_queue(&c, &qa.data)?;
            let cb = Bounds { depth: composite_depth.unwrap_or(5 * bounds.depth), ..bounds };
            let a = explore(&qa, bounds.bound())?;
            let b = explore(&comp, cb.bound())?;
            Ok(report_bisim(&a, &b, Mode::Branching))
        }
    }
}

fn normalized(qa: QueueAutomaton) -> Result<QueueAutomaton, Usage> {
    if qa.is_normalized() {
        Ok(qa)
    } else {
        Ok(normalize(&qa)?.output)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
