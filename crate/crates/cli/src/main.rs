//! `gfgpda`: command-line front end for the omega-pushdown toolkit.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 usage error, 3 resource limit,
//! 4 input error.

use clap::{Parser, Subcommand};
use gfg_core::analysis::{accepts_tail_of, lasso_witness, parity_nonempty, PAutomaton};
use gfg_core::closure::{parse_dpa, product, Mode};
use gfg_core::games::strategy::{parse_strategy, print_strategy, simulate_play, StrategyPdt, StrategyRun};
use gfg_core::games::{
    is_spec_source, parse_spec, print_spec, solve_gale_stewart, synthesize, universality, universality_spec, GaleStewartSpec, GameError,
    GsVerdict, Universality, DEFAULT_BUDGET,
};
use gfg_core::pda::{is_deterministic, validate, OmegaPda};
use gfg_core::resolvers::determinize_moore;
use gfg_core::resolvers::moore::{parse_moore, print_moore};
use gfg_core::text::{format_transition, parse_lasso, parse_pda, print_pda};
use gfg_core::zoo::{self, Fixture};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "gfgpda", version, about = "Omega-pushdown automata, good-for-games resolvers, games and synthesis")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Vertex budget for the finite game reduction.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Round limit for simulated plays.
    #[arg(long, global = true, default_value_t = 10_000)]
    guard: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural checks and determinism report.
    Validate { file: String },
    /// Membership of a lasso word written `prefix;loop`.
    Member { file: String, word: String },
    /// Emptiness, with an accepting run when nonempty.
    Empty { file: String },
    /// Configurations from which `letter^ω` is accepted.
    Tailset { file: String, letter: String },
    /// Universality through the game with a one-letter second player.
    Universal {
        file: String,
        /// Whether the automaton is good-for-games (default: a fixture with a resolver, or a deterministic file).
        #[arg(long)]
        gfg: Option<bool>,
    },
    /// Winner of a Gale-Stewart game.
    Solve { spec: String },
    /// Synthesizes a winning strategy transducer for the second player.
    Synth {
        spec: String,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Machine to write: the block-game strategy, its top-tracking form, or the final strategy.
        #[arg(long, default_value = "final", value_parser = ["block", "tracked", "final"])]
        stage: String,
    },
    /// Deterministic automaton equivalent to a good-for-games one with a Moore resolver.
    Determinize {
        file: String,
        moore: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Product with a deterministic parity automaton.
    Product {
        file: String,
        dpa: String,
        #[arg(long)]
        mode: Mode,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Plays a strategy transducer: against a lasso, random letters, or letters from stdin.
    Play {
        spec: String,
        strategy: String,
        /// First player's behavior as a lasso `prefix;loop` over the first alphabet.
        #[arg(long)]
        adam: Option<String>,
        /// Number of random first-player letters (uses --seed).
        #[arg(long)]
        random: Option<usize>,
    },
    /// Built-in fixtures.
    Zoo {
        #[command(subcommand)]
        cmd: ZooCmd,
    },
}

#[derive(Subcommand)]
enum ZooCmd {
    List,
    Dump {
        name: String,
        /// Print the fixture's Moore resolver instead of its automaton.
        #[arg(long)]
        moore: bool,
    },
}

enum Failure {
    Input(String),
    Resource(String),
}

impl From<GameError> for Failure {
    fn from(e: GameError) -> Self {
        match e {
            GameError::ResourceExceeded(_) => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Outcome {
    positive: bool,
    verdict: String,
    text: String,
    inputs: Value,
    witness: Option<Value>,
    vertices: Option<usize>,
}

impl Outcome {
    fn new(positive: bool, verdict: &str, text: String, inputs: Value) -> Self {
        Outcome { positive, verdict: verdict.into(), text, inputs, witness: None, vertices: None }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn fixture(name: &str) -> Result<Fixture, Failure> {
    zoo::by_name(name).ok_or_else(|| Failure::Input(format!("no fixture `{name}` (try `zoo list`)")))
}

fn load_pda(path: &str) -> Result<(OmegaPda, Option<Fixture>), Failure> {
    if let Some(name) = path.strip_prefix("zoo:") {
        let f = fixture(name)?;
        return Ok((f.pda.clone(), Some(f)));
    }
    let pda = parse_pda(&read(path)?).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    Ok((pda, None))
}

/// The default good-for-games claim: a known resolver, or determinism.
fn gfg_default(pda: &OmegaPda, f: &Option<Fixture>) -> bool {
    match f {
        Some(f) => f.resolver().is_some(),
        None => is_deterministic(pda).deterministic,
    }
}

fn load_spec(path: &str) -> Result<GaleStewartSpec, Failure> {
    if let Some(name) = path.strip_prefix("zoo:") {
        if let Some(s) = zoo::spec_by_name(name) {
            return Ok(s);
        }
        let f = fixture(name)?;
        return Ok(universality_spec(&f.pda, f.resolver().is_some()));
    }
    let src = read(path)?;
    if is_spec_source(&src) {
        parse_spec(&src).map_err(|e| Failure::Input(format!("{path}: {e}")))
    } else {
        let pda = parse_pda(&src).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        let det = is_deterministic(&pda).deterministic;
        Ok(universality_spec(&pda, det))
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<String, Failure> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Ok(format!("written to {}", p.display()))
        }
        None => Ok(text.trim_end().to_string()),
    }
}

fn transitions_json(pda: &OmegaPda, ts: &[usize]) -> Value {
    ts.iter().map(|&t| Value::String(format_transition(pda, &pda.transitions[t]))).collect()
}

fn format_pautomaton(pda: &OmegaPda, a: &PAutomaton) -> String {
    let name = |s: usize| if s < a.num_control { pda.states[s].clone() } else { format!("s{s}") };
    let mut out = String::new();
    for &f in &a.finals {
        out.push_str(&format!("final {}\n", name(f)));
    }
    for &(p, x, q) in &a.edges {
        out.push_str(&format!("edge {} {} {}\n", name(p), pda.sym_name(x), name(q)));
    }
    out
}

fn check_strategy(spec: &GaleStewartSpec, pdt: &StrategyPdt) -> Result<(), Failure> {
    if pdt.machine.letters != spec.sigma1 || pdt.out_letters != spec.sigma2 {
        return Err(Failure::Input("strategy alphabets do not match the game".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.cmd {
        Cmd::Validate { file } => {
            let (pda, _) = load_pda(file)?;
            let diags = validate(&pda);
            let det = is_deterministic(&pda);
            let mut text: Vec<String> = diags.iter().map(|d| format!("{}: {}", d.field, d.message)).collect();
            text.push(if diags.is_empty() { "valid".into() } else { "invalid".into() });
            text.push(format!("deterministic: {}", det.deterministic));
            let mut o = Outcome::new(diags.is_empty(), if diags.is_empty() { "valid" } else { "invalid" }, text.join("\n"), json!({ "file": file }));
            o.witness = Some(json!({
                "diagnostics": diags.iter().map(|d| d.message.clone()).collect::<Vec<_>>(),
                "deterministic": det.deterministic,
                "conflicts": det.violations,
            }));
            Ok(o)
        }
        Cmd::Member { file, word } => {
            let (pda, _) = load_pda(file)?;
            let w = parse_lasso(&pda.letters, word).map_err(Failure::Input)?;
            let inputs = json!({ "file": file, "word": word });
            Ok(match lasso_witness(&pda, &w) {
                Some(run) => {
                    let mut o = Outcome::new(true, "accepted", "accepted".into(), inputs);
                    o.witness = Some(json!({ "stem": transitions_json(&pda, &run.stem), "cycle": transitions_json(&pda, &run.cycle) }));
                    o
                }
                None => Outcome::new(false, "rejected", "rejected".into(), inputs),
            })
        }
        Cmd::Empty { file } => {
            let (pda, _) = load_pda(file)?;
            let inputs = json!({ "file": file });
            Ok(match parity_nonempty(&pda) {
                Some(w) => {
                    let mut text = String::from("nonempty\naccepting run:");
                    for &t in w.stem.iter() {
                        text.push_str(&format!("\n  {}", format_transition(&pda, &pda.transitions[t])));
                    }
                    text.push_str("\nthen forever:");
                    for &t in w.cycle.iter() {
                        text.push_str(&format!("\n  {}", format_transition(&pda, &pda.transitions[t])));
                    }
                    let mut o = Outcome::new(true, "nonempty", text, inputs);
                    o.witness = Some(json!({
                        "stem": transitions_json(&pda, &w.stem),
                        "cycle": transitions_json(&pda, &w.cycle),
                        "loop_start": pda.show_config(&w.loop_start),
                    }));
                    o
                }
                None => Outcome::new(false, "empty", "empty".into(), inputs),
            })
        }
        Cmd::Tailset { file, letter } => {
            let (pda, _) = load_pda(file)?;
            let a = pda.letter_id(letter).ok_or_else(|| Failure::Input(format!("unknown letter `{letter}`")))?;
            let p = accepts_tail_of(&pda, a);
            let empty = p.is_empty();
            let verdict = if empty { "empty" } else { "nonempty" };
            let mut o = Outcome::new(!empty, verdict, format!("{verdict}\n{}", format_pautomaton(&pda, &p).trim_end()), json!({ "file": file, "letter": letter }));
            o.witness = Some(json!({ "automaton": format_pautomaton(&pda, &p) }));
            Ok(o)
        }
        Cmd::Universal { file, gfg } => {
            let (pda, f) = load_pda(file)?;
            let claimed = gfg.unwrap_or_else(|| gfg_default(&pda, &f));
            let (u, vertices) = universality(&pda, claimed, cli.budget)?;
            let (positive, verdict, text) = match u {
                Universality::Universal => (true, "universal", "universal".to_string()),
                Universality::NotUniversal => (false, "not universal", "not universal".to_string()),
                Universality::Inconclusive => (
                    false,
                    "inconclusive",
                    "inconclusive: the first player wins the game, which only refutes universality for good-for-games automata".to_string(),
                ),
            };
            let mut o = Outcome::new(positive, verdict, text, json!({ "file": file, "gfg": claimed }));
            o.vertices = Some(vertices);
            Ok(o)
        }
        Cmd::Solve { spec } => {
            let s = load_spec(spec)?;
            let sol = solve_gale_stewart(&s, cli.budget)?;
            let (positive, verdict) = match sol.verdict {
                GsVerdict::Player2Wins => (true, "player 2 wins"),
                GsVerdict::Player1Wins => (false, "player 1 wins"),
                GsVerdict::Inconclusive => (false, "inconclusive"),
            };
            let mut o = Outcome::new(positive, verdict, verdict.into(), json!({ "spec": spec }));
            o.vertices = Some(sol.vertices);
            Ok(o)
        }
        Cmd::Synth { spec, out, stage } => {
            let s = load_spec(spec)?;
            let inputs = json!({ "spec": spec, "out": out.display().to_string(), "stage": stage });
            match synthesize(&s, cli.budget) {
                Ok(syn) => {
                    let m = match stage.as_str() {
                        "block" => &syn.t,
                        "tracked" => &syn.t_prime,
                        _ => &syn.t_minus_d,
                    };
                    std::fs::write(out, print_strategy(m)).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
                    let sizes = json!({
                        "block": syn.t.machine.states.len(),
                        "tracked": syn.t_prime.machine.states.len(),
                        "final": syn.t_minus_d.machine.states.len(),
                    });
                    let text = format!(
                        "strategy written to {} ({} states; block game {} states, tracked {} states)",
                        out.display(),
                        m.machine.states.len(),
                        syn.t.machine.states.len(),
                        syn.t_prime.machine.states.len()
                    );
                    let mut o = Outcome::new(true, "synthesized", text, inputs);
                    o.witness = Some(json!({ "states": sizes }));
                    o.vertices = Some(syn.vertices);
                    Ok(o)
                }
                Err(GameError::NoStrategy) => Ok(Outcome::new(false, "player 1 wins", "player 1 wins; no strategy to synthesize".into(), inputs)),
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Determinize { file, moore, out } => {
            let (pda, _) = load_pda(file)?;
            let m = if let Some(name) = moore.strip_prefix("zoo:") {
                fixture(name)?.moore.ok_or_else(|| Failure::Input(format!("fixture `{name}` has no Moore resolver")))?
            } else {
                parse_moore(&pda, &read(moore)?).map_err(|e| Failure::Input(format!("{moore}: {e}")))?
            };
            let d = determinize_moore(&pda, &m);
            let det = is_deterministic(&d).deterministic;
            let text = write_or_print(out, &print_pda(&d))?;
            Ok(Outcome::new(det, if det { "deterministic" } else { "not deterministic" }, text, json!({ "file": file, "moore": moore })))
        }
        Cmd::Product { file, dpa, mode, out } => {
            let (pda, _) = load_pda(file)?;
            let d = parse_dpa(&read(dpa)?).map_err(|e| Failure::Input(format!("{dpa}: {e}")))?;
            let p = product(&pda, &d, *mode).map_err(|e| match e {
                gfg_core::closure::ClosureError::TooLarge(_) => Failure::Resource(e.to_string()),
                _ => Failure::Input(e.to_string()),
            })?;
            let text = write_or_print(out, &print_pda(&p.pda))?;
            let mut o = Outcome::new(true, "product", text, json!({ "file": file, "dpa": dpa, "mode": format!("{mode:?}").to_lowercase() }));
            o.witness = Some(json!({ "states": p.pda.states.len(), "transitions": p.pda.transitions.len(), "pairs": p.pairs }));
            Ok(o)
        }
        Cmd::Play { spec, strategy, adam, random } => {
            let s = load_spec(spec)?;
            let pdt = parse_strategy(&read(strategy)?).map_err(|e| Failure::Input(format!("{strategy}: {e}")))?;
            check_strategy(&s, &pdt)?;
            let inputs = json!({ "spec": spec, "strategy": strategy });
            if let Some(a) = adam {
                let w = parse_lasso(&s.sigma1, a).map_err(Failure::Input)?;
                let play = simulate_play(&pdt, &w, cli.guard).map_err(|e| match e {
                    gfg_core::games::strategy::PlayError::GuardExceeded(_) | gfg_core::games::strategy::PlayError::EpsilonDivergence(_) => {
                        Failure::Resource(e.to_string())
                    }
                    _ => Failure::Input(e.to_string()),
                })?;
                let outcome = play.condition_word(&s);
                let won = gfg_core::analysis::lasso_membership(&s.condition, &outcome);
                let shown = gfg_core::text::format_lasso(&s.condition.letters, &outcome);
                let verdict = if won { "player 2 wins" } else { "player 1 wins" };
                let mut o = Outcome::new(won, verdict, format!("outcome {shown}\n{verdict}"), inputs);
                o.witness = Some(json!({ "outcome": shown }));
                return Ok(o);
            }
            let mut run = StrategyRun::new(&pdt).map_err(|e| Failure::Input(e.to_string()))?;
            let mut rounds = Vec::new();
            let answer = |run: &mut StrategyRun, b: usize| -> Result<String, Failure> {
                let c = run.step(b).map_err(|e| Failure::Input(e.to_string()))?;
                Ok(format!("{} -> {}", s.sigma1[b], s.sigma2[c]))
            };
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                for _ in 0..*n {
                    let b = rng.gen_range(0..s.sigma1.len());
                    rounds.push(answer(&mut run, b)?);
                }
            } else {
                let stdin = std::io::stdin();
                let mut stdout = std::io::stdout();
                if !cli.json {
                    writeln!(stdout, "letters: {} (quit to stop)", s.sigma1.join(" ")).ok();
                }
                'outer: for line in stdin.lock().lines() {
                    let line = line.map_err(|e| Failure::Input(e.to_string()))?;
                    for tok in line.split_whitespace() {
                        if tok == "quit" {
                            break 'outer;
                        }
                        match s.sigma1.iter().position(|x| x == tok) {
                            Some(b) => {
                                let r = answer(&mut run, b)?;
                                if !cli.json {
                                    writeln!(stdout, "{r}").ok();
                                }
                                rounds.push(r);
                            }
                            None if !cli.json => {
                                writeln!(stdout, "unknown letter `{tok}`").ok();
                            }
                            None => {}
                        }
                    }
                }
                let mut o = Outcome::new(true, "played", String::new(), inputs);
                o.witness = Some(json!({ "rounds": rounds }));
                return Ok(o);
            }
            let mut o = Outcome::new(true, "played", rounds.join("\n"), inputs);
            o.witness = Some(json!({ "rounds": rounds }));
            Ok(o)
        }
        Cmd::Zoo { cmd } => match cmd {
            ZooCmd::List => {
                let mut lines: Vec<String> = zoo::NAMES.iter().map(|n| format!("{n}\tautomaton")).collect();
                lines.extend(zoo::SPEC_NAMES.iter().map(|n| format!("{n}\tgame")));
                let mut o = Outcome::new(true, "ok", lines.join("\n"), json!({}));
                o.witness = Some(json!({ "automata": zoo::NAMES, "games": zoo::SPEC_NAMES }));
                Ok(o)
            }
            ZooCmd::Dump { name, moore } => {
                let text = if let Some(s) = zoo::spec_by_name(name) {
                    print_spec(&s)
                } else {
                    let f = fixture(name)?;
                    if *moore {
                        let m = f.moore.as_ref().ok_or_else(|| Failure::Input(format!("fixture `{name}` has no Moore resolver")))?;
                        print_moore(&f.pda, m)
                    } else {
                        print_pda(&f.pda)
                    }
                };
                Ok(Outcome::new(true, "ok", text.trim_end().to_string(), json!({ "name": name })))
            }
        },
    }
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Validate { .. } => "validate",
        Cmd::Member { .. } => "member",
        Cmd::Empty { .. } => "empty",
        Cmd::Tailset { .. } => "tailset",
        Cmd::Universal { .. } => "universal",
        Cmd::Solve { .. } => "solve",
        Cmd::Synth { .. } => "synth",
        Cmd::Determinize { .. } => "determinize",
        Cmd::Product { .. } => "product",
        Cmd::Play { .. } => "play",
        Cmd::Zoo { cmd: ZooCmd::List } => "zoo list",
        Cmd::Zoo { cmd: ZooCmd::Dump { .. } } => "zoo dump",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let time_ms = start.elapsed().as_millis() as u64;
    let command = command_name(&cli.cmd);
    let (code, report, text) = match result {
        Ok(o) => {
            let code = if o.positive { 0 } else { 1 };
            let mut report = json!({
                "command": command,
                "inputs": o.inputs,
                "verdict": o.verdict,
                "stats": { "vertices": o.vertices, "time_ms": time_ms },
            });
            if let Some(w) = o.witness {
                report["witness"] = w;
            }
            (code, report, o.text)
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Resource(m) => (3, m),
                Failure::Input(m) => (4, m),
            };
            let report = json!({
                "command": command,
                "inputs": {},
                "verdict": "error",
                "error": msg,
                "stats": { "vertices": null, "time_ms": time_ms },
            });
            eprintln!("error: {msg}");
            (code, report, String::new())
        }
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let mut stdout = std::io::stdout();
    if cli.json {
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else if !text.is_empty() {
        let _ = writeln!(stdout, "{text}");
    }
    ExitCode::from(code)
}
