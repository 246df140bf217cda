use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hornmodal::chase::saturate;
use hornmodal::constructions::{
    build_phi, build_phi_prime, grid_model, prune_no_predecessor, reduce, tile_torus,
    verify_figure, Decoding, DominoSystem, GridModelSpec, MidConvention, Target, Topology,
};
use hornmodal::semantics::{check_frame_condition, Evaluation, FrameCheck, KripkeStructure};
use hornmodal::solver::{
    certify, certify_anchored, find_anchored_model, find_model, Engine, Mode, SolverConfig,
    Status,
};
use hornmodal::syntax::{print_formula, print_theory};
use hornmodal::{parse_formula, parse_theory, FrameTheory, ModalFormula};

/// Workbench for multimodal logics over Horn frame theories.
#[derive(Parser)]
#[command(name = "hornmodal", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a structure, at one world or globally.
    Check(CheckArgs),
    /// Check a structure's frame against a Horn theory.
    FrameCheck {
        structure: PathBuf,
        theory: PathBuf,
    },
    /// Saturate a structure under a Horn theory and explain the added pairs.
    Chase {
        structure: PathBuf,
        theory: PathBuf,
        /// Where to write the saturated structure.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate the theory Phi(n,m) or Phi'(n,m).
    GenPhi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        prime: bool,
        #[arg(long, default_value = "B")]
        mid: MidConvention,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a grid-like model.
    GenGrid {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "patch")]
        topology: Topology,
        #[arg(long, default_value = "thick=R1")]
        decoding: Decoding,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the grid model against Phi and Phi' and report its paths.
    VerifyFigure {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "B")]
        mid: MidConvention,
        #[arg(long, default_value = "thick=R1")]
        decoding: Decoding,
        #[arg(long, default_value = "patch")]
        topology: Topology,
    },
    /// Build the domino reduction instance (theory and formula).
    Reduce {
        domino: PathBuf,
        #[arg(long, default_value = "global")]
        target: Target,
        #[arg(long, default_value = "B")]
        mid: MidConvention,
        /// Output prefix: writes PREFIX.theory, PREFIX.formula and, for
        /// global targets, PREFIX.anchor.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bounded search for a finite model.
    Solve(SolveArgs),
    /// Drop worlds without predecessors, keeping the root.
    Prune {
        structure: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a tiling of the e x e torus.
    TileTorus {
        domino: PathBuf,
        #[arg(long)]
        e: usize,
    },
    /// Render a structure as Graphviz DOT.
    Dot { structure: PathBuf },
}

#[derive(Args)]
struct CheckArgs {
    structure: PathBuf,
    formula: PathBuf,
    #[arg(long, conflicts_with = "global", required_unless_present = "global")]
    world: Option<String>,
    #[arg(long)]
    global: bool,
}

#[derive(Args)]
struct SolveArgs {
    formula: PathBuf,
    theory: PathBuf,
    /// Formula that must also hold at the witness world.
    #[arg(long)]
    anchor: Option<PathBuf>,
    /// JSON solver configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    max_worlds: Option<usize>,
    /// Time budget in seconds.
    #[arg(long, env = "HORNMODAL_TIMEOUT")]
    timeout: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    engine: Option<Engine>,
    /// Where to write the model.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Positive, negative, or (through `Err`) failed.
enum Outcome {
    Yes,
    No,
    Failed,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_structure(path: &Path) -> Result<KripkeStructure> {
    KripkeStructure::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_formula(path: &Path) -> Result<ModalFormula> {
    parse_formula(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_theory(path: &Path) -> Result<FrameTheory> {
    parse_theory(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_domino(path: &Path) -> Result<DominoSystem> {
    DominoSystem::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn print_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
}

fn verdict(b: bool) -> Outcome {
    if b {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let json = cli.json;
    match cli.command {
        Command::Check(args) => {
            let s = load_structure(&args.structure)?;
            let f = load_formula(&args.formula)?;
            let eval = Evaluation::new(&s, &f)?;
            let (holds, scope) = match &args.world {
                Some(w) => (eval.holds_at(s.world_id(w)?), w.clone()),
                None => (eval.holds_everywhere(), "global".to_string()),
            };
            if json {
                let failing: Vec<&str> = (0..s.world_count())
                    .filter(|&w| !eval.holds_at(w))
                    .map(|w| s.world_name(w))
                    .collect();
                print_json(json!({ "holds": holds, "scope": scope, "failing_worlds": failing }));
            } else {
                println!("{holds}");
            }
            Ok(verdict(holds))
        }
        Command::FrameCheck { structure, theory } => {
            let s = load_structure(&structure)?;
            let th = load_theory(&theory)?;
            let check = check_frame_condition(&s, &th)?;
            match &check {
                FrameCheck::Holds if json => print_json(json!({ "holds": true })),
                FrameCheck::Holds => println!("holds"),
                FrameCheck::Violated(v) if json => print_json(json!({
                    "holds": false,
                    "clause": v.clause_index + 1,
                    "text": v.clause.to_string(),
                    "witness": v.assignment,
                })),
                FrameCheck::Violated(v) => {
                    println!("violated: clause {}: {}", v.clause_index + 1, v.clause);
                    let w: Vec<String> = v.assignment.iter().map(|(x, w)| format!("{x}={w}")).collect();
                    println!("witness: {}", w.join(", "));
                }
            }
            Ok(verdict(check.holds()))
        }
        Command::Chase {
            structure,
            theory,
            output,
        } => {
            let s = load_structure(&structure)?;
            let th = load_theory(&theory)?;
            let sat = saturate(&s, &th)?;
            if let Some(out) = &output {
                write(out, &sat.structure.to_json())?;
            }
            if json {
                let delta: Vec<_> = sat
                    .derivations
                    .iter()
                    .map(|d| {
                        json!({
                            "relation": d.rel,
                            "from": d.from,
                            "to": d.to,
                            "clause": d.clause_index + 1,
                            "assignment": d.assignment,
                            "round": d.round,
                        })
                    })
                    .collect();
                let mut v = json!({ "added": sat.added(), "rounds": sat.rounds, "delta": delta });
                if output.is_none() {
                    v["structure"] = serde_json::from_str(&sat.structure.to_json())?;
                }
                print_json(v);
            } else {
                println!("added: {} pairs in {} rounds", sat.added(), sat.rounds);
                for d in &sat.derivations {
                    println!("{d}");
                }
                if output.is_none() {
                    println!("{}", sat.structure.to_json());
                }
            }
            Ok(Outcome::Yes)
        }
        Command::GenPhi {
            n,
            m,
            prime,
            mid,
            output,
        } => {
            let th = if prime {
                build_phi_prime(n, m, mid)?
            } else {
                build_phi(n, m, mid)?
            };
            let text = print_theory(&th);
            match output {
                Some(out) => {
                    write(&out, &text)?;
                    if json {
                        print_json(json!({ "clauses": th.len(), "file": out }));
                    } else {
                        println!("clauses: {}", th.len());
                    }
                }
                None if json => print_json(json!({ "clauses": th.len(), "theory": text })),
                None => print!("{text}"),
            }
            Ok(Outcome::Yes)
        }
        Command::GenGrid {
            k,
            topology,
            decoding,
            output,
        } => {
            let g = grid_model(&GridModelSpec {
                k,
                topology,
                decoding,
            })?;
            let summary = format!("worlds: {}, edges: {}", g.world_count(), g.edge_count());
            match output {
                Some(out) => {
                    write(&out, &g.to_json())?;
                    if json {
                        print_json(json!({ "worlds": g.world_count(), "edges": g.edge_count() }));
                    } else {
                        println!("{summary}");
                    }
                }
                None => {
                    println!("{}", g.to_json());
                    eprintln!("{summary}");
                }
            }
            Ok(Outcome::Yes)
        }
        Command::VerifyFigure {
            k,
            mid,
            decoding,
            topology,
        } => {
            let report = verify_figure(k, mid, decoding, topology)?;
            if json {
                print_json(serde_json::to_value(&report)?);
            } else {
                print!("{report}");
            }
            Ok(verdict(report.all_models()))
        }
        Command::Reduce {
            domino,
            target,
            mid,
            output,
        } => {
            let d = load_domino(&domino)?;
            let red = reduce(&d, target, mid)?;
            let theory = print_theory(&red.theory);
            let formula = format!("{}\n", print_formula(&red.formula));
            let anchor = red.anchor.as_ref().map(|a| format!("{}\n", print_formula(a)));
            match output {
                Some(prefix) => {
                    let with = |ext: &str| {
                        let mut p = prefix.clone().into_os_string();
                        p.push(ext);
                        PathBuf::from(p)
                    };
                    write(&with(".theory"), &theory)?;
                    write(&with(".formula"), &formula)?;
                    if let Some(a) = &anchor {
                        write(&with(".anchor"), a)?;
                    }
                    let msg = format!(
                        "clauses: {}, formula length: {}",
                        red.theory.len(),
                        red.formula.len()
                    );
                    if json {
                        print_json(json!({ "clauses": red.theory.len(), "length": red.formula.len() }));
                    } else {
                        println!("{msg}");
                    }
                }
                None if json => print_json(json!({
                    "theory": theory,
                    "formula": formula.trim_end(),
                    "anchor": anchor.as_deref().map(str::trim_end),
                })),
                None => {
                    print!("{theory}");
                    print!("# formula\n{formula}");
                    if let Some(a) = anchor {
                        print!("# anchor\n{a}");
                    }
                }
            }
            Ok(Outcome::Yes)
        }
        Command::Solve(args) => solve(args, json),
        Command::Prune {
            structure,
            root,
            output,
        } => {
            let s = load_structure(&structure)?;
            let p = prune_no_predecessor(&s, &root)?;
            let removed = s.world_count() - p.world_count();
            match output {
                Some(out) => {
                    write(&out, &p.to_json())?;
                    if json {
                        print_json(json!({ "removed": removed, "worlds": p.world_count() }));
                    } else {
                        println!("removed: {removed}, worlds: {}", p.world_count());
                    }
                }
                None => {
                    println!("{}", p.to_json());
                    eprintln!("removed: {removed}, worlds: {}", p.world_count());
                }
            }
            Ok(Outcome::Yes)
        }
        Command::TileTorus { domino, e } => {
            let d = load_domino(&domino)?;
            let tiling = tile_torus(&d, e);
            match &tiling {
                Some(t) if json => {
                    let rows: Vec<Vec<&str>> = (0..e)
                        .rev()
                        .map(|y| (0..e).map(|x| d.tiles[t.tile(x, y)].as_str()).collect())
                        .collect();
                    print_json(json!({ "tiles": true, "rows": rows }));
                }
                Some(t) => print!("{}", t.render(&d)),
                None if json => print_json(json!({ "tiles": false })),
                None => println!("none"),
            }
            Ok(verdict(tiling.is_some()))
        }
        Command::Dot { structure } => {
            print!("{}", load_structure(&structure)?.to_dot());
            Ok(Outcome::Yes)
        }
    }
}

fn solve(args: SolveArgs, json: bool) -> Result<Outcome> {
    let mut cfg = match &args.config {
        Some(path) => serde_json::from_str::<SolverConfig>(&read(path)?)
            .with_context(|| format!("in {}", path.display()))?,
        None => SolverConfig::default(),
    };
    if let Some(v) = args.mode {
        cfg.mode = v;
    }
    if let Some(v) = args.max_worlds {
        cfg.max_worlds = v;
    }
    if let Some(v) = args.timeout {
        cfg.budget = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.engine {
        cfg.engine = v;
    }
    let f = load_formula(&args.formula)?;
    let th = load_theory(&args.theory)?;
    let anchor = args.anchor.as_deref().map(load_formula).transpose()?;
    let out = match &anchor {
        Some(a) => find_anchored_model(&f, a, &th, &cfg)?,
        None => find_model(&f, &th, &cfg)?,
    };
    let mut certified = None;
    if let Some(model) = &out.model {
        let witness = out.witness.as_deref().expect("models come with a witness");
        let ok = match &anchor {
            Some(a) => certify_anchored(model, witness, &f, a, &th, cfg.mode),
            None => certify(model, Some(witness), &f, &th, cfg.mode),
        };
        if !ok {
            bail!("internal error: solver returned a model that fails certification");
        }
        certified = Some(ok);
        if let Some(path) = &args.output {
            write(path, &model.to_json())?;
        }
    }
    if json {
        let mut v = serde_json::to_value(out.verdict())?;
        v["witness"] = json!(out.witness);
        v["certified"] = json!(certified);
        if args.output.is_none() {
            if let Some(model) = &out.model {
                v["model"] = serde_json::from_str(&model.to_json())?;
            }
        }
        print_json(v);
    } else {
        let size = out.size.map_or("-".to_string(), |s| s.to_string());
        println!(
            "status: {}, worlds_explored: {}, size: {size}",
            out.status, out.worlds_explored
        );
        if let (Some(model), Some(w)) = (&out.model, &out.witness) {
            println!("witness: {w}");
            if args.output.is_none() {
                println!("{}", model.to_json());
            }
        }
    }
    Ok(match out.status {
        Status::Sat => Outcome::Yes,
        Status::UnsatBounded => Outcome::No,
        Status::Timeout => Outcome::Failed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
