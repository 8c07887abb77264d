use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use formation_core::build::{build_graph, BuildParams};
use formation_core::costmodel::{build_cost_vectors, CostModelSpec};
use formation_core::generate::{generate, GenParams};
use formation_core::io::{read_graph, write_graph};
use formation_core::oracle::{brute_force_plan, OracleError, DEFAULT_ASSIGNMENT_CAP};
use formation_core::planner::{plan, reconstruct, PlanError, PlanOptions, PlanResult, DEFAULT_MAX_STATES};
use formation_core::render::render_svg;
use formation_core::roadmap::load_environment;
use formation_core::{Cost, Point, Roadmap, VertexId};

#[derive(Parser)]
#[command(name = "formation", version, about = "Split/merge formation planning on roadmap graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a costed roadmap graph from a polygonal map.
    Build(BuildArgs),
    /// Plan from a start vertex, to one goal or to every vertex.
    Plan(PlanArgs),
    /// Compare the planner with the exhaustive oracle.
    Verify(VerifyArgs),
    /// Draw a graph, optionally with its map and a plan, as SVG.
    Render(RenderArgs),
    /// Generate a random test graph.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    /// Base and slope proportional to edge length.
    Linear,
    /// Cost grows with formation width over clearance.
    Clearance,
    /// Use vectors already present (none after a fresh build).
    Explicit,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    map: PathBuf,
    /// Boundary sampling step in map units.
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    /// Minimum clearance of kept roadmap edges.
    #[arg(long, default_value_t = 0.0)]
    clearance: f64,
    /// Start position as "x,y".
    #[arg(long, value_parser = parse_point)]
    start: Option<Point>,
    /// Goal position as "x,y".
    #[arg(long, value_parser = parse_point)]
    goal: Option<Point>,
    #[arg(long, value_enum, default_value_t = ModelKind::Clearance)]
    cost_model: ModelKind,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Robot width for the clearance model.
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// Linear model: cost per unit length for the first robot.
    #[arg(long, default_value_t = 1.0)]
    base: f64,
    /// Linear model: extra cost per unit length per robot.
    #[arg(long, default_value_t = 0.2)]
    slope: f64,
    #[arg(long, default_value_t = 0)]
    split_penalty: Cost,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    robots: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    robots: u64,
    #[arg(long)]
    start: VertexId,
    #[arg(long)]
    goal: Option<VertexId>,
    /// Added to every cost entry for fewer than all robots.
    #[arg(long, default_value_t = 0)]
    split_penalty: Cost,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// With a goal, keep searching after the goal is reached by the whole formation.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    robots: u64,
    #[arg(long)]
    start: VertexId,
    #[arg(long)]
    goal: VertexId,
    /// Longest path the oracle enumerates, in edges (default: no limit).
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    vertices: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    robots: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command stopped; each maps to an exit code.
enum Failure {
    Mismatch,
    Input(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch => 1,
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn input(stage: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{stage}: {e}"))
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected \"x,y\", got {s:?}"))?;
    let coord = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Point::new(coord(x)?, coord(y)?))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| input("read", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Roadmap, Failure> {
    read_graph(&read(path)?).map_err(|e| input("graph", e))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input("write", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn plan_failure(e: PlanError) -> Failure {
    match e {
        PlanError::StateLimit { .. } => Failure::Resource(format!("plan: {e}")),
        e => input("plan", e),
    }
}

fn cmd_build(args: BuildArgs) -> Outcome {
    let map = load_environment::<f64>(&read(&args.map)?).map_err(|e| input("load", e))?;
    let params = BuildParams {
        sampling_step: args.step,
        min_clearance: args.clearance,
        terminals: args.start.into_iter().chain(args.goal).collect(),
    };
    let built = build_graph(&map, &params).map_err(|e| input("build", e))?;
    let model = match args.cost_model {
        ModelKind::Clearance => CostModelSpec::clearance(args.alpha, args.width),
        ModelKind::Explicit => CostModelSpec::explicit(),
        ModelKind::Linear => CostModelSpec::linear_per_length(&built.graph, args.base, args.slope),
    }
    .with_split_penalty(args.split_penalty);
    let graph = build_cost_vectors(&built.graph, &model, args.robots as usize).map_err(|e| input("costs", e))?;
    log::info!(
        "roadmap: {} vertices, {} edges, terminals {:?}",
        graph.vertex_count(),
        graph.edge_count(),
        built.terminals
    );
    emit(args.out.as_deref(), &write_graph(&graph))
}

fn cmd_plan(args: PlanArgs) -> Outcome {
    let robots = args.robots as usize;
    let mut graph = load_graph(&args.graph)?;
    if args.split_penalty > 0 {
        let model = CostModelSpec::explicit().with_split_penalty(args.split_penalty);
        graph = build_cost_vectors(&graph, &model, robots).map_err(|e| input("costs", e))?;
    }
    let options = PlanOptions {
        max_states: args.max_states,
        stop_at: if args.full { None } else { args.goal },
        ..PlanOptions::default()
    };
    let result = plan(&graph, robots, args.start, &options).map_err(plan_failure)?;
    log::info!("{:?}", result.stats());
    let text = match args.goal {
        Some(goal) => {
            let plan = reconstruct(&result, goal, robots).map_err(|e| input("plan", e))?;
            serde_json::to_string_pretty(&plan).expect("plan serializes")
        }
        None => {
            let table: Vec<_> =
                result.iter().map(|(node, r, s)| json!({ "node": node, "robots": r, "cost": s.cost() })).collect();
            serde_json::to_string_pretty(&json!({ "start": args.start, "robots": robots, "table": table }))
                .expect("table serializes")
        }
    };
    emit(args.out.as_deref(), &(text + "\n"))
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let robots = args.robots as usize;
    let graph = load_graph(&args.graph)?;
    let options = PlanOptions { max_states: args.max_states, stop_at: Some(args.goal), ..PlanOptions::default() };
    let planned = plan(&graph, robots, args.start, &options).map_err(plan_failure)?;
    let planner_cost = planned.cost(args.goal, robots);
    let max_edges = args.max_edges.unwrap_or(graph.vertex_count());
    let oracle = brute_force_plan(&graph, robots, args.start, args.goal, max_edges, DEFAULT_ASSIGNMENT_CAP)
        .map_err(|e| match e {
            OracleError::TooLarge { .. } => Failure::Resource(format!("oracle: {e}")),
            e => input("oracle", e),
        })?;
    let oracle_cost = oracle.map(|s| s.formation_cost);
    let show = |c: Option<Cost>| c.map_or_else(|| "unreachable".to_string(), |c| c.to_string());
    println!("planner: {}", show(planner_cost));
    println!("oracle:  {}", show(oracle_cost));
    if planner_cost == oracle_cost {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Mismatch)
    }
}

fn cmd_render(args: RenderArgs) -> Outcome {
    let graph = load_graph(&args.graph)?;
    let map = match &args.map {
        Some(path) => Some(load_environment::<f64>(&read(path)?).map_err(|e| input("map", e))?),
        None => None,
    };
    let plan: Option<PlanResult> = match &args.plan {
        Some(path) => Some(serde_json::from_slice(&read(path)?).map_err(|e| input("plan file", e))?),
        None => None,
    };
    let svg = render_svg(&graph, map.as_ref(), plan.as_ref()).map_err(|e| input("render", e))?;
    emit(args.out.as_deref(), &svg)
}

fn cmd_gen(args: GenArgs) -> Outcome {
    let graph = generate(args.seed, &GenParams::new(args.vertices, args.robots as usize));
    emit(args.out.as_deref(), &(write_graph(&graph) + "\n"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Render(a) => cmd_render(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) | Failure::Resource(m) => eprintln!("error: {m}"),
                Failure::Mismatch => {}
            }
            ExitCode::from(f.code())
        }
    }
}
