//! Command-line driver: plan / generate / replay / bench.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rodring::io::{
    self, config_from_six, load_scene, make_result_doc, outcome_exit_code, IoError, ResultDoc,
    RobotKind, RobotSpec,
};
use rodring::planner::{find_path, PlannerConfig, Strategy};
use rodring::scene::{gen_random_tetrahedra, WorldBox};
use rodring::vec3::Vec3;

#[derive(Parser)]
#[command(name = "rodring", version, about = "Subdivision path planner for rod and ring robots")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Plan a path in a scene and write the result document.
    Plan(PlanArgs),
    /// Generate a random-tetrahedra scene file.
    Generate(GenArgs),
    /// Validate a path result by replaying it against the scene.
    Replay(ReplayArgs),
    /// Re-export the segment-soup trace from a completed plan result.
    ExportTrace(ExportTraceArgs),
    /// Plan and print a one-line stats summary (no files written).
    Bench(PlanArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Scene file.
    #[arg(long)]
    scene: PathBuf,
    /// Robot kind: rod | ring.
    #[arg(long)]
    robot: String,
    /// Rod length (world units).
    #[arg(long)]
    length: Option<f64>,
    /// Ring radius (world units).
    #[arg(long)]
    radius: Option<f64>,
    /// Thickness added by Minkowski sum with a ball.
    #[arg(long, default_value_t = 0.0)]
    thickness: f64,
    /// Start pose: x,y,z,dx,dy,dz.
    #[arg(long)]
    start: String,
    /// Goal pose: x,y,z,dx,dy,dz.
    #[arg(long)]
    goal: String,
    /// Resolution epsilon.
    #[arg(long)]
    eps: f64,
    /// Queue strategy: bfs | greedy | dist+size | voronoi | random.
    #[arg(long, default_value = "greedy")]
    strategy: String,
    /// Seed for the random strategy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Box budget before giving up with a distinct exit code.
    #[arg(long, default_value_t = 5_000_000)]
    max_boxes: usize,
    /// Result document path (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Segment-soup trace output path.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of tetrahedra.
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// World box width (cube from the origin).
    #[arg(long, default_value_t = 512.0)]
    world_size: f64,
    #[arg(long, default_value_t = 16.0)]
    min_size: f64,
    #[arg(long, default_value_t = 64.0)]
    max_size: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportTraceArgs {
    /// Result document from `plan`.
    #[arg(long)]
    result: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Result document from `plan`.
    #[arg(long)]
    result: PathBuf,
    /// Interpolation step; defaults to eps/4 from the result document.
    #[arg(long)]
    step: Option<f64>,
}

fn parse_pose(s: &str) -> Result<rodring::planner::Config, IoError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(IoError::Invalid(format!("pose `{s}` must be x,y,z,dx,dy,dz")));
    }
    let mut v = [0.0f64; 6];
    for (slot, tok) in v.iter_mut().zip(&parts) {
        *slot = tok
            .parse()
            .map_err(|e| IoError::Invalid(format!("bad pose number `{tok}`: {e}")))?;
    }
    config_from_six(&v)
}

fn parse_strategy(name: &str, seed: u64) -> Result<Strategy, IoError> {
    Ok(match name {
        "bfs" => Strategy::Bfs,
        "greedy" => Strategy::Greedy,
        "dist+size" => Strategy::DistPlusSize,
        "voronoi" => Strategy::Voronoi,
        "random" => Strategy::Random(seed),
        other => return Err(IoError::Invalid(format!("unknown strategy `{other}`"))),
    })
}

fn robot_spec(args: &PlanArgs) -> Result<RobotSpec, IoError> {
    let (kind, r0) = match args.robot.as_str() {
        "rod" => (
            RobotKind::Rod,
            args.length
                .ok_or_else(|| IoError::Invalid("--length is required for a rod".into()))?,
        ),
        "ring" => (
            RobotKind::Ring,
            args.radius
                .ok_or_else(|| IoError::Invalid("--radius is required for a ring".into()))?,
        ),
        other => return Err(IoError::Invalid(format!("unknown robot `{other}`"))),
    };
    Ok(RobotSpec { kind, r0, thickness: args.thickness })
}

fn run_plan(args: &PlanArgs, bench_only: bool) -> Result<i32, IoError> {
    let scene = load_scene(&args.scene)?;
    let spec = robot_spec(args)?;
    let robot = spec.build()?;
    let alpha = parse_pose(&args.start)?;
    let beta = parse_pose(&args.goal)?;
    let strategy = parse_strategy(&args.strategy, args.seed)?;
    let cfg = PlannerConfig { eps: args.eps, strategy, max_boxes: args.max_boxes };
    let res = find_path(&scene, robot.as_ref(), &alpha, &beta, cfg)
        .map_err(|e| IoError::Invalid(e.to_string()))?;
    let doc = make_result_doc(&res, &spec, args.eps, &args.strategy, &alpha, &beta);
    let s = &doc.stats;
    eprintln!(
        "{}: boxes={} free={} stuck={} mixed={} splits={} elapsed={}ms",
        doc.outcome, s.boxes_created, s.free, s.stuck, s.mixed, s.splits, s.elapsed_ms
    );
    if !bench_only {
        if let Some(out) = &args.out {
            std::fs::write(out, serde_json::to_string_pretty(&doc)?)?;
        } else {
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        if let Some(trace_path) = &args.trace {
            let trace = io::write_trace(&doc)?;
            std::fs::write(trace_path, trace)?;
        }
    }
    Ok(outcome_exit_code(&res.outcome))
}

fn run_generate(args: &GenArgs) -> Result<i32, IoError> {
    if args.min_size <= 0.0 || args.max_size < args.min_size {
        return Err(IoError::Invalid("size range must satisfy 0 < min <= max".into()));
    }
    let world = WorldBox::cube(Vec3::ZERO, args.world_size);
    let scene = gen_random_tetrahedra(args.count, args.seed, world, (args.min_size, args.max_size));
    std::fs::write(&args.out, io::write_scene(&scene))?;
    eprintln!("wrote {} polyhedra to {}", scene.polyhedra.len(), args.out.display());
    Ok(0)
}

fn run_export_trace(args: &ExportTraceArgs) -> Result<i32, IoError> {
    let doc: ResultDoc = serde_json::from_str(&std::fs::read_to_string(&args.result)?)?;
    std::fs::write(&args.out, io::write_trace(&doc)?)?;
    Ok(0)
}

fn run_replay(args: &ReplayArgs) -> Result<i32, IoError> {
    let scene = load_scene(&args.scene)?;
    let doc: ResultDoc = serde_json::from_str(&std::fs::read_to_string(&args.result)?)?;
    let step = args.step.unwrap_or(doc.eps / 4.0);
    let min_clear = io::replay_min_clearance(&scene, &doc, step)?;
    eprintln!("replay min clearance = {min_clear}");
    Ok(if min_clear > 0.0 { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's own exit would collide with the budget code; route
            // usage errors to 3 and keep 0/1/2 for planner outcomes.
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let result = match &cli.cmd {
        Cmd::Plan(a) => run_plan(a, false),
        Cmd::Bench(a) => run_plan(a, true),
        Cmd::Generate(a) => run_generate(a),
        Cmd::Replay(a) => run_replay(a),
        Cmd::ExportTrace(a) => run_export_trace(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
    }
}
