//! Scene file format, result documents, segment-soup trace export, and the
//! replay validator. Formats are documented in FORMATS.md at the repo root.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planner::{Config, PlanOutcome, PlanResult, SearchStats};
use crate::ring::RingRobot;
use crate::robot::{Robot, TBox};
use crate::rod::RodRobot;
use crate::scene::{build_features, clearance, Polyhedron, Scene, SceneError, WorldBox};
use crate::vec3::{vec3, Vec3};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse { line, msg: msg.into() })
}

/// Parse the plain-text scene format:
/// a `scene v1` header, one `world` line, then `poly`/`v`/`t`/`end` blocks.
pub fn parse_scene(text: &str) -> Result<Scene, IoError> {
    let mut world: Option<WorldBox> = None;
    let mut polys: Vec<Polyhedron> = Vec::new();
    let mut cur: Option<(Vec<Vec3>, Vec<[u32; 3]>)> = None;
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut it = s.split_whitespace();
        let tag = it.next().unwrap();
        match tag {
            "scene" => {
                if it.next() != Some("v1") {
                    return perr(line, "unsupported scene version (expected `scene v1`)");
                }
                saw_header = true;
            }
            "name" => {}
            "world" => {
                let vals = parse_floats(&mut it, 6, line)?;
                world = Some(WorldBox {
                    min: vec3(vals[0], vals[1], vals[2]),
                    max: vec3(vals[3], vals[4], vals[5]),
                });
            }
            "poly" => {
                if cur.is_some() {
                    return perr(line, "nested `poly` (missing `end`?)");
                }
                cur = Some((Vec::new(), Vec::new()));
            }
            "v" => {
                let Some((vs, _)) = cur.as_mut() else {
                    return perr(line, "`v` outside a poly block");
                };
                let vals = parse_floats(&mut it, 3, line)?;
                vs.push(vec3(vals[0], vals[1], vals[2]));
            }
            "t" => {
                let Some((_, ts)) = cur.as_mut() else {
                    return perr(line, "`t` outside a poly block");
                };
                let mut idx = [0u32; 3];
                for slot in &mut idx {
                    let Some(tok) = it.next() else {
                        return perr(line, "triangle needs three vertex indices");
                    };
                    *slot = tok
                        .parse::<u32>()
                        .map_err(|e| IoError::Parse { line, msg: format!("bad index `{tok}`: {e}") })?;
                }
                ts.push(idx);
            }
            "end" => {
                let Some((vs, ts)) = cur.take() else {
                    return perr(line, "`end` without `poly`");
                };
                let id = polys.len();
                let p = Polyhedron::new(id, vs, ts).map_err(|e| IoError::Parse {
                    line,
                    msg: format!("invalid polyhedron {id}: {e}"),
                })?;
                polys.push(p);
            }
            other => return perr(line, format!("unknown directive `{other}`")),
        }
        if it.next().is_some() && tag != "name" {
            return perr(line, "trailing tokens");
        }
    }
    if !saw_header {
        return perr(1, "missing `scene v1` header");
    }
    if cur.is_some() {
        return perr(text.lines().count(), "unterminated poly block");
    }
    let Some(world) = world else {
        return perr(1, "missing `world` line");
    };
    Ok(build_features(polys, world)?)
}

fn parse_floats<'b>(
    it: &mut impl Iterator<Item = &'b str>,
    n: usize,
    line: usize,
) -> Result<Vec<f64>, IoError> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let Some(tok) = it.next() else {
            return perr(line, format!("expected {n} numbers"));
        };
        let v: f64 = tok
            .parse()
            .map_err(|e| IoError::Parse { line, msg: format!("bad number `{tok}`: {e}") })?;
        if !v.is_finite() {
            return perr(line, format!("non-finite number `{tok}`"));
        }
        out.push(v);
    }
    Ok(out)
}

/// Canonical writer; `write_scene(parse_scene(x))` is a fixed point.
pub fn write_scene(scene: &Scene) -> String {
    let mut out = String::new();
    out.push_str("scene v1\n");
    out.push_str(&format!(
        "world {} {} {} {} {} {}\n",
        scene.world.min.x, scene.world.min.y, scene.world.min.z,
        scene.world.max.x, scene.world.max.y, scene.world.max.z
    ));
    for p in &scene.polyhedra {
        out.push_str("poly\n");
        for v in &p.vertices {
            out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
        }
        for t in &p.triangles {
            out.push_str(&format!("t {} {} {}\n", t[0], t[1], t[2]));
        }
        out.push_str("end\n");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RobotKind {
    Rod,
    Ring,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobotSpec {
    pub kind: RobotKind,
    pub r0: f64,
    #[serde(default)]
    pub thickness: f64,
}

impl RobotSpec {
    pub fn build(&self) -> Result<Box<dyn Robot>, IoError> {
        if !(self.r0 > 0.0) {
            return Err(IoError::Invalid("robot size r0 must be positive".into()));
        }
        if self.thickness < 0.0 {
            return Err(IoError::Invalid("thickness must be nonnegative".into()));
        }
        Ok(match self.kind {
            RobotKind::Rod => Box::new(RodRobot { length: self.r0, thickness: self.thickness }),
            RobotKind::Ring => Box::new(RingRobot { radius: self.r0, thickness: self.thickness }),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub boxes_created: usize,
    pub free: usize,
    pub stuck: usize,
    pub mixed: usize,
    pub splits: usize,
    pub elapsed_ms: u128,
}

impl From<SearchStats> for StatsDoc {
    fn from(s: SearchStats) -> StatsDoc {
        StatsDoc {
            boxes_created: s.boxes_created,
            free: s.free,
            stuck: s.stuck,
            mixed: s.mixed,
            splits: s.splits,
            elapsed_ms: s.elapsed_ms,
        }
    }
}

/// The structured result document written by `plan`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultDoc {
    pub format: String,
    pub outcome: String,
    pub robot: RobotSpec,
    pub eps: f64,
    pub strategy: String,
    pub start: [f64; 6],
    pub goal: [f64; 6],
    /// Each waypoint is x,y,z plus the unit direction dx,dy,dz.
    pub waypoints: Vec<[f64; 6]>,
    /// Translational boxes along the path as (cx, cy, cz, half_width);
    /// carried so traces can be exported from the document alone.
    #[serde(default)]
    pub path_boxes: Vec<[f64; 4]>,
    pub stats: StatsDoc,
}

pub fn config_to_six(c: &Config) -> [f64; 6] {
    let d = c.direction_unit();
    [c.position.x, c.position.y, c.position.z, d.x, d.y, d.z]
}

pub fn config_from_six(v: &[f64; 6]) -> Result<Config, IoError> {
    Config::new(vec3(v[0], v[1], v[2]), vec3(v[3], v[4], v[5]))
        .map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn outcome_name(o: &PlanOutcome) -> &'static str {
    match o {
        PlanOutcome::Path(_) => "path",
        PlanOutcome::NoPath => "no-path",
        PlanOutcome::BudgetExceeded => "budget-exceeded",
    }
}

pub fn make_result_doc(
    res: &PlanResult,
    robot: &RobotSpec,
    eps: f64,
    strategy: &str,
    start: &Config,
    goal: &Config,
) -> ResultDoc {
    let waypoints = match &res.outcome {
        PlanOutcome::Path(p) => p.iter().map(config_to_six).collect(),
        _ => Vec::new(),
    };
    ResultDoc {
        format: "rodring-result-v1".into(),
        outcome: outcome_name(&res.outcome).into(),
        robot: robot.clone(),
        eps,
        strategy: strategy.into(),
        start: config_to_six(start),
        goal: config_to_six(goal),
        waypoints,
        path_boxes: res
            .path_boxes
            .iter()
            .map(|b| [b.center.x, b.center.y, b.center.z, b.half_width])
            .collect(),
        stats: res.stats.into(),
    }
}

/// Exit code contract: 0 path, 1 no-path, 2 budget exceeded.
pub fn outcome_exit_code(o: &PlanOutcome) -> i32 {
    match o {
        PlanOutcome::Path(_) => 0,
        PlanOutcome::NoPath => 1,
        PlanOutcome::BudgetExceeded => 2,
    }
}

/// Segment-soup trace: the path polyline, a footprint polyline per waypoint
/// (rings as 64-gons, display only), and 12 wireframe edges per on-path
/// translational box. Lines are `x1 y1 z1 x2 y2 z2`; `#` lines are comments.
/// Errors unless the document carries a traced path.
pub fn write_trace(doc: &ResultDoc) -> Result<String, IoError> {
    if doc.outcome != "path" || doc.waypoints.is_empty() {
        return Err(IoError::Invalid(format!(
            "tracing not available for a `{}` result",
            doc.outcome
        )));
    }
    let path_boxes: Vec<TBox> = doc
        .path_boxes
        .iter()
        .map(|b| TBox { center: vec3(b[0], b[1], b[2]), half_width: b[3] })
        .collect();
    let robot = doc.robot.build()?;
    let mut out = String::new();
    let seg = |out: &mut String, a: Vec3, b: Vec3| {
        out.push_str(&format!("{} {} {} {} {} {}\n", a.x, a.y, a.z, b.x, b.y, b.z));
    };
    out.push_str("# rodring trace v1\n");
    out.push_str("# path\n");
    let pts: Vec<(Vec3, Vec3)> = doc
        .waypoints
        .iter()
        .map(|w| (vec3(w[0], w[1], w[2]), vec3(w[3], w[4], w[5])))
        .collect();
    for w in pts.windows(2) {
        seg(&mut out, w[0].0, w[1].0);
    }
    out.push_str("# footprints\n");
    for (pos, dir) in &pts {
        let poly = robot.footprint_polyline(*pos, *dir);
        for w in poly.windows(2) {
            seg(&mut out, w[0], w[1]);
        }
    }
    out.push_str("# boxes\n");
    for b in &path_boxes {
        let lo = b.min();
        let hi = b.max();
        let c = |x: u8, y: u8, z: u8| {
            vec3(
                if x == 0 { lo.x } else { hi.x },
                if y == 0 { lo.y } else { hi.y },
                if z == 0 { lo.z } else { hi.z },
            )
        };
        // 12 cube edges.
        for (a, b2) in [
            ((0, 0, 0), (1, 0, 0)),
            ((0, 1, 0), (1, 1, 0)),
            ((0, 0, 1), (1, 0, 1)),
            ((0, 1, 1), (1, 1, 1)),
            ((0, 0, 0), (0, 1, 0)),
            ((1, 0, 0), (1, 1, 0)),
            ((0, 0, 1), (0, 1, 1)),
            ((1, 0, 1), (1, 1, 1)),
            ((0, 0, 0), (0, 0, 1)),
            ((1, 0, 0), (1, 0, 1)),
            ((0, 1, 0), (0, 1, 1)),
            ((1, 1, 0), (1, 1, 1)),
        ] {
            seg(&mut out, c(a.0, a.1, a.2), c(b2.0, b2.1, b2.2));
        }
    }
    Ok(out)
}

/// Replay a result document against its scene: interpolate every leg with
/// translational lerp and spherical slerp at the given step and verify
/// strictly positive clearance. Returns the minimum clearance seen.
pub fn replay_min_clearance(
    scene: &Scene,
    doc: &ResultDoc,
    step: f64,
) -> Result<f64, IoError> {
    if doc.outcome != "path" {
        return Err(IoError::Invalid(format!(
            "cannot replay a `{}` result",
            doc.outcome
        )));
    }
    if !(step > 0.0) {
        return Err(IoError::Invalid("step must be positive".into()));
    }
    let robot = doc.robot.build()?;
    let pts: Vec<(Vec3, Vec3)> = doc
        .waypoints
        .iter()
        .map(|w| (vec3(w[0], w[1], w[2]), vec3(w[3], w[4], w[5]).normalized()))
        .collect();
    if pts.is_empty() {
        return Err(IoError::Invalid("path result has no waypoints".into()));
    }
    let mut min_clear = f64::INFINITY;
    for w in pts.windows(2) {
        let (p0, d0) = w[0];
        let (p1, d1) = w[1];
        let ang = d0.dot(d1).clamp(-1.0, 1.0).acos();
        let span = p0.dist(p1).max(ang * robot.rotational_scale());
        let n = (span / step).ceil().max(1.0) as usize;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let pos = p0.lerp(p1, t);
            let dir = d0.slerp(d1, t);
            let c = clearance(robot.as_ref(), pos, dir, scene);
            min_clear = min_clear.min(c);
        }
    }
    Ok(min_clear)
}

pub fn load_scene(path: &std::path::Path) -> Result<Scene, IoError> {
    parse_scene(&std::fs::read_to_string(path)?)
}
