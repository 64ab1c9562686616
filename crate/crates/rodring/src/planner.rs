//! The subdivision search engine: a box tree over R^3 x S^2, soft
//! classification with inherited feature sets, a FREE-leaf connectivity
//! graph maintained incrementally with union-find, pluggable queue
//! strategies, and PATH / NO-PATH extraction.

use std::collections::BinaryHeap;
use std::time::Instant;

use thiserror::Error;

use crate::geom::sep_point_feature;
use crate::robot::{Robot, TBox};
use crate::s2::{
    lift_to_sphere, project_to_cube, rot_overlap_dim, split_rotbox, CubePoint, DirectionError,
    FaceBox, RotBox, ALL_FACES,
};
use crate::scene::{point_inside_any, Scene};
use crate::union_find::UnionFind;
use crate::vec3::{vec3, Vec3};

/// A pose: position plus direction on the square model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub position: Vec3,
    pub direction: CubePoint,
}

impl Config {
    pub fn new(position: Vec3, direction: Vec3) -> Result<Config, DirectionError> {
        Ok(Config { position, direction: project_to_cube(direction)? })
    }

    pub fn direction_unit(&self) -> Vec3 {
        lift_to_sphere(&self.direction)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strategy {
    Bfs,
    Greedy,
    DistPlusSize,
    Voronoi,
    Random(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct PlannerConfig {
    pub eps: f64,
    pub strategy: Strategy,
    pub max_boxes: usize,
}

impl PlannerConfig {
    pub fn new(eps: f64) -> PlannerConfig {
        PlannerConfig { eps, strategy: Strategy::Greedy, max_boxes: 5_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxStatus {
    Free,
    Stuck,
    Mixed,
}

/// A subdivision box: translational cube times rotational box, its soft
/// classification, the inherited feature set, and leaf adjacency links.
#[derive(Clone, Debug)]
pub struct CBox {
    pub t: TBox,
    pub rot: RotBox,
    pub status: BoxStatus,
    pub features: Vec<u32>,
    pub voronoi: Vec<u32>,
    pub parent: Option<u32>,
    pub children: Vec<u32>,
    pub neighbors: Vec<u32>,
}

impl CBox {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlanOutcome {
    Path(Vec<Config>),
    NoPath,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SearchStats {
    pub boxes_created: usize,
    pub free: usize,
    pub stuck: usize,
    pub mixed: usize,
    pub splits: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct PlanResult {
    pub outcome: PlanOutcome,
    pub stats: SearchStats,
    /// Translational boxes of the FREE-leaf chain carrying the path.
    pub path_boxes: Vec<TBox>,
}

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("start configuration lies outside the world box")]
    StartOutsideWorld,
    #[error("goal configuration lies outside the world box")]
    GoalOutsideWorld,
    #[error("resolution must be positive")]
    BadResolution,
}

/// Dimension of the intersection of two closed translational cubes:
/// 3 (volume), 2 (face), 1 (edge), 0 (corner), None (disjoint).
pub fn t_overlap_dim(a: &TBox, b: &TBox) -> Option<u8> {
    let eps = 1e-9 * (1.0 + a.half_width + b.half_width);
    let (amin, amax) = (a.min(), a.max());
    let (bmin, bmax) = (b.min(), b.max());
    let mut dim = 0;
    for (lo, hi) in [
        (amin.x.max(bmin.x), amax.x.min(bmax.x)),
        (amin.y.max(bmin.y), amax.y.min(bmax.y)),
        (amin.z.max(bmin.z), amax.z.min(bmax.z)),
    ] {
        if hi - lo > eps {
            dim += 1;
        } else if hi - lo < -eps {
            return None;
        }
    }
    Some(dim)
}

/// Leaves are adjacent when the closure intersection has total dimension 4:
/// translational face contact with rotational area overlap, or translational
/// volume overlap with rotational edge contact.
pub fn boxes_adjacent(a: &CBox, b: &CBox) -> bool {
    let Some(td) = t_overlap_dim(&a.t, &b.t) else {
        return false;
    };
    let Some(rd) = rot_overlap_dim(&a.rot, &b.rot) else {
        return false;
    };
    td + rd == 4
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Lexicographic priority: class (fringe / heuristic flags) before the
/// scalar key, with the insertion sequence as the deterministic tie-break.
#[derive(Clone, Copy, Debug, PartialEq)]
struct PriorityKey {
    class: u8,
    value: f64,
}

struct QueueEntry {
    key: PriorityKey,
    seq: u64,
    id: u32,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl Eq for QueueEntry {}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; invert for lowest-key-first.
        other
            .key
            .class
            .cmp(&self.key.class)
            .then_with(|| other.key.value.total_cmp(&self.key.value))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

pub struct Planner<'a> {
    pub scene: &'a Scene,
    pub robot: &'a dyn Robot,
    pub cfg: PlannerConfig,
    pub boxes: Vec<CBox>,
    uf: UnionFind,
    queue: BinaryHeap<QueueEntry>,
    seq: u64,
    pub stats: SearchStats,
    goal_pos: Vec3,
    /// The FREE leaf holding the start, once loops 1-2 have produced it.
    /// Distance-driven strategies then prefer boxes on the fringe of its
    /// free component (greedy best-first); order never affects correctness.
    start_box: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum SplitKind {
    Translational,
    Rotational,
}

impl<'a> Planner<'a> {
    pub fn new(scene: &'a Scene, robot: &'a dyn Robot, cfg: PlannerConfig) -> Planner<'a> {
        let root_t = TBox { center: scene.world.center(), half_width: scene.world.width() / 2.0 };
        let mut planner = Planner {
            scene,
            robot,
            cfg,
            boxes: Vec::new(),
            uf: UnionFind::new(),
            queue: BinaryHeap::new(),
            seq: 0,
            stats: SearchStats::default(),
            goal_pos: scene.world.center(),
            start_box: None,
        };
        let all: Vec<u32> = (0..scene.features.len() as u32).collect();
        let root = CBox {
            t: root_t,
            rot: RotBox::WholeSphere,
            status: BoxStatus::Mixed,
            features: Vec::new(),
            voronoi: Vec::new(),
            parent: None,
            children: Vec::new(),
            neighbors: Vec::new(),
        };
        planner.boxes.push(root);
        planner.stats.boxes_created = 1;
        planner.classify(0, &all, &all);
        planner
    }

    /// Soft classification: filter the parent's feature set through the
    /// conservative box tester; an empty set is decided FREE/STUCK by
    /// probing a central-footprint point against all polyhedra.
    fn classify(&mut self, id: u32, parent_feats: &[u32], parent_vor: &[u32]) {
        let (t, rot) = {
            let b = &self.boxes[id as usize];
            (b.t, b.rot)
        };
        let tester = self.robot.box_tester(&t, &rot);
        let feats: Vec<u32> = parent_feats
            .iter()
            .copied()
            .filter(|&fi| tester.hits(&self.scene.features[fi as usize]))
            .collect();
        drop(tester);
        let status = if feats.is_empty() {
            let dir = match rot {
                RotBox::WholeSphere => Vec3::X,
                RotBox::Face(fb) => fb.center3().normalized(),
            };
            let probe = self.robot.footprint_probe(t.center, dir);
            if point_inside_any(self.scene, probe) {
                BoxStatus::Stuck
            } else {
                BoxStatus::Free
            }
        } else {
            BoxStatus::Mixed
        };
        match status {
            BoxStatus::Free => self.stats.free += 1,
            BoxStatus::Stuck => self.stats.stuck += 1,
            BoxStatus::Mixed => self.stats.mixed += 1,
        }
        let voronoi = if self.cfg.strategy == Strategy::Voronoi && status == BoxStatus::Mixed {
            self.prune_voronoi(&t, parent_vor)
        } else {
            Vec::new()
        };
        let b = &mut self.boxes[id as usize];
        b.status = status;
        b.features = feats;
        b.voronoi = voronoi;
    }

    /// Keep features whose separation from the box center is within
    /// d_min + 2 r_B + 2 diam: a superset of the nearest-feature set of
    /// every point in the box.
    fn prune_voronoi(&self, t: &TBox, parent_vor: &[u32]) -> Vec<u32> {
        if parent_vor.is_empty() {
            return Vec::new();
        }
        let seps: Vec<f64> = parent_vor
            .iter()
            .map(|&fi| sep_point_feature(t.center, &self.scene.features[fi as usize]))
            .collect();
        let dmin = seps.iter().copied().fold(f64::INFINITY, f64::min);
        let diam = 2.0 * self.robot.max_reach();
        let thresh = dmin + 2.0 * t.radius() + 2.0 * diam;
        parent_vor
            .iter()
            .zip(&seps)
            .filter(|(_, &s)| s <= thresh)
            .map(|(&fi, _)| fi)
            .collect()
    }

    /// A MIXED leaf may still be split while either factor is above the
    /// resolution in footprint units.
    pub fn is_candidate(&self, id: u32) -> bool {
        let b = &self.boxes[id as usize];
        b.t.radius() >= self.cfg.eps
            || b.rot.width() * self.robot.rotational_scale() >= self.cfg.eps
    }

    fn choose_split(&self, id: u32) -> SplitKind {
        let b = &self.boxes[id as usize];
        let scale = self.robot.rotational_scale();
        let t_ok = b.t.radius() >= self.cfg.eps;
        let r_ok = b.rot.width() * scale >= self.cfg.eps;
        // Improper rotational parts (whole sphere, full face) carry no cone
        // predicates; refine them rotationally first.
        if crate::rod::proper_face_box(&b.rot).is_none() && r_ok {
            return SplitKind::Rotational;
        }
        if !r_ok {
            return SplitKind::Translational;
        }
        if !t_ok {
            return SplitKind::Rotational;
        }
        if b.t.half_width >= b.rot.width() * scale {
            SplitKind::Translational
        } else {
            SplitKind::Rotational
        }
    }

    /// Split a MIXED leaf, classify the children, rewire leaf adjacency,
    /// union new FREE pairs, and enqueue new MIXED candidates.
    pub fn split(&mut self, id: u32) -> Vec<u32> {
        debug_assert!(self.boxes[id as usize].is_leaf());
        debug_assert_eq!(self.boxes[id as usize].status, BoxStatus::Mixed);
        let kind = self.choose_split(id);
        let (t, rot) = {
            let b = &self.boxes[id as usize];
            (b.t, b.rot)
        };
        let parent_feats = std::mem::take(&mut self.boxes[id as usize].features);
        let parent_vor = std::mem::take(&mut self.boxes[id as usize].voronoi);
        let mut child_geoms: Vec<(TBox, RotBox)> = Vec::new();
        match kind {
            SplitKind::Translational => {
                let h = t.half_width / 2.0;
                for dz in [-1.0, 1.0] {
                    for dy in [-1.0, 1.0] {
                        for dx in [-1.0, 1.0] {
                            let c = t.center + vec3(dx * h, dy * h, dz * h);
                            child_geoms.push((TBox { center: c, half_width: h }, rot));
                        }
                    }
                }
            }
            SplitKind::Rotational => {
                for r in split_rotbox(&rot) {
                    child_geoms.push((t, r));
                }
            }
        }
        let mut ids = Vec::with_capacity(child_geoms.len());
        for (ct, cr) in child_geoms {
            let cid = self.boxes.len() as u32;
            self.boxes.push(CBox {
                t: ct,
                rot: cr,
                status: BoxStatus::Mixed,
                features: Vec::new(),
                voronoi: Vec::new(),
                parent: Some(id),
                children: Vec::new(),
                neighbors: Vec::new(),
            });
            self.stats.boxes_created += 1;
            self.classify(cid, &parent_feats, &parent_vor);
            ids.push(cid);
        }
        self.boxes[id as usize].children = ids.clone();
        self.stats.splits += 1;

        // Leaf adjacency: children inherit from siblings and the parent's
        // neighbor list.
        let parent_neighbors = std::mem::take(&mut self.boxes[id as usize].neighbors);
        for &n in &parent_neighbors {
            self.boxes[n as usize].neighbors.retain(|&x| x != id);
        }
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                let (a, b) = (ids[i], ids[j]);
                if boxes_adjacent(&self.boxes[a as usize], &self.boxes[b as usize]) {
                    self.boxes[a as usize].neighbors.push(b);
                    self.boxes[b as usize].neighbors.push(a);
                }
            }
        }
        for &n in &parent_neighbors {
            for &c in &ids {
                if boxes_adjacent(&self.boxes[c as usize], &self.boxes[n as usize]) {
                    self.boxes[c as usize].neighbors.push(n);
                    self.boxes[n as usize].neighbors.push(c);
                }
            }
        }
        // Union-find updates and queue insertions.
        for &c in &ids {
            match self.boxes[c as usize].status {
                BoxStatus::Free => {
                    self.uf.ensure(c);
                    let nbrs = self.boxes[c as usize].neighbors.clone();
                    for n in nbrs {
                        if self.boxes[n as usize].status == BoxStatus::Free {
                            self.uf.union(c, n);
                        }
                    }
                }
                BoxStatus::Mixed => {
                    if self.is_candidate(c) {
                        self.push_candidate(c);
                    }
                }
                BoxStatus::Stuck => {}
            }
        }
        // New FREE boxes joining the start component promote their MIXED
        // neighbors onto the fringe; re-push those with fresh keys (stale
        // duplicates are skipped at pop time).
        if let Some(start) = self.start_box {
            for &c in &ids {
                if self.boxes[c as usize].status == BoxStatus::Free && self.uf.connected(c, start)
                {
                    let nbrs = self.boxes[c as usize].neighbors.clone();
                    for n in nbrs {
                        if self.boxes[n as usize].status == BoxStatus::Mixed
                            && self.boxes[n as usize].is_leaf()
                            && self.is_candidate(n)
                        {
                            self.push_candidate(n);
                        }
                    }
                }
            }
        }
        ids
    }

    fn priority_key(&mut self, id: u32) -> PriorityKey {
        let b = &self.boxes[id as usize];
        let dist = b.t.center.dist(self.goal_pos);
        let (flag, value) = match self.cfg.strategy {
            Strategy::Bfs => return PriorityKey { class: 0, value: 0.0 },
            Strategy::Random(seed) => {
                return PriorityKey {
                    class: 0,
                    value: (splitmix64(seed ^ (id as u64).wrapping_mul(0x9E3779B97F4A7C15)) >> 11)
                        as f64,
                }
            }
            Strategy::Greedy => (0u8, dist),
            Strategy::DistPlusSize => (0, dist - 0.5 * b.t.width()),
            Strategy::Voronoi => (if self.near_voronoi(id) { 0 } else { 1 }, dist),
        };
        let fringe = if self.on_start_fringe(id) { 0u8 } else { 1 };
        PriorityKey { class: fringe * 2 + flag, value }
    }

    /// Is this MIXED leaf adjacent to the start box's free component?
    fn on_start_fringe(&mut self, id: u32) -> bool {
        let Some(start) = self.start_box else {
            return false;
        };
        let nbrs = self.boxes[id as usize].neighbors.clone();
        nbrs.into_iter().any(|n| {
            self.boxes[n as usize].status == BoxStatus::Free && self.uf.connected(n, start)
        })
    }

    fn push_candidate(&mut self, id: u32) {
        let key = self.priority_key(id);
        self.seq += 1;
        self.queue.push(QueueEntry { key, seq: self.seq, id });
    }

    /// Rebuild the queue with fresh keys (used once the start box is known).
    fn rebuild_queue(&mut self) {
        self.queue.clear();
        for id in 0..self.boxes.len() as u32 {
            let b = &self.boxes[id as usize];
            if b.is_leaf() && b.status == BoxStatus::Mixed && self.is_candidate(id) {
                self.push_candidate(id);
            }
        }
    }

    /// Near-Voronoi: two retained features of distinct polyhedra whose
    /// separations from the box center lie within delta = 2 r_B of each
    /// other. Same-solid features tie trivially (coplanar triangles), so
    /// only cross-obstacle near-equidistance marks a Voronoi channel.
    fn near_voronoi(&self, id: u32) -> bool {
        let b = &self.boxes[id as usize];
        if b.voronoi.len() < 2 {
            return false;
        }
        let mut per_owner: std::collections::HashMap<u32, f64> = Default::default();
        for &fi in &b.voronoi {
            let s = sep_point_feature(b.t.center, &self.scene.features[fi as usize]);
            let e = per_owner.entry(self.scene.feature_owner[fi as usize]).or_insert(f64::INFINITY);
            *e = e.min(s);
        }
        if per_owner.len() < 2 {
            return false;
        }
        let mut seps: Vec<f64> = per_owner.into_values().collect();
        seps.sort_by(|a, b| a.total_cmp(b));
        let delta = 2.0 * b.t.radius();
        seps.windows(2).any(|w| w[1] - w[0] <= delta)
    }

    /// Leaf containing the configuration, by deterministic descent matching
    /// the split construction (half-open; ties go to the upper child).
    pub fn locate(&self, cfg: &Config) -> u32 {
        let mut id = 0u32;
        loop {
            let b = &self.boxes[id as usize];
            if b.children.is_empty() {
                return id;
            }
            let idx = match b.children.len() {
                8 => {
                    let c = b.t.center;
                    let p = cfg.position;
                    ((p.x >= c.x) as usize) + 2 * ((p.y >= c.y) as usize) + 4 * ((p.z >= c.z) as usize)
                }
                6 => ALL_FACES.iter().position(|&f| f == cfg.direction.face).unwrap(),
                4 => {
                    let RotBox::Face(fb) = b.rot else { unreachable!("4-way split is rotational") };
                    let (cu, cv) = fb.center_uv();
                    ((cfg.direction.u >= cu) as usize) + 2 * ((cfg.direction.v >= cv) as usize)
                }
                n => unreachable!("unexpected child count {n}"),
            };
            id = b.children[idx];
        }
    }

    fn over_budget(&self) -> bool {
        self.stats.boxes_created >= self.cfg.max_boxes
    }

    fn result(&self, outcome: PlanOutcome, path_boxes: Vec<TBox>, started: Instant) -> PlanResult {
        let mut stats = self.stats;
        stats.elapsed_ms = started.elapsed().as_millis();
        PlanResult { outcome, stats, path_boxes }
    }

    /// The search driver: grow the start and goal boxes to FREE, then expand
    /// queue boxes until the union-find connects them or the queue empties.
    pub fn run(&mut self, alpha: &Config, beta: &Config) -> Result<PlanResult, PlanError> {
        let started = Instant::now();
        if !(self.cfg.eps > 0.0) {
            return Err(PlanError::BadResolution);
        }
        if !self.scene.world.contains(alpha.position) {
            return Err(PlanError::StartOutsideWorld);
        }
        if !self.scene.world.contains(beta.position) {
            return Err(PlanError::GoalOutsideWorld);
        }
        self.goal_pos = beta.position;

        // Loops 1 and 2: refine the endpoint boxes until FREE.
        let mut endpoint_ids = [0u32; 2];
        for (slot, cfgpt) in [alpha, beta].iter().enumerate() {
            loop {
                let leaf = self.locate(cfgpt);
                match self.boxes[leaf as usize].status {
                    BoxStatus::Free => {
                        endpoint_ids[slot] = leaf;
                        break;
                    }
                    BoxStatus::Stuck => {
                        return Ok(self.result(PlanOutcome::NoPath, Vec::new(), started));
                    }
                    BoxStatus::Mixed => {
                        if !self.is_candidate(leaf) {
                            return Ok(self.result(PlanOutcome::NoPath, Vec::new(), started));
                        }
                        if self.over_budget() {
                            return Ok(self.result(PlanOutcome::BudgetExceeded, Vec::new(), started));
                        }
                        self.split(leaf);
                    }
                }
            }
        }
        let [a_id, b_id] = endpoint_ids;
        self.uf.ensure(a_id);
        self.uf.ensure(b_id);
        self.start_box = Some(a_id);
        self.rebuild_queue();

        // Main loop.
        while !self.uf.connected(a_id, b_id) {
            let Some(entry) = self.queue.pop() else {
                return Ok(self.result(PlanOutcome::NoPath, Vec::new(), started));
            };
            if !self.boxes[entry.id as usize].is_leaf() {
                continue;
            }
            if self.over_budget() {
                return Ok(self.result(PlanOutcome::BudgetExceeded, Vec::new(), started));
            }
            self.split(entry.id);
        }
        let (path, path_boxes) = self.extract_path(a_id, b_id, alpha, beta);
        Ok(self.result(PlanOutcome::Path(path), path_boxes, started))
    }

    /// BFS over FREE leaves from the start box to the goal box, then emit
    /// alpha, per-box centers with shared-face midpoints between them, and
    /// beta.
    pub fn extract_path(
        &self,
        a_id: u32,
        b_id: u32,
        alpha: &Config,
        beta: &Config,
    ) -> (Vec<Config>, Vec<TBox>) {
        use std::collections::{HashMap, VecDeque};
        let mut prev: HashMap<u32, u32> = HashMap::new();
        let mut q = VecDeque::new();
        q.push_back(a_id);
        prev.insert(a_id, a_id);
        while let Some(x) = q.pop_front() {
            if x == b_id {
                break;
            }
            let mut nbrs = self.boxes[x as usize].neighbors.clone();
            nbrs.sort_unstable();
            for n in nbrs {
                if self.boxes[n as usize].status == BoxStatus::Free && !prev.contains_key(&n) {
                    prev.insert(n, x);
                    q.push_back(n);
                }
            }
        }
        assert!(prev.contains_key(&b_id), "union-find connected but BFS found no chain");
        let mut chain = vec![b_id];
        while *chain.last().unwrap() != a_id {
            let p = prev[chain.last().unwrap()];
            chain.push(p);
        }
        chain.reverse();
        let path_boxes: Vec<TBox> = chain.iter().map(|&i| self.boxes[i as usize].t).collect();
        if chain.len() == 1 {
            return (vec![*alpha, *beta], path_boxes);
        }
        let mut path = Vec::with_capacity(2 * chain.len() + 1);
        path.push(*alpha);
        for (k, &id) in chain.iter().enumerate() {
            path.push(self.center_config(id));
            if k + 1 < chain.len() {
                path.push(self.midpoint_config(id, chain[k + 1]));
            }
        }
        path.push(*beta);
        (path, path_boxes)
    }

    fn center_config(&self, id: u32) -> Config {
        let b = &self.boxes[id as usize];
        Config { position: b.t.center, direction: rot_center_point(&b.rot) }
    }

    /// Configuration on the shared boundary of two adjacent FREE leaves:
    /// the midpoint of the translational contact and the midpoint of the
    /// rotational overlap (lifted through the charts).
    fn midpoint_config(&self, a: u32, b: u32) -> Config {
        let ba = &self.boxes[a as usize];
        let bb = &self.boxes[b as usize];
        let (amin, amax) = (ba.t.min(), ba.t.max());
        let (bmin, bmax) = (bb.t.min(), bb.t.max());
        let position = vec3(
            (amin.x.max(bmin.x) + amax.x.min(bmax.x)) / 2.0,
            (amin.y.max(bmin.y) + amax.y.min(bmax.y)) / 2.0,
            (amin.z.max(bmin.z) + amax.z.min(bmax.z)) / 2.0,
        );
        let td = t_overlap_dim(&ba.t, &bb.t).expect("adjacent boxes touch");
        let direction = if td == 2 {
            // Rotational parts overlap in area; take the overlap center.
            match (&ba.rot, &bb.rot) {
                (RotBox::WholeSphere, RotBox::WholeSphere) => rot_center_point(&RotBox::WholeSphere),
                (RotBox::WholeSphere, RotBox::Face(f)) | (RotBox::Face(f), RotBox::WholeSphere) => {
                    face_box_point(f, f.center_uv())
                }
                (RotBox::Face(fa), RotBox::Face(fb)) => {
                    debug_assert_eq!(fa.face, fb.face, "area overlap implies one face");
                    let u = (fa.u0.max(fb.u0) + fa.u1.min(fb.u1)) / 2.0;
                    let v = (fa.v0.max(fb.v0) + fa.v1.min(fb.v1)) / 2.0;
                    face_box_point(fa, (u, v))
                }
            }
        } else {
            // Rotational edge contact: midpoint of the shared segment.
            let (s0, s1) = crate::s2::rot_shared_segment(&ba.rot, &bb.rot)
                .expect("rotational edge contact has a shared segment");
            project_to_cube((s0 + s1) * 0.5).expect("cube surface point is nonzero")
        };
        Config { position, direction }
    }

    /// Sum of vol(B^t) x area(B^r) over the leaves; equals the world measure
    /// for a valid partition.
    pub fn leaf_measure_sum(&self) -> f64 {
        self.boxes
            .iter()
            .filter(|b| b.is_leaf())
            .map(|b| {
                let w = b.t.width();
                w * w * w * b.rot.area()
            })
            .sum()
    }

    pub fn leaf_ids(&self) -> Vec<u32> {
        (0..self.boxes.len() as u32)
            .filter(|&i| self.boxes[i as usize].is_leaf())
            .collect()
    }

    /// Independent connectivity check used by the structural-invariant
    /// tests: BFS components over FREE leaves must match union-find.
    pub fn free_components_by_bfs(&self) -> Vec<Vec<u32>> {
        use std::collections::{HashSet, VecDeque};
        let mut seen: HashSet<u32> = HashSet::new();
        let mut comps = Vec::new();
        for id in self.leaf_ids() {
            if self.boxes[id as usize].status != BoxStatus::Free || seen.contains(&id) {
                continue;
            }
            let mut comp = Vec::new();
            let mut q = VecDeque::new();
            q.push_back(id);
            seen.insert(id);
            while let Some(x) = q.pop_front() {
                comp.push(x);
                for &n in &self.boxes[x as usize].neighbors {
                    if self.boxes[n as usize].status == BoxStatus::Free && seen.insert(n) {
                        q.push_back(n);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn uf_root(&mut self, id: u32) -> u32 {
        self.uf.find(id)
    }
}

fn rot_center_point(r: &RotBox) -> CubePoint {
    match r {
        RotBox::WholeSphere => project_to_cube(Vec3::X).unwrap(),
        RotBox::Face(fb) => face_box_point(fb, fb.center_uv()),
    }
}

fn face_box_point(fb: &FaceBox, (u, v): (f64, f64)) -> CubePoint {
    CubePoint { point: fb.face.chart(u, v), face: fb.face, u, v }
}

/// Plan a path; the one-call entry point.
pub fn find_path(
    scene: &Scene,
    robot: &dyn Robot,
    alpha: &Config,
    beta: &Config,
    cfg: PlannerConfig,
) -> Result<PlanResult, PlanError> {
    Planner::new(scene, robot, cfg).run(alpha, beta)
}
