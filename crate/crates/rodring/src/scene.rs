//! Obstacle scenes: unions of closed triangulated polyhedra, their boundary
//! features, point-in-solid classification via the closest feature, the
//! clearance oracle, and seeded random environment generation.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{sep_point_feature, Feature};
use crate::robot::Robot;
use crate::vec3::{vec3, Vec3};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("polyhedron {poly}: edge ({a},{b}) has {count} incident triangles (expected 2)")]
    NonManifoldEdge { poly: usize, a: u32, b: u32, count: usize },
    #[error("polyhedron {poly}: edge ({a},{b}) has inconsistent orientation")]
    InconsistentOrientation { poly: usize, a: u32, b: u32 },
    #[error("polyhedron {poly}: triangle {tri} is degenerate")]
    DegenerateTriangle { poly: usize, tri: usize },
    #[error("polyhedron {poly}: triangle {tri} vertex index {index} out of range")]
    IndexOutOfRange { poly: usize, tri: usize, index: u32 },
    #[error("world box is not an axis-aligned cube with positive width")]
    BadWorldBox,
}

/// Closed triangulated polyhedron with consistent outward orientation.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    /// Per-triangle outward unit normals.
    pub normals: Vec<Vec3>,
    /// Undirected edges as (a,b) vertex pairs with a < b, plus the two
    /// incident triangles.
    pub edges: Vec<(u32, u32, [u32; 2])>,
    /// Incident triangles per vertex.
    pub vertex_tris: Vec<Vec<u32>>,
    pub bound_center: Vec3,
    pub bound_radius: f64,
}

impl Polyhedron {
    /// Validate a raw mesh (closed, 2-manifold, consistently oriented) and
    /// derive adjacency.
    pub fn new(poly_id: usize, vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Result<Polyhedron, SceneError> {
        let nv = vertices.len() as u32;
        let diag = {
            let mut lo = vertices.first().copied().unwrap_or(Vec3::ZERO);
            let mut hi = lo;
            for v in &vertices {
                lo = lo.min_component_wise(*v);
                hi = hi.max_component_wise(*v);
            }
            (hi - lo).norm()
        };
        let eps = 1e-12 * (1.0 + diag);
        let mut normals = Vec::with_capacity(triangles.len());
        for (ti, t) in triangles.iter().enumerate() {
            for &i in t {
                if i >= nv {
                    return Err(SceneError::IndexOutOfRange { poly: poly_id, tri: ti, index: i });
                }
            }
            let (a, b, c) = (vertices[t[0] as usize], vertices[t[1] as usize], vertices[t[2] as usize]);
            let n = (b - a).cross(c - a);
            if n.norm() <= eps * eps || a.dist(b) <= eps || b.dist(c) <= eps || c.dist(a) <= eps {
                return Err(SceneError::DegenerateTriangle { poly: poly_id, tri: ti });
            }
            normals.push(n.normalized());
        }
        use std::collections::HashMap;
        // Directed edge -> owning triangle; a closed orientable manifold has
        // each undirected edge exactly once in each direction.
        let mut directed: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                directed.entry((t[k], t[(k + 1) % 3])).or_default().push(ti as u32);
            }
        }
        let mut edges = Vec::new();
        let mut seen: std::collections::HashSet<(u32, u32)> = Default::default();
        for (&(a, b), tris_ab) in &directed {
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                continue;
            }
            let tris_ba = directed.get(&(b, a)).map(|v| v.as_slice()).unwrap_or(&[]);
            let count = tris_ab.len() + tris_ba.len();
            if count != 2 {
                return Err(SceneError::NonManifoldEdge { poly: poly_id, a: key.0, b: key.1, count });
            }
            if tris_ab.len() != 1 || tris_ba.len() != 1 {
                return Err(SceneError::InconsistentOrientation { poly: poly_id, a: key.0, b: key.1 });
            }
            edges.push((key.0, key.1, [tris_ab[0], tris_ba[0]]));
        }
        edges.sort_unstable_by_key(|e| (e.0, e.1));
        let mut vertex_tris = vec![Vec::new(); vertices.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for &i in t {
                vertex_tris[i as usize].push(ti as u32);
            }
        }
        let mut bound_center = Vec3::ZERO;
        for v in &vertices {
            bound_center = bound_center + *v;
        }
        bound_center = bound_center / vertices.len().max(1) as f64;
        let bound_radius = vertices.iter().map(|v| v.dist(bound_center)).fold(0.0, f64::max);
        Ok(Polyhedron { vertices, triangles, normals, edges, vertex_tris, bound_center, bound_radius })
    }

    pub fn triangle_points(&self, ti: u32) -> (Vec3, Vec3, Vec3) {
        let t = self.triangles[ti as usize];
        (self.vertices[t[0] as usize], self.vertices[t[1] as usize], self.vertices[t[2] as usize])
    }
}

/// Axis-aligned cubic planning domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorldBox {
    pub min: Vec3,
    pub max: Vec3,
}

impl WorldBox {
    pub fn cube(min: Vec3, width: f64) -> WorldBox {
        WorldBox { min, max: min + vec3(width, width, width) }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn diameter(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x && p.x <= self.max.x
            && p.y >= self.min.y && p.y <= self.max.y
            && p.z >= self.min.z && p.z <= self.max.z
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        let d = self.max - self.min;
        let w = d.x;
        if w <= 0.0 || (d.y - w).abs() > 1e-9 * w || (d.z - w).abs() > 1e-9 * w {
            return Err(SceneError::BadWorldBox);
        }
        Ok(())
    }
}

/// The obstacle set: a union of polyhedra, its flattened feature list, and
/// the world box.
#[derive(Clone, Debug)]
pub struct Scene {
    pub polyhedra: Vec<Polyhedron>,
    pub features: Vec<Feature>,
    pub feature_owner: Vec<u32>,
    /// Feature index range per polyhedron.
    pub feature_ranges: Vec<std::ops::Range<usize>>,
    pub world: WorldBox,
}

/// One corner per vertex, one edge per undirected mesh edge, one wall per
/// triangle.
pub fn build_features(polyhedra: Vec<Polyhedron>, world: WorldBox) -> Result<Scene, SceneError> {
    world.validate()?;
    let mut features = Vec::new();
    let mut feature_owner = Vec::new();
    let mut feature_ranges = Vec::new();
    for (pi, p) in polyhedra.iter().enumerate() {
        let start = features.len();
        for v in &p.vertices {
            features.push(Feature::Corner(*v));
        }
        for &(a, b, _) in &p.edges {
            features.push(Feature::Edge(p.vertices[a as usize], p.vertices[b as usize]));
        }
        for (ti, _) in p.triangles.iter().enumerate() {
            let (a, b, c) = p.triangle_points(ti as u32);
            features.push(Feature::Wall { a, b, c, normal: p.normals[ti] });
        }
        feature_owner.extend(std::iter::repeat_n(pi as u32, features.len() - start));
        feature_ranges.push(start..features.len());
    }
    Ok(Scene { polyhedra, features, feature_owner, feature_ranges, world })
}

/// The boundary feature of one polyhedron closest to `q`, with the class
/// resolved to the lowest dimension on ties (partition semantics: corners
/// and open edges take precedence over open walls).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosestFeature {
    Corner { vertex: u32 },
    Edge { edge: u32 },
    Wall { tri: u32 },
}

pub fn closest_feature(p: &Polyhedron, q: Vec3) -> (ClosestFeature, f64) {
    let mut best_corner = (0u32, f64::INFINITY);
    for (i, v) in p.vertices.iter().enumerate() {
        let d = v.dist(q);
        if d < best_corner.1 {
            best_corner = (i as u32, d);
        }
    }
    let mut best_edge = (0u32, f64::INFINITY);
    for (i, &(a, b, _)) in p.edges.iter().enumerate() {
        let d = crate::geom::dist_point_segment(q, p.vertices[a as usize], p.vertices[b as usize]);
        if d < best_edge.1 {
            best_edge = (i as u32, d);
        }
    }
    let mut best_wall = (0u32, f64::INFINITY);
    for ti in 0..p.triangles.len() {
        let (a, b, c) = p.triangle_points(ti as u32);
        let d = crate::geom::dist_point_triangle(q, a, b, c);
        if d < best_wall.1 {
            best_wall = (ti as u32, d);
        }
    }
    let dmin = best_corner.1.min(best_edge.1).min(best_wall.1);
    let tie = 1e-12 * (1.0 + p.bound_radius) + 1e-12 * dmin;
    if best_corner.1 <= dmin + tie {
        (ClosestFeature::Corner { vertex: best_corner.0 }, best_corner.1)
    } else if best_edge.1 <= dmin + tie {
        (ClosestFeature::Edge { edge: best_edge.0 }, best_edge.1)
    } else {
        (ClosestFeature::Wall { tri: best_wall.0 }, best_wall.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerClass {
    PseudoConvex,
    PseudoConcave,
}

/// Classify a corner that is the closest boundary point of `p` to `q`.
/// Uses the angle-weighted pseudonormal at the corner: its sign against
/// (q - corner) decides outside (pseudo-convex) vs inside (pseudo-concave),
/// which is exact under the closest-point hypothesis.
pub fn classify_corner(p: &Polyhedron, vertex: u32, q: Vec3) -> CornerClass {
    let c = p.vertices[vertex as usize];
    let mut pseudo = Vec3::ZERO;
    for &ti in &p.vertex_tris[vertex as usize] {
        let t = p.triangles[ti as usize];
        let k = t.iter().position(|&i| i == vertex).unwrap();
        let a = p.vertices[t[(k + 1) % 3] as usize];
        let b = p.vertices[t[(k + 2) % 3] as usize];
        let u = (a - c).normalized();
        let v = (b - c).normalized();
        let angle = u.dot(v).clamp(-1.0, 1.0).acos();
        pseudo = pseudo + p.normals[ti as usize] * angle;
    }
    if pseudo.dot(q - c) >= 0.0 {
        CornerClass::PseudoConvex
    } else {
        CornerClass::PseudoConcave
    }
}

/// Is `q` strictly inside this polyhedron? Decided from the closest boundary
/// feature: wall by its outward normal, edge by the two incident normals,
/// corner by `classify_corner`.
pub fn point_inside_polyhedron(p: &Polyhedron, q: Vec3) -> bool {
    if q.dist(p.bound_center) > p.bound_radius {
        return false;
    }
    let (cf, _) = closest_feature(p, q);
    match cf {
        ClosestFeature::Wall { tri } => {
            let (a, _, _) = p.triangle_points(tri);
            p.normals[tri as usize].dot(q - a) < 0.0
        }
        ClosestFeature::Edge { edge } => {
            let (a, b, tris) = p.edges[edge as usize];
            let pn = p.normals[tris[0] as usize] + p.normals[tris[1] as usize];
            let foot = crate::geom::closest_point_segment(q, p.vertices[a as usize], p.vertices[b as usize]).0;
            pn.dot(q - foot) < 0.0
        }
        ClosestFeature::Corner { vertex } => {
            classify_corner(p, vertex, q) == CornerClass::PseudoConcave
        }
    }
}

/// Is `q` inside the union of the candidate polyhedra?
pub fn point_inside_union(scene: &Scene, q: Vec3, candidates: impl IntoIterator<Item = usize>) -> bool {
    candidates.into_iter().any(|i| point_inside_polyhedron(&scene.polyhedra[i], q))
}

pub fn point_inside_any(scene: &Scene, q: Vec3) -> bool {
    point_inside_union(scene, q, 0..scene.polyhedra.len())
}

/// Minimum separation between the robot footprint at (pos, dir) and the
/// obstacle set; 0 when colliding. An empty scene reports the world box
/// diameter as the +inf sentinel.
pub fn clearance(robot: &dyn Robot, pos: Vec3, dir: Vec3, scene: &Scene) -> f64 {
    if scene.features.is_empty() {
        return scene.world.diameter();
    }
    let reach = robot.max_reach();
    let mut min_sep = f64::INFINITY;
    for (pi, p) in scene.polyhedra.iter().enumerate() {
        if pos.dist(p.bound_center) - p.bound_radius - reach > min_sep {
            continue;
        }
        for f in &scene.features[scene.feature_ranges[pi].clone()] {
            // Cheap lower bound before the exact separation.
            if sep_point_feature(pos, f) - reach > min_sep {
                continue;
            }
            let s = robot.footprint_sep_feature(pos, dir, f);
            if s < min_sep {
                min_sep = s;
                if min_sep == 0.0 {
                    return 0.0;
                }
            }
        }
    }
    let clear = min_sep - robot.thickness();
    if clear <= 0.0 {
        return 0.0;
    }
    // The footprint touches no boundary; it is entirely inside or outside.
    if point_inside_any(scene, robot.footprint_probe(pos, dir)) {
        return 0.0;
    }
    clear
}

/// Deterministic random scene: `n` tetrahedra with vertices sampled around
/// centers in the world box, sizes drawn from `size_range`. Degenerate
/// samples are rejected and redrawn.
pub fn gen_random_tetrahedra(
    n: usize,
    seed: u64,
    world: WorldBox,
    size_range: (f64, f64),
) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = Vec::with_capacity(n);
    for id in 0..n {
        loop {
            let s = rng.gen_range(size_range.0..=size_range.1);
            let half = s / 2.0;
            let mut center = Vec3::ZERO;
            for axis in 0..3 {
                let lo = match axis {
                    0 => world.min.x,
                    1 => world.min.y,
                    _ => world.min.z,
                } + half;
                let hi = match axis {
                    0 => world.max.x,
                    1 => world.max.y,
                    _ => world.max.z,
                } - half;
                let val = rng.gen_range(lo..hi);
                match axis {
                    0 => center.x = val,
                    1 => center.y = val,
                    _ => center.z = val,
                }
            }
            let mut vs: Vec<Vec3> = (0..4)
                .map(|_| {
                    center
                        + vec3(
                            rng.gen_range(-half..half),
                            rng.gen_range(-half..half),
                            rng.gen_range(-half..half),
                        )
                })
                .collect();
            let vol6 = (vs[1] - vs[0]).cross(vs[2] - vs[0]).dot(vs[3] - vs[0]);
            if vol6.abs() < 6.0 * 1e-9 * s * s * s {
                continue;
            }
            if vol6 < 0.0 {
                vs.swap(2, 3);
            }
            // Positive orientation: these four faces point outward.
            let tris = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];
            match Polyhedron::new(id, vs, tris) {
                Ok(p) => {
                    polys.push(p);
                    break;
                }
                Err(_) => continue,
            }
        }
    }
    build_features(polys, world).expect("generated tetrahedra are valid")
}

/// Axis-aligned box solid as a 12-triangle polyhedron (outward oriented).
pub fn make_box_polyhedron(id: usize, min: Vec3, max: Vec3) -> Polyhedron {
    let v = [
        vec3(min.x, min.y, min.z),
        vec3(max.x, min.y, min.z),
        vec3(max.x, max.y, min.z),
        vec3(min.x, max.y, min.z),
        vec3(min.x, min.y, max.z),
        vec3(max.x, min.y, max.z),
        vec3(max.x, max.y, max.z),
        vec3(min.x, max.y, max.z),
    ];
    let tris = vec![
        // bottom (z = min)
        [0, 2, 1],
        [0, 3, 2],
        // top (z = max)
        [4, 5, 6],
        [4, 6, 7],
        // front (y = min)
        [0, 1, 5],
        [0, 5, 4],
        // right (x = max)
        [1, 2, 6],
        [1, 6, 5],
        // back (y = max)
        [2, 3, 7],
        [2, 7, 6],
        // left (x = min)
        [3, 0, 4],
        [3, 4, 7],
    ];
    Polyhedron::new(id, v.to_vec(), tris).expect("box mesh is valid")
}

/// Regular-ish tetrahedron solid for hand-built scenes.
pub fn make_tetrahedron(id: usize, vs: [Vec3; 4]) -> Result<Polyhedron, SceneError> {
    let mut vs = vs.to_vec();
    let vol6 = (vs[1] - vs[0]).cross(vs[2] - vs[0]).dot(vs[3] - vs[0]);
    if vol6 < 0.0 {
        vs.swap(2, 3);
    }
    Polyhedron::new(id, vs, vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]])
}
