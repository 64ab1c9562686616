//! Square model of the direction sphere: the boundary of `[-1,1]^3` under
//! `q -> q / |q|_inf`, with per-face charts, quadtree subdivision of faces,
//! surface geodesics, adjacency across cube edges, and bounding cones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::RoundCone;
use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum DirectionError {
    #[error("undefined direction: zero vector")]
    ZeroVector,
}

/// One of the six cube faces, identified by its outward semi-axis.
/// The declaration order is also the tie-breaking priority when a direction
/// lies on a cube edge or corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceId {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

pub const ALL_FACES: [FaceId; 6] = [
    FaceId::PosX,
    FaceId::NegX,
    FaceId::PosY,
    FaceId::NegY,
    FaceId::PosZ,
    FaceId::NegZ,
];

impl FaceId {
    pub fn axis(self) -> usize {
        match self {
            FaceId::PosX | FaceId::NegX => 0,
            FaceId::PosY | FaceId::NegY => 1,
            FaceId::PosZ | FaceId::NegZ => 2,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            FaceId::PosX | FaceId::PosY | FaceId::PosZ => 1.0,
            _ => -1.0,
        }
    }

    pub fn center(self) -> Vec3 {
        let mut c = Vec3::ZERO;
        set_comp(&mut c, self.axis(), self.sign());
        c
    }

    /// In-face chart basis: the two non-axis coordinates in x<y<z order.
    pub fn basis(self) -> (Vec3, Vec3) {
        match self.axis() {
            0 => (Vec3::Y, Vec3::Z),
            1 => (Vec3::X, Vec3::Z),
            _ => (Vec3::X, Vec3::Y),
        }
    }

    /// Chart map: (u,v) in [-1,1]^2 to the cube surface.
    pub fn chart(self, u: f64, v: f64) -> Vec3 {
        let (eu, ev) = self.basis();
        self.center() + eu * u + ev * v
    }

    /// Inverse of `chart` for points on this face's plane.
    pub fn uv_of(self, p: Vec3) -> (f64, f64) {
        let (eu, ev) = self.basis();
        (p.dot(eu), p.dot(ev))
    }

    pub fn opposite(self) -> FaceId {
        match self {
            FaceId::PosX => FaceId::NegX,
            FaceId::NegX => FaceId::PosX,
            FaceId::PosY => FaceId::NegY,
            FaceId::NegY => FaceId::PosY,
            FaceId::PosZ => FaceId::NegZ,
            FaceId::NegZ => FaceId::PosZ,
        }
    }

    pub fn is_adjacent(self, other: FaceId) -> bool {
        self != other && self != other.opposite()
    }

    /// Endpoints of the cube edge shared with an adjacent face.
    pub fn shared_edge(self, other: FaceId) -> (Vec3, Vec3) {
        debug_assert!(self.is_adjacent(other));
        // The edge fixes both face axes at their signs; the remaining axis
        // spans [-1,1].
        let mut base = Vec3::ZERO;
        set_comp(&mut base, self.axis(), self.sign());
        set_comp(&mut base, other.axis(), other.sign());
        let free = 3 - self.axis() - other.axis();
        let mut a = base;
        let mut b = base;
        set_comp(&mut a, free, -1.0);
        set_comp(&mut b, free, 1.0);
        (a, b)
    }
}

fn comp(p: Vec3, axis: usize) -> f64 {
    match axis {
        0 => p.x,
        1 => p.y,
        _ => p.z,
    }
}

fn set_comp(p: &mut Vec3, axis: usize, val: f64) {
    match axis {
        0 => p.x = val,
        1 => p.y = val,
        _ => p.z = val,
    }
}

/// A point of the square model: its cube-surface position, the face chart it
/// is assigned to, and its in-face coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubePoint {
    pub point: Vec3,
    pub face: FaceId,
    pub u: f64,
    pub v: f64,
}

/// Central projection onto the cube surface. Ties on edges/corners resolve
/// by the fixed face priority +x,-x,+y,-y,+z,-z.
pub fn project_to_cube(q: Vec3) -> Result<CubePoint, DirectionError> {
    let m = q.norm_inf();
    if m == 0.0 || !m.is_finite() {
        return Err(DirectionError::ZeroVector);
    }
    let p = q / m;
    for face in ALL_FACES {
        if (comp(p, face.axis()) - face.sign()).abs() < 1e-9 {
            let (u, v) = face.uv_of(p);
            return Ok(CubePoint { point: p, face, u, v });
        }
    }
    unreachable!("projection always attains |.|_inf on some face");
}

/// Inverse map onto the unit sphere.
pub fn lift_to_sphere(p: &CubePoint) -> Vec3 {
    p.point.normalized()
}

/// Great-circle distance between unit vectors.
pub fn geodesic_dist_sphere(p: Vec3, q: Vec3) -> f64 {
    p.dot(q).clamp(-1.0, 1.0).acos()
}

// ---------------------------------------------------------------------------
// Cube-surface geodesics by face-sequence unfolding.
// ---------------------------------------------------------------------------

/// Planar isometric embedding of one face chart during unfolding.
#[derive(Clone, Copy)]
struct Embed {
    // chart (u,v) maps to  o + bu*u + bv*v
    bu: (f64, f64),
    bv: (f64, f64),
    o: (f64, f64),
}

impl Embed {
    fn identity() -> Embed {
        Embed { bu: (1.0, 0.0), bv: (0.0, 1.0), o: (0.0, 0.0) }
    }

    fn apply(&self, u: f64, v: f64) -> (f64, f64) {
        (
            self.o.0 + self.bu.0 * u + self.bv.0 * v,
            self.o.1 + self.bu.1 * u + self.bv.1 * v,
        )
    }
}

fn sub2(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn cross2(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot2(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

/// Unfold face `g` across the cube edge it shares with the already-embedded
/// face `f`, returning `g`'s embedding and the hinge segment in the plane.
fn unfold_across(f: FaceId, ef: &Embed, g: FaceId) -> (Embed, ((f64, f64), (f64, f64))) {
    let (p3, q3) = f.shared_edge(g);
    let pf = f.uv_of(p3);
    let qf = f.uv_of(q3);
    let p2 = ef.apply(pf.0, pf.1);
    let q2 = ef.apply(qf.0, qf.1);
    let (pgu, pgv) = g.uv_of(p3);
    let (qgu, qgv) = g.uv_of(q3);
    // Orthonormal hinge frame in g's chart; cube edges have chart length 2.
    let tg = ((qgu - pgu) / 2.0, (qgv - pgv) / 2.0);
    let ng = (-tg.1, tg.0);
    let t2 = ((q2.0 - p2.0) / 2.0, (q2.1 - p2.1) / 2.0);
    // Two mirror placements; keep the one putting g's center opposite f's.
    let fc2 = ef.apply(0.0, 0.0);
    let side_f = cross2(t2, sub2(fc2, p2));
    for sgn in [1.0f64, -1.0] {
        let n2 = (-t2.1 * sgn, t2.0 * sgn);
        let map = |x: (f64, f64)| -> (f64, f64) {
            let d = sub2(x, (pgu, pgv));
            let s = dot2(d, tg);
            let w = dot2(d, ng);
            (p2.0 + t2.0 * s + n2.0 * w, p2.1 + t2.1 * s + n2.1 * w)
        };
        let o = map((0.0, 0.0));
        let side_g = cross2(t2, sub2(o, p2));
        if side_g * side_f < 0.0 {
            let eg = Embed {
                o,
                bu: sub2(map((1.0, 0.0)), o),
                bv: sub2(map((0.0, 1.0)), o),
            };
            return (eg, (p2, q2));
        }
    }
    unreachable!("one of the two mirror placements is always opposite");
}

/// All faces whose closed chart square contains the cube point.
fn faces_containing(p: Vec3) -> Vec<FaceId> {
    let mut out = Vec::new();
    for face in ALL_FACES {
        if (comp(p, face.axis()) - face.sign()).abs() < 1e-9 {
            let (u, v) = face.uv_of(p);
            if u.abs() <= 1.0 + 1e-9 && v.abs() <= 1.0 + 1e-9 {
                out.push(face);
            }
        }
    }
    out
}

/// Does the straight planar segment a->b cross every hinge in order?
fn crossings_valid(a: (f64, f64), b: (f64, f64), hinges: &[((f64, f64), (f64, f64))]) -> bool {
    const EPS: f64 = 1e-9;
    let d = sub2(b, a);
    let mut prev_t = -EPS;
    for &(h0, h1) in hinges {
        let e = sub2(h1, h0);
        let denom = cross2(d, e);
        if denom.abs() < 1e-15 {
            return false;
        }
        let r = sub2(h0, a);
        let t = cross2(r, e) / denom;
        let s = cross2(r, d) / denom;
        if !(-EPS..=1.0 + EPS).contains(&t) || !(-EPS..=1.0 + EPS).contains(&s) {
            return false;
        }
        if t < prev_t - EPS {
            return false;
        }
        prev_t = t;
    }
    true
}

/// Length of the shortest path on the cube surface between two cube points,
/// computed exactly by enumerating simple face sequences and unfolding.
pub fn geodesic_dist_cube(p: &CubePoint, q: &CubePoint) -> f64 {
    let p_faces = faces_containing(p.point);
    let q_faces = faces_containing(q.point);
    let mut best = f64::INFINITY;

    for &sf in &p_faces {
        let (pu, pv) = sf.uv_of(p.point);
        let start = (pu, pv);
        // Same-face straight segment (optimal whenever both points share a face).
        if q_faces.contains(&sf) {
            let (qu, qv) = sf.uv_of(q.point);
            let d = sub2((qu, qv), start);
            best = best.min(dot2(d, d).sqrt());
        }
        // DFS over simple face sequences.
        let mut stack: Vec<(FaceId, Embed, Vec<FaceId>, Vec<((f64, f64), (f64, f64))>)> =
            vec![(sf, Embed::identity(), vec![sf], Vec::new())];
        while let Some((f, ef, seq, hinges)) = stack.pop() {
            for g in ALL_FACES {
                if !f.is_adjacent(g) || seq.contains(&g) {
                    continue;
                }
                let (eg, hinge) = unfold_across(f, &ef, g);
                let mut hs = hinges.clone();
                hs.push(hinge);
                if q_faces.contains(&g) {
                    let (qu, qv) = g.uv_of(q.point);
                    let q2 = eg.apply(qu, qv);
                    if crossings_valid(start, q2, &hs) {
                        let d = sub2(q2, start);
                        best = best.min(dot2(d, d).sqrt());
                    }
                }
                if seq.len() < 6 {
                    let mut s2 = seq.clone();
                    s2.push(g);
                    stack.push((g, eg, s2, hs));
                }
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Rotational subdivision boxes.
// ---------------------------------------------------------------------------

/// A rotational subdivision box: either the whole direction sphere or a
/// square region of one cube face.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RotBox {
    WholeSphere,
    Face(FaceBox),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceBox {
    pub face: FaceId,
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl FaceBox {
    pub fn full(face: FaceId) -> FaceBox {
        FaceBox { face, u0: -1.0, u1: 1.0, v0: -1.0, v1: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.u1 - self.u0
    }

    pub fn center_uv(&self) -> (f64, f64) {
        ((self.u0 + self.u1) / 2.0, (self.v0 + self.v1) / 2.0)
    }

    /// The chart square's center on the cube surface.
    pub fn center3(&self) -> Vec3 {
        let (u, v) = self.center_uv();
        self.face.chart(u, v)
    }

    pub fn corners3(&self) -> [Vec3; 4] {
        [
            self.face.chart(self.u0, self.v0),
            self.face.chart(self.u1, self.v0),
            self.face.chart(self.u1, self.v1),
            self.face.chart(self.u0, self.v1),
        ]
    }

    pub fn contains_uv(&self, u: f64, v: f64) -> bool {
        u >= self.u0 - 1e-12 && u <= self.u1 + 1e-12 && v >= self.v0 - 1e-12 && v <= self.v1 + 1e-12
    }

    /// Shrink around the center by `sigma > 1`.
    pub fn shrunk(&self, sigma: f64) -> FaceBox {
        let (cu, cv) = self.center_uv();
        let h = self.width() / 2.0 / sigma;
        FaceBox { face: self.face, u0: cu - h, u1: cu + h, v0: cv - h, v1: cv + h }
    }

    /// Border sides lying on the cube skeleton (face boundary), as 3-D segments.
    fn skeleton_sides(&self) -> Vec<(Vec3, Vec3)> {
        let mut out = Vec::new();
        let f = self.face;
        if (self.u0 + 1.0).abs() < 1e-12 {
            out.push((f.chart(-1.0, self.v0), f.chart(-1.0, self.v1)));
        }
        if (self.u1 - 1.0).abs() < 1e-12 {
            out.push((f.chart(1.0, self.v0), f.chart(1.0, self.v1)));
        }
        if (self.v0 + 1.0).abs() < 1e-12 {
            out.push((f.chart(self.u0, -1.0), f.chart(self.u1, -1.0)));
        }
        if (self.v1 - 1.0).abs() < 1e-12 {
            out.push((f.chart(self.u0, 1.0), f.chart(self.u1, 1.0)));
        }
        out
    }
}

impl RotBox {
    pub fn width(&self) -> f64 {
        match self {
            RotBox::WholeSphere => 2.0,
            RotBox::Face(fb) => fb.width(),
        }
    }

    /// Surface area of the region on the cube.
    pub fn area(&self) -> f64 {
        match self {
            RotBox::WholeSphere => 24.0,
            RotBox::Face(fb) => fb.width() * fb.width(),
        }
    }

    pub fn contains(&self, cp: &CubePoint) -> bool {
        match self {
            RotBox::WholeSphere => true,
            RotBox::Face(fb) => {
                if cp.face == fb.face {
                    fb.contains_uv(cp.u, cp.v)
                } else {
                    // A point assigned to another chart may still lie on this
                    // box's closure along a cube edge.
                    if (comp(cp.point, fb.face.axis()) - fb.face.sign()).abs() > 1e-12 {
                        return false;
                    }
                    let (u, v) = fb.face.uv_of(cp.point);
                    fb.contains_uv(u, v)
                }
            }
        }
    }
}

/// Subdivision: the whole sphere splits into its 6 faces, a face box into its
/// 4 congruent quadrants.
pub fn split_rotbox(b: &RotBox) -> Vec<RotBox> {
    match b {
        RotBox::WholeSphere => ALL_FACES.iter().map(|&f| RotBox::Face(FaceBox::full(f))).collect(),
        RotBox::Face(fb) => {
            let (cu, cv) = fb.center_uv();
            [
                (fb.u0, cu, fb.v0, cv),
                (cu, fb.u1, fb.v0, cv),
                (fb.u0, cu, cv, fb.v1),
                (cu, fb.u1, cv, fb.v1),
            ]
            .iter()
            .map(|&(u0, u1, v0, v1)| RotBox::Face(FaceBox { face: fb.face, u0, u1, v0, v1 }))
            .collect()
        }
    }
}

/// Dimension of the intersection of the two closed regions on the cube
/// surface: 2 (area), 1 (segment), 0 (point), or None (disjoint).
pub fn rot_overlap_dim(a: &RotBox, b: &RotBox) -> Option<u8> {
    const EPS: f64 = 1e-12;
    match (a, b) {
        (RotBox::WholeSphere, _) | (_, RotBox::WholeSphere) => Some(2),
        (RotBox::Face(fa), RotBox::Face(fb)) => {
            if fa.face == fb.face {
                let iu = interval_overlap(fa.u0, fa.u1, fb.u0, fb.u1, EPS)?;
                let iv = interval_overlap(fa.v0, fa.v1, fb.v0, fb.v1, EPS)?;
                Some(iu + iv)
            } else if fa.face.is_adjacent(fb.face) {
                // Contact is possible only along the shared cube edge.
                let mut best: Option<u8> = None;
                for (a0, a1) in fa.skeleton_sides() {
                    for (b0, b1) in fb.skeleton_sides() {
                        if let Some(d) = collinear_overlap_dim(a0, a1, b0, b1) {
                            best = Some(best.map_or(d, |x| x.max(d)));
                        }
                    }
                }
                best
            } else {
                None
            }
        }
    }
}

/// Overlap of [a0,a1] and [b0,b1]: Some(1) if positive length, Some(0) if they
/// touch in a point, None if disjoint.
fn interval_overlap(a0: f64, a1: f64, b0: f64, b1: f64, eps: f64) -> Option<u8> {
    let lo = a0.max(b0);
    let hi = a1.min(b1);
    if hi - lo > eps {
        Some(1)
    } else if hi - lo > -eps {
        Some(0)
    } else {
        None
    }
}

/// Overlap dimension of two collinear 3-D segments (must lie on the same
/// cube edge to count).
fn collinear_overlap_dim(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> Option<u8> {
    const EPS: f64 = 1e-12;
    let d = a1 - a0;
    let len = d.norm();
    if len < EPS {
        return None;
    }
    let dir = d / len;
    // b endpoints must lie on the a-line.
    for p in [b0, b1] {
        let off = p - a0;
        let perp = off - dir * off.dot(dir);
        if perp.norm() > 1e-9 {
            return None;
        }
    }
    let t0 = (b0 - a0).dot(dir);
    let t1 = (b1 - a0).dot(dir);
    interval_overlap(0.0, len, t0.min(t1), t0.max(t1), EPS)
}

/// True iff two rotational leaves share a 1-D segment of positive length.
pub fn rotbox_adjacent(a: &RotBox, b: &RotBox) -> bool {
    rot_overlap_dim(a, b) == Some(1)
}

/// The shared 1-D boundary segment of two rotational boxes whose overlap
/// dimension is 1, as a 3-D segment on the cube surface.
pub fn rot_shared_segment(a: &RotBox, b: &RotBox) -> Option<(Vec3, Vec3)> {
    const EPS: f64 = 1e-12;
    let (RotBox::Face(fa), RotBox::Face(fb)) = (a, b) else {
        return None;
    };
    if fa.face == fb.face {
        let f = fa.face;
        // u-ranges touch, v-ranges overlap.
        for (ua, ub) in [(fa.u1, fb.u0), (fa.u0, fb.u1)] {
            if (ua - ub).abs() < EPS {
                let lo = fa.v0.max(fb.v0);
                let hi = fa.v1.min(fb.v1);
                if hi - lo > EPS {
                    return Some((f.chart(ua, lo), f.chart(ua, hi)));
                }
            }
        }
        for (va, vb) in [(fa.v1, fb.v0), (fa.v0, fb.v1)] {
            if (va - vb).abs() < EPS {
                let lo = fa.u0.max(fb.u0);
                let hi = fa.u1.min(fb.u1);
                if hi - lo > EPS {
                    return Some((f.chart(lo, va), f.chart(hi, va)));
                }
            }
        }
        None
    } else if fa.face.is_adjacent(fb.face) {
        for (a0, a1) in fa.skeleton_sides() {
            let dir = a1 - a0;
            let len = dir.norm();
            if len < EPS {
                continue;
            }
            let dir = dir / len;
            for (b0, b1) in fb.skeleton_sides() {
                let mut off_line = false;
                for p in [b0, b1] {
                    let off = p - a0;
                    if (off - dir * off.dot(dir)).norm() > 1e-9 {
                        off_line = true;
                        break;
                    }
                }
                if off_line {
                    continue;
                }
                let t0 = (b0 - a0).dot(dir);
                let t1 = (b1 - a0).dot(dir);
                let lo = t0.min(t1).max(0.0);
                let hi = t0.max(t1).min(len);
                if hi - lo > EPS {
                    return Some((a0 + dir * lo, a0 + dir * hi));
                }
            }
        }
        None
    } else {
        None
    }
}

/// Bounding round cone of a face box seen from `apex`: axis through the chart
/// center, half-angle arcsin((w/sqrt(2)) / |c|). `capped` is set when the
/// circumradius reaches the center distance and no proper cone exists.
pub struct BoxCone {
    pub cone: RoundCone,
    pub capped: bool,
}

pub fn rotbox_cone(b: &FaceBox, apex: Vec3) -> BoxCone {
    let c = b.center3();
    let h = c.norm();
    let circum = b.width() / 2.0 * std::f64::consts::SQRT_2;
    if circum >= h {
        return BoxCone {
            cone: RoundCone { apex, axis: c.normalized(), half_angle: std::f64::consts::FRAC_PI_2 },
            capped: true,
        };
    }
    BoxCone {
        cone: RoundCone { apex, axis: c.normalized(), half_angle: (circum / h).asin() },
        capped: false,
    }
}
