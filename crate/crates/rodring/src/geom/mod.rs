//! Elementary sets, their finite intersections and unions, tau-expansion,
//! and one-sided (conservative) feature intersection tests.
//!
//! Every elementary set is the solution set of one polynomial inequality.
//! Emptiness answers are certified; anything uncertifiable reports
//! "intersects", so the planner's classification stays one-sided.

pub mod sep;

pub use sep::*;

use crate::vec3::Vec3;

/// Tolerance slack applied so ties resolve toward "intersects".
fn tol(scale: f64) -> f64 {
    1e-9 * (1.0 + scale.abs())
}

/// Closed half-space `{ x : normal . x >= offset }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace {
    /// Half-space through `point` with inward normal `normal`.
    pub fn through(point: Vec3, normal: Vec3) -> HalfSpace {
        HalfSpace { normal, offset: normal.dot(point) }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        self.normal.dot(p) >= self.offset - tol(self.offset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
}

/// Solid round cone with apex, unit axis and half-angle in (0, pi/2].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundCone {
    pub apex: Vec3,
    pub axis: Vec3,
    pub half_angle: f64,
}

impl RoundCone {
    /// Angle between `p - apex` and the axis; 0 at the apex itself.
    pub fn angle_of(&self, p: Vec3) -> f64 {
        let v = p - self.apex;
        let n = v.norm();
        if n < 1e-300 {
            return 0.0;
        }
        (v.dot(self.axis) / n).clamp(-1.0, 1.0).acos()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cylinder {
    pub point: Vec3,
    pub axis: Vec3,
    pub radius: f64,
}

/// A circle embedded in 3-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddedCircle {
    pub center: Vec3,
    pub normal: Vec3,
    pub radius: f64,
}

impl EmbeddedCircle {
    /// Exact distance from a point to the circle (curve).
    pub fn distance_to_point(&self, p: Vec3) -> f64 {
        let d = p - self.center;
        let axial = d.dot(self.normal);
        let radial = (d - self.normal * axial).norm();
        (axial * axial + (radial - self.radius) * (radial - self.radius)).sqrt()
    }

    /// The circle point nearest to `p` (an arbitrary circle point when `p`
    /// is on the axis).
    pub fn closest_point(&self, p: Vec3) -> Vec3 {
        let d = p - self.center;
        let axial = d.dot(self.normal);
        let in_plane = d - self.normal * axial;
        let r = in_plane.norm();
        let dir = if r > 1e-300 { in_plane / r } else { self.normal.any_perpendicular() };
        self.center + dir * self.radius
    }

    /// An orthonormal basis (e1, e2) of the circle's plane.
    pub fn plane_basis(&self) -> (Vec3, Vec3) {
        let e1 = self.normal.any_perpendicular();
        let e2 = self.normal.cross(e1);
        (e1, e2)
    }

    pub fn point_at(&self, angle: f64) -> Vec3 {
        let (e1, e2) = self.plane_basis();
        self.center + (e1 * angle.cos() + e2 * angle.sin()) * self.radius
    }
}

/// Minkowski sum of an embedded circle with a ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThickRing {
    pub circle: EmbeddedCircle,
    pub thickness: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementarySet {
    HalfSpace(HalfSpace),
    Ball(Ball),
    BallComplement(Ball),
    RoundCone(RoundCone),
    RoundConeComplement(RoundCone),
    Cylinder(Cylinder),
    ThickRing(ThickRing),
}

impl ElementarySet {
    pub fn contains(&self, p: Vec3) -> bool {
        match self {
            ElementarySet::HalfSpace(h) => h.contains(p),
            ElementarySet::Ball(b) => p.dist(b.center) <= b.radius + tol(b.radius),
            ElementarySet::BallComplement(b) => p.dist(b.center) >= b.radius - tol(b.radius),
            ElementarySet::RoundCone(c) => c.angle_of(p) <= c.half_angle + 1e-9,
            ElementarySet::RoundConeComplement(c) => c.angle_of(p) >= c.half_angle - 1e-9,
            ElementarySet::Cylinder(c) => {
                let v = p - c.point;
                (v - c.axis * v.dot(c.axis)).norm() <= c.radius + tol(c.radius)
            }
            ElementarySet::ThickRing(r) => {
                r.circle.distance_to_point(p) <= r.thickness + tol(r.thickness + r.circle.radius)
            }
        }
    }

    /// A closed-form superset of this set's Minkowski sum with Ball(tau).
    /// Cones expand by sliding the apex along the axis by tau / sin(theta),
    /// the smallest same-axis same-angle cone containing the sum.
    pub fn expand_tau(&self, tau: f64) -> ElementarySet {
        debug_assert!(tau >= 0.0);
        match self {
            ElementarySet::HalfSpace(h) => ElementarySet::HalfSpace(HalfSpace {
                normal: h.normal,
                offset: h.offset - tau,
            }),
            ElementarySet::Ball(b) => {
                ElementarySet::Ball(Ball { center: b.center, radius: b.radius + tau })
            }
            ElementarySet::BallComplement(b) => ElementarySet::BallComplement(Ball {
                center: b.center,
                radius: (b.radius - tau).max(0.0),
            }),
            ElementarySet::RoundCone(c) => ElementarySet::RoundCone(RoundCone {
                apex: c.apex - c.axis * (tau / c.half_angle.sin()),
                ..*c
            }),
            ElementarySet::RoundConeComplement(c) => {
                ElementarySet::RoundConeComplement(RoundCone {
                    apex: c.apex + c.axis * (tau / c.half_angle.sin()),
                    ..*c
                })
            }
            ElementarySet::Cylinder(c) => {
                ElementarySet::Cylinder(Cylinder { radius: c.radius + tau, ..*c })
            }
            ElementarySet::ThickRing(r) => {
                ElementarySet::ThickRing(ThickRing { circle: r.circle, thickness: r.thickness + tau })
            }
        }
    }
}

/// Finite intersection of elementary sets. Empty term list denotes all of R^3.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Pi1Set {
    pub terms: Vec<ElementarySet>,
}

impl Pi1Set {
    pub fn new(terms: Vec<ElementarySet>) -> Pi1Set {
        Pi1Set { terms }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        self.terms.iter().all(|t| t.contains(p))
    }

    pub fn expand_tau(&self, tau: f64) -> Pi1Set {
        Pi1Set { terms: self.terms.iter().map(|t| t.expand_tau(tau)).collect() }
    }
}

/// Finite union of Pi1 sets. Empty list denotes the empty set.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sigma2Set {
    pub terms: Vec<Pi1Set>,
}

impl Sigma2Set {
    pub fn new(terms: Vec<Pi1Set>) -> Sigma2Set {
        Sigma2Set { terms }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        self.terms.iter().any(|t| t.contains(p))
    }

    pub fn expand_tau(&self, tau: f64) -> Sigma2Set {
        Sigma2Set { terms: self.terms.iter().map(|t| t.expand_tau(tau)).collect() }
    }
}

/// An obstacle boundary element: a corner, a (relatively open) edge, or a
/// triangular wall with its outward normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Feature {
    Corner(Vec3),
    Edge(Vec3, Vec3),
    Wall { a: Vec3, b: Vec3, c: Vec3, normal: Vec3 },
}

impl Feature {
    /// A representative point set for sampling oracles.
    pub fn sample(&self, u: f64, v: f64) -> Vec3 {
        match *self {
            Feature::Corner(p) => p,
            Feature::Edge(a, b) => a.lerp(b, u),
            Feature::Wall { a, b, c, .. } => {
                let (mut s, mut t) = (u, v);
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                a + (b - a) * s + (c - a) * t
            }
        }
    }
}

/// Exact Euclidean distance from a point to the closure of a feature.
pub fn sep_point_feature(p: Vec3, f: &Feature) -> f64 {
    match *f {
        Feature::Corner(c) => p.dist(c),
        Feature::Edge(a, b) => dist_point_segment(p, a, b),
        Feature::Wall { a, b, c, .. } => dist_point_triangle(p, a, b, c),
    }
}

/// Exact distance from a segment to the closure of a feature.
pub fn sep_segment_feature(s0: Vec3, s1: Vec3, f: &Feature) -> f64 {
    match *f {
        Feature::Corner(c) => dist_point_segment(c, s0, s1),
        Feature::Edge(a, b) => dist_segment_segment(s0, s1, a, b),
        Feature::Wall { a, b, c, .. } => dist_segment_triangle(s0, s1, a, b, c),
    }
}

/// The sub-segment of `seg` inside the half-space, if any. Exact; endpoints
/// may coincide when the segment only touches the boundary.
pub fn clip_segment_halfspace(seg: (Vec3, Vec3), h: &HalfSpace) -> Option<(Vec3, Vec3)> {
    let da = h.normal.dot(seg.0) - h.offset;
    let db = h.normal.dot(seg.1) - h.offset;
    match (da >= 0.0, db >= 0.0) {
        (true, true) => Some(seg),
        (false, false) => None,
        (inside_a, _) => {
            let t = da / (da - db);
            let cut = seg.0 + (seg.1 - seg.0) * t;
            Some(if inside_a { (seg.0, cut) } else { (cut, seg.1) })
        }
    }
}

// ---------------------------------------------------------------------------
// Conservative feature-vs-set intersection.
// ---------------------------------------------------------------------------

/// One-sided test: returns false only when `f` provably misses the set.
/// Corners are exact membership; edges and walls are clipped through the
/// convex terms and checked against the remaining terms with certified
/// emptiness bounds.
pub fn intersects_feature_conservative(set: &Sigma2Set, f: &Feature) -> bool {
    set.terms.iter().any(|t| pi1_intersects_feature(t, f))
}

pub fn pi1_intersects_feature(term: &Pi1Set, f: &Feature) -> bool {
    match *f {
        Feature::Corner(p) => term.contains(p),
        Feature::Edge(a, b) => pi1_intersects_segment(term, a, b),
        Feature::Wall { a, b, c, .. } => pi1_intersects_polygon(term, &[a, b, c]),
    }
}

fn pi1_intersects_segment(term: &Pi1Set, a: Vec3, b: Vec3) -> bool {
    let mut seg = (a, b);
    // Pass 1: exact clipping through convex half-space and ball terms.
    for t in &term.terms {
        match t {
            ElementarySet::HalfSpace(h) => {
                let slack = HalfSpace { normal: h.normal, offset: h.offset - tol(h.offset) };
                match clip_segment_halfspace(seg, &slack) {
                    Some(s) => seg = s,
                    None => return false,
                }
            }
            ElementarySet::Ball(bl) => match clip_segment_ball(seg, bl) {
                Some(s) => seg = s,
                None => return false,
            },
            _ => {}
        }
    }
    // Pass 2: certified emptiness checks on the residual segment.
    for t in &term.terms {
        match t {
            ElementarySet::HalfSpace(_) | ElementarySet::Ball(_) => {}
            ElementarySet::BallComplement(bl) => {
                let far = seg.0.dist(bl.center).max(seg.1.dist(bl.center));
                if far < bl.radius - tol(bl.radius) {
                    return false;
                }
            }
            ElementarySet::RoundCone(c) => {
                let (amin, _) = segment_angle_extremes(seg, c);
                if amin > c.half_angle + 1e-9 {
                    return false;
                }
            }
            ElementarySet::RoundConeComplement(c) => {
                let (_, amax) = segment_angle_extremes(seg, c);
                if amax < c.half_angle - 1e-9 {
                    return false;
                }
            }
            ElementarySet::Cylinder(c) => {
                if dist_segment_line(seg.0, seg.1, c.point, c.axis) > c.radius + tol(c.radius) {
                    return false;
                }
            }
            ElementarySet::ThickRing(r) => {
                if ring_segment_certified_empty(r, seg) {
                    return false;
                }
            }
        }
    }
    true
}

/// Exact sub-segment inside a ball (with outward slack), or None.
fn clip_segment_ball(seg: (Vec3, Vec3), b: &Ball) -> Option<(Vec3, Vec3)> {
    let r = b.radius + tol(b.radius);
    let d = seg.1 - seg.0;
    let m = seg.0 - b.center;
    let aa = d.norm_sq();
    if aa < 1e-300 {
        return if m.norm() <= r { Some(seg) } else { None };
    }
    let bb = 2.0 * m.dot(d);
    let cc = m.norm_sq() - r * r;
    let disc = bb * bb - 4.0 * aa * cc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-bb - sq) / (2.0 * aa)).max(0.0);
    let t1 = ((-bb + sq) / (2.0 * aa)).min(1.0);
    if t0 > t1 {
        return None;
    }
    Some((seg.0 + d * t0, seg.0 + d * t1))
}

/// Min and max of the angle-to-axis over a segment. Returns (0, pi) when the
/// segment passes through the apex region (no certificate possible there).
fn segment_angle_extremes(seg: (Vec3, Vec3), c: &RoundCone) -> (f64, f64) {
    let d = seg.1 - seg.0;
    let v0 = seg.0 - c.apex;
    // cos(angle)(t) = L(t)/sqrt(S(t)); the critical equation is linear in t.
    let l0 = v0.dot(c.axis);
    let l1 = d.dot(c.axis);
    let s0 = v0.norm_sq();
    let s1 = 2.0 * v0.dot(d);
    let s2 = d.norm_sq();
    let mut cands = vec![0.0, 1.0];
    let denom = l1 * s1 / 2.0 - l0 * s2;
    if denom.abs() > 1e-300 {
        let t = -(l1 * s0 - l0 * s1 / 2.0) / denom;
        if t > 0.0 && t < 1.0 {
            cands.push(t);
        }
    }
    // Closest approach to the apex; if it grazes the apex any angle occurs.
    if s2 > 1e-300 {
        let t_close = (-s1 / (2.0 * s2)).clamp(0.0, 1.0);
        let p = seg.0 + d * t_close;
        if p.dist(c.apex) < 1e-9 {
            return (0.0, std::f64::consts::PI);
        }
    } else if v0.norm() < 1e-9 {
        return (0.0, std::f64::consts::PI);
    }
    let mut amin = f64::INFINITY;
    let mut amax = f64::NEG_INFINITY;
    for t in cands {
        let ang = c.angle_of(seg.0 + d * t);
        amin = amin.min(ang);
        amax = amax.max(ang);
    }
    (amin, amax)
}

/// Certified "segment misses the thick ring" via distance and plane-offset
/// interval bounds.
fn ring_segment_certified_empty(r: &ThickRing, seg: (Vec3, Vec3)) -> bool {
    let o = r.circle.center;
    let eps = tol(r.circle.radius + r.thickness);
    let near = dist_point_segment(o, seg.0, seg.1);
    if near > r.circle.radius + r.thickness + eps {
        return true;
    }
    let far = seg.0.dist(o).max(seg.1.dist(o));
    if far < r.circle.radius - r.thickness - eps {
        return true;
    }
    let h0 = (seg.0 - o).dot(r.circle.normal);
    let h1 = (seg.1 - o).dot(r.circle.normal);
    let min_abs = if h0 * h1 <= 0.0 { 0.0 } else { h0.abs().min(h1.abs()) };
    min_abs > r.thickness + eps
}

fn pi1_intersects_polygon(term: &Pi1Set, tri: &[Vec3; 3]) -> bool {
    let mut poly: Vec<Vec3> = tri.to_vec();
    // Pass 1: clip to a convex polygon through the half-space terms.
    for t in &term.terms {
        if let ElementarySet::HalfSpace(h) = t {
            poly = clip_polygon_halfspace(&poly, h);
            if poly.is_empty() {
                return false;
            }
        }
    }
    // Pass 2: certified emptiness per remaining term.
    for t in &term.terms {
        match t {
            ElementarySet::HalfSpace(_) => {}
            ElementarySet::Ball(b) => {
                if dist_point_polygon(b.center, &poly) > b.radius + tol(b.radius) {
                    return false;
                }
            }
            ElementarySet::BallComplement(b) => {
                let far = poly.iter().map(|p| p.dist(b.center)).fold(0.0, f64::max);
                if far < b.radius - tol(b.radius) {
                    return false;
                }
            }
            ElementarySet::RoundCone(c) => {
                if let Some((lo, _)) = polygon_angle_interval(&poly, c) {
                    if lo > c.half_angle + 1e-9 {
                        return false;
                    }
                }
            }
            ElementarySet::RoundConeComplement(c) => {
                if let Some((_, hi)) = polygon_angle_interval(&poly, c) {
                    if hi < c.half_angle - 1e-9 {
                        return false;
                    }
                }
            }
            ElementarySet::Cylinder(c) => {
                if dist_polygon_line(&poly, c.point, c.axis) > c.radius + tol(c.radius) {
                    return false;
                }
            }
            ElementarySet::ThickRing(r) => {
                if ring_polygon_certified_empty(r, &poly) {
                    return false;
                }
            }
        }
    }
    true
}

/// Sutherland-Hodgman clip with slack keeping boundary-grazing vertices.
fn clip_polygon_halfspace(poly: &[Vec3], h: &HalfSpace) -> Vec<Vec3> {
    let eps = tol(h.offset);
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let cur = poly[i];
        let nxt = poly[(i + 1) % n];
        let dc = h.normal.dot(cur) - h.offset;
        let dn = h.normal.dot(nxt) - h.offset;
        if dc >= -eps {
            out.push(cur);
        }
        if (dc >= -eps) != (dn >= -eps) && (dc - dn).abs() > 1e-300 {
            let t = dc / (dc - dn);
            out.push(cur + (nxt - cur) * t);
        }
    }
    out
}

/// Exact distance from a point to a planar convex polygon (tolerating the
/// degenerate slivers clipping can produce).
fn dist_point_polygon(p: Vec3, poly: &[Vec3]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => p.dist(poly[0]),
        2 => dist_point_segment(p, poly[0], poly[1]),
        _ => {
            // Fan triangulation from vertex 0 is valid for convex polygons.
            let mut best = f64::INFINITY;
            for i in 1..poly.len() - 1 {
                best = best.min(dist_point_triangle(p, poly[0], poly[i], poly[i + 1]));
            }
            best
        }
    }
}

fn dist_polygon_line(poly: &[Vec3], lp: Vec3, ldir: Vec3) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => {
            let w = poly[0] - lp;
            (w - ldir * w.dot(ldir)).norm()
        }
        _ => {
            let mut best = f64::INFINITY;
            let n = poly.len();
            for i in 0..n {
                best = best.min(dist_segment_line(poly[i], poly[(i + 1) % n], lp, ldir));
            }
            // A line piercing the polygon interior has distance zero; detect
            // via the crossing point of the line with the polygon plane.
            if poly.len() >= 3 {
                if let Some(nrm) = polygon_normal(poly) {
                    let denom = nrm.dot(ldir);
                    if denom.abs() > 1e-12 {
                        let t = nrm.dot(poly[0] - lp) / denom;
                        let q = lp + ldir * t;
                        for i in 1..poly.len() - 1 {
                            if sep::point_in_triangle(q, poly[0], poly[i], poly[i + 1]) {
                                return 0.0;
                            }
                        }
                    }
                }
            }
            best
        }
    }
}

fn polygon_normal(poly: &[Vec3]) -> Option<Vec3> {
    // Newell's formula; robust against near-degenerate fans.
    let mut n = Vec3::ZERO;
    let k = poly.len();
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        n = n + Vec3 {
            x: (a.y - b.y) * (a.z + b.z),
            y: (a.z - b.z) * (a.x + b.x),
            z: (a.x - b.x) * (a.y + b.y),
        };
    }
    let len = n.norm();
    if len < 1e-300 {
        None
    } else {
        Some(n / len)
    }
}

/// Sound enclosing interval for the angle-to-axis over the polygon, via its
/// circumscribing ball seen from the apex. None when the ball reaches the
/// apex (no certificate).
fn polygon_angle_interval(poly: &[Vec3], c: &RoundCone) -> Option<(f64, f64)> {
    if poly.is_empty() {
        return Some((f64::INFINITY, f64::NEG_INFINITY));
    }
    let mut centroid = Vec3::ZERO;
    for p in poly {
        centroid = centroid + *p;
    }
    centroid = centroid / poly.len() as f64;
    let rho = poly.iter().map(|p| p.dist(centroid)).fold(0.0, f64::max);
    let d = centroid.dist(c.apex);
    if d <= rho + 1e-9 {
        return None;
    }
    let mid = c.angle_of(centroid);
    let spread = (rho / d).min(1.0).asin();
    Some(((mid - spread).max(0.0), (mid + spread).min(std::f64::consts::PI)))
}

fn ring_polygon_certified_empty(r: &ThickRing, poly: &[Vec3]) -> bool {
    let o = r.circle.center;
    let eps = tol(r.circle.radius + r.thickness);
    if dist_point_polygon(o, poly) > r.circle.radius + r.thickness + eps {
        return true;
    }
    let far = poly.iter().map(|p| p.dist(o)).fold(0.0, f64::max);
    if far < r.circle.radius - r.thickness - eps {
        return true;
    }
    let offsets: Vec<f64> = poly.iter().map(|p| (*p - o).dot(r.circle.normal)).collect();
    let all_pos = offsets.iter().all(|&h| h > 0.0);
    let all_neg = offsets.iter().all(|&h| h < 0.0);
    if !(all_pos || all_neg) {
        return false;
    }
    offsets.iter().map(|h| h.abs()).fold(f64::INFINITY, f64::min) > r.thickness + eps
}
