//! Ring robot: an embedded circle of radius r0. Exact circle-feature
//! separations (the circle-line case reduces to a quartic), the projection
//! upper bound Sep' (a filter only, never a correctness primitive), and the
//! Sigma2 approximate box footprint: two thick rings plus a truncated
//! annulus.

use crate::geom::{
    pi1_intersects_feature, point_in_triangle, sep_point_feature, Ball, ElementarySet,
    EmbeddedCircle, Feature, Pi1Set, RoundCone, Sigma2Set, ThickRing,
};
use crate::quartic::solve_quartic;
use crate::robot::{BoxFeatureTest, OuterBallTest, Robot, TBox};
use crate::s2::{rotbox_cone, FaceBox, RotBox};
use crate::vec3::{vec3, Vec3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingRobot {
    pub radius: f64,
    pub thickness: f64,
}

impl RingRobot {
    pub fn new(radius: f64) -> RingRobot {
        RingRobot { radius, thickness: 0.0 }
    }
}

/// Footprint of a configuration: the circle around `pos` with normal `dir`.
pub fn ring_footprint(pos: Vec3, dir: Vec3, radius: f64) -> EmbeddedCircle {
    EmbeddedCircle { center: pos, normal: dir, radius }
}

pub fn sep_circle_point(c: &EmbeddedCircle, p: Vec3) -> f64 {
    c.distance_to_point(p)
}

/// Separation of the circle from the plane `{x : normal . x = offset}`
/// (unit normal).
pub fn sep_circle_plane(c: &EmbeddedCircle, normal: Vec3, offset: f64) -> f64 {
    let s_o = normal.dot(c.center) - offset;
    // In-plane component of the plane normal within the circle's plane.
    let w = normal - c.normal * c.normal.dot(normal);
    let sin_a = w.norm();
    if sin_a < 1e-12 {
        return s_o.abs();
    }
    // Distance (in the circle plane) from the center to the intersection line.
    let rho = s_o.abs() / sin_a;
    if rho <= c.radius {
        return 0.0;
    }
    let toward = w * (-s_o.signum() / sin_a);
    let p = c.center + toward * c.radius;
    (normal.dot(p) - offset).abs()
}

/// Critical circle points for the distance to the line (q0, unit u), with
/// their line parameters. Built from the quartic in the circle-plane frame;
/// a sign-change sweep over [-r, r] backs up the closed-form roots.
fn circle_line_candidates(c: &EmbeddedCircle, q0: Vec3, u: Vec3) -> Vec<(Vec3, f64)> {
    let o = c.center;
    let r = c.radius;
    let (e1, e2) = c.plane_basis();
    let lq = vec3((q0 - o).dot(e1), (q0 - o).dot(e2), (q0 - o).dot(c.normal));
    let lu = vec3(u.dot(e1), u.dot(e2), u.dot(c.normal));
    let mut xy: Vec<(f64, f64)> = Vec::new();
    let h2 = lu.x * lu.x + lu.y * lu.y;
    if h2 < 1e-18 {
        // Line parallel to the circle axis.
        let rho = (lq.x * lq.x + lq.y * lq.y).sqrt();
        if rho < 1e-12 {
            xy.push((r, 0.0));
        } else {
            xy.push((r * lq.x / rho, r * lq.y / rho));
            xy.push((-r * lq.x / rho, -r * lq.y / rho));
        }
    } else {
        let t0 = lu.dot(lq);
        let cv = lq - lu * t0;
        let (cx, cy) = (cv.x, cv.y);
        let ap = lu.x * lu.y;
        let b1 = lu.y * lu.y - lu.x * lu.x;
        let b0 = cy;
        let r2 = r * r;
        // (2 a' y^2 + cx y - a' r^2)^2 = (b1 y + b0)^2 (r^2 - y^2)
        let c4 = 4.0 * ap * ap + b1 * b1;
        let c3 = 4.0 * ap * cx + 2.0 * b1 * b0;
        let c2 = cx * cx - 4.0 * ap * ap * r2 - b1 * b1 * r2 + b0 * b0;
        let c1 = -2.0 * ap * cx * r2 - 2.0 * b1 * b0 * r2;
        let c0 = ap * ap * r2 * r2 - b0 * b0 * r2;
        let mut ys = solve_quartic(c4, c3, c2, c1, c0);
        // Sweep for brackets the closed form may have lost; only |y| <= r
        // can carry a circle point.
        let eval = |y: f64| {
            let s = 2.0 * ap * y * y + cx * y - ap * r2;
            let b = b1 * y + b0;
            s * s - b * b * (r2 - y * y)
        };
        let n = 64;
        let mut prev_y = -r;
        let mut prev_v = eval(prev_y);
        for i in 1..=n {
            let y = -r + 2.0 * r * i as f64 / n as f64;
            let v = eval(y);
            if prev_v == 0.0 {
                ys.push(prev_y);
            } else if prev_v * v < 0.0 {
                let (mut lo, mut hi, flo) = (prev_y, y, prev_v);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid);
                    if fm * flo <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                ys.push(0.5 * (lo + hi));
            }
            prev_y = y;
            prev_v = v;
        }
        for y in ys {
            if y.abs() > r * (1.0 + 1e-9) {
                continue;
            }
            let yc = y.clamp(-r, r);
            let x = (r2 - yc * yc).max(0.0).sqrt();
            xy.push((x, yc));
            xy.push((-x, yc));
        }
        if xy.is_empty() {
            // Guarded fallback: coarse scan of the one-parameter distance.
            return circle_line_scan(c, q0, u);
        }
    }
    xy.iter()
        .map(|&(x, y)| {
            // Project onto the circle to absorb clamping error.
            let len = (x * x + y * y).sqrt();
            let (xs, ys) = if len > 1e-300 { (x * r / len, y * r / len) } else { (r, 0.0) };
            let p = o + e1 * xs + e2 * ys;
            (p, u.dot(p - q0))
        })
        .collect()
}

/// Fallback: dense scan plus local refinement of dist(p(phi), line).
fn circle_line_scan(c: &EmbeddedCircle, q0: Vec3, u: Vec3) -> Vec<(Vec3, f64)> {
    let dist = |phi: f64| {
        let p = c.point_at(phi);
        let w = p - q0;
        (w - u * w.dot(u)).norm()
    };
    let n = 256;
    let mut best_phi = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let phi = std::f64::consts::TAU * i as f64 / n as f64;
        let d = dist(phi);
        if d < best {
            best = d;
            best_phi = phi;
        }
    }
    let (mut lo, mut hi) = (
        best_phi - std::f64::consts::TAU / n as f64,
        best_phi + std::f64::consts::TAU / n as f64,
    );
    for _ in 0..90 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if dist(m1) <= dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let phi = 0.5 * (lo + hi);
    let p = c.point_at(phi);
    vec![(p, u.dot(p - q0))]
}

/// Exact separation between the circle and an infinite line.
pub fn sep_circle_line(c: &EmbeddedCircle, q0: Vec3, dir: Vec3) -> f64 {
    let u = dir.normalized();
    let mut best = f64::INFINITY;
    for (p, _t) in circle_line_candidates(c, q0, u) {
        let w = p - q0;
        let d = (w - u * w.dot(u)).norm();
        best = best.min(d);
    }
    if !best.is_finite() {
        for (p, _t) in circle_line_scan(c, q0, u) {
            let w = p - q0;
            best = best.min((w - u * w.dot(u)).norm());
        }
    }
    best
}

/// Exact separation between the circle and a segment: interior critical
/// points of the supporting line whose foot lies inside, plus the endpoints.
pub fn sep_circle_segment(c: &EmbeddedCircle, a: Vec3, b: Vec3) -> f64 {
    let len = a.dist(b);
    let mut best = sep_circle_point(c, a).min(sep_circle_point(c, b));
    if len < 1e-300 {
        return best;
    }
    let u = (b - a) / len;
    for (p, t) in circle_line_candidates(c, a, u) {
        if t > 0.0 && t < len {
            best = best.min(p.dist(a + u * t));
        }
    }
    best
}

/// Exact separation between the circle and a (closed) triangle.
pub fn sep_circle_triangle(c: &EmbeddedCircle, t0: Vec3, t1: Vec3, t2: Vec3) -> f64 {
    let n_p = (t1 - t0).cross(t2 - t0).normalized();
    let d_p = n_p.dot(t0);
    let (e1, e2) = c.plane_basis();
    let s_o = n_p.dot(c.center) - d_p;
    let ca = c.radius * n_p.dot(e1);
    let cb = c.radius * n_p.dot(e2);
    let amp = (ca * ca + cb * cb).sqrt();
    // Circle points crossing the triangle's plane.
    if amp > 1e-15 && s_o.abs() <= amp {
        let psi = cb.atan2(ca);
        let d = (-s_o / amp).clamp(-1.0, 1.0).acos();
        for phi in [psi + d, psi - d] {
            let p = c.center + (e1 * phi.cos() + e2 * phi.sin()) * c.radius;
            if point_in_triangle(p, t0, t1, t2) {
                return 0.0;
            }
        }
    }
    let mut best = sep_circle_segment(c, t0, t1)
        .min(sep_circle_segment(c, t1, t2))
        .min(sep_circle_segment(c, t2, t0));
    // Interior-foot candidates at the circle's plane-distance extremes.
    if amp > 1e-15 {
        let psi = cb.atan2(ca);
        for phi in [psi, psi + std::f64::consts::PI] {
            let p = c.center + (e1 * phi.cos() + e2 * phi.sin()) * c.radius;
            let s = n_p.dot(p) - d_p;
            let foot = p - n_p * s;
            if point_in_triangle(foot, t0, t1, t2) {
                best = best.min(s.abs());
            }
        }
    } else {
        // Parallel planes: if the circle projects into the triangle anywhere
        // the plane gap is attainable (edge crossings are covered above).
        let p = c.point_at(0.0);
        let foot = p - n_p * (n_p.dot(p) - d_p);
        if point_in_triangle(foot, t0, t1, t2) {
            best = best.min(s_o.abs());
        }
    }
    best
}

/// Exact separation between the circle and a feature.
pub fn sep_circle_feature(c: &EmbeddedCircle, f: &Feature) -> f64 {
    match *f {
        Feature::Corner(p) => sep_circle_point(c, p),
        Feature::Edge(a, b) => sep_circle_segment(c, a, b),
        Feature::Wall { a, b, c: cc, .. } => sep_circle_triangle(c, a, b, cc),
    }
}

/// Projection-based upper bound Sep' on the separation from an edge. The
/// line parameter is clamped to the edge so the value is always a distance
/// between an actual edge point and an actual circle point, hence an upper
/// bound on sep_circle_segment as well. Heuristic only: Sep' can misorder
/// features (it must never back a FREE/STUCK decision).
pub fn sep_upper_bound_line(c: &EmbeddedCircle, a: Vec3, b: Vec3) -> f64 {
    let o = c.center;
    let n = c.normal;
    let pa = a - n * (a - o).dot(n);
    let pb = b - n * (b - o).dot(n);
    let proj_len = pa.dist(pb);
    if proj_len < 1e-9 * (1.0 + a.dist(b)) {
        // Degenerate projection: the edge is (nearly) parallel to the axis.
        let rho = (pa - o).norm();
        let za = (a - o).dot(n);
        let zb = (b - o).dot(n);
        let z = if za * zb <= 0.0 { 0.0 } else { za.abs().min(zb.abs()) };
        return ((rho - c.radius).powi(2) + z * z).sqrt();
    }
    let dirp = (pb - pa) / proj_len;
    // Closest point of the projected line to the circle, as a parameter of
    // the projected segment.
    let foot_t = (o - pa).dot(dirp) / proj_len;
    let rho_foot = (pa + dirp * (foot_t * proj_len) - o).norm();
    let mut t = foot_t;
    if rho_foot < c.radius {
        // The projected line crosses the circle; take the first crossing.
        let m = pa - o;
        let md = m.dot(dirp);
        let disc = md * md - (m.norm_sq() - c.radius * c.radius);
        if disc >= 0.0 {
            t = (-md - disc.sqrt()) / proj_len;
        }
    }
    let t = t.clamp(0.0, 1.0);
    let p_prime = pa + (pb - pa) * t;
    let p = a + (b - a) * t;
    let d = ((p_prime - o).norm() - c.radius).abs();
    let vertical = (p - p_prime).norm();
    (d * d + vertical * vertical).sqrt()
}

/// Approximate box footprint of the ring: two thick rings at the slab
/// circles plus the truncated annulus between them.
#[derive(Clone, Debug)]
pub struct RingApproxFp {
    pub ring_top: ThickRing,
    pub ring_bottom: ThickRing,
    pub annulus: Pi1Set,
}

impl RingApproxFp {
    pub fn as_sigma2(&self) -> Sigma2Set {
        Sigma2Set::new(vec![
            Pi1Set::new(vec![ElementarySet::ThickRing(self.ring_top)]),
            Pi1Set::new(vec![ElementarySet::ThickRing(self.ring_bottom)]),
            self.annulus.clone(),
        ])
    }
}

/// None when the rotational box is improper for the bounding cone.
pub fn ring_approx_footprint(t: &TBox, fb: &FaceBox, robot: &RingRobot) -> Option<RingApproxFp> {
    let bc = rotbox_cone(fb, t.center);
    if bc.capped {
        return None;
    }
    let theta = bc.cone.half_angle;
    let axis = bc.cone.axis;
    let m = t.center;
    let rb = t.radius();
    let r0 = robot.radius;
    let slab = r0 * theta.sin();
    let rim = r0 * theta.cos();
    let c1 = EmbeddedCircle { center: m + axis * slab, normal: axis, radius: rim };
    let c2 = EmbeddedCircle { center: m - axis * slab, normal: axis, radius: rim };
    let cone_half = std::f64::consts::FRAC_PI_2 - theta;
    let mut annulus = Pi1Set::new(vec![
        ElementarySet::Ball(Ball { center: m, radius: r0 + rb }),
        ElementarySet::BallComplement(Ball { center: m, radius: (r0 - rb).max(0.0) }),
        ElementarySet::RoundConeComplement(RoundCone { apex: m, axis, half_angle: cone_half }),
        ElementarySet::RoundConeComplement(RoundCone { apex: m, axis: -axis, half_angle: cone_half }),
    ]);
    let mut top = ThickRing { circle: c1, thickness: rb };
    let mut bottom = ThickRing { circle: c2, thickness: rb };
    if robot.thickness > 0.0 {
        let tau = robot.thickness;
        annulus = annulus.expand_tau(tau);
        top.thickness += tau;
        bottom.thickness += tau;
    }
    Some(RingApproxFp { ring_top: top, ring_bottom: bottom, annulus })
}

/// Conservative: does the feature meet the approximate box footprint? The
/// thick rings use exact separations (with the center-distance prefilter);
/// the annulus term uses the certified interval tests.
pub fn ring_box_feature_test(t: &TBox, r: &RotBox, f: &Feature, robot: &RingRobot) -> bool {
    robot.box_tester(t, r).hits(f)
}

struct RingBoxTester {
    fp: RingApproxFp,
    prefilter: OuterBallTest,
}

impl BoxFeatureTest for RingBoxTester {
    fn hits(&self, f: &Feature) -> bool {
        if !self.prefilter.hits(f) {
            return false;
        }
        for ring in [&self.fp.ring_top, &self.fp.ring_bottom] {
            let d = sep_point_feature(ring.circle.center, f);
            let slack = 1e-9 * (1.0 + ring.circle.radius + ring.thickness);
            if d > ring.circle.radius + ring.thickness + slack {
                continue; // Sep(C,f) >= d - radius > thickness
            }
            if sep_circle_feature(&ring.circle, f) <= ring.thickness + slack {
                return true;
            }
        }
        pi1_intersects_feature(&self.fp.annulus, f)
    }
}

impl Robot for RingRobot {
    fn max_reach(&self) -> f64 {
        self.radius + self.thickness
    }

    fn thickness(&self) -> f64 {
        self.thickness
    }

    fn rotational_scale(&self) -> f64 {
        self.radius
    }

    fn footprint_sep_feature(&self, pos: Vec3, dir: Vec3, f: &Feature) -> f64 {
        sep_circle_feature(&ring_footprint(pos, dir, self.radius), f)
    }

    fn footprint_probe(&self, pos: Vec3, dir: Vec3) -> Vec3 {
        ring_footprint(pos, dir, self.radius).point_at(0.0)
    }

    fn box_tester(&self, t: &TBox, r: &RotBox) -> Box<dyn BoxFeatureTest + '_> {
        let prefilter = OuterBallTest { center: t.center, radius: self.max_reach() + t.radius() };
        match crate::rod::proper_face_box(r).and_then(|fb| ring_approx_footprint(t, fb, self)) {
            Some(fp) => Box::new(RingBoxTester { fp, prefilter }),
            None => Box::new(prefilter),
        }
    }

    fn approx_footprint(&self, t: &TBox, r: &RotBox) -> Option<Sigma2Set> {
        crate::rod::proper_face_box(r)
            .and_then(|fb| ring_approx_footprint(t, fb, self))
            .map(|fp| fp.as_sigma2())
    }

    fn footprint_polyline(&self, pos: Vec3, dir: Vec3) -> Vec<Vec3> {
        let c = ring_footprint(pos, dir, self.radius);
        (0..=64)
            .map(|i| c.point_at(std::f64::consts::TAU * i as f64 / 64.0))
            .collect()
    }
}
