//! Exact separation primitives between points, segments, triangles and lines.

use crate::vec3::Vec3;

/// Closest point on segment [a,b] to p, as (point, parameter in [0,1]).
pub fn closest_point_segment(p: Vec3, a: Vec3, b: Vec3) -> (Vec3, f64) {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return (a, 0.0);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    (a + ab * t, t)
}

pub fn dist_point_segment(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    closest_point_segment(p, a, b).0.dist(p)
}

/// Closest point on triangle (a,b,c) to p. Ericson, Real-Time Collision
/// Detection, 5.1.5.
pub fn closest_point_triangle(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return a + ab * v;
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return a + ac * w;
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

pub fn dist_point_triangle(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> f64 {
    closest_point_triangle(p, a, b, c).dist(p)
}

/// Closest pair between segments [p1,q1] and [p2,q2]. Ericson 5.1.9.
pub fn closest_segment_segment(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> (Vec3, Vec3) {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_sq();
    let e = d2.norm_sq();
    let f = d2.dot(r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return (p1, p2);
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut sv = if denom != 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut tv = (b * sv + f) / e;
            if tv < 0.0 {
                tv = 0.0;
                sv = (-c / a).clamp(0.0, 1.0);
            } else if tv > 1.0 {
                tv = 1.0;
                sv = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = sv;
            t = tv;
        }
    }
    (p1 + d1 * s, p2 + d2 * t)
}

pub fn dist_segment_segment(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> f64 {
    let (a, b) = closest_segment_segment(p1, q1, p2, q2);
    a.dist(b)
}

/// Distance from a segment to an infinite line (point + unit direction).
pub fn dist_segment_line(a: Vec3, b: Vec3, lp: Vec3, ldir: Vec3) -> f64 {
    let d1 = b - a;
    let r = a - lp;
    let aa = d1.norm_sq();
    let bb = d1.dot(ldir);
    let cc = d1.dot(r);
    let ff = ldir.dot(r);
    if aa <= f64::EPSILON {
        return (r - ldir * ff).norm();
    }
    let denom = aa - bb * bb;
    let s = if denom.abs() > 1e-15 {
        ((bb * ff - cc) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let p = a + d1 * s;
    let w = p - lp;
    (w - ldir * w.dot(ldir)).norm()
}

/// Does segment [a,b] cross the plane of triangle (t0,t1,t2) at a point
/// inside the triangle?
pub fn segment_crosses_triangle(a: Vec3, b: Vec3, t0: Vec3, t1: Vec3, t2: Vec3) -> bool {
    let n = (t1 - t0).cross(t2 - t0);
    let da = n.dot(a - t0);
    let db = n.dot(b - t0);
    if da * db > 0.0 {
        return false;
    }
    let denom = da - db;
    if denom.abs() < 1e-300 {
        // Segment parallel and in-plane; covered by edge distances elsewhere.
        return false;
    }
    let t = da / denom;
    let p = a + (b - a) * t;
    point_in_triangle(p, t0, t1, t2)
}

/// Point known (or assumed) to lie in the triangle's plane.
pub fn point_in_triangle(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> bool {
    let n = (b - a).cross(c - a);
    let c0 = (b - a).cross(p - a).dot(n);
    let c1 = (c - b).cross(p - b).dot(n);
    let c2 = (a - c).cross(p - c).dot(n);
    (c0 >= 0.0 && c1 >= 0.0 && c2 >= 0.0) || (c0 <= 0.0 && c1 <= 0.0 && c2 <= 0.0)
}

/// Exact distance between a segment and a (closed) triangle.
pub fn dist_segment_triangle(a: Vec3, b: Vec3, t0: Vec3, t1: Vec3, t2: Vec3) -> f64 {
    if segment_crosses_triangle(a, b, t0, t1, t2) {
        return 0.0;
    }
    let mut best = dist_point_triangle(a, t0, t1, t2).min(dist_point_triangle(b, t0, t1, t2));
    for (e0, e1) in [(t0, t1), (t1, t2), (t2, t0)] {
        best = best.min(dist_segment_segment(a, b, e0, e1));
    }
    best
}

/// Exact distance between two triangles.
pub fn dist_triangle_triangle(a: [Vec3; 3], b: [Vec3; 3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..3 {
        let e = (a[i], a[(i + 1) % 3]);
        best = best.min(dist_segment_triangle(e.0, e.1, b[0], b[1], b[2]));
        let e = (b[i], b[(i + 1) % 3]);
        best = best.min(dist_segment_triangle(e.0, e.1, a[0], a[1], a[2]));
    }
    best
}
