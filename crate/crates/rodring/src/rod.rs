//! Rod robot: a segment of length r0 rotating about one endpoint. The
//! approximate box footprint is a single Pi1 term: an outer ball cut by the
//! four expanded square-cone side half-spaces and a base half-space.

use crate::geom::{
    intersects_feature_conservative, sep_segment_feature, Ball, ElementarySet,
    Feature, HalfSpace, Pi1Set, Sigma2Set,
};
use crate::robot::{BoxFeatureTest, OuterBallTest, Robot, TBox};
use crate::s2::{FaceBox, RotBox};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RodRobot {
    pub length: f64,
    pub thickness: f64,
}

impl RodRobot {
    pub fn new(length: f64) -> RodRobot {
        RodRobot { length, thickness: 0.0 }
    }
}

/// The exact footprint segment: position to position + r0 * dir.
pub fn rod_footprint(pos: Vec3, dir: Vec3, length: f64) -> (Vec3, Vec3) {
    (pos, pos + dir * length)
}

/// Is the rotational box proper for cone-based predicates? Whole-sphere and
/// full-face boxes are not; they stay MIXED until R-split.
pub fn proper_face_box(r: &RotBox) -> Option<&FaceBox> {
    match r {
        RotBox::Face(fb) if fb.width() < 1.5 => Some(fb),
        _ => None,
    }
}

/// Inward side half-spaces of the square cone with apex `apex` over the
/// chart square of `fb` translated to `apex`. Normals are unit length so
/// offsets expand in world units.
fn square_cone_sides(apex: Vec3, fb: &FaceBox) -> [HalfSpace; 4] {
    let corners = fb.corners3();
    let center = fb.center3();
    let mut sides = Vec::with_capacity(4);
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let mut n = a.cross(b);
        if n.dot(center) < 0.0 {
            n = -n;
        }
        let n = n.normalized();
        sides.push(HalfSpace { normal: n, offset: n.dot(apex) });
    }
    [sides[0], sides[1], sides[2], sides[3]]
}

/// Footprint of the box's central position over all directions in the
/// rotational box: Ball(m, r0) cut to the square cone.
pub fn rod_inner_footprint(center: Vec3, fb: &FaceBox, length: f64) -> Pi1Set {
    let mut terms = vec![ElementarySet::Ball(Ball { center, radius: length })];
    for h in square_cone_sides(center, fb) {
        terms.push(ElementarySet::HalfSpace(h));
    }
    Pi1Set::new(terms)
}

/// Approximate box footprint: the outer ball and cone sides expanded by the
/// box radius, cut below by the plane of the translational box's face-side
/// bottom (parallel to the rotational face), all tau-expanded for thickness.
#[derive(Clone, Debug)]
pub struct RodApproxFp {
    pub outer_ball: Ball,
    pub sides: [HalfSpace; 4],
    pub base: HalfSpace,
}

impl RodApproxFp {
    pub fn as_pi1(&self) -> Pi1Set {
        let mut terms = vec![ElementarySet::Ball(self.outer_ball)];
        for h in self.sides {
            terms.push(ElementarySet::HalfSpace(h));
        }
        terms.push(ElementarySet::HalfSpace(self.base));
        Pi1Set::new(terms)
    }

    pub fn as_sigma2(&self) -> Sigma2Set {
        Sigma2Set::new(vec![self.as_pi1()])
    }
}

pub fn rod_approx_footprint(t: &TBox, fb: &FaceBox, robot: &RodRobot) -> RodApproxFp {
    let m = t.center;
    let rb = t.radius();
    let tau = robot.thickness;
    let outer_ball = Ball { center: m, radius: robot.length + rb + tau };
    let raw = square_cone_sides(m, fb);
    let sides = [
        HalfSpace { normal: raw[0].normal, offset: raw[0].offset - rb - tau },
        HalfSpace { normal: raw[1].normal, offset: raw[1].offset - rb - tau },
        HalfSpace { normal: raw[2].normal, offset: raw[2].offset - rb - tau },
        HalfSpace { normal: raw[3].normal, offset: raw[3].offset - rb - tau },
    ];
    // Base plane through the "lower" face of B^t, parallel to the rotational
    // face plane, moved down by the thickness.
    let axis = fb.face.center();
    let base = HalfSpace { normal: axis, offset: axis.dot(m) - t.half_width - tau };
    RodApproxFp { outer_ball, sides, base }
}

/// Conservative: does the feature meet the approximate box footprint?
pub fn rod_box_feature_test(t: &TBox, r: &RotBox, f: &Feature, robot: &RodRobot) -> bool {
    robot.box_tester(t, r).hits(f)
}

struct RodBoxTester {
    set: Sigma2Set,
    prefilter: OuterBallTest,
}

impl BoxFeatureTest for RodBoxTester {
    fn hits(&self, f: &Feature) -> bool {
        self.prefilter.hits(f) && intersects_feature_conservative(&self.set, f)
    }
}

impl Robot for RodRobot {
    fn max_reach(&self) -> f64 {
        self.length + self.thickness
    }

    fn thickness(&self) -> f64 {
        self.thickness
    }

    fn rotational_scale(&self) -> f64 {
        self.length
    }

    fn footprint_sep_feature(&self, pos: Vec3, dir: Vec3, f: &Feature) -> f64 {
        let (a, b) = rod_footprint(pos, dir, self.length);
        sep_segment_feature(a, b, f)
    }

    fn footprint_probe(&self, pos: Vec3, _dir: Vec3) -> Vec3 {
        pos
    }

    fn box_tester(&self, t: &TBox, r: &RotBox) -> Box<dyn BoxFeatureTest + '_> {
        let radius = self.max_reach() + t.radius();
        let prefilter = OuterBallTest { center: t.center, radius };
        match proper_face_box(r) {
            Some(fb) => Box::new(RodBoxTester {
                set: rod_approx_footprint(t, fb, self).as_sigma2(),
                prefilter,
            }),
            None => Box::new(prefilter),
        }
    }

    fn approx_footprint(&self, t: &TBox, r: &RotBox) -> Option<Sigma2Set> {
        proper_face_box(r).map(|fb| rod_approx_footprint(t, fb, self).as_sigma2())
    }

    fn footprint_polyline(&self, pos: Vec3, dir: Vec3) -> Vec<Vec3> {
        let (a, b) = rod_footprint(pos, dir, self.length);
        vec![a, b]
    }
}
