//! Common interface the planner uses for either robot: exact footprint
//! separations for clearance, probe points for FREE/STUCK decisions, and
//! per-box conservative feature testers built from approximate footprints.

use crate::geom::{Feature, Sigma2Set};
use crate::s2::RotBox;
use crate::vec3::Vec3;

/// Axis-aligned translational cube of a subdivision box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TBox {
    pub center: Vec3,
    pub half_width: f64,
}

impl TBox {
    /// Center-to-corner distance.
    pub fn radius(&self) -> f64 {
        self.half_width * 3f64.sqrt()
    }

    pub fn width(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn min(&self) -> Vec3 {
        self.center - Vec3 { x: self.half_width, y: self.half_width, z: self.half_width }
    }

    pub fn max(&self) -> Vec3 {
        self.center + Vec3 { x: self.half_width, y: self.half_width, z: self.half_width }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        (p.x - self.center.x).abs() <= self.half_width + 1e-12
            && (p.y - self.center.y).abs() <= self.half_width + 1e-12
            && (p.z - self.center.z).abs() <= self.half_width + 1e-12
    }

    pub fn shrunk(&self, sigma: f64) -> TBox {
        TBox { center: self.center, half_width: self.half_width / sigma }
    }
}

/// Conservative per-box feature test: `hits` may over-report but returns
/// false only when no configuration in the box can touch the feature.
pub trait BoxFeatureTest {
    fn hits(&self, f: &Feature) -> bool;
}

pub trait Robot {
    /// Largest distance from the position to any footprint point (incl. thickness).
    fn max_reach(&self) -> f64;

    fn thickness(&self) -> f64;

    /// Characteristic footprint length scaling rotational widths (r0).
    fn rotational_scale(&self) -> f64;

    /// Exact separation between the central (zero-thickness) footprint at
    /// (pos, dir) and a feature. `dir` is the lifted unit direction.
    fn footprint_sep_feature(&self, pos: Vec3, dir: Vec3, f: &Feature) -> f64;

    /// A point guaranteed to lie on the central footprint.
    fn footprint_probe(&self, pos: Vec3, dir: Vec3) -> Vec3;

    /// Build the conservative tester for one subdivision box. Handles
    /// improper rotational parts (whole sphere / full face) by an
    /// orientation-free outer-ball bound.
    fn box_tester(&self, t: &TBox, r: &RotBox) -> Box<dyn BoxFeatureTest + '_>;

    /// The approximate box footprint as a Sigma2 set, when the rotational
    /// part is proper.
    fn approx_footprint(&self, t: &TBox, r: &RotBox) -> Option<Sigma2Set>;

    /// Footprint sampled as a polyline for export (rod: the segment; ring: a
    /// display polygon).
    fn footprint_polyline(&self, pos: Vec3, dir: Vec3) -> Vec<Vec3>;
}

/// Orientation-independent fallback tester: the footprint of any
/// configuration in the box lies inside Ball(center, reach + box radius).
pub struct OuterBallTest {
    pub center: Vec3,
    pub radius: f64,
}

impl BoxFeatureTest for OuterBallTest {
    fn hits(&self, f: &Feature) -> bool {
        crate::geom::sep_point_feature(self.center, f) <= self.radius + 1e-9 * (1.0 + self.radius)
    }
}
