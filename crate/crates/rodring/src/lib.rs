//! Resolution-exact subdivision path planner for a rod and a ring robot
//! moving among polyhedral obstacles. The configuration space is R^3 x S^2;
//! directions live on the square model of the sphere (the boundary of
//! [-1,1]^3), and box classification uses conservative footprint supersets
//! built from an algebra of elementary sets.

pub mod geom;
pub mod io;
pub mod planner;
pub mod quartic;
pub mod ring;
pub mod robot;
pub mod rod;
pub mod scene;
pub mod union_find;
pub mod s2;
pub mod vec3;

pub use vec3::{vec3, Vec3};
