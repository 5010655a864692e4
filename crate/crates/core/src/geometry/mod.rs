//! Curves, parameterized manifolds, hyperplanes, polylines, rigid motions and
//! scenes.

mod affine;
mod curve;
mod hyperplane;
mod patch;
mod polyline;
mod scene;
mod scene_file;
mod spline;

pub use affine::{Affine, Isometry};
pub use curve::{wrap_unit, ClosedCurve, CurveShape, FD_STEP, IMMERSION_TOL};
pub use hyperplane::Hyperplane;
pub use patch::{Degeneracy, PatchManifold, PatchShape};
pub use polyline::Polyline;
pub use scene::{check_disjoint, sampled_distance, Expectation, Scene, SceneObject, DISJOINTNESS_TOL};
pub use scene_file::{
    family_object, load_scene, parse_scene, scene_to_json, ExpectedEntry, ObjectEntry, ObjectKind,
    SceneDocument,
};
pub use spline::PeriodicSpline;

/// Points and vectors of the ambient space.
pub type Point = nalgebra::DVector<f64>;

/// Unit basis vector `e_axis` of `R^dim`.
pub fn unit(dim: usize, axis: usize) -> Point {
    Point::from_fn(dim, |r, _| if r == axis { 1.0 } else { 0.0 })
}

/// Builds a point from a slice.
pub fn point(coords: &[f64]) -> Point {
    Point::from_column_slice(coords)
}
