//! Linking numbers of closed oriented manifolds in Euclidean space.
//!
//! Three independent routes to the same integer:
//!
//! * direct quadrature of the Gauss integral in `R^3` and of the general
//!   degree integral in `R^{m+n+1}` ([`invariants`]);
//! * reduction through a hyperplane containing one of the objects, which
//!   turns the linking integral into a sum of lower-dimensional linking
//!   numbers, down to winding numbers of a planar curve ([`reduction`]);
//! * combinatorial counts on polylines: signed crossings of a projection and
//!   ray-cast winding numbers ([`oracles`]).
//!
//! ```
//! use linkproj::invariants::{gauss_linking_r3, QuadratureConfig};
//! use linkproj::scenes::builtin_scene;
//!
//! let scene = builtin_scene("hopf_r3", &[]).unwrap();
//! let g1 = scene.object("g1").unwrap().manifold.as_curve().unwrap();
//! let g2 = scene.object("g2").unwrap().manifold.as_curve().unwrap();
//! let lk = gauss_linking_r3(g1, g2, &QuadratureConfig::default()).unwrap();
//! assert_eq!(lk.rounded, -1);
//! assert!(lk.certified());
//! ```

pub mod error;
pub mod geometry;
pub mod invariants;
pub mod oracles;
pub mod quadrature;
pub mod reduction;
pub mod scenes;

pub use error::{Error, Result};
