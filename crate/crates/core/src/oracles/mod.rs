//! Integral-free checks: ray-cast winding numbers, crossing counts of
//! projected polylines, and closed forms of the radial integrals behind the
//! hyperplane reduction.

mod crossings;
mod gamma;
mod raycast;

pub use crossings::{
    crossing_sign_linking, crossing_sign_linking_retry, crossings, random_direction, Crossing,
    GENERICITY_TOL, MAX_RETRIES,
};
pub use gamma::{gamma_identity_forms, gamma_identity_lhs, gamma_identity_rhs, iterated_tail_identity};
pub use raycast::{raycast_winding, BOUNDARY_TOL};
