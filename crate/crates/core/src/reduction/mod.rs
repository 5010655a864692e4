//! Hyperplane reduction of linking numbers.
//!
//! For a curve `γ₁` lying in the plane `x₃ = 0` and a second curve `γ₂`
//! crossing it transversally at points `p_i` with orientation signs `o(p_i)`,
//!
//! `lk(γ₁, γ₂) = Σ_i o(p_i) · w(γ₁, p_i)`.
//!
//! More generally, if `M` lies in a coordinate hyperplane `H` and `N` meets
//! `H` transversally in `N' = ⋃ N'_i`, then `lk(M, N) = Σ_i ε_i lk_H(M, N'_i)`
//! with the component signs `ε_i` computed by [`slice_surface`].

mod homotopy;
mod intersections;
mod plane;
mod slice;

pub use homotopy::{homotopy_invariance_check, HomotopyReport, HomotopySample};
pub use intersections::{
    find_plane_intersections, IntersectionPoint, BRACKET_SAMPLES, GRAZING_TOL, ROOT_TOL,
    TRANSVERSALITY_TOL,
};
pub use plane::{align_plane_to_x3, fit_plane, PlaneFit};
pub use slice::{slice_surface, SliceCurve, DEFAULT_GRID, SLICE_TRANSVERSALITY_TOL};

use crate::error::{Error, Result};
use crate::geometry::{check_disjoint, ClosedCurve, Hyperplane, PatchManifold, Point};
use crate::invariants::{
    degree_linking, degree_linking_at, winding_number, winding_number_at, LinkingResult,
    QuadratureConfig,
};
use crate::quadrature::QuadratureResult;

/// Objects must lie in `H` to this accuracy.
pub const IN_HYPERPLANE_TOL: f64 = 1e-9;
const PLANARITY_SAMPLES: usize = 1024;

/// One term `o(p) · w(γ₁, p)` of the reduced sum.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingTerm {
    pub point: IntersectionPoint,
    pub winding: LinkingResult,
}

/// Reduced linking number of a planar curve and a transverse curve, with the
/// individual terms of the sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveReduction {
    pub result: LinkingResult,
    pub terms: Vec<WindingTerm>,
}

/// `Σ o(p_i) · w(planar, p_i)` for `planar` in the plane `x₃ = 0` of `R^3`.
pub fn reduced_linking_curves(
    planar: &ClosedCurve,
    transverse: &ClosedCurve,
    config: &QuadratureConfig,
) -> Result<LinkingResult> {
    reduce_curves(planar, transverse, &Hyperplane::coordinate(2, 0.0), config).map(|r| r.result)
}

/// Reduction through an arbitrary coordinate hyperplane of `R^3`, keeping the
/// per-crossing terms.
pub fn reduce_curves(
    planar: &ClosedCurve,
    transverse: &ClosedCurve,
    h: &Hyperplane,
    config: &QuadratureConfig,
) -> Result<CurveReduction> {
    for c in [planar, transverse] {
        if c.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: c.dim(),
            });
        }
    }
    let (axis, _) = h.as_coordinate()?;
    let deviation = curve_deviation(planar, h);
    if deviation > IN_HYPERPLANE_TOL {
        return Err(Error::NotInHyperplane { deviation });
    }
    let flat = planar.map_affine(&h.chart(3)?)?;
    let orientation = slice::chart_orientation(axis, 3) as f64;
    let mut terms = Vec::new();
    for point in find_plane_intersections(transverse, h)? {
        let p = Point::from_column_slice(&point.location);
        let winding = winding_number(&flat, &p, config)?;
        terms.push(WindingTerm { point, winding });
    }
    let raw = orientation
        * terms
            .iter()
            .map(|t| t.point.sign as f64 * t.winding.raw)
            .sum::<f64>();
    let quadrature = combine(terms.iter().map(|t| &t.winding.quadrature), raw);
    Ok(CurveReduction {
        result: LinkingResult::from_raw(raw, quadrature),
        terms,
    })
}

fn curve_deviation(c: &ClosedCurve, h: &Hyperplane) -> f64 {
    (0..PLANARITY_SAMPLES)
        .map(|k| h.deviation(&c.eval(k as f64 / PLANARITY_SAMPLES as f64)))
        .fold(0.0, f64::max)
}

/// Largest distance of `m` from `h` over a sampling of its chart.
pub fn manifold_deviation(m: &PatchManifold, h: &Hyperplane) -> f64 {
    let per_dim = if m.intrinsic_dim() == 1 { 1024 } else { 64 };
    m.sample_points(per_dim)
        .iter()
        .map(|x| h.deviation(x))
        .fold(0.0, f64::max)
}

/// Sums error estimates and evaluation counts of independent integrals.
fn combine<'a>(parts: impl Iterator<Item = &'a QuadratureResult>, value: f64) -> QuadratureResult {
    let mut total = QuadratureResult::single(value, Vec::new(), 0);
    for q in parts {
        total.error_estimate += q.error_estimate;
        total.evaluations += q.evaluations;
        total.refinements = total.refinements.max(q.refinements);
        if q.nodes_per_dim.iter().sum::<usize>() > total.nodes_per_dim.iter().sum::<usize>() {
            total.nodes_per_dim = q.nodes_per_dim.clone();
        }
    }
    total
}

/// One term `ε_i · lk_H(M, N'_i)` of the general reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceTerm {
    pub sign: i32,
    pub linking: LinkingResult,
}

/// `Σ ε_i lk_H(M, N'_i)`, evaluated in the coordinates of `H`.
///
/// `m` is given in ambient coordinates and must lie in `h`; the slices are
/// already in hyperplane coordinates, as produced by [`slice_surface`].
pub fn reduced_linking_general(
    m: &PatchManifold,
    h: &Hyperplane,
    slices: &[SliceCurve],
    config: &QuadratureConfig,
) -> Result<LinkingResult> {
    reduce_general_terms(m, h, slices, config).map(|(r, _)| r)
}

/// [`reduced_linking_general`] together with the per-component terms.
pub fn reduce_general_terms(
    m: &PatchManifold,
    h: &Hyperplane,
    slices: &[SliceCurve],
    config: &QuadratureConfig,
) -> Result<(LinkingResult, Vec<SliceTerm>)> {
    let d = m.ambient_dim();
    h.check_ambient(d)?;
    let deviation = manifold_deviation(m, h);
    if deviation > IN_HYPERPLANE_TOL {
        return Err(Error::NotInHyperplane { deviation });
    }
    let reduced = m.map_affine(&h.chart(d)?)?;
    let mut terms = Vec::with_capacity(slices.len());
    for s in slices {
        if s.curve.dim() != reduced.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: reduced.ambient_dim(),
                found: s.curve.dim(),
            });
        }
        let component: PatchManifold = s.curve.clone().into();
        check_disjoint(&reduced, &component)?;
        terms.push(SliceTerm {
            sign: s.sign,
            linking: degree_linking(&reduced, &component, config)?,
        });
    }
    let raw = terms
        .iter()
        .map(|t| t.sign as f64 * t.linking.raw)
        .sum::<f64>();
    let quadrature = combine(terms.iter().map(|t| &t.linking.quadrature), raw);
    Ok((LinkingResult::from_raw(raw, quadrature), terms))
}

/// Point reduction at a fixed node count `n` for every winding integral.
/// Returns the value and the number of integrand evaluations.
pub fn reduced_linking_curves_at(
    planar: &ClosedCurve,
    transverse: &ClosedCurve,
    h: &Hyperplane,
    n: usize,
) -> Result<(f64, u64)> {
    let (axis, _) = h.as_coordinate()?;
    let deviation = curve_deviation(planar, h);
    if deviation > IN_HYPERPLANE_TOL {
        return Err(Error::NotInHyperplane { deviation });
    }
    let flat = planar.map_affine(&h.chart(3)?)?;
    let mut total = 0.0;
    let mut evaluations = 0;
    for point in find_plane_intersections(transverse, h)? {
        let p = Point::from_column_slice(&point.location);
        let (w, e) = winding_number_at(&flat, &p, n)?;
        total += point.sign as f64 * w;
        evaluations += e;
    }
    Ok((slice::chart_orientation(axis, 3) as f64 * total, evaluations))
}

/// Slice reduction at `n` nodes per chart coordinate of every reduced
/// integral.
pub fn reduced_linking_general_at(
    m: &PatchManifold,
    h: &Hyperplane,
    slices: &[SliceCurve],
    n: usize,
) -> Result<(f64, u64)> {
    let d = m.ambient_dim();
    h.check_ambient(d)?;
    let deviation = manifold_deviation(m, h);
    if deviation > IN_HYPERPLANE_TOL {
        return Err(Error::NotInHyperplane { deviation });
    }
    let reduced = m.map_affine(&h.chart(d)?)?;
    let dims = reduced.intrinsic_dim() + 1;
    let mut total = 0.0;
    let mut evaluations = 0;
    for s in slices {
        let (v, e) = degree_linking_at(&reduced, &s.curve.clone().into(), &vec![n; dims])?;
        total += s.sign as f64 * v;
        evaluations += e;
    }
    Ok((total, evaluations))
}

/// Slices `n` by `h` and evaluates the reduced linking number with `m`.
pub fn reduce_pair(
    m: &PatchManifold,
    n: &PatchManifold,
    h: &Hyperplane,
    grid: usize,
    config: &QuadratureConfig,
) -> Result<LinkingResult> {
    match (m.as_curve(), n.as_curve()) {
        (Some(a), Some(b)) if m.ambient_dim() == 3 => {
            reduce_curves(a, b, h, config).map(|r| r.result)
        }
        _ => {
            let slices = slice_surface(n, h, grid)?;
            reduced_linking_general(m, h, &slices, config)
        }
    }
}
