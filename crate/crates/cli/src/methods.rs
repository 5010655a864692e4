use std::time::Instant;

use linkproj::geometry::{ClosedCurve, Hyperplane, PatchManifold};
use linkproj::invariants::{
    degree_linking, degree_linking_at, gauss_linking_at, gauss_linking_r3, LinkingResult,
    QuadratureConfig, CERTIFY_TOL,
};
use linkproj::oracles::crossing_sign_linking_retry;
use linkproj::reduction::{
    align_plane_to_x3, fit_plane, manifold_deviation, reduce_curves, reduce_general_terms,
    reduced_linking_curves_at, reduced_linking_general_at, slice_surface, SliceCurve,
    IN_HYPERPLANE_TOL,
};
use linkproj::Error;
use serde::Serialize;

use crate::args::CommonArgs;
use crate::error::hint_for;

/// Polyline resolution for the crossing count.
pub const CROSSING_VERTICES: usize = 1024;
/// Default node cap for integrals over three or more dimensions.
pub const HIGH_DIM_MAX_NODES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Gauss,
    Degree,
    Reduce,
    Crossings,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Gauss, Kind::Degree, Kind::Reduce, Kind::Crossings];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Gauss => "gauss",
            Kind::Degree => "degree",
            Kind::Reduce => "reduce",
            Kind::Crossings => "crossings",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotApplicable,
    Failed,
}

/// Outcome of one method on one pair.
#[derive(Debug, Clone, Serialize)]
pub struct MethodReport {
    pub method: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounded: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
    #[serde(skip)]
    pub wall_ms: f64,
}

impl MethodReport {
    fn blank(kind: Kind, status: Status) -> Self {
        Self {
            method: kind.name(),
            status,
            raw: None,
            rounded: None,
            residual: None,
            nodes: Vec::new(),
            evaluations: None,
            detail: None,
            warning: None,
            error: None,
            hint: None,
            wall_ms: 0.0,
        }
    }

    pub fn not_applicable(kind: Kind, why: impl Into<String>) -> Self {
        Self {
            detail: Some(why.into()),
            ..Self::blank(kind, Status::NotApplicable)
        }
    }

    fn failed(kind: Kind, e: &Error) -> Self {
        Self {
            error: Some(e.to_string()),
            hint: hint_for(e),
            ..Self::blank(kind, Status::Failed)
        }
    }

    fn from_linking(kind: Kind, r: &LinkingResult) -> Self {
        Self {
            raw: Some(r.raw),
            rounded: Some(r.rounded),
            residual: Some(r.residual),
            nodes: r.quadrature.nodes_per_dim.clone(),
            evaluations: Some(r.quadrature.evaluations),
            ..Self::blank(kind, Status::Ok)
        }
    }

    pub fn certified(&self) -> bool {
        self.status == Status::Ok && self.residual.is_some_and(|r| r < CERTIFY_TOL)
    }
}

/// Numerical settings shared by every method.
#[derive(Debug, Clone)]
pub struct Settings {
    pub tol: f64,
    pub max_nodes: Option<usize>,
    pub grid: usize,
    pub seed: u64,
}

impl From<&CommonArgs> for Settings {
    fn from(a: &CommonArgs) -> Self {
        Self {
            tol: a.tol,
            max_nodes: a.max_nodes,
            grid: a.grid,
            seed: a.seed,
        }
    }
}

impl Settings {
    /// Refinement policy for an integral over `dims` parameters.
    pub fn config(&self, dims: usize) -> QuadratureConfig {
        let cap = if dims >= 3 { HIGH_DIM_MAX_NODES } else { 4096 };
        QuadratureConfig::new(self.tol).with_max_nodes(self.max_nodes.unwrap_or(cap))
    }
}

/// Runs one method on the ordered pair `(a, b)`.
pub fn run(kind: Kind, a: &PatchManifold, b: &PatchManifold, s: &Settings) -> MethodReport {
    let start = Instant::now();
    let mut report = match kind {
        Kind::Gauss => gauss(a, b, s),
        Kind::Degree => degree(a, b, s),
        Kind::Reduce => reduce(a, b, s),
        Kind::Crossings => crossings(a, b, s),
    };
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

fn curves_in_r3<'a>(a: &'a PatchManifold, b: &'a PatchManifold) -> Result<(&'a ClosedCurve, &'a ClosedCurve), String> {
    let d = a.ambient_dim();
    match (a.as_curve(), b.as_curve()) {
        (Some(x), Some(y)) if d == 3 => Ok((x, y)),
        _ if d != 3 => Err(format!("not applicable (d={d})")),
        _ => Err("not applicable (needs two curves)".into()),
    }
}

/// Refined integrals fall back to the best value when the tolerance is not
/// met, with a warning.
fn refined(kind: Kind, result: linkproj::Result<LinkingResult>, tol: f64) -> MethodReport {
    match result {
        Ok(r) => MethodReport::from_linking(kind, &r),
        Err(Error::ToleranceNotReached { best }) => {
            let r = LinkingResult::new(best);
            MethodReport {
                warning: Some(format!(
                    "tolerance {tol:e} not reached (last delta {:.1e} at {:?} nodes); raise --max-nodes or loosen --tol",
                    r.quadrature.error_estimate, r.quadrature.nodes_per_dim
                )),
                ..MethodReport::from_linking(kind, &r)
            }
        }
        Err(e) => MethodReport::failed(kind, &e),
    }
}

fn gauss(a: &PatchManifold, b: &PatchManifold, s: &Settings) -> MethodReport {
    match curves_in_r3(a, b) {
        Ok((x, y)) => refined(Kind::Gauss, gauss_linking_r3(x, y, &s.config(2)), s.tol),
        Err(why) => MethodReport::not_applicable(Kind::Gauss, why),
    }
}

fn degree(a: &PatchManifold, b: &PatchManifold, s: &Settings) -> MethodReport {
    let dims = a.intrinsic_dim() + b.intrinsic_dim();
    refined(Kind::Degree, degree_linking(a, b, &s.config(dims)), s.tol)
}

fn crossings(a: &PatchManifold, b: &PatchManifold, s: &Settings) -> MethodReport {
    let (x, y) = match curves_in_r3(a, b) {
        Ok(c) => c,
        Err(why) => return MethodReport::not_applicable(Kind::Crossings, why),
    };
    let run = || -> linkproj::Result<MethodReport> {
        let (p, q) = (
            x.sample_polyline(CROSSING_VERTICES)?,
            y.sample_polyline(CROSSING_VERTICES)?,
        );
        let (v, dir) = crossing_sign_linking_retry(&p, &q, s.seed)?;
        Ok(MethodReport {
            raw: Some(v as f64),
            rounded: Some(v),
            residual: Some(0.0),
            nodes: vec![CROSSING_VERTICES, CROSSING_VERTICES],
            detail: Some(format!(
                "viewed along ({:.4}, {:.4}, {:.4})",
                dir[0], dir[1], dir[2]
            )),
            ..MethodReport::blank(Kind::Crossings, Status::Ok)
        })
    };
    run().unwrap_or_else(|e| MethodReport::failed(Kind::Crossings, &e))
}

/// How a pair is brought into reduced position.
pub enum Plan {
    /// A planar curve moved into `x₃ = 0` and the other curve moved along.
    Curves {
        planar: ClosedCurve,
        transverse: ClosedCurve,
        detail: String,
    },
    /// `m` lies in the coordinate hyperplane `h`; `sign` converts
    /// `lk(m, other)` to the requested order.
    Slices {
        m: PatchManifold,
        h: Hyperplane,
        slices: Vec<SliceCurve>,
        sign: f64,
        detail: String,
    },
}

/// Finds a reduction for `(a, b)`. The outer error is numerical, the inner
/// one explains why no reduction applies.
pub fn plan(a: &PatchManifold, b: &PatchManifold, grid: usize) -> linkproj::Result<Result<Plan, String>> {
    if let Ok((x, y)) = curves_in_r3(a, b) {
        return plan_curves(x, y);
    }
    let (m, n) = (a.intrinsic_dim(), b.intrinsic_dim());
    // Swapping the factors changes the sign by (-1)^{mn+1}.
    let swap_sign = if (m * n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    for (inside, other, sign) in [(a, b, 1.0), (b, a, swap_sign)] {
        if other.intrinsic_dim() != 2 {
            continue;
        }
        if let Some(h) = containing_hyperplane(inside) {
            let (axis, value) = h.as_coordinate()?;
            let slices = slice_surface(other, &h, grid)?;
            let detail = format!(
                "hyperplane x{} = {value}, {} slice component(s)",
                axis + 1,
                slices.len()
            );
            return Ok(Ok(Plan::Slices {
                m: inside.clone(),
                h,
                slices,
                sign,
                detail,
            }));
        }
    }
    Ok(Err(
        "not applicable (neither object lies in a coordinate hyperplane met by a surface)".into(),
    ))
}

fn plan_curves(x: &ClosedCurve, y: &ClosedCurve) -> linkproj::Result<Result<Plan, String>> {
    let mut worst: f64 = 0.0;
    for (planar, transverse) in [(x, y), (y, x)] {
        let fit = fit_plane(planar)?;
        if fit.deviation > IN_HYPERPLANE_TOL {
            worst = worst.max(fit.deviation);
            continue;
        }
        let g = align_plane_to_x3(&fit.center, &fit.normal)?.to_affine();
        let detail = format!(
            "plane of the {} curve moved to x3 = 0",
            if std::ptr::eq(planar, x) { "first" } else { "second" }
        );
        // Linking of two curves in R^3 is symmetric, so the order is free.
        return Ok(Ok(Plan::Curves {
            planar: planar.map_affine(&g)?,
            transverse: transverse.map_affine(&g)?,
            detail,
        }));
    }
    Ok(Err(format!(
        "not applicable (neither curve is planar; smallest deviation {worst:.1e})"
    )))
}

fn containing_hyperplane(m: &PatchManifold) -> Option<Hyperplane> {
    let d = m.ambient_dim();
    let origin = m.eval(&vec![0.0; m.intrinsic_dim()]);
    (0..d)
        .map(|k| Hyperplane::coordinate(k, origin[k]))
        .find(|h| manifold_deviation(m, h) <= IN_HYPERPLANE_TOL)
}

fn reduce(a: &PatchManifold, b: &PatchManifold, s: &Settings) -> MethodReport {
    let plan = match plan(a, b, s.grid) {
        Ok(Ok(p)) => p,
        Ok(Err(why)) => return MethodReport::not_applicable(Kind::Reduce, why),
        Err(e) => return MethodReport::failed(Kind::Reduce, &e),
    };
    match plan {
        Plan::Curves {
            planar,
            transverse,
            detail,
        } => {
            let h = Hyperplane::coordinate(2, 0.0);
            let r = reduce_curves(&planar, &transverse, &h, &s.config(1));
            let count = r.as_ref().map(|r| r.terms.len()).unwrap_or(0);
            let mut report = refined(Kind::Reduce, r.map(|r| r.result), s.tol);
            report.detail = Some(format!("{detail}, {count} crossing(s)"));
            report
        }
        Plan::Slices {
            m,
            h,
            slices,
            sign,
            detail,
        } => {
            let r = reduce_general_terms(&m, &h, &slices, &s.config(2)).map(|(r, _)| {
                LinkingResult::from_raw(sign * r.raw, r.quadrature)
            });
            let mut report = refined(Kind::Reduce, r, s.tol);
            report.detail = Some(detail);
            report
        }
    }
}

/// Value and integrand evaluations of `kind` with `n` nodes per dimension.
pub fn fixed_nodes(kind: Kind, a: &PatchManifold, b: &PatchManifold, plan: Option<&Plan>, n: usize) -> linkproj::Result<(f64, u64)> {
    match kind {
        Kind::Gauss => {
            let (x, y) = curves_in_r3(a, b).map_err(Error::InvalidInput)?;
            gauss_linking_at(x, y, n)
        }
        Kind::Degree => {
            let dims = a.intrinsic_dim() + b.intrinsic_dim();
            degree_linking_at(a, b, &vec![n; dims])
        }
        Kind::Reduce => match plan {
            Some(Plan::Curves {
                planar, transverse, ..
            }) => reduced_linking_curves_at(planar, transverse, &Hyperplane::coordinate(2, 0.0), n),
            Some(Plan::Slices {
                m, h, slices, sign, ..
            }) => reduced_linking_general_at(m, h, slices, n).map(|(v, e)| (sign * v, e)),
            None => Err(Error::InvalidInput("no reduction plan".into())),
        },
        Kind::Crossings => Err(Error::InvalidInput(
            "crossing counts have no node schedule".into(),
        )),
    }
}
