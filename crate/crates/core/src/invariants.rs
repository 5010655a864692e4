//! Linking numbers and winding numbers as normalized integrals.
//!
//! One sign convention is used throughout: the relative position is
//! `r = x - y` for `x` on the first object and `y` on the second, and the
//! determinant columns are `r`, then the first object's chart partials, then
//! the second object's. With this convention the Gauss integral in `R^3` is
//! the specialization `m = n = 1` of [`degree_linking`], and it agrees with the
//! right-handed crossing count.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::geometry::{check_disjoint, ClosedCurve, PatchManifold, Point};
use crate::quadrature::{compensated_sum, refine_with, QuadratureResult, Rule};

/// A result is certified when it is this close to an integer.
pub const CERTIFY_TOL: f64 = 1e-3;
/// Points closer than this to a curve have no winding number.
pub const POINT_ON_CURVE_TOL: f64 = 1e-6;

/// Node-count policy for refined integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub tol: f64,
    pub start_nodes: usize,
    pub max_nodes: usize,
}

impl QuadratureConfig {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            start_nodes: 16,
            max_nodes: 4096,
        }
    }
}

/// A real-valued invariant together with its nearest integer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkingResult {
    pub raw: f64,
    pub rounded: i64,
    pub residual: f64,
    pub quadrature: QuadratureResult,
}

impl LinkingResult {
    pub fn new(quadrature: QuadratureResult) -> Self {
        Self::from_raw(quadrature.value, quadrature)
    }

    pub fn from_raw(raw: f64, quadrature: QuadratureResult) -> Self {
        let rounded = raw.round();
        Self {
            raw,
            rounded: rounded as i64,
            residual: (raw - rounded).abs(),
            quadrature,
        }
    }

    pub fn certified(&self) -> bool {
        self.residual < CERTIFY_TOL
    }
}

/// `vol S^p = 2 π^{(p+1)/2} / Γ((p+1)/2)`.
pub fn sphere_volume(p: u32) -> f64 {
    let half = (p as f64 + 1.0) / 2.0;
    2.0 * (half * PI.ln() - ln_gamma(half)).exp()
}

/// Values of a manifold and its Jacobian on the nodes of a tensor rule.
struct NodeSamples {
    dim: usize,
    cols: usize,
    weights: Vec<f64>,
    points: Vec<f64>,
    jacobians: Vec<f64>,
}

impl NodeSamples {
    fn new(m: &PatchManifold, nodes: &[usize]) -> Self {
        let dim = m.ambient_dim();
        let cols = m.intrinsic_dim();
        let rules: Vec<_> = m
            .periodic()
            .iter()
            .zip(nodes)
            .map(|(&p, &n)| Rule::for_axis(p, n))
            .collect();
        let count: usize = nodes.iter().product();
        let mut weights = Vec::with_capacity(count);
        let mut points = vec![0.0; count * dim];
        let mut jacobians = vec![0.0; count * dim * cols];
        let mut u = vec![0.0; cols];
        for idx in 0..count {
            let mut rest = idx;
            let mut w = 1.0;
            for (j, rule) in rules.iter().enumerate() {
                let k = rest % rule.len();
                rest /= rule.len();
                u[j] = rule.nodes[k];
                w *= rule.weights[k];
            }
            weights.push(w);
            m.eval_into(&u, &mut points[idx * dim..(idx + 1) * dim]);
            m.jacobian_into(&u, &mut jacobians[idx * dim * cols..(idx + 1) * dim * cols]);
        }
        Self {
            dim,
            cols,
            weights,
            points,
            jacobians,
        }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn jacobian(&self, i: usize) -> &[f64] {
        let size = self.dim * self.cols;
        &self.jacobians[i * size..(i + 1) * size]
    }
}

const MAX_AMBIENT: usize = 8;

/// Determinant of a small column-major square matrix by partial pivoting.
fn determinant(a: &mut [f64; MAX_AMBIENT * MAX_AMBIENT], n: usize) -> f64 {
    match n {
        2 => return a[0] * a[3] - a[2] * a[1],
        3 => {
            return a[0] * (a[4] * a[8] - a[7] * a[5]) - a[3] * (a[1] * a[8] - a[7] * a[2])
                + a[6] * (a[1] * a[5] - a[4] * a[2])
        }
        _ => {}
    }
    let at = |r: usize, c: usize| r + c * n;
    let mut det = 1.0;
    for c in 0..n {
        let pivot = (c..n)
            .max_by(|&x, &y| a[at(x, c)].abs().total_cmp(&a[at(y, c)].abs()))
            .unwrap();
        if a[at(pivot, c)] == 0.0 {
            return 0.0;
        }
        if pivot != c {
            for k in 0..n {
                a.swap(at(pivot, k), at(c, k));
            }
            det = -det;
        }
        let p = a[at(c, c)];
        det *= p;
        for r in c + 1..n {
            let factor = a[at(r, c)] / p;
            if factor != 0.0 {
                for k in c + 1..n {
                    a[at(r, k)] -= factor * a[at(c, k)];
                }
            }
        }
    }
    det
}

/// `Σ w_x w_y det(x - y, ∂x, ∂y) / |x - y|^d` over all node pairs.
fn pair_sum(first: &NodeSamples, second: &NodeSamples) -> Result<f64> {
    let d = first.dim;
    let power = d as i32;
    let rows: Vec<Result<f64>> = (0..first.len())
        .into_par_iter()
        .map(|i| {
            let x = first.point(i);
            let jx = first.jacobian(i);
            let mut terms = Vec::with_capacity(second.len());
            let mut m = [0.0; MAX_AMBIENT * MAX_AMBIENT];
            for j in 0..second.len() {
                let y = second.point(j);
                let mut r2 = 0.0;
                for c in 0..d {
                    let r = x[c] - y[c];
                    m[c] = r;
                    r2 += r * r;
                }
                m[d..d + jx.len()].copy_from_slice(jx);
                let jy = second.jacobian(j);
                m[d + jx.len()..d + jx.len() + jy.len()].copy_from_slice(jy);
                let value = determinant(&mut m, d) / r2.sqrt().powi(power);
                if !value.is_finite() {
                    return Err(Error::NonFiniteSample {
                        node: vec![i as f64, j as f64],
                    });
                }
                terms.push(first.weights[i] * second.weights[j] * value);
            }
            Ok(compensated_sum(terms))
        })
        .collect();
    Ok(compensated_sum(rows.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Degree-integral linking number at a fixed node count per chart
/// coordinate (`nodes` lists the first manifold's coordinates, then the
/// second's). Returns the value and the number of integrand evaluations.
pub fn degree_linking_at(
    first: &PatchManifold,
    second: &PatchManifold,
    nodes: &[usize],
) -> Result<(f64, u64)> {
    let m = first.intrinsic_dim();
    let d = first.ambient_dim();
    check_dimensions(first, second)?;
    if nodes.len() != m + second.intrinsic_dim() {
        return Err(Error::DimensionMismatch {
            expected: m + second.intrinsic_dim(),
            found: nodes.len(),
        });
    }
    let a = NodeSamples::new(first, &nodes[..m]);
    let b = NodeSamples::new(second, &nodes[m..]);
    let total = pair_sum(&a, &b)?;
    let evaluations = (a.len() * b.len()) as u64;
    Ok((total / sphere_volume(d as u32 - 1), evaluations))
}

fn check_dimensions(first: &PatchManifold, second: &PatchManifold) -> Result<()> {
    let d = first.ambient_dim();
    if second.ambient_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: second.ambient_dim(),
        });
    }
    let expected = first.intrinsic_dim() + second.intrinsic_dim() + 1;
    if d != expected {
        return Err(Error::DimensionMismatch { expected, found: d });
    }
    if d > MAX_AMBIENT {
        return Err(Error::InvalidInput(format!(
            "ambient dimension {d} exceeds the supported maximum {MAX_AMBIENT}"
        )));
    }
    Ok(())
}

/// Linking number of closed oriented `M^m`, `N^n` in `R^{m+n+1}`:
///
/// `lk(M, N) = (1 / vol S^p) ∫_{M×N} det(r, ∂x/∂s, ∂y/∂t) / |r|^{p+1} ds dt`,
/// `r = x - y`, `p = m + n`.
pub fn degree_linking(
    first: &PatchManifold,
    second: &PatchManifold,
    config: &QuadratureConfig,
) -> Result<LinkingResult> {
    check_dimensions(first, second)?;
    check_disjoint(first, second)?;
    let dims = first.intrinsic_dim() + second.intrinsic_dim();
    let q = refine_with(dims, config.tol, config.start_nodes, config.max_nodes, |nodes| {
        degree_linking_at(first, second, nodes)
    })?;
    Ok(LinkingResult::new(q))
}

/// Gauss integral at `n × n` periodic trapezoid nodes.
pub fn gauss_linking_at(first: &ClosedCurve, second: &ClosedCurve, n: usize) -> Result<(f64, u64)> {
    check_curves_r3(first, second)?;
    let a: PatchManifold = first.clone().into();
    let b: PatchManifold = second.clone().into();
    degree_linking_at(&a, &b, &[n, n])
}

/// Gauss linking integral of two closed curves in `R^3`,
/// `(1/4π) ∬ det(γ₁ - γ₂, γ₁', γ₂') / |γ₁ - γ₂|³ ds dt`.
pub fn gauss_linking_r3(
    first: &ClosedCurve,
    second: &ClosedCurve,
    config: &QuadratureConfig,
) -> Result<LinkingResult> {
    check_curves_r3(first, second)?;
    degree_linking(&first.clone().into(), &second.clone().into(), config)
}

fn check_curves_r3(first: &ClosedCurve, second: &ClosedCurve) -> Result<()> {
    for c in [first, second] {
        if c.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: c.dim(),
            });
        }
    }
    Ok(())
}

/// Winding-number integral at `n` periodic nodes.
pub fn winding_number_at(curve: &ClosedCurve, p: &Point, n: usize) -> Result<(f64, u64)> {
    check_planar(curve, p)?;
    let rule = Rule::periodic_trapezoid(n);
    let mut x = [0.0; 2];
    let mut v = [0.0; 2];
    let mut terms = Vec::with_capacity(n);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        curve.eval_into(t, &mut x);
        curve.derivative_into(t, &mut v);
        let (rx, ry) = (x[0] - p[0], x[1] - p[1]);
        let value = (rx * v[1] - ry * v[0]) / (rx * rx + ry * ry);
        if !value.is_finite() {
            return Err(Error::NonFiniteSample { node: vec![t] });
        }
        terms.push(w * value);
    }
    Ok((compensated_sum(terms) / TAU, n as u64))
}

/// `w(γ, p) = (1/2π) ∮ det(γ - p, γ') / |γ - p|² ds`, counterclockwise
/// positive.
pub fn winding_number(
    curve: &ClosedCurve,
    p: &Point,
    config: &QuadratureConfig,
) -> Result<LinkingResult> {
    check_planar(curve, p)?;
    let samples = 1024;
    let distance = (0..samples)
        .map(|k| (curve.eval(k as f64 / samples as f64) - p).norm())
        .fold(f64::INFINITY, f64::min);
    if !(distance > POINT_ON_CURVE_TOL) {
        return Err(Error::PointOnCurve { distance });
    }
    let q = refine_with(1, config.tol, config.start_nodes, config.max_nodes, |nodes| {
        winding_number_at(curve, p, nodes[0])
    })?;
    Ok(LinkingResult::new(q))
}

fn check_planar(curve: &ClosedCurve, p: &Point) -> Result<()> {
    if curve.dim() != 2 || p.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if curve.dim() != 2 { curve.dim() } else { p.len() },
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, unit};

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(0) - 2.0).abs() < 1e-14);
        assert!((sphere_volume(1) - TAU).abs() < 1e-14);
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-13);
        // vol S^4 = 8π²/3.
        assert!((sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_matches_nalgebra() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in 2..=6 {
            let m = nalgebra::DMatrix::from_fn(n, n, |_, _| next());
            let mut buf = [0.0; MAX_AMBIENT * MAX_AMBIENT];
            buf[..n * n].copy_from_slice(m.as_slice());
            assert!((determinant(&mut buf, n) - m.determinant()).abs() < 1e-13);
        }
    }

    fn circle2(center: [f64; 2], radius: f64, turns: u32) -> ClosedCurve {
        ClosedCurve::circle_turns(point(&center), unit(2, 0) * radius, unit(2, 1) * radius, turns)
            .unwrap()
    }

    #[test]
    fn winding_of_unit_circle() {
        let cfg = QuadratureConfig::default();
        let c = circle2([0.0, 0.0], 1.0, 1);
        let w = winding_number(&c, &point(&[0.0, 0.0]), &cfg).unwrap();
        assert_eq!(w.rounded, 1);
        assert!(w.residual < 1e-12);
        let outside = winding_number(&c, &point(&[2.0, 0.0]), &cfg).unwrap();
        assert_eq!(outside.rounded, 0);
        let twice = winding_number(&circle2([0.0, 0.0], 1.0, 2), &point(&[0.1, 0.2]), &cfg).unwrap();
        assert_eq!(twice.rounded, 2);
        let backwards = winding_number(&c.reversed(), &point(&[0.0, 0.0]), &cfg).unwrap();
        assert_eq!(backwards.rounded, -1);
    }

    #[test]
    fn winding_rejects_point_on_curve() {
        let c = circle2([0.0, 0.0], 1.0, 1);
        assert!(matches!(
            winding_number(&c, &point(&[1.0, 0.0]), &QuadratureConfig::default()),
            Err(Error::PointOnCurve { .. })
        ));
    }

    #[test]
    fn rejects_wrong_dimensions() {
        let c = circle2([0.0, 0.0], 1.0, 1);
        let m: PatchManifold = c.clone().into();
        assert!(matches!(
            degree_linking(&m, &m, &QuadratureConfig::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(gauss_linking_r3(&c, &c, &QuadratureConfig::default()).is_err());
    }

    fn hopf() -> (ClosedCurve, ClosedCurve) {
        let g1 = ClosedCurve::circle(point(&[0.0, 0.0, 0.0]), unit(3, 0), unit(3, 1)).unwrap();
        let g2 = ClosedCurve::circle(unit(3, 0), unit(3, 0), unit(3, 2)).unwrap();
        (g1, g2)
    }

    #[test]
    fn hopf_link_has_linking_number_minus_one() {
        let (g1, g2) = hopf();
        let lk = gauss_linking_r3(&g1, &g2, &QuadratureConfig::default()).unwrap();
        assert_eq!(lk.rounded, -1);
        assert!(lk.residual < 1e-8, "{lk:?}");
        let swapped = gauss_linking_r3(&g2, &g1, &QuadratureConfig::default()).unwrap();
        assert_eq!(swapped.rounded, -1);
        let reversed = gauss_linking_r3(&g1.reversed(), &g2, &QuadratureConfig::default()).unwrap();
        assert_eq!(reversed.rounded, 1);
    }

    #[test]
    fn separated_circles_do_not_link() {
        let (g1, _) = hopf();
        let far = ClosedCurve::circle(point(&[4.0, 0.0, 0.0]), unit(3, 0), unit(3, 2)).unwrap();
        let lk = gauss_linking_r3(&g1, &far, &QuadratureConfig::default()).unwrap();
        assert_eq!(lk.rounded, 0);
        assert!(lk.residual < 1e-8);
    }

    #[test]
    fn touching_curves_are_rejected() {
        let (g1, _) = hopf();
        let touching = ClosedCurve::circle(point(&[2.0, 0.0, 0.0]), unit(3, 0), unit(3, 2)).unwrap();
        assert!(matches!(
            gauss_linking_r3(&g1, &touching, &QuadratureConfig::default()),
            Err(Error::DisjointnessViolation { .. })
        ));
    }

    #[test]
    fn circle_links_sphere_in_four_space() {
        let sphere = PatchManifold::sphere(
            point(&[0.0; 4]),
            [unit(4, 0), unit(4, 2), unit(4, 1)],
        )
        .unwrap();
        let circle: PatchManifold = ClosedCurve::circle(unit(4, 0), unit(4, 0), unit(4, 3))
            .unwrap()
            .into();
        let cfg = QuadratureConfig::new(1e-6).with_max_nodes(256);
        let lk = degree_linking(&circle, &sphere, &cfg).unwrap();
        assert_eq!(lk.rounded.abs(), 1, "{lk:?}");
        assert!(lk.residual < 1e-6);
    }
}
