use std::f64::consts::TAU;

use nalgebra::DVector;

use super::affine::Affine;
use super::polyline::Polyline;
use super::spline::PeriodicSpline;
use super::Point;
use crate::error::{Error, Result};

/// Speeds below this are treated as a failure of the immersion condition.
pub const IMMERSION_TOL: f64 = 1e-9;
/// Step for the central difference tangent of sampled curves.
pub const FD_STEP: f64 = 1e-6;

/// Wraps a parameter into `[0, 1)`.
#[inline]
pub fn wrap_unit(t: f64) -> f64 {
    let w = t - t.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Shapes a closed curve can take. Analytic shapes are written in terms of a
/// center and axis vectors so that affine maps act on the data directly.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveShape {
    /// `center + cos(2π k t) u + sin(2π k t) v`, traversed `k = turns` times.
    Circle {
        center: DVector<f64>,
        u: DVector<f64>,
        v: DVector<f64>,
        turns: u32,
    },
    /// Curve on the torus of revolution with the given radii, winding `longitude`
    /// times around the core circle and `meridian` times around the tube.
    TorusKnot {
        center: DVector<f64>,
        frame: [DVector<f64>; 3],
        major: f64,
        minor: f64,
        longitude: u32,
        meridian: u32,
        phase: f64,
    },
    /// Trigonometric polynomial `c + Σ_k cos(2π k t) a_k + sin(2π k t) b_k`.
    Fourier {
        constant: DVector<f64>,
        cos: Vec<DVector<f64>>,
        sin: Vec<DVector<f64>>,
    },
    /// Periodic cubic interpolation of sampled vertices.
    Samples(PeriodicSpline),
}

/// A smooth closed parametric curve `[0,1) -> R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    shape: CurveShape,
}

impl ClosedCurve {
    pub fn new(shape: CurveShape) -> Result<Self> {
        let curve = Self { shape };
        let d = curve.dim();
        if d < 2 {
            return Err(Error::InvalidInput(format!(
                "ambient dimension must be at least 2, got {d}"
            )));
        }
        Ok(curve)
    }

    pub fn circle(center: DVector<f64>, u: DVector<f64>, v: DVector<f64>) -> Result<Self> {
        Self::circle_turns(center, u, v, 1)
    }

    pub fn circle_turns(
        center: DVector<f64>,
        u: DVector<f64>,
        v: DVector<f64>,
        turns: u32,
    ) -> Result<Self> {
        let d = center.len();
        for axis in [&u, &v] {
            if axis.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: axis.len(),
                });
            }
        }
        if turns == 0 {
            return Err(Error::InvalidInput("circle needs at least one turn".into()));
        }
        Self::new(CurveShape::Circle {
            center,
            u,
            v,
            turns,
        })
    }

    /// Sampled curve: vertex `k` sits at parameter `k / n`.
    pub fn from_samples(vertices: &[DVector<f64>]) -> Result<Self> {
        Self::new(CurveShape::Samples(PeriodicSpline::uniform(vertices)?))
    }

    pub fn shape(&self) -> &CurveShape {
        &self.shape
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.shape, CurveShape::Samples(_))
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            CurveShape::Circle { center, .. } => center.len(),
            CurveShape::TorusKnot { center, .. } => center.len(),
            CurveShape::Fourier { constant, .. } => constant.len(),
            CurveShape::Samples(s) => s.dim(),
        }
    }

    /// Same image traversed backwards, `t -> -t`.
    pub fn reversed(&self) -> Self {
        let shape = match &self.shape {
            CurveShape::Circle {
                center,
                u,
                v,
                turns,
            } => CurveShape::Circle {
                center: center.clone(),
                u: u.clone(),
                v: -v,
                turns: *turns,
            },
            CurveShape::TorusKnot {
                center,
                frame,
                major,
                minor,
                longitude,
                meridian,
                phase,
            } => CurveShape::TorusKnot {
                center: center.clone(),
                frame: [frame[0].clone(), -&frame[1], -&frame[2]],
                major: *major,
                minor: *minor,
                longitude: *longitude,
                meridian: *meridian,
                phase: -phase,
            },
            CurveShape::Fourier { constant, cos, sin } => CurveShape::Fourier {
                constant: constant.clone(),
                cos: cos.clone(),
                sin: sin.iter().map(|b| -b).collect(),
            },
            CurveShape::Samples(s) => CurveShape::Samples(s.reversed()),
        };
        Self { shape }
    }

    pub fn eval(&self, t: f64) -> Point {
        let mut out = DVector::zeros(self.dim());
        self.eval_into(t, out.as_mut_slice());
        out
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let t = wrap_unit(t);
        match &self.shape {
            CurveShape::Circle {
                center,
                u,
                v,
                turns,
            } => {
                let (s, c) = (TAU * wrap_unit(*turns as f64 * t)).sin_cos();
                for i in 0..center.len() {
                    out[i] = center[i] + c * u[i] + s * v[i];
                }
            }
            CurveShape::TorusKnot {
                center,
                frame,
                major,
                minor,
                longitude,
                meridian,
                phase,
            } => {
                let (sp, cp) = (TAU * wrap_unit(*longitude as f64 * t)).sin_cos();
                let (st, ct) = (TAU * wrap_unit(*meridian as f64 * t) + phase).sin_cos();
                let radial = major + minor * ct;
                for i in 0..center.len() {
                    out[i] = center[i]
                        + radial * (cp * frame[0][i] + sp * frame[1][i])
                        + minor * st * frame[2][i];
                }
            }
            CurveShape::Fourier { constant, cos, sin } => {
                out[..constant.len()].copy_from_slice(constant.as_slice());
                for k in 0..cos.len() {
                    let (s, c) = (TAU * wrap_unit((k + 1) as f64 * t)).sin_cos();
                    for i in 0..constant.len() {
                        out[i] += c * cos[k][i] + s * sin[k][i];
                    }
                }
            }
            CurveShape::Samples(spline) => spline.eval_into(t, out),
        }
    }

    /// Exact derivative for analytic shapes and for the spline backend.
    /// Quadrature uses this; [`ClosedCurve::tangent`] is the checked public
    /// accessor.
    pub fn derivative_into(&self, t: f64, out: &mut [f64]) {
        let st = wrap_unit(t);
        match &self.shape {
            CurveShape::Circle {
                center,
                u,
                v,
                turns,
            } => {
                let w = TAU * *turns as f64;
                let (s, c) = (TAU * wrap_unit(*turns as f64 * st)).sin_cos();
                for i in 0..center.len() {
                    out[i] = w * (-s * u[i] + c * v[i]);
                }
            }
            CurveShape::TorusKnot {
                center,
                frame,
                major,
                minor,
                longitude,
                meridian,
                phase,
            } => {
                let wp = TAU * *longitude as f64;
                let wt = TAU * *meridian as f64;
                let (sp, cp) = (TAU * wrap_unit(*longitude as f64 * st)).sin_cos();
                let (sn, cn) = (TAU * wrap_unit(*meridian as f64 * st) + phase).sin_cos();
                let radial = major + minor * cn;
                for i in 0..center.len() {
                    out[i] = -minor * wt * sn * (cp * frame[0][i] + sp * frame[1][i])
                        + radial * wp * (-sp * frame[0][i] + cp * frame[1][i])
                        + minor * wt * cn * frame[2][i];
                }
            }
            CurveShape::Fourier { constant, cos, sin } => {
                out[..constant.len()].fill(0.0);
                for k in 0..cos.len() {
                    let w = TAU * (k + 1) as f64;
                    let (s, c) = (TAU * wrap_unit((k + 1) as f64 * st)).sin_cos();
                    for i in 0..constant.len() {
                        out[i] += w * (-s * cos[k][i] + c * sin[k][i]);
                    }
                }
            }
            CurveShape::Samples(spline) => spline.derivative_into(st, out),
        }
    }

    /// Velocity `dγ/dt`: analytic for builtin shapes, central difference with
    /// step 1e-6 for sampled curves.
    pub fn tangent(&self, t: f64) -> Result<DVector<f64>> {
        let d = self.dim();
        let v = if self.is_sampled() {
            let (mut a, mut b) = (vec![0.0; d], vec![0.0; d]);
            self.eval_into(t + FD_STEP, &mut a);
            self.eval_into(t - FD_STEP, &mut b);
            DVector::from_iterator(d, a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * FD_STEP)))
        } else {
            let mut out = DVector::zeros(d);
            self.derivative_into(t, out.as_mut_slice());
            out
        };
        let speed = v.norm();
        if speed < IMMERSION_TOL {
            return Err(Error::ImmersionFailure {
                parameter: t,
                speed,
            });
        }
        Ok(v)
    }

    /// Checks the immersion condition at `samples` evenly spaced parameters.
    pub fn check_immersed(&self, samples: usize) -> Result<()> {
        for k in 0..samples {
            self.tangent(k as f64 / samples as f64)?;
        }
        Ok(())
    }

    /// Closed polyline with vertices at `t = k / n`; needs `n >= 8`.
    pub fn sample_polyline(&self, n: usize) -> Result<Polyline> {
        if n < 8 {
            return Err(Error::InvalidInput(format!(
                "polyline needs at least 8 vertices, got {n}"
            )));
        }
        self.check_immersed(n)?;
        let vertices = (0..n).map(|k| self.eval(k as f64 / n as f64)).collect();
        Polyline::new(vertices)
    }

    /// Pushes the curve forward through an affine map (which may change the
    /// ambient dimension). Orientation of the parameter is kept.
    pub fn map_affine(&self, map: &Affine) -> Result<Self> {
        map.check_input(self.dim())?;
        let lin = |v: &DVector<f64>| map.apply_vector(v);
        let shape = match &self.shape {
            CurveShape::Circle {
                center,
                u,
                v,
                turns,
            } => CurveShape::Circle {
                center: map.apply_point(center),
                u: lin(u),
                v: lin(v),
                turns: *turns,
            },
            CurveShape::TorusKnot {
                center,
                frame,
                major,
                minor,
                longitude,
                meridian,
                phase,
            } => CurveShape::TorusKnot {
                center: map.apply_point(center),
                frame: [lin(&frame[0]), lin(&frame[1]), lin(&frame[2])],
                major: *major,
                minor: *minor,
                longitude: *longitude,
                meridian: *meridian,
                phase: *phase,
            },
            CurveShape::Fourier { constant, cos, sin } => CurveShape::Fourier {
                constant: map.apply_point(constant),
                cos: cos.iter().map(lin).collect(),
                sin: sin.iter().map(lin).collect(),
            },
            CurveShape::Samples(s) => CurveShape::Samples(s.map_affine(map)?),
        };
        Ok(Self { shape })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_circle() -> ClosedCurve {
        ClosedCurve::circle(
            DVector::zeros(3),
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
        )
        .unwrap()
    }

    fn assert_close(a: &DVector<f64>, b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn circle_values() {
        let c = unit_circle();
        assert_close(&c.eval(0.0), &[1.0, 0.0, 0.0], 0.0);
        assert_close(&c.eval(0.25), &[0.0, 1.0, 0.0], 1e-15);
        assert_close(&c.tangent(0.0).unwrap(), &[0.0, TAU, 0.0], 1e-15);
    }

    #[test]
    fn parameter_wraps() {
        let c = unit_circle();
        assert_close(&c.eval(1.3), c.eval(0.3).as_slice(), 1e-15);
        assert_eq!(c.eval(1.25), c.eval(0.25));
    }

    #[test]
    fn sampled_circle_tangent() {
        let c = unit_circle();
        let verts: Vec<_> = (0..1024).map(|k| c.eval(k as f64 / 1024.0)).collect();
        let s = ClosedCurve::from_samples(&verts).unwrap();
        assert_close(&s.tangent(0.0).unwrap(), &[0.0, TAU, 0.0], 1e-4);
    }

    #[test]
    fn constant_curve_is_not_immersed() {
        let z = DVector::zeros(3);
        let c = ClosedCurve::circle(z.clone(), z.clone(), z).unwrap();
        assert!(matches!(c.tangent(0.2), Err(Error::ImmersionFailure { .. })));
    }

    #[test]
    fn polyline_needs_eight_vertices() {
        let c = unit_circle();
        assert!(c.sample_polyline(7).is_err());
        let p = c.sample_polyline(8).unwrap();
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn reversal_negates_velocity() {
        let c = unit_circle();
        let r = c.reversed();
        for t in [0.1, 0.37, 0.8] {
            let a = c.tangent(t).unwrap();
            let b = r.tangent(1.0 - t).unwrap();
            assert_close(&(a + b), &[0.0; 3], 1e-12);
        }
    }

    fn torus_knot() -> ClosedCurve {
        let e = |i: usize| DVector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 });
        ClosedCurve::new(CurveShape::TorusKnot {
            center: DVector::zeros(3),
            frame: [e(0), e(1), e(2)],
            major: 2.0,
            minor: 0.7,
            longitude: 2,
            meridian: 3,
            phase: 0.4,
        })
        .unwrap()
    }

    proptest! {
        #[test]
        fn dyadic_wrap_is_exact(k in 0u32..(1 << 20)) {
            let t = k as f64 / (1u32 << 20) as f64;
            let c = torus_knot();
            prop_assert_eq!(c.eval(t), c.eval(t + 1.0));
        }

        #[test]
        fn analytic_tangent_matches_difference(t in 0.0f64..1.0) {
            let c = torus_knot();
            let v = c.tangent(t).unwrap();
            let fd = (c.eval(t + FD_STEP) - c.eval(t - FD_STEP)) / (2.0 * FD_STEP);
            prop_assert!((&v - &fd).norm() <= 1e-6 * v.norm());
        }
    }
}
