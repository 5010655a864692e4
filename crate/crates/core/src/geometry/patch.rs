use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};

use super::affine::Affine;
use super::curve::{wrap_unit, ClosedCurve};
use super::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum PatchShape {
    /// A closed curve viewed as a one-dimensional periodic patch.
    Curve(ClosedCurve),
    /// Round 2-sphere in latitude–longitude coordinates:
    /// `u` is longitude (periodic), `v ∈ [0,1]` runs from the `-pole` to the
    /// `+pole`. The `axes` span the sphere's 3-space and carry its radius.
    Sphere {
        center: DVector<f64>,
        axes: [DVector<f64>; 3],
    },
    /// Torus of revolution around `axes[2]`; `u` goes around the core circle
    /// in the `axes[0], axes[1]` plane and `v` around the tube.
    Torus {
        center: DVector<f64>,
        axes: [DVector<f64>; 3],
        major: f64,
        minor: f64,
    },
}

/// Where a chart stops being injective or immersive. Only the sphere's
/// latitude edges are degenerate; they map to single points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degeneracy {
    pub coordinate: usize,
    pub at_upper_end: bool,
}

/// A closed oriented manifold given by one chart `[0,1]^n -> R^d`. Chart
/// coordinate order fixes the orientation used in every determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchManifold {
    shape: PatchShape,
}

impl From<ClosedCurve> for PatchManifold {
    fn from(curve: ClosedCurve) -> Self {
        Self {
            shape: PatchShape::Curve(curve),
        }
    }
}

impl PatchManifold {
    pub fn sphere(center: DVector<f64>, axes: [DVector<f64>; 3]) -> Result<Self> {
        check_axes(&center, &axes)?;
        Ok(Self {
            shape: PatchShape::Sphere { center, axes },
        })
    }

    pub fn torus(
        center: DVector<f64>,
        axes: [DVector<f64>; 3],
        major: f64,
        minor: f64,
    ) -> Result<Self> {
        check_axes(&center, &axes)?;
        if !(major > minor && minor > 0.0) {
            return Err(Error::InvalidInput(
                "torus radii must satisfy major > minor > 0".into(),
            ));
        }
        Ok(Self {
            shape: PatchShape::Torus {
                center,
                axes,
                major,
                minor,
            },
        })
    }

    pub fn shape(&self) -> &PatchShape {
        &self.shape
    }

    pub fn as_curve(&self) -> Option<&ClosedCurve> {
        match &self.shape {
            PatchShape::Curve(c) => Some(c),
            _ => None,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self.shape {
            PatchShape::Curve(_) => 1,
            PatchShape::Sphere { .. } | PatchShape::Torus { .. } => 2,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.shape {
            PatchShape::Curve(c) => c.dim(),
            PatchShape::Sphere { center, .. } | PatchShape::Torus { center, .. } => center.len(),
        }
    }

    pub fn periodic(&self) -> Vec<bool> {
        match self.shape {
            PatchShape::Curve(_) => vec![true],
            PatchShape::Sphere { .. } => vec![true, false],
            PatchShape::Torus { .. } => vec![true, true],
        }
    }

    pub fn degeneracies(&self) -> Vec<Degeneracy> {
        match self.shape {
            PatchShape::Sphere { .. } => vec![
                Degeneracy {
                    coordinate: 1,
                    at_upper_end: false,
                },
                Degeneracy {
                    coordinate: 1,
                    at_upper_end: true,
                },
            ],
            _ => Vec::new(),
        }
    }

    pub fn eval(&self, u: &[f64]) -> Point {
        let mut out = DVector::zeros(self.ambient_dim());
        self.eval_into(u, out.as_mut_slice());
        out
    }

    pub fn eval_into(&self, u: &[f64], out: &mut [f64]) {
        match &self.shape {
            PatchShape::Curve(c) => c.eval_into(u[0], out),
            PatchShape::Sphere { center, axes } => {
                let (sp, cp) = (TAU * wrap_unit(u[0])).sin_cos();
                let (st, ct) = (PI * (u[1] - 0.5)).sin_cos();
                for i in 0..center.len() {
                    out[i] = center[i] + ct * (cp * axes[0][i] + sp * axes[1][i]) + st * axes[2][i];
                }
            }
            PatchShape::Torus {
                center,
                axes,
                major,
                minor,
            } => {
                let (sp, cp) = (TAU * wrap_unit(u[0])).sin_cos();
                let (st, ct) = (TAU * wrap_unit(u[1])).sin_cos();
                let radial = major + minor * ct;
                for i in 0..center.len() {
                    out[i] = center[i]
                        + radial * (cp * axes[0][i] + sp * axes[1][i])
                        + minor * st * axes[2][i];
                }
            }
        }
    }

    /// Column `j` of the `d × n` Jacobian is `∂y/∂u_j`.
    pub fn jacobian(&self, u: &[f64]) -> DMatrix<f64> {
        let d = self.ambient_dim();
        let n = self.intrinsic_dim();
        let mut out = vec![0.0; d * n];
        self.jacobian_into(u, &mut out);
        DMatrix::from_column_slice(d, n, &out)
    }

    /// Column-major Jacobian into `out[j * d + i]`.
    pub fn jacobian_into(&self, u: &[f64], out: &mut [f64]) {
        match &self.shape {
            PatchShape::Curve(c) => c.derivative_into(u[0], out),
            PatchShape::Sphere { center, axes } => {
                let d = center.len();
                let (sp, cp) = (TAU * wrap_unit(u[0])).sin_cos();
                let (st, ct) = (PI * (u[1] - 0.5)).sin_cos();
                for i in 0..d {
                    out[i] = TAU * ct * (-sp * axes[0][i] + cp * axes[1][i]);
                    out[d + i] = PI * (-st * (cp * axes[0][i] + sp * axes[1][i]) + ct * axes[2][i]);
                }
            }
            PatchShape::Torus {
                center,
                axes,
                major,
                minor,
            } => {
                let d = center.len();
                let (sp, cp) = (TAU * wrap_unit(u[0])).sin_cos();
                let (st, ct) = (TAU * wrap_unit(u[1])).sin_cos();
                let radial = major + minor * ct;
                for i in 0..d {
                    out[i] = TAU * radial * (-sp * axes[0][i] + cp * axes[1][i]);
                    out[d + i] = TAU
                        * minor
                        * (-st * (cp * axes[0][i] + sp * axes[1][i]) + ct * axes[2][i]);
                }
            }
        }
    }

    pub fn map_affine(&self, map: &Affine) -> Result<Self> {
        map.check_input(self.ambient_dim())?;
        let lin = |v: &DVector<f64>| map.apply_vector(v);
        let shape = match &self.shape {
            PatchShape::Curve(c) => PatchShape::Curve(c.map_affine(map)?),
            PatchShape::Sphere { center, axes } => PatchShape::Sphere {
                center: map.apply_point(center),
                axes: [lin(&axes[0]), lin(&axes[1]), lin(&axes[2])],
            },
            PatchShape::Torus {
                center,
                axes,
                major,
                minor,
            } => PatchShape::Torus {
                center: map.apply_point(center),
                axes: [lin(&axes[0]), lin(&axes[1]), lin(&axes[2])],
                major: *major,
                minor: *minor,
            },
        };
        Ok(Self { shape })
    }

    /// Sample points on an `n^k` grid of cell centres (never on a pole).
    pub fn sample_points(&self, per_dim: usize) -> Vec<Point> {
        let k = self.intrinsic_dim();
        let total = per_dim.pow(k as u32);
        let mut u = vec![0.0; k];
        (0..total)
            .map(|mut idx| {
                for coord in u.iter_mut() {
                    *coord = ((idx % per_dim) as f64 + 0.5) / per_dim as f64;
                    idx /= per_dim;
                }
                self.eval(&u)
            })
            .collect()
    }
}

fn check_axes(center: &DVector<f64>, axes: &[DVector<f64>; 3]) -> Result<()> {
    let d = center.len();
    if d < 3 {
        return Err(Error::InvalidInput(format!(
            "surfaces need ambient dimension >= 3, got {d}"
        )));
    }
    for a in axes {
        if a.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.len(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn sphere_is_unit_and_closed_at_poles() {
        let s = PatchManifold::sphere(DVector::zeros(4), [e(4, 0), e(4, 2), e(4, 1)]).unwrap();
        for u in [0.0, 0.3, 0.77] {
            let south = s.eval(&[u, 0.0]);
            assert!((south - DVector::from_vec(vec![0.0, -1.0, 0.0, 0.0])).norm() < 1e-15);
            for v in [0.1, 0.5, 0.9] {
                assert!((s.eval(&[u, v]).norm() - 1.0).abs() < 1e-15);
            }
        }
        assert!((s.eval(&[0.0, 0.5]) - s.eval(&[1.0, 0.5])).norm() < 1e-12);
    }

    #[test]
    fn jacobians_match_differences() {
        let sphere = PatchManifold::sphere(DVector::zeros(4), [e(4, 0), e(4, 2), e(4, 1)]).unwrap();
        let torus = PatchManifold::torus(DVector::zeros(4), [e(4, 0), e(4, 1), e(4, 3)], 2.0, 0.5)
            .unwrap();
        let h = 1e-6;
        for m in [sphere, torus] {
            for (a, b) in [(0.1, 0.2), (0.45, 0.61), (0.9, 0.33)] {
                let j = m.jacobian(&[a, b]);
                let du = (m.eval(&[a + h, b]) - m.eval(&[a - h, b])) / (2.0 * h);
                let dv = (m.eval(&[a, b + h]) - m.eval(&[a, b - h])) / (2.0 * h);
                assert!((j.column(0) - du).norm() < 1e-7);
                assert!((j.column(1) - dv).norm() < 1e-7);
            }
        }
    }
}
