use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{ClosedCurve, Isometry};

/// Least-squares plane through a sampled curve in `R^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneFit {
    pub center: DVector<f64>,
    /// Unit normal.
    pub normal: DVector<f64>,
    /// Largest distance of a sample from the plane.
    pub deviation: f64,
}

/// Fits a plane to 1024 samples of `c` through the smallest eigenvector of
/// their covariance.
pub fn fit_plane(c: &ClosedCurve) -> Result<PlaneFit> {
    if c.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: c.dim(),
        });
    }
    let n = 1024;
    let pts: Vec<DVector<f64>> = (0..n).map(|k| c.eval(k as f64 / n as f64)).collect();
    let center = pts.iter().fold(DVector::zeros(3), |acc, p| acc + p) / n as f64;
    let mut cov = DMatrix::zeros(3, 3);
    for p in &pts {
        let r = p - &center;
        cov += &r * r.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let smallest = eig.eigenvalues.imin();
    let normal = eig.eigenvectors.column(smallest).normalize();
    let deviation = pts
        .iter()
        .map(|p| (p - &center).dot(&normal).abs())
        .fold(0.0, f64::max);
    Ok(PlaneFit {
        center,
        normal,
        deviation,
    })
}

/// Proper rigid motion taking the plane through `center` with unit `normal`
/// to `{x₃ = 0}`, with `normal` sent to `+e₃`.
pub fn align_plane_to_x3(center: &DVector<f64>, normal: &DVector<f64>) -> Result<Isometry> {
    if center.len() != 3 || normal.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: center.len().max(normal.len()),
        });
    }
    let n = normal.normalize();
    let helper = if n[0].abs() < 0.9 {
        DVector::from_column_slice(&[1.0, 0.0, 0.0])
    } else {
        DVector::from_column_slice(&[0.0, 1.0, 0.0])
    };
    let a = (&helper - &n * n.dot(&helper)).normalize();
    let b = DVector::from_column_slice(&[
        n[1] * a[2] - n[2] * a[1],
        n[2] * a[0] - n[0] * a[2],
        n[0] * a[1] - n[1] * a[0],
    ]);
    // Rows a, b, n: a × b = n keeps the determinant at +1.
    let rotation = DMatrix::from_rows(&[a.transpose(), b.transpose(), n.transpose()]);
    let translation = -(&rotation * center);
    Isometry::new(rotation, translation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;

    #[test]
    fn tilted_circle_is_flattened() {
        let c = ClosedCurve::circle(
            point(&[1.0, 2.0, 3.0]),
            point(&[1.0, 1.0, 0.0]),
            point(&[0.0, 0.5, -0.5]),
        )
        .unwrap();
        let fit = fit_plane(&c).unwrap();
        assert!(fit.deviation < 1e-12);
        let g = align_plane_to_x3(&fit.center, &fit.normal).unwrap();
        let flat = c.map_affine(&g.to_affine()).unwrap();
        for k in 0..64 {
            assert!(flat.eval(k as f64 / 64.0)[2].abs() < 1e-12);
        }
    }
}
