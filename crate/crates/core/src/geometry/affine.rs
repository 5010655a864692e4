use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// An affine map `x -> linear * x + translation`, possibly between spaces of
/// different dimension (used to restrict objects to a coordinate hyperplane).
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub linear: DMatrix<f64>,
    pub translation: DVector<f64>,
}

impl Affine {
    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        if linear.nrows() != translation.len() {
            return Err(Error::DimensionMismatch {
                expected: linear.nrows(),
                found: translation.len(),
            });
        }
        Ok(Self {
            linear,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            linear: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn translation(offset: DVector<f64>) -> Self {
        let d = offset.len();
        Self {
            linear: DMatrix::identity(d, d),
            translation: offset,
        }
    }

    /// Uniform scaling by `factor` about `center`.
    pub fn scaling_about(center: &DVector<f64>, factor: f64) -> Self {
        let d = center.len();
        Self {
            linear: DMatrix::identity(d, d) * factor,
            translation: center * (1.0 - factor),
        }
    }

    /// Orthogonal projection `R^d -> R^(d-k)` that deletes the listed
    /// coordinates and keeps the others in their original order.
    pub fn drop_coordinates(dim: usize, dropped: &[usize]) -> Self {
        let kept: Vec<usize> = (0..dim).filter(|i| !dropped.contains(i)).collect();
        let mut linear = DMatrix::zeros(kept.len(), dim);
        for (row, &col) in kept.iter().enumerate() {
            linear[(row, col)] = 1.0;
        }
        Self {
            linear,
            translation: DVector::zeros(kept.len()),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.linear.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn apply_point(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.linear * x + &self.translation
    }

    pub fn apply_vector(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.linear * v
    }

    pub(crate) fn check_input(&self, dim: usize) -> Result<()> {
        if self.in_dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.in_dim(),
            });
        }
        Ok(())
    }
}

/// Orientation-preserving rigid motion of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    rotation: DMatrix<f64>,
    translation: DVector<f64>,
}

const ORTHOGONALITY_TOL: f64 = 1e-12;

impl Isometry {
    /// Validates `rotationᵀ·rotation = I` and `det = +1` to 1e-12.
    pub fn new(rotation: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        let d = rotation.nrows();
        if rotation.ncols() != d {
            return Err(Error::InvalidInput("rotation must be square".into()));
        }
        if translation.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: translation.len(),
            });
        }
        let gram = rotation.transpose() * &rotation;
        let defect = (gram - DMatrix::<f64>::identity(d, d)).amax();
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::InvalidInput(format!(
                "rotation is not orthogonal (defect {defect:e})"
            )));
        }
        let det = rotation.clone().determinant();
        if (det - 1.0).abs() > ORTHOGONALITY_TOL * d as f64 {
            return Err(Error::InvalidInput(format!(
                "rotation must have determinant +1, got {det}"
            )));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            rotation: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn translation(offset: DVector<f64>) -> Self {
        let d = offset.len();
        Self {
            rotation: DMatrix::identity(d, d),
            translation: offset,
        }
    }

    /// Haar-distributed rotation of `R^dim` (QR of a Gaussian matrix with the
    /// sign fix) followed by the given translation.
    pub fn random<R: Rng + ?Sized>(dim: usize, translation: DVector<f64>, rng: &mut R) -> Self {
        let rotation = random_rotation(dim, rng);
        Self {
            rotation,
            translation,
        }
    }

    /// Random rotation acting only on the coordinates other than `fixed_axis`,
    /// so the hyperplanes `x[fixed_axis] = c` are mapped to themselves.
    pub fn random_fixing_axis<R: Rng + ?Sized>(dim: usize, fixed_axis: usize, rng: &mut R) -> Self {
        let sub = random_rotation(dim - 1, rng);
        let others: Vec<usize> = (0..dim).filter(|&i| i != fixed_axis).collect();
        let mut rotation = DMatrix::identity(dim, dim);
        for (a, &i) in others.iter().enumerate() {
            for (b, &j) in others.iter().enumerate() {
                rotation[(i, j)] = sub[(a, b)];
            }
        }
        Self {
            rotation,
            translation: DVector::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.rotation.nrows()
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    pub fn translation_part(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn to_affine(&self) -> Affine {
        Affine {
            linear: self.rotation.clone(),
            translation: self.translation.clone(),
        }
    }

    pub fn apply_point(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.rotation * x + &self.translation
    }
}

fn random_rotation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let gaussian = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gaussian.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.clone().determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    // One Newton-Schulz polish keeps the orthogonality defect near 1e-16.
    let qt = q.transpose();
    let eye = DMatrix::<f64>::identity(dim, dim);
    &q * (eye * 1.5 - (&qt * &q) * 0.5)
}
