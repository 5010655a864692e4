use super::affine::Affine;
use super::Point;
use crate::error::{Error, Result};

/// Axis-aligned affine subspace `{ x : x[k] = c_k for every fixed k }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    fixed: Vec<(usize, f64)>,
}

impl Hyperplane {
    pub fn new(mut fixed: Vec<(usize, f64)>) -> Result<Self> {
        if fixed.is_empty() {
            return Err(Error::InvalidInput(
                "hyperplane must fix at least one coordinate".into(),
            ));
        }
        fixed.sort_by_key(|&(k, _)| k);
        if fixed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("coordinate fixed twice".into()));
        }
        Ok(Self { fixed })
    }

    /// `{ x[axis] = value }`.
    pub fn coordinate(axis: usize, value: f64) -> Self {
        Self {
            fixed: vec![(axis, value)],
        }
    }

    pub fn codimension(&self) -> usize {
        self.fixed.len()
    }

    pub fn fixed(&self) -> &[(usize, f64)] {
        &self.fixed
    }

    /// The single fixed axis and its value; errors for codimension > 1.
    pub fn as_coordinate(&self) -> Result<(usize, f64)> {
        match self.fixed.as_slice() {
            [single] => Ok(*single),
            _ => Err(Error::InvalidInput(format!(
                "only codimension-1 hyperplanes can be sliced, got codimension {}",
                self.fixed.len()
            ))),
        }
    }

    pub fn check_ambient(&self, dim: usize) -> Result<()> {
        match self.fixed.last() {
            Some(&(k, _)) if k >= dim => Err(Error::DimensionMismatch {
                expected: dim,
                found: k + 1,
            }),
            _ if self.fixed.len() >= dim => Err(Error::InvalidInput(
                "hyperplane must keep at least one free coordinate".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Largest violation of the defining equations.
    pub fn deviation(&self, x: &Point) -> f64 {
        self.fixed
            .iter()
            .map(|&(k, c)| (x[k] - c).abs())
            .fold(0.0, f64::max)
    }

    /// Coordinates on the hyperplane: drop the fixed axes, keep the others in
    /// order. The translation removes nothing, so points keep their values.
    pub fn chart(&self, ambient_dim: usize) -> Result<Affine> {
        self.check_ambient(ambient_dim)?;
        let dropped: Vec<usize> = self.fixed.iter().map(|&(k, _)| k).collect();
        Ok(Affine::drop_coordinates(ambient_dim, &dropped))
    }
}
