use super::Point;
use crate::error::{Error, Result};

/// Closed polygonal curve; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

const MIN_EDGE: f64 = 1e-12;

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidInput(format!(
                "closed polyline needs at least 3 vertices, got {n}"
            )));
        }
        let d = vertices[0].len();
        for (k, v) in vertices.iter().enumerate() {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            let gap = (&vertices[(k + 1) % n] - v).norm();
            if gap <= MIN_EDGE {
                return Err(Error::InvalidInput(format!(
                    "consecutive vertices {k} and {} coincide",
                    (k + 1) % n
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Edge `k` runs from vertex `k` to vertex `k + 1 (mod n)`.
    pub fn segments(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (&self.vertices[k], &self.vertices[(k + 1) % n]))
    }
}
