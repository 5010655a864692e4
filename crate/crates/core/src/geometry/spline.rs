//! Periodic cubic interpolation of closed point sequences.
//!
//! The parameter domain is `[0, 1)` with period one. Knots may be uniform
//! (one per input vertex) or chord-length spaced, which is what contour
//! extraction produces.

use nalgebra::DVector;

use super::affine::Affine;
use crate::error::{Error, Result};

/// C² periodic cubic spline through `n >= 4` points in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSpline {
    dim: usize,
    /// Strictly increasing, `knots[0] == 0`, all `< 1`.
    knots: Vec<f64>,
    /// Interpolated values, `n * dim`, row per knot.
    values: Vec<f64>,
    /// Second derivatives at the knots, same layout as `values`.
    moments: Vec<f64>,
}

const MIN_GAP: f64 = 1e-12;

impl PeriodicSpline {
    /// Knots at `k / n`.
    pub fn uniform(points: &[DVector<f64>]) -> Result<Self> {
        let n = points.len();
        let knots = (0..n).map(|k| k as f64 / n as f64).collect();
        Self::with_knots(points, knots)
    }

    /// Knots proportional to cumulative chord length around the closed polygon.
    pub fn chord_length(points: &[DVector<f64>]) -> Result<Self> {
        let n = points.len();
        if n < 4 {
            return Err(Error::InvalidInput(format!(
                "periodic spline needs at least 4 points, got {n}"
            )));
        }
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        for k in 0..n {
            let gap = (&points[(k + 1) % n] - &points[k]).norm();
            cumulative.push(cumulative[k] + gap);
        }
        let total = cumulative[n];
        let knots = cumulative[..n].iter().map(|c| c / total).collect();
        Self::with_knots(points, knots)
    }

    fn with_knots(points: &[DVector<f64>], knots: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n < 4 {
            return Err(Error::InvalidInput(format!(
                "periodic spline needs at least 4 points, got {n}"
            )));
        }
        let dim = points[0].len();
        for (k, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("vertex {k} is not finite")));
            }
            let gap = (&points[(k + 1) % n] - p).norm();
            if gap <= MIN_GAP {
                return Err(Error::InvalidInput(format!(
                    "vertices {k} and {} coincide (gap {gap:e})",
                    (k + 1) % n
                )));
            }
        }
        let mut values = Vec::with_capacity(n * dim);
        for p in points {
            values.extend(p.iter());
        }
        let steps: Vec<f64> = (0..n)
            .map(|i| {
                let next = if i + 1 == n { 1.0 } else { knots[i + 1] };
                next - knots[i]
            })
            .collect();
        let mut moments = vec![0.0; n * dim];
        let mut rhs = vec![0.0; n];
        for c in 0..dim {
            for i in 0..n {
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                let y = |k: usize| values[k * dim + c];
                rhs[i] = 6.0 * ((y(next) - y(i)) / steps[i] - (y(i) - y(prev)) / steps[prev]);
            }
            let solution = solve_cyclic(&steps, &rhs);
            for i in 0..n {
                moments[i * dim + c] = solution[i];
            }
        }
        Ok(Self {
            dim,
            knots,
            values,
            moments,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn vertex(&self, k: usize) -> DVector<f64> {
        DVector::from_row_slice(&self.values[k * self.dim..(k + 1) * self.dim])
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let n = self.knots.len();
        let i = match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let end = if i + 1 == n { 1.0 } else { self.knots[i + 1] };
        let h = end - self.knots[i];
        let b = (t - self.knots[i]) / h;
        (i, h, b)
    }

    /// Writes the point at wrapped parameter `t ∈ [0,1)` into `out`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let (i, h, b) = self.locate(t);
        let j = (i + 1) % self.knots.len();
        let a = 1.0 - b;
        let ca = (a * a * a - a) * h * h / 6.0;
        let cb = (b * b * b - b) * h * h / 6.0;
        let d = self.dim;
        for c in 0..d {
            out[c] = a * self.values[i * d + c]
                + b * self.values[j * d + c]
                + ca * self.moments[i * d + c]
                + cb * self.moments[j * d + c];
        }
    }

    /// Analytic first derivative with respect to `t`.
    pub fn derivative_into(&self, t: f64, out: &mut [f64]) {
        let (i, h, b) = self.locate(t);
        let j = (i + 1) % self.knots.len();
        let a = 1.0 - b;
        let d = self.dim;
        for c in 0..d {
            out[c] = (self.values[j * d + c] - self.values[i * d + c]) / h
                - (3.0 * a * a - 1.0) / 6.0 * h * self.moments[i * d + c]
                + (3.0 * b * b - 1.0) / 6.0 * h * self.moments[j * d + c];
        }
    }

    /// The same curve traversed backwards: knot `t` moves to `1 - t`.
    pub fn reversed(&self) -> Self {
        let n = self.knots.len();
        let d = self.dim;
        let order: Vec<usize> = (0..n).map(|j| (n - j) % n).collect();
        let knots = order
            .iter()
            .map(|&k| if k == 0 { 0.0 } else { 1.0 - self.knots[k] })
            .collect();
        let gather = |data: &[f64]| -> Vec<f64> {
            order
                .iter()
                .flat_map(|&k| data[k * d..(k + 1) * d].iter().copied())
                .collect()
        };
        Self {
            dim: d,
            knots,
            values: gather(&self.values),
            moments: gather(&self.moments),
        }
    }

    /// Interpolation commutes with affine maps, so only the data moves.
    pub fn map_affine(&self, map: &Affine) -> Result<Self> {
        map.check_input(self.dim)?;
        let n = self.knots.len();
        let out = map.out_dim();
        let mut values = Vec::with_capacity(n * out);
        let mut moments = Vec::with_capacity(n * out);
        for k in 0..n {
            let v = DVector::from_row_slice(&self.values[k * self.dim..(k + 1) * self.dim]);
            let m = DVector::from_row_slice(&self.moments[k * self.dim..(k + 1) * self.dim]);
            values.extend(map.apply_point(&v).iter());
            moments.extend(map.apply_vector(&m).iter());
        }
        Ok(Self {
            dim: out,
            knots: self.knots.clone(),
            values,
            moments,
        })
    }
}

/// Solves the symmetric cyclic tridiagonal system
/// `h[i-1] m[i-1] + 2 (h[i-1] + h[i]) m[i] + h[i] m[i+1] = rhs[i]`
/// with Sherman–Morrison on top of the Thomas algorithm.
fn solve_cyclic(steps: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = steps.len();
    let lower: Vec<f64> = (0..n).map(|i| steps[(i + n - 1) % n]).collect();
    let upper: Vec<f64> = steps.to_vec();
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * (lower[i] + upper[i])).collect();

    // Corner entries: A[0][n-1] = lower[0], A[n-1][0] = upper[n-1].
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.clone();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;

    let x = solve_tridiagonal(&lower, &d, &upper, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(&lower, &d, &upper, &u);
    let factor = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - factor * zi).collect()
}

fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
