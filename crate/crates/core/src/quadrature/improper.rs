use std::f64::consts::PI;

use super::rules::Rule;
use crate::error::{Error, Result};

/// Gauss–Legendre in `θ ∈ (-π/2, π/2)` pulled back through `z = tan θ`:
/// `∫_R g(z) dz ≈ Σ weights[i] · g(nodes[i])`, with the `sec² θ` Jacobian
/// folded into the weights. For the kernel `(a + z²)^{-s}` the transformed
/// integrand is a smooth function of `θ`, so the rule converges fast.
#[derive(Debug, Clone)]
pub struct EvenDecayRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl EvenDecayRule {
    pub fn new(n: usize) -> Self {
        let base = Rule::gauss_legendre(n);
        let (nodes, weights) = base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(&x, &w)| {
                let theta = PI * (x - 0.5);
                let c = theta.cos();
                (theta.tan(), PI * w / (c * c))
            })
            .unzip();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.len());
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            let v = w * g(z);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { node: vec![z] });
            }
            terms.push(v);
        }
        Ok(super::compensated_sum(terms))
    }
}

const START: usize = 16;
const LIMIT: usize = 4096;

/// `∫_{-∞}^{∞} g(z) dz` for a smooth `g` decaying like `|z|^{-q}`, `q >= 2`.
///
/// Doubles the node count from 16 until successive values agree to
/// `1e-14` relative.
pub fn integral_even_decay<G: Fn(f64) -> f64>(g: G, decay_exponent: f64) -> Result<f64> {
    if !(decay_exponent >= 2.0) {
        return Err(Error::InvalidInput(format!(
            "tangent substitution needs decay exponent >= 2, got {decay_exponent}"
        )));
    }
    let mut n = START;
    let mut value = EvenDecayRule::new(n).apply(&g)?;
    let mut delta = f64::INFINITY;
    while n < LIMIT {
        n *= 2;
        let next = EvenDecayRule::new(n).apply(&g)?;
        delta = (next - value).abs();
        value = next;
        if delta <= 1e-14 * value.abs().max(1.0) {
            return Ok(value);
        }
    }
    if delta <= 1e-10 * value.abs().max(1.0) {
        Ok(value)
    } else {
        Err(Error::ToleranceNotReached {
            best: super::QuadratureResult {
                value,
                error_estimate: delta,
                nodes_per_dim: vec![n],
                refinements: (n / START).trailing_zeros(),
                evaluations: 0,
            },
        })
    }
}
