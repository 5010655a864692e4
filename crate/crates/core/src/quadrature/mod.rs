//! Tensor-product quadrature over `[0,1]^k` with doubling refinement, plus the
//! tangent substitution for integrals over the real line.
//!
//! Periodic axes use the periodic trapezoidal rule, which converges
//! spectrally for the smooth periodic integrands of linking integrals.
//! Non-periodic axes use Gauss–Legendre. Sums are formed in a fixed order
//! (compensated, outer index last), so results do not depend on how many
//! worker threads evaluated the nodes.

mod improper;
mod rules;

use rayon::prelude::*;
use serde::Serialize;

pub use improper::{integral_even_decay, EvenDecayRule};
pub use rules::Rule;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 8;
pub const MAX_NODES: usize = 4096;

/// Value of an integral together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|value_n - value_{n/2}|` for the last doubling; zero for a single
    /// fixed-node evaluation.
    pub error_estimate: f64,
    pub nodes_per_dim: Vec<usize>,
    pub refinements: u32,
    /// Integrand evaluations summed over every refinement level.
    pub evaluations: u64,
}

impl QuadratureResult {
    pub fn single(value: f64, nodes_per_dim: Vec<usize>, evaluations: u64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            nodes_per_dim,
            refinements: 0,
            evaluations,
        }
    }

    /// Scales the value (and error estimate) by a constant factor.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.error_estimate *= factor.abs();
        self
    }
}

/// Neumaier-compensated sum in slice order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Tensor-product rule for `f` over `[0,1]^k`.
///
/// `periodic[j]` selects the periodic trapezoid (true) or Gauss–Legendre
/// (false) on axis `j`, with `nodes[j] >= 8` nodes.
pub fn integrate_box<F>(f: F, periodic: &[bool], nodes: &[usize]) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_nodes(periodic, nodes)?;
    let rules: Vec<_> = periodic
        .iter()
        .zip(nodes)
        .map(|(&p, &n)| Rule::for_axis(p, n))
        .collect();
    let k = rules.len();
    let outer = &rules[0];
    let inner_count: usize = nodes[1..].iter().product();

    let rows: Vec<Result<f64>> = (0..outer.len())
        .into_par_iter()
        .map(|i| {
            let mut u = vec![0.0; k];
            u[0] = outer.nodes[i];
            let mut terms = Vec::with_capacity(inner_count);
            for mut idx in 0..inner_count {
                let mut w = outer.weights[i];
                for (j, rule) in rules.iter().enumerate().skip(1) {
                    let m = idx % rule.len();
                    idx /= rule.len();
                    u[j] = rule.nodes[m];
                    w *= rule.weights[m];
                }
                let value = f(&u);
                if !value.is_finite() {
                    return Err(Error::NonFiniteSample { node: u.clone() });
                }
                terms.push(w * value);
            }
            Ok(compensated_sum(terms))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum(rows))
}

/// Doubles the node count in every dimension, starting from `start_nodes`,
/// until two successive values differ by less than `tol`.
pub fn refine_until<F>(
    f: F,
    periodic: &[bool],
    tol: f64,
    start_nodes: usize,
    max_nodes: usize,
) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let k = periodic.len();
    refine_with(k, tol, start_nodes, max_nodes, |nodes| {
        let value = integrate_box(&f, periodic, nodes)?;
        Ok((value, nodes.iter().map(|&n| n as u64).product()))
    })
}

/// Doubling driver shared by every integral in the crate. `eval` receives
/// the per-dimension node counts and returns the value and the number of
/// integrand evaluations it spent.
pub fn refine_with<E>(
    dims: usize,
    tol: f64,
    start_nodes: usize,
    max_nodes: usize,
    mut eval: E,
) -> Result<QuadratureResult>
where
    E: FnMut(&[usize]) -> Result<(f64, u64)>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if start_nodes < MIN_NODES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_NODES} starting nodes, got {start_nodes}"
        )));
    }
    if max_nodes > MAX_NODES || max_nodes < start_nodes {
        return Err(Error::InvalidInput(format!(
            "max nodes must lie in [{start_nodes}, {MAX_NODES}], got {max_nodes}"
        )));
    }
    let mut n = start_nodes;
    let (mut value, mut evaluations) = eval(&vec![n; dims])?;
    let mut refinements = 0;
    let mut delta = f64::INFINITY;
    while 2 * n <= max_nodes {
        n *= 2;
        let (next, spent) = eval(&vec![n; dims])?;
        evaluations += spent;
        refinements += 1;
        delta = (next - value).abs();
        value = next;
        // A tolerance below the resolution of the value cannot be certified
        // by a zero delta.
        if delta < tol && tol >= f64::EPSILON * value.abs() {
            return Ok(QuadratureResult {
                value,
                error_estimate: delta,
                nodes_per_dim: vec![n; dims],
                refinements,
                evaluations,
            });
        }
    }
    Err(Error::ToleranceNotReached {
        best: QuadratureResult {
            value,
            error_estimate: delta,
            nodes_per_dim: vec![n; dims],
            refinements,
            evaluations,
        },
    })
}

fn check_nodes(periodic: &[bool], nodes: &[usize]) -> Result<()> {
    if periodic.is_empty() || periodic.len() != nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: periodic.len(),
            found: nodes.len(),
        });
    }
    if let Some(&n) = nodes.iter().find(|&&n| n < MIN_NODES) {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_NODES} nodes per dimension, got {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    #[test]
    fn constant_integrates_exactly() {
        let v = integrate_box(|_| 1.0, &[true, false], &[8, 8]).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trig_polynomial_is_exact() {
        let v = integrate_box(|u| (TAU * u[0]).sin().powi(2), &[true], &[64]).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        // Degree < n is integrated exactly with n nodes.
        let f = |u: &[f64]| (7.0 * TAU * u[0]).cos().powi(2) + (3.0 * TAU * u[0]).sin();
        assert!((integrate_box(f, &[true], &[16]).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn smooth_periodic_integrand_converges_geometrically() {
        // ∫ 1/(1+sin²(2πt)) dt = 1/√2.
        let f = |u: &[f64]| 1.0 / (1.0 + (TAU * u[0]).sin().powi(2));
        let exact = 0.5f64.sqrt();
        let errs: Vec<f64> = [8usize, 16, 32]
            .iter()
            .map(|&n| (integrate_box(f, &[true], &[n]).unwrap() - exact).abs())
            .collect();
        // Deltas shrink by a roughly constant, large factor per doubling.
        assert!(errs[0] / errs[1] > 100.0, "{errs:?}");
        assert!(errs[2] < 1e-11, "{errs:?}");
    }

    #[test]
    fn refinement_reports_delta() {
        let f = |u: &[f64]| 1.0 / (2.0 + (TAU * u[0]).cos());
        let r = refine_until(f, &[true], 1e-10, 8, 4096).unwrap();
        assert!((r.value - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(r.error_estimate < 1e-10);
        assert!(r.nodes_per_dim[0] < 4096);
        assert_eq!(r.evaluations, (8..=r.nodes_per_dim[0]).filter(|n| n.is_power_of_two()).sum::<usize>() as u64);
    }

    #[test]
    fn unreachable_tolerance_returns_best_value() {
        // A kink limits the trapezoid rule to second order.
        let f = |u: &[f64]| (u[0] - 0.3).abs();
        match refine_until(f, &[true], 1e-12, 8, 256) {
            Err(Error::ToleranceNotReached { best }) => {
                assert!((best.value - 0.29).abs() < 1e-3, "{}", best.value);
                assert!(best.error_estimate > 1e-12);
                assert_eq!(best.nodes_per_dim, vec![256]);
            }
            other => panic!("expected ToleranceNotReached, got {other:?}"),
        }
    }

    #[test]
    fn tolerance_below_machine_precision_is_not_reached() {
        let f = |u: &[f64]| 1.0 / (2.0 + (TAU * u[0]).cos());
        match refine_until(f, &[true], 1e-30, 8, 256) {
            Err(Error::ToleranceNotReached { best }) => {
                assert!((best.value - 1.0 / 3f64.sqrt()).abs() < 1e-12);
                assert_eq!(best.nodes_per_dim, vec![256]);
            }
            other => panic!("expected ToleranceNotReached, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(integrate_box(|_| 1.0, &[true], &[4]).is_err());
        assert!(refine_until(|_| 1.0, &[true], 0.0, 8, 64).is_err());
        assert!(refine_until(|_| 1.0, &[true], 1e-3, 8, 8192).is_err());
        match integrate_box(|u| 1.0 / (u[0] - 0.5), &[true], &[8]) {
            Err(Error::NonFiniteSample { node }) => assert_eq!(node, vec![0.5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn summation_order_is_independent_of_thread_count() {
        let f = |u: &[f64]| ((TAU * u[0]).sin() * 3.1 + u[1]).exp() / (1.0 + u[1] * u[1]);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| integrate_box(f, &[true, false], &[96, 40]).unwrap())
        };
        let a = run(1);
        assert_eq!(a.to_bits(), run(3).to_bits());
        assert_eq!(a.to_bits(), run(8).to_bits());
    }

    proptest! {
        #[test]
        fn integration_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            let f = |u: &[f64]| (TAU * u[0]).cos().exp() * (1.0 + u[1]);
            let g = |u: &[f64]| 1.0 / (1.5 + (TAU * u[0]).sin()) + u[1] * u[1];
            let p = [true, false];
            let n = [32, 16];
            let lhs = integrate_box(|u| alpha * f(u) + beta * g(u), &p, &n).unwrap();
            let rhs = alpha * integrate_box(f, &p, &n).unwrap() + beta * integrate_box(g, &p, &n).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
