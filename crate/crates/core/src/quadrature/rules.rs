use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// One-dimensional rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Nodes `k / n` with equal weights; exact for trigonometric polynomials of
    /// degree `< n` on the unit period.
    pub fn periodic_trapezoid(n: usize) -> Self {
        Self {
            nodes: (0..n).map(|k| k as f64 / n as f64).collect(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Gauss–Legendre mapped to `[0, 1]`. Open: never samples the endpoints.
    pub fn gauss_legendre(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().unwrap().get(&n) {
            return rule.clone();
        }
        let (x, w) = legendre_nodes(n);
        let rule = Arc::new(Self {
            nodes: x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: w.iter().map(|w| 0.5 * w).collect(),
        });
        cache.lock().unwrap().insert(n, rule.clone());
        rule
    }

    /// Periodic trapezoid for periodic axes, Gauss–Legendre otherwise.
    pub fn for_axis(periodic: bool, n: usize) -> Arc<Self> {
        if periodic {
            Arc::new(Self::periodic_trapezoid(n))
        } else {
            Self::gauss_legendre(n)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// three-term recurrence, started from Tricomi's asymptotic guess.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut z = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        for n in [8usize, 13, 64, 257] {
            let r = Rule::gauss_legendre(n);
            let total: f64 = r.weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-14, "n={n}");
            let deg = 2 * n - 1;
            let exact = 1.0 / (deg as f64 + 1.0);
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - exact).abs() < 1e-13, "n={n} got {got}");
        }
    }

    #[test]
    fn large_rules_stay_accurate() {
        let r = Rule::gauss_legendre(4096);
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (3.0 * x).exp()).sum();
        assert!((got - ((3.0f64).exp() - 1.0) / 3.0).abs() < 1e-12);
        assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
    }
}
