use std::cell::RefCell;
use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::invariants::sphere_volume;
use crate::quadrature::integral_even_decay;

/// The two closed forms must agree to this relative accuracy.
const FORM_AGREEMENT: f64 = 1e-12;

fn check(p: u32, a: f64) -> Result<()> {
    if p < 1 || p > 20 {
        return Err(Error::InvalidInput(format!("p must lie in 1..=20, got {p}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("a must be positive, got {a}")));
    }
    Ok(())
}

/// `∫_R dz / (a + z²)^{(p+1)/2}` by quadrature.
pub fn gamma_identity_lhs(p: u32, a: f64) -> Result<f64> {
    check(p, a)?;
    let s = (p as f64 + 1.0) / 2.0;
    integral_even_decay(|z| (a + z * z).powf(-s), p as f64 + 1.0)
}

/// `√π Γ(p/2) / Γ((p+1)/2) / a^{p/2}` through log-Γ, and the same value as
/// `vol S^p / vol S^{p-1} / a^{p/2}`.
pub fn gamma_identity_forms(p: u32, a: f64) -> Result<(f64, f64)> {
    check(p, a)?;
    let scale = a.powf(-(p as f64) / 2.0);
    let log_form = scale
        * (0.5 * PI.ln() + ln_gamma(p as f64 / 2.0) - ln_gamma((p as f64 + 1.0) / 2.0)).exp();
    let sphere_form = scale * sphere_volume(p) / sphere_volume(p - 1);
    Ok((log_form, sphere_form))
}

/// `√π Γ(p/2) / Γ((p+1)/2)` by the recurrence `c(p+2) = p/(p+1) · c(p)`
/// from `c(1) = π`, `c(2) = 2`.
fn gamma_ratio(p: u32) -> f64 {
    let mut c = if p % 2 == 1 { PI } else { 2.0 };
    let mut q = 2 - p % 2;
    while q < p {
        c *= q as f64 / (q as f64 + 1.0);
        q += 2;
    }
    c
}

/// Closed form of [`gamma_identity_lhs`]. Panics if the recurrence, log-Γ
/// and sphere-volume forms disagree beyond 1e-12 relative.
pub fn gamma_identity_rhs(p: u32, a: f64) -> Result<f64> {
    let (log_form, sphere_form) = gamma_identity_forms(p, a)?;
    let value = gamma_ratio(p) * a.powf(-(p as f64) / 2.0);
    for form in [log_form, sphere_form] {
        assert!(
            (value - form).abs() <= FORM_AGREEMENT * value.abs(),
            "closed forms disagree: {value} vs {form}"
        );
    }
    Ok(value)
}

/// `I = ∫_{R^k} dz / (ρ² + |z|²)^{(p+1)/2}` computed as `k` nested
/// one-dimensional integrals, and its closed form
/// `vol S^p / vol S^{p-k} / ρ^{p-k+1}`.
pub fn iterated_tail_identity(p: u32, k: u32, rho: f64) -> Result<(f64, f64)> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidInput(format!("k must lie in 1..=3, got {k}")));
    }
    if p < k + 1 || p > 20 {
        return Err(Error::InvalidInput(format!(
            "need 1 <= p - k and p <= 20, got p = {p}, k = {k}"
        )));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidInput(format!("rho must be positive, got {rho}")));
    }
    let numeric = nested(p, k, rho * rho)?;
    let reduced = p - k;
    let closed = sphere_volume(p) / sphere_volume(reduced) / rho.powi(reduced as i32 + 1);
    Ok((numeric, closed))
}

/// Integrates `(a + z_1² + ... + z_left²)^{-(p+1)/2}` over the remaining
/// coordinates, innermost last.
fn nested(p: u32, left: u32, a: f64) -> Result<f64> {
    let s = (p as f64 + 1.0) / 2.0;
    if left == 0 {
        return Ok(a.powf(-s));
    }
    // After integrating out `left - 1` inner coordinates the integrand decays
    // like |z|^{-(p + 1 - (left - 1))}.
    let decay = (p + 2 - left) as f64;
    let failure = RefCell::new(None);
    let value = integral_even_decay(
        |z| match nested(p, left - 1, a + z * z) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        decay,
    );
    match (value, failure.into_inner()) {
        (_, Some(e)) => Err(e),
        (v, None) => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((gamma_identity_lhs(2, 1.0).unwrap() - 2.0).abs() < 1e-10);
        assert!((gamma_identity_lhs(1, 1.0).unwrap() - PI).abs() < 1e-10);
        assert!((gamma_identity_lhs(3, 1.0).unwrap() - PI / 2.0).abs() < 1e-10);
        assert_eq!(gamma_identity_rhs(2, 1.0).unwrap(), 2.0);
        assert!((gamma_identity_rhs(2, 4.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn lhs_matches_rhs() {
        for p in 1..=6 {
            for a in [0.5, 1.0, 2.0] {
                let l = gamma_identity_lhs(p, a).unwrap();
                let r = gamma_identity_rhs(p, a).unwrap();
                assert!((l - r).abs() < 1e-9, "p={p} a={a}: {l} vs {r}");
            }
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(gamma_identity_lhs(2, 0.0).is_err());
        assert!(gamma_identity_rhs(0, 1.0).is_err());
        assert!(iterated_tail_identity(2, 2, 1.0).is_err());
        assert!(iterated_tail_identity(6, 4, 1.0).is_err());
    }

    #[test]
    fn iterated_tails() {
        let (n, c) = iterated_tail_identity(2, 1, 1.0).unwrap();
        assert!((n - 2.0).abs() < 1e-10 && (c - 2.0).abs() < 1e-14);
        let (n, c) = iterated_tail_identity(3, 2, 1.0).unwrap();
        assert!((c - PI).abs() < 1e-13);
        assert!((n - c).abs() < 1e-8);
        let (_, c2) = iterated_tail_identity(3, 2, 2.0).unwrap();
        assert!((c2 - c / 4.0).abs() < 1e-14);
    }
}
