use crate::error::{Error, Result};
use crate::geometry::{sampled_distance, PatchManifold, DISJOINTNESS_TOL};
use crate::invariants::{degree_linking, LinkingResult, QuadratureConfig, CERTIFY_TOL};

/// Linking number of the family at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopySample {
    pub lambda: f64,
    pub distance: f64,
    pub linking: LinkingResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyReport {
    pub samples: Vec<HomotopySample>,
    /// All rounded values equal and every residual below the certification
    /// threshold.
    pub passed: bool,
}

impl HomotopyReport {
    pub fn values(&self) -> Vec<i64> {
        self.samples.iter().map(|s| s.linking.rounded).collect()
    }
}

/// Distance below which a jump in the linking number is attributed to the
/// family passing one object through the other.
const CONTACT_SUSPECT: f64 = 0.05;

/// Evaluates the linking number of `family(λ)` at `samples` evenly spaced
/// `λ ∈ [0, 1]`.
///
/// A family that loses disjointness is reported as `DisjointnessViolation`
/// carrying the offending `λ`: either a sample lands on a contact, or the
/// rounded value jumps between two samples and the minimum distance over that
/// interval is small.
pub fn homotopy_invariance_check<F>(
    family: F,
    samples: usize,
    config: &QuadratureConfig,
) -> Result<HomotopyReport>
where
    F: Fn(f64) -> Result<[PatchManifold; 2]>,
{
    if samples < 2 {
        return Err(Error::InvalidInput(format!(
            "homotopy check needs at least 2 samples, got {samples}"
        )));
    }
    let mut out: Vec<HomotopySample> = Vec::with_capacity(samples);
    for k in 0..samples {
        let lambda = k as f64 / (samples - 1) as f64;
        let [a, b] = family(lambda)?;
        let distance = sampled_distance(&a, &b);
        if !(distance > DISJOINTNESS_TOL) {
            return Err(Error::DisjointnessViolation {
                distance,
                lambda: Some(lambda),
            });
        }
        let linking = match degree_linking(&a, &b, config) {
            Err(Error::DisjointnessViolation { distance, .. }) => {
                return Err(Error::DisjointnessViolation {
                    distance,
                    lambda: Some(lambda),
                })
            }
            Err(Error::ToleranceNotReached { best }) => LinkingResult::new(best),
            other => other?,
        };
        if let Some(prev) = out.last() {
            if prev.linking.rounded != linking.rounded {
                let (lambda, distance) = closest_approach(&family, prev.lambda, lambda)?;
                if distance < CONTACT_SUSPECT {
                    return Err(Error::DisjointnessViolation {
                        distance,
                        lambda: Some(lambda),
                    });
                }
            }
        }
        out.push(HomotopySample {
            lambda,
            distance,
            linking,
        });
    }
    let first = out[0].linking.rounded;
    let passed = out
        .iter()
        .all(|s| s.linking.rounded == first && s.linking.residual < CERTIFY_TOL);
    Ok(HomotopyReport {
        samples: out,
        passed,
    })
}

/// Golden-section search for the parameter of smallest distance in `[lo, hi]`.
fn closest_approach<F>(family: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<[PatchManifold; 2]>,
{
    let dist = |l: f64| -> Result<f64> {
        let [a, b] = family(l)?;
        Ok(sampled_distance(&a, &b))
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (dist(x1)?, dist(x2)?);
    for _ in 0..40 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = dist(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = dist(x2)?;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}
