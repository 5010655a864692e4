use std::fmt;

use linkproj::Error;

/// An input error: bad arguments, unreadable scene, inapplicable method.
/// Always exits with status 1.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub hint: Option<String>,
}

impl CliError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}", self.message)?;
        if let Some(h) = &self.hint {
            write!(f, "\nhint: {h}")?;
        }
        Ok(())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let hint = hint_for(&e);
        Self {
            message: e.to_string(),
            hint,
        }
    }
}

/// Remediation advice for numerical failures.
pub fn hint_for(e: &Error) -> Option<String> {
    let h = match e {
        Error::ToleranceNotReached { .. } => "raise --max-nodes or loosen --tol",
        Error::DisjointnessViolation { .. } => "the objects touch or intersect; move them apart",
        Error::NonTransverse { .. } => {
            "a curve meets the reduction plane tangentially; perturb the scene"
        }
        Error::OpenContour { .. } => {
            "the slice reaches a chart boundary; use a hyperplane that avoids the poles"
        }
        Error::NonGenericProjection(_) => "try another --seed",
        Error::ImmersionFailure { .. } => "the parameterization has zero speed somewhere",
        Error::NotInHyperplane { .. } => "no object lies in a coordinate hyperplane",
        Error::SceneFormat(_) => "see the scene format section of the README",
        _ => return None,
    };
    Some(h.to_string())
}
