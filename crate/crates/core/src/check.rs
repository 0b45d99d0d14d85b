//! Named inequality checks. Every verification in this workspace is recorded
//! as a measured value against a bound, never as a bare boolean, so reports
//! stay auditable.

use serde::{Deserialize, Serialize};

/// One verified inequality: `measured <= bound` with the verdict attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Records the check `measured <= bound`.
    pub fn le(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }

    /// Records `|measured - expected| <= tol`; the deviation becomes the
    /// measured side of the stored inequality.
    pub fn near(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Self::le(name, (measured - expected).abs(), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn le_check_sets_verdict() {
        assert!(Check::le("x", 1.0, 2.0).pass);
        assert!(!Check::le("x", 3.0, 2.0).pass);
    }

    #[test]
    fn near_check_uses_deviation() {
        let c = Check::near("y", 1.0 + 5e-11, 1.0, 1e-10);
        assert!(c.pass);
        assert!(c.measured <= 1e-10);
    }
}
