use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Thresholds shared by the ground-state and energetics stages.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances<T> {
    /// Gaps below this are treated as a degenerate (symmetry-broken) pair.
    pub tol_deg: T,
    /// Bloch-vector norms below this leave the extremal direction undefined.
    pub tol_bloch: T,
    /// Excitation energies at or below this make the energy ratio infinite.
    pub eer_floor: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            tol_deg: T::lit(1e-3),
            tol_bloch: T::lit(1e-9),
            eer_floor: T::lit(1e-10),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("tol_deg", self.tol_deg),
            ("tol_bloch", self.tol_bloch),
            ("eer_floor", self.eer_floor),
        ] {
            if !(value > T::zero() && value.is_finite()) {
                return Err(Error::InvalidSolver {
                    field,
                    reason: format!("must be positive, got {value}"),
                });
            }
        }
        Ok(())
    }
}
