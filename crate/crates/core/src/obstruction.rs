use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{solve_linear_system, RingMatrix};

/// A linear system that had to be solvable for a construction to proceed but
/// was not. The full system is kept so the failure can be replayed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    /// The construction that stopped, e.g. `theta_extend`.
    pub stage: String,
    /// Inductive level (the `n` of `d_n`, or the `k` of `s_k`).
    pub level: i64,
    /// Remaining coordinates of the failing block.
    pub index: Vec<i64>,
    pub coeffs: RingMatrix,
    pub rhs: RingMatrix,
}

impl Obstruction {
    pub fn new(stage: &str, level: i64, index: Vec<i64>, coeffs: RingMatrix, rhs: RingMatrix) -> Self {
        Obstruction { stage: stage.to_string(), level, index, coeffs, rhs }
    }

    /// Re-runs the stored solve; `true` means it is still inconsistent.
    pub fn replay(&self) -> Result<bool> {
        Ok(solve_linear_system(&self.coeffs, &self.rhs)?.is_none())
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} blocked at level {} index {:?} ({} equations, {} unknowns)",
            self.stage,
            self.level,
            self.index,
            self.coeffs.rows(),
            self.coeffs.cols()
        )
    }
}
