use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

/// Numerical knobs shared by every construction.
///
/// `grid_size` is the number of boundary samples used for pointwise work;
/// it must be a power of two and at least `4 * (trunc_degree + 1)` so that
/// products of two degree-`trunc_degree` factors do not alias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub trunc_degree: usize,
    pub grid_size: usize,
    pub rank_tol: f64,
    pub residual_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            trunc_degree: 64,
            grid_size: 512,
            rank_tol: 1e-8,
            residual_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(trunc_degree: usize, grid_size: usize, rank_tol: f64, residual_tol: f64) -> Result<Self> {
        let cfg = ToleranceConfig { trunc_degree, grid_size, rank_tol, residual_tol };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Same tolerances at another truncation degree; the grid grows if needed.
    pub fn with_degree(&self, n: usize) -> Self {
        let mut grid = self.grid_size;
        while grid < 4 * (n + 1) {
            grid *= 2;
        }
        ToleranceConfig { trunc_degree: n, grid_size: grid, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.grid_size.is_power_of_two() {
            return Err(HardyError::Config(format!("grid_size {} is not a power of two", self.grid_size)));
        }
        if self.grid_size < 4 * (self.trunc_degree + 1) {
            return Err(HardyError::Config(format!(
                "grid_size {} < 4 * (N + 1) = {}",
                self.grid_size,
                4 * (self.trunc_degree + 1)
            )));
        }
        if !(self.rank_tol > 0.0 && self.residual_tol > 0.0) {
            return Err(HardyError::Config("tolerances must be positive".into()));
        }
        Ok(())
    }
}
