//! Boundary sample grid on the unit circle.
//!
//! Samples sit at the half-offset points `exp(i*pi*(2j+1)/K)`, so no sample
//! ever lands on `z = 1` or `z = -1`, where the fixture functions vanish.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{HardyError, Result};
use crate::linalg::{CMat, ZERO};

#[derive(Clone)]
pub struct SampleGrid {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SampleGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampleGrid").field("size", &self.size).finish()
    }
}

impl SampleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() {
            return Err(HardyError::Config(format!("grid size {size} is not a power of two")));
        }
        let mut planner = FftPlanner::new();
        Ok(SampleGrid {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn angle(&self, j: usize) -> f64 {
        PI * (2 * j + 1) as f64 / self.size as f64
    }

    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(j))
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.size).map(|j| self.point(j)).collect()
    }

    #[inline]
    fn half_shift(&self, k: i64) -> Complex64 {
        Complex64::from_polar(1.0, PI * k as f64 / self.size as f64)
    }

    #[inline]
    fn slot(&self, k: i64) -> usize {
        k.rem_euclid(self.size as i64) as usize
    }

    /// Values `sum_k c_k xi_j^k` at every grid point for a scalar coefficient run.
    ///
    /// Degree spans longer than the grid fold onto it; the phase factor keeps
    /// the folded sum equal to the true sample value.
    pub fn synthesize(&self, min_deg: i64, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; self.size];
        for (i, &ck) in coeffs.iter().enumerate() {
            let k = min_deg + i as i64;
            buf[self.slot(k)] += ck * self.half_shift(k);
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// Fourier coefficients for degrees `min_deg..=max_deg` from grid values.
    pub fn analyze(&self, values: &[Complex64], min_deg: i64, max_deg: i64) -> Result<Vec<Complex64>> {
        if values.len() != self.size {
            return Err(HardyError::DimensionMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                self.size
            )));
        }
        if max_deg < min_deg || (max_deg - min_deg + 1) as usize > self.size {
            return Err(HardyError::Config(format!(
                "degree range [{min_deg}, {max_deg}] does not fit a grid of {}",
                self.size
            )));
        }
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.size as f64;
        Ok((min_deg..=max_deg)
            .map(|k| buf[self.slot(k)] * self.half_shift(k).conj() * scale)
            .collect())
    }

    /// Matrix-valued synthesis: one matrix per grid point.
    pub fn synthesize_matrix(&self, rows: usize, cols: usize, min_deg: i64, coeffs: &[CMat]) -> Vec<CMat> {
        let mut out = vec![CMat::zeros(rows, cols); self.size];
        let mut run = vec![ZERO; coeffs.len()];
        for r in 0..rows {
            for c in 0..cols {
                for (slot, m) in run.iter_mut().zip(coeffs) {
                    *slot = m[(r, c)];
                }
                let vals = self.synthesize(min_deg, &run);
                for (o, v) in out.iter_mut().zip(vals) {
                    o[(r, c)] = v;
                }
            }
        }
        out
    }

    pub fn analyze_matrix(&self, samples: &[CMat], min_deg: i64, max_deg: i64) -> Result<Vec<CMat>> {
        let (rows, cols) = samples.first().map(|m| m.shape()).unwrap_or((0, 0));
        let count = (max_deg - min_deg + 1).max(0) as usize;
        let mut out = vec![CMat::zeros(rows, cols); count];
        let mut vals = vec![ZERO; samples.len()];
        for r in 0..rows {
            for c in 0..cols {
                for (v, m) in vals.iter_mut().zip(samples) {
                    *v = m[(r, c)];
                }
                let coefs = self.analyze(&vals, min_deg, max_deg)?;
                for (o, v) in out.iter_mut().zip(coefs) {
                    o[(r, c)] = v;
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthesis_matches_direct_sum() {
        let g = SampleGrid::new(16).unwrap();
        let coeffs = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 3.0)];
        let vals = g.synthesize(-1, &coeffs);
        for (j, v) in vals.iter().enumerate() {
            let z = g.point(j);
            let direct = coeffs[0] / z + coeffs[1] + coeffs[2] * z;
            assert!((v - direct).norm() < 1e-13);
        }
        let back = g.analyze(&vals, -1, 1).unwrap();
        for (a, b) in back.iter().zip(coeffs.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn folding_keeps_exact_samples() {
        let g = SampleGrid::new(4).unwrap();
        let coeffs: Vec<Complex64> = (0..9).map(|k| Complex64::new(1.0 / (k + 1) as f64, 0.0)).collect();
        let vals = g.synthesize(0, &coeffs);
        for (j, v) in vals.iter().enumerate() {
            let z = g.point(j);
            let direct: Complex64 = coeffs.iter().enumerate().map(|(k, c)| c * z.powi(k as i32)).sum();
            assert!((v - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn no_sample_at_minus_one() {
        let g = SampleGrid::new(512).unwrap();
        assert!(g.points().iter().all(|z| (z + 1.0).norm() > 1e-3));
    }
}
