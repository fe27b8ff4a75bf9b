//! Samplewise matrix functions on the boundary grid.

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::grid::SampleGrid;
use crate::linalg::{expm, hermitian_deviation, hermitian_eig, hermitian_fn, polar, CMat};
use crate::symbol::MatrixSymbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointwiseKind {
    SqrtPsd,
    LogPd,
    Exp,
    Polar,
}

/// A boundary function known only through its grid values.
#[derive(Debug, Clone)]
pub struct BoundaryFunction {
    pub grid: SampleGrid,
    pub values: Vec<CMat>,
}

impl BoundaryFunction {
    pub fn sample(symbol: &MatrixSymbol, grid: &SampleGrid) -> Self {
        BoundaryFunction { grid: grid.clone(), values: symbol.samples(grid) }
    }

    pub fn to_symbol(&self, lo: i64, hi: i64) -> Result<MatrixSymbol> {
        MatrixSymbol::from_samples(&self.grid, &self.values, lo, hi)
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        BoundaryFunction { grid: self.grid.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(usize, &CMat) -> Result<CMat>) -> Result<Self> {
        let values = self.values.iter().enumerate().map(|(i, m)| f(i, m)).collect::<Result<Vec<_>>>()?;
        Ok(BoundaryFunction { grid: self.grid.clone(), values })
    }

    /// Largest Frobenius distance to another sampled function.
    pub fn max_diff(&self, other: &BoundaryFunction) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| crate::linalg::frob_norm(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(crate::linalg::spectral_norm).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub enum Pointwise {
    Value(BoundaryFunction),
    /// `a = unitary * positive` at every sample.
    Polar { unitary: BoundaryFunction, positive: BoundaryFunction },
}

const PSD_SLACK: f64 = 1e-12;

fn check_hermitian(i: usize, m: &CMat) -> Result<()> {
    let dev = hermitian_deviation(m);
    if dev > 1e-10 * crate::linalg::frob_norm(m).max(1.0) {
        return Err(HardyError::Precondition(format!("sample {i} not Hermitian ({dev:.3e})")));
    }
    Ok(())
}

pub fn sqrt_psd(f: &BoundaryFunction) -> Result<BoundaryFunction> {
    f.try_map(|i, m| {
        check_hermitian(i, m)?;
        let (vals, _) = hermitian_eig(m);
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if vals[0] < -PSD_SLACK * scale {
            return Err(HardyError::NotPositive { index: i, min_eig: vals[0] });
        }
        Ok(hermitian_fn(m, |l| l.max(0.0).sqrt()))
    })
}

pub fn log_pd(f: &BoundaryFunction) -> Result<BoundaryFunction> {
    f.try_map(|i, m| {
        check_hermitian(i, m)?;
        let (vals, _) = hermitian_eig(m);
        if vals[0] <= 0.0 {
            return Err(HardyError::NotPositive { index: i, min_eig: vals[0] });
        }
        Ok(hermitian_fn(m, f64::ln))
    })
}

pub fn exp(f: &BoundaryFunction) -> BoundaryFunction {
    f.map(expm)
}

pub fn polar_split(f: &BoundaryFunction) -> Result<(BoundaryFunction, BoundaryFunction)> {
    let mut us = Vec::with_capacity(f.values.len());
    let mut ps = Vec::with_capacity(f.values.len());
    for (i, m) in f.values.iter().enumerate() {
        let (u, p) = polar(m).map_err(|_| HardyError::Singular(format!("sample {i} is singular")))?;
        us.push(u);
        ps.push(p);
    }
    Ok((
        BoundaryFunction { grid: f.grid.clone(), values: us },
        BoundaryFunction { grid: f.grid.clone(), values: ps },
    ))
}

/// Principal-branch matrix functions applied at every grid sample of `a`.
pub fn matrix_pointwise(a: &MatrixSymbol, kind: PointwiseKind, grid: &SampleGrid) -> Result<Pointwise> {
    let f = BoundaryFunction::sample(a, grid);
    if a.rows() != a.cols() {
        return Err(HardyError::DimensionMismatch("pointwise functions need square samples".into()));
    }
    Ok(match kind {
        PointwiseKind::SqrtPsd => Pointwise::Value(sqrt_psd(&f)?),
        PointwiseKind::LogPd => Pointwise::Value(log_pd(&f)?),
        PointwiseKind::Exp => Pointwise::Value(exp(&f)),
        PointwiseKind::Polar => {
            let (unitary, positive) = polar_split(&f)?;
            Pointwise::Polar { unitary, positive }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, identity};

    fn grid() -> SampleGrid {
        SampleGrid::new(64).unwrap()
    }

    #[test]
    fn sqrt_of_three_quarters() {
        let a = MatrixSymbol::constant(identity(2) * cr(0.75));
        let Pointwise::Value(r) = matrix_pointwise(&a, PointwiseKind::SqrtPsd, &grid()).unwrap() else {
            panic!()
        };
        for v in &r.values {
            assert!(crate::linalg::frob_norm(&(v - identity(2) * cr(0.75f64.sqrt()))) < 1e-14);
        }
    }

    #[test]
    fn polar_of_unitary_is_identity_modulus() {
        let u = MatrixSymbol::monomial(identity(2), 1);
        let Pointwise::Polar { unitary, positive } = matrix_pointwise(&u, PointwiseKind::Polar, &grid()).unwrap() else {
            panic!()
        };
        for (p, (w, a)) in positive.values.iter().zip(unitary.values.iter().zip(BoundaryFunction::sample(&u, &grid()).values)) {
            assert!(crate::linalg::frob_norm(&(p - identity(2))) < 1e-12);
            assert!(crate::linalg::frob_norm(&(w * p - a)) < 1e-12);
        }
    }

    #[test]
    fn log_exp_roundtrip() {
        // I - B*B for B = diag(1/2, -1/2).
        let mut b = CMat::zeros(2, 2);
        b[(0, 0)] = cr(0.5);
        b[(1, 1)] = cr(-0.5);
        let phi = MatrixSymbol::identity(2).try_sub(&MatrixSymbol::constant(b.adjoint() * &b)).unwrap();
        let f = BoundaryFunction::sample(&phi, &grid());
        let back = exp(&log_pd(&f).unwrap());
        assert!(back.max_diff(&f) < 1e-12);
    }

    #[test]
    fn indefinite_rejected() {
        let a = MatrixSymbol::constant(-identity(1));
        assert!(matches!(
            matrix_pointwise(&a, PointwiseKind::SqrtPsd, &grid()),
            Err(HardyError::NotPositive { .. })
        ));
        assert!(matrix_pointwise(&MatrixSymbol::zeros(2, 2), PointwiseKind::Polar, &grid()).is_err());
    }
}
