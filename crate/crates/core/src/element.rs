//! Analytic vector polynomials `f_0 + f_1 z + ... + f_N z^N`.

use num_complex::Complex64;

use crate::error::{HardyError, Result};
use crate::linalg::{CMat, CVec, ZERO};
use crate::symbol::MatrixSymbol;

#[derive(Debug, Clone, PartialEq)]
pub struct HardyElement {
    dim: usize,
    coeffs: Vec<CVec>,
}

impl HardyElement {
    pub fn new(dim: usize, coeffs: Vec<CVec>) -> Result<Self> {
        if dim == 0 || coeffs.is_empty() {
            return Err(HardyError::InvalidSymbol("element needs dim > 0 and at least one coefficient".into()));
        }
        if coeffs.iter().any(|v| v.len() != dim) {
            return Err(HardyError::DimensionMismatch(format!("coefficients must have length {dim}")));
        }
        Ok(HardyElement { dim, coeffs })
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        HardyElement { dim, coeffs: vec![CVec::zeros(dim); degree + 1] }
    }

    pub fn constant(v: CVec) -> Self {
        HardyElement { dim: v.len(), coeffs: vec![v] }
    }

    /// Stacked layout: entry `k * dim + i` is channel `i` at degree `k`.
    pub fn from_stacked(dim: usize, v: &CVec) -> Result<Self> {
        if dim == 0 || v.len() % dim != 0 || v.is_empty() {
            return Err(HardyError::DimensionMismatch(format!("stacked length {} not a multiple of {dim}", v.len())));
        }
        let coeffs = v.as_slice().chunks(dim).map(CVec::from_column_slice).collect();
        Ok(HardyElement { dim, coeffs })
    }

    pub fn to_stacked(&self) -> CVec {
        let mut out = CVec::zeros(self.dim * self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.rows_mut(k * self.dim, self.dim).copy_from(c);
        }
        out
    }

    /// Stacked vector padded or cut to degree `n`.
    pub fn stacked_to_degree(&self, n: usize) -> CVec {
        self.with_degree(n).to_stacked()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CVec] {
        &self.coeffs
    }

    pub fn with_degree(&self, n: usize) -> HardyElement {
        let coeffs = (0..=n)
            .map(|k| self.coeffs.get(k).cloned().unwrap_or_else(|| CVec::zeros(self.dim)))
            .collect();
        HardyElement { dim: self.dim, coeffs }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    /// `<self, other>` in H^2, linear in the first argument.
    pub fn inner(&self, other: &HardyElement) -> Complex64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| b.dotc(a)).sum()
    }

    pub fn eval(&self, z: Complex64) -> CVec {
        let mut acc = CVec::zeros(self.dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn value_at_zero(&self) -> CVec {
        self.coeffs[0].clone()
    }

    /// Backward shift `S^* f = (f - f(0)) / z`.
    pub fn backward_shift(&self) -> HardyElement {
        if self.coeffs.len() == 1 {
            return HardyElement::zero(self.dim, 0);
        }
        HardyElement { dim: self.dim, coeffs: self.coeffs[1..].to_vec() }
    }

    pub fn to_symbol(&self) -> MatrixSymbol {
        let coeffs = self.coeffs.iter().map(|v| CMat::from_column_slice(self.dim, 1, v.as_slice())).collect();
        MatrixSymbol::new(self.dim, 1, 0, coeffs).expect("element shapes are consistent")
    }

    /// Analytic part of an `m x 1` symbol, degrees `0..=n`.
    pub fn from_symbol(s: &MatrixSymbol, n: usize) -> Result<HardyElement> {
        if s.cols() != 1 {
            return Err(HardyError::DimensionMismatch(format!("element from a {}-column symbol", s.cols())));
        }
        let coeffs = (0..=n as i64).map(|k| CVec::from_column_slice(s.coeff(k).as_slice())).collect();
        HardyElement::new(s.rows(), coeffs)
    }

    /// `p_+(s f)` truncated to degree `n`; products are formed exactly first.
    pub fn apply_symbol(&self, s: &MatrixSymbol, n: usize) -> Result<HardyElement> {
        HardyElement::from_symbol(&s.mul(&self.to_symbol())?, n)
    }

    pub fn add(&self, other: &HardyElement) -> Result<HardyElement> {
        self.sub(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> HardyElement {
        HardyElement { dim: self.dim, coeffs: self.coeffs.iter().map(|v| v * s).collect() }
    }

    pub fn sub(&self, other: &HardyElement) -> Result<HardyElement> {
        if self.dim != other.dim {
            return Err(HardyError::DimensionMismatch("element dims differ".into()));
        }
        let n = self.degree().max(other.degree());
        let a = self.with_degree(n);
        let b = other.with_degree(n);
        let coeffs = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x - y).collect();
        Ok(HardyElement { dim: self.dim, coeffs })
    }

    /// Szegő kernel `u / (1 - conj(lambda) z)` to degree `n`.
    pub fn szego_kernel(lambda: Complex64, u: &CVec, n: usize) -> HardyElement {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            coeffs.push(u * p);
            p *= lambda.conj();
        }
        HardyElement { dim: u.len(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| v.iter().all(|z| *z == ZERO))
    }
}
