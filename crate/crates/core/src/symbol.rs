//! Matrix-valued Laurent polynomials on the unit circle.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::grid::SampleGrid;
use crate::linalg::{cr, frob_norm, identity, CMat, ZERO};

/// `sum_{k = min_deg}^{max_deg} C_k z^k` with `rows x cols` complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    rows: usize,
    cols: usize,
    min_deg: i64,
    coeffs: Vec<CMat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl MatrixSymbol {
    pub fn new(rows: usize, cols: usize, min_deg: i64, coeffs: Vec<CMat>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(HardyError::InvalidSymbol("rows and cols must be positive".into()));
        }
        if coeffs.is_empty() {
            return Err(HardyError::InvalidSymbol("empty coefficient list".into()));
        }
        if let Some((k, m)) = coeffs.iter().enumerate().find(|(_, m)| m.shape() != (rows, cols)) {
            return Err(HardyError::InvalidSymbol(format!(
                "coefficient {} has shape {:?}, expected ({rows}, {cols})",
                min_deg + k as i64,
                m.shape()
            )));
        }
        Ok(MatrixSymbol { rows, cols, min_deg, coeffs })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixSymbol { rows, cols, min_deg: 0, coeffs: vec![CMat::zeros(rows, cols)] }
    }

    pub fn constant(m: CMat) -> Self {
        let (rows, cols) = m.shape();
        MatrixSymbol { rows, cols, min_deg: 0, coeffs: vec![m] }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(identity(n))
    }

    /// `m * z^k`.
    pub fn monomial(m: CMat, k: i64) -> Self {
        let (rows, cols) = m.shape();
        MatrixSymbol { rows, cols, min_deg: k, coeffs: vec![m] }
    }

    /// Scalar Laurent polynomial with coefficients starting at `min_deg`.
    pub fn scalar(min_deg: i64, coeffs: &[Complex64]) -> Self {
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs.to_vec() };
        MatrixSymbol {
            rows: 1,
            cols: 1,
            min_deg,
            coeffs: coeffs.into_iter().map(|c| CMat::from_element(1, 1, c)).collect(),
        }
    }

    /// Scalar polynomial from real coefficients `c_0, c_1, ...`.
    pub fn real_poly(coeffs: &[f64]) -> Self {
        let cs: Vec<Complex64> = coeffs.iter().map(|&x| cr(x)).collect();
        Self::scalar(0, &cs)
    }

    /// Assembles a matrix symbol from scalar entries given row-major.
    pub fn from_entries(rows: usize, cols: usize, entries: &[MatrixSymbol]) -> Result<Self> {
        if entries.len() != rows * cols || entries.iter().any(|e| e.rows != 1 || e.cols != 1) {
            return Err(HardyError::DimensionMismatch("from_entries expects rows*cols scalar symbols".into()));
        }
        let lo = entries.iter().map(|e| e.min_deg).min().unwrap();
        let hi = entries.iter().map(|e| e.max_deg()).max().unwrap();
        let mut coeffs = vec![CMat::zeros(rows, cols); (hi - lo + 1) as usize];
        for (idx, e) in entries.iter().enumerate() {
            let (r, c) = (idx / cols, idx % cols);
            for k in e.min_deg..=e.max_deg() {
                coeffs[(k - lo) as usize][(r, c)] = e.coeff(k)[(0, 0)];
            }
        }
        Self::new(rows, cols, lo, coeffs)
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[MatrixSymbol]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let lo = blocks.iter().map(|b| b.min_deg).min().unwrap_or(0);
        let hi = blocks.iter().map(|b| b.max_deg()).max().unwrap_or(0);
        let mut coeffs = vec![CMat::zeros(rows, cols); (hi - lo + 1) as usize];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for k in b.min_deg..=b.max_deg() {
                coeffs[(k - lo) as usize].view_mut((r0, c0), (b.rows, b.cols)).copy_from(&b.coeff(k));
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        MatrixSymbol { rows, cols, min_deg: lo, coeffs }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// Coefficient at degree `k`; zero outside the stored range.
    pub fn coeff(&self, k: i64) -> CMat {
        self.coeff_ref(k).cloned().unwrap_or_else(|| CMat::zeros(self.rows, self.cols))
    }

    pub fn coeff_ref(&self, k: i64) -> Option<&CMat> {
        if k < self.min_deg || k > self.max_deg() {
            None
        } else {
            Some(&self.coeffs[(k - self.min_deg) as usize])
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> MatrixSymbol {
        let cs: Vec<Complex64> = self.coeffs.iter().map(|m| m[(r, c)]).collect();
        MatrixSymbol::scalar(self.min_deg, &cs)
    }

    pub fn column(&self, c: usize) -> MatrixSymbol {
        MatrixSymbol {
            rows: self.rows,
            cols: 1,
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|m| m.columns(c, 1).into_owned()).collect(),
        }
    }

    /// Coefficients re-expressed over `[lo, hi]` (zero padded or cut).
    pub fn with_range(&self, lo: i64, hi: i64) -> MatrixSymbol {
        let coeffs = (lo..=hi.max(lo)).map(|k| self.coeff(k)).collect();
        MatrixSymbol { rows: self.rows, cols: self.cols, min_deg: lo, coeffs }
    }

    /// Keeps degrees `<= n`.
    pub fn truncate(&self, n: i64) -> MatrixSymbol {
        if self.min_deg > n {
            return MatrixSymbol { min_deg: 0, ..Self::zeros(self.rows, self.cols) };
        }
        self.with_range(self.min_deg, n.min(self.max_deg()))
    }

    /// Drops leading and trailing coefficients whose Frobenius norm is `<= tol`.
    pub fn trim(&self, tol: f64) -> MatrixSymbol {
        let keep: Vec<usize> = (0..self.coeffs.len()).filter(|&i| frob_norm(&self.coeffs[i]) > tol).collect();
        match (keep.first(), keep.last()) {
            (Some(&a), Some(&b)) => MatrixSymbol {
                rows: self.rows,
                cols: self.cols,
                min_deg: self.min_deg + a as i64,
                coeffs: self.coeffs[a..=b].to_vec(),
            },
            _ => Self::zeros(self.rows, self.cols),
        }
    }

    /// Highest degree carrying a coefficient above `tol`, or 0.
    pub fn effective_degree(&self, tol: f64) -> i64 {
        let t = self.trim(tol);
        if t.coeffs.len() == 1 && frob_norm(&t.coeffs[0]) <= tol {
            0
        } else {
            t.max_deg()
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.min_deg >= 0 || (self.min_deg..0).all(|k| frob_norm(&self.coeff(k)) == 0.0)
    }

    /// Analytic symbols re-based to start at degree 0.
    pub fn analytic_part_from_zero(&self) -> MatrixSymbol {
        self.with_range(0, self.max_deg().max(0))
    }

    pub fn scale(&self, s: Complex64) -> MatrixSymbol {
        MatrixSymbol {
            rows: self.rows,
            cols: self.cols,
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|m| m * s).collect(),
        }
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul_const(&self, m: &CMat) -> MatrixSymbol {
        MatrixSymbol {
            rows: m.nrows(),
            cols: self.cols,
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|c| m * c).collect(),
        }
    }

    pub fn right_mul_const(&self, m: &CMat) -> MatrixSymbol {
        MatrixSymbol {
            rows: self.rows,
            cols: m.ncols(),
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|c| c * m).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> MatrixSymbol {
        MatrixSymbol { min_deg: self.min_deg + k, ..self.clone() }
    }

    fn check_same_shape(&self, other: &MatrixSymbol) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(HardyError::DimensionMismatch(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MatrixSymbol) -> Result<MatrixSymbol> {
        self.check_same_shape(other)?;
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(MatrixSymbol { rows: self.rows, cols: self.cols, min_deg: lo, coeffs })
    }

    pub fn try_sub(&self, other: &MatrixSymbol) -> Result<MatrixSymbol> {
        self.try_add(&other.scale(cr(-1.0)))
    }

    /// Exact Cauchy product.
    pub fn mul(&self, other: &MatrixSymbol) -> Result<MatrixSymbol> {
        if self.cols != other.rows {
            return Err(HardyError::DimensionMismatch(format!(
                "symbol product {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![CMat::zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.iter().all(|z| *z == ZERO) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(MatrixSymbol { rows: self.rows, cols: other.cols, min_deg: self.min_deg + other.min_deg, coeffs })
    }

    /// Product truncated to degrees `<= n` (power-series multiplication).
    pub fn mul_trunc(&self, other: &MatrixSymbol, n: i64) -> Result<MatrixSymbol> {
        self.truncate(n).mul(&other.truncate(n)).map(|p| p.truncate(n))
    }

    /// Boundary adjoint: coefficient `k` becomes `C_{-k}^H`.
    pub fn adjoint_flip(&self) -> MatrixSymbol {
        let coeffs = self.coeffs.iter().rev().map(|m| m.adjoint()).collect();
        MatrixSymbol { rows: self.cols, cols: self.rows, min_deg: -self.max_deg(), coeffs }
    }

    /// Riesz projection onto non-negative (`Plus`) or negative (`Minus`) degrees.
    pub fn riesz_project(&self, sign: Sign) -> MatrixSymbol {
        match sign {
            Sign::Plus => {
                if self.max_deg() < 0 {
                    Self::zeros(self.rows, self.cols)
                } else {
                    self.with_range(self.min_deg.max(0), self.max_deg())
                }
            }
            Sign::Minus => {
                if self.min_deg >= 0 {
                    MatrixSymbol { min_deg: -1, ..Self::zeros(self.rows, self.cols) }
                } else {
                    self.with_range(self.min_deg, self.max_deg().min(-1))
                }
            }
        }
    }

    /// L^2 norm on the circle with the Frobenius norm on values.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|m| m.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>().sqrt()
    }

    /// Largest absolute coefficient difference over the union of ranges.
    pub fn max_coeff_diff(&self, other: &MatrixSymbol) -> f64 {
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        (lo..=hi)
            .map(|k| (self.coeff(k) - other.coeff(k)).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Point evaluation: Horner inside the disc, Laurent sum on the circle.
    pub fn eval(&self, z: Complex64) -> Result<CMat> {
        let r = z.norm();
        if r > 1.0 + 1e-12 {
            return Err(HardyError::OutsideDisc(r));
        }
        let has_negative = self.min_deg < 0 && !self.is_analytic();
        if has_negative && (r - 1.0).abs() > 1e-12 {
            return Err(HardyError::LaurentInterior(r));
        }
        let lo = if has_negative { self.min_deg } else { self.min_deg.max(0) };
        let mut acc = CMat::zeros(self.rows, self.cols);
        for k in (lo..=self.max_deg()).rev() {
            acc = acc * z + self.coeff(k);
        }
        if lo != 0 {
            acc *= z.powi(lo as i32);
        }
        Ok(acc)
    }

    pub fn samples(&self, grid: &SampleGrid) -> Vec<CMat> {
        grid.synthesize_matrix(self.rows, self.cols, self.min_deg, &self.coeffs)
    }

    /// Symbol with degrees `[lo, hi]` recovered from boundary samples.
    pub fn from_samples(grid: &SampleGrid, samples: &[CMat], lo: i64, hi: i64) -> Result<MatrixSymbol> {
        let (rows, cols) = samples
            .first()
            .map(|m| m.shape())
            .ok_or_else(|| HardyError::InvalidSymbol("no samples".into()))?;
        let coeffs = grid.analyze_matrix(samples, lo, hi)?;
        MatrixSymbol::new(rows, cols, lo, coeffs)
    }

    /// Degree-`n` Taylor truncation of a closed-form function analytic in the disc,
    /// obtained from its boundary samples.
    pub fn from_fn(
        grid: &SampleGrid,
        rows: usize,
        cols: usize,
        n: usize,
        f: impl Fn(Complex64) -> CMat,
    ) -> Result<MatrixSymbol> {
        let samples: Vec<CMat> = grid.points().into_iter().map(|z| f(z)).collect();
        if samples.iter().any(|m| m.shape() != (rows, cols)) {
            return Err(HardyError::DimensionMismatch("closed form returned a wrong shape".into()));
        }
        Self::from_samples(grid, &samples, 0, n as i64)
    }

    pub fn scalar_fn(grid: &SampleGrid, n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<MatrixSymbol> {
        Self::from_fn(grid, 1, 1, n, |z| CMat::from_element(1, 1, f(z)))
    }

    /// Power-series inverse to degree `n`; requires an invertible constant term.
    pub fn series_inverse(&self, n: usize) -> Result<MatrixSymbol> {
        if self.rows != self.cols {
            return Err(HardyError::DimensionMismatch("series inverse of a non-square symbol".into()));
        }
        if !self.is_analytic() {
            return Err(HardyError::Precondition("series inverse needs an analytic symbol".into()));
        }
        let a0_inv = crate::linalg::inverse(&self.coeff(0))
            .map_err(|e| HardyError::Singular(format!("constant term not invertible ({e})")))?;
        let mut out: Vec<CMat> = Vec::with_capacity(n + 1);
        out.push(a0_inv.clone());
        for k in 1..=n {
            let mut acc = CMat::zeros(self.rows, self.cols);
            for j in 1..=k {
                if let Some(aj) = self.coeff_ref(j as i64) {
                    acc += aj * &out[k - j];
                }
            }
            out.push(-(&a0_inv * acc));
        }
        MatrixSymbol::new(self.rows, self.cols, 0, out)
    }

    /// Solves `self * X = rhs` as power series to degree `n`.
    pub fn series_left_divide(&self, rhs: &MatrixSymbol, n: usize) -> Result<MatrixSymbol> {
        let inv = self.series_inverse(n)?;
        inv.mul_trunc(rhs, n as i64)
    }
}

impl Add for &MatrixSymbol {
    type Output = MatrixSymbol;
    fn add(self, rhs: &MatrixSymbol) -> MatrixSymbol {
        self.try_add(rhs).expect("symbol shapes must agree")
    }
}

impl Sub for &MatrixSymbol {
    type Output = MatrixSymbol;
    fn sub(self, rhs: &MatrixSymbol) -> MatrixSymbol {
        self.try_sub(rhs).expect("symbol shapes must agree")
    }
}

impl Mul for &MatrixSymbol {
    type Output = MatrixSymbol;
    fn mul(self, rhs: &MatrixSymbol) -> MatrixSymbol {
        MatrixSymbol::mul(self, rhs).expect("inner dimensions must agree")
    }
}

impl Neg for &MatrixSymbol {
    type Output = MatrixSymbol;
    fn neg(self) -> MatrixSymbol {
        self.scale(cr(-1.0))
    }
}

/// On-disk representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolJson {
    pub rows: usize,
    pub cols: usize,
    pub min_deg: i64,
    pub max_deg: i64,
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

impl From<&MatrixSymbol> for SymbolJson {
    fn from(s: &MatrixSymbol) -> Self {
        SymbolJson {
            rows: s.rows,
            cols: s.cols,
            min_deg: s.min_deg,
            max_deg: s.max_deg(),
            coeffs: s
                .coeffs
                .iter()
                .map(|m| {
                    (0..s.rows)
                        .flat_map(|r| (0..s.cols).map(move |c| (r, c)))
                        .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<SymbolJson> for MatrixSymbol {
    type Error = HardyError;

    fn try_from(j: SymbolJson) -> Result<Self> {
        if j.max_deg < j.min_deg {
            return Err(HardyError::InvalidSymbol(format!("max_deg {} < min_deg {}", j.max_deg, j.min_deg)));
        }
        let count = (j.max_deg - j.min_deg + 1) as usize;
        if j.coeffs.len() != count {
            return Err(HardyError::InvalidSymbol(format!(
                "expected {count} coefficient matrices, found {}",
                j.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(count);
        for (k, flat) in j.coeffs.iter().enumerate() {
            if flat.len() != j.rows * j.cols {
                return Err(HardyError::InvalidSymbol(format!(
                    "coefficient {} has {} entries, expected {}",
                    j.min_deg + k as i64,
                    flat.len(),
                    j.rows * j.cols
                )));
            }
            let entries: Vec<Complex64> = flat.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            coeffs.push(CMat::from_row_slice(j.rows, j.cols, &entries));
        }
        MatrixSymbol::new(j.rows, j.cols, j.min_deg, coeffs)
    }
}

impl Serialize for MatrixSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SymbolJson::deserialize(d)?;
        MatrixSymbol::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl MatrixSymbol {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<MatrixSymbol> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};

    fn z_times(m: CMat) -> MatrixSymbol {
        MatrixSymbol::monomial(m, 1)
    }

    #[test]
    fn product_of_shifts() {
        let zi = z_times(identity(2));
        let p = &zi * &zi;
        assert_eq!((p.min_deg(), p.max_deg()), (2, 2));
        assert_eq!(p.coeff(2), identity(2));
    }

    #[test]
    fn inverse_pair_diag() {
        let mut d0 = CMat::zeros(2, 2);
        d0[(1, 1)] = ONE;
        let mut dm2 = CMat::zeros(2, 2);
        dm2[(0, 0)] = ONE;
        let left = MatrixSymbol::monomial(dm2.clone(), -2).try_add(&MatrixSymbol::constant(d0.clone())).unwrap();
        let right = MatrixSymbol::monomial(dm2, 2).try_add(&MatrixSymbol::constant(d0)).unwrap();
        let p = (&left * &right).trim(0.0);
        assert_eq!(p, MatrixSymbol::identity(2));
    }

    #[test]
    fn garcia_times_adjoint_is_identity() {
        // U = 1/2 [[1+z, -(1-z)], [z-1, 1+z]]
        let h = cr(0.5);
        let u0 = CMat::from_row_slice(2, 2, &[h, -h, -h, h]);
        let u1 = CMat::from_row_slice(2, 2, &[h, h, h, h]);
        let u = MatrixSymbol::new(2, 2, 0, vec![u0, u1]).unwrap();
        let p = (&u * &u.adjoint_flip()).trim(1e-15);
        assert_eq!(p.max_coeff_diff(&MatrixSymbol::identity(2)), 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let a = MatrixSymbol::scalar(0, &[c(1.0, 2.0), c(0.0, -1.0)]);
        let f = a.adjoint_flip();
        assert_eq!((f.min_deg(), f.max_deg()), (-1, 0));
        assert_eq!(f.coeff(-1)[(0, 0)], c(0.0, 1.0));
        assert_eq!(f.coeff(0)[(0, 0)], c(1.0, -2.0));
        let zb2 = MatrixSymbol::scalar(-2, &[ONE]);
        assert_eq!(zb2.adjoint_flip(), MatrixSymbol::scalar(2, &[ONE]));
    }

    #[test]
    fn riesz_examples() {
        let s = MatrixSymbol::scalar(-1, &[ONE, ONE, ONE]);
        assert_eq!(s.riesz_project(Sign::Plus), MatrixSymbol::scalar(0, &[ONE, ONE]));
        assert_eq!(s.riesz_project(Sign::Minus), MatrixSymbol::scalar(-1, &[ONE]));
        // p+(U* B) with U = z, B = z^2/2 gives z/2.
        let u = MatrixSymbol::scalar(1, &[ONE]);
        let b = MatrixSymbol::scalar(2, &[cr(0.5)]);
        let p = (&u.adjoint_flip() * &b).riesz_project(Sign::Plus);
        assert_eq!(p.trim(0.0), MatrixSymbol::scalar(1, &[cr(0.5)]));
    }

    #[test]
    fn evaluation_examples() {
        let f = MatrixSymbol::real_poly(&[1.0, 1.0]);
        let v = f.eval(c(0.0, 1.0)).unwrap()[(0, 0)];
        assert!((v - c(1.0, 1.0)).norm() < 1e-15);
        let zb = MatrixSymbol::scalar(-1, &[ONE]);
        assert!(matches!(zb.eval(cr(0.5)), Err(HardyError::LaurentInterior(_))));
        let grid = SampleGrid::new(512).unwrap();
        let b = MatrixSymbol::scalar_fn(&grid, 64, |z| z / (2.0 + z)).unwrap();
        assert!(b.eval(ZERO).unwrap()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn series_inverse_of_two_plus_z() {
        let p = MatrixSymbol::real_poly(&[2.0, 1.0]);
        let inv = p.series_inverse(10).unwrap();
        for k in 0..=10 {
            let expect = (-1f64).powi(k) / 2f64.powi(k + 1);
            assert!((inv.coeff(k as i64)[(0, 0)].re - expect).abs() < 1e-16);
        }
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let s = MatrixSymbol::scalar(-1, &[c(1.0, -1.0), cr(2.0)]);
        let text = s.to_json();
        assert_eq!(text, r#"{"rows":1,"cols":1,"min_deg":-1,"max_deg":0,"coeffs":[[[1.0,-1.0]],[[2.0,0.0]]]}"#);
        assert_eq!(MatrixSymbol::from_json(&text).unwrap(), s);
        assert!(MatrixSymbol::from_json(r#"{"rows":1,"cols":1,"min_deg":0,"max_deg":1,"coeffs":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = MatrixSymbol::zeros(2, 3);
        let b = MatrixSymbol::zeros(2, 3);
        assert!(matches!(a.mul(&b), Err(HardyError::DimensionMismatch(_))));
    }
}
