//! Finite sections of block Toeplitz operators, kernels and identity residuals.

use crate::element::HardyElement;
use crate::error::{HardyError, Result};
use crate::linalg::{identity, null_space, orth, spectral_norm, CMat, CVec};
use crate::symbol::MatrixSymbol;

/// The compression of `T_phi` to polynomials of degree `<= N`.
#[derive(Debug, Clone)]
pub struct BlockToeplitz {
    pub symbol: MatrixSymbol,
    pub degree: usize,
    pub matrix: CMat,
}

impl BlockToeplitz {
    pub fn rows(&self) -> usize {
        self.symbol.rows()
    }

    pub fn cols(&self) -> usize {
        self.symbol.cols()
    }

    /// Applies the section to `f`, padded or cut to degree `N`.
    pub fn apply(&self, f: &HardyElement) -> Result<HardyElement> {
        if f.dim() != self.cols() {
            return Err(HardyError::DimensionMismatch(format!(
                "operator on C^{} applied to C^{}",
                self.cols(),
                f.dim()
            )));
        }
        let x = f.stacked_to_degree(self.degree);
        HardyElement::from_stacked(self.rows(), &(&self.matrix * x))
    }

    pub fn norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }
}

/// Block `(j, k)` of the result is the coefficient of degree `j - k`.
pub fn build_toeplitz(phi: &MatrixSymbol, n: usize) -> BlockToeplitz {
    let (p, q) = phi.shape();
    let mut m = CMat::zeros(p * (n + 1), q * (n + 1));
    for j in 0..=n {
        for k in 0..=n {
            if let Some(c) = phi.coeff_ref(j as i64 - k as i64) {
                m.view_mut((j * p, k * q), (p, q)).copy_from(c);
            }
        }
    }
    BlockToeplitz { symbol: phi.clone(), degree: n, matrix: m }
}

/// Ordered family of elements of `H^2(C^m)` truncated to a common degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub dim: usize,
    pub degree: usize,
    pub elements: Vec<HardyElement>,
}

impl SubspaceBasis {
    pub fn empty(dim: usize, degree: usize) -> Self {
        SubspaceBasis { dim, degree, elements: Vec::new() }
    }

    /// Columns are stacked coefficient vectors (degree-major).
    pub fn from_matrix(dim: usize, degree: usize, cols: &CMat) -> Result<Self> {
        if cols.nrows() != dim * (degree + 1) {
            return Err(HardyError::DimensionMismatch(format!(
                "{} rows for dimension {dim} and degree {degree}",
                cols.nrows()
            )));
        }
        let elements = cols
            .column_iter()
            .map(|c| HardyElement::from_stacked(dim, &c.into_owned()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubspaceBasis { dim, degree, elements })
    }

    /// Orthonormal basis for the span of arbitrary elements (cut to `degree`).
    pub fn orthonormalize(dim: usize, degree: usize, elements: &[HardyElement], rel_tol: f64) -> Result<Self> {
        for e in elements {
            if e.dim() != dim {
                return Err(HardyError::DimensionMismatch("mixed ambient dimensions".into()));
            }
        }
        let raw = Self::stack(dim, degree, elements);
        Self::from_matrix(dim, degree, &orth(&raw, rel_tol))
    }

    fn stack(dim: usize, degree: usize, elements: &[HardyElement]) -> CMat {
        let mut m = CMat::zeros(dim * (degree + 1), elements.len());
        for (j, e) in elements.iter().enumerate() {
            m.set_column(j, &e.stacked_to_degree(degree));
        }
        m
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn matrix(&self) -> CMat {
        Self::stack(self.dim, self.degree, &self.elements)
    }

    pub fn gram(&self) -> CMat {
        let m = self.matrix();
        m.adjoint() * m
    }

    pub fn orthonormality_defect(&self) -> f64 {
        crate::linalg::frob_norm(&(self.gram() - identity(self.len())))
    }

    /// Orthogonal projection of a stacked vector onto the span (assumes orthonormal columns).
    pub fn project(&self, v: &CVec) -> CVec {
        let q = self.matrix();
        &q * (q.adjoint() * v)
    }
}

/// Output of [`kernel_basis`]: the basis plus the spectral evidence behind it.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub basis: SubspaceBasis,
    pub sigma: Vec<f64>,
    pub gap: f64,
    /// False when no clear singular-value gap separates the kernel.
    pub determinate: bool,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Smallest singular value of the section.
    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }
}

pub fn kernel_basis(t: &BlockToeplitz, rank_tol: f64) -> KernelBasis {
    let ns = null_space(&t.matrix, rank_tol);
    let basis = SubspaceBasis::from_matrix(t.cols(), t.degree, &ns.basis)
        .expect("null space has the domain's row count");
    KernelBasis { basis, sigma: ns.sigma, gap: ns.gap, determinate: ns.determinate }
}

/// Largest principal angle between two spans; `pi/2` when their dimensions differ.
pub fn subspace_angle(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<f64> {
    if a.dim != b.dim || a.degree != b.degree {
        return Err(HardyError::DimensionMismatch(format!(
            "subspaces of H^2(C^{}) deg {} and H^2(C^{}) deg {}",
            a.dim, a.degree, b.dim, b.degree
        )));
    }
    if a.len() != b.len() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let qa = orth(&a.matrix(), 1e-12);
    let qb = orth(&b.matrix(), 1e-12);
    if qa.ncols() != qb.ncols() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    let resid = &qa - &qb * (qb.adjoint() * &qa);
    Ok(spectral_norm(&resid).min(1.0).asin())
}

/// Expressions built from Toeplitz sections.
#[derive(Debug, Clone)]
pub enum OpExpr {
    Toeplitz(MatrixSymbol),
    Identity(usize),
    Product(Box<OpExpr>, Box<OpExpr>),
    Sum(Box<OpExpr>, Box<OpExpr>),
    Difference(Box<OpExpr>, Box<OpExpr>),
    Adjoint(Box<OpExpr>),
    Scale(f64, Box<OpExpr>),
}

impl OpExpr {
    pub fn toeplitz(s: &MatrixSymbol) -> Self {
        OpExpr::Toeplitz(s.clone())
    }

    pub fn then(self, rhs: OpExpr) -> Self {
        OpExpr::Product(Box::new(self), Box::new(rhs))
    }

    pub fn plus(self, rhs: OpExpr) -> Self {
        OpExpr::Sum(Box::new(self), Box::new(rhs))
    }

    pub fn minus(self, rhs: OpExpr) -> Self {
        OpExpr::Difference(Box::new(self), Box::new(rhs))
    }

    pub fn adjoint(self) -> Self {
        OpExpr::Adjoint(Box::new(self))
    }

    pub fn scaled(self, s: f64) -> Self {
        OpExpr::Scale(s, Box::new(self))
    }

    /// Dense matrix at degree `n` with its (output, input) channel counts.
    pub fn evaluate(&self, n: usize) -> Result<(CMat, usize, usize)> {
        Ok(match self {
            OpExpr::Toeplitz(s) => (build_toeplitz(s, n).matrix, s.rows(), s.cols()),
            OpExpr::Identity(m) => (identity(m * (n + 1)), *m, *m),
            OpExpr::Product(a, b) => {
                let (ma, pa, qa) = a.evaluate(n)?;
                let (mb, pb, qb) = b.evaluate(n)?;
                if qa != pb {
                    return Err(HardyError::DimensionMismatch(format!("product of C^{qa} and C^{pb} operators")));
                }
                (ma * mb, pa, qb)
            }
            OpExpr::Sum(a, b) | OpExpr::Difference(a, b) => {
                let (ma, pa, qa) = a.evaluate(n)?;
                let (mb, pb, qb) = b.evaluate(n)?;
                if (pa, qa) != (pb, qb) {
                    return Err(HardyError::DimensionMismatch(format!("{pa}x{qa} and {pb}x{qb} operators")));
                }
                let m = if matches!(self, OpExpr::Sum(..)) { ma + mb } else { ma - mb };
                (m, pa, qa)
            }
            OpExpr::Adjoint(a) => {
                let (m, p, q) = a.evaluate(n)?;
                (m.adjoint(), q, p)
            }
            OpExpr::Scale(s, a) => {
                let (m, p, q) = a.evaluate(n)?;
                (m * crate::linalg::cr(*s), p, q)
            }
        })
    }
}

/// Spectral norm of `lhs - rhs` compressed to degrees `<= N/2`.
pub fn operator_residual(lhs: &OpExpr, rhs: &OpExpr, n: usize) -> Result<f64> {
    let (ml, pl, ql) = lhs.evaluate(n)?;
    let (mr, pr, qr) = rhs.evaluate(n)?;
    if (pl, ql) != (pr, qr) {
        return Err(HardyError::DimensionMismatch(format!("{pl}x{ql} vs {pr}x{qr} operators")));
    }
    let w = n / 2 + 1;
    let diff = ml - mr;
    Ok(spectral_norm(&diff.view((0, 0), (w * pl, w * ql)).into_owned()))
}
