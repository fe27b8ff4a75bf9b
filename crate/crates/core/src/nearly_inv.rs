//! Model spaces, nearly invariant subspaces and the Sarason construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::element::HardyElement;
use crate::error::{HardyError, Result};
use crate::grid::SampleGrid;
use crate::inner_outer::{divide_inner, garcia_inner, Division};
use crate::linalg::{c, cr, frob_norm, identity, inverse, null_space_abs, orth, orth_abs, spectral_norm, CMat, CVec};
use crate::symbol::{MatrixSymbol, Sign};
use crate::toeplitz::{build_toeplitz, kernel_basis, operator_residual, OpExpr, SubspaceBasis};
use crate::transform::{cayley, herglotz_taylor};

/// `K_U = ker T_{U*}`, from the exact section at degree `N - deg U`.
///
/// Co-analytic sections act exactly on polynomials, so for polynomial `U` of degree
/// `d` the kernel is found in full once `N >= 2d`.
pub fn model_space_basis(u: &MatrixSymbol, n: usize, rank_tol: f64) -> Result<SubspaceBasis> {
    if u.rows() != u.cols() || !u.is_analytic() {
        return Err(HardyError::Precondition("model spaces need a square analytic inner symbol".into()));
    }
    let d = u.trim(0.0).max_deg().max(0) as usize;
    if n < 2 * d {
        return Err(HardyError::Precondition(format!("degree {n} is too small for an inner function of degree {d}")));
    }
    let kb = kernel_basis(&build_toeplitz(&u.adjoint_flip(), n - d), rank_tol);
    if !kb.determinate {
        return Err(HardyError::Precondition(format!("model space cut is ambiguous (gap {:.3e})", kb.gap)));
    }
    Ok(kb.basis)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NearInvariance {
    pub nearly_invariant: bool,
    /// Distance of `S* (F ∩ zH^2)` from `F`.
    pub residual: f64,
}

/// Definition of near `S*`-invariance checked on the span.
pub fn is_nearly_invariant(f: &SubspaceBasis, tol: f64) -> NearInvariance {
    let q = orth(&f.matrix(), 1e-12);
    if q.ncols() == 0 {
        return NearInvariance { nearly_invariant: true, residual: 0.0 };
    }
    let m = f.dim;
    let e = q.rows(0, m).into_owned();
    let vanish = null_space_abs(&e, 1e-10);
    if vanish.ncols() == 0 {
        return NearInvariance { nearly_invariant: true, residual: 0.0 };
    }
    let g = &q * vanish;
    // Backward shift on stacked coefficients: drop the first block.
    let mut shifted = CMat::zeros(g.nrows(), g.ncols());
    let len = g.nrows() - m;
    shifted.view_mut((0, 0), (len, g.ncols())).copy_from(&g.view((m, 0), (len, g.ncols())));
    let outside = &shifted - &q * (q.adjoint() * &shifted);
    let residual = spectral_norm(&outside);
    NearInvariance { nearly_invariant: residual <= tol, residual }
}

/// Orthonormal basis of `W = F ⊖ (F ∩ zH^2)` as the columns of `G`, gauged so that
/// `G(0)` is lower triangular with positive diagonal.
pub fn extract_w(f: &SubspaceBasis) -> Result<(MatrixSymbol, usize)> {
    let q = orth(&f.matrix(), 1e-10);
    if q.ncols() == 0 {
        return Err(HardyError::Precondition("trivial subspace".into()));
    }
    let m = f.dim;
    let e = q.rows(0, m).into_owned();
    let range = orth_abs(&e.adjoint(), 1e-10);
    let r = range.ncols();
    if r == 0 {
        return Err(HardyError::Precondition("every element vanishes at 0".into()));
    }
    let g0 = &e * &range;
    let qr = g0.adjoint().qr();
    let (mut q1, rr) = (qr.q(), qr.r());
    for i in 0..r {
        let d = rr[(i, i)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let col = q1.column(i) * phase;
            q1.set_column(i, &col);
        }
    }
    let w = &q * &range * &q1;
    let coeffs = (0..=f.degree).map(|k| w.view((k * m, 0), (m, r)).into_owned()).collect();
    Ok((MatrixSymbol::new(m, r, 0, coeffs)?, r))
}

/// Herglotz data of `G*G`: `F` and the imaginary part `V` of `F(0)`.
#[derive(Debug, Clone)]
pub struct HerglotzData {
    pub f: MatrixSymbol,
    pub density: MatrixSymbol,
    pub v: CMat,
}

impl HerglotzData {
    pub fn from_density(density: MatrixSymbol, n: usize) -> Result<Self> {
        let f = herglotz_taylor(&density, n)?;
        let f0 = f.coeff(0);
        let v = (&f0 - f0.adjoint()) * c(0.0, -0.5);
        Ok(HerglotzData { f, density, v })
    }
}

pub fn sarason_b(g: &MatrixSymbol, n: usize, residual_tol: f64) -> Result<(HerglotzData, MatrixSymbol)> {
    let density = g.adjoint_flip().mul(g)?;
    let data = HerglotzData::from_density(density, n)?;
    let dev = frob_norm(&(data.f.coeff(0) - identity(g.cols())));
    if dev > residual_tol.max(1e-10) {
        return Err(HardyError::Precondition(format!("columns of G are not orthonormal (F(0) off by {dev:.3e})")));
    }
    let b = cayley(&data.f, n)?;
    Ok((data, b))
}

/// `(I - B(z) B(lambda)^*) u / (1 - conj(lambda) z)` to degree `n`.
pub fn dbr_kernel(b: &MatrixSymbol, lambda: Complex64, u: &CVec, n: usize) -> Result<HardyElement> {
    if lambda.norm() >= 1.0 {
        return Err(HardyError::OutsideDisc(lambda.norm()));
    }
    let w = b.eval(lambda)?.adjoint() * u;
    let numerator = HardyElement::constant(u.clone()).sub(&HardyElement::constant(w).apply_symbol(b, n)?)?;
    let numerator = numerator.with_degree(n);
    // Division by 1 - conj(lambda) z: h_k = p_k + conj(lambda) h_{k-1}.
    let mut coeffs: Vec<CVec> = Vec::with_capacity(n + 1);
    for (k, p) in numerator.coeffs().iter().enumerate() {
        let next = if k == 0 { p.clone() } else { p + &coeffs[k - 1] * lambda.conj() };
        coeffs.push(next);
    }
    HardyElement::new(u.len(), coeffs)
}

/// A test point for the kernel identity: `(w, u, z, v)`.
pub type KernelProbe = (Complex64, CVec, Complex64, CVec);

/// Largest gap between `<G k_w u, G k_z v>` and the de Branges-Rovnyak closed form
/// `<(I - B(z)B(w)^*) a, b> / (1 - conj(w) z)`, `a = (I - B(w)^*)^{-1} u`, `b = (I - B(z)^*)^{-1} v`.
pub fn verify_lemma31(g: &MatrixSymbol, b: &MatrixSymbol, probes: &[KernelProbe], n: usize) -> Result<f64> {
    let r = g.cols();
    let mut worst = 0.0f64;
    for (w, u, z, v) in probes {
        let lhs_a = HardyElement::szego_kernel(*w, u, n).apply_symbol(g, 2 * n)?;
        let lhs_b = HardyElement::szego_kernel(*z, v, n).apply_symbol(g, 2 * n)?;
        let lhs = lhs_a.inner(&lhs_b);
        let bw = b.eval(*w)?;
        let bz = b.eval(*z)?;
        let a = inverse(&(identity(r) - bw.adjoint()))? * u;
        let bb = inverse(&(identity(r) - bz.adjoint()))? * v;
        let kernel = (identity(r) - &bz * bw.adjoint()) * a / (cr(1.0) - w.conj() * z);
        let rhs = bb.dotc(&kernel);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Gram of `{p_+(G h)}` over an orthonormal basis of `K_U`, minus the identity.
pub fn isometry_defect(g: &MatrixSymbol, k_u: &SubspaceBasis, n: usize) -> Result<f64> {
    let images = k_u
        .elements
        .iter()
        .map(|h| h.apply_symbol(g, 2 * n))
        .collect::<Result<Vec<_>>>()?;
    let gram = CMat::from_fn(images.len(), images.len(), |i, j| images[j].inner(&images[i]));
    Ok(spectral_norm(&(gram - identity(images.len()))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    /// All three criteria vanish.
    Holds,
    /// All three criteria are bounded away from zero.
    Fails,
    /// The criteria disagree beyond the 10x band; raise N.
    Indeterminate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SarasonReport {
    pub isometry_defect: f64,
    pub divisibility_defect: f64,
    pub tb_star_annihilation: f64,
    pub tolerance: f64,
    pub verdict: Agreement,
}

/// Classifies three quantities that must vanish together.
pub fn agreement(values: &[f64], tol: f64) -> Agreement {
    let small = values.iter().filter(|&&x| x <= tol).count();
    let large = values.iter().filter(|&&x| x > 10.0 * tol).count();
    if small == values.len() {
        Agreement::Holds
    } else if small == 0 {
        Agreement::Fails
    } else if large == 0 {
        Agreement::Holds
    } else {
        Agreement::Indeterminate
    }
}

/// Evaluates the three equivalent divisibility criteria for `G K_U`.
pub fn sarason_equivalence(
    g: &MatrixSymbol,
    u: &MatrixSymbol,
    n: usize,
    grid: &SampleGrid,
    rank_tol: f64,
    residual_tol: f64,
) -> Result<SarasonReport> {
    let k_u = model_space_basis(u, n, rank_tol)?;
    let (_, b) = sarason_b(g, n, residual_tol)?;
    let isometry_defect = isometry_defect(g, &k_u, n)?;
    let divisibility_defect = match divide_inner(&b, u, grid, residual_tol)? {
        Division::Quotient(_) => u.adjoint_flip().mul(&b)?.riesz_project(Sign::Minus).l2_norm(),
        Division::Failure { defect } => defect,
    };
    let b_star = b.adjoint_flip();
    let mut tb_star_annihilation = 0.0f64;
    for h in &k_u.elements {
        tb_star_annihilation = tb_star_annihilation.max(h.apply_symbol(&b_star, n)?.norm());
    }
    let verdict = agreement(&[isometry_defect, divisibility_defect, tb_star_annihilation], residual_tol);
    Ok(SarasonReport { isometry_defect, divisibility_defect, tb_star_annihilation, tolerance: residual_tol, verdict })
}

/// Section-level data for the operator `T_{I-B} T_{G*}`.
#[derive(Debug, Clone)]
pub struct DbrContext {
    pub b: MatrixSymbol,
    pub g: MatrixSymbol,
    pub degree: usize,
}

#[derive(Debug, Clone)]
pub struct GDivision {
    pub quotient: HardyElement,
    /// `||G h - f||`.
    pub residual: f64,
    /// `| ||h|| - ||f|| |`.
    pub norm_gap: f64,
}

impl DbrContext {
    pub fn new(g: &MatrixSymbol, b: &MatrixSymbol, n: usize) -> Self {
        DbrContext { b: b.clone(), g: g.clone(), degree: n }
    }

    /// `T_{I-B} T_{G*} f`, which divides elements of `G K_U` by `G`.
    pub fn divide(&self, f: &HardyElement) -> Result<HardyElement> {
        let n = self.degree;
        let p = f.apply_symbol(&self.g.adjoint_flip(), n)?;
        let i_minus_b = MatrixSymbol::identity(self.b.rows()).try_sub(&self.b)?;
        p.apply_symbol(&i_minus_b.truncate(n as i64), n)
    }

    /// Matrix of `T_{I-B} T_{G*}` on degrees `<= N`.
    pub fn section(&self) -> Result<CMat> {
        let i_minus_b = MatrixSymbol::identity(self.b.rows()).try_sub(&self.b)?;
        Ok(OpExpr::toeplitz(&i_minus_b).then(OpExpr::toeplitz(&self.g.adjoint_flip())).evaluate(self.degree)?.0)
    }
}

pub fn divide_by_g(f: &HardyElement, g: &MatrixSymbol, b: &MatrixSymbol, n: usize, residual_tol: f64) -> Result<GDivision> {
    let ctx = DbrContext::new(g, b, n);
    let h = ctx.divide(f)?;
    let back = h.apply_symbol(g, f.degree().max(n))?;
    let residual = back.sub(f)?.norm();
    let norm_gap = (h.norm() - f.norm()).abs();
    if residual > 10.0 * residual_tol {
        return Err(HardyError::Precondition(format!("element is not divisible by G (residual {residual:.3e})")));
    }
    Ok(GDivision { quotient: h, residual, norm_gap })
}

/// Spectral-norm residual of `(T_{I-B}T_{G*})(T_{I-B}T_{G*})^* = I - T_B T_{B*}` on the inner window.
pub fn theorem34_residual(g: &MatrixSymbol, b: &MatrixSymbol, n: usize) -> Result<f64> {
    let r = b.rows();
    let i_minus_b = MatrixSymbol::identity(r).try_sub(b)?;
    let x = OpExpr::toeplitz(&i_minus_b).then(OpExpr::toeplitz(&g.adjoint_flip()));
    let lhs = x.clone().then(x.adjoint());
    let rhs = OpExpr::Identity(r).minus(OpExpr::toeplitz(b).then(OpExpr::toeplitz(&b.adjoint_flip())));
    operator_residual(&lhs, &rhs, n)
}

/// `L^2` mass of `p_-(U* B U)` for `B = [[b1, b2], [-b2, -b1]]` and the inner `U` built
/// from `theta` with `a = (1 + theta)/2`, `b = -i(1 - theta)/2`.
pub fn counterexample_ubu(
    theta: &MatrixSymbol,
    b1: &MatrixSymbol,
    b2: &MatrixSymbol,
    grid: &SampleGrid,
    residual_tol: f64,
) -> Result<f64> {
    let b = MatrixSymbol::from_entries(2, 2, &[b1.clone(), b2.clone(), -b2, -b1])?;
    let worst = b.samples(grid).iter().map(spectral_norm).fold(0.0, f64::max);
    if worst > 1.0 + 1e-12 {
        return Err(HardyError::NotContraction(worst));
    }
    let one = MatrixSymbol::identity(1);
    let a = one.try_add(theta)?.scale(cr(0.5));
    let bb = one.try_sub(theta)?.scale(c(0.0, -0.5));
    let u = garcia_inner(theta, &a, &bb, grid, residual_tol)?;
    let ubu = u.adjoint_flip().mul(&b)?.mul(&u)?;
    Ok(ubu.riesz_project(Sign::Minus).l2_norm())
}
