//! Pairs, special pairs, rigidity, and the decision procedure for Toeplitz kernels.
//!
//! A nearly invariant subspace `F = G K_U` is classified by splitting its Sarason
//! function as `B = U B0`, forming `A' = (I - B0 U) G`, and asking whether
//! `(B0, A')` is special and `G0'^2` is rigid, where `G0' = (I - B0)^{-1} A'`.

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::element::HardyElement;
use crate::error::{HardyError, Result};
use crate::grid::SampleGrid;
use crate::inner_outer::{bauer_factorize, divide_inner, shift_span, Division, OuterReport, OuterVerdict};
use crate::linalg::{complement, frob_norm, hermitian_fn, hermitian_part, identity, inverse, spectral_norm, CMat, CVec};
use crate::nearly_inv::{model_space_basis, sarason_b, DbrContext};
use crate::symbol::MatrixSymbol;
use crate::toeplitz::{build_toeplitz, kernel_basis, subspace_angle, SubspaceBasis};
use crate::transform::{cayley, herglotz_taylor};

/// Smallest singular value a rigid section may reach.
pub const RIGIDITY_FLOOR: f64 = 1e-4;
/// Allowed decay of `sigma_min` from the first to the last ladder rung.
pub const RIGIDITY_DECAY: f64 = 0.5;
/// Largest tolerated change of the `G0'` Gram mass between `N/2` and `N`.
pub const GRAM_DRIFT: f64 = 1e-6;
/// Default ladder of truncation degrees.
pub const DEFAULT_LADDER: [usize; 3] = [16, 32, 64];

/// Which formula produces `G0'` from `(B0, A')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum G0Formula {
    /// `(I - B0)^{-1} A'`, matching the scalar `a / (1 - b0)`.
    #[default]
    Inverse,
    /// `(I - B0) A'`, the literal printed form; kept for comparison only.
    AsPrinted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HayashiConfig {
    pub tol: ToleranceConfig,
    pub ladder: Vec<usize>,
    /// Cross-check tolerance on the principal angle.
    pub angle_tol: f64,
    pub g0_formula: G0Formula,
}

impl Default for HayashiConfig {
    fn default() -> Self {
        HayashiConfig {
            tol: ToleranceConfig::default(),
            ladder: DEFAULT_LADDER.to_vec(),
            angle_tol: 1e-5,
            g0_formula: G0Formula::Inverse,
        }
    }
}

impl HayashiConfig {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if self.ladder.len() < 2 || self.ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HardyError::Config("ladder must be strictly increasing with at least two degrees".into()));
        }
        if self.ladder[0] == 0 {
            return Err(HardyError::Config("ladder degrees must be positive".into()));
        }
        Ok(())
    }

    /// Working degree: the larger of the truncation degree and the top rung.
    pub fn degree(&self) -> usize {
        self.tol.trunc_degree.max(*self.ladder.last().unwrap_or(&0))
    }

    pub fn grid(&self) -> Result<SampleGrid> {
        SampleGrid::new(self.tol.with_degree(self.degree()).grid_size)
    }
}

// ---------------------------------------------------------------------------
// Pairs and specialness

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialVerdict {
    Special,
    NotSpecial,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialReport {
    pub verdict: SpecialVerdict,
    pub mass_gap: f64,
    /// Hermitian part of `(I + B0(0)) (I - B0(0))^{-1}`.
    pub total_mass: f64,
    /// Trace of the Gram mass `sum_k G_k^H G_k`.
    pub gram_mass: f64,
    pub gram_drift: f64,
    pub formula: G0Formula,
}

/// `(B, A)` with `A*A + B*B = I` on the circle.
#[derive(Debug, Clone)]
pub struct Pair {
    pub b: MatrixSymbol,
    pub a: MatrixSymbol,
    pub boundary_defect: f64,
    pub mass_gap: f64,
    pub special: SpecialVerdict,
}

/// Largest grid deviation of `A^H A + B^H B` from the identity.
pub fn pair_identity_defect(b: &MatrixSymbol, a: &MatrixSymbol, grid: &SampleGrid) -> f64 {
    let r = b.cols();
    b.samples(grid)
        .iter()
        .zip(a.samples(grid).iter())
        .map(|(bs, as_)| frob_norm(&(as_.adjoint() * as_ + bs.adjoint() * bs - identity(r))))
        .fold(0.0, f64::max)
}

/// Builds the outer `A` with `A*A = I - B*B` and `A(0)` positive.
pub fn pair_from_b(b: &MatrixSymbol, n: usize, grid: &SampleGrid, residual_tol: f64) -> Result<Pair> {
    if !b.is_analytic() || b.rows() != b.cols() {
        return Err(HardyError::Precondition("pair needs a square analytic B".into()));
    }
    let worst = b.samples(grid).iter().map(spectral_norm).fold(0.0, f64::max);
    if worst > 1.0 + 1e-12 {
        return Err(HardyError::NotContraction(worst));
    }
    let r = b.rows();
    let phi = MatrixSymbol::identity(r).try_sub(&b.adjoint_flip().mul(b)?)?;
    let factor = bauer_factorize(&phi, n, grid)?;
    if factor.min_sample_eig <= residual_tol {
        return Err(HardyError::Precondition(format!(
            "extreme B: I - B*B has a sample eigenvalue {:.3e}",
            factor.min_sample_eig
        )));
    }
    let a = factor.factor;
    let boundary_defect = pair_identity_defect(b, &a, grid);
    let special = special_test(b, &a, n, residual_tol, G0Formula::Inverse)?;
    Ok(Pair { b: b.clone(), a, boundary_defect, mass_gap: special.mass_gap, special: special.verdict })
}

/// `G0'` from `(B0, A')` under the chosen formula, to degree `n`.
pub fn g0_prime(b0: &MatrixSymbol, a_prime: &MatrixSymbol, n: usize, formula: G0Formula) -> Result<MatrixSymbol> {
    let i_minus = MatrixSymbol::identity(b0.rows()).try_sub(b0)?;
    match formula {
        G0Formula::Inverse => i_minus.series_left_divide(a_prime, n),
        G0Formula::AsPrinted => i_minus.mul_trunc(a_prime, n as i64),
    }
}

fn gram_mass(g: &MatrixSymbol, n: usize) -> CMat {
    let mut acc = CMat::zeros(g.cols(), g.cols());
    for k in 0..=n as i64 {
        if let Some(c) = g.coeff_ref(k) {
            acc += c.adjoint() * c;
        }
    }
    acc
}

/// Compares the total mass `F0(0)` with the absolutely continuous mass of `G0'`.
pub fn special_test(
    b0: &MatrixSymbol,
    a_prime: &MatrixSymbol,
    n: usize,
    residual_tol: f64,
    formula: G0Formula,
) -> Result<SpecialReport> {
    let r = b0.rows();
    let b00 = b0.coeff(0);
    let inv = inverse(&(identity(r) - &b00)).map_err(|_| HardyError::Precondition("I - B0(0) is singular".into()))?;
    let total = hermitian_part(&((identity(r) + &b00) * inv));
    let g0 = g0_prime(b0, a_prime, n, formula)?;
    let gram = gram_mass(&g0, n);
    let half = gram_mass(&g0, n / 2);
    let gram_drift = frob_norm(&(&gram - &half));
    let mass_gap = frob_norm(&(&total - &gram));
    let verdict = if gram_drift > GRAM_DRIFT {
        SpecialVerdict::Indeterminate
    } else if mass_gap <= 10.0 * residual_tol {
        SpecialVerdict::Special
    } else {
        SpecialVerdict::NotSpecial
    };
    Ok(SpecialReport {
        verdict,
        mass_gap,
        total_mass: total.trace().re,
        gram_mass: gram.trace().re,
        gram_drift,
        formula,
    })
}

// ---------------------------------------------------------------------------
// Rigidity

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RigidityVerdict {
    Rigid,
    NonRigid,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct RigidityReport {
    pub verdict: RigidityVerdict,
    /// `(N, sigma_min)` of the section of `T_{F*F^{-1}}`.
    pub ladder: Vec<(usize, f64)>,
    /// Kernel vector of a section, with its degree and singular-value gap.
    pub witness: Option<RigidityWitness>,
    pub symbol: MatrixSymbol,
}

#[derive(Debug, Clone)]
pub struct RigidityWitness {
    pub degree: usize,
    pub vector: HardyElement,
    pub gap: f64,
    /// `||T v|| / ||v||`.
    pub residual: f64,
}

/// Coefficients `[-(K/2 - 1), K/2 - 1]` of a samplewise boundary function.
fn boundary_symbol(grid: &SampleGrid, samples: &[CMat]) -> Result<MatrixSymbol> {
    let h = (grid.size() / 2 - 1) as i64;
    MatrixSymbol::from_samples(grid, samples, -h, h)
}

/// Samples of `F^H F^{-1}`, formed pointwise.
pub fn rigidity_symbol(f: &MatrixSymbol, grid: &SampleGrid) -> Result<MatrixSymbol> {
    let samples = f
        .samples(grid)
        .iter()
        .map(|s| Ok(s.adjoint() * inverse(s)?))
        .collect::<Result<Vec<_>>>()?;
    boundary_symbol(grid, &samples)
}

/// Decides whether `F^2` is rigid from the sections of `T_{F*F^{-1}}` along the ladder.
pub fn rigidity_test(f: &MatrixSymbol, ladder: &[usize], grid: &SampleGrid, rank_tol: f64) -> Result<RigidityReport> {
    if f.rows() != f.cols() {
        return Err(HardyError::DimensionMismatch("rigidity needs a square F".into()));
    }
    let top = *ladder.last().ok_or_else(|| HardyError::Config("empty ladder".into()))?;
    let outer = shift_span(f, top, rank_tol, rank_tol)?;
    if outer.verdict == OuterVerdict::NotOuter {
        return Err(HardyError::NotOuter(outer.reason));
    }
    let psi = rigidity_symbol(f, grid)?;
    let mut rungs = Vec::new();
    let mut witness = None;
    for &n in ladder {
        let t = build_toeplitz(&psi, n);
        let kb = kernel_basis(&t, rank_tol);
        rungs.push((n, kb.sigma_min()));
        if witness.is_none() && kb.dim() > 0 && kb.determinate {
            let v = kb.basis.elements[0].clone();
            let residual = (&t.matrix * v.to_stacked()).norm() / v.norm();
            if residual <= 10.0 * rank_tol {
                witness = Some(RigidityWitness { degree: n, vector: v, gap: kb.gap, residual });
            }
        }
    }
    let first = rungs[0].1;
    let last = rungs.last().unwrap().1;
    let floor_ok = rungs.iter().all(|&(_, s)| s >= RIGIDITY_FLOOR);
    let verdict = if witness.is_some() {
        RigidityVerdict::NonRigid
    } else if floor_ok && last >= RIGIDITY_DECAY * first && outer.verdict == OuterVerdict::Outer {
        RigidityVerdict::Rigid
    } else {
        RigidityVerdict::Indeterminate
    };
    Ok(RigidityReport { verdict, ladder: rungs, witness, symbol: psi })
}

// ---------------------------------------------------------------------------
// Symbols

/// Boundary symbol `Theta diag(G~* U* G~^{-1}, I) Theta*` together with its largest sample norm.
pub fn toeplitz_symbol(
    g_reduced: &MatrixSymbol,
    u: &MatrixSymbol,
    theta: &CMat,
    grid: &SampleGrid,
) -> Result<(MatrixSymbol, f64)> {
    let r = g_reduced.rows();
    let m = theta.nrows();
    if g_reduced.cols() != r || u.shape() != (r, r) || theta.ncols() != m {
        return Err(HardyError::DimensionMismatch("toeplitz_symbol needs square G~, U and Theta".into()));
    }
    let gs = g_reduced.samples(grid);
    let us = u.samples(grid);
    let mut out = Vec::with_capacity(gs.len());
    for (j, (g, uu)) in gs.iter().zip(us.iter()).enumerate() {
        let g_inv = inverse(g).map_err(|_| HardyError::Singular(format!("G~ is singular at sample {j}")))?;
        let core = g.adjoint() * uu.adjoint() * g_inv;
        let mut full = identity(m);
        full.view_mut((0, 0), (r, r)).copy_from(&core);
        out.push(theta * full * theta.adjoint());
    }
    let max_norm = out.iter().map(spectral_norm).fold(0.0, f64::max);
    Ok((boundary_symbol(grid, &out)?, max_norm))
}

/// `{p_+(G h) : h in K_U}` orthonormalized at degree `n`.
pub fn image_basis(g: &MatrixSymbol, u: &MatrixSymbol, n: usize, rank_tol: f64) -> Result<SubspaceBasis> {
    let k_u = model_space_basis(u, n, rank_tol)?;
    let images = k_u.elements.iter().map(|h| h.apply_symbol(g, n)).collect::<Result<Vec<_>>>()?;
    SubspaceBasis::orthonormalize(g.rows(), n, &images, 1e-10)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    #[serde(rename = "N")]
    pub n: usize,
    pub angle: f64,
    pub kernel_dim: usize,
    pub subspace_dim: usize,
    /// Smallest singular value kept above the kernel cut.
    pub sigma_min: f64,
    pub determinate: bool,
}

/// Angle between `ker T_phi` and `G K_U` on the degree-`n` section.
pub fn cross_check(phi: &MatrixSymbol, g: &MatrixSymbol, u: &MatrixSymbol, n: usize, rank_tol: f64) -> Result<CrossCheck> {
    let kb = kernel_basis(&build_toeplitz(phi, n), rank_tol);
    let f = image_basis(g, u, n, rank_tol)?;
    let angle = subspace_angle(&kb.basis, &f)?;
    let kept = kb.sigma.len() - kb.dim();
    Ok(CrossCheck {
        n,
        angle,
        kernel_dim: kb.dim(),
        subspace_dim: f.len(),
        sigma_min: if kept > 0 { kb.sigma[kept - 1] } else { 0.0 },
        determinate: kb.determinate,
    })
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Pass,
    Fail,
    Indeterminate,
    /// Not computable because an earlier step failed.
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelVerdict {
    IsKernel,
    NotKernel,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisibilityPart {
    pub verdict: Check,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialPart {
    pub verdict: Check,
    pub mass_gap: f64,
    pub total_mass: f64,
    pub gram_mass: f64,
    pub gram_drift: f64,
    pub formula: G0Formula,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityPart {
    pub verdict: Check,
    pub sigma_min: Vec<f64>,
    pub witness_gap: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderPart {
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub angle: Vec<f64>,
    pub kernel_dim: Vec<usize>,
    pub subspace_dim: Vec<usize>,
    pub sigma_min: Vec<f64>,
}

impl LadderPart {
    fn from_checks(checks: &[CrossCheck]) -> Self {
        LadderPart {
            n: checks.iter().map(|c| c.n).collect(),
            angle: checks.iter().map(|c| c.angle).collect(),
            kernel_dim: checks.iter().map(|c| c.kernel_dim).collect(),
            subspace_dim: checks.iter().map(|c| c.subspace_dim).collect(),
            sigma_min: checks.iter().map(|c| c.sigma_min).collect(),
        }
    }
}

/// Every sub-verdict with the number behind it; symbols are kept out of the JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub divisibility: DivisibilityPart,
    pub special: SpecialPart,
    pub rigidity: RigidityPart,
    #[serde(rename = "final")]
    pub verdict: KernelVerdict,
    pub symbol_ref: String,
    pub cross_check_angle: Option<f64>,
    pub ladder: LadderPart,
    pub symbol_max_norm: Option<f64>,
    pub outer: OuterVerdict,
    #[serde(skip)]
    pub phi: Option<MatrixSymbol>,
    #[serde(skip)]
    pub b0: Option<MatrixSymbol>,
    #[serde(skip)]
    pub a_prime: Option<MatrixSymbol>,
    #[serde(skip)]
    pub g0_prime: Option<MatrixSymbol>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn combine(checks: &[Check]) -> KernelVerdict {
    if checks.iter().any(|c| matches!(c, Check::Fail)) {
        KernelVerdict::NotKernel
    } else if checks.iter().all(|c| matches!(c, Check::Pass)) {
        KernelVerdict::IsKernel
    } else {
        KernelVerdict::Indeterminate
    }
}

fn special_check(v: SpecialVerdict) -> Check {
    match v {
        SpecialVerdict::Special => Check::Pass,
        SpecialVerdict::NotSpecial => Check::Fail,
        SpecialVerdict::Indeterminate => Check::Indeterminate,
    }
}

fn rigidity_part(f: &MatrixSymbol, cfg: &HayashiConfig, grid: &SampleGrid) -> Result<RigidityPart> {
    match rigidity_test(f, &cfg.ladder, grid, cfg.tol.rank_tol) {
        Ok(rep) => {
            let verdict = match rep.verdict {
                RigidityVerdict::Rigid => Check::Pass,
                RigidityVerdict::NonRigid => Check::Fail,
                RigidityVerdict::Indeterminate => Check::Indeterminate,
            };
            let reason = match &rep.witness {
                Some(w) => format!("kernel vector at N={} with gap {:.3e}", w.degree, w.gap),
                None => format!("{:?}", rep.verdict).to_lowercase(),
            };
            Ok(RigidityPart {
                verdict,
                sigma_min: rep.ladder.iter().map(|&(_, s)| s).collect(),
                witness_gap: rep.witness.as_ref().map(|w| w.gap),
                reason,
            })
        }
        Err(HardyError::NotOuter(why)) => Ok(RigidityPart {
            verdict: Check::Fail,
            sigma_min: Vec::new(),
            witness_gap: None,
            reason: format!("G0' is not outer: {why}"),
        }),
        Err(HardyError::Singular(why)) => Ok(RigidityPart {
            verdict: Check::Indeterminate,
            sigma_min: Vec::new(),
            witness_gap: None,
            reason: format!("F*F^-1 not formable on the grid: {why}"),
        }),
        Err(e) => Err(e),
    }
}

/// Runs the full pipeline on `G` (m x r, outer) with the reduction `outer`.
fn classify_with(g: &MatrixSymbol, u: &MatrixSymbol, outer: &OuterReport, theta: &CMat, cfg: &HayashiConfig) -> Result<ClassificationReport> {
    let n = cfg.degree();
    let grid = cfg.grid()?;
    let tol = cfg.tol.residual_tol;
    let g_red = &outer.reduced;
    let r = g_red.rows();
    if u.shape() != (r, r) {
        return Err(HardyError::DimensionMismatch(format!("U must be {r}x{r}")));
    }
    if frob_norm(&u.coeff(0)) > tol.max(1e-10) {
        return Err(HardyError::Precondition("U(0) must vanish".into()));
    }

    let (_, b) = sarason_b(g_red, n, tol)?;
    let skipped_special = SpecialPart {
        verdict: Check::Skipped,
        mass_gap: f64::NAN,
        total_mass: f64::NAN,
        gram_mass: f64::NAN,
        gram_drift: f64::NAN,
        formula: cfg.g0_formula,
    };
    let skipped_rigidity = RigidityPart { verdict: Check::Skipped, sigma_min: Vec::new(), witness_gap: None, reason: "skipped".into() };

    let (divisibility, special, rigidity, b0, a_prime, g0p) = match divide_inner(&b, u, &grid, tol)? {
        Division::Failure { defect } => {
            (DivisibilityPart { verdict: Check::Fail, defect }, skipped_special, skipped_rigidity, None, None, None)
        }
        Division::Quotient(b0) => {
            let defect = u.mul(&b0)?.truncate(n as i64).max_coeff_diff(&b.truncate(n as i64));
            let a_prime = MatrixSymbol::identity(r).try_sub(&b0.mul_trunc(u, n as i64)?)?.mul_trunc(g_red, n as i64)?;
            let sp = special_test(&b0, &a_prime, n, tol, cfg.g0_formula)?;
            let special = SpecialPart {
                verdict: special_check(sp.verdict),
                mass_gap: sp.mass_gap,
                total_mass: sp.total_mass,
                gram_mass: sp.gram_mass,
                gram_drift: sp.gram_drift,
                formula: sp.formula,
            };
            let g0p = g0_prime(&b0, &a_prime, n, cfg.g0_formula)?;
            let rigidity = rigidity_part(&g0p, cfg, &grid)?;
            (DivisibilityPart { verdict: Check::Pass, defect }, special, rigidity, Some(b0), Some(a_prime), Some(g0p))
        }
    };

    let mut checks = Vec::new();
    let mut phi = None;
    let mut max_norm = None;
    if let Ok((p, norm)) = toeplitz_symbol(g_red, u, theta, &grid) {
        // G K_U lives in the ambient space; the section uses the full G.
        for &rung in &cfg.ladder {
            checks.push(cross_check(&p, g, u, rung, cfg.tol.rank_tol)?);
        }
        phi = Some(p);
        max_norm = Some(norm);
    }
    let cross_check_angle = checks.last().map(|c| c.angle);
    let angle_check = match checks.last() {
        Some(c) if c.angle <= cfg.angle_tol && c.kernel_dim == c.subspace_dim => Check::Pass,
        Some(c) if c.angle > 0.1 => Check::Fail,
        _ => Check::Indeterminate,
    };
    let subs = [divisibility.verdict, special.verdict, rigidity.verdict];
    let mut verdict = combine(&subs);
    if verdict == KernelVerdict::IsKernel && angle_check != Check::Pass {
        verdict = KernelVerdict::Indeterminate;
    }
    let symbol_ref = match &phi {
        Some(p) => format!("phi: {}x{} boundary symbol, degrees {}..{}", p.rows(), p.cols(), p.min_deg(), p.max_deg()),
        None => "phi: not formed (G~ singular on the grid)".into(),
    };
    Ok(ClassificationReport {
        divisibility,
        special,
        rigidity,
        verdict,
        symbol_ref,
        cross_check_angle,
        ladder: LadderPart::from_checks(&checks),
        symbol_max_norm: max_norm,
        outer: outer.verdict,
        phi,
        b0,
        a_prime,
        g0_prime: g0p,
    })
}

fn outer_reduction(g: &MatrixSymbol, cfg: &HayashiConfig) -> Result<OuterReport> {
    let outer = shift_span(g, cfg.degree(), cfg.tol.rank_tol, cfg.tol.residual_tol)?;
    if outer.verdict == OuterVerdict::NotOuter {
        return Err(HardyError::NotOuter(outer.reason));
    }
    Ok(outer)
}

/// Decides whether `G K_U` is the kernel of a Toeplitz operator (square `G`).
pub fn classify_kernel(g: &MatrixSymbol, u: &MatrixSymbol, cfg: &HayashiConfig) -> Result<ClassificationReport> {
    cfg.validate()?;
    if g.rows() != g.cols() {
        return Err(HardyError::Precondition(format!(
            "G is {}x{}; use embed_rect for r < m",
            g.rows(),
            g.cols()
        )));
    }
    let outer = outer_reduction(g, cfg)?;
    let theta = identity(g.rows());
    let mut rep = classify_with(g, u, &outer, &theta, cfg)?;
    if outer.verdict == OuterVerdict::Indeterminate && rep.verdict == KernelVerdict::IsKernel {
        rep.verdict = KernelVerdict::Indeterminate;
    }
    Ok(rep)
}

#[derive(Debug, Clone)]
pub struct EmbedReport {
    /// Unitary `[Theta0 | Theta1]`.
    pub theta: CMat,
    pub phi: MatrixSymbol,
    pub classification: ClassificationReport,
}

/// Rectangular case `r < m`: reduce to `G~`, classify, and lift the symbol to `C^m`.
pub fn embed_rect(g: &MatrixSymbol, u: &MatrixSymbol, cfg: &HayashiConfig) -> Result<EmbedReport> {
    cfg.validate()?;
    let (m, r) = g.shape();
    if r >= m {
        return Err(HardyError::Precondition("r = m; use classify_kernel directly".into()));
    }
    let outer = outer_reduction(g, cfg)?;
    let theta1 = complement(&outer.theta0);
    let mut theta = CMat::zeros(m, m);
    theta.view_mut((0, 0), (m, r)).copy_from(&outer.theta0);
    theta.view_mut((0, r), (m, m - r)).copy_from(&theta1);
    let classification = classify_with(g, u, &outer, &theta, cfg)?;
    let phi = classification
        .phi
        .clone()
        .ok_or_else(|| HardyError::Singular("reduced G is singular on the grid".into()))?;
    Ok(EmbedReport { theta, phi, classification })
}

// ---------------------------------------------------------------------------
// Constructive recipe

#[derive(Debug, Clone)]
pub struct Construction {
    pub g: MatrixSymbol,
    /// `Gram^{-1/2}` applied on the right to make the columns orthonormal.
    pub normalization: CMat,
    pub b0: MatrixSymbol,
    pub a_prime: MatrixSymbol,
    pub b: MatrixSymbol,
    pub f: SubspaceBasis,
    pub phi: MatrixSymbol,
    pub special: SpecialReport,
    pub rigidity: RigidityVerdict,
    /// Cross-checks at `N` and `2N`.
    pub checks: Vec<CrossCheck>,
}

/// Builds `G = (I - B0 U)^{-1} A'` from `G0'` and `U`, with `phi = G* U* G^{-1}`.
pub fn construct_kernel(g0p: &MatrixSymbol, u: &MatrixSymbol, cfg: &HayashiConfig) -> Result<Construction> {
    cfg.validate()?;
    let n = cfg.tol.trunc_degree;
    let n2 = 2 * n;
    let grid = SampleGrid::new(cfg.tol.with_degree(n2).grid_size)?;
    let tol = cfg.tol.residual_tol;
    let r = g0p.rows();
    if g0p.cols() != r || u.shape() != (r, r) {
        return Err(HardyError::DimensionMismatch("construct_kernel needs square G0' and U of equal size".into()));
    }
    if frob_norm(&u.coeff(0)) > tol.max(1e-10) {
        return Err(HardyError::Precondition("U(0) must vanish".into()));
    }
    let rig = rigidity_test(g0p, &cfg.ladder, &grid, cfg.tol.rank_tol)?;
    if rig.verdict != RigidityVerdict::Rigid {
        return Err(HardyError::Precondition(format!("G0'^2 is not certified rigid ({:?})", rig.verdict)));
    }
    let density = g0p.adjoint_flip().mul(g0p)?;
    let f0 = herglotz_taylor(&density, n2)?;
    let b0 = cayley(&f0, n2)?;
    let pair = pair_from_b(&b0, n2, &grid, tol)?;
    let a_prime = pair.a;
    let special = special_test(&b0, &a_prime, n2, tol, G0Formula::Inverse)?;
    if special.verdict != SpecialVerdict::Special {
        return Err(HardyError::Precondition(format!("recovered pair is not special (gap {:.3e})", special.mass_gap)));
    }
    let b = u.mul(&b0)?.truncate(n2 as i64);
    let lhs = MatrixSymbol::identity(r).try_sub(&b0.mul_trunc(u, n2 as i64)?)?;
    let g_raw = lhs.series_left_divide(&a_prime, n2)?;
    let gram = gram_mass(&g_raw, n2);
    let normalization = hermitian_fn(&gram, |x| 1.0 / x.sqrt());
    let g = g_raw.right_mul_const(&normalization);
    let (phi, _) = toeplitz_symbol(&g, u, &identity(r), &grid)?;
    let checks = vec![
        cross_check(&phi, &g, u, n, cfg.tol.rank_tol)?,
        cross_check(&phi, &g, u, n2, cfg.tol.rank_tol)?,
    ];
    let f = image_basis(&g, u, n, cfg.tol.rank_tol)?;
    Ok(Construction {
        g: g.truncate(n as i64),
        normalization,
        b0: b0.truncate(n as i64),
        a_prime: a_prime.truncate(n as i64),
        b: b.truncate(n as i64),
        f,
        phi,
        special,
        rigidity: rig.verdict,
        checks,
    })
}

// ---------------------------------------------------------------------------
// de Branges-Rovnyak inner product and probes

/// `h^+` with `T_{A*} h^+ = T_{B*} h`, solved at `n` and `n/2`; the residual is the
/// disagreement of the two solves on their common degrees.
pub fn plus_solve(h: &HardyElement, b: &MatrixSymbol, a: &MatrixSymbol, n: usize) -> Result<(HardyElement, f64)> {
    let solve = |deg: usize| -> Result<CVec> {
        let rhs = h.apply_symbol(&b.adjoint_flip(), deg)?.to_stacked();
        let t = build_toeplitz(&a.adjoint_flip(), deg).matrix;
        SVD::new(t, true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| HardyError::Singular(e.to_string()))
    };
    let full = solve(n)?;
    let half = solve(n / 2)?;
    let m = a.cols();
    let k = half.len();
    let residual = (full.rows(0, k) - &half).norm();
    Ok((HardyElement::from_stacked(m, &full)?.with_degree(n), residual))
}

/// `<h1, h2>_B = <h1, h2> + <h1^+, h2^+>`.
pub fn hb_inner(
    h1: &HardyElement,
    h2: &HardyElement,
    b: &MatrixSymbol,
    a: &MatrixSymbol,
    n: usize,
    residual_tol: f64,
) -> Result<num_complex::Complex64> {
    let (p1, r1) = plus_solve(h1, b, a, n)?;
    let (p2, r2) = plus_solve(h2, b, a, n)?;
    let worst = r1.max(r2);
    if worst > residual_tol {
        return Err(HardyError::OutOfRange(worst));
    }
    Ok(h1.with_degree(n).inner(&h2.with_degree(n)) + p1.inner(&p2))
}

/// Worst `h^+` solve residual over `A p` for the given polynomials.
pub fn prop52_residual(b: &MatrixSymbol, a: &MatrixSymbol, probes: &[HardyElement], n: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in probes {
        let h = p.apply_symbol(a, n)?;
        worst = worst.max(plus_solve(&h, b, a, n)?.1);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurjectivityProbe {
    /// Worst `||X h - p|| / ||p||` with `X = T_{I-B} T_{G*}`.
    pub residual: f64,
    /// Worst `| ||h||^2 - ||p||_B^2 | / ||p||^2`.
    pub isometry_gap: f64,
}

/// Solves `T_{I-B} T_{G*} h = p` on the degree-`n` section and measures the image at `2n`.
pub fn surjectivity_probe(
    b: &MatrixSymbol,
    a: &MatrixSymbol,
    probes: &[HardyElement],
    n: usize,
    residual_tol: f64,
) -> Result<SurjectivityProbe> {
    let r = b.rows();
    let g = MatrixSymbol::identity(r).try_sub(b)?.series_left_divide(a, 2 * n)?;
    let ctx = DbrContext::new(&g, b, n);
    let section = ctx.section()?;
    let wide = DbrContext::new(&g, b, 2 * n);
    let svd = SVD::new(section, true, true);
    let mut residual = 0.0f64;
    let mut isometry_gap = 0.0f64;
    for p in probes {
        let rhs = p.stacked_to_degree(n);
        let x = svd.solve(&rhs, 1e-14).map_err(|e| HardyError::Singular(e.to_string()))?;
        let h = HardyElement::from_stacked(r, &x)?;
        let image = wide.divide(&h)?;
        let pn = p.norm();
        residual = residual.max(image.sub(&p.with_degree(2 * n))?.norm() / pn);
        let hb = hb_inner(p, p, b, a, n, residual_tol.max(1e-6))?.re;
        isometry_gap = isometry_gap.max((h.norm().powi(2) - hb).abs() / (pn * pn));
    }
    Ok(SurjectivityProbe { residual, isometry_gap })
}

/// Mass gap of the pair rebuilt from `U B`; stays small when `(B, A)` is special.
pub fn cor53_gap(b: &MatrixSymbol, u: &MatrixSymbol, n: usize, grid: &SampleGrid, residual_tol: f64) -> Result<f64> {
    let ub = u.mul(b)?.truncate(n as i64);
    Ok(pair_from_b(&ub, n, grid, residual_tol)?.mass_gap)
}

/// `T_{I-B} T_{G*}` applied to `T_{G*^{-1} U G} p`, compared with `U A' p`.
pub fn lemma54_residual(
    g: &MatrixSymbol,
    u: &MatrixSymbol,
    b: &MatrixSymbol,
    a_prime: &MatrixSymbol,
    probes: &[HardyElement],
    n: usize,
    grid: &SampleGrid,
) -> Result<f64> {
    let samples = g
        .samples(grid)
        .iter()
        .zip(u.samples(grid).iter())
        .map(|(gs, us)| Ok(inverse(&gs.adjoint())? * us * gs))
        .collect::<Result<Vec<_>>>()?;
    let psi = boundary_symbol(grid, &samples)?;
    let ctx = DbrContext::new(g, b, 2 * n);
    let ua = u.mul(a_prime)?;
    let w = n / 2;
    let mut worst = 0.0f64;
    for p in probes {
        let y = p.apply_symbol(&psi, 2 * n)?;
        let x = ctx.divide(&y)?;
        let target = p.apply_symbol(&ua, 2 * n)?;
        let diff = x.sub(&target)?.with_degree(w);
        worst = worst.max(diff.norm() / p.norm().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Deterministic polynomial probes of degree `deg` in `C^dim`.
pub fn polynomial_probes(dim: usize, deg: usize, count: usize, seed: u64) -> Vec<HardyElement> {
    // Small LCG keeps the probes reproducible without extra dependencies.
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    (0..count)
        .map(|_| {
            let coeffs = (0..=deg)
                .map(|_| CVec::from_iterator(dim, (0..dim).map(|_| num_complex::Complex64::new(next(), next()))))
                .collect();
            HardyElement::new(dim, coeffs).expect("dim > 0")
        })
        .collect()
}
