//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{HardyError, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn frob_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = SVD::new(m.clone(), false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Full right-singular system: singular values (descending, padded with zeros
/// up to `ncols`) and the matching right singular vectors as columns.
pub fn right_singular_system(m: &CMat) -> (Vec<f64>, CMat) {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    // Pad wide matrices so the thin SVD still returns a complete V.
    let work = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(work, false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let sigma: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = CMat::zeros(cols, idx.len());
    for (j, &i) in idx.iter().enumerate() {
        for r in 0..cols {
            v[(r, j)] = v_t[(i, r)].conj();
        }
    }
    (sigma, v)
}

/// Numerical null space with the relative cut `rel_tol * sigma_max`.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal columns spanning the numerical kernel.
    pub basis: CMat,
    /// All singular values, descending.
    pub sigma: Vec<f64>,
    /// Ratio between the last kept and first dropped singular value.
    pub gap: f64,
    /// False when the cut falls inside a cluster (gap below `MIN_GAP`).
    pub determinate: bool,
}

pub const MIN_GAP: f64 = 1e3;

pub fn null_space(m: &CMat, rel_tol: f64) -> NullSpace {
    let cols = m.ncols();
    let (sigma, v) = right_singular_system(m);
    if cols == 0 {
        return NullSpace { basis: CMat::zeros(0, 0), sigma, gap: f64::INFINITY, determinate: true };
    }
    let smax = sigma[0];
    let cut = rel_tol * smax.max(f64::MIN_POSITIVE);
    let rank = sigma.iter().take_while(|&&s| s > cut).count();
    let basis = v.columns(rank, cols - rank).into_owned();
    let gap = if rank == cols {
        sigma[cols - 1] / cut
    } else if rank == 0 {
        f64::INFINITY
    } else {
        let below = sigma[rank];
        if below == 0.0 {
            f64::INFINITY
        } else {
            sigma[rank - 1] / below
        }
    };
    let determinate = if rank == cols { true } else { gap >= MIN_GAP };
    NullSpace { basis, sigma, gap, determinate }
}

/// Null space with an absolute singular-value cut; for maps whose scale is known.
pub fn null_space_abs(m: &CMat, abs_tol: f64) -> CMat {
    let (sigma, v) = right_singular_system(m);
    let rank = sigma.iter().take_while(|&&s| s > abs_tol).count();
    v.columns(rank, m.ncols() - rank).into_owned()
}

/// Orthonormal basis of the column range with an absolute singular-value cut.
pub fn orth_abs(m: &CMat, abs_tol: f64) -> CMat {
    let smax = singular_values(m).first().copied().unwrap_or(0.0);
    if smax <= abs_tol {
        return CMat::zeros(m.nrows(), 0);
    }
    orth(m, abs_tol / smax)
}

/// Orthonormal basis of the column range, dropping directions below `rel_tol * sigma_max`.
pub fn orth(m: &CMat, rel_tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMat::zeros(rows, 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMat::zeros(rows, 0);
    }
    let mut idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * smax)
        .collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let mut out = CMat::zeros(rows, idx.len());
    for (j, &i) in idx.iter().enumerate() {
        out.set_column(j, &u.column(i));
    }
    out
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(HardyError::DimensionMismatch(format!("inverse of {}x{}", m.nrows(), m.ncols())));
    }
    let s = singular_values(m);
    let smin = s.last().copied().unwrap_or(0.0);
    if smin <= 1e-14 * s[0].max(1.0) {
        return Err(HardyError::Singular(format!("smallest singular value {smin:.3e}")));
    }
    m.clone()
        .try_inverse()
        .ok_or_else(|| HardyError::Singular("LU inversion failed".into()))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * cr(0.5)
}

pub fn hermitian_deviation(m: &CMat) -> f64 {
    frob_norm(&(m - m.adjoint()))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitian_part(h));
    let n = h.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (j, &i) in idx.iter().enumerate() {
        vecs.set_column(j, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_fn(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eig(h);
    let d = CMat::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().map(|&l| cr(f(l)))));
    &vecs * d * vecs.adjoint()
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = frob_norm(m);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * cr(scale);
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=20 {
        term = &term * &a * cr(1.0 / k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Polar decomposition `m = unitary * positive`.
pub fn polar(m: &CMat) -> Result<(CMat, CMat)> {
    let svd = SVD::new(m.clone(), true, true);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if m.nrows() != m.ncols() || smin <= 1e-14 * smax.max(1.0) {
        return Err(HardyError::Singular(format!("polar decomposition: smallest singular value {smin:.3e}")));
    }
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let unitary = &u * &v_t;
    let sig = CMat::from_diagonal(&svd.singular_values.map(cr));
    let pos = v_t.adjoint() * sig * &v_t;
    Ok((unitary, pos))
}

/// Unitary `w` (m x r) with `m_rect = w * p`, `p` Hermitian positive (r x r).
pub fn polar_rect(m_rect: &CMat) -> Result<(CMat, CMat)> {
    let svd = SVD::new(m_rect.clone(), true, true);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(HardyError::Singular(format!("rank-deficient value, smallest singular value {smin:.3e}")));
    }
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let sig = CMat::from_diagonal(&svd.singular_values.map(cr));
    Ok((&u * &v_t, v_t.adjoint() * sig * &v_t))
}

/// Orthonormal completion: columns spanning the orthogonal complement of `q`'s range in C^m.
pub fn complement(q: &CMat) -> CMat {
    let m = q.nrows();
    let proj = identity(m) - q * q.adjoint();
    orth(&proj, 1e-10)
}
