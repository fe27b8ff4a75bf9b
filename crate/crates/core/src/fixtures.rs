//! Worked examples used by the tests, the acceptance suite and the CLI.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::SampleGrid;
use crate::inner_outer::garcia_inner;
use crate::linalg::{cr, CMat};
use crate::symbol::MatrixSymbol;

const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn z() -> MatrixSymbol {
    MatrixSymbol::real_poly(&[0.0, 1.0])
}

/// `(1 + z)/sqrt(2)`, a unit vector in `H^2`.
pub fn g_one_plus_z() -> MatrixSymbol {
    MatrixSymbol::real_poly(&[S2, S2])
}

/// `sqrt(3)/(2 - z)`.
pub fn g0_flagship(n: usize) -> MatrixSymbol {
    let inv = MatrixSymbol::real_poly(&[2.0, -1.0]).series_inverse(n).expect("2 - z is invertible");
    inv.scale(cr(3f64.sqrt()))
}

/// `sqrt(3)/(2 - z^2)`.
pub fn g_flagship(n: usize) -> MatrixSymbol {
    let inv = MatrixSymbol::real_poly(&[2.0, 0.0, -1.0]).series_inverse(n).expect("2 - z^2 is invertible");
    inv.scale(cr(3f64.sqrt()))
}

/// `G* U* G^{-1}` for the flagship: `conj(z) (2 - z^2)/(2 - conj(z)^2)` as a Laurent truncation.
pub fn phi_flagship(grid: &SampleGrid) -> Result<MatrixSymbol> {
    let half = (grid.size() / 2) as i64 - 1;
    let vals: Vec<CMat> = grid
        .points()
        .into_iter()
        .map(|p| {
            let zb = p.conj();
            CMat::from_element(1, 1, zb * (2.0 - p * p) / (2.0 - zb * zb))
        })
        .collect();
    MatrixSymbol::from_samples(grid, &vals, -half, half)
}

/// `diag((1+z)^(1/2), (1-z)^(1/2))` with each column scaled to unit norm.
pub fn half_power_g(n: usize, grid: &SampleGrid) -> Result<MatrixSymbol> {
    let plus = MatrixSymbol::scalar_fn(grid, n, |p| (1.0 + p).sqrt())?;
    let minus = MatrixSymbol::scalar_fn(grid, n, |p| (1.0 - p).sqrt())?;
    let plus = plus.scale(cr(1.0 / plus.l2_norm()));
    let minus = minus.scale(cr(1.0 / minus.l2_norm()));
    Ok(MatrixSymbol::block_diag(&[plus, minus]))
}

/// `diag(1+z, 1-z)/sqrt(2)`.
pub fn diagonal_g() -> MatrixSymbol {
    MatrixSymbol::block_diag(&[MatrixSymbol::real_poly(&[S2, S2]), MatrixSymbol::real_poly(&[S2, -S2])])
}

/// The column `(1, 0)^T`.
pub fn column_g() -> MatrixSymbol {
    MatrixSymbol::constant(CMat::from_column_slice(2, 1, &[cr(1.0), cr(0.0)]))
}

pub fn z_identity(m: usize) -> MatrixSymbol {
    MatrixSymbol::monomial(CMat::identity(m, m), 1)
}

/// `1/2 [[1+z, -(1-z)], [z-1, 1+z]]`, the inner function with `a = (1+z)/2`, `b = (1-z)/2`, `theta = z`.
pub fn garcia_example(grid: &SampleGrid) -> Result<MatrixSymbol> {
    garcia_inner(
        &z(),
        &MatrixSymbol::real_poly(&[0.5, 0.5]),
        &MatrixSymbol::real_poly(&[0.5, -0.5]),
        grid,
        1e-10,
    )
}

/// Inner function of the matrix recipe: `z` times [`garcia_example`]; `deg det = 3`.
pub fn recipe_u(grid: &SampleGrid) -> Result<MatrixSymbol> {
    Ok(garcia_example(grid)?.shift(1))
}

/// Constant contraction `C = diag(1, -1)/2`.
pub fn recipe_c() -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![cr(0.5), cr(-0.5)]))
}

/// `(I - C)^{-1} (I - C^*C)^{1/2}` for [`recipe_c`].
pub fn recipe_g0() -> MatrixSymbol {
    let c = recipe_c();
    let id = CMat::identity(2, 2);
    let root = crate::linalg::hermitian_fn(&(&id - c.adjoint() * &c), f64::sqrt);
    let inv = crate::linalg::inverse(&(&id - &c)).expect("I - C is invertible");
    MatrixSymbol::constant(inv * root)
}

/// A pair `(B, A)` given in closed form, with an expected mass gap.
#[derive(Debug, Clone)]
pub struct PairFixture {
    pub name: &'static str,
    pub b: MatrixSymbol,
    pub a: MatrixSymbol,
    pub mass_gap: f64,
}

/// `(z/2, sqrt(3)/2)` (special) and `(1/(2+z), sqrt(2)(1+z)/(2+z))` (not special, gap 1).
pub fn pair_fixtures(n: usize) -> Vec<PairFixture> {
    let inv = MatrixSymbol::real_poly(&[2.0, 1.0]).series_inverse(n).expect("2 + z is invertible");
    let a2 = MatrixSymbol::real_poly(&[1.0, 1.0]).mul_trunc(&inv, n as i64).expect("scalar").scale(cr(2f64.sqrt()));
    vec![
        PairFixture {
            name: "half-shift",
            b: MatrixSymbol::real_poly(&[0.0, 0.5]),
            a: MatrixSymbol::real_poly(&[3f64.sqrt() / 2.0]),
            mass_gap: 0.0,
        },
        PairFixture { name: "point-mass", b: inv, a: a2, mass_gap: 1.0 },
    ]
}

/// Points used for kernel-identity probes; deterministic.
pub fn probe_points() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.5, 0.4),
        Complex64::new(0.1, -0.7),
        Complex64::new(0.6, 0.6),
    ]
}
