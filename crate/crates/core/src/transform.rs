//! Herglotz integrals and the Cayley map to the unit ball.

use num_complex::Complex64;

use crate::error::{HardyError, Result};
use crate::linalg::{cr, frob_norm, CMat};
use crate::symbol::MatrixSymbol;

const HERMITIAN_TOL: f64 = 1e-10;

/// Checks `C_{-k} = C_k^H` for every coefficient, i.e. Hermitian boundary values.
pub fn hermitian_density_defect(density: &MatrixSymbol) -> f64 {
    let hi = density.max_deg().max(-density.min_deg());
    (0..=hi)
        .map(|k| frob_norm(&(density.coeff(-k) - density.coeff(k).adjoint())))
        .fold(0.0, f64::max)
}

fn check_density(density: &MatrixSymbol) -> Result<()> {
    if density.rows() != density.cols() {
        return Err(HardyError::DimensionMismatch("density must be square".into()));
    }
    let defect = hermitian_density_defect(density);
    if defect > HERMITIAN_TOL * density.l2_norm().max(1.0) {
        return Err(HardyError::NonHermitian(defect));
    }
    Ok(())
}

/// Taylor coefficients of `F(z) = (1/2pi) int (e^{it}+z)/(e^{it}-z) density dt`
/// to degree `n`: `F_0 = c_0`, `F_k = 2 c_k`.
pub fn herglotz_taylor(density: &MatrixSymbol, n: usize) -> Result<MatrixSymbol> {
    check_density(density)?;
    let coeffs = (0..=n as i64)
        .map(|k| if k == 0 { density.coeff(0) } else { density.coeff(k) * cr(2.0) })
        .collect();
    MatrixSymbol::new(density.rows(), density.cols(), 0, coeffs)
}

/// Herglotz integral evaluated at an interior point, using every stored coefficient.
pub fn herglotz(density: &MatrixSymbol, z: Complex64) -> Result<CMat> {
    check_density(density)?;
    if z.norm() >= 1.0 {
        return Err(HardyError::OutsideDisc(z.norm()));
    }
    let top = density.max_deg().max(0);
    let mut acc = CMat::zeros(density.rows(), density.cols());
    for k in (1..=top).rev() {
        acc = (acc + density.coeff(k) * cr(2.0)) * z;
    }
    Ok(acc + density.coeff(0))
}

/// `B = (F + I)^{-1} (F - I)` as a degree-`n` power series.
pub fn cayley(f: &MatrixSymbol, n: usize) -> Result<MatrixSymbol> {
    if f.rows() != f.cols() {
        return Err(HardyError::DimensionMismatch("Cayley transform of a non-square symbol".into()));
    }
    if !f.is_analytic() {
        return Err(HardyError::Precondition("Cayley transform needs an analytic F".into()));
    }
    let id = MatrixSymbol::identity(f.rows());
    let plus = f.try_add(&id)?;
    let minus = f.try_sub(&id)?;
    let inv = plus
        .series_inverse(n)
        .map_err(|_| HardyError::Singular("F(0) + I is not invertible".into()))?;
    inv.mul_trunc(&minus, n as i64)
}

/// Inverse Cayley map `F = (I + B)(I - B)^{-1}` as a degree-`n` power series.
pub fn inverse_cayley(b: &MatrixSymbol, n: usize) -> Result<MatrixSymbol> {
    let id = MatrixSymbol::identity(b.rows());
    let inv = id.try_sub(b)?.series_inverse(n)?;
    id.try_add(b)?.mul_trunc(&inv, n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SampleGrid;
    use crate::linalg::{c, identity, ZERO};

    fn one_plus_cos() -> MatrixSymbol {
        MatrixSymbol::real_poly(&[0.5, 1.0, 0.5]).shift(-1)
    }

    #[test]
    fn identity_density() {
        let f = herglotz_taylor(&MatrixSymbol::identity(3), 8).unwrap();
        assert_eq!(f.trim(0.0), MatrixSymbol::identity(3));
    }

    #[test]
    fn one_plus_cos_gives_one_plus_z() {
        let f = herglotz_taylor(&one_plus_cos(), 8).unwrap().trim(0.0);
        assert_eq!(f, MatrixSymbol::real_poly(&[1.0, 1.0]));
    }

    #[test]
    fn herglotz_matches_quadrature() {
        // Independent route: midpoint quadrature of the Herglotz kernel on 4096 points.
        let density = one_plus_cos();
        let grid = SampleGrid::new(4096).unwrap();
        for &z in &[c(0.3, 0.1), c(-0.5, 0.4), ZERO] {
            let mut q = c(0.0, 0.0);
            for j in 0..grid.size() {
                let e = grid.point(j);
                q += (e + z) / (e - z) * (1.0 + grid.angle(j).cos());
            }
            q /= grid.size() as f64;
            let f = herglotz(&density, z).unwrap()[(0, 0)];
            assert!((f - q).norm() < 1e-12, "{f} vs {q}");
            assert!((f - (1.0 + z)).norm() < 1e-14);
        }
    }

    #[test]
    fn cayley_long_division() {
        let b = cayley(&MatrixSymbol::real_poly(&[1.0, 1.0]), 20).unwrap();
        // z/(2+z) = sum_{k>=1} (-1)^{k+1} z^k / 2^k
        for k in 0..=20i32 {
            let expect = if k == 0 { 0.0 } else { (-1f64).powi(k + 1) / 2f64.powi(k) };
            assert!((b.coeff(k as i64)[(0, 0)].re - expect).abs() < 1e-16);
        }
        let zero = cayley(&MatrixSymbol::identity(2), 5).unwrap();
        assert!(zero.l2_norm() == 0.0);
    }

    #[test]
    fn cayley_rejects_singular() {
        let f = MatrixSymbol::constant(-identity(2));
        assert!(matches!(cayley(&f, 4), Err(HardyError::Singular(_))));
    }

    #[test]
    fn rejects_non_hermitian_and_exterior() {
        let bad = MatrixSymbol::scalar(1, &[cr(1.0)]);
        assert!(matches!(herglotz_taylor(&bad, 3), Err(HardyError::NonHermitian(_))));
        assert!(herglotz(&one_plus_cos(), cr(1.0)).is_err());
    }
}
