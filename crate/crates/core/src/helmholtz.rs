//! Spectral split of the potentials into pure-gauge and physical parts.
//!
//! On a periodic grid the vector potential separates as `A = A_pure + A_phys`
//! with `∇×A_pure = 0` and `∇·A_phys = 0`. The projection uses the same
//! Fourier symbol as [`fourier::derivative`], so the residuals measured with
//! spectral derivatives vanish to roundoff.
//!
//! Conventions:
//!
//! - the spatial mean of `A` (the `k = 0` mode) belongs to `A_phys`; in 1D
//!   that makes `A_phys` the mean and `A_pure` the zero-mean remainder;
//! - a pure Nyquist mode, invisible to the first-derivative symbol, also
//!   stays in `A_phys`;
//! - `(∇²)⁻¹` drops the `k = 0` mode, and `A⁰_phys` is returned with zero
//!   spatial mean.
//!
//! `A⁰_phys = A⁰ + ∂t (∇²)⁻¹ ∇·A`. The plus sign is the one that makes
//! `A⁰_phys` invariant under `A → A + ∇χ`, `A⁰ → A⁰ − ∂χ/∂t`.

use serde::Serialize;

use crate::fourier;
use crate::gauge::Potentials;
use crate::grid::{ScalarField, VectorField};
use crate::{Error, Result, C64};

/// Relative tolerance on the mean of a charge density.
pub const SOURCE_MEAN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub a_pure: VectorField,
    pub a_phys: VectorField,
    pub a0_pure: ScalarField,
    pub a0_phys: ScalarField,
    pub residuals: Residuals,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Residuals {
    /// `‖∇·A_phys‖∞` with spectral derivatives.
    pub div_phys: f64,
    /// `‖∇×A_pure‖∞` with spectral derivatives (0 in 1D).
    pub curl_pure: f64,
    /// `‖A_pure + A_phys − A‖∞`
    pub reconstruction: f64,
}

fn to_field(grid: &crate::grid::Grid, coeffs: &[C64], real: bool) -> Result<ScalarField> {
    let f = fourier::inverse(grid, coeffs)?;
    if real {
        ScalarField::from_real(grid, f.real_parts())
    } else {
        Ok(f)
    }
}

/// Returns `(A_pure, A_phys)`.
pub fn decompose_vector(a: &VectorField) -> Result<(VectorField, VectorField)> {
    let grid = a.grid();
    if !grid.is_periodic() {
        return Err(Error::BoundaryUnsupported);
    }
    let real = a.components().iter().all(ScalarField::is_real);
    let coeffs: Vec<Vec<C64>> = a.components().iter().map(fourier::forward).collect::<Result<_>>()?;
    let k = fourier::mode_vectors(grid, false);
    let dim = grid.dim();
    let mut pure = vec![vec![C64::new(0.0, 0.0); grid.len()]; dim];
    for (m, km) in k.iter().enumerate() {
        let k2 = km[0] * km[0] + km[1] * km[1];
        if k2 == 0.0 {
            continue;
        }
        let mut kdota = C64::new(0.0, 0.0);
        for axis in 0..dim {
            kdota += coeffs[axis][m] * km[axis];
        }
        for axis in 0..dim {
            pure[axis][m] = kdota * (km[axis] / k2);
        }
    }
    let a_pure = VectorField::new(pure.iter().map(|c| to_field(grid, c, real)).collect::<Result<_>>()?)?;
    let a_phys = a.sub(&a_pure)?;
    Ok((a_pure, a_phys))
}

/// Zero-mean solution of `∇²φ = −ρ`.
pub fn phys_scalar_from_rho(rho: &ScalarField) -> Result<ScalarField> {
    let grid = rho.grid();
    if !grid.is_periodic() {
        return Err(Error::BoundaryUnsupported);
    }
    let mean = rho.mean().norm();
    if mean > SOURCE_MEAN_TOLERANCE * rho.max_abs().max(1.0) {
        return Err(Error::IncompatibleSource(mean));
    }
    let mut c = fourier::forward(rho)?;
    let k = fourier::mode_vectors(grid, true);
    for (ci, km) in c.iter_mut().zip(&k) {
        let k2 = km[0] * km[0] + km[1] * km[1];
        *ci = if k2 == 0.0 { C64::new(0.0, 0.0) } else { *ci / k2 };
    }
    to_field(grid, &c, rho.is_real())
}

/// `(∇²)⁻¹ ∇·v` with spectral derivatives and the zero mode dropped.
pub fn inverse_laplacian_of_divergence(v: &VectorField) -> Result<ScalarField> {
    let grid = v.grid();
    if !grid.is_periodic() {
        return Err(Error::BoundaryUnsupported);
    }
    let real = v.components().iter().all(ScalarField::is_real);
    let coeffs: Vec<Vec<C64>> = v.components().iter().map(fourier::forward).collect::<Result<_>>()?;
    let kd = fourier::mode_vectors(grid, false);
    let kf = fourier::mode_vectors(grid, true);
    let out: Vec<C64> = (0..grid.len())
        .map(|m| {
            let k2 = kf[m][0] * kf[m][0] + kf[m][1] * kf[m][1];
            if k2 == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let mut div = C64::new(0.0, 0.0);
            for (axis, c) in coeffs.iter().enumerate() {
                div += C64::new(0.0, kd[m][axis]) * c[m];
            }
            -div / k2
        })
        .collect();
    to_field(grid, &out, real)
}

/// `A⁰_phys(t)` from the potentials alone.
///
/// `∂A/∂t` comes from the potentials' own time-derivative policy, or from a
/// symmetric difference with step `dt` when one is given.
pub fn phys_scalar_from_potentials(p: &Potentials, t: f64, dt: Option<f64>) -> Result<ScalarField> {
    if !p.grid().is_periodic() {
        return Err(Error::BoundaryUnsupported);
    }
    let da = match dt {
        Some(step) => p.a(t + step).combine(0.5 / step, &p.a(t - step), -0.5 / step)?,
        None => p.da_dt(t),
    };
    let corr = inverse_laplacian_of_divergence(&da)?;
    Ok(p.a0(t).add(&corr)?.zero_mean())
}

/// `(A⁰_phys, A)` at `t`: from the charge density when the potentials carry
/// one, otherwise from the potentials.
pub fn chen_potentials(p: &Potentials, t: f64) -> Result<(ScalarField, VectorField)> {
    let a0 = match p.rho() {
        Some(rho) => phys_scalar_from_rho(rho)?,
        None => phys_scalar_from_potentials(p, t, None)?,
    };
    Ok((a0, p.a(t)))
}

/// Spectral residuals of a split of `a`.
pub fn residuals(a: &VectorField, a_pure: &VectorField, a_phys: &VectorField) -> Result<Residuals> {
    let div_phys = fourier::divergence(a_phys)?.max_abs();
    let curl_pure = if a.grid().dim() == 2 {
        fourier::curl2d(a_pure)?.max_abs()
    } else {
        0.0
    };
    Ok(Residuals {
        div_phys,
        curl_pure,
        reconstruction: a_pure.add(a_phys)?.max_abs_diff(a)?,
    })
}

/// Full split of the potentials at `t`.
pub fn decompose(p: &Potentials, t: f64) -> Result<Decomposition> {
    let a = p.a(t);
    let (a_pure, a_phys) = decompose_vector(&a)?;
    let (a0_phys, _) = chen_potentials(p, t)?;
    let a0_pure = p.a0(t).sub(&a0_phys)?;
    let residuals = residuals(&a, &a_pure, &a_phys)?;
    Ok(Decomposition {
        a_pure,
        a_phys,
        a0_pure,
        a0_phys,
        residuals,
    })
}
