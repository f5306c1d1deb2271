//! Discrete Fourier transforms and spectral derivatives on periodic grids.
//!
//! Forward transforms are unnormalized, inverse transforms divide by `N`.
//! Spectral first derivatives drop the Nyquist mode so that a real field has
//! a real derivative; the spectral Laplacian keeps it.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::grid::{Grid, ScalarField, VectorField};
use crate::{Error, Result, C64};

fn ensure_periodic(grid: &Grid) -> Result<()> {
    if grid.is_periodic() {
        Ok(())
    } else {
        Err(Error::BoundaryUnsupported)
    }
}

fn transform(grid: &Grid, values: &[C64], inverse: bool) -> Vec<C64> {
    let [nx, ny] = [grid.points()[0], if grid.dim() == 2 { grid.points()[1] } else { 1 }];
    let mut planner = FftPlanner::<f64>::new();
    let mut data = values.to_vec();
    let plan = |n: usize, planner: &mut FftPlanner<f64>| {
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    };
    if ny > 1 {
        // rows are contiguous along y
        plan(ny, &mut planner).process(&mut data);
        let mut col = vec![C64::new(0.0, 0.0); nx];
        let fx = plan(nx, &mut planner);
        for iy in 0..ny {
            for ix in 0..nx {
                col[ix] = data[ix * ny + iy];
            }
            fx.process(&mut col);
            for ix in 0..nx {
                data[ix * ny + iy] = col[ix];
            }
        }
    } else {
        plan(nx, &mut planner).process(&mut data);
    }
    if inverse {
        let s = 1.0 / values.len() as f64;
        for v in &mut data {
            *v *= s;
        }
    }
    data
}

/// Unnormalized forward DFT of the samples, same flattening as the grid.
pub fn forward(f: &ScalarField) -> Result<Vec<C64>> {
    ensure_periodic(f.grid())?;
    Ok(transform(f.grid(), f.values(), false))
}

/// Inverse DFT (with `1/N`) back to a field on `grid`.
pub fn inverse(grid: &Grid, coeffs: &[C64]) -> Result<ScalarField> {
    ensure_periodic(grid)?;
    ScalarField::new(grid, transform(grid, coeffs, true))
}

/// Angular wave numbers along `axis` in FFT order.
pub fn wavenumbers(grid: &Grid, axis: usize) -> Vec<f64> {
    let n = grid.points()[axis];
    let l = grid.period(axis);
    (0..n)
        .map(|j| {
            let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            2.0 * PI * m / l
        })
        .collect()
}

/// Wave number with the Nyquist entry zeroed, for odd-order derivatives.
fn derivative_symbol(grid: &Grid, axis: usize) -> Vec<f64> {
    let n = grid.points()[axis];
    let mut k = wavenumbers(grid, axis);
    if n % 2 == 0 {
        k[n / 2] = 0.0;
    }
    k
}

/// `k` vector of every flattened mode.
pub(crate) fn mode_vectors(grid: &Grid, nyquist: bool) -> Vec<[f64; 2]> {
    let ks: Vec<Vec<f64>> = (0..grid.dim())
        .map(|a| if nyquist { wavenumbers(grid, a) } else { derivative_symbol(grid, a) })
        .collect();
    (0..grid.len())
        .map(|i| {
            let s = grid.site(i);
            let mut k = [0.0; 2];
            for (axis, ka) in ks.iter().enumerate() {
                k[axis] = ka[s[axis]];
            }
            k
        })
        .collect()
}

fn finish(f: &ScalarField, out: ScalarField) -> ScalarField {
    if f.is_real() {
        ScalarField::from_real(f.grid(), out.real_parts()).expect("same grid")
    } else {
        out
    }
}

/// Spectral `∂f/∂x_axis`.
pub fn derivative(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let mut c = forward(f)?;
    let k = mode_vectors(f.grid(), false);
    for (ci, ki) in c.iter_mut().zip(&k) {
        *ci *= C64::new(0.0, ki[axis]);
    }
    Ok(finish(f, inverse(f.grid(), &c)?))
}

pub fn gradient(f: &ScalarField) -> Result<VectorField> {
    VectorField::new((0..f.grid().dim()).map(|a| derivative(f, a)).collect::<Result<Vec<_>>>()?)
}

pub fn divergence(v: &VectorField) -> Result<ScalarField> {
    let mut acc = derivative(v.component(0), 0)?;
    for axis in 1..v.grid().dim() {
        acc = acc.add(&derivative(v.component(axis), axis)?)?;
    }
    Ok(acc)
}

/// Spectral `∂x v_y − ∂y v_x`.
pub fn curl2d(v: &VectorField) -> Result<ScalarField> {
    v.grid().ensure_dim(2)?;
    derivative(v.component(1), 0)?.sub(&derivative(v.component(0), 1)?)
}

pub fn laplacian(f: &ScalarField) -> Result<ScalarField> {
    let mut c = forward(f)?;
    let k = mode_vectors(f.grid(), true);
    for (ci, ki) in c.iter_mut().zip(&k) {
        *ci *= -(ki[0] * ki[0] + ki[1] * ki[1]);
    }
    Ok(finish(f, inverse(f.grid(), &c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Boundary;

    #[test]
    fn round_trip_2d() {
        let g = Grid::new(&[8, 12], &[0.3, 0.2], &[0.0, 0.0], Boundary::Periodic).unwrap();
        let f = ScalarField::from_fn(&g, |r| C64::new(r[0].sin() * r[1], r[0] - r[1] * r[1]));
        let back = inverse(&g, &forward(&f).unwrap()).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn matches_naive_dft() {
        let g = Grid::new(&[8, 10], &[1.0, 1.0], &[0.0, 0.0], Boundary::Periodic).unwrap();
        let f = ScalarField::from_fn(&g, |r| C64::new((r[0] * 0.7).cos() + r[1], (r[1] * 1.3).sin()));
        let c = forward(&f).unwrap();
        let (nx, ny) = (8, 10);
        for kx in 0..nx {
            for ky in 0..ny {
                let mut s = C64::new(0.0, 0.0);
                for ix in 0..nx {
                    for iy in 0..ny {
                        let ph = -2.0 * PI * ((kx * ix) as f64 / nx as f64 + (ky * iy) as f64 / ny as f64);
                        s += f.values()[ix * ny + iy] * C64::from_polar(1.0, ph);
                    }
                }
                assert!((s - c[kx * ny + ky]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_of_band_limited_mode_is_exact() {
        let g = Grid::square(16, 3.0, Boundary::Periodic).unwrap();
        let k = 2.0 * PI * 3.0 / 3.0;
        let f = ScalarField::from_real_fn(&g, |r| (k * r[0] + 0.2).sin() * (2.0 * PI * r[1] / 3.0).cos());
        let dx = derivative(&f, 0).unwrap();
        let exact = ScalarField::from_real_fn(&g, |r| k * (k * r[0] + 0.2).cos() * (2.0 * PI * r[1] / 3.0).cos());
        assert!(dx.max_abs_diff(&exact).unwrap() < 1e-12);
        assert!(dx.is_real());
        let lap = laplacian(&f).unwrap();
        let kk = k * k + (2.0 * PI / 3.0).powi(2);
        assert!(lap.max_abs_diff(&f.scale(-kk)).unwrap() < 1e-11);
    }

    #[test]
    fn rejects_dirichlet() {
        let g = Grid::line(16, 1.0, Boundary::Dirichlet).unwrap();
        assert!(matches!(forward(&ScalarField::zeros(&g)), Err(Error::BoundaryUnsupported)));
    }
}
