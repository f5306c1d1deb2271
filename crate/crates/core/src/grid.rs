//! Rectangular lattices in one or two dimensions and the discrete vector
//! calculus every other module is built on.
//!
//! Sites are flattened row-major with x as the slow axis: `idx = ix * ny + iy`.
//! A 1D grid is stored as `nx × 1`. All difference operators use second-order
//! central stencils; a Dirichlet grid behaves as if the field were zero on the
//! sites just outside the domain.

use serde::{Deserialize, Serialize};

use crate::{exec, Error, Result, C64};

pub type Point = [f64; 2];

pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "periodic" => Ok(Boundary::Periodic),
            "dirichlet" => Ok(Boundary::Dirichlet),
            other => Err(Error::Unknown {
                kind: "boundary",
                name: other.to_string(),
            }),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Dirichlet => "dirichlet",
        })
    }
}

/// Immutable lattice geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points: [usize; 2],
    spacing: [f64; 2],
    origin: [f64; 2],
    boundary: Boundary,
}

impl Grid {
    /// `origin` is the coordinate of site 0 along each axis.
    pub fn new(points: &[usize], spacing: &[f64], origin: &[f64], boundary: Boundary) -> Result<Self> {
        let dim = points.len();
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if spacing.len() != dim || origin.len() != dim {
            return Err(Error::InvalidGrid("points, spacing and origin must have one entry per axis".into()));
        }
        for axis in 0..dim {
            if points[axis] < MIN_POINTS {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis} has {} points, need at least {MIN_POINTS}",
                    points[axis]
                )));
            }
            if !(spacing[axis] > 0.0) || !spacing[axis].is_finite() {
                return Err(Error::InvalidGrid(format!("axis {axis} spacing must be positive and finite")));
            }
            if !origin[axis].is_finite() {
                return Err(Error::InvalidGrid(format!("axis {axis} origin must be finite")));
            }
        }
        let mut g = Grid {
            dim,
            points: [1, 1],
            spacing: [1.0, 1.0],
            origin: [0.0, 0.0],
            boundary,
        };
        g.points[..dim].copy_from_slice(points);
        g.spacing[..dim].copy_from_slice(spacing);
        g.origin[..dim].copy_from_slice(origin);
        Ok(g)
    }

    /// A box of side `length` centred on the origin.
    ///
    /// Periodic: `n` sites with spacing `length / n`, starting at `-length/2`.
    /// Dirichlet: `n` interior sites with spacing `length / (n + 1)`; the walls
    /// sit at `±length/2`.
    pub fn centered(points: &[usize], lengths: &[f64], boundary: Boundary) -> Result<Self> {
        if points.len() != lengths.len() {
            return Err(Error::InvalidGrid("points and lengths must have one entry per axis".into()));
        }
        let mut spacing = Vec::with_capacity(points.len());
        let mut origin = Vec::with_capacity(points.len());
        for (&n, &l) in points.iter().zip(lengths) {
            if !(l > 0.0) {
                return Err(Error::InvalidGrid("box length must be positive".into()));
            }
            let (h, o) = match boundary {
                Boundary::Periodic => (l / n as f64, -0.5 * l),
                Boundary::Dirichlet => {
                    let h = l / (n as f64 + 1.0);
                    (h, -0.5 * l + h)
                }
            };
            spacing.push(h);
            origin.push(o);
        }
        Grid::new(points, &spacing, &origin, boundary)
    }

    pub fn line(n: usize, length: f64, boundary: Boundary) -> Result<Self> {
        Grid::centered(&[n], &[length], boundary)
    }

    pub fn square(n: usize, length: f64, boundary: Boundary) -> Result<Self> {
        Grid::centered(&[n, n], &[length, length], boundary)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[usize] {
        &self.points[..self.dim]
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing[..self.dim]
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin[..self.dim]
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    /// Total number of sites.
    pub fn len(&self) -> usize {
        self.points[0] * self.points[1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    /// Length of the periodic cell along `axis` (`n·h`).
    pub fn period(&self, axis: usize) -> f64 {
        self.points[axis] as f64 * self.spacing[axis]
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.points[1] + iy
    }

    pub fn site(&self, idx: usize) -> [usize; 2] {
        [idx / self.points[1], idx % self.points[1]]
    }

    pub fn coords(&self, idx: usize) -> Point {
        let s = self.site(idx);
        let mut r = [0.0; 2];
        for axis in 0..self.dim {
            r[axis] = self.origin[axis] + s[axis] as f64 * self.spacing[axis];
        }
        r
    }

    /// Neighbouring site one step along `axis` (`forward` = towards larger
    /// index). `None` when the step leaves a Dirichlet domain.
    pub fn neighbor(&self, idx: usize, axis: usize, forward: bool) -> Option<usize> {
        let mut s = self.site(idx);
        let n = self.points[axis];
        let i = s[axis];
        let j = match (forward, self.boundary) {
            (true, _) if i + 1 < n => i + 1,
            (true, Boundary::Periodic) => 0,
            (false, _) if i > 0 => i - 1,
            (false, Boundary::Periodic) => n - 1,
            _ => return None,
        };
        s[axis] = j;
        Some(self.index(s[0], s[1]))
    }

    /// True when the site has both neighbours along every axis without
    /// crossing a wall or the periodic seam.
    pub fn is_interior(&self, idx: usize) -> bool {
        let s = self.site(idx);
        (0..self.dim).all(|axis| s[axis] > 0 && s[axis] + 1 < self.points[axis])
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionUnsupported {
                expected: dim,
                got: self.dim,
            })
        }
    }
}

/// Complex (or real-tagged) samples on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<C64>,
    real: bool,
}

impl ScalarField {
    pub fn new(grid: &Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} values, grid has {} sites",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
            real: false,
        })
    }

    pub fn from_real(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        let mut f = Self::new(grid, values.into_iter().map(|v| C64::new(v, 0.0)).collect())?;
        f.real = true;
        Ok(f)
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![C64::new(0.0, 0.0); grid.len()],
            real: true,
        }
    }

    pub fn constant(grid: &Grid, c: C64) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![c; grid.len()],
            real: c.im == 0.0,
        }
    }

    pub fn from_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(Point) -> C64 + Sync + Send,
    {
        let values = exec::collect(grid.len(), |i| f(grid.coords(i)));
        Self {
            grid: grid.clone(),
            values,
            real: false,
        }
    }

    pub fn from_real_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(Point) -> f64 + Sync + Send,
    {
        let values = exec::collect(grid.len(), |i| C64::new(f(grid.coords(i)), 0.0));
        Self {
            grid: grid.clone(),
            values,
            real: true,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Spatial mean of the samples.
    pub fn mean(&self) -> C64 {
        exec::sum(self.len(), |i| self.values[i]) / self.len() as f64
    }

    pub fn map<F>(&self, f: F) -> ScalarField
    where
        F: Fn(C64) -> C64,
    {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            real: false,
        }
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            real: self.real,
        }
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: f64, other: &ScalarField, b: f64) -> Result<ScalarField> {
        self.grid.ensure_same(&other.grid)?;
        Ok(ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect(),
            real: self.real && other.real,
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.combine(1.0, other, -1.0)
    }

    pub fn mul_pointwise(&self, other: &ScalarField) -> Result<ScalarField> {
        self.grid.ensure_same(&other.grid)?;
        Ok(ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect(),
            real: self.real && other.real,
        })
    }

    /// Copy with the spatial mean removed.
    pub fn zero_mean(&self) -> ScalarField {
        let m = self.mean();
        let m = if self.real { C64::new(m.re, 0.0) } else { m };
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v - m).collect(),
            real: self.real,
        }
    }

    pub(crate) fn with_values(&self, values: Vec<C64>, real: bool) -> ScalarField {
        debug_assert_eq!(values.len(), self.grid.len());
        ScalarField {
            grid: self.grid.clone(),
            values,
            real,
        }
    }
}

/// One [`ScalarField`] per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    grid: Grid,
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let grid = components
            .first()
            .map(|c| c.grid().clone())
            .ok_or_else(|| Error::InvalidParameter("vector field needs components".into()))?;
        if components.len() != grid.dim() {
            return Err(Error::InvalidParameter(format!(
                "{}D grid needs {} components, got {}",
                grid.dim(),
                grid.dim(),
                components.len()
            )));
        }
        for c in &components {
            grid.ensure_same(c.grid())?;
        }
        Ok(Self { grid, components })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            components: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn from_real_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(Point) -> [f64; 2] + Sync + Send,
    {
        let components = (0..grid.dim())
            .map(|axis| ScalarField::from_real_fn(grid, |r| f(r)[axis]))
            .collect();
        Self {
            grid: grid.clone(),
            components,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &ScalarField {
        &self.components[axis]
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(ScalarField::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &VectorField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let mut m: f64 = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            m = m.max(a.max_abs_diff(b)?);
        }
        Ok(m)
    }

    pub fn combine(&self, a: f64, other: &VectorField, b: f64) -> Result<VectorField> {
        self.grid.ensure_same(&other.grid)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.combine(a, y, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField {
            grid: self.grid.clone(),
            components,
        })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scale(&self, c: f64) -> VectorField {
        VectorField {
            grid: self.grid.clone(),
            components: self.components.iter().map(|x| x.scale(c)).collect(),
        }
    }
}

/// Two-component spinor on a 1D grid, stored as `[upper; lower]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    grid: Grid,
    amps: Vec<C64>,
}

impl SpinorField {
    pub fn new(upper: &ScalarField, lower: &ScalarField) -> Result<Self> {
        upper.grid().ensure_dim(1)?;
        upper.grid().ensure_same(lower.grid())?;
        let mut amps = upper.values().to_vec();
        amps.extend_from_slice(lower.values());
        Ok(Self {
            grid: upper.grid().clone(),
            amps,
        })
    }

    pub fn upper(&self) -> &[C64] {
        &self.amps[..self.grid.len()]
    }

    pub fn lower(&self) -> &[C64] {
        &self.amps[self.grid.len()..]
    }
}

/// A state vector living on a grid: a scalar wavefunction or a spinor.
pub trait LatticeField: Clone + Send + Sync {
    fn grid(&self) -> &Grid;
    /// Flattened amplitudes, component blocks of length `grid.len()`.
    fn amplitudes(&self) -> &[C64];
    fn components(&self) -> usize;
    fn with_amplitudes(&self, amps: Vec<C64>) -> Self;
}

impl LatticeField for ScalarField {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn amplitudes(&self) -> &[C64] {
        &self.values
    }
    fn components(&self) -> usize {
        1
    }
    fn with_amplitudes(&self, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), self.grid.len());
        ScalarField {
            grid: self.grid.clone(),
            values: amps,
            real: false,
        }
    }
}

impl LatticeField for SpinorField {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn amplitudes(&self) -> &[C64] {
        &self.amps
    }
    fn components(&self) -> usize {
        2
    }
    fn with_amplitudes(&self, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), 2 * self.grid.len());
        SpinorField {
            grid: self.grid.clone(),
            amps,
        }
    }
}

/// `Σ conj(f)·g` times the cell volume.
pub fn inner_product<F: LatticeField>(f: &F, g: &F) -> Result<C64> {
    f.grid().ensure_same(g.grid())?;
    Ok(exec::dot(f.amplitudes(), g.amplitudes()) * f.grid().cell_volume())
}

pub fn norm<F: LatticeField>(f: &F) -> f64 {
    (exec::norm_sqr(f.amplitudes()) * f.grid().cell_volume()).sqrt()
}

pub fn normalized<F: LatticeField>(f: &F) -> F {
    let n = norm(f);
    f.with_amplitudes(f.amplitudes().iter().map(|a| a / n).collect())
}

/// Central difference `(f[i+1] − f[i−1]) / 2h` along one axis.
pub fn partial(f: &ScalarField, axis: usize) -> ScalarField {
    let g = f.grid();
    assert!(axis < g.dim(), "axis {axis} out of range");
    let inv = 0.5 / g.spacing()[axis];
    let v = f.values();
    let out = exec::collect(g.len(), |i| {
        let fwd = g.neighbor(i, axis, true).map_or(C64::new(0.0, 0.0), |j| v[j]);
        let bwd = g.neighbor(i, axis, false).map_or(C64::new(0.0, 0.0), |j| v[j]);
        (fwd - bwd) * inv
    });
    f.with_values(out, f.is_real())
}

/// Three-point second difference `(f[i+1] − 2f[i] + f[i−1]) / h²` along one axis.
pub fn second_difference(f: &ScalarField, axis: usize) -> ScalarField {
    let g = f.grid();
    let inv = 1.0 / (g.spacing()[axis] * g.spacing()[axis]);
    let v = f.values();
    let out = exec::collect(g.len(), |i| {
        let fwd = g.neighbor(i, axis, true).map_or(C64::new(0.0, 0.0), |j| v[j]);
        let bwd = g.neighbor(i, axis, false).map_or(C64::new(0.0, 0.0), |j| v[j]);
        (fwd - v[i] * 2.0 + bwd) * inv
    });
    f.with_values(out, f.is_real())
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let components = (0..f.grid().dim()).map(|axis| partial(f, axis)).collect();
    VectorField {
        grid: f.grid().clone(),
        components,
    }
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let mut acc = partial(v.component(0), 0);
    for axis in 1..v.grid().dim() {
        acc = acc.add(&partial(v.component(axis), axis)).expect("components share a grid");
    }
    acc
}

/// Scalar curl `∂x v_y − ∂y v_x` on a 2D grid.
pub fn curl2d(v: &VectorField) -> Result<ScalarField> {
    v.grid().ensure_dim(2)?;
    partial(v.component(1), 0).sub(&partial(v.component(0), 1))
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let mut acc = second_difference(f, 0);
    for axis in 1..f.grid().dim() {
        acc = acc.add(&second_difference(f, axis)).expect("same grid");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn periodic_line(n: usize) -> Grid {
        Grid::line(n, 2.0 * PI, Boundary::Periodic).unwrap()
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(Grid::new(&[4], &[0.1], &[0.0], Boundary::Periodic).is_err());
        assert!(Grid::new(&[16], &[0.0], &[0.0], Boundary::Periodic).is_err());
        assert!(Grid::new(&[16, 16, 16], &[0.1; 3], &[0.0; 3], Boundary::Periodic).is_err());
        assert!(Grid::new(&[16], &[0.1, 0.1], &[0.0], Boundary::Periodic).is_err());
    }

    #[test]
    fn centered_dirichlet_places_walls_at_half_length() {
        let g = Grid::line(9, 10.0, Boundary::Dirichlet).unwrap();
        assert!((g.spacing()[0] - 1.0).abs() < 1e-15);
        assert!((g.coords(0)[0] + 4.0).abs() < 1e-15);
        assert!((g.coords(8)[0] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn neighbors_wrap_only_when_periodic() {
        let p = Grid::square(8, 1.0, Boundary::Periodic).unwrap();
        assert_eq!(p.neighbor(p.index(7, 3), 0, true), Some(p.index(0, 3)));
        assert_eq!(p.neighbor(p.index(2, 0), 1, false), Some(p.index(2, 7)));
        let d = Grid::square(8, 1.0, Boundary::Dirichlet).unwrap();
        assert_eq!(d.neighbor(d.index(7, 3), 0, true), None);
        assert_eq!(d.neighbor(d.index(2, 0), 1, false), None);
        assert_eq!(d.neighbor(d.index(2, 1), 1, false), Some(d.index(2, 0)));
    }

    #[test]
    fn normalized_self_product_is_one() {
        let g = periodic_line(32);
        let f = normalized(&ScalarField::from_fn(&g, |r| C64::new(r[0].cos() + 2.0, r[0].sin())));
        let ip = inner_product(&f, &f).unwrap();
        assert!((ip - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn distinct_plane_waves_are_orthogonal() {
        let g = periodic_line(32);
        let f = ScalarField::from_fn(&g, |r| C64::from_polar(1.0, 3.0 * r[0]));
        let h = ScalarField::from_fn(&g, |r| C64::from_polar(1.0, 5.0 * r[0]));
        assert!(inner_product(&f, &h).unwrap().norm() < 1e-13);
    }

    #[test]
    fn inner_product_grid_mismatch() {
        let f = ScalarField::zeros(&periodic_line(16));
        let h = ScalarField::zeros(&periodic_line(32));
        assert!(matches!(inner_product(&f, &h), Err(Error::GridMismatch)));
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = Grid::square(12, 3.0, Boundary::Periodic).unwrap();
        let f = ScalarField::constant(&g, C64::new(2.5, -1.0));
        assert_eq!(gradient(&f).max_abs(), 0.0);
        assert_eq!(laplacian(&f).max_abs(), 0.0);
    }

    #[test]
    fn gradient_of_sine_matches_stencil_closed_form() {
        let n = 64;
        let l = 3.0;
        let g = Grid::line(n, l, Boundary::Periodic).unwrap();
        let h = g.spacing()[0];
        let k = 2.0 * PI / l;
        let f = ScalarField::from_real_fn(&g, |r| (k * r[0]).sin());
        let d = partial(&f, 0);
        for i in 0..n {
            let x = g.coords(i)[0];
            let want = ((k * (x + h)).sin() - (k * (x - h)).sin()) / (2.0 * h);
            assert!((d.values()[i].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_is_laplacian_eigenvector() {
        let n = 40;
        let g = periodic_line(n);
        let h = g.spacing()[0];
        let k = 7.0;
        let f = ScalarField::from_fn(&g, |r| C64::from_polar(1.0, k * r[0]));
        let lap = laplacian(&f);
        let lambda = -(2.0 / (h * h)) * (1.0 - (k * h).cos());
        for (a, b) in lap.values().iter().zip(f.values()) {
            assert!((a - b * lambda).norm() < 1e-10);
        }
    }

    #[test]
    fn curl_of_rotation_field_is_one_inside_dirichlet_box() {
        let g = Grid::square(16, 4.0, Boundary::Dirichlet).unwrap();
        let v = VectorField::from_real_fn(&g, |r| [-0.5 * r[1], 0.5 * r[0]]);
        let c = curl2d(&v).unwrap();
        for i in 0..g.len() {
            if g.is_interior(i) {
                assert!((c.values()[i].re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curl_rejects_1d() {
        let g = periodic_line(16);
        let v = VectorField::zeros(&g);
        assert!(matches!(curl2d(&v), Err(Error::DimensionUnsupported { .. })));
    }

    #[test]
    fn spinor_layout_is_upper_then_lower() {
        let g = periodic_line(8);
        let up = ScalarField::constant(&g, C64::new(1.0, 0.0));
        let lo = ScalarField::constant(&g, C64::new(0.0, 2.0));
        let s = SpinorField::new(&up, &lo).unwrap();
        assert_eq!(s.upper()[3], C64::new(1.0, 0.0));
        assert_eq!(s.lower()[3], C64::new(0.0, 2.0));
        assert!((norm(&s) - (5.0 * 2.0 * PI).sqrt()).abs() < 1e-12);
    }
}
