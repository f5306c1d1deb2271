//! Electromagnetic potentials, gauge functions and gauge transformations.
//!
//! A gauge transformation by `χ(r, t)` acts as
//!
//! ```text
//! A  → A + ∇χ
//! A⁰ → A⁰ − ∂χ/∂t
//! ψ  → exp(iqχ) ψ
//! ```
//!
//! [`Potentials`] keep the untransformed sources and a stack of gauge
//! layers, so lattice link phases can use the exact difference
//! `χ(r_j) − χ(r_i)` for the gauge part. That keeps `H' = U H U†` exact on
//! the lattice instead of merely second order.

use std::sync::Arc;

use serde::Serialize;

use crate::grid::{self, Grid, LatticeField, Point, ScalarField, VectorField};
use crate::models::{ScalarModel, Scaled, Sum, VectorModel};
use crate::{exec, Error, Result, C64};

/// Step used when a time derivative has to be taken numerically and no step
/// was configured.
pub const DEFAULT_TIME_STEP: f64 = 1e-4;

/// How `∇χ` is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpatialGradient {
    /// Closed form from the model, falling back to the lattice stencil.
    Analytic,
    /// Central difference of the sampled `χ`, the same stencil the grid
    /// calculus uses. Field strengths of transformed potentials then match to
    /// roundoff.
    Lattice,
}

/// How `∂/∂t` is taken.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDerivative {
    /// Closed form when the model has one, otherwise a symmetric difference
    /// with [`DEFAULT_TIME_STEP`].
    Analytic,
    /// `(f(t+δ) − f(t−δ)) / 2δ`, error `O(δ²)`.
    Symmetric { step: f64 },
}

/// A gauge function `χ(r, t)` bound to a grid.
#[derive(Clone, Debug)]
pub struct GaugeFunction {
    grid: Grid,
    model: ScalarModel,
    sign: f64,
    spatial: SpatialGradient,
    time: TimeDerivative,
}

impl GaugeFunction {
    /// Rejects `χ` that is not single valued on a periodic grid.
    pub fn new(grid: &Grid, model: ScalarModel) -> Result<Self> {
        let g = GaugeFunction {
            grid: grid.clone(),
            model,
            sign: 1.0,
            spatial: SpatialGradient::Analytic,
            time: TimeDerivative::Analytic,
        };
        g.check_closure()?;
        Ok(g)
    }

    pub fn zero(grid: &Grid) -> Self {
        GaugeFunction {
            grid: grid.clone(),
            model: Arc::new(crate::models::Zero),
            sign: 1.0,
            spatial: SpatialGradient::Analytic,
            time: TimeDerivative::Analytic,
        }
    }

    pub fn with_spatial(mut self, mode: SpatialGradient) -> Self {
        self.spatial = mode;
        self
    }

    pub fn with_time(mut self, mode: TimeDerivative) -> Self {
        self.time = mode;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn spatial_mode(&self) -> SpatialGradient {
        self.spatial
    }

    pub fn time_mode(&self) -> TimeDerivative {
        self.time
    }

    pub fn label(&self) -> String {
        if self.sign < 0.0 {
            format!("-({})", self.model.label())
        } else {
            self.model.label()
        }
    }

    /// True when the model supplies closed-form `∇χ` and `∂χ/∂t`.
    pub fn is_analytic(&self) -> bool {
        let r = self.grid.coords(0);
        self.model.grad(r, 0.0).is_some() && self.model.dt(r, 0.0).is_some()
    }

    pub fn is_static(&self) -> bool {
        self.model.is_static()
    }

    fn check_closure(&self) -> Result<()> {
        if !self.grid.is_periodic() {
            return Ok(());
        }
        let g = &self.grid;
        for axis in 0..g.dim() {
            let n = g.points()[axis];
            let h = g.spacing()[axis];
            let mut worst: f64 = 0.0;
            for &t in &[0.0, 0.371, 1.0] {
                for i in 0..g.len() {
                    if g.site(i)[axis] != n - 1 {
                        continue;
                    }
                    let j = g.neighbor(i, axis, true).expect("periodic");
                    let mut beyond = g.coords(i);
                    beyond[axis] += h;
                    let a = self.model.value(beyond, t);
                    let b = self.model.value(g.coords(j), t);
                    worst = worst.max((a - b).abs() / (1.0 + b.abs()));
                }
            }
            if worst > 1e-9 {
                return Err(Error::NonPeriodicGauge { axis, jump: worst });
            }
        }
        Ok(())
    }

    pub fn value_at(&self, r: Point, t: f64) -> f64 {
        self.sign * self.model.value(r, t)
    }

    pub fn sample(&self, t: f64) -> ScalarField {
        ScalarField::from_real_fn(&self.grid, |r| self.value_at(r, t))
    }

    /// `χ(r_j) − χ(r_i)` evaluated at the two sites' own coordinates.
    pub fn difference(&self, i: usize, j: usize, t: f64) -> f64 {
        self.value_at(self.grid.coords(j), t) - self.value_at(self.grid.coords(i), t)
    }

    pub fn grad(&self, t: f64) -> VectorField {
        if self.spatial == SpatialGradient::Analytic {
            if let Some(v) = self.analytic_grad(t) {
                return v;
            }
        }
        grid::gradient(&self.sample(t))
    }

    fn analytic_grad(&self, t: f64) -> Option<VectorField> {
        let r0 = self.grid.coords(0);
        self.model.grad(r0, t)?;
        let s = self.sign;
        Some(VectorField::from_real_fn(&self.grid, |r| {
            let g = self.model.grad(r, t).unwrap_or([f64::NAN; 2]);
            [s * g[0], s * g[1]]
        }))
    }

    pub fn dt(&self, t: f64) -> ScalarField {
        let s = self.sign;
        match self.time {
            TimeDerivative::Analytic if self.model.dt(self.grid.coords(0), t).is_some() => {
                ScalarField::from_real_fn(&self.grid, |r| s * self.model.dt(r, t).unwrap_or(f64::NAN))
            }
            TimeDerivative::Analytic => self.symmetric_dt(t, DEFAULT_TIME_STEP),
            TimeDerivative::Symmetric { step } => self.symmetric_dt(t, step),
        }
    }

    fn symmetric_dt(&self, t: f64, step: f64) -> ScalarField {
        ScalarField::from_real_fn(&self.grid, |r| {
            (self.value_at(r, t + step) - self.value_at(r, t - step)) / (2.0 * step)
        })
    }

    /// `∇(∂χ/∂t)`, consistent with the chosen spatial and time modes.
    pub fn dt_grad(&self, t: f64) -> VectorField {
        let analytic_time = match self.time {
            TimeDerivative::Analytic => self.model.dt(self.grid.coords(0), t).is_some(),
            TimeDerivative::Symmetric { .. } => false,
        };
        if self.spatial == SpatialGradient::Analytic {
            if analytic_time && self.model.dt_grad(self.grid.coords(0), t).is_some() {
                let s = self.sign;
                return VectorField::from_real_fn(&self.grid, |r| {
                    let g = self.model.dt_grad(r, t).unwrap_or([f64::NAN; 2]);
                    [s * g[0], s * g[1]]
                });
            }
            if !analytic_time && self.model.grad(self.grid.coords(0), t).is_some() {
                let step = match self.time {
                    TimeDerivative::Symmetric { step } => step,
                    TimeDerivative::Analytic => DEFAULT_TIME_STEP,
                };
                let plus = self.grad(t + step);
                let minus = self.grad(t - step);
                return plus.combine(0.5 / step, &minus, -0.5 / step).expect("same grid");
            }
        }
        grid::gradient(&self.dt(t))
    }

    /// `‖∇χ_analytic − gradient(χ)‖∞` at `t`; `None` without a closed form.
    pub fn consistency(&self, t: f64) -> Option<f64> {
        let a = self.analytic_grad(t)?;
        a.max_abs_diff(&grid::gradient(&self.sample(t))).ok()
    }

    pub fn negated(&self) -> Self {
        let mut g = self.clone();
        g.sign = -self.sign;
        g
    }

    /// `χ₁ + χ₂` as one gauge function.
    pub fn plus(&self, other: &GaugeFunction) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let part = |g: &GaugeFunction| -> ScalarModel {
            if g.sign < 0.0 {
                Arc::new(Scaled(-1.0, g.model.clone()))
            } else {
                g.model.clone()
            }
        };
        Ok(GaugeFunction {
            grid: self.grid.clone(),
            model: Arc::new(Sum(vec![part(self), part(other)])),
            sign: 1.0,
            spatial: self.spatial,
            time: self.time,
        })
    }

    fn cancels(&self, other: &GaugeFunction) -> bool {
        Arc::ptr_eq(&self.model, &other.model)
            && self.sign == -other.sign
            && self.spatial == other.spatial
            && self.time == other.time
    }
}

/// Scalar potential source before gauge layers.
#[derive(Clone, Debug)]
pub enum ScalarSource {
    Zero,
    Model(ScalarModel),
    Sampled(ScalarField),
}

/// Vector potential source before gauge layers.
#[derive(Clone, Debug)]
pub enum VectorSource {
    Zero,
    Model(VectorModel),
    Sampled(VectorField),
}

/// Time-parameterized `(A⁰, A)` with an optional static charge density.
#[derive(Clone, Debug)]
pub struct Potentials {
    grid: Grid,
    a0: ScalarSource,
    a: VectorSource,
    rho: Option<ScalarField>,
    layers: Vec<GaugeFunction>,
    time: TimeDerivative,
}

impl Potentials {
    pub fn vacuum(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            a0: ScalarSource::Zero,
            a: VectorSource::Zero,
            rho: None,
            layers: Vec::new(),
            time: TimeDerivative::Analytic,
        }
    }

    pub fn with_scalar(mut self, f: ScalarModel) -> Self {
        self.a0 = ScalarSource::Model(f);
        self
    }

    pub fn with_vector(mut self, a: VectorModel) -> Self {
        self.a = VectorSource::Model(a);
        self
    }

    pub fn with_scalar_field(mut self, f: ScalarField) -> Result<Self> {
        self.grid.ensure_same(f.grid())?;
        self.a0 = ScalarSource::Sampled(f);
        Ok(self)
    }

    pub fn with_vector_field(mut self, a: VectorField) -> Result<Self> {
        self.grid.ensure_same(a.grid())?;
        self.a = VectorSource::Sampled(a);
        Ok(self)
    }

    pub fn with_rho(mut self, rho: ScalarField) -> Result<Self> {
        self.grid.ensure_same(rho.grid())?;
        self.rho = Some(rho);
        Ok(self)
    }

    /// Time-derivative policy for the base vector potential.
    pub fn with_time_derivative(mut self, mode: TimeDerivative) -> Self {
        self.time = mode;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rho(&self) -> Option<&ScalarField> {
        self.rho.as_ref()
    }

    pub fn layers(&self) -> &[GaugeFunction] {
        &self.layers
    }

    pub fn scalar_source(&self) -> &ScalarSource {
        &self.a0
    }

    pub fn vector_source(&self) -> &VectorSource {
        &self.a
    }

    pub fn is_static(&self) -> bool {
        let base = match &self.a0 {
            ScalarSource::Model(f) => f.is_static(),
            _ => true,
        } && match &self.a {
            VectorSource::Model(a) => a.is_static(),
            _ => true,
        };
        base && self.layers.iter().all(GaugeFunction::is_static)
    }

    fn base_a0(&self, t: f64) -> ScalarField {
        match &self.a0 {
            ScalarSource::Zero => ScalarField::zeros(&self.grid),
            ScalarSource::Model(f) => ScalarField::from_real_fn(&self.grid, |r| f.value(r, t)),
            ScalarSource::Sampled(s) => s.clone(),
        }
    }

    fn base_a(&self, t: f64) -> VectorField {
        match &self.a {
            VectorSource::Zero => VectorField::zeros(&self.grid),
            VectorSource::Model(a) => VectorField::from_real_fn(&self.grid, |r| a.value(r, t)),
            VectorSource::Sampled(v) => v.clone(),
        }
    }

    /// `A⁰(t)` including every gauge layer.
    pub fn a0(&self, t: f64) -> ScalarField {
        let mut acc = self.base_a0(t);
        for layer in &self.layers {
            acc = acc.sub(&layer.dt(t)).expect("same grid");
        }
        acc
    }

    /// `A(t)` including every gauge layer.
    pub fn a(&self, t: f64) -> VectorField {
        let mut acc = self.base_a(t);
        for layer in &self.layers {
            acc = acc.add(&layer.grad(t)).expect("same grid");
        }
        acc
    }

    /// `∂A/∂t`
    pub fn da_dt(&self, t: f64) -> VectorField {
        let mut acc = match (&self.a, self.time) {
            (VectorSource::Model(a), TimeDerivative::Analytic) if a.dt(self.grid.coords(0), t).is_some() => {
                VectorField::from_real_fn(&self.grid, |r| a.dt(r, t).unwrap_or([f64::NAN; 2]))
            }
            (VectorSource::Model(_), mode) => {
                let step = match mode {
                    TimeDerivative::Symmetric { step } => step,
                    TimeDerivative::Analytic => DEFAULT_TIME_STEP,
                };
                self.base_a(t + step).combine(0.5 / step, &self.base_a(t - step), -0.5 / step).expect("same grid")
            }
            _ => VectorField::zeros(&self.grid),
        };
        for layer in &self.layers {
            acc = acc.add(&layer.dt_grad(t)).expect("same grid");
        }
        acc
    }

    /// `∫ A·dl` from each site to its forward neighbour along each axis, zero
    /// where the neighbour is outside a Dirichlet box.
    ///
    /// Modelled sources use their own line integral (Gauss–Legendre unless the
    /// model is exact), sampled sources the trapezoid rule, and each gauge
    /// layer contributes `χ(r_j) − χ(r_i)` exactly.
    pub fn link_integrals(&self, t: f64) -> Vec<[f64; 2]> {
        let g = &self.grid;
        let sampled = match &self.a {
            VectorSource::Sampled(v) => Some(v),
            _ => None,
        };
        exec::collect(g.len(), |i| {
            let mut out = [0.0; 2];
            for (axis, slot) in out.iter_mut().enumerate().take(g.dim()) {
                let Some(j) = g.neighbor(i, axis, true) else { continue };
                let h = g.spacing()[axis];
                let ri = g.coords(i);
                let mut theta = match &self.a {
                    VectorSource::Zero => 0.0,
                    VectorSource::Model(a) => {
                        let mut rj = ri;
                        rj[axis] += h;
                        a.line_integral(ri, rj, t)
                    }
                    VectorSource::Sampled(_) => {
                        let c = sampled.expect("sampled").component(axis).values();
                        0.5 * h * (c[i].re + c[j].re)
                    }
                };
                for layer in &self.layers {
                    theta += layer.difference(i, j, t);
                }
                *slot = theta;
            }
            out
        })
    }

    /// Applies `χ`. Transforming back by the negation of the most recent layer
    /// removes that layer, so a round trip restores the potentials exactly.
    pub fn transformed(&self, chi: &GaugeFunction) -> Result<Potentials> {
        self.grid.ensure_same(chi.grid())?;
        let mut out = self.clone();
        if out.layers.last().is_some_and(|l| l.cancels(chi)) {
            out.layers.pop();
        } else {
            out.layers.push(chi.clone());
        }
        Ok(out)
    }

    /// The same potentials with every gauge layer dropped.
    pub fn untransformed(&self) -> Potentials {
        let mut out = self.clone();
        out.layers.clear();
        out
    }
}

/// `A → A + ∇χ`, `A⁰ → A⁰ − ∂χ/∂t`.
pub fn transform_potentials(p: &Potentials, chi: &GaugeFunction) -> Result<Potentials> {
    p.transformed(chi)
}

/// Multiplies every component by `exp(iqχ(r, t))`.
pub fn transform_state<F: LatticeField>(psi: &F, chi: &GaugeFunction, t: f64, q: f64) -> Result<F> {
    psi.grid().ensure_same(chi.grid())?;
    let n = psi.grid().len();
    let phases: Vec<C64> = exec::collect(n, |i| C64::from_polar(1.0, q * chi.value_at(psi.grid().coords(i), t)));
    let amps = psi.amplitudes();
    let out = exec::collect(amps.len(), |k| amps[k] * phases[k % n]);
    Ok(psi.with_amplitudes(out))
}

/// `E` and, in 2D, the scalar `B`.
#[derive(Clone, Debug)]
pub struct FieldStrength {
    pub e: VectorField,
    pub b: Option<ScalarField>,
}

/// `E = −∇A⁰ − ∂A/∂t`, `B = ∂x A_y − ∂y A_x`, with the grid's stencils.
pub fn fields_from_potentials(p: &Potentials, t: f64) -> FieldStrength {
    let grad_a0 = grid::gradient(&p.a0(t));
    let e = grad_a0.combine(-1.0, &p.da_dt(t), -1.0).expect("same grid");
    let b = if p.grid().dim() == 2 {
        Some(grid::curl2d(&p.a(t)).expect("2D"))
    } else {
        None
    };
    FieldStrength { e, b }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub max_e_deviation: f64,
    pub max_b_deviation: Option<f64>,
    pub samples: usize,
}

/// Largest change of `E` and `B` over `times` when `p` is transformed by `χ`.
pub fn gauge_invariance_check(p: &Potentials, chi: &GaugeFunction, times: &[f64]) -> Result<InvarianceReport> {
    let q = transform_potentials(p, chi)?;
    let mut de: f64 = 0.0;
    let mut db: Option<f64> = None;
    for &t in times {
        let f = fields_from_potentials(p, t);
        let g = fields_from_potentials(&q, t);
        de = de.max(f.e.max_abs_diff(&g.e)?);
        if let (Some(b1), Some(b2)) = (&f.b, &g.b) {
            db = Some(db.unwrap_or(0.0).max(b1.max_abs_diff(b2)?));
        }
    }
    Ok(InvarianceReport {
        max_e_deviation: de,
        max_b_deviation: db,
        samples: times.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    /// `⟨ψ'|p|ψ'⟩ − ⟨ψ|p|ψ⟩` per axis.
    pub momentum_shift: Vec<f64>,
    /// `q⟨ψ|∇χ|ψ⟩` per axis.
    pub predicted: Vec<f64>,
    pub deviation: f64,
}

/// Tolerance on `‖ψ‖` for operations that require a normalized state.
pub const NORM_TOLERANCE: f64 = 1e-8;

pub(crate) fn ensure_normalized<F: LatticeField>(psi: &F) -> Result<()> {
    let n = grid::norm(psi);
    if (n - 1.0).abs() > NORM_TOLERANCE {
        Err(Error::NotNormalized(n))
    } else {
        Ok(())
    }
}

/// `⟨ψ|p_a|ψ⟩` with `p = −i·(central difference)`.
pub fn momentum_expectation(psi: &ScalarField, axis: usize) -> f64 {
    let d = grid::partial(psi, axis);
    let dv = psi.grid().cell_volume();
    let s = exec::dot(psi.values(), d.values()) * dv;
    (C64::new(0.0, -1.0) * s).re
}

/// Compares the canonical-momentum shift under `ψ → exp(iqχ)ψ` with
/// `q⟨ψ|∇χ|ψ⟩`. Both sides use the grid's central-difference stencil for `p`;
/// `∇χ` follows the gauge function's spatial mode.
pub fn expectation_shift_check(psi: &ScalarField, chi: &GaugeFunction, t: f64, q: f64) -> Result<ShiftReport> {
    ensure_normalized(psi)?;
    let moved = transform_state(psi, chi, t, q)?;
    let grad = chi.grad(t);
    let dv = psi.grid().cell_volume();
    let mut shift = Vec::new();
    let mut predicted = Vec::new();
    let mut dev: f64 = 0.0;
    for axis in 0..psi.grid().dim() {
        let s = momentum_expectation(&moved, axis) - momentum_expectation(psi, axis);
        let g = grad.component(axis).values();
        let v = psi.values();
        let p = q * exec::sum(v.len(), |i| C64::new(v[i].norm_sqr() * g[i].re, 0.0)).re * dv;
        dev = dev.max((s - p).abs());
        shift.push(s);
        predicted.push(p);
    }
    Ok(ShiftReport {
        momentum_shift: shift,
        predicted,
        deviation: dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Boundary;
    use crate::models::{Bilinear, Constant, FourierSum, LinearInSpace, LinearInTime, SoftCoulomb, TimeRamp};
    use std::f64::consts::PI;

    fn torus() -> Grid {
        Grid::square(16, 4.0, Boundary::Periodic).unwrap()
    }

    #[test]
    fn non_periodic_gauge_is_rejected_on_torus() {
        let g = torus();
        assert!(matches!(
            GaugeFunction::new(&g, Arc::new(LinearInSpace([1.0, 0.0]))),
            Err(Error::NonPeriodicGauge { axis: 0, .. })
        ));
        assert!(GaugeFunction::new(&g, Arc::new(Bilinear(0.5))).is_err());
        let box_grid = Grid::square(16, 4.0, Boundary::Dirichlet).unwrap();
        assert!(GaugeFunction::new(&box_grid, Arc::new(Bilinear(0.5))).is_ok());
        assert!(GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 3, 2, 1.0, 1.0, 5).unwrap())).is_ok());
    }

    #[test]
    fn constant_in_space_gauge_only_shifts_a0() {
        let g = torus();
        let p = Potentials::vacuum(&g).with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap().periodized(&g)));
        let chi = GaugeFunction::new(&g, Arc::new(LinearInTime(0.7))).unwrap();
        let q = transform_potentials(&p, &chi).unwrap();
        assert_eq!(q.a(0.3), p.a(0.3));
        let d = q.a0(0.3).sub(&p.a0(0.3)).unwrap();
        assert!(d.values().iter().all(|v| (v.re + 0.7).abs() < 1e-15));
    }

    #[test]
    fn round_trip_restores_potentials_exactly() {
        let g = torus();
        let p = Potentials::vacuum(&g).with_vector(Arc::new(crate::models::FourierVector::periodic_transverse(&g, 1.0).unwrap()));
        let chi = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 4, 2, 1.0, 2.0, 9).unwrap())).unwrap();
        let there = transform_potentials(&p, &chi).unwrap();
        let back = transform_potentials(&there, &chi.negated()).unwrap();
        assert_eq!(back.a(0.4), p.a(0.4));
        assert_eq!(back.a0(0.4), p.a0(0.4));
        assert!(there.a(0.4).max_abs_diff(&p.a(0.4)).unwrap() > 1e-3);
    }

    #[test]
    fn temporal_gauge_matches_closed_form() {
        let g = Grid::line(64, 20.0, Boundary::Periodic).unwrap();
        let sc: ScalarModel = Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap().periodized(&g));
        let p = Potentials::vacuum(&g).with_scalar(sc.clone());
        let chi = GaugeFunction::new(&g, Arc::new(TimeRamp(sc.clone()))).unwrap();
        let q = transform_potentials(&p, &chi).unwrap();
        let t = 0.8;
        assert!(q.a0(t).max_abs() < 1e-15);
        // A' = t·∇A⁰ = κ t r / (r² + a²)^{3/2}
        let expect = ScalarField::from_real_fn(&g, |r| t * r[0] / (r[0] * r[0] + 0.25f64).powf(1.5));
        // the minimal-image gradient is two-valued at the antipode, site 0
        let d = q.a(t).component(0).sub(&expect).unwrap();
        assert!(d.values()[1..].iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn lattice_gradient_mode_makes_fields_invariant_to_roundoff() {
        let g = torus();
        let p = Potentials::vacuum(&g)
            .with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap().periodized(&g)))
            .with_vector(Arc::new(crate::models::FourierVector::periodic_transverse(&g, 0.5).unwrap()));
        let chi = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 4, 2, 1.0, 2.0, 3).unwrap()))
            .unwrap()
            .with_spatial(SpatialGradient::Lattice);
        let r = gauge_invariance_check(&p, &chi, &[0.0, 0.5, 1.0]).unwrap();
        assert!(r.max_e_deviation < 1e-10, "{}", r.max_e_deviation);
        assert!(r.max_b_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn transform_state_is_unitary_and_composes() {
        let g = torus();
        let psi = ScalarField::from_fn(&g, |r| C64::new((r[0] * 1.3).cos(), r[1] * 0.2));
        let c1 = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 3, 2, 1.0, 1.0, 1).unwrap())).unwrap();
        let c2 = GaugeFunction::new(&g, Arc::new(Constant(0.3))).unwrap();
        let a = transform_state(&transform_state(&psi, &c1, 0.2, 1.5).unwrap(), &c2, 0.2, 1.5).unwrap();
        let b = transform_state(&psi, &c1.plus(&c2).unwrap(), 0.2, 1.5).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-14);
        assert!((grid::norm(&a) - grid::norm(&psi)).abs() < 1e-13);
    }

    #[test]
    fn expectation_shift_needs_normalized_state() {
        let g = torus();
        let psi = ScalarField::constant(&g, C64::new(2.0, 0.0));
        let chi = GaugeFunction::new(&g, Arc::new(Constant(1.0))).unwrap();
        assert!(matches!(expectation_shift_check(&psi, &chi, 0.0, 1.0), Err(Error::NotNormalized(_))));
        let psi = grid::normalized(&psi);
        let r = expectation_shift_check(&psi, &chi, 0.0, 1.0).unwrap();
        assert!(r.deviation < 1e-14);
        let single = GaugeFunction::new(&g, Arc::new(FourierSum::single(&g, 0.2, [1, 0], 0.0, 0.0))).unwrap();
        assert!((single.value_at([0.0, 0.0], 0.0) - 0.2 * (2.0 * PI * 0.0).cos()).abs() < 1e-15);
    }
}
