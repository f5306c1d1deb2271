//! Crank–Nicolson propagation and the checks built on it.
//!
//! One step solves `(I + iτH)ψₙ₊₁ = (I − iτH)ψₙ` with `τ = dt/2` and `H`
//! evaluated at the step midpoint. The system is solved by conjugate
//! gradient on the equivalent positive definite form
//! `(I + τ²H²)ψₙ₊₁ = (I − iτH)²ψₙ`, and each step is certified against the
//! original system.
//!
//! For an eigenvector with eigenvalue `λ` one step multiplies by
//! `(1 − iτλ)/(1 + iτλ) = exp(−2i·arctan(τλ))`, so the propagated phase
//! rate is `−(2/dt)·arctan(λ dt/2)`.

use std::io::Write;

use serde::Serialize;

use crate::gauge::{self, transform_potentials, transform_state, GaugeFunction, Potentials};
use crate::grid::{self, LatticeField};
use crate::operators::{self, BuildOptions, HermitianOperator, Kind};
use crate::spectra::{self, conjugate_gradient, Spectrum};
use crate::{exec, Error, Particle, Result, C64};

/// Certified bound on `‖(I + iτH)x − b‖ / ‖b‖` per step.
pub const SOLVE_TOLERANCE: f64 = 1e-12;

/// Either a fixed operator or one rebuilt at every midpoint.
pub enum HamiltonianSource<'a> {
    Static(&'a HermitianOperator),
    TimeDependent(Box<dyn Fn(f64) -> Result<HermitianOperator> + Send + Sync + 'a>),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Schedule {
    pub t0: f64,
    pub dt: f64,
    pub steps: usize,
    /// Keep every `sample_every`-th state (the initial and final states are
    /// always kept).
    pub sample_every: usize,
}

impl Schedule {
    pub fn new(t0: f64, dt: f64, steps: usize) -> Self {
        Self {
            t0,
            dt,
            steps,
            sample_every: 1,
        }
    }

    pub fn sampled(mut self, every: usize) -> Self {
        self.sample_every = every.max(1);
        self
    }

    pub fn end(&self) -> f64 {
        self.t0 + self.dt * self.steps as f64
    }
}

#[derive(Clone, Debug)]
pub struct PropagationResult<F> {
    pub times: Vec<f64>,
    pub states: Vec<F>,
    pub norms: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    /// `max |‖ψ‖ − 1|` over samples.
    pub norm_drift: f64,
    /// Worst certified relative residual of the step solves.
    pub max_solve_residual: f64,
}

impl<F> PropagationResult<F> {
    pub fn write_norms_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "time,norm")?;
        for (t, n) in self.times.iter().zip(&self.norms) {
            writeln!(w, "{t:e},{n:e}")?;
        }
        Ok(())
    }
}

/// One Crank–Nicolson step with `tau = dt/2`; returns the new state and the
/// relative residual of the original system.
pub fn cn_step(h: &HermitianOperator, psi: &[C64], tau: f64) -> Result<(Vec<C64>, f64)> {
    let n = psi.len();
    let i_tau = C64::new(0.0, tau);
    let hpsi = h.apply(psi);
    let rhs: Vec<C64> = exec::collect(n, |i| psi[i] - i_tau * hpsi[i]);
    let hr = h.apply(&rhs);
    let normal_rhs: Vec<C64> = exec::collect(n, |i| rhs[i] - i_tau * hr[i]);
    let mut x = rhs.clone();
    let info = conjugate_gradient(
        |v| {
            let hv = h.apply(v);
            let hhv = h.apply(&hv);
            exec::collect(n, |i| v[i] + hhv[i] * (tau * tau))
        },
        &normal_rhs,
        &mut x,
        1e-15,
        2000,
    );
    let hx = h.apply(&x);
    let bn = exec::norm_sqr(&rhs).sqrt();
    let res = exec::sum(n, |i| C64::new((x[i] + i_tau * hx[i] - rhs[i]).norm_sqr(), 0.0)).re.sqrt();
    let rel = if bn > 0.0 { res / bn } else { res };
    if !rel.is_finite() || rel > SOLVE_TOLERANCE {
        return Err(Error::PropagationFailure(format!(
            "step solve stalled at relative residual {rel:e} after {} iterations (normal form {:e})",
            info.iterations, info.relative_residual
        )));
    }
    Ok((x, rel))
}

/// Propagates `psi0` from `schedule.t0` for `schedule.steps` steps.
pub fn evolve<F: LatticeField>(psi0: &F, hamiltonian: &HamiltonianSource<'_>, schedule: Schedule) -> Result<PropagationResult<F>> {
    if !(schedule.dt > 0.0) || !schedule.dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {}", schedule.dt)));
    }
    gauge::ensure_normalized(psi0)?;
    let tau = 0.5 * schedule.dt;
    let mut psi = psi0.amplitudes().to_vec();
    let mut out = PropagationResult {
        times: vec![schedule.t0],
        states: vec![psi0.clone()],
        norms: vec![grid::norm(psi0)],
        dt: schedule.dt,
        steps: schedule.steps,
        norm_drift: 0.0,
        max_solve_residual: 0.0,
    };
    for step in 0..schedule.steps {
        let t_mid = schedule.t0 + (step as f64 + 0.5) * schedule.dt;
        let (next, rel) = match hamiltonian {
            HamiltonianSource::Static(h) => cn_step(h, &psi, tau)?,
            HamiltonianSource::TimeDependent(build) => cn_step(&build(t_mid)?, &psi, tau)?,
        };
        psi = next;
        out.max_solve_residual = out.max_solve_residual.max(rel);
        let done = step + 1;
        if done % schedule.sample_every == 0 || done == schedule.steps {
            let state = psi0.with_amplitudes(psi.clone());
            out.norms.push(grid::norm(&state));
            out.times.push(schedule.t0 + done as f64 * schedule.dt);
            out.states.push(state);
        }
    }
    out.norm_drift = out.norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    Ok(out)
}

/// What the covariance and stationarity checks propagate under.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct System {
    pub particle: Particle,
    pub kind: Kind,
    pub options: BuildOptions,
}

impl System {
    pub fn schrodinger(particle: Particle) -> Self {
        Self {
            particle,
            kind: Kind::Schrodinger,
            options: BuildOptions::default(),
        }
    }

    pub fn dirac(particle: Particle, wilson: Option<f64>) -> Self {
        Self {
            particle,
            kind: Kind::Dirac,
            options: BuildOptions {
                wilson,
                ..BuildOptions::default()
            },
        }
    }

    pub fn hamiltonian(&self, p: &Potentials, t: f64) -> Result<HermitianOperator> {
        operators::hamiltonian(p, t, self.particle, self.kind, self.options)
    }

    fn components(&self) -> usize {
        match self.kind {
            Kind::Schrodinger => 1,
            Kind::Dirac => 2,
        }
    }

    /// Static potentials are assembled once, others at every midpoint.
    pub fn source<'a>(&'a self, p: &'a Potentials) -> Result<HamiltonianSourceOwned<'a>> {
        if p.is_static() {
            Ok(HamiltonianSourceOwned::Static(self.hamiltonian(p, 0.0)?))
        } else {
            Ok(HamiltonianSourceOwned::TimeDependent(Box::new(move |t| self.hamiltonian(p, t))))
        }
    }
}

/// Owning counterpart of [`HamiltonianSource`].
pub enum HamiltonianSourceOwned<'a> {
    Static(HermitianOperator),
    TimeDependent(Box<dyn Fn(f64) -> Result<HermitianOperator> + Send + Sync + 'a>),
}

impl HamiltonianSourceOwned<'_> {
    pub fn evolve<F: LatticeField>(&self, psi0: &F, schedule: Schedule) -> Result<PropagationResult<F>> {
        match self {
            HamiltonianSourceOwned::Static(h) => evolve(psi0, &HamiltonianSource::Static(h), schedule),
            HamiltonianSourceOwned::TimeDependent(b) => {
                evolve(psi0, &HamiltonianSource::TimeDependent(Box::new(|t| b(t))), schedule)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    /// `max_t ‖ψ'(t) − exp(iqχ(t))ψ(t)‖`
    pub max_deviation: f64,
    /// `max_t max_r | |ψ'|² − |ψ|² |`
    pub max_density_deviation: f64,
    pub final_time: f64,
    pub norm_drift: f64,
    pub samples: usize,
}

/// Propagates `psi0` under `H(p)` and `exp(iqχ(t0))psi0` under `H(p')`,
/// `p' = p` transformed by `χ`, and compares the second trajectory with the
/// gauge transform of the first.
pub fn gauge_covariance_check<F: LatticeField>(
    psi0: &F,
    p: &Potentials,
    chi: &GaugeFunction,
    system: System,
    schedule: Schedule,
) -> Result<CovarianceReport> {
    let q = system.particle.q;
    let moved = transform_potentials(p, chi)?;
    let psi0_moved = transform_state(psi0, chi, schedule.t0, q)?;
    let src = system.source(p)?;
    let src_moved = system.source(&moved)?;
    let (a, b) = exec::join(|| src.evolve(psi0, schedule), || src_moved.evolve(&psi0_moved, schedule));
    let (a, b) = (a?, b?);
    let mut dev: f64 = 0.0;
    let mut dens: f64 = 0.0;
    for ((t, s), s2) in a.times.iter().zip(&a.states).zip(&b.states) {
        let expected = transform_state(s, chi, *t, q)?;
        let diff = s2.with_amplitudes(
            s2.amplitudes()
                .iter()
                .zip(expected.amplitudes())
                .map(|(x, y)| x - y)
                .collect(),
        );
        dev = dev.max(grid::norm(&diff));
        for (x, y) in s.amplitudes().iter().zip(s2.amplitudes()) {
            dens = dens.max((x.norm_sqr() - y.norm_sqr()).abs());
        }
    }
    Ok(CovarianceReport {
        max_deviation: dev,
        max_density_deviation: dens,
        final_time: schedule.end(),
        norm_drift: a.norm_drift.max(b.norm_drift),
        samples: a.times.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StationaryReport {
    pub eigen_residual: f64,
    /// `max_t | |⟨ψ(0)|ψ(t)⟩| − 1 |`
    pub modulus_deviation: f64,
    pub fitted_rate: f64,
    /// `−(2/dt)·arctan(α dt/2)`
    pub expected_rate: f64,
    pub rate_deviation: f64,
    pub samples: usize,
    #[serde(skip)]
    pub phases: Vec<(f64, f64)>,
}

/// Residual bound, relative to `max(1, ‖H‖∞)`, for accepting an eigenpair.
pub const STATIONARY_TOLERANCE: f64 = 1e-9;

/// The closed-form Crank–Nicolson phase rate of an eigenvalue.
pub fn cn_phase_rate(alpha: f64, dt: f64) -> f64 {
    -(2.0 / dt) * (0.5 * alpha * dt).atan()
}

/// Least-squares slope of `y` against `x`.
fn fitted_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Evolves an eigenvector and measures overlap modulus and phase rate.
///
/// The phase of `⟨ψ(0)|ψ(t)⟩` is unwrapped sample by sample, so the per
/// sample phase advance must stay below π.
pub fn stationary_phase_check<F: LatticeField>(
    psi_k: &F,
    alpha_k: f64,
    h: &HermitianOperator,
    dt: f64,
    steps: usize,
) -> Result<StationaryReport> {
    let psi = grid::normalized(psi_k);
    let hv = h.apply(psi.amplitudes());
    let dv = psi.grid().cell_volume();
    let res = (exec::sum(hv.len(), |i| C64::new((hv[i] - psi.amplitudes()[i] * alpha_k).norm_sqr(), 0.0)).re * dv).sqrt();
    if res > STATIONARY_TOLERANCE * h.norm_inf().max(1.0) {
        return Err(Error::NotStationary(res));
    }
    if (0.5 * alpha_k * dt).atan().abs() * 2.0 >= std::f64::consts::PI {
        return Err(Error::InvalidParameter("dt too large to unwrap the phase".into()));
    }
    let run = evolve(&psi, &HamiltonianSource::Static(h), Schedule::new(0.0, dt, steps))?;
    let mut phases = Vec::with_capacity(run.states.len());
    let mut modulus: f64 = 0.0;
    let mut unwrapped = 0.0;
    let mut last = 0.0;
    for (t, s) in run.times.iter().zip(&run.states) {
        let c = grid::inner_product(&psi, s)?;
        modulus = modulus.max((c.norm() - 1.0).abs());
        let arg = c.arg();
        let mut d = arg - last;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        unwrapped += d;
        last = arg;
        phases.push((*t, unwrapped));
    }
    let fitted = fitted_slope(&phases);
    let expected = cn_phase_rate(alpha_k, dt);
    Ok(StationaryReport {
        eigen_residual: res,
        modulus_deviation: modulus,
        fitted_rate: fitted,
        expected_rate: expected,
        rate_deviation: (fitted - expected).abs(),
        samples: phases.len(),
        phases,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformedStationaryReport {
    /// `max_t max_r | |Ψ(t, r)| − |Ψ(0, r)| |`
    pub max_modulus_change: f64,
    pub norm_drift: f64,
    pub samples: usize,
}

/// Evolves `exp(iqχ(t0))ψ_k` under the transformed Hamiltonian and checks
/// that its modulus stays put at every site.
pub fn transformed_stationary_check<F: LatticeField>(
    psi_k: &F,
    p: &Potentials,
    chi: &GaugeFunction,
    system: System,
    schedule: Schedule,
) -> Result<TransformedStationaryReport> {
    let psi = grid::normalized(psi_k);
    let moved = transform_potentials(p, chi)?;
    let start = transform_state(&psi, chi, schedule.t0, system.particle.q)?;
    let run = system.source(&moved)?.evolve(&start, schedule)?;
    let base: Vec<f64> = start.amplitudes().iter().map(|a| a.norm()).collect();
    let mut worst: f64 = 0.0;
    for s in &run.states {
        for (a, b) in s.amplitudes().iter().zip(&base) {
            worst = worst.max((a.norm() - b).abs());
        }
    }
    Ok(TransformedStationaryReport {
        max_modulus_change: worst,
        norm_drift: run.norm_drift,
        samples: run.states.len(),
    })
}

/// `H(A⁰', A') + q·diag(∂χ/∂t)` at time `t`.
pub fn separation_operator(p_transformed: &Potentials, chi: &GaugeFunction, system: System, t: f64) -> Result<HermitianOperator> {
    let h = system.hamiltonian(p_transformed, t)?;
    let q = system.particle.q;
    let dchi = chi.dt(t);
    let base: Vec<f64> = dchi.values().iter().map(|v| q * v.re).collect();
    let mut add = Vec::with_capacity(h.n());
    for _ in 0..system.components() {
        add.extend_from_slice(&base);
    }
    h.with_added_potential(&add)
}

/// Lowest `k` eigenvalues of [`separation_operator`]: the energies of the
/// static system, read off in the transformed gauge.
pub fn energy_via_separation(p_transformed: &Potentials, chi: &GaugeFunction, system: System, t: f64, k: usize) -> Result<Spectrum> {
    let op = separation_operator(p_transformed, chi, system, t)?;
    lowest_spectrum(&op, k)
}

/// Dense below the cap (then truncated), shift-invert Lanczos above it.
pub fn lowest_spectrum(op: &HermitianOperator, k: usize) -> Result<Spectrum> {
    if op.n() <= spectra::DENSE_CAP {
        Ok(spectra::dense_spectrum(op)?.truncated(k))
    } else {
        spectra::lowest_k(op, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, Grid, ScalarField};

    #[test]
    fn zero_hamiltonian_leaves_state_unchanged() {
        let g = Grid::line(16, 4.0, Boundary::Periodic).unwrap();
        let psi = grid::normalized(&ScalarField::from_fn(&g, |r| C64::new(r[0].cos() + 2.0, r[0].sin())));
        let zero = HermitianOperator::diagonal(&vec![0.0; 16]);
        let run = evolve(&psi, &HamiltonianSource::Static(&zero), Schedule::new(0.0, 0.1, 10)).unwrap();
        assert_eq!(run.states.last().unwrap(), &psi.with_amplitudes(psi.values().to_vec()));
        assert!(run.norm_drift < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Grid::line(16, 4.0, Boundary::Periodic).unwrap();
        let zero = HermitianOperator::diagonal(&vec![0.0; 16]);
        let psi = ScalarField::constant(&g, C64::new(1.0, 0.0));
        assert!(matches!(
            evolve(&psi, &HamiltonianSource::Static(&zero), Schedule::new(0.0, 0.1, 1)),
            Err(Error::NotNormalized(_))
        ));
        let psi = grid::normalized(&psi);
        assert!(evolve(&psi, &HamiltonianSource::Static(&zero), Schedule::new(0.0, -0.1, 1)).is_err());
    }

    #[test]
    fn phase_rate_closed_form() {
        assert!((cn_phase_rate(0.0, 0.1)).abs() < 1e-15);
        let small = cn_phase_rate(2.0, 1e-6);
        assert!((small + 2.0).abs() < 1e-9);
    }
}
