use std::sync::Arc;

use super::{particle, ClaimSpec, Outcome, Recorder, Scenario};
use crate::evolution::{gauge_covariance_check, CovarianceReport, Schedule, System};
use crate::exec;
use crate::gauge::{GaugeFunction, Potentials};
use crate::grid::{self, Boundary, Grid, LatticeField, ScalarField, SpinorField};
use crate::io::FieldDump;
use crate::models::{ConstantVector, FourierSum, FourierVector};
use crate::params::ParamMap;
use crate::{Result, C64};

pub struct EvolutionCovariance;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "schrodinger-covariance",
        anchor: "wave-operator-gauge-covariance",
        summary: "||psi'(t) - exp(iq chi)psi(t)|| stays below tolerance (2D Schrodinger)",
    },
    ClaimSpec {
        id: "dirac-covariance",
        anchor: "wave-operator-gauge-covariance",
        summary: "||psi'(t) - exp(iq chi)psi(t)|| stays below tolerance (1+1 Dirac)",
    },
    ClaimSpec {
        id: "schrodinger-dt-order",
        anchor: "wave-operator-gauge-covariance",
        summary: "covariance deviation falls at second order in dt (Schrodinger)",
    },
    ClaimSpec {
        id: "dirac-dt-order",
        anchor: "wave-operator-gauge-covariance",
        summary: "covariance deviation falls at second order in dt (Dirac)",
    },
    ClaimSpec {
        id: "density-agreement",
        anchor: "probability-density-gauge-invariance",
        summary: "|psi'|^2 and |psi|^2 agree within the covariance tolerance",
    },
    ClaimSpec {
        id: "norm-conservation",
        anchor: "crank-nicolson-unitarity",
        summary: "norm drift of every propagation stays below 1e-10",
    },
];

/// `exp(−|r − c|²/(2σ²) + ik·r)` sampled and normalized.
pub(crate) fn packet(grid: &Grid, width: f64, k: [f64; 2]) -> ScalarField {
    let f = ScalarField::from_fn(grid, |r| {
        let e = -(r[0] * r[0] + r[1] * r[1]) / (2.0 * width * width);
        C64::from_polar(e.exp(), k[0] * r[0] + k[1] * r[1])
    });
    grid::normalized(&f)
}

struct Run {
    coarse: CovarianceReport,
    fine: CovarianceReport,
}

impl Run {
    fn order(&self) -> f64 {
        (self.coarse.max_deviation / self.fine.max_deviation).log2()
    }
}

fn study<F: LatticeField>(psi: &F, p: &Potentials, chi: &GaugeFunction, system: System, dt: f64, steps: usize) -> Result<Run> {
    let coarse = Schedule::new(0.0, dt, steps).sampled((steps / 10).max(1));
    let fine = Schedule::new(0.0, 0.5 * dt, 2 * steps).sampled((steps / 5).max(1));
    let (a, b) = exec::join(
        || gauge_covariance_check(psi, p, chi, system, coarse),
        || gauge_covariance_check(psi, p, chi, system, fine),
    );
    Ok(Run { coarse: a?, fine: b? })
}

impl Scenario for EvolutionCovariance {
    fn name(&self) -> &'static str {
        "evolution_covariance"
    }
    fn summary(&self) -> &'static str {
        "Crank-Nicolson trajectories map onto each other under a seeded time-dependent gauge"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &[
            "n2d",
            "length2d",
            "n1d",
            "length1d",
            "q",
            "m",
            "dt",
            "steps",
            "a0_amplitude",
            "b0",
            "a1d",
            "wilson",
            "packet_width",
            "chi_modes",
            "chi_max_mode",
            "chi_amplitude",
            "chi_max_omega",
            "tol",
        ]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let part = particle(params)?;
        let n2 = params.usize_or("n2d", 64)?;
        let l2 = params.f64_or("length2d", 10.0)?;
        let n1 = params.usize_or("n1d", 512)?;
        let l1 = params.f64_or("length1d", 20.0)?;
        let dt = params.f64_or("dt", 1e-3)?;
        let steps = params.usize_or("steps", 100)?;
        let a0_amp = params.f64_or("a0_amplitude", 0.5)?;
        let b0 = params.f64_or("b0", 0.5)?;
        let a1d = params.f64_or("a1d", 0.2)?;
        let wilson = params.f64_or("wilson", 1.0)?;
        let width = params.f64_or("packet_width", 1.0)?;
        let modes = params.usize_or("chi_modes", 4)?;
        let max_mode = params.usize_or("chi_max_mode", 2)? as i64;
        let chi_amp = params.f64_or("chi_amplitude", 0.5)?;
        let max_omega = params.f64_or("chi_max_omega", 2.0)?;
        let tol = params.f64_or("tol", 1e-6)?;
        let mut rec = Recorder::new(self, params, seed);
        rec.env("q", part.q);
        rec.env("m", part.m);
        rec.env("dt", dt);
        rec.env("steps", steps);
        rec.env("grid_2d", [n2, n2]);
        rec.env("grid_1d", n1);
        rec.env("chi_generator", "ChaCha8 seeded from the run seed (2D) and seed + 1 (1D)");

        // 2D Schrödinger on the torus
        let g2 = Grid::square(n2, l2, Boundary::Periodic)?;
        let p2 = Potentials::vacuum(&g2)
            .with_scalar(Arc::new(FourierSum::single(&g2, a0_amp, [1, 1], 0.0, 0.0)))
            .with_vector(Arc::new(FourierVector::periodic_transverse(&g2, b0)?));
        let chi2 = GaugeFunction::new(&g2, Arc::new(FourierSum::random(&g2, modes, max_mode, chi_amp, max_omega, seed)?))?;
        let psi2 = packet(&g2, width, [1.0, 0.5]);

        // 1+1 Dirac on the ring
        let g1 = Grid::line(n1, l1, Boundary::Periodic)?;
        let p1 = Potentials::vacuum(&g1)
            .with_scalar(Arc::new(FourierSum::single(&g1, a0_amp, [1, 0], 0.0, 0.0)))
            .with_vector(Arc::new(ConstantVector([a1d, 0.0])));
        let chi1 = GaugeFunction::new(
            &g1,
            Arc::new(FourierSum::random(&g1, modes, max_mode, chi_amp, max_omega, seed.wrapping_add(1))?),
        )?;
        let upper = packet(&g1, width, [1.0, 0.0]);
        let psi1 = SpinorField::new(&upper, &ScalarField::zeros(&g1))?;

        let (s, d) = exec::join(
            || study(&psi2, &p2, &chi2, System::schrodinger(part), dt, steps),
            || study(&psi1, &p1, &chi1, System::dirac(part, Some(wilson)), dt, steps),
        );
        let (s, d) = (s?, d?);
        rec.measure("schrodinger", [&s.coarse, &s.fine]);
        rec.measure("dirac", [&d.coarse, &d.fine]);
        rec.at_most("schrodinger-covariance", s.coarse.max_deviation, tol);
        rec.at_most("dirac-covariance", d.coarse.max_deviation, tol);
        rec.within("schrodinger-dt-order", s.order(), 1.8, 2.2);
        rec.within("dirac-dt-order", d.order(), 1.8, 2.2);
        let density = [&s.coarse, &s.fine, &d.coarse, &d.fine]
            .iter()
            .map(|r| r.max_density_deviation)
            .fold(0.0, f64::max);
        rec.at_most("density-agreement", density, tol);
        let drift = [&s.coarse, &s.fine, &d.coarse, &d.fine]
            .iter()
            .map(|r| r.norm_drift)
            .fold(0.0, f64::max);
        rec.at_most("norm-conservation", drift, 1e-10);

        let mut out = rec.finish();
        out.fields.push(("chi_2d_t0".into(), FieldDump::scalar(&chi2.sample(0.0))));
        out.fields.push(("chi_1d_t0".into(), FieldDump::scalar(&chi1.sample(0.0))));
        out.fields.push(("psi0_2d".into(), FieldDump::scalar(&psi2)));
        out.fields.push(("psi0_1d".into(), FieldDump::spinor(&psi1)));
        Ok(out)
    }
}
