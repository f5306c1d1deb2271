use std::sync::Arc;

use super::bound_states::{SoftBox, PREAMBLE};
use super::{ClaimSpec, Outcome, Recorder, Scenario};
use crate::evolution::lowest_spectrum;
use crate::gauge::{transform_potentials, GaugeFunction};
use crate::grid::Boundary;
use crate::models::TimeRamp;
use crate::operators::{free_operator, hamiltonian, yang_operator, BuildOptions, Kind};
use crate::params::ParamMap;
use crate::spectra::{dense_spectrum, spectrum_compare};
use crate::Result;

pub struct YangFailure;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "yang-free-identity",
        anchor: "yang-operator-reduces-to-free-kinetic",
        summary: "H - qA0 equals the free kinetic matrix entrywise",
    },
    ClaimSpec {
        id: "hamiltonian-bound-count",
        anchor: "soft-coulomb-bound-levels",
        summary: "H has at least three negative eigenvalues",
    },
    ClaimSpec {
        id: "yang-bound-count",
        anchor: "yang-operator-reduces-to-free-kinetic",
        summary: "H - qA0 has no negative eigenvalue",
    },
    ClaimSpec {
        id: "temporal-gauge-free-spectrum",
        anchor: "temporal-gauge-unitary-map",
        summary: "in the temporal gauge the spectrum of H - qA0 is the free spectrum at every sampled time",
    },
];

impl Scenario for YangFailure {
    fn name(&self) -> &'static str {
        "yang_failure"
    }
    fn summary(&self) -> &'static str {
        "H - qA0 loses the bound states of an electrostatic system"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &["n", "length", "kappa", "soft", "q", "m", "periodic_n", "t_max", "samples", "identity_tol", "spectrum_tol"]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let sys = SoftBox::from_params(params)?;
        let periodic_n = params.usize_or("periodic_n", sys.n)?;
        let t_max = params.f64_or("t_max", 1.0)?;
        let samples = params.usize_or("samples", 3)?.max(1);
        let identity_tol = params.f64_or("identity_tol", 1e-14)?;
        let spectrum_tol = params.f64_or("spectrum_tol", 1e-9)?;
        let opts = BuildOptions::default();
        let kind = Kind::Schrodinger;
        let mut rec = Recorder::new(self, params, seed);
        rec.preamble(PREAMBLE);
        sys.record_env(&mut rec);
        rec.env("periodic_n", periodic_n);

        let p = sys.potentials(Boundary::Dirichlet)?;
        let h = hamiltonian(&p, 0.0, sys.particle, kind, opts)?;
        let y = yang_operator(&p, 0.0, sys.particle, kind, opts)?;
        let free = free_operator(p.grid(), sys.particle, kind, opts)?;
        rec.at_most("yang-free-identity", y.max_entry_diff(&free)?, identity_tol);

        let h_low = lowest_spectrum(&h, 16)?;
        let y_low = lowest_spectrum(&y, 16)?;
        rec.measure("hamiltonian_lowest", &h_low.eigenvalues[..3]);
        rec.measure("yang_lowest", &y_low.eigenvalues[..3]);
        rec.at_least("hamiltonian-bound-count", h_low.count_below(0.0) as f64, 3.0);
        rec.at_most("yang-bound-count", y_low.count_below(0.0) as f64, 0.0);

        // periodic twin: χ = A⁰t removes A⁰ and leaves A = t∇A⁰
        let twin = sys.with_n(periodic_n);
        let pp = twin.potentials(Boundary::Periodic)?;
        let grid = pp.grid().clone();
        let chi = GaugeFunction::new(&grid, Arc::new(TimeRamp(Arc::new(twin.model(&grid)?))))?;
        let temporal = transform_potentials(&pp, &chi)?;
        let free_periodic = dense_spectrum(&free_operator(&grid, sys.particle, kind, opts)?)?;
        let mut worst: f64 = 0.0;
        let mut per_time = Vec::new();
        let mut spectra = Vec::new();
        for i in 0..samples {
            let t = if samples == 1 { 0.0 } else { t_max * i as f64 / (samples - 1) as f64 };
            let yt = yang_operator(&temporal, t, sys.particle, kind, opts)?;
            let s = dense_spectrum(&yt)?;
            let c = spectrum_compare(&s, &free_periodic, s.len(), spectrum_tol)?;
            rec.measure(&format!("temporal_a0_max_at_t{i}"), temporal.a0(t).max_abs());
            per_time.push((t, c.max_deviation));
            worst = worst.max(c.max_deviation);
            spectra.push((format!("temporal_yang_t{i}"), s));
        }
        rec.measure("temporal_deviation_by_time", &per_time);
        rec.at_most("temporal-gauge-free-spectrum", worst, spectrum_tol);

        let mut out = rec.finish();
        out.spectra.push(("hamiltonian".into(), h_low));
        out.spectra.push(("yang".into(), y_low));
        out.spectra.push(("free_periodic".into(), free_periodic));
        out.spectra.extend(spectra);
        out.operators.push(("hamiltonian".into(), h));
        out.operators.push(("yang".into(), y));
        out.operators.push(("free".into(), free));
        Ok(out)
    }
}
