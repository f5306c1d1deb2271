use std::sync::Arc;

use super::{particle, ClaimSpec, Outcome, Recorder, Scenario};
use crate::gauge::{transform_potentials, GaugeFunction, Potentials};
use crate::grid::{Boundary, Grid, ScalarField};
use crate::helmholtz::{decompose, phys_scalar_from_rho};
use crate::io::FieldDump;
use crate::models::{scalar_from_params, FourierSum, FourierVector};
use crate::operators::{chen_energy_operator, hamiltonian, BuildOptions, Kind};
use crate::params::ParamMap;
use crate::spectra::{dense_spectrum, spectrum_compare};
use crate::Result;

pub struct ChenInvariance;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "helmholtz-residuals",
        anchor: "pure-physical-split",
        summary: "divergence of A_phys and curl of A_pure vanish spectrally",
    },
    ClaimSpec {
        id: "chen-spectrum-invariance",
        anchor: "physical-energy-operator",
        summary: "spectrum of H(A0_phys, A) is unchanged by a time-dependent periodic gauge transformation",
    },
    ClaimSpec {
        id: "hamiltonian-spectrum-moves",
        anchor: "hamiltonian-spectrum-gauge-dependent",
        summary: "the spectrum of H(A0, A) itself does change under the same transformation",
    },
    ClaimSpec {
        id: "chen-static-consistency",
        anchor: "physical-energy-operator-static-limit",
        summary: "for static fields with A0 from the Poisson equation H(A0_phys, A) equals H(A0, A)",
    },
];

impl Scenario for ChenInvariance {
    fn name(&self) -> &'static str {
        "chen_invariance"
    }
    fn summary(&self) -> &'static str {
        "energy operator built from the physical scalar potential"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &[
            "n",
            "length",
            "q",
            "m",
            "rho_amplitude",
            "rho_width",
            "rho_separation",
            "b0",
            "chi_modes",
            "chi_max_mode",
            "chi_amplitude",
            "chi_max_omega",
            "t_max",
            "samples",
            "tol",
            "residual_tol",
        ]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let part = particle(params)?;
        let n = params.usize_or("n", 32)?;
        let length = params.f64_or("length", 8.0)?;
        let b0 = params.f64_or("b0", 0.8)?;
        let modes = params.usize_or("chi_modes", 4)?;
        let max_mode = params.usize_or("chi_max_mode", 2)? as i64;
        let chi_amp = params.f64_or("chi_amplitude", 0.7)?;
        let max_omega = params.f64_or("chi_max_omega", 2.0)?;
        let t_max = params.f64_or("t_max", 1.0)?;
        let samples = params.usize_or("samples", 3)?.max(1);
        let tol = params.f64_or("tol", 1e-9)?;
        let residual_tol = params.f64_or("residual_tol", 1e-10)?;
        let kind = Kind::Schrodinger;
        let opts = BuildOptions::default();
        let mut rec = Recorder::new(self, params, seed);
        rec.env("grid", [n, n]);
        rec.env("length", length);
        rec.env("q", part.q);
        rec.env("m", part.m);
        rec.env("chi_generator", "ChaCha8 seeded from the run seed");

        let g = Grid::square(n, length, Boundary::Periodic)?;
        let blob = ParamMap::new()
            .with("amplitude", params.f64_or("rho_amplitude", 1.0)?)
            .with("width", params.f64_or("rho_width", 0.6)?)
            .with("separation", params.f64_or("rho_separation", 2.0)?);
        let rho_model = scalar_from_params("gaussian_pair", &blob, &g, seed)?;
        let rho = ScalarField::from_real_fn(&g, |r| rho_model.value(r, 0.0));
        let a0 = phys_scalar_from_rho(&rho)?;
        let a = Arc::new(FourierVector::periodic_transverse(&g, b0)?);
        let by_potentials = Potentials::vacuum(&g).with_scalar_field(a0.clone())?.with_vector(a);
        let by_rho = by_potentials.clone().with_rho(rho.clone())?;
        rec.measure("rho_mean", rho.mean().norm());

        let split = decompose(&by_potentials, 0.0)?;
        rec.measure("residuals", split.residuals);
        rec.at_most(
            "helmholtz-residuals",
            split.residuals.div_phys.max(split.residuals.curl_pure),
            residual_tol,
        );

        let chen_static = chen_energy_operator(&by_potentials, 0.0, part, kind, opts)?;
        let h_static = hamiltonian(&by_potentials, 0.0, part, kind, opts)?;
        let consistency = chen_static
            .max_entry_diff(&h_static)?
            .max(chen_energy_operator(&by_rho, 0.0, part, kind, opts)?.max_entry_diff(&h_static)?);
        rec.at_most("chen-static-consistency", consistency, tol);

        let reference = dense_spectrum(&chen_static)?;
        let chi = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, modes, max_mode, chi_amp, max_omega, seed)?))?;
        let moved_pot = transform_potentials(&by_potentials, &chi)?;
        let moved_rho = transform_potentials(&by_rho, &chi)?;
        let (mut chen_dev, mut h_dev) = (0.0f64, f64::INFINITY);
        let mut per_time = Vec::new();
        let mut last = None;
        for i in 0..samples {
            let t = if samples == 1 { 0.0 } else { t_max * i as f64 / (samples - 1) as f64 };
            let mut row = vec![t];
            for p in [&moved_pot, &moved_rho] {
                let s = dense_spectrum(&chen_energy_operator(p, t, part, kind, opts)?)?;
                let d = spectrum_compare(&s, &reference, s.len(), tol)?.max_deviation;
                chen_dev = chen_dev.max(d);
                row.push(d);
                last = Some(s);
            }
            // the time-dependent gauge shifts A0 by -dchi/dt, which H sees
            let hs = dense_spectrum(&hamiltonian(&moved_pot, t, part, kind, opts)?)?;
            let d = spectrum_compare(&hs, &reference, hs.len(), tol)?.max_deviation;
            h_dev = h_dev.min(d);
            row.push(d);
            per_time.push(row);
        }
        rec.measure("deviation_by_time[t, potentials route, rho route, H]", &per_time);
        rec.at_most("chen-spectrum-invariance", chen_dev, tol);
        rec.at_least("hamiltonian-spectrum-moves", h_dev, 1e3 * tol);

        let moved_split = decompose(&moved_pot, 0.0)?;
        let mut out = rec.finish();
        out.decomposition.push(("a_pure".into(), FieldDump::vector(&moved_split.a_pure)));
        out.decomposition.push(("a_phys".into(), FieldDump::vector(&moved_split.a_phys)));
        out.decomposition.push(("a0_phys".into(), FieldDump::scalar(&moved_split.a0_phys)));
        out.fields.push(("rho".into(), FieldDump::scalar(&rho)));
        out.fields.push(("a0".into(), FieldDump::scalar(&a0)));
        out.spectra.push(("chen_static".into(), reference));
        if let Some(s) = last {
            out.spectra.push(("chen_transformed".into(), s));
        }
        out.operators.push(("chen_static".into(), chen_static));
        Ok(out)
    }
}
