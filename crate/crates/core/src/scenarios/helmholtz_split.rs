use std::sync::Arc;

use super::{ClaimSpec, Outcome, Recorder, Scenario};
use crate::gauge::{transform_potentials, GaugeFunction, Potentials};
use crate::grid::{Boundary, Grid};
use crate::helmholtz::{decompose, Decomposition};
use crate::io::FieldDump;
use crate::models::{FourierMode, FourierSum, FourierVector};
use crate::params::ParamMap;
use crate::Result;

pub struct HelmholtzDecomposition;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "reconstruction",
        anchor: "pure-physical-split",
        summary: "A_pure + A_phys reproduces A",
    },
    ClaimSpec {
        id: "phys-divergence-free",
        anchor: "pure-physical-split",
        summary: "spectral divergence of A_phys vanishes",
    },
    ClaimSpec {
        id: "pure-curl-free",
        anchor: "pure-physical-split",
        summary: "spectral curl of A_pure vanishes",
    },
    ClaimSpec {
        id: "physical-part-invariance",
        anchor: "split-transformation-law",
        summary: "A_phys and A0_phys are unchanged by a periodic gauge transformation",
    },
    ClaimSpec {
        id: "pure-part-transformation",
        anchor: "split-transformation-law",
        summary: "A_pure shifts by grad chi and A0_pure by -dchi/dt",
    },
];

/// `periodic_transverse(b0)` plus a uniform part `mean`.
pub(crate) fn transverse_with_mean(grid: &Grid, b0: f64, mean: [f64; 2]) -> Result<FourierVector> {
    let mut v = FourierVector::periodic_transverse(grid, b0)?;
    for (c, m) in v.0.iter_mut().zip(mean) {
        c.modes.push(FourierMode {
            amplitude: m,
            k: [0.0; 2],
            omega: 0.0,
            phase: 0.0,
        });
    }
    Ok(v)
}

fn differences(a: &Decomposition, b: &Decomposition, chi: &GaugeFunction, t: f64) -> Result<(f64, f64)> {
    let phys = a.a_phys.max_abs_diff(&b.a_phys)?.max(a.a0_phys.max_abs_diff(&b.a0_phys)?);
    let moved = a.a_pure.add(&chi.grad(t))?;
    let moved0 = a.a0_pure.sub(&chi.dt(t))?;
    let pure = b.a_pure.max_abs_diff(&moved)?.max(b.a0_pure.max_abs_diff(&moved0)?);
    Ok((phys, pure))
}

impl Scenario for HelmholtzDecomposition {
    fn name(&self) -> &'static str {
        "helmholtz_decomposition"
    }
    fn summary(&self) -> &'static str {
        "spectral pure/physical split of the potentials on the torus"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &[
            "n",
            "length",
            "b0",
            "mean_ax",
            "mean_ay",
            "a0_amplitude",
            "chi_modes",
            "chi_max_mode",
            "chi_amplitude",
            "chi_max_omega",
            "t_max",
            "samples",
            "tol",
            "reconstruction_tol",
        ]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let n = params.usize_or("n", 32)?;
        let length = params.f64_or("length", 8.0)?;
        let b0 = params.f64_or("b0", 0.8)?;
        let mean = [params.f64_or("mean_ax", 0.3)?, params.f64_or("mean_ay", -0.2)?];
        let a0_amp = params.f64_or("a0_amplitude", 0.5)?;
        let modes = params.usize_or("chi_modes", 5)?;
        let max_mode = params.usize_or("chi_max_mode", 3)? as i64;
        let chi_amp = params.f64_or("chi_amplitude", 0.7)?;
        let max_omega = params.f64_or("chi_max_omega", 2.0)?;
        let t_max = params.f64_or("t_max", 1.0)?;
        let samples = params.usize_or("samples", 3)?.max(1);
        let tol = params.f64_or("tol", 1e-10)?;
        let rtol = params.f64_or("reconstruction_tol", 1e-12)?;
        let mut rec = Recorder::new(self, params, seed);
        rec.env("grid", [n, n]);
        rec.env("length", length);
        rec.env("chi_generator", "ChaCha8 seeded from the run seed and seed + 1");

        let g = Grid::square(n, length, Boundary::Periodic)?;
        let base = Potentials::vacuum(&g)
            .with_scalar(Arc::new(FourierSum::single(&g, a0_amp, [1, 2], 0.0, 0.3)))
            .with_vector(Arc::new(transverse_with_mean(&g, b0, mean)?));
        // a first gauge layer puts a longitudinal, time-dependent part into A
        let chi1 = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, modes, max_mode, chi_amp, max_omega, seed)?))?;
        let p = transform_potentials(&base, &chi1)?;
        let chi2 = GaugeFunction::new(
            &g,
            Arc::new(FourierSum::random(&g, modes, max_mode, chi_amp, max_omega, seed.wrapping_add(1))?),
        )?;
        let p2 = transform_potentials(&p, &chi2)?;

        let (mut recon, mut div, mut curl, mut phys, mut pure) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut first = None;
        for i in 0..samples {
            let t = if samples == 1 { 0.0 } else { t_max * i as f64 / (samples - 1) as f64 };
            let d1 = decompose(&p, t)?;
            let d2 = decompose(&p2, t)?;
            for r in [&d1.residuals, &d2.residuals] {
                recon = recon.max(r.reconstruction);
                div = div.max(r.div_phys);
                curl = curl.max(r.curl_pure);
            }
            let (ph, pu) = differences(&d1, &d2, &chi2, t)?;
            phys = phys.max(ph);
            pure = pure.max(pu);
            if i == 0 {
                rec.measure("a_phys_mean", [d1.a_phys.component(0).mean().re, d1.a_phys.component(1).mean().re]);
                first = Some(d1);
            }
        }
        rec.measure("a_mean", mean);
        rec.at_most("reconstruction", recon, rtol);
        rec.at_most("phys-divergence-free", div, tol);
        rec.at_most("pure-curl-free", curl, tol);
        rec.at_most("physical-part-invariance", phys, tol);
        rec.at_most("pure-part-transformation", pure, tol);

        let mut out = rec.finish();
        if let Some(d) = first {
            out.decomposition.push(("a_pure".into(), FieldDump::vector(&d.a_pure)));
            out.decomposition.push(("a_phys".into(), FieldDump::vector(&d.a_phys)));
            out.decomposition.push(("a0_phys".into(), FieldDump::scalar(&d.a0_phys)));
        }
        out.fields.push(("a".into(), FieldDump::vector(&p.a(0.0))));
        out.fields.push(("a0".into(), FieldDump::scalar(&p.a0(0.0))));
        Ok(out)
    }
}
