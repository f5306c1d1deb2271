use std::sync::Arc;

use super::{particle, ClaimSpec, Outcome, Recorder, Scenario};
use crate::gauge::{transform_potentials, GaugeFunction, Potentials};
use crate::grid::{Boundary, Grid};
use crate::models::{Bilinear, LandauGauge, SymmetricGauge};
use crate::operators::{gauge_phases, hamiltonian, BuildOptions, Kind};
use crate::params::ParamMap;
use crate::spectra::{dense_spectrum, spectrum_compare};
use crate::Result;

pub struct LandauGaugePair;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "static-gauge-spectral-invariance",
        anchor: "static-gauge-unitary-equivalence",
        summary: "symmetric and Landau gauge Hamiltonians share their lowest eigenvalues",
    },
    ClaimSpec {
        id: "unitary-equivalence",
        anchor: "static-gauge-unitary-equivalence",
        summary: "H_Landau = U H_symmetric U* entrywise with U = exp(iq chi), chi = Bxy/2",
    },
    ClaimSpec {
        id: "landau-level-clustering",
        anchor: "static-gauge-unitary-equivalence",
        summary: "near-degenerate clusters of the low spectrum are identical in both gauges",
    },
];

impl Scenario for LandauGaugePair {
    fn name(&self) -> &'static str {
        "landau_gauge_pair"
    }
    fn summary(&self) -> &'static str {
        "uniform magnetic field in a box, symmetric vs Landau gauge"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &["n", "length", "b", "q", "m", "compare", "cluster_count", "cluster_tol", "tol"]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let part = particle(params)?;
        let n = params.usize_or("n", 48)?;
        let length = params.f64_or("length", 10.0)?;
        let b = params.f64_or("b", 1.0)?;
        let compare = params.usize_or("compare", 6)?;
        let cluster_count = params.usize_or("cluster_count", 40)?;
        let cluster_tol = params.f64_or("cluster_tol", 1e-3)?;
        let tol = params.f64_or("tol", 1e-9)?;
        let opts = BuildOptions::default();
        let mut rec = Recorder::new(self, params, seed);
        rec.env("grid", [n, n]);
        rec.env("length", length);
        rec.env("b", b);
        rec.env("q", part.q);
        rec.env("m", part.m);
        rec.env("cyclotron_energy", part.q.abs() * b / part.m);

        let g = Grid::square(n, length, Boundary::Dirichlet)?;
        let symmetric = Potentials::vacuum(&g).with_vector(Arc::new(SymmetricGauge(b)));
        let landau = Potentials::vacuum(&g).with_vector(Arc::new(LandauGauge(b)));
        let hs = hamiltonian(&symmetric, 0.0, part, Kind::Schrodinger, opts)?;
        let hl = hamiltonian(&landau, 0.0, part, Kind::Schrodinger, opts)?;

        // A_Landau = A_sym + ∇(Bxy/2)
        let chi = GaugeFunction::new(&g, Arc::new(Bilinear(0.5 * b)))?;
        let conj = hs.conjugate_by_phases(&gauge_phases(&chi, 0.0, part.q, 1))?;
        let via_layer = hamiltonian(&transform_potentials(&symmetric, &chi)?, 0.0, part, Kind::Schrodinger, opts)?;
        rec.measure("layer_vs_conjugation", via_layer.max_entry_diff(&conj)?);
        rec.at_most("unitary-equivalence", hl.max_entry_diff(&conj)?, 1e-12);

        let (ss, sl) = crate::exec::join(|| dense_spectrum(&hs), || dense_spectrum(&hl));
        let (ss, sl) = (ss?, sl?);
        let c = spectrum_compare(&ss, &sl, compare, tol)?;
        rec.measure("symmetric_lowest", &ss.eigenvalues[..compare]);
        rec.measure("landau_lowest", &sl.eigenvalues[..compare]);
        rec.at_most("static-gauge-spectral-invariance", c.max_deviation, tol);

        let cs = ss.truncated(cluster_count).cluster_sizes(cluster_tol);
        let cl = sl.truncated(cluster_count).cluster_sizes(cluster_tol);
        let mismatch = if cs.len() != cl.len() {
            cs.len().abs_diff(cl.len()).max(1)
        } else {
            cs.iter().zip(&cl).filter(|(a, b)| a != b).count()
        };
        rec.measure("clusters_symmetric", &cs);
        rec.measure("clusters_landau", &cl);
        rec.at_most("landau-level-clustering", mismatch as f64, 0.0);

        let mut out = rec.finish();
        out.spectra.push(("symmetric".into(), ss.truncated(cluster_count.max(compare))));
        out.spectra.push(("landau".into(), sl.truncated(cluster_count.max(compare))));
        out.operators.push(("symmetric".into(), hs));
        out.operators.push(("landau".into(), hl));
        Ok(out)
    }
}
