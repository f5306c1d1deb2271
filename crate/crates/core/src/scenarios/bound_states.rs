use std::sync::Arc;

use serde::Deserialize;

use super::{particle, richardson_order, ClaimSpec, Outcome, Recorder, Scenario};
use crate::evolution::lowest_spectrum;
use crate::gauge::Potentials;
use crate::grid::{Boundary, Grid, ScalarField};
use crate::io::FieldDump;
use crate::models::SoftCoulomb;
use crate::operators::schrodinger_hamiltonian;
use crate::params::ParamMap;
use crate::spectra::Spectrum;
use crate::{Particle, Result};

/// Oracle eigenvalues, see `examples/oracle_fixtures.rs`.
pub const FIXTURE: &str = include_str!("../../fixtures/soft_coulomb.json");

pub(crate) const PREAMBLE: &str = "Continuum hydrogen levels are three dimensional and are not reproduced on a \
desk-scale lattice. The bound-state system here is the 1D soft-Coulomb analog A0(x) = -kappa/sqrt(x^2 + a^2) \
in a hard-wall box.";

#[derive(Deserialize)]
pub(crate) struct FixtureRun {
    pub n: usize,
    pub length: f64,
    pub kappa: f64,
    pub soft: f64,
    pub q: f64,
    pub m: f64,
    pub lowest: Vec<f64>,
}

#[derive(Deserialize)]
struct Fixture {
    runs: Vec<FixtureRun>,
}

pub(crate) fn fixture_runs() -> Vec<FixtureRun> {
    serde_json::from_str::<Fixture>(FIXTURE).expect("fixture parses").runs
}

/// Soft-Coulomb box shared by several scenarios.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SoftBox {
    pub n: usize,
    pub length: f64,
    pub kappa: f64,
    pub soft: f64,
    pub particle: Particle,
}

impl SoftBox {
    pub fn from_params(p: &ParamMap) -> Result<Self> {
        Ok(Self {
            n: p.usize_or("n", 1024)?,
            length: p.f64_or("length", 40.0)?,
            kappa: p.f64_or("kappa", 1.0)?,
            soft: p.f64_or("soft", 0.5)?,
            particle: particle(p)?,
        })
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    pub fn grid(&self, boundary: Boundary) -> Result<Grid> {
        Grid::line(self.n, self.length, boundary)
    }

    pub fn model(&self, grid: &Grid) -> Result<SoftCoulomb> {
        Ok(SoftCoulomb::new(self.kappa, self.soft)?.periodized(grid))
    }

    pub fn potentials(&self, boundary: Boundary) -> Result<Potentials> {
        let g = self.grid(boundary)?;
        Ok(Potentials::vacuum(&g).with_scalar(Arc::new(self.model(&g)?)))
    }

    pub fn fixture(&self) -> Option<Vec<f64>> {
        fixture_runs()
            .into_iter()
            .find(|r| {
                r.n == self.n
                    && r.length == self.length
                    && r.kappa == self.kappa
                    && r.soft == self.soft
                    && r.q == self.particle.q
                    && r.m == self.particle.m
            })
            .map(|r| r.lowest)
    }

    pub fn record_env(&self, rec: &mut Recorder) {
        rec.env("n", self.n);
        rec.env("length", self.length);
        rec.env("kappa", self.kappa);
        rec.env("soft", self.soft);
        rec.env("q", self.particle.q);
        rec.env("m", self.particle.m);
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.n as f64 + 1.0)
    }

    pub fn lowest(&self, k: usize) -> Result<Spectrum> {
        let p = self.potentials(Boundary::Dirichlet)?;
        lowest_spectrum(&schrodinger_hamiltonian(&p, 0.0, self.particle)?, k)
    }
}

pub struct SoftCoulombBoundStates;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "bound-state-count",
        anchor: "soft-coulomb-bound-levels",
        summary: "at least three negative eigenvalues",
    },
    ClaimSpec {
        id: "oracle-fixture",
        anchor: "soft-coulomb-bound-levels",
        summary: "lowest three eigenvalues match the committed oracle fixture",
    },
    ClaimSpec {
        id: "richardson-order",
        anchor: "soft-coulomb-bound-levels",
        summary: "ground energy converges at second order under halving of h",
    },
];

impl Scenario for SoftCoulombBoundStates {
    fn name(&self) -> &'static str {
        "soft_coulomb_bound_states"
    }
    fn summary(&self) -> &'static str {
        "bound states of the 1D soft-Coulomb box"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &["n", "length", "kappa", "soft", "q", "m", "levels", "fixture_tol", "order_check"]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let sys = SoftBox::from_params(params)?;
        let levels = params.usize_or("levels", 8)?.max(3);
        let tol = params.f64_or("fixture_tol", 1e-9)?;
        let mut rec = Recorder::new(self, params, seed);
        rec.preamble(PREAMBLE);
        sys.record_env(&mut rec);

        let spectrum = sys.lowest(levels)?;
        let bound = spectrum.count_below(0.0);
        rec.measure("lowest", &spectrum.eigenvalues);
        rec.measure("max_residual", spectrum.max_residual());
        rec.at_least("bound-state-count", bound as f64, 3.0);

        match sys.fixture() {
            Some(oracle) => {
                let dev = oracle
                    .iter()
                    .zip(&spectrum.eigenvalues)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                rec.measure("oracle", &oracle);
                rec.at_most("oracle-fixture", dev, tol);
            }
            None => rec.skip("oracle-fixture", "no fixture for these parameters"),
        }

        if params.bool_or("order_check", true)? && sys.n >= 64 {
            let coarse = sys.with_n(sys.n / 2);
            let fine = sys.with_n(sys.n * 2);
            let e = [
                coarse.lowest(1)?.eigenvalues[0],
                spectrum.eigenvalues[0],
                fine.lowest(1)?.eigenvalues[0],
            ];
            let h = [coarse.spacing(), sys.spacing(), fine.spacing()];
            let order = richardson_order(h, e);
            rec.measure("ground_energy_by_resolution", e);
            rec.within("richardson-order", order, 1.8, 2.2);
        } else {
            rec.skip("richardson-order", "disabled or grid too coarse");
        }

        let grid = sys.grid(Boundary::Dirichlet)?;
        let mut out = rec.finish();
        if let Some(v) = spectrum.eigenvectors.as_ref().and_then(|v| v.first()) {
            out.fields.push(("ground_state".into(), FieldDump::scalar(&ScalarField::new(&grid, v.clone())?)));
        }
        let p = sys.potentials(Boundary::Dirichlet)?;
        out.fields.push(("a0".into(), FieldDump::scalar(&p.a0(0.0))));
        out.operators.push(("hamiltonian".into(), schrodinger_hamiltonian(&p, 0.0, sys.particle)?));
        out.spectra.push(("hamiltonian".into(), spectrum));
        Ok(out)
    }
}
