//! Canned experiments, each a list of pass/fail claims.
//!
//! A scenario reads a flat [`ParamMap`] (unknown keys are rejected before
//! anything runs), builds its systems, and returns an [`Outcome`]: a
//! [`Report`] plus the spectra, fields, operators and time series it
//! produced. Reports are deterministic in `(params, seed)`; wall time goes to
//! a separate `timing.json` so that `report.json` is byte-stable.
//!
//! | scenario                      | what it checks |
//! |-------------------------------|----------------|
//! | `soft_coulomb_bound_states`   | bound states of the soft-Coulomb box against the oracle fixture |
//! | `yang_failure`                | `H − qA⁰` is the free operator; temporal gauge spectrum is free |
//! | `hamiltonian_noninvariance`   | spectrum shift under `χ = ct`, momentum expectation shift, energies by separation |
//! | `evolution_covariance`        | gauge covariance of Crank–Nicolson trajectories |
//! | `helmholtz_decomposition`     | spectral pure/physical split and its gauge behaviour |
//! | `chen_invariance`             | energy operator built from `A⁰_phys` |
//! | `landau_gauge_pair`           | symmetric vs Landau gauge spectra |
//! | `stationary_phase`            | phase and modulus of evolved eigenstates |
//! | `kinetic_momentum_commutator` | `[Pˣ, Pʸ]` against the magnetic field |

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::io::FieldDump;
use crate::operators::HermitianOperator;
use crate::params::ParamMap;
use crate::spectra::Spectrum;
use crate::{Error, Particle, Result};

mod bound_states;
mod chen;
mod commutator;
mod covariance;
mod helmholtz_split;
mod landau;
mod noninvariance;
mod stationary;
mod yang;

pub use bound_states::{SoftCoulombBoundStates, FIXTURE as BOUND_STATE_FIXTURE};
pub use chen::ChenInvariance;
pub use commutator::KineticMomentumCommutator;
pub use covariance::EvolutionCovariance;
pub use helmholtz_split::HelmholtzDecomposition;
pub use landau::LandauGaugePair;
pub use noninvariance::HamiltonianNoninvariance;
pub use stationary::StationaryPhase;
pub use yang::YangFailure;

pub const SCHEMA_VERSION: u32 = 1;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated for these parameters (see the claim's note).
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preamble: Option<String>,
    pub seed: u64,
    /// Parameters as given; defaults are listed under `environment`.
    pub params: ParamMap,
    pub environment: BTreeMap<String, serde_json::Value>,
    pub measurements: BTreeMap<String, serde_json::Value>,
    pub claims: Vec<Claim>,
    /// No claim failed.
    pub passed: bool,
}

impl Report {
    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn read(path: &Path) -> Result<Report> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Declared claim of a scenario.
#[derive(Clone, Copy, Debug)]
pub struct ClaimSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    pub summary: &'static str,
}

pub trait Scenario: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn claims(&self) -> &'static [ClaimSpec];
    /// Every parameter key the scenario reads.
    fn keys(&self) -> &'static [&'static str];
    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome>;
}

pub fn registry() -> Vec<&'static dyn Scenario> {
    vec![
        &SoftCoulombBoundStates,
        &YangFailure,
        &HamiltonianNoninvariance,
        &EvolutionCovariance,
        &HelmholtzDecomposition,
        &ChenInvariance,
        &LandauGaugePair,
        &StationaryPhase,
        &KineticMomentumCommutator,
    ]
}

pub fn find(name: &str) -> Result<&'static dyn Scenario> {
    registry().into_iter().find(|s| s.name() == name).ok_or_else(|| Error::Unknown {
        kind: "scenario",
        name: name.to_string(),
    })
}

/// Validates `params` against the scenario's keys, then runs it.
pub fn run(name: &str, params: &ParamMap, seed: u64) -> Result<Outcome> {
    let scenario = find(name)?;
    params.ensure_known(scenario.keys())?;
    let start = Instant::now();
    let mut outcome = scenario.run(params, seed)?;
    outcome.wall_seconds = start.elapsed().as_secs_f64();
    Ok(outcome)
}

/// Runs several scenarios concurrently; results come back in input order.
pub fn run_all(names: &[&str], params: &ParamMap, seed: u64) -> Vec<Result<Outcome>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = names.iter().map(|n| s.spawn(move || run(n, params, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    })
}

/// Which optional artifacts [`Outcome::write`] emits.
#[derive(Clone, Copy, Debug, Default)]
pub struct WriteOptions {
    pub fields: bool,
    /// `a_pure`, `a_phys` and `a0_phys` dumps.
    pub decomposition: bool,
    pub operators: bool,
}

pub struct Outcome {
    pub report: Report,
    pub spectra: Vec<(String, Spectrum)>,
    pub fields: Vec<(String, FieldDump)>,
    pub decomposition: Vec<(String, FieldDump)>,
    pub operators: Vec<(String, HermitianOperator)>,
    /// CSV text keyed by file stem.
    pub series: Vec<(String, String)>,
    pub wall_seconds: f64,
}

impl Outcome {
    fn new(report: Report) -> Self {
        Self {
            report,
            spectra: Vec::new(),
            fields: Vec::new(),
            decomposition: Vec::new(),
            operators: Vec::new(),
            series: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    /// Writes `report.json`, `timing.json`, spectra and series CSVs, and the
    /// optional artifacts into `dir`. Returns the files written.
    pub fn write(&self, dir: &Path, opts: WriteOptions) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut emit = |name: String, f: &mut dyn FnMut(&mut BufWriter<fs::File>) -> Result<()>| -> Result<()> {
            let path = dir.join(name);
            let mut w = BufWriter::new(fs::File::create(&path)?);
            f(&mut w)?;
            written.push(path);
            Ok(())
        };
        emit("report.json".into(), &mut |w| {
            serde_json::to_writer_pretty(&mut *w, &self.report)?;
            std::io::Write::write_all(w, b"\n")?;
            Ok(())
        })?;
        emit("timing.json".into(), &mut |w| {
            let t = serde_json::json!({ "scenario": self.report.scenario, "wall_seconds": self.wall_seconds });
            serde_json::to_writer_pretty(&mut *w, &t)?;
            Ok(())
        })?;
        for (name, s) in &self.spectra {
            emit(format!("spectrum_{name}.csv"), &mut |w| s.write_csv(w))?;
        }
        for (name, text) in &self.series {
            emit(format!("{name}.csv"), &mut |w| Ok(std::io::Write::write_all(w, text.as_bytes())?))?;
        }
        if opts.fields {
            for (name, f) in &self.fields {
                emit(format!("{name}.field"), &mut |w| f.write(w))?;
            }
        }
        if opts.decomposition {
            for (name, f) in &self.decomposition {
                emit(format!("{name}.field"), &mut |w| f.write(w))?;
            }
        }
        if opts.operators {
            for (name, op) in &self.operators {
                emit(format!("{name}.triplets"), &mut |w| op.write_triplets(w))?;
            }
        }
        Ok(written)
    }
}

/// Collects claim results against a scenario's declared claims.
pub(crate) struct Recorder {
    specs: &'static [ClaimSpec],
    report: Report,
}

impl Recorder {
    pub fn new(scenario: &dyn Scenario, params: &ParamMap, seed: u64) -> Self {
        Self {
            specs: scenario.claims(),
            report: Report {
                schema_version: SCHEMA_VERSION,
                scenario: scenario.name().to_string(),
                preamble: None,
                seed,
                params: params.clone(),
                environment: BTreeMap::new(),
                measurements: BTreeMap::new(),
                claims: Vec::new(),
                passed: false,
            },
        }
    }

    pub fn preamble(&mut self, text: &str) {
        self.report.preamble = Some(text.to_string());
    }

    pub fn env(&mut self, key: &str, value: impl Serialize) {
        self.report
            .environment
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    pub fn measure(&mut self, key: &str, value: impl Serialize) {
        self.report
            .measurements
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    fn spec(&self, id: &str) -> &'static ClaimSpec {
        self.specs
            .iter()
            .find(|s| s.id == id)
            .unwrap_or_else(|| panic!("claim '{id}' is not declared"))
    }

    fn push(&mut self, id: &str, measured: Option<f64>, lower: Option<f64>, upper: Option<f64>, note: Option<String>) {
        let spec = self.spec(id);
        let status = match measured {
            None => Status::Skipped,
            Some(v) => {
                let ok = v.is_finite() && lower.map_or(true, |l| v >= l) && upper.map_or(true, |u| v <= u);
                if ok {
                    Status::Pass
                } else {
                    Status::Fail
                }
            }
        };
        self.report.claims.retain(|c| c.id != id);
        self.report.claims.push(Claim {
            id: spec.id.to_string(),
            anchor: spec.anchor.to_string(),
            status,
            measured: measured.map(|v| if v.is_finite() { v } else { f64::MAX }),
            lower,
            upper,
            note,
        });
    }

    pub fn at_most(&mut self, id: &str, measured: f64, upper: f64) {
        self.push(id, Some(measured), None, Some(upper), None);
    }

    pub fn at_least(&mut self, id: &str, measured: f64, lower: f64) {
        self.push(id, Some(measured), Some(lower), None, None);
    }

    pub fn within(&mut self, id: &str, measured: f64, lower: f64, upper: f64) {
        self.push(id, Some(measured), Some(lower), Some(upper), None);
    }

    pub fn skip(&mut self, id: &str, note: &str) {
        self.push(id, None, None, None, Some(note.to_string()));
    }

    /// Orders claims as declared; undeclared-but-unrecorded claims are
    /// reported as skipped.
    pub fn finish(mut self) -> Outcome {
        for spec in self.specs {
            if self.report.claim(spec.id).is_none() {
                self.skip(spec.id, "not evaluated");
            }
        }
        let order = |id: &str| self.specs.iter().position(|s| s.id == id).unwrap_or(usize::MAX);
        let mut claims = std::mem::take(&mut self.report.claims);
        claims.sort_by_key(|c| order(&c.id));
        self.report.claims = claims;
        self.report.passed = self.report.claims.iter().all(|c| c.status != Status::Fail);
        Outcome::new(self.report)
    }
}

/// Reads `q` and `m`.
pub(crate) fn particle(p: &ParamMap) -> Result<Particle> {
    Particle::new(p.f64_or("q", 1.0)?, p.f64_or("m", 1.0)?)
}

/// Convergence order from errors at spacings `h1 > h2`.
pub fn observed_order(h1: f64, e1: f64, h2: f64, e2: f64) -> f64 {
    (e1 / e2).ln() / (h1 / h2).ln()
}

/// Order `p` of `E(h) = E₀ + c·hᵖ` from three resolutions, by bisection on
/// `(E₁ − E₂)/(E₂ − E₃) = (h₁ᵖ − h₂ᵖ)/(h₂ᵖ − h₃ᵖ)`.
pub fn richardson_order(h: [f64; 3], e: [f64; 3]) -> f64 {
    let target = (e[0] - e[1]) / (e[1] - e[2]);
    let ratio = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p));
    let (mut lo, mut hi) = (0.05, 10.0);
    if !target.is_finite() || target <= ratio(lo) || target >= ratio(hi) {
        return f64::NAN;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_declares_claims_and_unique_names() {
        let all = registry();
        let mut names: Vec<_> = all.iter().map(|s| s.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        for s in all {
            assert!(!s.claims().is_empty(), "{}", s.name());
            assert!(s.claims().iter().all(|c| !c.anchor.is_empty()));
        }
    }

    #[test]
    fn unknown_keys_are_rejected_before_running() {
        let p = ParamMap::new().with("nn", 3i64);
        assert!(matches!(run("yang_failure", &p, 1), Err(Error::Parse(_)) | Err(Error::InvalidParameter(_))));
        assert!(matches!(run("nope", &ParamMap::new(), 1), Err(Error::Unknown { .. })));
    }

    #[test]
    fn orders_recover_power_laws() {
        let e = |h: f64| 1.0 + 3.0 * h * h;
        assert!((observed_order(0.2, e(0.2) - 1.0, 0.1, e(0.1) - 1.0) - 2.0).abs() < 1e-12);
        let h = [0.3, 0.16, 0.07];
        let p = richardson_order(h, [e(h[0]), e(h[1]), e(h[2])]);
        assert!((p - 2.0).abs() < 1e-9);
    }
}
