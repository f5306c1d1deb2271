//! Lattice laboratory for gauge transformations in quantum mechanics.
//!
//! The crate builds minimally coupled Schrödinger and 1+1 dimensional Dirac
//! Hamiltonians on rectangular lattices, applies gauge transformations to
//! potentials and states, splits potentials into pure-gauge and physical
//! parts, and measures which candidate energy operators keep their spectra
//! under a change of gauge.
//!
//! Units are natural throughout: ħ = c = 1, and the particle's charge `q` and
//! mass `m` are run parameters.
//!
//! Module map:
//!
//! - [`grid`]: lattice geometry, fields and central-difference calculus
//! - [`models`]: closed-form potentials and gauge functions, plus the named registry
//! - [`gauge`]: potentials, gauge functions, field strengths and their checks
//! - [`helmholtz`]: spectral pure/physical split of the potentials
//! - [`operators`]: sparse Hermitian lattice operators
//! - [`spectra`]: dense and iterative eigensolvers, spectrum comparison
//! - [`evolution`]: Crank–Nicolson propagation and covariance checks
//! - [`scenarios`]: canned experiments producing JSON reports

pub mod error;
pub mod evolution;
pub mod exec;
pub mod fourier;
pub mod gauge;
pub mod grid;
pub mod helmholtz;
pub mod io;
pub mod models;
pub mod operators;
pub mod params;
pub mod scenarios;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Charge and mass of the simulated particle.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Particle {
    pub q: f64,
    pub m: f64,
}

impl Particle {
    pub fn new(q: f64, m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() || !q.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "particle needs finite q and m > 0 (got q = {q}, m = {m})"
            )));
        }
        Ok(Self { q, m })
    }
}

impl Default for Particle {
    fn default() -> Self {
        Self { q: 1.0, m: 1.0 }
    }
}
