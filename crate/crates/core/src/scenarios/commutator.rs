use super::{observed_order, ClaimSpec, Outcome, Recorder, Scenario};
use crate::grid::{Boundary, Grid, ScalarField, VectorField};
use crate::io::FieldDump;
use crate::models::{FourierVector, LandauGauge, VectorFn};
use crate::operators::commutator_field_check;
use crate::params::ParamMap;
use crate::{Result, C64};

pub struct KineticMomentumCommutator;

const CLAIMS: &[ClaimSpec] = &[
    ClaimSpec {
        id: "linear-potential-exact",
        anchor: "kinetic-momentum-commutator",
        summary: "[Px, Py] psi = iq curl(A) psi to roundoff for Landau-gauge A",
    },
    ClaimSpec {
        id: "smooth-potential-order",
        anchor: "kinetic-momentum-commutator",
        summary: "for a smooth nonlinear A the commutator residual is second order in h",
    },
];

fn sampled(grid: &Grid, model: &dyn VectorFn) -> VectorField {
    VectorField::from_real_fn(grid, |r| model.value(r, 0.0))
}

/// Smooth periodic test state.
fn smooth_state(grid: &Grid) -> ScalarField {
    let (lx, ly) = (grid.period(0), grid.period(1));
    let tau = 2.0 * std::f64::consts::PI;
    ScalarField::from_fn(grid, |r| {
        let s = (tau * r[0] / lx).sin() + 0.5 * (tau * r[1] / ly).cos();
        C64::from_polar((0.8 * s).exp(), tau * (r[0] / lx + 2.0 * r[1] / ly))
    })
}

impl Scenario for KineticMomentumCommutator {
    fn name(&self) -> &'static str {
        "kinetic_momentum_commutator"
    }
    fn summary(&self) -> &'static str {
        "commutator of kinetic momentum components against the magnetic field"
    }
    fn claims(&self) -> &'static [ClaimSpec] {
        CLAIMS
    }
    fn keys(&self) -> &'static [&'static str] {
        &["n", "length", "b", "b0", "q", "exact_tol"]
    }

    fn run(&self, params: &ParamMap, seed: u64) -> Result<Outcome> {
        let n = params.usize_or("n", 32)?;
        let length = params.f64_or("length", 8.0)?;
        let b = params.f64_or("b", 1.0)?;
        let b0 = params.f64_or("b0", 0.8)?;
        let q = params.f64_or("q", 1.0)?;
        let exact_tol = params.f64_or("exact_tol", 1e-12)?;
        let mut rec = Recorder::new(self, params, seed);
        rec.env("grid", [n, n]);
        rec.env("length", length);
        rec.env("q", q);

        // A = (0, Bx): on ψ = ψ(y) the x stencil only meets the linear factor
        // x, which central differences reproduce exactly
        let g = Grid::square(n, length, Boundary::Dirichlet)?;
        let a = sampled(&g, &LandauGauge(b));
        let psi = ScalarField::from_fn(&g, |r| C64::from_polar((-0.5 * r[1] * r[1]).exp(), 0.7 * r[1]));
        let exact = commutator_field_check(&g, &a, q, &psi)?;
        rec.measure("linear", &exact);
        rec.at_most("linear-potential-exact", exact.residual_interior, exact_tol);

        let mut res = Vec::new();
        let mut spacing = Vec::new();
        for m in [n, 2 * n] {
            let g = Grid::square(m, length, Boundary::Periodic)?;
            let a = sampled(&g, &FourierVector::periodic_transverse(&g, b0)?);
            let r = commutator_field_check(&g, &a, q, &smooth_state(&g))?;
            res.push(r.residual_all);
            spacing.push(g.spacing()[0]);
        }
        rec.measure("smooth_residuals", &res);
        rec.within(
            "smooth-potential-order",
            observed_order(spacing[0], res[0], spacing[1], res[1]),
            1.8,
            2.2,
        );

        let mut out = rec.finish();
        out.fields.push(("landau_a".into(), FieldDump::vector(&a)));
        out.fields.push(("landau_psi".into(), FieldDump::scalar(&psi)));
        Ok(out)
    }
}
