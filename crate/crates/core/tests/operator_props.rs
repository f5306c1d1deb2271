use std::sync::Arc;

use gaugelab::gauge::{transform_potentials, GaugeFunction, Potentials};
use gaugelab::grid::{Boundary, Grid};
use gaugelab::models::{FourierSum, FourierVector, LinearInTime, SoftCoulomb, SymmetricGauge};
use gaugelab::operators::{
    gauge_phases, hamiltonian, yang_operator, BuildOptions, Coupling, HermitianOperator, Kind, HERMITICITY_TOLERANCE,
};
use gaugelab::Particle;
use proptest::prelude::*;

#[derive(Clone, Copy, Debug)]
struct Setup {
    kind: Kind,
    boundary: Boundary,
    n: usize,
    q: f64,
    seed: u64,
}

fn setup() -> impl Strategy<Value = Setup> {
    (
        prop_oneof![Just(Kind::Schrodinger), Just(Kind::Dirac)],
        prop_oneof![Just(Boundary::Periodic), Just(Boundary::Dirichlet)],
        8usize..=24,
        -2.0..2.0f64,
        0u64..10_000,
    )
        .prop_map(|(kind, boundary, n, q, seed)| Setup {
            kind,
            boundary,
            // at most 64 sites in 2D
            n: if kind == Kind::Schrodinger { 8 } else { n },
            q,
            seed,
        })
}

impl Setup {
    fn grid(&self) -> Grid {
        match self.kind {
            Kind::Schrodinger => Grid::square(self.n, 4.0, self.boundary).unwrap(),
            Kind::Dirac => Grid::line(self.n, 6.0, self.boundary).unwrap(),
        }
    }

    fn particle(&self) -> Particle {
        Particle::new(self.q, 1.3).unwrap()
    }

    fn components(&self) -> usize {
        if self.kind == Kind::Dirac {
            2
        } else {
            1
        }
    }

    fn opts(&self) -> BuildOptions {
        BuildOptions {
            coupling: Coupling::Peierls,
            wilson: (self.kind == Kind::Dirac && self.seed % 2 == 0).then_some(1.0),
        }
    }

    fn potentials(&self) -> Potentials {
        let g = self.grid();
        let a0 = FourierSum::random(&g, 3, 2, 1.0, 1.0, self.seed).unwrap();
        let a = FourierVector([
            FourierSum::random(&g, 2, 2, 0.6, 1.0, self.seed + 1).unwrap(),
            FourierSum::random(&g, 2, 2, 0.6, 1.0, self.seed + 2).unwrap(),
        ]);
        Potentials::vacuum(&g).with_scalar(Arc::new(a0)).with_vector(Arc::new(a))
    }

    fn static_chi(&self) -> GaugeFunction {
        let g = self.grid();
        GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 3, 2, 1.5, 0.0, self.seed + 3).unwrap())).unwrap()
    }

    fn h(&self, p: &Potentials, t: f64) -> HermitianOperator {
        hamiltonian(p, t, self.particle(), self.kind, self.opts()).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn builders_are_hermitian(s in setup(), t in 0.0..2.0f64) {
        let p = s.potentials();
        prop_assert!(s.h(&p, t).hermiticity_defect() <= HERMITICITY_TOLERANCE);
        let y = yang_operator(&p, t, s.particle(), s.kind, s.opts()).unwrap();
        prop_assert!(y.hermiticity_defect() <= HERMITICITY_TOLERANCE);
        if s.kind == Kind::Schrodinger {
            let opts = BuildOptions { coupling: Coupling::Symmetrized, wilson: None };
            let sym = hamiltonian(&p, t, s.particle(), s.kind, opts).unwrap();
            prop_assert!(sym.hermiticity_defect() <= HERMITICITY_TOLERANCE);
        }
    }

    #[test]
    fn static_gauge_transform_is_a_unitary_conjugation(s in setup(), t in 0.0..2.0f64) {
        let p = s.potentials();
        let chi = s.static_chi();
        let moved = s.h(&transform_potentials(&p, &chi).unwrap(), t);
        let conj = s.h(&p, t).conjugate_by_phases(&gauge_phases(&chi, t, s.q, s.components())).unwrap();
        prop_assert!(moved.max_entry_diff(&conj).unwrap() <= 1e-12);
    }

    #[test]
    fn yang_operator_is_covariant_under_static_gauges(s in setup(), t in 0.0..2.0f64) {
        let p = s.potentials();
        let chi = s.static_chi();
        let y = yang_operator(&p, t, s.particle(), s.kind, s.opts()).unwrap();
        let moved = yang_operator(&transform_potentials(&p, &chi).unwrap(), t, s.particle(), s.kind, s.opts()).unwrap();
        let conj = y.conjugate_by_phases(&gauge_phases(&chi, t, s.q, s.components())).unwrap();
        prop_assert!(moved.max_entry_diff(&conj).unwrap() <= 1e-12);
    }

    #[test]
    fn uniform_time_gauge_shifts_by_a_multiple_of_identity(s in setup(), rate in -3.0..3.0f64, t in 0.0..2.0f64) {
        let p = s.potentials();
        let chi = GaugeFunction::new(&s.grid(), Arc::new(LinearInTime(rate))).unwrap();
        let moved = s.h(&transform_potentials(&p, &chi).unwrap(), t);
        let expected = s.h(&p, t).shifted(-s.q * rate);
        prop_assert!(moved.max_entry_diff(&expected).unwrap() <= 1e-12);
    }

    #[test]
    fn triplet_export_round_trips(s in setup()) {
        let h = s.h(&s.potentials(), 0.3);
        let mut buf = Vec::new();
        h.write_triplets(&mut buf).unwrap();
        let back = HermitianOperator::read_triplets(buf.as_slice()).unwrap();
        prop_assert_eq!(h.max_entry_diff(&back).unwrap(), 0.0);
    }
}

#[test]
fn yang_operator_of_a_static_potential_is_the_free_operator() {
    let g = Grid::square(12, 8.0, Boundary::Dirichlet).unwrap();
    let particle = Particle::new(1.0, 1.0).unwrap();
    let p = Potentials::vacuum(&g)
        .with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap()))
        .with_vector(Arc::new(SymmetricGauge(0.7)));
    let free_with_a = Potentials::vacuum(&g).with_vector(Arc::new(SymmetricGauge(0.7)));
    let opts = BuildOptions::default();
    let y = yang_operator(&p, 0.0, particle, Kind::Schrodinger, opts).unwrap();
    let h0 = hamiltonian(&free_with_a, 0.0, particle, Kind::Schrodinger, opts).unwrap();
    assert!(y.max_entry_diff(&h0).unwrap() <= 1e-14);
}
