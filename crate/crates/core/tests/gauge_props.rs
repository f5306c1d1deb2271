use std::sync::Arc;

use gaugelab::gauge::{
    gauge_invariance_check, transform_potentials, transform_state, GaugeFunction, Potentials, SpatialGradient,
};
use gaugelab::grid::{self, Boundary, Grid, ScalarField};
use gaugelab::models::{FourierSum, FourierVector, LinearInTime, ScalarFn};
use gaugelab::C64;
use proptest::prelude::*;

const TIMES: [f64; 3] = [0.0, 0.37, 1.1];

fn torus() -> Grid {
    Grid::square(16, 6.0, Boundary::Periodic).unwrap()
}

fn potentials(g: &Grid, seed: u64) -> Potentials {
    let a0 = FourierSum::random(g, 3, 2, 1.0, 1.5, seed).unwrap();
    let ax = FourierSum::random(g, 3, 2, 0.5, 1.5, seed + 1).unwrap();
    let ay = FourierSum::random(g, 3, 2, 0.5, 1.5, seed + 2).unwrap();
    Potentials::vacuum(g)
        .with_scalar(Arc::new(a0))
        .with_vector(Arc::new(FourierVector([ax, ay])))
}

fn chi(g: &Grid, seed: u64) -> GaugeFunction {
    GaugeFunction::new(g, Arc::new(FourierSum::random(g, 4, 2, 0.8, 2.0, seed).unwrap())).unwrap()
}

fn state(g: &Grid, seed: u64) -> ScalarField {
    let s = FourierSum::random(g, 3, 2, 1.0, 0.0, seed).unwrap();
    let p = FourierSum::random(g, 3, 2, 2.0, 0.0, seed + 7).unwrap();
    grid::normalized(&ScalarField::from_fn(g, |r| C64::from_polar(s.value(r, 0.0).exp(), p.value(r, 0.0))))
}

fn potential_gap(p: &Potentials, q: &Potentials) -> f64 {
    TIMES
        .iter()
        .map(|&t| {
            let links = p
                .link_integrals(t)
                .iter()
                .zip(q.link_integrals(t))
                .map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
                .fold(0.0, f64::max);
            p.a0(t)
                .max_abs_diff(&q.a0(t))
                .unwrap()
                .max(p.a(t).max_abs_diff(&q.a(t)).unwrap())
                .max(links)
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transform_then_inverse_restores_potentials(seed in 0u64..10_000) {
        let g = torus();
        let p = potentials(&g, seed);
        let c = chi(&g, seed + 100);
        let back = transform_potentials(&transform_potentials(&p, &c).unwrap(), &c.negated()).unwrap();
        prop_assert_eq!(potential_gap(&p, &back), 0.0);
    }

    #[test]
    fn transform_state_is_unitary(seed in 0u64..10_000, t in 0.0..2.0f64, q in -2.0..2.0f64) {
        let g = torus();
        let (f, h) = (state(&g, seed), state(&g, seed + 50));
        let c = chi(&g, seed + 100);
        let before = grid::inner_product(&f, &h).unwrap();
        let after = grid::inner_product(
            &transform_state(&f, &c, t, q).unwrap(),
            &transform_state(&h, &c, t, q).unwrap(),
        )
        .unwrap();
        prop_assert!((before - after).norm() < 1e-14, "{before} vs {after}");
    }

    #[test]
    fn field_strengths_are_gauge_invariant(seed in 0u64..10_000) {
        let g = torus();
        let p = potentials(&g, seed);
        let c = chi(&g, seed + 100).with_spatial(SpatialGradient::Lattice);
        let r = gauge_invariance_check(&p, &c, &TIMES).unwrap();
        prop_assert!(r.max_e_deviation < 1e-10, "E moved by {}", r.max_e_deviation);
        prop_assert!(r.max_b_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn transforms_compose_additively(seed in 0u64..10_000, q in -2.0..2.0f64) {
        let g = torus();
        let p = potentials(&g, seed);
        let (c1, c2) = (chi(&g, seed + 100), chi(&g, seed + 200));
        let sum = c1.plus(&c2).unwrap();
        let stepwise = transform_potentials(&transform_potentials(&p, &c1).unwrap(), &c2).unwrap();
        let at_once = transform_potentials(&p, &sum).unwrap();
        prop_assert!(potential_gap(&stepwise, &at_once) < 1e-12);

        let psi = state(&g, seed + 300);
        for t in TIMES {
            let a = transform_state(&transform_state(&psi, &c1, t, q).unwrap(), &c2, t, q).unwrap();
            let b = transform_state(&psi, &sum, t, q).unwrap();
            prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-13);
        }
    }

    #[test]
    fn spatially_constant_gauge_only_shifts_the_scalar_potential(seed in 0u64..10_000, rate in -3.0..3.0f64) {
        let g = torus();
        let p = potentials(&g, seed);
        let c = GaugeFunction::new(&g, Arc::new(LinearInTime(rate))).unwrap();
        let moved = transform_potentials(&p, &c).unwrap();
        for t in TIMES {
            prop_assert_eq!(moved.a(t).max_abs_diff(&p.a(t)).unwrap(), 0.0);
            let shifted = p.a0(t).map(|v| v - rate);
            prop_assert!(moved.a0(t).max_abs_diff(&shifted).unwrap() < 1e-15);
        }
    }
}
