use std::sync::Arc;

use gaugelab::evolution::{energy_via_separation, gauge_covariance_check, lowest_spectrum, Schedule, System};
use gaugelab::gauge::{transform_potentials, GaugeFunction, Potentials};
use gaugelab::grid::{self, Boundary, Grid, ScalarField, SpinorField};
use gaugelab::models::{ConstantVector, FourierSum, LinearInTime, SoftCoulomb};
use gaugelab::{Particle, C64};
use proptest::prelude::*;

fn line() -> Grid {
    Grid::line(64, 12.0, Boundary::Periodic).unwrap()
}

fn packet(g: &Grid, k: f64) -> ScalarField {
    grid::normalized(&ScalarField::from_fn(g, |r| C64::from_polar((-r[0] * r[0]).exp(), k * r[0])))
}

fn driven(g: &Grid, seed: u64) -> Potentials {
    let p = Potentials::vacuum(g)
        .with_scalar(Arc::new(FourierSum::random(g, 3, 3, 1.0, 2.0, seed).unwrap()))
        .with_vector(Arc::new(ConstantVector([0.3, 0.0])));
    let chi = GaugeFunction::new(g, Arc::new(FourierSum::random(g, 3, 3, 0.7, 3.0, seed + 1).unwrap())).unwrap();
    transform_potentials(&p, &chi).unwrap()
}

fn particle() -> Particle {
    Particle::new(1.0, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn crank_nicolson_conserves_the_norm(seed in 0u64..10_000, k in -2.0..2.0f64) {
        let g = line();
        let p = driven(&g, seed);
        let schedule = Schedule::new(0.0, 0.01, 1000).sampled(100);
        let psi = packet(&g, k);
        let s = System::schrodinger(particle()).source(&p).unwrap().evolve(&psi, schedule).unwrap();
        prop_assert!(s.norm_drift <= 1e-10, "schrodinger drift {}", s.norm_drift);

        let spinor = grid::normalized(&SpinorField::new(&psi, &packet(&g, -k)).unwrap());
        let d = System::dirac(particle(), Some(1.0)).source(&p).unwrap().evolve(&spinor, schedule).unwrap();
        prop_assert!(d.norm_drift <= 1e-10, "dirac drift {}", d.norm_drift);
    }

    // a uniform χ = ct shifts H by −qc; Crank–Nicolson maps that shift to
    // the phase 2·arctan(qc·dt/2) per step instead of qc·dt, an O(dt²)
    // global error
    #[test]
    fn uniform_gauge_covariance_is_second_order_in_dt(seed in 0u64..10_000, rate in 0.5..3.0f64) {
        let g = line();
        let p = driven(&g, seed);
        let chi = GaugeFunction::new(&g, Arc::new(LinearInTime(rate))).unwrap();
        let sys = System::schrodinger(particle());
        let psi = packet(&g, 0.5);
        let coarse = gauge_covariance_check(&psi, &p, &chi, sys, Schedule::new(0.0, 0.02, 50)).unwrap();
        let fine = gauge_covariance_check(&psi, &p, &chi, sys, Schedule::new(0.0, 0.01, 100)).unwrap();
        let order = (coarse.max_deviation / fine.max_deviation).log2();
        prop_assert!((1.8..=2.2).contains(&order), "order {order}");
        prop_assert!(fine.max_density_deviation <= fine.max_deviation);
    }

    #[test]
    fn separation_energies_do_not_depend_on_time(seed in 0u64..10_000, t in 0.0..3.0f64) {
        let g = Grid::line(96, 20.0, Boundary::Dirichlet).unwrap();
        let p = Potentials::vacuum(&g).with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap()));
        let sys = System::schrodinger(particle());
        let reference = lowest_spectrum(&sys.hamiltonian(&p, 0.0).unwrap(), 3).unwrap();
        let chi = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 4, 4, 1.0, 3.0, seed).unwrap())).unwrap();
        let moved = transform_potentials(&p, &chi).unwrap();
        let s = energy_via_separation(&moved, &chi, sys, t, 3).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&reference.eigenvalues) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn non_normalized_initial_state_is_rejected() {
    let g = line();
    let p = driven(&g, 1);
    let psi = packet(&g, 0.0).scale(2.0);
    let src = System::schrodinger(particle());
    assert!(src.source(&p).unwrap().evolve(&psi, Schedule::new(0.0, 0.01, 1)).is_err());
}
