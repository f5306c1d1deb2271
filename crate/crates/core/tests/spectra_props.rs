use std::sync::Arc;

use gaugelab::gauge::Potentials;
use gaugelab::grid::{Boundary, Grid};
use gaugelab::models::{FourierSum, FourierVector};
use gaugelab::operators::{hamiltonian, BuildOptions, HermitianOperator, Kind};
use gaugelab::spectra::{dense_spectrum, lowest_k, spectrum_compare, RESIDUAL_TOLERANCE};
use gaugelab::{Particle, C64};
use proptest::prelude::*;

fn operator(seed: u64, n: usize) -> HermitianOperator {
    let g = Grid::square(n, 5.0, Boundary::Periodic).unwrap();
    let a0 = FourierSum::random(&g, 4, 2, 2.0, 0.0, seed).unwrap();
    let a = FourierVector([
        FourierSum::random(&g, 2, 2, 0.8, 0.0, seed + 1).unwrap(),
        FourierSum::random(&g, 2, 2, 0.8, 0.0, seed + 2).unwrap(),
    ]);
    let p = Potentials::vacuum(&g).with_scalar(Arc::new(a0)).with_vector(Arc::new(a));
    hamiltonian(&p, 0.0, Particle::new(1.0, 1.0).unwrap(), Kind::Schrodinger, BuildOptions::default()).unwrap()
}

fn phases() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, 100).prop_map(|a| a.into_iter().map(|t| C64::from_polar(1.0, t)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigenpairs_have_small_residuals(seed in 0u64..10_000) {
        let h = operator(seed, 10);
        let bound = RESIDUAL_TOLERANCE * h.norm_inf();
        let dense = dense_spectrum(&h).unwrap();
        prop_assert!(dense.max_residual() <= bound, "{} > {bound}", dense.max_residual());
        let low = lowest_k(&h, 4).unwrap();
        prop_assert!(low.max_residual() <= bound);
        prop_assert!(spectrum_compare(&low, &dense, 4, 1e-10).unwrap().within);
    }

    #[test]
    fn diagonal_phase_conjugation_keeps_the_spectrum(seed in 0u64..10_000, u in phases()) {
        let h = operator(seed, 10);
        let conj = h.conjugate_by_phases(&u).unwrap();
        let (a, b) = (dense_spectrum(&h).unwrap(), dense_spectrum(&conj).unwrap());
        prop_assert!(spectrum_compare(&a, &b, a.len(), 1e-9).unwrap().within);
    }

    #[test]
    fn lowest_k_is_prefix_consistent(seed in 0u64..10_000, k in 2usize..6, short in 1usize..2) {
        let h = operator(seed, 12);
        let long = lowest_k(&h, k).unwrap();
        let first = lowest_k(&h, short).unwrap();
        prop_assert!(spectrum_compare(&first, &long, short, 1e-10).unwrap().within);
    }
}

#[test]
fn compare_needs_enough_values() {
    let s = dense_spectrum(&HermitianOperator::diagonal(&[1.0, 2.0])).unwrap();
    assert!(spectrum_compare(&s, &s, 3, 1e-9).is_err());
}
