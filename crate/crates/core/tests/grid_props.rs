use gaugelab::grid::{self, Boundary, Grid, ScalarField, VectorField};
use gaugelab::C64;
use proptest::prelude::*;

const N: usize = 10;

fn grid(boundary: Boundary) -> Grid {
    Grid::square(N, 6.0, boundary).unwrap()
}

fn values() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), N * N)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn boundary() -> impl Strategy<Value = Boundary> {
    prop_oneof![Just(Boundary::Periodic), Just(Boundary::Dirichlet)]
}

fn shifted(f: &ScalarField, sx: usize, sy: usize) -> ScalarField {
    let g = f.grid();
    let v = f.values();
    let out = (0..g.len())
        .map(|i| {
            let [ix, iy] = g.site(i);
            v[g.index((ix + sx) % N, (iy + sy) % N)]
        })
        .collect();
    ScalarField::new(g, out).unwrap()
}

fn scalar_ops(f: &ScalarField) -> Vec<ScalarField> {
    let mut out = grid::gradient(f).into_components();
    out.push(grid::laplacian(f));
    out
}

fn vector_ops(v: &VectorField) -> Vec<ScalarField> {
    vec![grid::divergence(v), grid::curl2d(v).unwrap()]
}

// (f[i+2] − 2f[i] + f[i−2]) / 4h² summed over both axes, on the torus
fn wide_laplacian(f: &ScalarField) -> Vec<C64> {
    let g = f.grid();
    let h = g.spacing()[0];
    let v = f.values();
    (0..g.len())
        .map(|i| {
            let [ix, iy] = g.site(i);
            let at = |x: usize, y: usize| v[g.index(x % N, y % N)];
            (at(ix + 2, iy) + at(ix + N - 2, iy) + at(ix, iy + 2) + at(ix, iy + N - 2) - v[i] * 4.0) / (4.0 * h * h)
        })
        .collect()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn difference_operators_are_linear(
        b in boundary(),
        f in values(),
        g in values(),
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
    ) {
        let gr = grid(b);
        let f = ScalarField::new(&gr, f).unwrap();
        let g = ScalarField::new(&gr, g).unwrap();
        let mix = f.combine(alpha, &g, beta).unwrap();
        for ((m, a), c) in scalar_ops(&mix).iter().zip(scalar_ops(&f)).zip(scalar_ops(&g)) {
            let expected = a.combine(alpha, &c, beta).unwrap();
            prop_assert!(m.max_abs_diff(&expected).unwrap() < 1e-12);
        }
        let vf = VectorField::new(vec![f.clone(), g.clone()]).unwrap();
        let vg = VectorField::new(vec![g.clone(), f.clone()]).unwrap();
        let vmix = vf.combine(alpha, &vg, beta).unwrap();
        for ((m, a), c) in vector_ops(&vmix).iter().zip(vector_ops(&vf)).zip(vector_ops(&vg)) {
            let expected = a.combine(alpha, &c, beta).unwrap();
            prop_assert!(m.max_abs_diff(&expected).unwrap() < 1e-12);
        }
    }

    #[test]
    fn periodic_operators_commute_with_translations(f in values(), sx in 0..N, sy in 0..N) {
        let f = ScalarField::new(&grid(Boundary::Periodic), f).unwrap();
        let moved = shifted(&f, sx, sy);
        for (a, b) in scalar_ops(&moved).iter().zip(scalar_ops(&f)) {
            let b = shifted(&b, sx, sy);
            prop_assert_eq!(a.values(), b.values());
        }
        let v = grid::gradient(&f);
        let vm = VectorField::new(v.components().iter().map(|c| shifted(c, sx, sy)).collect()).unwrap();
        for (a, b) in vector_ops(&vm).iter().zip(vector_ops(&v)) {
            let b = shifted(&b, sx, sy);
            prop_assert_eq!(a.values(), b.values());
        }
    }

    #[test]
    fn divergence_of_gradient_is_the_wide_laplacian(f in values()) {
        let f = ScalarField::new(&grid(Boundary::Periodic), f).unwrap();
        let dg = grid::divergence(&grid::gradient(&f));
        prop_assert!(max_diff(dg.values(), &wide_laplacian(&f)) < 1e-12);
    }

    #[test]
    fn curl_of_gradient_vanishes(b in boundary(), f in values()) {
        let f = ScalarField::new(&grid(b), f).unwrap();
        let worst = grid::curl2d(&grid::gradient(&f)).unwrap().max_abs();
        prop_assert!(worst < 1e-12, "curl grad = {worst}");
    }

    #[test]
    fn laplacian_expectation_is_real(b in boundary(), f in values()) {
        let f = ScalarField::new(&grid(b), f).unwrap();
        let e = grid::inner_product(&f, &grid::laplacian(&f)).unwrap();
        prop_assert!(e.im.abs() <= 1e-12 * e.re.abs().max(1.0), "{e}");
    }
}
