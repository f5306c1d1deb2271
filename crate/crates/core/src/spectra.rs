//! Eigenvalues of Hermitian lattice operators and their comparison.
//!
//! [`dense_spectrum`] hands the full matrix to `faer` and then replaces each
//! eigenvalue by the Rayleigh quotient of its eigenvector, evaluated with the
//! sparse operator. The quotient is accurate to roughly `ε·|λ|`-scale
//! roundoff rather than `ε·‖H‖`, which matters when spectra that differ by
//! an exact shift are compared at `1e-12`.
//!
//! [`lowest_k`] is a shift-invert Lanczos iteration with full
//! reorthogonalization and locking. The shift sits below the Gershgorin
//! interval, so `H − σ` is positive definite and the inner solves are
//! conjugate gradient. Converged pairs are locked smallest first; each later
//! cycle runs on the orthogonal complement of the locked vectors, which also
//! recovers further copies of degenerate eigenvalues. A final cycle verifies
//! that nothing was missed below the k-th value.

use std::io::Write;

use faer::complex_native::c64;
use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::operators::HermitianOperator;
use crate::{exec, Error, Result, C64};

/// Largest dimension [`dense_spectrum`] accepts by default.
pub const DENSE_CAP: usize = 4096;

/// Default residual tolerance, relative to `max(1, ‖H‖∞)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Eigenvalues closer than this are treated as one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    IterativeLowK,
}

/// Ascending eigenvalues with residuals `‖Hv − λv‖/‖v‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Option<Vec<Vec<C64>>>,
    pub residuals: Vec<f64>,
    pub method: Method,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// First `k` pairs.
    pub fn truncated(&self, k: usize) -> Spectrum {
        let k = k.min(self.len());
        Spectrum {
            eigenvalues: self.eigenvalues[..k].to_vec(),
            eigenvectors: self.eigenvectors.as_ref().map(|v| v[..k].to_vec()),
            residuals: self.residuals[..k].to_vec(),
            method: self.method,
        }
    }

    pub fn count_below(&self, x: f64) -> usize {
        self.eigenvalues.iter().filter(|&&e| e < x).count()
    }

    /// Sizes of runs of eigenvalues whose neighbours differ by at most `tol`.
    pub fn cluster_sizes(&self, tol: f64) -> Vec<usize> {
        let mut out = Vec::new();
        let mut run = 0;
        for (i, &e) in self.eigenvalues.iter().enumerate() {
            if i > 0 && e - self.eigenvalues[i - 1] <= tol {
                run += 1;
            } else {
                if run > 0 {
                    out.push(run);
                }
                run = 1;
            }
        }
        if run > 0 {
            out.push(run);
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,eigenvalue,residual")?;
        for (i, (e, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            writeln!(w, "{i},{e:e},{r:e}")?;
        }
        Ok(())
    }

    fn from_pairs(mut pairs: Vec<(f64, Vec<C64>, f64)>, method: Method) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut s = Spectrum {
            eigenvalues: Vec::with_capacity(pairs.len()),
            eigenvectors: Some(Vec::with_capacity(pairs.len())),
            residuals: Vec::with_capacity(pairs.len()),
            method,
        };
        for (e, v, r) in pairs {
            s.eigenvalues.push(e);
            s.residuals.push(r);
            s.eigenvectors.as_mut().expect("set above").push(v);
        }
        s
    }
}

/// Rayleigh quotient and residual of `v` (any norm).
fn rayleigh(op: &HermitianOperator, v: &[C64]) -> (f64, f64) {
    let hv = op.apply(v);
    let vv = exec::norm_sqr(v);
    let lambda = op.quadratic_form(v);
    let r = exec::sum(v.len(), |i| C64::new((hv[i] - v[i] * lambda).norm_sqr(), 0.0)).re;
    (lambda, (r / vv).sqrt())
}

/// Full eigendecomposition, refusing operators above [`DENSE_CAP`].
pub fn dense_spectrum(op: &HermitianOperator) -> Result<Spectrum> {
    dense_spectrum_capped(op, DENSE_CAP)
}

pub fn dense_spectrum_capped(op: &HermitianOperator, cap: usize) -> Result<Spectrum> {
    let n = op.n();
    if n > cap {
        return Err(Error::SizeExceeded { n, cap });
    }
    let d = op.to_dense();
    let vectors: Vec<Vec<C64>> = if op.is_real() {
        let m = Mat::<f64>::from_fn(n, n, |i, j| d[i * n + j].re);
        let e = m.selfadjoint_eigendecomposition(Side::Lower);
        let u = e.u();
        (0..n).map(|k| (0..n).map(|i| C64::new(u.read(i, k), 0.0)).collect()).collect()
    } else {
        let m = Mat::<c64>::from_fn(n, n, |i, j| {
            let v = d[i * n + j];
            c64::new(v.re, v.im)
        });
        let e = m.selfadjoint_eigendecomposition(Side::Lower);
        let u = e.u();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        let z = u.read(i, k);
                        C64::new(z.re, z.im)
                    })
                    .collect()
            })
            .collect()
    };
    let pairs = vectors
        .into_iter()
        .map(|v| {
            let (l, r) = rayleigh(op, &v);
            (l, v, r)
        })
        .collect();
    Ok(Spectrum::from_pairs(pairs, Method::Dense))
}

/// Result of a conjugate-gradient solve.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CgInfo {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Conjugate gradient for a Hermitian positive definite `apply`.
pub(crate) fn conjugate_gradient<F>(apply: F, b: &[C64], x: &mut [C64], tol: f64, max_iter: usize) -> CgInfo
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    let bn = exec::norm_sqr(b).sqrt();
    if bn == 0.0 {
        x.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        return CgInfo {
            iterations: 0,
            relative_residual: 0.0,
        };
    }
    let ax = apply(x);
    let mut r: Vec<C64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut p = r.clone();
    let mut rr = exec::norm_sqr(&r);
    let mut it = 0;
    while it < max_iter && rr.sqrt() > tol * bn {
        let ap = apply(&p);
        let alpha = rr / exec::dot(&p, &ap).re;
        exec::axpy(C64::new(alpha, 0.0), &p, x);
        exec::axpy(C64::new(-alpha, 0.0), &ap, &mut r);
        let rr_new = exec::norm_sqr(&r);
        let beta = rr_new / rr;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + *pi * beta;
        }
        rr = rr_new;
        it += 1;
        if it % 50 == 0 {
            // replace the recursive residual to stop drift
            let ax = apply(x);
            for i in 0..r.len() {
                r[i] = b[i] - ax[i];
            }
            rr = exec::norm_sqr(&r);
        }
    }
    let ax = apply(x);
    let true_r = exec::sum(b.len(), |i| C64::new((b[i] - ax[i]).norm_sqr(), 0.0)).re.sqrt();
    CgInfo {
        iterations: it,
        relative_residual: true_r / bn,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Converged when `‖Hv − λv‖ ≤ tol·max(1, ‖H‖∞)`.
    pub tol: f64,
    /// Restart cap is `restarts_per_value·k`.
    pub restarts_per_value: usize,
    /// Krylov basis size per cycle (before clamping to the free dimension).
    pub krylov_dim: usize,
    pub inner_tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            restarts_per_value: 50,
            krylov_dim: 48,
            inner_tol: 1e-14,
            seed: 0x5eed,
        }
    }
}

/// The `k` smallest eigenpairs by shift-invert Lanczos.
pub fn lowest_k(op: &HermitianOperator, k: usize) -> Result<Spectrum> {
    lowest_k_with(op, k, LanczosOptions::default())
}

fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = exec::dot(b, v);
            exec::axpy(-c, b, v);
        }
    }
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = exec::norm_sqr(v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

pub fn lowest_k_with(op: &HermitianOperator, k: usize, opts: LanczosOptions) -> Result<Spectrum> {
    let n = op.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ {n}, got {k}")));
    }
    let (lo, hi) = op.gershgorin();
    let width = (hi - lo).max(1e-3);
    let sigma = lo - 1e-2 * width;
    let shifted = op.shifted(-sigma);
    let tol = opts.tol * op.norm_inf().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_restarts = opts.restarts_per_value * k;

    let mut locked: Vec<(f64, Vec<C64>, f64)> = Vec::new();
    let mut locked_vecs: Vec<Vec<C64>> = Vec::new();
    let mut start: Option<Vec<C64>> = None;
    let mut restarts = 0;
    let mut verified = false;

    let solve = |b: &[C64]| -> Vec<C64> {
        let mut x = vec![C64::new(0.0, 0.0); n];
        conjugate_gradient(|v| shifted.apply(v), b, &mut x, opts.inner_tol, 20 * n + 100);
        x
    };

    while restarts < max_restarts && locked_vecs.len() < n {
        let kth_before = (locked.len() >= k).then(|| locked[k - 1].0);
        let free = n - locked_vecs.len();
        let m = opts.krylov_dim.max(2 * k + 8).min(free);
        let mut v = start.take().unwrap_or_else(|| {
            (0..n)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect()
        });
        orthogonalize(&mut v, &locked_vecs);
        if normalize(&mut v) == 0.0 {
            restarts += 1;
            continue;
        }
        let mut basis: Vec<Vec<C64>> = vec![v];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for j in 0..m {
            let mut w = solve(&basis[j]);
            orthogonalize(&mut w, &locked_vecs);
            let a = exec::dot(&basis[j], &w).re;
            alpha.push(a);
            if j + 1 == m {
                break;
            }
            orthogonalize(&mut w, &basis);
            orthogonalize(&mut w, &locked_vecs);
            let b = normalize(&mut w);
            if b <= 1e-13 * a.abs().max(1e-300) {
                break;
            }
            beta.push(b);
            basis.push(w);
        }
        let dim = alpha.len();
        let t = Mat::<f64>::from_fn(dim, dim, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let e = t.selfadjoint_eigendecomposition(Side::Lower);
        let s = e.s().column_vector();
        let u = e.u();
        // largest θ of (H − σ)⁻¹ is the smallest λ
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| s.read(b).total_cmp(&s.read(a)));
        let mut lowest_new = f64::INFINITY;
        for &c in &order {
            let mut y = vec![C64::new(0.0, 0.0); n];
            for (i, b) in basis.iter().enumerate() {
                exec::axpy(C64::new(u.read(i, c), 0.0), b, &mut y);
            }
            orthogonalize(&mut y, &locked_vecs);
            normalize(&mut y);
            let (lambda, res) = rayleigh(op, &y);
            lowest_new = lowest_new.min(lambda);
            if res <= tol {
                locked_vecs.push(y.clone());
                locked.push((lambda, y, res));
                if locked_vecs.len() == n {
                    break;
                }
            } else {
                start = Some(y);
                break;
            }
        }
        restarts += 1;
        locked.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(kth) = kth_before {
            // a whole cycle on the complement found nothing below the k-th value
            if lowest_new >= kth - tol {
                verified = true;
                break;
            }
        }
    }
    locked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let done = locked.len() >= k && (verified || locked.len() == n);
    let spectrum = Spectrum::from_pairs(locked.into_iter().take(k).collect(), Method::IterativeLowK);
    if done {
        Ok(spectrum)
    } else {
        Err(Error::NoConvergence {
            wanted: k,
            converged: spectrum.len(),
            restarts,
            partial: Box::new(spectrum),
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Comparison {
    pub compared: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub within: bool,
}

/// `max_i |s1[i] − s2[i]|` over the first `k` sorted values.
pub fn spectrum_compare(s1: &Spectrum, s2: &Spectrum, k: usize, tolerance: f64) -> Result<Comparison> {
    let have = s1.len().min(s2.len());
    if have < k {
        return Err(Error::InsufficientData { have, need: k });
    }
    let dev = (0..k)
        .map(|i| (s1.eigenvalues[i] - s2.eigenvalues[i]).abs())
        .fold(0.0, f64::max);
    Ok(Comparison {
        compared: k,
        max_deviation: dev,
        tolerance,
        within: dev <= tolerance,
    })
}
