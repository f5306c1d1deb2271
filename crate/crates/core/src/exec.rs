//! Data-parallel kernels with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the top-level functions
//! dispatch to [`par`]; otherwise they use [`seq`]. Both variants are public so
//! the benches can compare them in one binary.
//!
//! Reductions split the index range into fixed chunks of [`CHUNK`] and add the
//! partial sums left to right, so both variants return bit-identical results
//! regardless of thread count.

use crate::C64;

pub const CHUNK: usize = 1024;

pub mod seq {
    use super::CHUNK;
    use crate::C64;

    pub fn fill<T, F>(out: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        for (i, o) in out.iter_mut().enumerate() {
            *o = f(i);
        }
    }

    pub fn sum<F>(n: usize, f: F) -> C64
    where
        F: Fn(usize) -> C64 + Sync + Send,
    {
        let mut total = C64::new(0.0, 0.0);
        let mut start = 0;
        while start < n {
            let end = (start + CHUNK).min(n);
            let mut part = C64::new(0.0, 0.0);
            for i in start..end {
                part += f(i);
            }
            total += part;
            start = end;
        }
        total
    }

    pub fn max<F>(n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        (0..n).map(f).fold(0.0, f64::max)
    }

    pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        (a(), b())
    }
}

#[cfg(feature = "parallel")]
pub mod par {
    use super::CHUNK;
    use crate::C64;
    use rayon::prelude::*;

    pub fn fill<T, F>(out: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * CHUNK;
            for (k, o) in chunk.iter_mut().enumerate() {
                *o = f(base + k);
            }
        });
    }

    pub fn sum<F>(n: usize, f: F) -> C64
    where
        F: Fn(usize) -> C64 + Sync + Send,
    {
        let chunks = n.div_ceil(CHUNK);
        let parts: Vec<C64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut part = C64::new(0.0, 0.0);
                for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    part += f(i);
                }
                part
            })
            .collect();
        parts.into_iter().fold(C64::new(0.0, 0.0), |acc, p| acc + p)
    }

    pub fn max<F>(n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        (0..n).into_par_iter().map(f).reduce(|| 0.0, f64::max)
    }

    pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        rayon::join(a, b)
    }
}

#[cfg(feature = "parallel")]
pub use par::{fill, join, max, sum};
#[cfg(not(feature = "parallel"))]
pub use seq::{fill, join, max, sum};

/// Builds a vector of length `n` from an index map.
pub fn collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send + Default + Clone,
    F: Fn(usize) -> T + Sync + Send,
{
    let mut out = vec![T::default(); n];
    fill(&mut out, f);
    out
}

/// `Σ conj(a_i) b_i` with the deterministic chunked order.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.len(), |i| a[i].conj() * b[i])
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    sum(a.len(), |i| C64::new(a[i].norm_sqr(), 0.0)).re
}

/// `y += alpha * x`
pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
