//! Writes `fixtures/soft_coulomb.json`.
//!
//! The lowest eigenvalues of the 1D soft-Coulomb box are computed here with
//! Sturm-sequence bisection on the tridiagonal matrix, sharing no code with
//! the library's operators or eigensolvers.
//!
//! ```text
//! cargo run -p gaugelab-core --example oracle_fixtures -- crates/core/fixtures/soft_coulomb.json
//! ```

use serde_json::json;

struct Box1d {
    n: usize,
    length: f64,
    kappa: f64,
    soft: f64,
    q: f64,
    m: f64,
}

impl Box1d {
    fn tridiagonal(&self) -> (Vec<f64>, f64) {
        let h = self.length / (self.n as f64 + 1.0);
        let diag = (0..self.n)
            .map(|i| {
                let x = -0.5 * self.length + h * (i as f64 + 1.0);
                1.0 / (self.m * h * h) - self.q * self.kappa / (x * x + self.soft * self.soft).sqrt()
            })
            .collect();
        (diag, -0.5 / (self.m * h * h))
    }
}

/// Number of eigenvalues below `x`.
fn sturm_count(d: &[f64], e: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, di) in d.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { e * e / q };
        q = di - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (di.abs() + e.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn lowest(d: &[f64], e: f64, k: usize) -> Vec<f64> {
    let lo0 = d.iter().fold(f64::INFINITY, |a, &b| a.min(b)) - 2.0 * e.abs();
    let hi0 = d.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) + 2.0 * e.abs();
    (0..k)
        .map(|j| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(d, e, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/core/fixtures/soft_coulomb.json".into());
    let mut runs = Vec::new();
    for n in [512, 1024, 2048] {
        let b = Box1d {
            n,
            length: 40.0,
            kappa: 1.0,
            soft: 0.5,
            q: 1.0,
            m: 1.0,
        };
        let (d, e) = b.tridiagonal();
        let ev = lowest(&d, e, 3);
        runs.push(json!({
            "n": b.n, "length": b.length, "kappa": b.kappa, "soft": b.soft, "q": b.q, "m": b.m,
            "lowest": ev,
        }));
    }
    let out = json!({
        "method": "sturm bisection on the tridiagonal, Dirichlet box, walls at +-length/2",
        "runs": runs,
    });
    let text = serde_json::to_string_pretty(&out).unwrap() + "\n";
    std::fs::write(&path, text).unwrap();
    println!("wrote {path}");
}
