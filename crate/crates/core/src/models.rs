//! Closed-form scalar and vector functions of `(r, t)`.
//!
//! These back potentials and gauge functions. Each model reports analytic
//! spatial and time derivatives where it has them; callers fall back to
//! finite differences otherwise. A 1D grid evaluates models at `r = [x, 0]`.
//!
//! # Registry
//!
//! Config files name models by kind plus a flat parameter map. Scalar kinds
//! (potentials, charge densities and gauge functions):
//!
//! | kind            | parameters                                        | value |
//! |-----------------|---------------------------------------------------|-------|
//! | `zero`          |                                                   | 0 |
//! | `constant`      | `value`                                           | c |
//! | `linear_time`   | `rate`                                            | c·t |
//! | `linear_space`  | `kx`, `ky`                                        | k·r |
//! | `bilinear`      | `coef`                                            | c·x·y |
//! | `soft_coulomb`  | `kappa`, `soft`, `cx`, `cy`                       | −κ/√(\|r−c\|² + a²) |
//! | `harmonic`      | `stiffness`, `cx`, `cy`                           | ½k\|r−c\|² |
//! | `cosine`        | `amplitude`, `mx`, `my`, `omega`, `phase`         | a·cos(k·r + ωt + φ), k = 2πm/period |
//! | `random_fourier`| `modes`, `max_mode`, `amplitude`, `max_omega`     | seeded sum of cosines |
//! | `gaussian_pair` | `amplitude`, `width`, `separation`                | +/− Gaussian blobs on the x axis |
//!
//! On periodic grids, distances in `soft_coulomb`, `harmonic` and
//! `gaussian_pair` use the minimal image so the sampled function is single
//! valued on the torus.
//!
//! Vector kinds:
//!
//! | kind                 | parameters        | value |
//! |----------------------|-------------------|-------|
//! | `zero`               |                   | 0 |
//! | `constant`           | `ax`, `ay`        | (aₓ, a_y) |
//! | `symmetric`          | `b`               | B(−y, x)/2 |
//! | `landau`             | `b`               | (0, B·x) |
//! | `periodic_transverse`| `b0`              | (−b₀ L_y/2π·sin(2πy/L_y), b₀ L_x/2π·sin(2πx/L_x)) |

use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grid::{Grid, Point};
use crate::params::ParamMap;
use crate::{Error, Result};

/// Real scalar function of space and time.
pub trait ScalarFn: Send + Sync + Debug {
    fn value(&self, r: Point, t: f64) -> f64;

    fn grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        None
    }

    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        None
    }

    /// `∇(∂f/∂t)`
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        None
    }

    fn is_static(&self) -> bool;

    fn label(&self) -> String;
}

/// Real vector function of space and time.
pub trait VectorFn: Send + Sync + Debug {
    fn value(&self, r: Point, t: f64) -> [f64; 2];

    fn dt(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        None
    }

    /// `∫ A·dl` along the straight segment from `a` to `b`.
    fn line_integral(&self, a: Point, b: Point, t: f64) -> f64 {
        gauss_legendre_line(|r| self.value(r, t), a, b)
    }

    fn is_static(&self) -> bool;

    fn label(&self) -> String;
}

pub type ScalarModel = Arc<dyn ScalarFn>;
pub type VectorModel = Arc<dyn VectorFn>;

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss–Legendre rule for `∫ f·dl` over a segment. Exact for
/// polynomial integrands up to degree 15.
pub fn gauss_legendre_line<F>(f: F, a: Point, b: Point) -> f64
where
    F: Fn(Point) -> [f64; 2],
{
    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let half = [0.5 * (b[0] - a[0]), 0.5 * (b[1] - a[1])];
    let mut acc = 0.0;
    for (&x, &w) in GL8_NODES.iter().zip(&GL8_WEIGHTS) {
        for s in [-x, x] {
            let v = f([mid[0] + s * half[0], mid[1] + s * half[1]]);
            acc += w * (v[0] * half[0] + v[1] * half[1]);
        }
    }
    acc
}

/// Minimal-image displacement when `period` is set.
pub fn wrap(d: f64, period: Option<f64>) -> f64 {
    match period {
        Some(p) => d - p * (d / p).round(),
        None => d,
    }
}

fn periods_of(grid: &Grid) -> [Option<f64>; 2] {
    let mut p = [None, None];
    if grid.is_periodic() {
        for (axis, slot) in p.iter_mut().enumerate().take(grid.dim()) {
            *slot = Some(grid.period(axis));
        }
    }
    p
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Zero;

impl ScalarFn for Zero {
    fn value(&self, _r: Point, _t: f64) -> f64 {
        0.0
    }
    fn grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        "zero".into()
    }
}

impl VectorFn for Zero {
    fn value(&self, _r: Point, _t: f64) -> [f64; 2] {
        [0.0; 2]
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn line_integral(&self, _a: Point, _b: Point, _t: f64) -> f64 {
        0.0
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        "zero".into()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl ScalarFn for Constant {
    fn value(&self, _r: Point, _t: f64) -> f64 {
        self.0
    }
    fn grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("constant({})", self.0)
    }
}

/// `c·t`, constant in space.
#[derive(Clone, Copy, Debug)]
pub struct LinearInTime(pub f64);

impl ScalarFn for LinearInTime {
    fn value(&self, _r: Point, t: f64) -> f64 {
        self.0 * t
    }
    fn grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(self.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        self.0 == 0.0
    }
    fn label(&self) -> String {
        format!("linear_time(rate={})", self.0)
    }
}

/// `k·r`
#[derive(Clone, Copy, Debug)]
pub struct LinearInSpace(pub [f64; 2]);

impl ScalarFn for LinearInSpace {
    fn value(&self, r: Point, _t: f64) -> f64 {
        self.0[0] * r[0] + self.0[1] * r[1]
    }
    fn grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some(self.0)
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("linear_space(k=[{}, {}])", self.0[0], self.0[1])
    }
}

/// `c·x·y`; maps the symmetric uniform-B gauge to the Landau gauge for `c = B/2`.
#[derive(Clone, Copy, Debug)]
pub struct Bilinear(pub f64);

impl ScalarFn for Bilinear {
    fn value(&self, r: Point, _t: f64) -> f64 {
        self.0 * r[0] * r[1]
    }
    fn grad(&self, r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([self.0 * r[1], self.0 * r[0]])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("bilinear(coef={})", self.0)
    }
}

/// `−κ/√(|r−c|² + a²)`
#[derive(Clone, Copy, Debug)]
pub struct SoftCoulomb {
    pub kappa: f64,
    pub soft: f64,
    pub center: Point,
    pub period: [Option<f64>; 2],
}

impl SoftCoulomb {
    pub fn new(kappa: f64, soft: f64) -> Result<Self> {
        if !(soft > 0.0) {
            return Err(Error::InvalidParameter(format!("softening must be positive, got {soft}")));
        }
        Ok(Self {
            kappa,
            soft,
            center: [0.0; 2],
            period: [None, None],
        })
    }

    /// Minimal-image distances on the grid's torus (no-op for Dirichlet).
    pub fn periodized(mut self, grid: &Grid) -> Self {
        self.period = periods_of(grid);
        self
    }

    fn disp(&self, r: Point) -> [f64; 2] {
        [
            wrap(r[0] - self.center[0], self.period[0]),
            wrap(r[1] - self.center[1], self.period[1]),
        ]
    }
}

impl ScalarFn for SoftCoulomb {
    fn value(&self, r: Point, _t: f64) -> f64 {
        let d = self.disp(r);
        -self.kappa / (d[0] * d[0] + d[1] * d[1] + self.soft * self.soft).sqrt()
    }
    fn grad(&self, r: Point, _t: f64) -> Option<[f64; 2]> {
        let d = self.disp(r);
        let s = d[0] * d[0] + d[1] * d[1] + self.soft * self.soft;
        let f = self.kappa / (s * s.sqrt());
        Some([f * d[0], f * d[1]])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("soft_coulomb(kappa={}, soft={})", self.kappa, self.soft)
    }
}

/// `½k|r−c|²`
#[derive(Clone, Copy, Debug)]
pub struct Harmonic {
    pub stiffness: f64,
    pub center: Point,
    pub period: [Option<f64>; 2],
}

impl Harmonic {
    pub fn new(stiffness: f64) -> Self {
        Self {
            stiffness,
            center: [0.0; 2],
            period: [None, None],
        }
    }

    fn disp(&self, r: Point) -> [f64; 2] {
        [
            wrap(r[0] - self.center[0], self.period[0]),
            wrap(r[1] - self.center[1], self.period[1]),
        ]
    }
}

impl ScalarFn for Harmonic {
    fn value(&self, r: Point, _t: f64) -> f64 {
        let d = self.disp(r);
        0.5 * self.stiffness * (d[0] * d[0] + d[1] * d[1])
    }
    fn grad(&self, r: Point, _t: f64) -> Option<[f64; 2]> {
        let d = self.disp(r);
        Some([self.stiffness * d[0], self.stiffness * d[1]])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("harmonic(k={})", self.stiffness)
    }
}

/// One term `a·cos(k·r + ωt + φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FourierMode {
    pub amplitude: f64,
    pub k: [f64; 2],
    pub omega: f64,
    pub phase: f64,
}

impl FourierMode {
    fn arg(&self, r: Point, t: f64) -> f64 {
        self.k[0] * r[0] + self.k[1] * r[1] + self.omega * t + self.phase
    }
}

/// Finite sum of cosine modes. With wave vectors on the reciprocal lattice
/// of a periodic grid the sum is single valued on the torus and band limited.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierSum {
    pub modes: Vec<FourierMode>,
}

impl FourierSum {
    pub fn new(modes: Vec<FourierMode>) -> Self {
        Self { modes }
    }

    /// `a·cos(2π(mx·x/Lx + my·y/Ly) + ωt + φ)` with `L` the grid periods.
    pub fn single(grid: &Grid, amplitude: f64, m: [i64; 2], omega: f64, phase: f64) -> Self {
        Self::new(vec![FourierMode {
            amplitude,
            k: reciprocal(grid, m),
            omega,
            phase,
        }])
    }

    /// Seeded random sum of `count` modes with integer mode numbers in
    /// `[-max_mode, max_mode]` (not all zero), amplitudes in `[0, amplitude]`,
    /// frequencies in `[-max_omega, max_omega]` and uniform phases.
    pub fn random(grid: &Grid, count: usize, max_mode: i64, amplitude: f64, max_omega: f64, seed: u64) -> Result<Self> {
        if max_mode < 1 {
            return Err(Error::InvalidParameter("max_mode must be at least 1".into()));
        }
        for axis in 0..grid.dim() {
            if 2 * max_mode as usize >= grid.points()[axis] {
                return Err(Error::InvalidParameter(format!(
                    "max_mode {max_mode} is not resolved by {} points",
                    grid.points()[axis]
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut modes = Vec::with_capacity(count);
        while modes.len() < count {
            let mx = rng.gen_range(-max_mode..=max_mode);
            let my = if grid.dim() == 2 { rng.gen_range(-max_mode..=max_mode) } else { 0 };
            if mx == 0 && my == 0 {
                continue;
            }
            let amp = amplitude * rng.gen::<f64>();
            let omega = if max_omega > 0.0 { rng.gen_range(-max_omega..=max_omega) } else { 0.0 };
            let phase = rng.gen_range(0.0..2.0 * PI);
            modes.push(FourierMode {
                amplitude: amp,
                k: reciprocal(grid, [mx, my]),
                omega,
                phase,
            });
        }
        Ok(Self { modes })
    }
}

/// Wave vector `2π m / L` for the grid's periods.
pub fn reciprocal(grid: &Grid, m: [i64; 2]) -> [f64; 2] {
    let mut k = [0.0; 2];
    for axis in 0..grid.dim() {
        k[axis] = 2.0 * PI * m[axis] as f64 / grid.period(axis);
    }
    k
}

impl ScalarFn for FourierSum {
    fn value(&self, r: Point, t: f64) -> f64 {
        self.modes.iter().map(|m| m.amplitude * m.arg(r, t).cos()).sum()
    }
    fn grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        let mut g = [0.0; 2];
        for m in &self.modes {
            let s = -m.amplitude * m.arg(r, t).sin();
            g[0] += s * m.k[0];
            g[1] += s * m.k[1];
        }
        Some(g)
    }
    fn dt(&self, r: Point, t: f64) -> Option<f64> {
        Some(self.modes.iter().map(|m| -m.amplitude * m.omega * m.arg(r, t).sin()).sum())
    }
    fn dt_grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        let mut g = [0.0; 2];
        for m in &self.modes {
            let c = -m.amplitude * m.omega * m.arg(r, t).cos();
            g[0] += c * m.k[0];
            g[1] += c * m.k[1];
        }
        Some(g)
    }
    fn is_static(&self) -> bool {
        self.modes.iter().all(|m| m.omega == 0.0)
    }
    fn label(&self) -> String {
        format!("fourier_sum({} modes)", self.modes.len())
    }
}

/// `f(r)·t` for a static profile `f`. With `f = A⁰` this is the gauge
/// function that removes a static scalar potential (temporal gauge).
#[derive(Clone, Debug)]
pub struct TimeRamp(pub ScalarModel);

impl ScalarFn for TimeRamp {
    fn value(&self, r: Point, t: f64) -> f64 {
        self.0.value(r, 0.0) * t
    }
    fn grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        self.0.grad(r, 0.0).map(|g| [g[0] * t, g[1] * t])
    }
    fn dt(&self, r: Point, _t: f64) -> Option<f64> {
        Some(self.0.value(r, 0.0))
    }
    fn dt_grad(&self, r: Point, _t: f64) -> Option<[f64; 2]> {
        self.0.grad(r, 0.0)
    }
    fn is_static(&self) -> bool {
        false
    }
    fn label(&self) -> String {
        format!("time_ramp({})", self.0.label())
    }
}

#[derive(Clone, Debug)]
pub struct Scaled(pub f64, pub ScalarModel);

impl ScalarFn for Scaled {
    fn value(&self, r: Point, t: f64) -> f64 {
        self.0 * self.1.value(r, t)
    }
    fn grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        self.1.grad(r, t).map(|g| [self.0 * g[0], self.0 * g[1]])
    }
    fn dt(&self, r: Point, t: f64) -> Option<f64> {
        self.1.dt(r, t).map(|d| self.0 * d)
    }
    fn dt_grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        self.1.dt_grad(r, t).map(|g| [self.0 * g[0], self.0 * g[1]])
    }
    fn is_static(&self) -> bool {
        self.1.is_static()
    }
    fn label(&self) -> String {
        format!("{}*{}", self.0, self.1.label())
    }
}

#[derive(Clone, Debug)]
pub struct Sum(pub Vec<ScalarModel>);

impl ScalarFn for Sum {
    fn value(&self, r: Point, t: f64) -> f64 {
        self.0.iter().map(|f| f.value(r, t)).sum()
    }
    fn grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        let mut g = [0.0; 2];
        for f in &self.0 {
            let h = f.grad(r, t)?;
            g[0] += h[0];
            g[1] += h[1];
        }
        Some(g)
    }
    fn dt(&self, r: Point, t: f64) -> Option<f64> {
        self.0.iter().map(|f| f.dt(r, t)).sum()
    }
    fn dt_grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        let mut g = [0.0; 2];
        for f in &self.0 {
            let h = f.dt_grad(r, t)?;
            g[0] += h[0];
            g[1] += h[1];
        }
        Some(g)
    }
    fn is_static(&self) -> bool {
        self.0.iter().all(|f| f.is_static())
    }
    fn label(&self) -> String {
        self.0.iter().map(|f| f.label()).collect::<Vec<_>>().join(" + ")
    }
}

/// Gaussian blob `a·exp(−|r−c|²/2w²)`.
#[derive(Clone, Copy, Debug)]
pub struct Gaussian {
    pub amplitude: f64,
    pub width: f64,
    pub center: Point,
    pub period: [Option<f64>; 2],
}

impl ScalarFn for Gaussian {
    fn value(&self, r: Point, _t: f64) -> f64 {
        let dx = wrap(r[0] - self.center[0], self.period[0]);
        let dy = wrap(r[1] - self.center[1], self.period[1]);
        self.amplitude * (-(dx * dx + dy * dy) / (2.0 * self.width * self.width)).exp()
    }
    fn grad(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        let dx = wrap(r[0] - self.center[0], self.period[0]);
        let dy = wrap(r[1] - self.center[1], self.period[1]);
        let v = self.value(r, t) / (self.width * self.width);
        Some([-v * dx, -v * dy])
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<f64> {
        Some(0.0)
    }
    fn dt_grad(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("gaussian(a={}, w={})", self.amplitude, self.width)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantVector(pub [f64; 2]);

impl VectorFn for ConstantVector {
    fn value(&self, _r: Point, _t: f64) -> [f64; 2] {
        self.0
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn line_integral(&self, a: Point, b: Point, _t: f64) -> f64 {
        self.0[0] * (b[0] - a[0]) + self.0[1] * (b[1] - a[1])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("constant([{}, {}])", self.0[0], self.0[1])
    }
}

/// Uniform field `B` in the symmetric gauge `A = B(−y, x)/2`.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricGauge(pub f64);

impl VectorFn for SymmetricGauge {
    fn value(&self, r: Point, _t: f64) -> [f64; 2] {
        [-0.5 * self.0 * r[1], 0.5 * self.0 * r[0]]
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn line_integral(&self, a: Point, b: Point, t: f64) -> f64 {
        // linear field: the midpoint rule is exact
        let m = self.value([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])], t);
        m[0] * (b[0] - a[0]) + m[1] * (b[1] - a[1])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("symmetric(B={})", self.0)
    }
}

/// Uniform field `B` in the Landau gauge `A = (0, B·x)`.
#[derive(Clone, Copy, Debug)]
pub struct LandauGauge(pub f64);

impl VectorFn for LandauGauge {
    fn value(&self, r: Point, _t: f64) -> [f64; 2] {
        [0.0, self.0 * r[0]]
    }
    fn dt(&self, _r: Point, _t: f64) -> Option<[f64; 2]> {
        Some([0.0; 2])
    }
    fn line_integral(&self, a: Point, b: Point, t: f64) -> f64 {
        let m = self.value([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])], t);
        m[0] * (b[0] - a[0]) + m[1] * (b[1] - a[1])
    }
    fn is_static(&self) -> bool {
        true
    }
    fn label(&self) -> String {
        format!("landau(B={})", self.0)
    }
}

/// One [`FourierSum`] per component. Covers periodic magnetic fields on the
/// torus, where a uniform `B` has no single-valued potential.
#[derive(Clone, Debug, Default)]
pub struct FourierVector(pub [FourierSum; 2]);

impl FourierVector {
    /// Divergence-free field with `B = b₀(cos(2πx/Lx) + cos(2πy/Ly))`.
    pub fn periodic_transverse(grid: &Grid, b0: f64) -> Result<Self> {
        grid.ensure_dim(2)?;
        let (lx, ly) = (grid.period(0), grid.period(1));
        let ax = FourierSum::single(grid, b0 * ly / (2.0 * PI), [0, 1], 0.0, 0.5 * PI);
        let ay = FourierSum::single(grid, b0 * lx / (2.0 * PI), [1, 0], 0.0, -0.5 * PI);
        Ok(Self([ax, ay]))
    }
}

impl VectorFn for FourierVector {
    fn value(&self, r: Point, t: f64) -> [f64; 2] {
        [self.0[0].value(r, t), self.0[1].value(r, t)]
    }
    fn dt(&self, r: Point, t: f64) -> Option<[f64; 2]> {
        Some([self.0[0].dt(r, t)?, self.0[1].dt(r, t)?])
    }
    fn is_static(&self) -> bool {
        self.0.iter().all(|c| c.is_static())
    }
    fn label(&self) -> String {
        format!("fourier_vector({}+{} modes)", self.0[0].modes.len(), self.0[1].modes.len())
    }
}

/// Keys understood by [`scalar_from_params`].
pub const SCALAR_KEYS: &[&str] = &[
    "value", "rate", "kx", "ky", "coef", "kappa", "soft", "cx", "cy", "stiffness", "amplitude", "mx", "my", "omega",
    "phase", "modes", "max_mode", "max_omega", "width", "separation",
];

/// Keys understood by [`vector_from_params`].
pub const VECTOR_KEYS: &[&str] = &["ax", "ay", "b", "b0"];

pub const SCALAR_KINDS: &[&str] = &[
    "zero",
    "constant",
    "linear_time",
    "linear_space",
    "bilinear",
    "soft_coulomb",
    "harmonic",
    "cosine",
    "random_fourier",
    "gaussian_pair",
];

pub const VECTOR_KINDS: &[&str] = &["zero", "constant", "symmetric", "landau", "periodic_transverse"];

/// Builds a named scalar model. `seed` feeds `random_fourier`.
pub fn scalar_from_params(kind: &str, p: &ParamMap, grid: &Grid, seed: u64) -> Result<ScalarModel> {
    let center = [p.f64_or("cx", 0.0)?, p.f64_or("cy", 0.0)?];
    let periods = periods_of(grid);
    Ok(match kind {
        "zero" => Arc::new(Zero),
        "constant" => Arc::new(Constant(p.f64_or("value", 0.0)?)),
        "linear_time" => Arc::new(LinearInTime(p.f64_or("rate", 1.0)?)),
        "linear_space" => Arc::new(LinearInSpace([p.f64_or("kx", 1.0)?, p.f64_or("ky", 0.0)?])),
        "bilinear" => Arc::new(Bilinear(p.f64_or("coef", 1.0)?)),
        "soft_coulomb" => {
            let mut sc = SoftCoulomb::new(p.f64_or("kappa", 1.0)?, p.f64_or("soft", 0.5)?)?.periodized(grid);
            sc.center = center;
            Arc::new(sc)
        }
        "harmonic" => {
            let mut h = Harmonic::new(p.f64_or("stiffness", 1.0)?);
            h.center = center;
            h.period = periods;
            Arc::new(h)
        }
        "cosine" => {
            let m = [p.f64_or("mx", 1.0)? as i64, p.f64_or("my", 0.0)? as i64];
            Arc::new(FourierSum::single(
                grid,
                p.f64_or("amplitude", 1.0)?,
                m,
                p.f64_or("omega", 0.0)?,
                p.f64_or("phase", 0.0)?,
            ))
        }
        "random_fourier" => Arc::new(FourierSum::random(
            grid,
            p.usize_or("modes", 4)?,
            p.usize_or("max_mode", 2)? as i64,
            p.f64_or("amplitude", 0.5)?,
            p.f64_or("max_omega", 1.0)?,
            seed,
        )?),
        "gaussian_pair" => {
            let a = p.f64_or("amplitude", 1.0)?;
            let w = p.f64_or("width", 0.5)?;
            let s = p.f64_or("separation", 2.0)?;
            if !(w > 0.0) {
                return Err(Error::InvalidParameter("gaussian width must be positive".into()));
            }
            let blob = |sign: f64, x: f64| -> ScalarModel {
                Arc::new(Gaussian {
                    amplitude: sign * a,
                    width: w,
                    center: [center[0] + x, center[1]],
                    period: periods,
                })
            };
            Arc::new(Sum(vec![blob(1.0, -0.5 * s), blob(-1.0, 0.5 * s)]))
        }
        other => {
            return Err(Error::Unknown {
                kind: "scalar model",
                name: other.to_string(),
            })
        }
    })
}

/// Builds a named vector model.
pub fn vector_from_params(kind: &str, p: &ParamMap, grid: &Grid) -> Result<VectorModel> {
    Ok(match kind {
        "zero" => Arc::new(Zero),
        "constant" => Arc::new(ConstantVector([p.f64_or("ax", 0.0)?, p.f64_or("ay", 0.0)?])),
        "symmetric" => Arc::new(SymmetricGauge(p.f64_or("b", 1.0)?)),
        "landau" => Arc::new(LandauGauge(p.f64_or("b", 1.0)?)),
        "periodic_transverse" => Arc::new(FourierVector::periodic_transverse(grid, p.f64_or("b0", 1.0)?)?),
        other => {
            return Err(Error::Unknown {
                kind: "vector model",
                name: other.to_string(),
            })
        }
    })
}
