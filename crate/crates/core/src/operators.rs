//! Sparse Hermitian lattice operators.
//!
//! Every operator is a CSR matrix plus a separate real diagonal holding the
//! potential energy `q·A⁰`. Keeping the potential apart lets the Yang
//! operator subtract it exactly and keeps time-dependent rebuilds cheap.
//!
//! Minimal coupling uses link phases by default: the hop from site `i` to
//! its forward neighbour `j` carries `W = exp(−iq∫A·dl)`. Under
//! `ψ → exp(iqχ)ψ`, `A → A + ∇χ` the links pick up exactly
//! `exp(iqχ_i) · exp(−iqχ_j)`, so `H' = U H U†` holds to roundoff for any
//! static `χ`. The symmetrized form `½(p·A + A·p)` is available as
//! [`Coupling::Symmetrized`]; its covariance error is `O(h²)`.
//!
//! Triplet export format, one entry per line, rows and columns 0-based:
//!
//! ```text
//! # gaugelab-operator n=<n> nnz=<nnz>
//! <row> <col> <re> <im>
//! ```

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::gauge::Potentials;
use crate::grid::{self, Grid, ScalarField, VectorField};
use crate::helmholtz;
use crate::{exec, Error, Particle, Result, C64};

/// Build-time bound on `‖M − M†‖∞`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    potential: Vec<f64>,
    defect: f64,
}

impl HermitianOperator {
    /// Assembles from `(row, col, value)` triplets plus a real diagonal.
    /// Duplicate triplets are summed.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != n {
            return Err(Error::InvalidParameter(format!(
                "potential has {} entries, operator dimension is {n}",
                potential.len()
            )));
        }
        let mut rows: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); n];
        for (i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!("entry ({i}, {j}) outside a {n}×{n} operator")));
            }
            *rows[i].entry(j).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in rows {
            for (j, v) in r {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        let mut op = Self {
            n,
            row_ptr,
            cols,
            vals,
            potential,
            defect: 0.0,
        };
        op.defect = op.measure_defect();
        Ok(op)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, C64::new(1.0, 0.0))), vec![0.0; n]).expect("valid")
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_triplets(values.len(), std::iter::empty(), values.to_vec()).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `‖M − M†‖∞` measured at build time.
    pub fn hermiticity_defect(&self) -> f64 {
        self.defect
    }

    /// The separately stored real diagonal (potential energy).
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    fn sparse_entry(&self, i: usize, j: usize) -> C64 {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.vals[self.row_ptr[i] + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        let mut v = self.sparse_entry(i, j);
        if i == j {
            v += self.potential[i];
        }
        v
    }

    fn measure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k];
                worst = worst.max((self.vals[k] - self.sparse_entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `y = M x`
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        exec::fill(y, |i| {
            let mut acc = x[i] * self.potential[i];
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            acc
        });
    }

    /// `v†Mv / v†v` accumulated in double-double arithmetic, so the result
    /// carries roughly one rounding of `|λ|` instead of `ε·nnz·‖M‖`.
    pub fn quadratic_form(&self, v: &[C64]) -> f64 {
        assert_eq!(v.len(), self.n);
        let mut num = Dd::default();
        let mut den = Dd::default();
        for i in 0..self.n {
            let (mut re, mut im) = (Dd::default(), Dd::default());
            re.add_prod(self.potential[i], v[i].re);
            im.add_prod(self.potential[i], v[i].im);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let (a, x) = (self.vals[k], v[self.cols[k]]);
                re.add_prod(a.re, x.re);
                re.add_prod(-a.im, x.im);
                im.add_prod(a.re, x.im);
                im.add_prod(a.im, x.re);
            }
            num.add_dd_scaled(v[i].re, re);
            num.add_dd_scaled(v[i].im, im);
            den.add_prod(v[i].re, v[i].re);
            den.add_prod(v[i].im, v[i].im);
        }
        num.div(den)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<C64> {
        let n = self.n;
        let mut d = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                d[i * n + self.cols[k]] += self.vals[k];
            }
            d[i * n + i] += self.potential[i];
        }
        d
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == 0.0)
    }

    /// Gershgorin interval `[lo, hi]` containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut centre = self.potential[i];
            let mut radius = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[k] == i {
                    centre += self.vals[k].re;
                } else {
                    radius += self.vals[k].norm();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    /// Max absolute row sum, `‖M‖∞`.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let mut s = 0.0;
                let mut d = C64::new(self.potential[i], 0.0);
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    if self.cols[k] == i {
                        d += self.vals[k];
                    } else {
                        s += self.vals[k].norm();
                    }
                }
                s + d.norm()
            })
            .fold(0.0, f64::max)
    }

    /// `U M U†` for `U = diag(phases)`.
    pub fn conjugate_by_phases(&self, phases: &[C64]) -> Result<Self> {
        if phases.len() != self.n {
            return Err(Error::InvalidParameter("phase vector length does not match operator".into()));
        }
        let mut out = self.clone();
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.vals[k] = phases[i] * self.vals[k] * phases[self.cols[k]].conj();
            }
        }
        out.defect = out.measure_defect();
        Ok(out)
    }

    /// Adds `values` to the potential diagonal.
    pub fn with_added_potential(&self, values: &[f64]) -> Result<Self> {
        if values.len() != self.n {
            return Err(Error::InvalidParameter("diagonal length does not match operator".into()));
        }
        let mut out = self.clone();
        for (p, v) in out.potential.iter_mut().zip(values) {
            *p += v;
        }
        Ok(out)
    }

    /// `M + c·I`
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        for p in &mut out.potential {
            *p += c;
        }
        out
    }

    /// The same operator with the potential diagonal removed.
    pub fn without_potential(&self) -> Self {
        let mut out = self.clone();
        out.potential = vec![0.0; self.n];
        out
    }

    /// Largest entrywise difference `max |M_ij − N_ij|`.
    pub fn max_entry_diff(&self, other: &HermitianOperator) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::GridMismatch);
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            let mut cols: Vec<usize> = self.cols[self.row_ptr[i]..self.row_ptr[i + 1]].to_vec();
            cols.extend_from_slice(&other.cols[other.row_ptr[i]..other.row_ptr[i + 1]]);
            cols.push(i);
            cols.sort_unstable();
            cols.dedup();
            for j in cols {
                worst = worst.max((self.entry(i, j) - other.entry(i, j)).norm());
            }
        }
        Ok(worst)
    }

    /// Nonzero entries in row-major order, potential folded into the diagonal.
    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::with_capacity(self.nnz() + self.n);
        for i in 0..self.n {
            let mut diag_done = false;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.cols[k];
                if j > i && !diag_done {
                    if self.potential[i] != 0.0 {
                        out.push((i, i, C64::new(self.potential[i], 0.0)));
                    }
                    diag_done = true;
                }
                if j == i {
                    out.push((i, i, self.entry(i, i)));
                    diag_done = true;
                } else {
                    out.push((i, j, self.vals[k]));
                }
            }
            if !diag_done && self.potential[i] != 0.0 {
                out.push((i, i, C64::new(self.potential[i], 0.0)));
            }
        }
        out
    }

    pub fn write_triplets<W: Write>(&self, mut w: W) -> Result<()> {
        let t = self.triplets();
        writeln!(w, "# gaugelab-operator n={} nnz={}", self.n, t.len())?;
        for (i, j, v) in t {
            writeln!(w, "{i} {j} {:e} {:e}", v.re, v.im)?;
        }
        Ok(())
    }

    /// Reads the triplet format; the whole diagonal lands in the sparse part.
    pub fn read_triplets<R: BufRead>(r: R) -> Result<Self> {
        let mut n = None;
        let mut trip = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for tok in rest.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("n=") {
                        n = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?);
                    }
                }
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("triplet line needs 4 fields: '{line}'")));
            }
            let p = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(e.to_string()));
            let i: usize = f[0].parse().map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?;
            let j: usize = f[1].parse().map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?;
            trip.push((i, j, C64::new(p(f[2])?, p(f[3])?)));
        }
        let n = n.ok_or_else(|| Error::Parse("missing '# gaugelab-operator n=' header".into()))?;
        Self::from_triplets(n, trip, vec![0.0; n])
    }
}

/// Unevaluated sum `hi + lo` with error-free updates.
#[derive(Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn add(&mut self, x: f64, err: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let e = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += e + err;
    }

    fn add_prod(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p, a.mul_add(b, -p));
    }

    fn add_dd_scaled(&mut self, a: f64, d: Dd) {
        self.add_prod(a, d.hi);
        self.lo += a * d.lo;
    }

    fn div(self, d: Dd) -> f64 {
        let q = self.hi / d.hi;
        // one Newton correction on the numerator residual
        let mut r = self;
        r.add_prod(-q, d.hi);
        r.add(-q * d.lo, 0.0);
        q + (r.hi + r.lo) / d.hi
    }
}

/// Discretization of `½(p − qA)²` or of the Dirac hopping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Link phases `exp(−iq∫A·dl)` on every bond.
    #[default]
    Peierls,
    /// `−∇² − q(p·A + A·p) + q²A²` with central differences (Schrödinger only).
    Symmetrized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Schrodinger,
    Dirac,
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger" => Ok(Kind::Schrodinger),
            "dirac" => Ok(Kind::Dirac),
            other => Err(Error::Unknown {
                kind: "hamiltonian kind",
                name: other.into(),
            }),
        }
    }
}

/// Builder switches shared by the Hamiltonian constructors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BuildOptions {
    pub coupling: Coupling,
    /// Wilson parameter `r` for the Dirac operator; `None` keeps the naive
    /// discretization with its doublers.
    pub wilson: Option<f64>,
}

/// `−i·(central difference)` along `axis`.
pub fn canonical_momentum(grid: &Grid, axis: usize) -> Result<HermitianOperator> {
    if axis >= grid.dim() {
        return Err(Error::InvalidParameter(format!("axis {axis} on a {}D grid", grid.dim())));
    }
    let c = 0.5 / grid.spacing()[axis];
    let mut t = Vec::with_capacity(2 * grid.len());
    for i in 0..grid.len() {
        if let Some(j) = grid.neighbor(i, axis, true) {
            t.push((i, j, C64::new(0.0, -c)));
            t.push((j, i, C64::new(0.0, c)));
        }
    }
    HermitianOperator::from_triplets(grid.len(), t, vec![0.0; grid.len()])
}

/// `p_axis − q·A_axis`
pub fn kinetic_momentum(grid: &Grid, axis: usize, a: &VectorField, q: f64) -> Result<HermitianOperator> {
    grid.ensure_same(a.grid())?;
    let p = canonical_momentum(grid, axis)?;
    let d: Vec<f64> = a.component(axis).values().iter().map(|v| -q * v.re).collect();
    p.with_added_potential(&d)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    /// `‖([Pˣ,Pʸ] − iq·curl A)ψ‖ / ‖ψ‖` over interior sites.
    pub residual_interior: f64,
    /// The same over every site, including walls and the periodic seam.
    pub residual_all: f64,
}

/// Checks `[Pˣ, Pʸ] ψ = iq·(∂x A_y − ∂y A_x) ψ` with `P = p − qA` and the
/// grid's central differences, i.e. `[Pⁱ,Pʲ] = −iqFⁱʲ` with `Fˣʸ = −B`.
pub fn commutator_field_check(grid: &Grid, a: &VectorField, q: f64, psi: &ScalarField) -> Result<CommutatorReport> {
    grid.ensure_dim(2)?;
    grid.ensure_same(psi.grid())?;
    let px = kinetic_momentum(grid, 0, a, q)?;
    let py = kinetic_momentum(grid, 1, a, q)?;
    let v = psi.values();
    let xy = px.apply(&py.apply(v));
    let yx = py.apply(&px.apply(v));
    let b = grid::curl2d(a)?;
    let mut inner = 0.0;
    let mut all = 0.0;
    for i in 0..grid.len() {
        let r = xy[i] - yx[i] - C64::new(0.0, q) * b.values()[i] * v[i];
        all += r.norm_sqr();
        if grid.is_interior(i) {
            inner += r.norm_sqr();
        }
    }
    let norm = exec::norm_sqr(v).sqrt();
    Ok(CommutatorReport {
        residual_interior: inner.sqrt() / norm,
        residual_all: all.sqrt() / norm,
    })
}

fn link_phase(theta: f64, q: f64) -> C64 {
    C64::from_polar(1.0, -q * theta)
}

fn potential_diagonal(a0: &ScalarField, q: f64) -> Vec<f64> {
    a0.values().iter().map(|v| q * v.re).collect()
}

fn ensure_particle(particle: Particle) -> Result<()> {
    Particle::new(particle.q, particle.m).map(|_| ())
}

/// Schrödinger operator from explicit `A⁰` samples and link integrals.
pub fn schrodinger_from_parts(
    grid: &Grid,
    a0: &ScalarField,
    links: &[[f64; 2]],
    particle: Particle,
) -> Result<HermitianOperator> {
    ensure_particle(particle)?;
    grid.ensure_same(a0.grid())?;
    let Particle { q, m } = particle;
    let n = grid.len();
    let mut t = Vec::with_capacity((2 * grid.dim() + 1) * n);
    let diag: f64 = grid.spacing().iter().map(|h| 1.0 / (m * h * h)).sum();
    for i in 0..n {
        t.push((i, i, C64::new(diag, 0.0)));
        for axis in 0..grid.dim() {
            let h = grid.spacing()[axis];
            if let Some(j) = grid.neighbor(i, axis, true) {
                let hop = link_phase(links[i][axis], q) * (-0.5 / (m * h * h));
                t.push((i, j, hop));
                t.push((j, i, hop.conj()));
            }
        }
    }
    HermitianOperator::from_triplets(n, t, potential_diagonal(a0, q))
}

fn schrodinger_symmetrized(grid: &Grid, a0: &ScalarField, a: &VectorField, particle: Particle) -> Result<HermitianOperator> {
    ensure_particle(particle)?;
    let Particle { q, m } = particle;
    let n = grid.len();
    let mut t = Vec::with_capacity((2 * grid.dim() + 1) * n);
    for i in 0..n {
        let mut diag = 0.0;
        for axis in 0..grid.dim() {
            let h = grid.spacing()[axis];
            let ai = a.component(axis).values()[i].re;
            diag += 1.0 / (m * h * h) + q * q * ai * ai / (2.0 * m);
            if let Some(j) = grid.neighbor(i, axis, true) {
                let aj = a.component(axis).values()[j].re;
                // −(1/2m)·second difference − (q/2m)(pA + Ap)
                let hop = C64::new(-0.5 / (m * h * h), q * (ai + aj) / (4.0 * m * h));
                t.push((i, j, hop));
                t.push((j, i, hop.conj()));
            }
        }
        t.push((i, i, C64::new(diag, 0.0)));
    }
    HermitianOperator::from_triplets(n, t, potential_diagonal(a0, q))
}

/// 1+1 dimensional Dirac operator `σ₁(p − qA) + σ₃m + qA⁰` on `[upper; lower]`.
pub fn dirac_from_parts(
    grid: &Grid,
    a0: &ScalarField,
    links: &[[f64; 2]],
    particle: Particle,
    wilson: Option<f64>,
) -> Result<HermitianOperator> {
    grid.ensure_dim(1)?;
    grid.ensure_same(a0.grid())?;
    if !particle.q.is_finite() || !particle.m.is_finite() || particle.m < 0.0 {
        return Err(Error::InvalidParameter("dirac mass must be finite and non-negative".into()));
    }
    let Particle { q, m } = particle;
    let n = grid.len();
    let h = grid.spacing()[0];
    let mut t = Vec::with_capacity(8 * n);
    let r = wilson.unwrap_or(0.0);
    for i in 0..n {
        t.push((i, i, C64::new(m + r / h, 0.0)));
        t.push((n + i, n + i, C64::new(-m - r / h, 0.0)));
        if let Some(j) = grid.neighbor(i, 0, true) {
            let w = link_phase(links[i][0], q);
            // covariant central momentum, forward and backward halves
            let p = C64::new(0.0, -0.5 / h) * w;
            for (row, col) in [(i, n + j), (n + i, j)] {
                t.push((row, col, p));
                t.push((col, row, p.conj()));
            }
            if r != 0.0 {
                let hop = w * (-0.5 * r / h);
                t.push((i, j, hop));
                t.push((j, i, hop.conj()));
                t.push((n + i, n + j, -hop));
                t.push((n + j, n + i, -hop.conj()));
            }
        }
    }
    let mut pot = potential_diagonal(a0, q);
    pot.extend_from_within(..);
    HermitianOperator::from_triplets(2 * n, t, pot)
}

fn check_built(op: HermitianOperator) -> Result<HermitianOperator> {
    if op.hermiticity_defect() > HERMITICITY_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "assembled operator is not Hermitian (defect {:e})",
            op.hermiticity_defect()
        )));
    }
    Ok(op)
}

/// Hamiltonian of `kind` with `A⁰` replaced by `a0`, vector coupling from `p`.
pub fn hamiltonian_with_scalar(
    p: &Potentials,
    a0: &ScalarField,
    t: f64,
    particle: Particle,
    kind: Kind,
    opts: BuildOptions,
) -> Result<HermitianOperator> {
    let grid = p.grid();
    let op = match (kind, opts.coupling) {
        (Kind::Schrodinger, Coupling::Peierls) => schrodinger_from_parts(grid, a0, &p.link_integrals(t), particle)?,
        (Kind::Schrodinger, Coupling::Symmetrized) => schrodinger_symmetrized(grid, a0, &p.a(t), particle)?,
        (Kind::Dirac, Coupling::Peierls) => dirac_from_parts(grid, a0, &p.link_integrals(t), particle, opts.wilson)?,
        (Kind::Dirac, Coupling::Symmetrized) => {
            return Err(Error::InvalidParameter("the Dirac operator only supports link coupling".into()))
        }
    };
    check_built(op)
}

pub fn hamiltonian(p: &Potentials, t: f64, particle: Particle, kind: Kind, opts: BuildOptions) -> Result<HermitianOperator> {
    hamiltonian_with_scalar(p, &p.a0(t), t, particle, kind, opts)
}

/// `(1/2m)(p − qA)² + qA⁰` with link coupling.
pub fn schrodinger_hamiltonian(p: &Potentials, t: f64, particle: Particle) -> Result<HermitianOperator> {
    hamiltonian(p, t, particle, Kind::Schrodinger, BuildOptions::default())
}

/// Naive 1+1 Dirac operator with link coupling.
pub fn dirac_hamiltonian_1p1(p: &Potentials, t: f64, particle: Particle, wilson: Option<f64>) -> Result<HermitianOperator> {
    p.grid().ensure_dim(1)?;
    hamiltonian(
        p,
        t,
        particle,
        Kind::Dirac,
        BuildOptions {
            coupling: Coupling::Peierls,
            wilson,
        },
    )
}

/// `H − q·diag(A⁰)`
pub fn yang_operator(p: &Potentials, t: f64, particle: Particle, kind: Kind, opts: BuildOptions) -> Result<HermitianOperator> {
    let h = hamiltonian(p, t, particle, kind, opts)?;
    let mut qa0 = potential_diagonal(&p.a0(t), particle.q);
    if kind == Kind::Dirac {
        qa0.extend_from_within(..);
    }
    let neg: Vec<f64> = qa0.iter().map(|v| -v).collect();
    h.with_added_potential(&neg)
}

/// Free kinetic operator on `grid`: the Hamiltonian of vacuum potentials.
pub fn free_operator(grid: &Grid, particle: Particle, kind: Kind, opts: BuildOptions) -> Result<HermitianOperator> {
    hamiltonian(&Potentials::vacuum(grid), 0.0, particle, kind, opts)
}

/// `H(A⁰_phys, A)` with the physical scalar potential from the Helmholtz split.
pub fn chen_energy_operator(p: &Potentials, t: f64, particle: Particle, kind: Kind, opts: BuildOptions) -> Result<HermitianOperator> {
    let (a0_phys, _) = helmholtz::chen_potentials(p, t)?;
    hamiltonian_with_scalar(p, &a0_phys, t, particle, kind, opts)
}

/// `exp(iqχ)` per site, repeated per spinor component when `components = 2`.
pub fn gauge_phases(chi: &crate::gauge::GaugeFunction, t: f64, q: f64, components: usize) -> Vec<C64> {
    let g = chi.grid();
    let base: Vec<C64> = (0..g.len())
        .map(|i| C64::from_polar(1.0, q * chi.value_at(g.coords(i), t)))
        .collect();
    let mut out = Vec::with_capacity(components * base.len());
    for _ in 0..components {
        out.extend_from_slice(&base);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{transform_potentials, GaugeFunction};
    use crate::grid::Boundary;
    use crate::models::{FourierSum, SoftCoulomb, SymmetricGauge};
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn momentum_symbol_on_plane_wave() {
        let g = Grid::line(32, 2.0 * PI, Boundary::Periodic).unwrap();
        let p = canonical_momentum(&g, 0).unwrap();
        let k = 3.0;
        let h = g.spacing()[0];
        let f = ScalarField::from_fn(&g, |r| C64::from_polar(1.0, k * r[0]));
        let pf = p.apply(f.values());
        for (a, b) in pf.iter().zip(f.values()) {
            assert!((a - b * ((k * h).sin() / h)).norm() < 1e-12);
        }
        assert!(p.hermiticity_defect() == 0.0);
    }

    #[test]
    fn dirichlet_builders_are_hermitian() {
        let g = Grid::square(9, 3.0, Boundary::Dirichlet).unwrap();
        let p = Potentials::vacuum(&g)
            .with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap()))
            .with_vector(Arc::new(SymmetricGauge(0.8)));
        for coupling in [Coupling::Peierls, Coupling::Symmetrized] {
            let h = hamiltonian(&p, 0.0, Particle::default(), Kind::Schrodinger, BuildOptions { coupling, wilson: None }).unwrap();
            assert!(h.hermiticity_defect() <= HERMITICITY_TOLERANCE);
        }
    }

    #[test]
    fn static_gauge_covariance_is_entrywise_exact() {
        let g = Grid::square(8, 3.0, Boundary::Periodic).unwrap();
        let p = Potentials::vacuum(&g)
            .with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap().periodized(&g)))
            .with_vector(Arc::new(crate::models::FourierVector::periodic_transverse(&g, 0.7).unwrap()));
        let chi = GaugeFunction::new(&g, Arc::new(FourierSum::random(&g, 3, 2, 1.0, 0.0, 4).unwrap())).unwrap();
        let q = Particle::new(1.3, 0.9).unwrap();
        let h = schrodinger_hamiltonian(&p, 0.0, q).unwrap();
        let h2 = schrodinger_hamiltonian(&transform_potentials(&p, &chi).unwrap(), 0.0, q).unwrap();
        let u = gauge_phases(&chi, 0.0, q.q, 1);
        assert!(h.conjugate_by_phases(&u).unwrap().max_entry_diff(&h2).unwrap() < 1e-12);
    }

    #[test]
    fn triplet_round_trip() {
        let g = Grid::line(8, 2.0, Boundary::Dirichlet).unwrap();
        let p = Potentials::vacuum(&g).with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap()));
        let h = dirac_hamiltonian_1p1(&p, 0.0, Particle::default(), Some(1.0)).unwrap();
        let mut buf = Vec::new();
        h.write_triplets(&mut buf).unwrap();
        let back = HermitianOperator::read_triplets(buf.as_slice()).unwrap();
        assert_eq!(back.max_entry_diff(&h).unwrap(), 0.0);
    }

    #[test]
    fn yang_operator_drops_potential_exactly() {
        let g = Grid::line(16, 8.0, Boundary::Dirichlet).unwrap();
        let p = Potentials::vacuum(&g).with_scalar(Arc::new(SoftCoulomb::new(1.0, 0.5).unwrap()));
        for kind in [Kind::Schrodinger, Kind::Dirac] {
            let y = yang_operator(&p, 0.0, Particle::default(), kind, BuildOptions::default()).unwrap();
            let f = free_operator(&g, Particle::default(), kind, BuildOptions::default()).unwrap();
            assert_eq!(y.max_entry_diff(&f).unwrap(), 0.0);
        }
    }
}
