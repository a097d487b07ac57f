//! Single-exciton quantum dynamics with dephasing in one dimension: the
//! two-point correlation matrix, the exact variance law, and the weak-dephasing
//! spectral problem split into momentum sectors.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};
use num_complex::Complex64;

use crate::classical::linear_fit;
use crate::error::{Error, Result};
use crate::io::{fmt_f64, write_row};
use crate::linalg::{self, CMatrix};
use crate::model::{hopping_amplitude, min_image, Boundary, ModelParams};
use crate::ode::{integrate, OdeOptions};

/// |Im E| at or below this classifies an eigenvalue as real.
pub const REAL_BRANCH_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn require_chain(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if params.d != 1 {
        return Err(Error::params("quantum dynamics is implemented for d = 1 only"));
    }
    Ok(())
}

fn require_odd_ring(params: &ModelParams) -> Result<()> {
    require_chain(params)?;
    if params.bc != Boundary::Periodic {
        return Err(Error::params("momentum sectors need periodic bc"));
    }
    if params.n % 2 == 0 {
        return Err(Error::params(format!(
            "N = {} is even; even rings have degenerate unperturbed spectra, use odd N",
            params.n
        )));
    }
    Ok(())
}

/// Real symmetric single-particle Hamiltonian, row-major.
pub fn hamiltonian(params: &ModelParams) -> Result<Vec<f64>> {
    require_chain(params)?;
    let n = params.n;
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                h[i * n + j] = hopping_amplitude(params, &[j as i64 - i as i64])?;
            }
        }
    }
    Ok(h)
}

/// Site displacement from `origin` (minimum image on the ring).
fn offset(params: &ModelParams, origin: usize, site: usize) -> i64 {
    let delta = site as i64 - origin as i64;
    match params.bc {
        Boundary::Periodic => min_image(delta, params.n),
        Boundary::Open => delta,
    }
}

/// G_{jm} = ⟨c_j† c_m⟩ for one exciton on a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub t: f64,
    pub n: usize,
    /// Row-major N×N.
    pub g: Vec<Complex64>,
    pub bc: Boundary,
    /// Site used as the origin for displacements.
    pub origin: usize,
}

impl CorrelationMatrix {
    /// Exciton localized on the center site.
    pub fn centered(params: &ModelParams) -> Result<Self> {
        require_chain(params)?;
        let n = params.n;
        let origin = n / 2;
        let mut g = vec![ZERO; n * n];
        g[origin * n + origin] = Complex64::new(1.0, 0.0);
        Ok(CorrelationMatrix {
            t: 0.0,
            n,
            g,
            bc: params.bc,
            origin,
        })
    }

    pub fn get(&self, j: usize, m: usize) -> Complex64 {
        self.g[j * self.n + m]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|j| self.get(j, j).re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.get(j, j).re).collect()
    }

    /// max |G - G†|
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for j in 0..self.n {
            for m in j..self.n {
                err = err.max((self.get(j, m) - self.get(m, j).conj()).norm());
            }
        }
        err
    }

    /// Largest |G_jm| with j ≠ m.
    pub fn max_coherence(&self) -> f64 {
        let mut c: f64 = 0.0;
        for j in 0..self.n {
            for m in 0..self.n {
                if j != m {
                    c = c.max(self.get(j, m).norm());
                }
            }
        }
        c
    }

    /// Σ (x_j - mean)² G_jj with x measured from the origin.
    pub fn variance(&self, params: &ModelParams) -> f64 {
        let diag = self.diagonal();
        let total: f64 = diag.iter().sum();
        let xs: Vec<f64> = (0..self.n).map(|j| offset(params, self.origin, j) as f64).collect();
        let mean = xs.iter().zip(&diag).map(|(x, p)| x * p).sum::<f64>() / total;
        xs.iter()
            .zip(&diag)
            .map(|(x, p)| (x - mean).powi(2) * p)
            .sum::<f64>()
            / total
    }

    fn check(&self, trace0: f64) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::Invariant(format!("|G - G†| = {herm:e} at t = {}", self.t)));
        }
        let tr = self.trace();
        if (tr - trace0).abs() > 1e-9 * trace0.abs().max(1.0) {
            return Err(Error::Invariant(format!("trace {tr} drifted from {trace0} at t = {}", self.t)));
        }
        if let Some(j) = (0..self.n).find(|&j| !(self.get(j, j).re >= -1e-12)) {
            return Err(Error::Invariant(format!(
                "population {} at site {j}, t = {}",
                self.get(j, j).re,
                self.t
            )));
        }
        Ok(())
    }
}

/// Ġ = i[h, G] - γ(G - diag G) (h real symmetric), integrated on the split
/// real/imaginary state.
pub fn propagate_g(
    g0: &CorrelationMatrix,
    params: &ModelParams,
    t_grid: &[f64],
) -> Result<Vec<CorrelationMatrix>> {
    let opts = OdeOptions {
        rtol: 1e-11,
        atol: 1e-14,
        ..OdeOptions::default()
    };
    propagate_g_with(g0, params, t_grid, &opts)
}

pub fn propagate_g_with(
    g0: &CorrelationMatrix,
    params: &ModelParams,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<CorrelationMatrix>> {
    require_chain(params)?;
    let n = params.n;
    if g0.n != n {
        return Err(Error::params("G0 size differs from N"));
    }
    if g0.hermiticity_error() > 1e-10 {
        return Err(Error::domain("G0 is not Hermitian"));
    }
    let gamma = params.gamma;
    let h = DMatrix::from_row_slice(n, n, &hamiltonian(params)?);
    let n2 = n * n;
    // column-major A | B with G = A + iB
    let mut y0 = vec![0.0; 2 * n2];
    for j in 0..n {
        for m in 0..n {
            let z = g0.get(j, m);
            y0[m * n + j] = z.re;
            y0[n2 + m * n + j] = z.im;
        }
    }
    let mut scratch = DMatrix::<f64>::zeros(n, n);
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
        let (ya, yb) = y.split_at(n2);
        let a = DMatrixView::from_slice(ya, n, n);
        let b = DMatrixView::from_slice(yb, n, n);
        let (da, db) = dy.split_at_mut(n2);
        let mut da = DMatrixViewMut::from_slice(da, n, n);
        let mut db = DMatrixViewMut::from_slice(db, n, n);
        // Ȧ = -(hB - Bh), Ḃ = hA - Ah
        scratch.gemm(1.0, &h, &b, 0.0);
        scratch.gemm(-1.0, &b, &h, 1.0);
        da.copy_from(&scratch);
        da.neg_mut();
        scratch.gemm(1.0, &h, &a, 0.0);
        scratch.gemm(-1.0, &a, &h, 1.0);
        db.copy_from(&scratch);
        if gamma != 0.0 {
            for m in 0..n {
                for j in 0..n {
                    if j != m {
                        da[(j, m)] -= gamma * a[(j, m)];
                        db[(j, m)] -= gamma * b[(j, m)];
                    }
                }
            }
        }
    };
    let trace0 = g0.trace();
    let mut out = Vec::with_capacity(t_grid.len());
    integrate(rhs, &y0, g0.t, t_grid, opts, |t, y| {
        let mut g = vec![ZERO; n2];
        for j in 0..n {
            for m in 0..n {
                g[j * n + m] = Complex64::new(y[m * n + j], y[n2 + m * n + j]);
            }
        }
        let cm = CorrelationMatrix {
            t,
            n,
            g,
            bc: g0.bc,
            origin: g0.origin,
        };
        cm.check(trace0)?;
        out.push(cm);
        Ok(())
    })?;
    Ok(out)
}

/// Σ_r r² H_r² over the finite lattice, from the center site.
pub fn second_moment_hopping(params: &ModelParams) -> Result<f64> {
    require_chain(params)?;
    let origin = params.n / 2;
    let mut s = 0.0;
    for site in 0..params.n {
        if site == origin {
            continue;
        }
        let r = offset(params, origin, site);
        let hr = hopping_amplitude(params, &[site as i64 - origin as i64])?;
        s += (r * r) as f64 * hr * hr;
    }
    Ok(s)
}

/// 2S/γ² (γt + e^{-γt} - 1) with S = Σ_r r² H_r²; S t² at γ = 0.
pub fn variance_closed_form(params: &ModelParams, t: f64) -> Result<f64> {
    let s = second_moment_hopping(params)?;
    let g = params.gamma;
    if g == 0.0 {
        return Ok(s * t * t);
    }
    let x = g * t;
    // γt + e^{-γt} - 1 loses digits for small γt
    let f = if x < 1e-3 {
        x * x / 2.0 - x * x * x / 6.0 + x.powi(4) / 24.0
    } else {
        x + (-x).exp_m1()
    };
    Ok(2.0 * s / (g * g) * f)
}

/// Momentum q_k = 2πk/N.
pub fn momentum(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

fn momentum_index(q: f64, n: usize) -> Result<usize> {
    let x = q * n as f64 / (2.0 * PI);
    let k = x.round();
    if (x - k).abs() > 1e-9 {
        return Err(Error::domain(format!("q = {q} is not on the 2πk/N grid")));
    }
    Ok(k.rem_euclid(n as f64) as usize)
}

/// Ring amplitude h(r) for r = 0..N-1 (h(0) = 0).
fn ring_row(params: &ModelParams) -> Result<Vec<f64>> {
    let mut h = vec![0.0; params.n];
    for (r, v) in h.iter_mut().enumerate().skip(1) {
        *v = hopping_amplitude(params, &[r as i64])?;
    }
    Ok(h)
}

/// (C_q)_{p,c} = i[1 - e^{iq(p-c)}] h_{p,c}.
pub fn build_circulant(q: f64, params: &ModelParams) -> Result<CMatrix> {
    require_odd_ring(params)?;
    let n = params.n;
    let k = momentum_index(q, n)?;
    let h = ring_row(params)?;
    let f: Vec<Complex64> = (0..n)
        .map(|r| {
            let phase = Complex64::from_polar(1.0, momentum((k * r) % n, n));
            Complex64::i() * (Complex64::new(1.0, 0.0) - phase) * h[r]
        })
        .collect();
    Ok(CMatrix::from_fn(n, |p, c| f[(p + n - c) % n]))
}

/// C_q + γX with X = diag(1 - δ_{0m}); a sector evolves as ȧ = -(C_q + γX) a.
pub fn sector_matrix(q: f64, params: &ModelParams) -> Result<CMatrix> {
    let mut m = build_circulant(q, params)?;
    for c in 1..params.n {
        m[(c, c)] += params.gamma;
    }
    Ok(m)
}

/// E⁰_{q,k} = Σ_m (C_q)_{0,m} e^{imk}, k = 0..N-1.
pub fn unperturbed_spectrum(q: f64, params: &ModelParams) -> Result<Vec<Complex64>> {
    require_odd_ring(params)?;
    let n = params.n;
    let kq = momentum_index(q, n)?;
    let h = ring_row(params)?;
    let row: Vec<Complex64> = (0..n)
        .map(|m| {
            // (C_q)_{0,m} = f(-m)
            let r = (n - m) % n;
            let phase = Complex64::from_polar(1.0, momentum((kq * r) % n, n));
            Complex64::i() * (Complex64::new(1.0, 0.0) - phase) * h[r]
        })
        .collect();
    Ok((0..n)
        .map(|k| {
            row.iter()
                .enumerate()
                .map(|(m, c)| c * Complex64::from_polar(1.0, momentum((m * k) % n, n)))
                .sum()
        })
        .collect())
}

/// First-order shift δ⁽¹⁾ = (N-1)/N.
pub fn first_order_shift(n: usize) -> f64 {
    (n as f64 - 1.0) / n as f64
}

fn unperturbed_checked(q: f64, params: &ModelParams) -> Result<Vec<Complex64>> {
    let e0 = unperturbed_spectrum(q, params)?;
    for k in 0..e0.len() {
        for p in k + 1..e0.len() {
            let gap = (e0[k] - e0[p]).norm();
            if gap < 1e-8 {
                return Err(Error::Degenerate(format!(
                    "unperturbed levels {k} and {p} at q = {q} differ by {gap:e}"
                )));
            }
        }
    }
    Ok(e0)
}

/// E_{q,k} to the requested order in γ (0..=3).
///
/// At q = 0 the circulant vanishes and γX is already diagonal, so the exact
/// spectrum {0, γ, ..., γ} is returned.
pub fn perturbative_spectrum(q: f64, params: &ModelParams, order: u32) -> Result<Vec<Complex64>> {
    if order > 3 {
        return Err(Error::params("perturbation order must be at most 3"));
    }
    require_odd_ring(params)?;
    let n = params.n;
    let g = params.gamma;
    if momentum_index(q, n)? == 0 {
        let mut e = vec![Complex64::new(if order == 0 { 0.0 } else { g }, 0.0); n];
        e[0] = ZERO;
        return Ok(e);
    }
    let e0 = if order >= 2 {
        unperturbed_checked(q, params)?
    } else {
        unperturbed_spectrum(q, params)?
    };
    let nf = n as f64;
    Ok((0..n)
        .map(|k| {
            let mut e = e0[k];
            if order >= 1 {
                e += g * first_order_shift(n);
            }
            if order >= 2 {
                let (mut s1, mut s2) = (ZERO, ZERO);
                for p in (0..n).filter(|&p| p != k) {
                    let inv = (e0[k] - e0[p]).inv();
                    s1 += inv;
                    s2 += inv * inv;
                }
                e += s1 * (g * g / (nf * nf));
                if order >= 3 {
                    e += (s2 - s1 * s1) * (g * g * g / (nf * nf * nf));
                }
            }
            e
        })
        .collect())
}

/// First-order eigenvector of C_q + γX for level k, in the site basis:
/// u_k - (γ/N) Σ_{p≠k} u_p / (E⁰_k - E⁰_p) with u_k(c) = e^{ick}/√N.
pub fn perturbative_eigenvector(q: f64, k: usize, params: &ModelParams) -> Result<Vec<Complex64>> {
    let e0 = unperturbed_checked(q, params)?;
    let n = params.n;
    if k >= n {
        return Err(Error::domain("level index out of range"));
    }
    let norm = 1.0 / (n as f64).sqrt();
    let u = |p: usize, c: usize| Complex64::from_polar(norm, momentum((p * c) % n, n));
    let mut v: Vec<Complex64> = (0..n).map(|c| u(k, c)).collect();
    let g = params.gamma / n as f64;
    for p in (0..n).filter(|&p| p != k) {
        let w = -g / (e0[k] - e0[p]);
        for (c, vc) in v.iter_mut().enumerate() {
            *vc += w * u(p, c);
        }
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Real,
    Complex,
}

impl Branch {
    pub fn classify(e: Complex64) -> Self {
        if e.im.abs() <= REAL_BRANCH_TOL {
            Branch::Real
        } else {
            Branch::Complex
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Real => "real",
            Branch::Complex => "complex",
        }
    }
}

/// Spectrum of one momentum sector, ordered by (Re E, Im E).
#[derive(Clone, Debug)]
pub struct SpectralSet {
    pub q_index: usize,
    pub q: f64,
    pub eigenvalues: Vec<Complex64>,
    pub branches: Vec<Branch>,
    /// Columns are unit-norm right eigenvectors (same order as `eigenvalues`).
    pub eigenvectors: Option<CMatrix>,
    pub inverse: Option<CMatrix>,
    pub condition: Option<f64>,
}

impl SpectralSet {
    pub fn compute(q_index: usize, params: &ModelParams, with_vectors: bool) -> Result<Self> {
        let n = params.n;
        let q = momentum(q_index % n, n);
        let m = sector_matrix(q, params)?;
        let tag = |e: Error| match e {
            Error::Spectral(msg) => Error::Spectral(format!("q index {q_index}: {msg}")),
            other => other,
        };
        let (values, vecs) = if with_vectors {
            let e = linalg::eigen(&m).map_err(tag)?;
            (e.values.clone(), Some(e))
        } else {
            (linalg::eigenvalues(&m).map_err(tag)?, None)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (values[a].re, values[a].im)
                .partial_cmp(&(values[b].re, values[b].im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let eigenvalues: Vec<Complex64> = order.iter().map(|&k| values[k]).collect();
        let branches = eigenvalues.iter().map(|&e| Branch::classify(e)).collect();
        let (eigenvectors, inverse, condition) = match vecs {
            Some(e) => {
                let v = CMatrix::from_fn(n, |i, j| e.vectors[(i, order[j])]);
                let w = CMatrix::from_fn(n, |i, j| e.inverse[(order[i], j)]);
                (Some(v), Some(w), Some(e.condition))
            }
            None => (None, None, None),
        };
        Ok(SpectralSet {
            q_index,
            q,
            eigenvalues,
            branches,
            eigenvectors,
            inverse,
            condition,
        })
    }

    /// Smallest real part among real-branch eigenvalues.
    pub fn slowest_real(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.branches)
            .filter(|(_, b)| **b == Branch::Real)
            .map(|(e, _)| e.re)
            .reduce(f64::min)
    }

    pub fn slowest_complex(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.branches)
            .filter(|(_, b)| **b == Branch::Complex)
            .map(|(e, _)| e.re)
            .reduce(f64::min)
    }
}

/// Slow part of the weak-dephasing spectrum at one N.
#[derive(Clone, Debug)]
pub struct SlowModes {
    pub n: usize,
    pub gamma: f64,
    pub sets: Vec<SpectralSet>,
    /// Slowest real-branch eigenvalue of each sector q ≠ 0 (N - 1 values, q index 1..N-1).
    pub slow_real: Vec<f64>,
    /// min over q ≠ 0 of `slow_real`
    pub real_gap: f64,
    /// min Re E over the complex branch
    pub complex_min: f64,
}

/// Dense diagonalization of every sector.
///
/// Sectors q and -q are related by the reflection c → -c, so only
/// q index 0..=(N-1)/2 is diagonalized and the rest are mirrored.
pub fn slow_modes(params: &ModelParams) -> Result<SlowModes> {
    require_odd_ring(params)?;
    let n = params.n;
    let half = (n - 1) / 2;
    let mut sets = Vec::with_capacity(n);
    for k in 0..=half {
        sets.push(SpectralSet::compute(k, params, false)?);
    }
    for k in half + 1..n {
        let mut s = sets[n - k].clone();
        s.q_index = k;
        s.q = momentum(k, n);
        sets.push(s);
    }
    let mut slow_real = Vec::with_capacity(n - 1);
    for s in &sets[1..] {
        slow_real.push(s.slowest_real().ok_or_else(|| {
            Error::Spectral(format!("q index {} has no real-branch eigenvalue", s.q_index))
        })?);
    }
    let real_gap = slow_real.iter().copied().fold(f64::INFINITY, f64::min);
    let complex_min = sets
        .iter()
        .filter_map(SpectralSet::slowest_complex)
        .fold(f64::INFINITY, f64::min);
    Ok(SlowModes {
        n,
        gamma: params.gamma,
        sets,
        slow_real,
        real_gap,
        complex_min,
    })
}

/// Power law gap ≈ prefactor · N^exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct GapScaling {
    pub ns: Vec<usize>,
    pub gaps: Vec<f64>,
    pub exponent: f64,
    pub prefactor: f64,
}

/// Fit of log(gap) vs log N over the given sizes.
pub fn fit_gap_scaling(ns: &[usize], gaps: &[f64]) -> Result<GapScaling> {
    if ns.len() != gaps.len() {
        return Err(Error::Fit("sizes and gaps differ in length".into()));
    }
    if gaps.iter().any(|&g| !(g > 0.0)) {
        return Err(Error::Fit("non-positive gap".into()));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let (exponent, intercept) = linear_fit(&xs, &ys)?;
    Ok(GapScaling {
        ns: ns.to_vec(),
        gaps: gaps.to_vec(),
        exponent,
        prefactor: intercept.exp(),
    })
}

/// Real-branch gap for each N (template `params` with N replaced) and its
/// power-law fit over the largest three sizes.
pub fn slow_gap_scaling(params: &ModelParams, ns: &[usize]) -> Result<GapScaling> {
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    let mut gaps = Vec::with_capacity(sorted.len());
    for &n in &sorted {
        let p = ModelParams { n, ..*params };
        gaps.push(slow_modes(&p)?.real_gap);
    }
    let start = sorted.len().saturating_sub(3);
    let mut fit = fit_gap_scaling(&sorted[start..], &gaps[start..])?;
    fit.ns = sorted;
    fit.gaps = gaps;
    Ok(fit)
}

/// Eigen-data of all sectors for reconstructing G(t).
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    n: usize,
    sets: Vec<SpectralSet>,
    /// Worst eigenbasis condition estimate over the sectors.
    pub condition: f64,
}

/// Eigenbases worse than this are refused.
pub const MAX_CONDITION: f64 = 1e10;

impl SpectralPropagator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        require_odd_ring(params)?;
        let n = params.n;
        let mut sets = Vec::with_capacity(n);
        let mut condition: f64 = 1.0;
        for k in 0..n {
            let s = SpectralSet::compute(k, params, true)?;
            condition = condition.max(s.condition.unwrap_or(f64::INFINITY));
            sets.push(s);
        }
        if !(condition <= MAX_CONDITION) {
            return Err(Error::Conditioning { cond: condition });
        }
        Ok(SpectralPropagator { n, sets, condition })
    }

    /// G_{j,j+c}(t) = Σ_q e^{iqj} a^{(q)}_c(t), a^{(q)}(t) = V e^{-Et} V⁻¹ a^{(q)}(0).
    pub fn propagate(&self, g0: &CorrelationMatrix, t: f64) -> Result<CorrelationMatrix> {
        let n = self.n;
        if g0.n != n {
            return Err(Error::params("G0 size differs from N"));
        }
        let dt = t - g0.t;
        let mut g = vec![ZERO; n * n];
        for s in &self.sets {
            let k = s.q_index;
            let a0: Vec<Complex64> = (0..n)
                .map(|c| {
                    (0..n)
                        .map(|j| {
                            Complex64::from_polar(1.0, -momentum((k * j) % n, n)) * g0.get(j, (j + c) % n)
                        })
                        .sum::<Complex64>()
                        / n as f64
                })
                .collect();
            let (v, w) = (s.eigenvectors.as_ref().unwrap(), s.inverse.as_ref().unwrap());
            let mut b = w.matvec(&a0);
            for (bk, e) in b.iter_mut().zip(&s.eigenvalues) {
                *bk *= (-e * dt).exp();
            }
            let a = v.matvec(&b);
            for j in 0..n {
                let phase = Complex64::from_polar(1.0, momentum((k * j) % n, n));
                for (c, ac) in a.iter().enumerate() {
                    g[j * n + (j + c) % n] += phase * ac;
                }
            }
        }
        Ok(CorrelationMatrix {
            t,
            n,
            g,
            bc: g0.bc,
            origin: g0.origin,
        })
    }
}

/// One-shot spectral reconstruction of G(t).
pub fn spectral_propagate_g(g0: &CorrelationMatrix, params: &ModelParams, t: f64) -> Result<CorrelationMatrix> {
    SpectralPropagator::new(params)?.propagate(g0, t)
}

/// CSV with columns `q_index, k_index, re_E, im_E, branch`.
pub fn write_spectrum_csv(w: &mut impl Write, sets: &[SpectralSet]) -> Result<()> {
    write_row(
        w,
        &["q_index", "k_index", "re_E", "im_E", "branch"].map(String::from),
    )?;
    for s in sets {
        for (k, (e, b)) in s.eigenvalues.iter().zip(&s.branches).enumerate() {
            write_row(
                w,
                &[
                    s.q_index.to_string(),
                    k.to_string(),
                    fmt_f64(e.re),
                    fmt_f64(e.im),
                    b.as_str().to_string(),
                ],
            )?;
        }
    }
    Ok(())
}
