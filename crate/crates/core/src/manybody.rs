//! Symmetric exclusion process with power-law jumps on an open chain:
//! kinetic Monte Carlo, the exact linear occupation dynamics, domain-wall
//! relaxation and the fractional-diffusion reference.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classical::{cme_integrate_with, linear_fit, DensityProfile};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, write_row};
use crate::model::{Boundary, ModelParams, RateKernel};
use crate::ode::OdeOptions;
use crate::quad;

/// Lower and upper χ²/N bounds of the exponential tail fit.
pub const FIT_WINDOW: (f64, f64) = (1e-6, 1e-2);

fn require_open_chain(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if params.d != 1 || params.bc != Boundary::Open {
        return Err(Error::params("the exclusion process runs on an open chain (d = 1, open bc)"));
    }
    Ok(())
}

fn require_domain_wall(params: &ModelParams) -> Result<()> {
    require_open_chain(params)?;
    if params.n % 2 != 0 {
        return Err(Error::params("the domain wall needs even N"));
    }
    Ok(())
}

/// Site label j ∈ [-N/2, N/2) of storage index `i`.
pub fn site_label(i: usize, n: usize) -> i64 {
    i as i64 - (n / 2) as i64
}

/// Continuum coordinate x_j = j + N/2 + 1/2 ∈ (0, N) of storage index `i`.
pub fn site_position(i: usize) -> f64 {
    i as f64 + 0.5
}

/// Occupation bits of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    bits: Vec<u64>,
    n: usize,
    count: usize,
}

impl SpinConfiguration {
    pub fn empty(n: usize) -> Self {
        SpinConfiguration {
            bits: vec![0; n.div_ceil(64)],
            n,
            count: 0,
        }
    }

    /// Left half occupied: n_j = 1 for j < 0.
    pub fn domain_wall(n: usize) -> Self {
        let mut c = Self::empty(n);
        for i in 0..n / 2 {
            c.set(i, true);
        }
        c
    }

    pub fn from_occupations(occ: &[bool]) -> Self {
        let mut c = Self::empty(occ.len());
        for (i, &o) in occ.iter().enumerate() {
            c.set(i, o);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn occupied(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.occupied(i) != value {
            self.bits[i / 64] ^= 1 << (i % 64);
            if value {
                self.count += 1;
            } else {
                self.count -= 1;
            }
        }
    }

    /// Moves the particle at `from` to the empty site `to`.
    pub fn exchange(&mut self, from: usize, to: usize) -> Result<()> {
        if !self.occupied(from) || self.occupied(to) {
            return Err(Error::domain(format!("no particle-hole pair at ({from}, {to})")));
        }
        self.set(from, false);
        self.set(to, true);
        Ok(())
    }

    pub fn occupations(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.occupied(i)).collect()
    }
}

/// Binary indexed tree over non-negative weights.
struct Fenwick {
    tree: Vec<f64>,
    values: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0.0; n + 1],
            values: vec![0.0; n],
        }
    }

    fn set(&mut self, i: usize, v: f64) {
        let delta = v - self.values[i];
        self.values[i] = v;
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] += delta;
            k += k & k.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        let mut k = self.tree.len() - 1;
        let mut s = 0.0;
        while k > 0 {
            s += self.tree[k];
            k &= k - 1;
        }
        s
    }

    /// Index i with prefix(i) ≤ u < prefix(i + 1), skipping zero weights.
    fn find(&self, mut u: f64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= u {
                u -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        // rounding can land on an empty slot; walk to the nearest weighted one
        let mut i = pos.min(n - 1);
        while self.values[i] == 0.0 && i > 0 {
            i -= 1;
        }
        while self.values[i] == 0.0 && i + 1 < n {
            i += 1;
        }
        i
    }
}

/// Jump sampler for an open chain: rates κ r^{-2α} to every other site.
struct JumpTable {
    n: usize,
    kappa: f64,
    /// cum[m] = Σ_{r=1}^{m} r^{-2α}
    cum: Vec<f64>,
}

impl JumpTable {
    fn new(params: &ModelParams) -> Result<Self> {
        let kappa = params.kappa()?;
        let mut cum = vec![0.0; params.n];
        for r in 1..params.n {
            cum[r] = cum[r - 1] + (r as f64).powf(-2.0 * params.alpha);
        }
        Ok(JumpTable {
            n: params.n,
            kappa,
            cum,
        })
    }

    fn escape(&self, i: usize) -> f64 {
        self.kappa * (self.cum[i] + self.cum[self.n - 1 - i])
    }

    /// Target of a jump from `i` given u uniform in [0, 1).
    fn target(&self, i: usize, u: f64) -> usize {
        let left = self.cum[i];
        let right = self.cum[self.n - 1 - i];
        let x = u * (left + right);
        let (limit, x, to_left) = if x < left {
            (i, x, true)
        } else {
            (self.n - 1 - i, x - left, false)
        };
        // smallest r ≥ 1 with cum[r] > x
        let r = self.cum[1..=limit].partition_point(|&c| c <= x) + 1;
        let r = r.min(limit);
        if to_left {
            i - r
        } else {
            i + r
        }
    }
}

/// One continuous-time trajectory sampled at `times` (ascending, ≥ 0).
pub fn kmc_trajectory(
    config0: &SpinConfiguration,
    params: &ModelParams,
    times: &[f64],
    rng: &mut impl Rng,
) -> Result<Vec<SpinConfiguration>> {
    require_open_chain(params)?;
    if config0.len() != params.n {
        return Err(Error::params("configuration length differs from N"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::params("sampling times must be ascending and non-negative"));
    }
    let table = JumpTable::new(params)?;
    let n = params.n;
    let mut config = config0.clone();
    let mut tree = Fenwick::new(n);
    for i in 0..n {
        if config.occupied(i) {
            tree.set(i, table.escape(i));
        }
    }
    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    let mut next = 0;
    loop {
        let total = tree.total();
        let dt = if total > 0.0 {
            -(1.0 - rng.random::<f64>()).ln() / total
        } else {
            f64::INFINITY
        };
        while next < times.len() && times[next] < t + dt {
            out.push(config.clone());
            next += 1;
        }
        if next == times.len() {
            return Ok(out);
        }
        t += dt;
        let from = tree.find(rng.random::<f64>() * total);
        let to = table.target(from, rng.random::<f64>());
        if !config.occupied(to) {
            config.exchange(from, to)?;
            tree.set(from, 0.0);
            tree.set(to, table.escape(to));
        }
    }
}

/// Ensemble mean occupation and its standard error at each sampling time.
#[derive(Clone, Debug, PartialEq)]
pub struct KmcEnsemble {
    pub times: Vec<f64>,
    pub n_traj: usize,
    /// Number of trajectories with site i occupied, per time.
    pub counts: Vec<Vec<u64>>,
}

impl KmcEnsemble {
    pub fn mean(&self, time_index: usize) -> Vec<f64> {
        let m = self.n_traj as f64;
        self.counts[time_index].iter().map(|&c| c as f64 / m).collect()
    }

    /// Standard error of the mean from the Bernoulli sample variance.
    pub fn stderr(&self, time_index: usize) -> Vec<f64> {
        let m = self.n_traj as f64;
        self.counts[time_index]
            .iter()
            .map(|&c| {
                if self.n_traj < 2 {
                    return 0.0;
                }
                let c = c as f64;
                let var = (c - c * c / m) / (m - 1.0);
                (var / m).sqrt()
            })
            .collect()
    }
}

/// `n_traj` independent trajectories; trajectory k draws from ChaCha8 seeded
/// with `seed` on stream k, so results do not depend on scheduling.
pub fn kmc_simulate(
    config0: &SpinConfiguration,
    params: &ModelParams,
    times: &[f64],
    n_traj: usize,
    seed: u64,
) -> Result<KmcEnsemble> {
    require_open_chain(params)?;
    if n_traj == 0 {
        return Err(Error::params("need at least one trajectory"));
    }
    let n = params.n;
    let zero = || vec![vec![0u64; n]; times.len()];
    let counts = (0..n_traj as u64)
        .into_par_iter()
        .map(|k| -> Result<Vec<Vec<u64>>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let traj = kmc_trajectory(config0, params, times, &mut rng)?;
            let mut c = zero();
            for (row, conf) in c.iter_mut().zip(&traj) {
                for (i, slot) in row.iter_mut().enumerate() {
                    *slot = conf.occupied(i) as u64;
                }
            }
            Ok(c)
        })
        .try_reduce(zero, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(&b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            Ok(a)
        })?;
    Ok(KmcEnsemble {
        times: times.to_vec(),
        n_traj,
        counts,
    })
}

/// CSV with columns `t, j, n_mean, n_stderr`.
pub fn write_ensemble_csv(w: &mut impl Write, ens: &KmcEnsemble) -> Result<()> {
    write_row(w, &["t", "j", "n_mean", "n_stderr"].map(String::from))?;
    for (ti, &t) in ens.times.iter().enumerate() {
        let (mean, err) = (ens.mean(ti), ens.stderr(ti));
        let n = mean.len();
        for i in 0..n {
            write_row(
                w,
                &[fmt_f64(t), site_label(i, n).to_string(), fmt_f64(mean[i]), fmt_f64(err[i])],
            )?;
        }
    }
    Ok(())
}

/// Occupations n_i(t) on the storage index, one row per time.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupationTrajectory {
    pub times: Vec<f64>,
    pub n: Vec<Vec<f64>>,
}

/// Exact propagator of ṅ = L n through the symmetric eigendecomposition of L.
pub struct OccupationSolver {
    vectors: DMatrix<f64>,
    rates: DVector<f64>,
    /// Uᵀ (n(0) - 1/2)
    coeffs: DVector<f64>,
    initial: Vec<f64>,
}

impl OccupationSolver {
    /// Domain-wall start.
    pub fn new(params: &ModelParams) -> Result<Self> {
        require_domain_wall(params)?;
        let kernel = RateKernel::new(params)?;
        let n = params.n;
        let l = DMatrix::from_row_slice(n, n, &kernel.dense_generator());
        let eig = SymmetricEigen::new(l);
        let dev = DVector::from_fn(n, |i, _| if i < n / 2 { 0.5 } else { -0.5 });
        let coeffs = eig.eigenvectors.tr_mul(&dev);
        Ok(OccupationSolver {
            vectors: eig.eigenvectors,
            rates: eig.eigenvalues,
            coeffs,
            initial: dev.iter().copied().collect(),
        })
    }

    /// n(t) - 1/2
    pub fn deviation(&self, t: f64) -> Vec<f64> {
        if t == 0.0 {
            return self.initial.clone();
        }
        let damped = DVector::from_fn(self.coeffs.len(), |k, _| self.coeffs[k] * (self.rates[k] * t).exp());
        (&self.vectors * damped).iter().copied().collect()
    }

    pub fn occupations(&self, t: f64) -> Vec<f64> {
        self.deviation(t).iter().map(|x| x + 0.5).collect()
    }

    /// χ²/N = Σ (n - 1/2)² / (N/2), evaluated on the deviation directly.
    pub fn chi_squared(&self, t: f64) -> f64 {
        let dev = self.deviation(t);
        dev.iter().map(|x| x * x).sum::<f64>() / (dev.len() as f64 / 2.0)
    }

    /// Slowest decay rate carried by the domain wall.
    pub fn slowest_rate(&self) -> f64 {
        let scale = self.coeffs.amax();
        self.rates
            .iter()
            .zip(self.coeffs.iter())
            .filter(|(r, c)| **r < -1e-12 * self.rates.amax() && c.abs() > 1e-12 * scale)
            .map(|(r, _)| -r)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Domain-wall occupations at `times` from the exact propagator.
pub fn occupation_evolution(params: &ModelParams, times: &[f64]) -> Result<OccupationTrajectory> {
    let solver = OccupationSolver::new(params)?;
    let n = times.iter().map(|&t| solver.occupations(t)).collect();
    Ok(OccupationTrajectory {
        times: times.to_vec(),
        n,
    })
}

/// Same trajectory through the adaptive integrator shared with the CME.
pub fn occupation_evolution_ode(params: &ModelParams, times: &[f64]) -> Result<OccupationTrajectory> {
    require_domain_wall(params)?;
    let kernel = RateKernel::new(params)?;
    let n = params.n;
    let n0 = DensityProfile {
        t: 0.0,
        values: (0..n).map(|i| if i < n / 2 { 1.0 } else { 0.0 }).collect(),
        lattice: params.lattice(),
        origin: n / 2,
    };
    let opts = OdeOptions {
        rtol: 1e-11,
        atol: 1e-14,
        ..OdeOptions::default()
    };
    let traj = cme_integrate_with(&n0, &kernel, times, &opts)?;
    Ok(OccupationTrajectory {
        times: times.to_vec(),
        n: traj.into_iter().map(|p| p.values).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryCheck {
    pub ok: bool,
    pub max_violation: f64,
    /// Site label j of the worst |n_j + n_{-1-j} - 1|.
    pub worst_site: i64,
    pub worst_time: f64,
}

/// n_j + n_{-1-j} = 1 to 1e-8 at every output time.
pub fn particle_hole_symmetry_check(traj: &OccupationTrajectory) -> SymmetryCheck {
    let mut check = SymmetryCheck {
        ok: true,
        max_violation: 0.0,
        worst_site: 0,
        worst_time: traj.times.first().copied().unwrap_or(0.0),
    };
    for (t, row) in traj.times.iter().zip(&traj.n) {
        let n = row.len();
        for i in 0..n / 2 {
            let v = (row[i] + row[n - 1 - i] - 1.0).abs();
            if v > check.max_violation {
                check.max_violation = v;
                check.worst_site = site_label(i, n);
                check.worst_time = *t;
            }
        }
    }
    check.ok = check.max_violation <= 1e-8;
    check
}

/// (t, χ²/N) with χ²/N = Σ_j (n_j - 1/2)² / (N/2).
pub fn chi_squared_series(traj: &OccupationTrajectory) -> Vec<(f64, f64)> {
    traj.times
        .iter()
        .zip(&traj.n)
        .map(|(&t, row)| {
            let s: f64 = row.iter().map(|x| (x - 0.5).powi(2)).sum();
            (t, s / (row.len() as f64 / 2.0))
        })
        .collect()
}

/// χ²/N series on a log-spaced grid that reaches below the fit window.
pub fn relaxation_series(params: &ModelParams, points: usize) -> Result<Vec<(f64, f64)>> {
    let solver = OccupationSolver::new(params)?;
    let rate = solver.slowest_rate();
    if !rate.is_finite() {
        return Err(Error::Fit("no decaying mode".into()));
    }
    // χ² ~ e^{-2 rate t}; run until it is well below the window floor
    let t_end = (FIT_WINDOW.0 * 1e-2).ln().abs() / (2.0 * rate);
    let points = points.max(2);
    Ok((0..points)
        .map(|k| {
            let t = t_end * k as f64 / (points - 1) as f64;
            (t, solver.chi_squared(t))
        })
        .collect())
}

/// Exponential tail of one χ² series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailDecay {
    pub tau: f64,
    /// Coefficient of determination of the log-linear fit.
    pub r_squared: f64,
    pub points: usize,
}

/// Fits log χ² = c - t/τ on points with χ²/N inside `window`.
pub fn exponential_tail(series: &[(f64, f64)], window: (f64, f64)) -> Result<TailDecay> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, c)| *c >= window.0 && *c <= window.1)
        .map(|&(t, c)| (t, c.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Fit(format!("only {} points inside the fit window", pts.len())));
    }
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    if (hi - lo) / std::f64::consts::LN_10 < 2.0 {
        return Err(Error::Fit(format!(
            "series spans {:.2} decades inside the window, need 2",
            (hi - lo) / std::f64::consts::LN_10
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, intercept) = linear_fit(&xs, &ys)?;
    if !(slope < 0.0) {
        return Err(Error::Fit("χ² is not decaying".into()));
    }
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(TailDecay {
        tau: -1.0 / slope,
        r_squared: 1.0 - ss_res / ss_tot,
        points: pts.len(),
    })
}

/// τ(N) = N^β / (2π^β b_α), with an extra log N at α = 3/2.
#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationFit {
    pub alpha: f64,
    pub ns: Vec<usize>,
    pub tau: Vec<f64>,
    pub beta: f64,
    pub b_alpha: f64,
    /// RMS of the log τ residuals.
    pub residual: f64,
    pub tails: Vec<TailDecay>,
}

impl RelaxationFit {
    /// `key = value` lines: alpha, N_list, tau_list, beta, b_alpha, residual.
    pub fn summary(&self) -> String {
        let list = |v: Vec<String>| format!("[{}]", v.join(", "));
        format!(
            "alpha = {}\nN_list = {}\ntau_list = {}\nbeta = {}\nb_alpha = {}\nresidual = {}\n",
            fmt_f64(self.alpha),
            list(self.ns.iter().map(|n| n.to_string()).collect()),
            list(self.tau.iter().map(|&t| fmt_f64(t)).collect()),
            fmt_f64(self.beta),
            fmt_f64(self.b_alpha),
            fmt_f64(self.residual),
        )
    }
}

fn critical_log(alpha: f64) -> bool {
    (alpha - 1.5).abs() < 1e-12
}

/// Per-N exponential tail fits followed by the power-law fit of τ(N).
pub fn relaxation_fit(alpha: f64, ns: &[usize], series: &[Vec<(f64, f64)>]) -> Result<RelaxationFit> {
    if ns.len() != series.len() {
        return Err(Error::Fit("one χ² series per N is required".into()));
    }
    if ns.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 system sizes, got {}", ns.len())));
    }
    let tails = series
        .iter()
        .map(|s| exponential_tail(s, FIT_WINDOW))
        .collect::<Result<Vec<_>>>()?;
    let tau: Vec<f64> = tails.iter().map(|t| t.tau).collect();
    let log_n = critical_log(alpha);
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ns
        .iter()
        .zip(&tau)
        .map(|(&n, &t)| if log_n { (t / (n as f64).ln()).ln() } else { t.ln() })
        .collect();
    let (beta, intercept) = linear_fit(&xs, &ys)?;
    let b_alpha = (-intercept).exp() / (2.0 * PI.powf(beta));
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - beta * x - intercept).powi(2))
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    Ok(RelaxationFit {
        alpha,
        ns: ns.to_vec(),
        tau,
        beta,
        b_alpha,
        residual,
        tails,
    })
}

/// Cosine-series solution of ∂n = -b(-Δ)^{β/2} n on [0, N] from the domain wall.
#[derive(Clone, Debug)]
pub struct FractionalReference {
    pub length: f64,
    pub beta: f64,
    pub b: f64,
    /// c_m(0), m = 1..=M (index 0 holds the mean 1/2)
    pub coefficients: Vec<f64>,
}

impl FractionalReference {
    pub fn new(length: f64, beta: f64, b: f64, modes: usize) -> Result<Self> {
        if !(length > 0.0 && beta > 0.0 && b >= 0.0) {
            return Err(Error::params("need length > 0, beta > 0, b >= 0"));
        }
        let step = |x: f64| if x < 0.5 * length { 1.0 } else { 0.0 };
        let mut coefficients = Vec::with_capacity(modes + 1);
        // mean and cosine coefficients of the step, by quadrature on each half
        let project = |m: usize| {
            let k = m as f64 * PI / length;
            let panels = m / 2 + 4;
            let f = |x: f64| step(x) * (k * x).cos();
            let half = 0.5 * length;
            quad::integrate(f, 0.0, half, panels, 12) + quad::integrate(f, half, length, panels, 12)
        };
        coefficients.push(project(0) / length);
        for m in 1..=modes {
            coefficients.push(2.0 * project(m) / length);
        }
        Ok(FractionalReference {
            length,
            beta,
            b,
            coefficients,
        })
    }

    /// c_m(t) = c_m(0) exp(-b (mπ/N)^β t)
    pub fn coefficient(&self, m: usize, t: f64) -> f64 {
        if m == 0 {
            return self.coefficients[0];
        }
        let k = m as f64 * PI / self.length;
        self.coefficients[m] * (-self.b * k.powf(self.beta) * t).exp()
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (0..self.coefficients.len())
            .map(|m| self.coefficient(m, t) * (m as f64 * PI * x / self.length).cos())
            .sum()
    }
}

/// n(x, t) of the fractional reference with M modes.
pub fn fractional_reference(x: f64, t: f64, params: &ModelParams, beta: f64, b: f64, modes: usize) -> Result<f64> {
    let n = params.n as f64;
    if !(0.0..=n).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [0, {n}]")));
    }
    Ok(FractionalReference::new(n, beta, b, modes)?.eval(x, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(alpha: f64, n: usize) -> ModelParams {
        ModelParams::chain(alpha, 1.0, 10.0, n, Boundary::Open).unwrap()
    }

    #[test]
    fn configuration_bits() {
        let mut c = SpinConfiguration::domain_wall(130);
        assert_eq!(c.count(), 65);
        assert!(c.occupied(64) && !c.occupied(65));
        c.exchange(3, 100).unwrap();
        assert_eq!(c.count(), 65);
        assert!(c.exchange(3, 101).is_err());
        assert_eq!(SpinConfiguration::from_occupations(&c.occupations()), c);
    }

    #[test]
    fn fenwick_selection() {
        let mut f = Fenwick::new(10);
        for (i, w) in [(1, 2.0), (4, 1.0), (9, 3.0)] {
            f.set(i, w);
        }
        assert_eq!(f.total(), 6.0);
        assert_eq!(f.find(0.0), 1);
        assert_eq!(f.find(1.99), 1);
        assert_eq!(f.find(2.5), 4);
        assert_eq!(f.find(3.0), 9);
        assert_eq!(f.find(5.999), 9);
        f.set(9, 0.0);
        assert_eq!(f.find(2.9999999), 4);
    }

    #[test]
    fn jump_targets_follow_rates() {
        let p = chain(1.0, 9);
        let table = JumpTable::new(&p).unwrap();
        let mut hits = vec![0usize; 9];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 200_000;
        for _ in 0..draws {
            hits[table.target(2, rng.random())] += 1;
        }
        assert_eq!(hits[2], 0);
        let total: f64 = (0..9).filter(|&k| k != 2).map(|k| ((k as f64) - 2.0).powi(-2)).sum();
        for k in (0..9).filter(|&k| k != 2) {
            let expect = ((k as f64) - 2.0).powi(-2) / total;
            let got = hits[k] as f64 / draws as f64;
            assert!((got - expect).abs() < 5.0 * (expect / draws as f64).sqrt(), "{k}");
        }
        assert!((table.escape(0) - 0.2 * (1..9).map(|r| (r as f64).powi(-2)).sum::<f64>()).abs() < 1e-15);
    }

    #[test]
    fn particle_number_and_reproducibility() {
        let p = chain(2.0, 32);
        let c0 = SpinConfiguration::domain_wall(32);
        let times: Vec<f64> = (1..=5).map(|k| k as f64).collect();
        let run = |seed, stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            kmc_trajectory(&c0, &p, &times, &mut rng).unwrap()
        };
        for k in 0..20 {
            for c in run(7, k) {
                assert_eq!(c.count(), 16);
            }
        }
        assert_eq!(run(7, 3), run(7, 3));
        assert_ne!(run(7, 3), run(7, 4));
        let a = kmc_simulate(&c0, &p, &times, 64, 11).unwrap();
        let b = kmc_simulate(&c0, &p, &times, 64, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn relaxes_to_flat() {
        let p = chain(2.0, 16);
        let c0 = SpinConfiguration::domain_wall(16);
        let ens = kmc_simulate(&c0, &p, &[0.0, 2000.0], 2000, 1).unwrap();
        assert_eq!(ens.mean(0), (0..16).map(|i| if i < 8 { 1.0 } else { 0.0 }).collect::<Vec<_>>());
        for (m, e) in ens.mean(1).iter().zip(ens.stderr(1)) {
            assert!((m - 0.5).abs() < 4.0 * e.max(0.5 / (2000f64).sqrt()));
        }
    }

    #[test]
    fn linear_solver_mass_and_short_time() {
        let p = chain(2.0, 40);
        let traj = occupation_evolution(&p, &[0.0, 1e-5, 3.0, 50.0]).unwrap();
        for row in &traj.n {
            assert!((row.iter().sum::<f64>() - 20.0).abs() < 1e-9);
        }
        // n_j ≈ κt Σ_{r=j+1}^{N/2+j} r^{-2α} for j ≥ 0
        let kt = 0.2 * 1e-5;
        for i in 20..40 {
            let j = site_label(i, 40);
            let s: f64 = (j + 1..=20 + j).map(|r| (r as f64).powi(-4)).sum();
            assert!((traj.n[1][i] / (kt * s) - 1.0).abs() < 1e-4);
        }
        let ode = occupation_evolution_ode(&p, &traj.times).unwrap();
        for (a, b) in ode.n.iter().flatten().zip(traj.n.iter().flatten()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn right_tail_power_law() {
        let p = chain(2.0, 100);
        let traj = occupation_evolution(&p, &[0.5 / 0.2]).unwrap();
        // distance from the wall is j + 1/2
        let xs: Vec<f64> = (10..=30).map(|j: i64| (j as f64 + 0.5).ln()).collect();
        let ys: Vec<f64> = (10..=30usize).map(|j| traj.n[0][50 + j].ln()).collect();
        let (slope, _) = linear_fit(&xs, &ys).unwrap();
        assert!((slope + 3.0).abs() < 0.2, "{slope}");
    }

    #[test]
    fn symmetry_and_chi_squared() {
        let p = chain(1.0, 100);
        let times: Vec<f64> = (0..40).map(|k| k as f64 * 2.5).collect();
        let traj = occupation_evolution(&p, &times).unwrap();
        let check = particle_hole_symmetry_check(&traj);
        assert!(check.ok, "{check:?}");
        let chi = chi_squared_series(&traj);
        assert_eq!(chi[0].1, 0.5);
        for w in chi.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-15);
        }
        let mut broken = traj.clone();
        broken.n[3][10] += 1e-6;
        let bad = particle_hole_symmetry_check(&broken);
        assert!(!bad.ok);
        assert_eq!(bad.worst_site, site_label(10, 100));
        let late = occupation_evolution(&p, &[1e6]).unwrap();
        assert!(chi_squared_series(&late)[0].1 < 1e-20);
    }

    #[test]
    fn late_decay_is_exponential() {
        let p = chain(2.0, 100);
        let series = relaxation_series(&p, 400).unwrap();
        let tail = exponential_tail(&series, FIT_WINDOW).unwrap();
        assert!(tail.r_squared >= 0.999, "{tail:?}");
        let solver = OccupationSolver::new(&p).unwrap();
        assert!((tail.tau * 2.0 * solver.slowest_rate() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn synthetic_relaxation_fit() {
        for (alpha, beta, b) in [(2.0, 2.0, 0.33), (1.0, 1.0, 0.7), (1.5, 2.0, 0.4)] {
            let ns = [100usize, 200, 400, 800];
            let series: Vec<Vec<(f64, f64)>> = ns
                .iter()
                .map(|&n| {
                    let nf = n as f64;
                    let mut tau = nf.powf(beta) / (2.0 * PI.powf(beta) * b);
                    if alpha == 1.5 {
                        tau *= nf.ln();
                    }
                    (0..300).map(|k| {
                        let t = k as f64 * tau * 0.05;
                        (t, 0.5 * (-t / tau).exp())
                    }).collect()
                })
                .collect();
            let fit = relaxation_fit(alpha, &ns, &series).unwrap();
            assert!((fit.beta - beta).abs() < 1e-6, "{fit:?}");
            assert!((fit.b_alpha / b - 1.0).abs() < 1e-6);
            assert!(fit.summary().contains("N_list = [100, 200, 400, 800]"));
        }
        assert!(relaxation_fit(2.0, &[1, 2, 3], &[vec![], vec![], vec![]]).is_err());
        let flat = vec![(0.0, 1e-3), (1.0, 1e-3), (2.0, 1e-3)];
        assert!(exponential_tail(&flat, FIT_WINDOW).is_err());
    }

    #[test]
    fn fractional_reference_examples() {
        let r = FractionalReference::new(100.0, 1.5, 0.8, 2001).unwrap();
        assert!((r.coefficients[0] - 0.5).abs() < 1e-14);
        for m in 1..20 {
            let exact = 2.0 * (m as f64 * PI / 2.0).sin() / (m as f64 * PI);
            assert!((r.coefficients[m] - exact).abs() < 1e-12, "{m}");
        }
        let ratio = r.coefficient(7, 30.0) / r.coefficient(7, 0.0);
        assert!((ratio - (-0.8 * (7.0 * PI / 100.0f64).powf(1.5) * 30.0).exp()).abs() < 1e-12);
        // Gibbs overshoot near the wall, faithful reconstruction away from it
        let xs: Vec<f64> = (0..=4000).map(|k| 40.0 + k as f64 * 0.005).collect();
        let peak = xs.iter().map(|&x| r.eval(x, 0.0)).fold(f64::NEG_INFINITY, f64::max);
        assert!(peak > 1.07 && peak < 1.1, "{peak}");
        assert!((r.eval(20.0, 0.0) - 1.0).abs() < 1e-3);
        assert!(r.eval(80.0, 0.0).abs() < 1e-3);
        // single-mode regime: χ² decays at twice the first-mode rate
        let chi = |t: f64| (0..100).map(|i| (r.eval(site_position(i), t) - 0.5).powi(2)).sum::<f64>() / 50.0;
        let (t1, t2) = (4000.0, 6000.0);
        let rate = (chi(t1) / chi(t2)).ln() / (t2 - t1);
        let expect = 2.0 * 0.8 * (PI / 100.0f64).powf(1.5);
        assert!((rate / expect - 1.0).abs() < 1e-6, "{rate} {expect}");
        let p = chain(1.5, 100);
        assert!(fractional_reference(101.0, 0.0, &p, 1.5, 0.8, 10).is_err());
    }

    #[test]
    fn ensemble_csv() {
        let p = chain(2.0, 8);
        let ens = kmc_simulate(&SpinConfiguration::domain_wall(8), &p, &[0.0, 1.0], 10, 1).unwrap();
        let mut buf = Vec::new();
        write_ensemble_csv(&mut buf, &ens).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,j,n_mean,n_stderr"));
        assert!(lines.next().unwrap().starts_with("0.0000000000000000e0,-4,1.0000000000000000e0,"));
        assert_eq!(text.lines().count(), 17);
    }
}
