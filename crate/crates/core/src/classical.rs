//! Single-exciton classical master equation: adaptive integration, exact
//! spectral solution on periodic lattices, moments and tail fits.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::NdFft;
use crate::io::{fmt_f64, write_row};
use crate::model::{min_image, Boundary, Lattice, ModelParams, RateKernel};
use crate::ode::{integrate, OdeOptions};

/// Occupation probability per site at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub t: f64,
    pub values: Vec<f64>,
    pub lattice: Lattice,
    /// Site displacements are measured from here (the initial excitation).
    pub origin: usize,
}

impl DensityProfile {
    pub fn delta(lattice: Lattice, site: usize) -> Result<Self> {
        if site >= lattice.len() {
            return Err(Error::domain(format!("site {site} outside the lattice")));
        }
        let mut values = vec![0.0; lattice.len()];
        values[site] = 1.0;
        Ok(DensityProfile {
            t: 0.0,
            values,
            lattice,
            origin: site,
        })
    }

    /// Delta at the lattice center.
    pub fn centered_delta(params: &ModelParams) -> Self {
        let lattice = params.lattice();
        Self::delta(lattice, lattice.center()).expect("center is a site")
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Displacement of `site` from the origin (minimum image on a torus).
    pub fn displacement(&self, site: usize) -> [i64; 3] {
        let l = &self.lattice;
        let mut a = self.origin;
        let mut b = site;
        let mut r = [0i64; 3];
        for axis in (0..l.d).rev() {
            let delta = (b % l.n) as i64 - (a % l.n) as i64;
            a /= l.n;
            b /= l.n;
            r[axis] = match l.bc {
                Boundary::Periodic => min_image(delta, l.n),
                Boundary::Open => delta,
            };
        }
        r
    }

    pub fn radius(&self, site: usize) -> f64 {
        let r = self.displacement(site);
        ((r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) as f64).sqrt()
    }

    fn check(&self, mass: f64) -> Result<()> {
        let total = self.total();
        if (total - mass).abs() > 1e-9 * mass.abs().max(1e-300) {
            return Err(Error::Invariant(format!(
                "mass {total} drifted from {mass} at t = {}",
                self.t
            )));
        }
        if let Some((site, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -1e-12 || !v.is_finite())
        {
            return Err(Error::Invariant(format!(
                "density {v} at site {site}, t = {}",
                self.t
            )));
        }
        Ok(())
    }
}

fn default_options() -> OdeOptions {
    OdeOptions {
        rtol: 1e-11,
        atol: 1e-15,
        ..OdeOptions::default()
    }
}

/// Integrates ṅ = L n from `n0` to each time in `t_grid` (absolute times ≥ n0.t).
pub fn cme_integrate(
    n0: &DensityProfile,
    params: &ModelParams,
    t_grid: &[f64],
) -> Result<Vec<DensityProfile>> {
    let kernel = RateKernel::new(params)?;
    cme_integrate_with(n0, &kernel, t_grid, &default_options())
}

pub fn cme_integrate_with(
    n0: &DensityProfile,
    kernel: &RateKernel,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<DensityProfile>> {
    if kernel.lattice() != n0.lattice {
        return Err(Error::params("initial profile and kernel lattices differ"));
    }
    let mass = n0.total();
    let mut out = Vec::with_capacity(t_grid.len());
    integrate(
        |_, y, dy| kernel.apply(y, dy),
        &n0.values,
        n0.t,
        t_grid,
        opts,
        |t, y| {
            let p = DensityProfile {
                t,
                values: y.to_vec(),
                lattice: n0.lattice,
                origin: n0.origin,
            };
            p.check(mass)?;
            out.push(p);
            Ok(())
        },
    )?;
    Ok(out)
}

/// Decay exponents 𝒜(q) - 𝒜(0) of the finite periodic kernel on the DFT grid.
#[derive(Clone, Debug)]
pub struct CharacteristicGrid {
    pub d: usize,
    pub n: usize,
    pub exponents: Vec<f64>,
}

impl CharacteristicGrid {
    pub fn new(params: &ModelParams) -> Result<Self> {
        Self::from_kernel(&RateKernel::new(params)?)
    }

    pub fn from_kernel(kernel: &RateKernel) -> Result<Self> {
        let Some(row) = kernel.periodic_row() else {
            return Err(Error::params("the spectral solver needs periodic bc"));
        };
        let lattice = kernel.lattice();
        let fft = NdFft::new(&vec![lattice.n; lattice.d]);
        let mut buf: Vec<Complex64> = row.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        fft.forward(&mut buf);
        let a0 = buf[0].re;
        let exponents = buf.iter().map(|z| z.re - a0).collect();
        Ok(CharacteristicGrid {
            d: lattice.d,
            n: lattice.n,
            exponents,
        })
    }

    /// K(q, t) = exp[(𝒜(q) - 𝒜(0)) t].
    pub fn characteristic(&self, t: f64) -> Vec<f64> {
        self.exponents.iter().map(|e| (e * t).exp()).collect()
    }
}

/// Exact profile on the periodic lattice from a delta at the center:
/// n_j = N^{-d} Σ_q e^{-iq·j} exp[(𝒜(q) - 𝒜(0))t] with the ring's own kernel.
pub fn cme_spectral_solve(params: &ModelParams, t: f64) -> Result<DensityProfile> {
    let grid = CharacteristicGrid::new(params)?;
    spectral_from_grid(&grid, params, t)
}

pub fn spectral_from_grid(
    grid: &CharacteristicGrid,
    params: &ModelParams,
    t: f64,
) -> Result<DensityProfile> {
    if !(t >= 0.0) {
        return Err(Error::domain("t must be non-negative"));
    }
    let lattice = params.lattice();
    let fft = NdFft::new(&vec![params.n; params.d]);
    let mut buf: Vec<Complex64> = grid
        .characteristic(t)
        .into_iter()
        .map(|k| Complex64::new(k, 0.0))
        .collect();
    fft.inverse(&mut buf);
    // buf holds the profile for a delta at site 0; shift it to the center
    let origin = lattice.center();
    let c = lattice.unflatten(origin)?;
    let mut values = vec![0.0; lattice.len()];
    for (k, v) in buf.iter().enumerate() {
        let src = lattice.unflatten(k)?;
        let mut dst = 0;
        for axis in 0..params.d {
            dst = dst * params.n + (src.coords()[axis] + c.coords()[axis]) % params.n;
        }
        values[dst] = v.re;
    }
    Ok(DensityProfile {
        t,
        values,
        lattice,
        origin,
    })
}

/// Mean displacement vector and variance Σ|j - mean|² n_j.
pub fn moments(profile: &DensityProfile) -> (Vec<f64>, f64) {
    let d = profile.lattice.d;
    let mut mean = vec![0.0; d];
    let mut total = 0.0;
    for (site, &v) in profile.values.iter().enumerate() {
        let r = profile.displacement(site);
        for axis in 0..d {
            mean[axis] += r[axis] as f64 * v;
        }
        total += v;
    }
    mean.iter_mut().for_each(|m| *m /= total);
    let mut var = 0.0;
    for (site, &v) in profile.values.iter().enumerate() {
        let r = profile.displacement(site);
        let mut r2 = 0.0;
        for axis in 0..d {
            let x = r[axis] as f64 - mean[axis];
            r2 += x * x;
        }
        var += r2 * v;
    }
    (mean, var / total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit {
    /// Slope of log n against log |j|; approaches -2α.
    pub exponent: f64,
    /// exp(intercept); approaches κt.
    pub amplitude: f64,
    pub points: usize,
}

/// Least-squares line through (log|j|, log n_j) for window_min ≤ |j| ≤ window_max.
///
/// The window should start beyond the Gaussian core (≥ 2ξ when ξ exists, else ≥ 10).
pub fn tail_fit(profile: &DensityProfile, window: (f64, f64)) -> Result<TailFit> {
    let (lo, hi) = window;
    if !(lo >= 1.0 && hi > lo) {
        return Err(Error::Fit(format!("bad window [{lo}, {hi}]")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (site, &v) in profile.values.iter().enumerate() {
        let r = profile.radius(site);
        if r >= lo && r <= hi {
            if v <= 0.0 {
                return Err(Error::Fit(format!(
                    "non-positive density {v} at |j| = {r} inside the window"
                )));
            }
            xs.push(r.ln());
            ys.push(v.ln());
        }
    }
    let (slope, intercept) = linear_fit(&xs, &ys)?;
    Ok(TailFit {
        exponent: slope,
        amplitude: intercept.exp(),
        points: xs.len(),
    })
}

/// Ordinary least squares y = a x + b; returns (a, b).
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::Fit(format!("need at least two points, got {n}")));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Fit("degenerate abscissae".into()));
    }
    let a = sxy / sxx;
    Ok((a, my - a * mx))
}

/// CSV with columns `t, j1..jd, n`; j is the displacement from the origin.
pub fn write_profiles_csv(w: &mut impl Write, profiles: &[DensityProfile]) -> Result<()> {
    let Some(first) = profiles.first() else {
        return Ok(());
    };
    let d = first.lattice.d;
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|k| format!("j{k}")));
    header.push("n".into());
    write_row(w, &header)?;
    for p in profiles {
        for (site, &v) in p.values.iter().enumerate() {
            let r = p.displacement(site);
            let mut row = vec![fmt_f64(p.t)];
            row.extend(r[..d].iter().map(|x| x.to_string()));
            row.push(fmt_f64(v));
            write_row(w, &row)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{exact_profile_alpha1, lattice_sum, Extent};
    use std::f64::consts::PI;

    fn ring(alpha: f64, n: usize) -> ModelParams {
        ModelParams::chain(alpha, 1.0, 10.0, n, Boundary::Periodic).unwrap()
    }

    #[test]
    fn three_site_ring() {
        // uniform pairwise rate w: n_0 = (1 + 2e^{-3wt})/3
        let p = ring(1.0, 3);
        let w = 0.2;
        let times = [0.5, 1.0, 4.0];
        let n0 = DensityProfile::delta(p.lattice(), 0).unwrap();
        let traj = cme_integrate(&n0, &p, &times).unwrap();
        for prof in &traj {
            let expect = (1.0 + 2.0 * (-3.0 * w * prof.t).exp()) / 3.0;
            assert!((prof.values[0] - expect).abs() < 1e-10);
            assert!((prof.total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_basics() {
        let p = ring(1.5, 64);
        let prof = cme_spectral_solve(&p, 0.0).unwrap();
        for (k, &v) in prof.values.iter().enumerate() {
            let expect = if k == prof.origin { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-15);
        }
        let grid = CharacteristicGrid::new(&p).unwrap();
        assert_eq!(grid.exponents[0], 0.0);
        assert!(grid.characteristic(7.0)[0] == 1.0);
        assert!(grid.exponents.iter().all(|&e| e <= 1e-15));
    }

    #[test]
    fn ode_matches_spectral_n64() {
        let p = ring(2.0, 64);
        let t = 1.0 / 0.2;
        let n0 = DensityProfile::centered_delta(&p);
        let ode = cme_integrate(&n0, &p, &[t]).unwrap().pop().unwrap();
        let spec = cme_spectral_solve(&p, t).unwrap();
        let err = ode
            .values
            .iter()
            .zip(&spec.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-7, "{err}");
    }

    #[test]
    fn spectral_even_and_relaxing() {
        let p = ring(1.0, 101);
        let grid = CharacteristicGrid::new(&p).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let prof = spectral_from_grid(&grid, &p, k as f64 * 3.0).unwrap();
            let c = prof.origin;
            for j in 1..50 {
                assert!((prof.values[c + j] - prof.values[c - j]).abs() < 1e-10);
            }
            let dist: f64 = prof.values.iter().map(|v| (v - 1.0 / 101.0).powi(2)).sum();
            assert!(dist <= prev + 1e-15);
            prev = dist;
        }
    }

    #[test]
    fn dawson_form_matches_spectral() {
        // the image-summed kernel Σ_k (m + kN)^{-2} = (π/N)² / sin²(πm/N) makes the
        // ring profile the infinite-chain profile folded onto N sites
        let p = ring(1.0, 4096);
        let kappa = 0.2;
        let t = 0.5 / kappa;
        let n = p.n as f64;
        let kernel = RateKernel::with_weight(&p, |r2| {
            let m = (r2 as f64).sqrt();
            kappa * (PI / n).powi(2) / (PI * m / n).sin().powi(2)
        });
        let grid = CharacteristicGrid::from_kernel(&kernel).unwrap();
        let prof = spectral_from_grid(&grid, &p, t).unwrap();
        let c = prof.origin;
        let mut window_spec = 0.0;
        let mut window_exact = 0.0;
        for j in -200i64..=200 {
            let exact = exact_profile_alpha1(j, t, &p).unwrap().value;
            let spec = prof.values[(c as i64 + j) as usize];
            assert!((exact - spec).abs() < 1e-6, "j = {j}: {exact} vs {spec}");
            window_spec += spec;
            window_exact += exact;
        }
        // folded images add about 2κt/N² per site
        assert!((window_spec - window_exact).abs() < 401.0 * 4.0 * 0.5 / 4096f64.powi(2));
    }

    #[test]
    fn truncated_ring_kernel_offset() {
        // the ring's own min-image kernel drops Σ_{|r|>N/2} κ/r², which shifts
        // the origin density by about κt·(4/N)·(n_0 - n_∞-ish); frozen value
        let p = ring(1.0, 4096);
        let prof = cme_spectral_solve(&p, 0.5 / 0.2).unwrap();
        let n0 = prof.values[prof.origin];
        assert!((n0 - 0.2599623454373565).abs() < 1e-12, "{n0}");
        let exact = exact_profile_alpha1(0, 0.5 / 0.2, &p).unwrap().value;
        assert!((exact - 0.259835441687905).abs() < 1e-12);
    }

    #[test]
    fn moments_examples() {
        let p = ring(3.0, 101);
        let (mean, var) = moments(&DensityProfile::centered_delta(&p));
        assert_eq!(mean, vec![0.0]);
        assert_eq!(var, 0.0);
        let prof = cme_spectral_solve(&p, 4.0).unwrap();
        let (mean, _) = moments(&prof);
        assert!(mean[0].abs() < 1e-9);
    }

    #[test]
    fn variance_slope_matches_finite_ring_d() {
        // slope of the variance equals Σ r² κ_r over the ring kernel until
        // wrap-around matters
        let p = ring(3.0, 2001);
        let kappa = 0.2;
        let kernel = RateKernel::new(&p).unwrap();
        let c = p.lattice().center();
        let finite_two_d: f64 = (0..p.n)
            .filter(|&k| k != c)
            .map(|k| ((k as f64) - c as f64).powi(2) * kernel.rate(c, k))
            .sum();
        let grid = CharacteristicGrid::new(&p).unwrap();
        let v = |t: f64| moments(&spectral_from_grid(&grid, &p, t).unwrap()).1;
        for &kt in &[0.5, 2.0, 5.0] {
            let t = kt / kappa;
            let slope = v(t) / t;
            assert!((slope / finite_two_d - 1.0).abs() < 1e-6, "{slope} vs {finite_two_d}");
            let thermo = kappa * lattice_sum(4.0, 1, Extent::Infinite).unwrap();
            assert!((slope / thermo - 1.0).abs() < 0.01);
        }
        assert!((finite_two_d / (2.0 * kappa * PI.powi(4) / 90.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn synthetic_tail_fit() {
        let p = ModelParams::chain(2.0, 1.0, 10.0, 401, Boundary::Open).unwrap();
        let mut prof = DensityProfile::centered_delta(&p);
        let kt = 0.7;
        for (site, v) in prof.values.iter_mut().enumerate() {
            let j = site as f64 - 200.0;
            *v = if j == 0.0 { 1.0 } else { kt / j.powi(4) };
        }
        let fit = tail_fit(&prof, (10.0, 150.0)).unwrap();
        assert!((fit.exponent + 4.0).abs() < 1e-12);
        assert!((fit.amplitude / kt - 1.0).abs() < 1e-12);
        prof.values[250] = 0.0;
        assert!(tail_fit(&prof, (10.0, 150.0)).is_err());
    }

    #[test]
    fn conservation_open_2d() {
        let p = ModelParams::new(2, 1.5, 1.0, 10.0, 12, Boundary::Open).unwrap();
        let l = p.lattice();
        let n0 = DensityProfile::delta(l, 6).unwrap();
        let traj = cme_integrate(&n0, &p, &[1.0, 5.0, 20.0]).unwrap();
        for prof in traj {
            assert!((prof.total() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_roundtrip() {
        let p = ring(2.0, 8);
        let prof = cme_spectral_solve(&p, 1.0).unwrap();
        let mut buf = Vec::new();
        write_profiles_csv(&mut buf, std::slice::from_ref(&prof)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,j1,n");
        let back: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
        assert_eq!(back, prof.values);
    }
}
