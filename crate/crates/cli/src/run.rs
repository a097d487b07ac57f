//! Dispatch from a validated config to the solvers. Every artifact is built in
//! memory so the manifest can hash exactly what was written.

use std::fmt::Write as _;

use lrhsr::analytic::{coefficients, crossover, forster_ratio};
use lrhsr::classical::{cme_integrate, cme_spectral_solve, moments, tail_fit, write_profiles_csv, DensityProfile};
use lrhsr::io::fmt_f64;
use lrhsr::manybody::{
    kmc_simulate, occupation_evolution, relaxation_fit, relaxation_series, site_label, write_ensemble_csv,
    SpinConfiguration,
};
use lrhsr::model::{alpha_cr, LatticeIndex};
use lrhsr::quantum::{
    fit_gap_scaling, propagate_g, second_moment_hopping, slow_modes, variance_closed_form, write_spectrum_csv,
    CorrelationMatrix,
};
use lrhsr::{Boundary, ModelParams, Result};

use crate::config::{ExperimentConfig, Kind, Source};

pub struct Artifact {
    pub name: String,
    pub schema: &'static str,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: impl Into<String>, schema: &'static str, bytes: Vec<u8>) -> Self {
        Artifact {
            name: name.into(),
            schema,
            bytes,
        }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    match cfg.kind {
        Kind::QuantumVariance => quantum_variance(cfg),
        Kind::ClassicalProfile => classical_profile(cfg),
        Kind::ClassicalMoments => classical_moments(cfg),
        Kind::ManybodyRelax => manybody_relax(cfg),
        Kind::Spectrum => spectrum(cfg),
        Kind::AnalyticReport => analytic_report(cfg),
    }
}

fn csv_line(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

/// `base.ext`, or `base_tag.ext` when the run sweeps more than one case.
fn file_name(base: &str, ext: &str, tag: &str, single: bool) -> String {
    if single {
        format!("{base}.{ext}")
    } else {
        format!("{base}_{tag}.{ext}")
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn quantum_variance(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let mut var = String::new();
    let mut dens = String::new();
    let mut summary = String::new();
    csv_line(&mut var, &["alpha", "N", "t", "qme", "eq3", "classical"].map(String::from));
    csv_line(&mut dens, &["alpha", "N", "t", "j", "n"].map(String::from));
    for alpha in cfg.alphas() {
        for (d, n) in cfg.geometries() {
            let p = cfg.params(d, n, alpha);
            let times = cfg.output_times(p.kappa()?, true);
            let g0 = CorrelationMatrix::centered(&p)?;
            let traj = propagate_g(&g0, &p, &times)?;
            let two_d = 2.0 * second_moment_hopping(&p)? / p.gamma;
            let mut late = (Vec::new(), Vec::new());
            for g in &traj {
                let v = g.variance(&p);
                csv_line(
                    &mut var,
                    &[
                        fmt_f64(alpha),
                        n.to_string(),
                        fmt_f64(g.t),
                        fmt_f64(v),
                        fmt_f64(variance_closed_form(&p, g.t)?),
                        fmt_f64(two_d * g.t),
                    ],
                );
                if g.t >= 0.5 * times[times.len() - 1] {
                    late.0.push(g.t);
                    late.1.push(v);
                }
            }
            let last = traj.last().expect("at least one time");
            for (i, x) in last.diagonal().iter().enumerate() {
                csv_line(
                    &mut dens,
                    &[fmt_f64(alpha), n.to_string(), fmt_f64(last.t), (i as i64 - last.origin as i64).to_string(), fmt_f64(*x)],
                );
            }
            let d_fit = if late.0.len() >= 2 { 0.5 * least_squares(&late.0, &late.1) } else { f64::NAN };
            let _ = writeln!(
                summary,
                "alpha = {alpha}, N = {n}: D_fit = {}, S/gamma = {}",
                fmt_f64(d_fit),
                fmt_f64(0.5 * two_d)
            );
        }
    }
    Ok(vec![
        Artifact::new("variance.csv", "variance/1", var.into_bytes()),
        Artifact::new("density.csv", "quantum-density/1", dens.into_bytes()),
        Artifact::new("summary.txt", "quantum-summary/1", summary.into_bytes()),
    ])
}

fn initial_profile(cfg: &ExperimentConfig, p: &ModelParams) -> Result<DensityProfile> {
    match cfg.run.source.unwrap_or_default() {
        Source::Center => Ok(DensityProfile::centered_delta(p)),
        Source::Edge => {
            let mut coords = vec![p.n / 2; p.d];
            coords[0] = 0;
            let lattice = p.lattice();
            let site = lattice.flatten(&LatticeIndex::new(&coords))?;
            DensityProfile::delta(lattice, site)
        }
    }
}

/// Profiles at the output times; rings with a centered source use the spectral solver.
fn profiles(cfg: &ExperimentConfig, p: &ModelParams, times: &[f64]) -> Result<Vec<DensityProfile>> {
    if p.bc == Boundary::Periodic && cfg.run.source.unwrap_or_default() == Source::Center {
        times.iter().map(|&t| cme_spectral_solve(p, t)).collect()
    } else {
        cme_integrate(&initial_profile(cfg, p)?, p, times)
    }
}

fn classical_profile(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    let cases: Vec<_> = cfg
        .geometries()
        .into_iter()
        .flat_map(|g| cfg.alphas().into_iter().map(move |a| (g, a)))
        .collect();
    let single = cases.len() == 1;
    let mut tails = String::new();
    csv_line(
        &mut tails,
        &["d", "N", "alpha", "t", "exponent", "amplitude", "points", "xi"].map(String::from),
    );
    for ((d, n), alpha) in cases {
        let p = cfg.params(d, n, alpha);
        let times = cfg.output_times(p.kappa()?, false);
        let profs = profiles(cfg, &p, &times)?;
        let mut buf = Vec::new();
        write_profiles_csv(&mut buf, &profs)?;
        out.push(Artifact::new(
            file_name("profile", "csv", &format!("d{d}_N{n}_a{alpha}"), single),
            "profile/1",
            buf,
        ));
        if let Some([lo, hi]) = cfg.run.fit_window {
            for prof in &profs {
                let fit = tail_fit(prof, (lo, hi))?;
                let xi = if alpha > alpha_cr(d) && prof.t > 0.0 {
                    crossover(&p, prof.t)?.xi_exact.unwrap_or(f64::NAN)
                } else {
                    f64::NAN
                };
                csv_line(
                    &mut tails,
                    &[
                        d.to_string(),
                        n.to_string(),
                        fmt_f64(alpha),
                        fmt_f64(prof.t),
                        fmt_f64(fit.exponent),
                        fmt_f64(fit.amplitude),
                        fit.points.to_string(),
                        fmt_f64(xi),
                    ],
                );
            }
        }
    }
    if cfg.run.fit_window.is_some() {
        out.push(Artifact::new("tails.csv", "tail-fit/1", tails.into_bytes()));
    }
    Ok(out)
}

fn classical_moments(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let mut s = String::new();
    csv_line(
        &mut s,
        &["d", "N", "alpha", "t", "mean1", "mean2", "mean3", "variance"].map(String::from),
    );
    for (d, n) in cfg.geometries() {
        for alpha in cfg.alphas() {
            let p = cfg.params(d, n, alpha);
            let times = cfg.output_times(p.kappa()?, true);
            for prof in profiles(cfg, &p, &times)? {
                let (mean, var) = moments(&prof);
                let mut row = vec![d.to_string(), n.to_string(), fmt_f64(alpha), fmt_f64(prof.t)];
                row.extend((0..3).map(|k| fmt_f64(mean.get(k).copied().unwrap_or(0.0))));
                row.push(fmt_f64(var));
                csv_line(&mut s, &row);
            }
        }
    }
    Ok(vec![Artifact::new("moments.csv", "moments/1", s.into_bytes())])
}

fn manybody_relax(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    let alphas = cfg.alphas();
    let single = alphas.len() == 1;
    if cfg.has_explicit_times() {
        let n = cfg.model.n;
        for &alpha in &alphas {
            let p = cfg.params(1, n, alpha);
            let times = cfg.output_times(p.kappa()?, false);
            let lin = occupation_evolution(&p, &times)?;
            let mut s = String::new();
            csv_line(&mut s, &["t", "j", "n"].map(String::from));
            for (t, row) in lin.times.iter().zip(&lin.n) {
                for (i, x) in row.iter().enumerate() {
                    csv_line(&mut s, &[fmt_f64(*t), site_label(i, n).to_string(), fmt_f64(*x)]);
                }
            }
            let tag = format!("a{alpha}");
            out.push(Artifact::new(file_name("occupation", "csv", &tag, single), "occupation/1", s.into_bytes()));
            let m = cfg.run.trajectories.unwrap_or(0);
            if m > 0 {
                let ens = kmc_simulate(&SpinConfiguration::domain_wall(n), &p, &times, m, cfg.run.seed.unwrap_or(0))?;
                let mut buf = Vec::new();
                write_ensemble_csv(&mut buf, &ens)?;
                out.push(Artifact::new(file_name("ensemble", "csv", &tag, single), "ensemble/1", buf));
            }
        }
    }
    if let Some(ns) = &cfg.run.sizes {
        let points = cfg.run.points.unwrap_or(400);
        let mut relax = String::new();
        let mut fits = String::new();
        csv_line(&mut relax, &["alpha", "N", "t", "chi2"].map(String::from));
        for &alpha in &alphas {
            let mut all = Vec::new();
            for &n in ns {
                let series = relaxation_series(&cfg.params(1, n, alpha), points)?;
                for &(t, c) in &series {
                    csv_line(&mut relax, &[fmt_f64(alpha), n.to_string(), fmt_f64(t), fmt_f64(c)]);
                }
                all.push(series);
            }
            let fit = relaxation_fit(alpha, ns, &all)?;
            fits.push_str(&fit.summary());
            fits.push('\n');
        }
        out.push(Artifact::new("relax.csv", "relaxation/1", relax.into_bytes()));
        out.push(Artifact::new("fit.txt", "relaxation-fit/1", fits.into_bytes()));
    }
    Ok(out)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    let mut gaps = String::new();
    let mut fits = String::new();
    csv_line(
        &mut gaps,
        &["alpha", "N", "real_gap", "complex_min", "first_order"].map(String::from),
    );
    let geoms = cfg.geometries();
    let alphas = cfg.alphas();
    let single = geoms.len() * alphas.len() == 1;
    for &alpha in &alphas {
        let (mut ns, mut real) = (Vec::new(), Vec::new());
        for &(d, n) in &geoms {
            let p = cfg.params(d, n, alpha);
            let modes = slow_modes(&p)?;
            let mut buf = Vec::new();
            write_spectrum_csv(&mut buf, &modes.sets)?;
            out.push(Artifact::new(
                file_name("spectrum", "csv", &format!("a{alpha}_N{n}"), single),
                "spectrum/1",
                buf,
            ));
            csv_line(
                &mut gaps,
                &[
                    fmt_f64(alpha),
                    n.to_string(),
                    fmt_f64(modes.real_gap),
                    fmt_f64(modes.complex_min),
                    fmt_f64(p.gamma * (n as f64 - 1.0) / n as f64),
                ],
            );
            ns.push(n);
            real.push(modes.real_gap);
        }
        if ns.len() >= 2 {
            let fit = fit_gap_scaling(&ns, &real)?;
            let _ = writeln!(
                fits,
                "alpha = {alpha}\nexponent = {}\nprefactor = {}\n",
                fmt_f64(fit.exponent),
                fmt_f64(fit.prefactor)
            );
        }
    }
    out.push(Artifact::new("gaps.csv", "gaps/1", gaps.into_bytes()));
    if !fits.is_empty() {
        out.push(Artifact::new("gap_fit.txt", "gap-fit/1", fits.into_bytes()));
    }
    Ok(out)
}

fn analytic_report(cfg: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let mut report = String::new();
    let mut table = String::new();
    csv_line(
        &mut table,
        &["d", "alpha", "regime", "D_over_kappa", "C_over_kappa"].map(String::from),
    );
    let dims: Vec<usize> = cfg.geometries().into_iter().map(|(d, _)| d).collect();
    for d in dims {
        let _ = writeln!(report, "[d = {d}]");
        let _ = writeln!(report, "alpha_cr = {}", alpha_cr(d));
        let _ = writeln!(report, "forster_ratio = {}", fmt_f64(forster_ratio(d)?));
        for alpha in cfg.alphas() {
            if alpha <= 0.5 * d as f64 {
                let _ = writeln!(report, "alpha = {alpha}: rates not summable (alpha <= d/2)");
                csv_line(&mut table, &[d.to_string(), fmt_f64(alpha), "divergent".into(), fmt_f64(f64::NAN), fmt_f64(f64::NAN)]);
                continue;
            }
            let p = cfg.params(d, cfg.model.n, alpha);
            let kappa = p.kappa()?;
            let c = coefficients(&p)?;
            let regime = format!("{:?}", c.regime).to_lowercase();
            let dk = c.d_alpha.map_or(f64::NAN, |x| x / kappa);
            let ck = c.c_alpha.map_or(f64::NAN, |x| x / kappa);
            let _ = writeln!(
                report,
                "alpha = {alpha}: regime = {regime}, D_alpha/kappa = {}, C_alpha/kappa = {} ({:?})",
                fmt_f64(dk),
                fmt_f64(ck),
                c.c_alpha_form
            );
            csv_line(&mut table, &[d.to_string(), fmt_f64(alpha), regime, fmt_f64(dk), fmt_f64(ck)]);
        }
        report.push('\n');
    }
    Ok(vec![
        Artifact::new("report.txt", "analytic-report/1", report.into_bytes()),
        Artifact::new("coefficients.csv", "coefficients/1", table.into_bytes()),
    ])
}
