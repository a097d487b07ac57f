//! Experiment configuration: TOML file with a `kind` key and `[model]` / `[run]` tables.

use std::fmt;
use std::path::PathBuf;

use lrhsr::{Boundary, ModelParams};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    QuantumVariance,
    ClassicalProfile,
    ClassicalMoments,
    ManybodyRelax,
    Spectrum,
    AnalyticReport,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::QuantumVariance => "quantum-variance",
            Kind::ClassicalProfile => "classical-profile",
            Kind::ClassicalMoments => "classical-moments",
            Kind::ManybodyRelax => "manybody-relax",
            Kind::Spectrum => "spectrum",
            Kind::AnalyticReport => "analytic-report",
        })
    }
}

/// Where the single classical excitation starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Center,
    /// First coordinate 0, the others N/2.
    Edge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub model: ModelParams,
    #[serde(default)]
    pub run: RunBlock,
}

/// Output times are taken from `times`, else `kappa_times` (units of 1/κ),
/// else a uniform grid of `points` intervals on [0, t_max].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Sweep over N; paired element-wise with `dims` when both are set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Command-line values that replace file keys.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<usize>,
    pub dim: Option<usize>,
    pub bc: Option<Boundary>,
    pub t_max: Option<f64>,
    pub trajectories: Option<usize>,
}

pub const DEFAULT_POINTS: usize = 100;

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// A scalar override also drops the matching sweep list.
    pub fn apply(&mut self, o: &Overrides) {
        let run = &mut self.run;
        if let Some(v) = &o.out {
            run.out = Some(v.clone());
        }
        if let Some(v) = o.seed {
            run.seed = Some(v);
        }
        if let Some(v) = o.trajectories {
            run.trajectories = Some(v);
        }
        if let Some(v) = o.t_max {
            run.t_max = Some(v);
            run.times = None;
            run.kappa_times = None;
        }
        if let Some(v) = o.alpha {
            self.model.alpha = v;
            run.alphas = None;
        }
        if let Some(v) = o.gamma {
            self.model.gamma = v;
        }
        if let Some(v) = o.n {
            self.model.n = v;
            run.sizes = None;
        }
        if let Some(v) = o.dim {
            self.model.d = v;
            run.dims = None;
        }
        if let Some(v) = o.bc {
            self.model.bc = v;
        }
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.run.alphas.clone().unwrap_or_else(|| vec![self.model.alpha])
    }

    /// (d, N) pairs to run.
    pub fn geometries(&self) -> Vec<(usize, usize)> {
        match (&self.run.dims, &self.run.sizes) {
            (Some(ds), Some(ns)) => ds.iter().copied().zip(ns.iter().copied()).collect(),
            (Some(ds), None) => ds.iter().map(|&d| (d, self.model.n)).collect(),
            (None, Some(ns)) => ns.iter().map(|&n| (self.model.d, n)).collect(),
            (None, None) => vec![(self.model.d, self.model.n)],
        }
    }

    pub fn params(&self, d: usize, n: usize, alpha: f64) -> ModelParams {
        ModelParams {
            d,
            n,
            alpha,
            ..self.model.clone()
        }
    }

    pub fn has_explicit_times(&self) -> bool {
        self.run.times.is_some() || self.run.kappa_times.is_some()
    }

    /// Output times for the given κ; `grid` selects the uniform grid over a
    /// single final time when only `t_max` is set.
    pub fn output_times(&self, kappa: f64, grid: bool) -> Vec<f64> {
        if let Some(t) = &self.run.times {
            return t.clone();
        }
        if let Some(kt) = &self.run.kappa_times {
            return kt.iter().map(|x| x / kappa).collect();
        }
        let t_max = self.run.t_max.unwrap_or(0.0);
        if !grid {
            return vec![t_max];
        }
        let m = self.run.points.unwrap_or(DEFAULT_POINTS);
        (0..=m).map(|k| t_max * k as f64 / m as f64).collect()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.run.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let run = &self.run;
        self.model.validate().map_err(|e| bad(format!("model: {e}")))?;
        for (key, list) in [("run.times", &run.times), ("run.kappa_times", &run.kappa_times)] {
            if let Some(t) = list {
                if t.is_empty() {
                    return Err(bad(format!("{key} is empty")));
                }
                if t.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || t.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(bad(format!("{key} must be finite, non-negative and strictly ascending")));
                }
            }
        }
        if let Some(t) = run.t_max {
            if !(t.is_finite() && t > 0.0) {
                return Err(bad(format!("run.t_max must be positive, got {t}")));
            }
        }
        if run.points == Some(0) {
            return Err(bad("run.points must be at least 1"));
        }
        if let Some([lo, hi]) = run.fit_window {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(bad(format!("run.fit_window needs 0 < lo < hi, got [{lo}, {hi}]")));
            }
        }
        if matches!(&run.sizes, Some(v) if v.is_empty()) {
            return Err(bad("run.sizes is empty"));
        }
        if matches!(&run.alphas, Some(v) if v.is_empty()) {
            return Err(bad("run.alphas is empty"));
        }
        if matches!(&run.dims, Some(v) if v.is_empty()) {
            return Err(bad("run.dims is empty"));
        }
        if let (Some(ds), Some(ns)) = (&run.dims, &run.sizes) {
            if ds.len() != ns.len() {
                return Err(bad("run.dims and run.sizes must have the same length when both are set"));
            }
        }
        for (d, n) in self.geometries() {
            for alpha in self.alphas() {
                self.params(d, n, alpha)
                    .validate()
                    .map_err(|e| bad(format!("d = {d}, N = {n}, alpha = {alpha}: {e}")))?;
            }
        }
        let has_times = self.has_explicit_times() || run.t_max.is_some();
        let chain_only = |what: &str| -> Result<(), ConfigError> {
            if self.geometries().iter().any(|&(d, _)| d != 1) {
                return Err(bad(format!("{what} runs in d = 1 only")));
            }
            Ok(())
        };
        let need_gamma = || -> Result<(), ConfigError> {
            if !(self.model.gamma > 0.0) {
                return Err(bad(format!("kind {} needs gamma > 0", self.kind)));
            }
            Ok(())
        };
        match self.kind {
            Kind::QuantumVariance => {
                chain_only("quantum-variance")?;
                need_gamma()?;
                if !has_times {
                    return Err(bad("quantum-variance needs run.times, run.kappa_times or run.t_max"));
                }
            }
            Kind::ClassicalProfile | Kind::ClassicalMoments => {
                need_gamma()?;
                if !has_times {
                    return Err(bad(format!("{} needs run.times, run.kappa_times or run.t_max", self.kind)));
                }
            }
            Kind::ManybodyRelax => {
                chain_only("manybody-relax")?;
                need_gamma()?;
                if self.model.bc != Boundary::Open {
                    return Err(bad("manybody-relax needs bc = \"open\""));
                }
                if self.geometries().iter().any(|&(_, n)| n % 2 == 1) {
                    return Err(bad("manybody-relax needs even N (domain wall)"));
                }
                if let Some(ns) = &run.sizes {
                    if ns.len() < 4 {
                        return Err(bad("run.sizes needs at least 4 entries for the relaxation fit"));
                    }
                } else if !self.has_explicit_times() {
                    return Err(bad("manybody-relax needs run.sizes (relaxation fit) or run.times / run.kappa_times (profiles)"));
                }
                if run.trajectories.unwrap_or(0) > 0 && !self.has_explicit_times() {
                    return Err(bad("run.trajectories needs run.times or run.kappa_times"));
                }
            }
            Kind::Spectrum => {
                chain_only("spectrum")?;
                if self.model.bc != Boundary::Periodic {
                    return Err(bad("spectrum needs bc = \"periodic\""));
                }
                if self.geometries().iter().any(|&(_, n)| n % 2 == 0) {
                    return Err(bad("spectrum needs odd N"));
                }
            }
            Kind::AnalyticReport => need_gamma()?,
        }
        Ok(())
    }
}

fn base(kind: Kind, d: usize, alpha: f64, j: f64, gamma: f64, n: usize, bc: Boundary) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        model: ModelParams {
            d,
            alpha,
            j,
            gamma,
            n,
            bc,
        },
        run: RunBlock::default(),
    }
}

/// One preset per figure, sized for a desktop run.
pub fn figure_presets() -> Vec<(&'static str, &'static str, ExperimentConfig)> {
    use Boundary::{Open, Periodic};
    use Kind::*;
    let mut out = Vec::new();

    let mut c = base(QuantumVariance, 1, 3.0, 1.0, 10.0, 41, Open);
    c.run.sizes = Some(vec![21, 41]);
    c.run.t_max = Some(10.0);
    c.run.points = Some(200);
    out.push(("fig1b", "quantum-to-classical variance crossover, alpha = 3, gamma = 10J", c));

    let mut c = base(ClassicalProfile, 1, 1.0, 1.0, 10.0, 1000, Periodic);
    c.run.kappa_times = Some(vec![1.0, 3.0]);
    c.run.fit_window = Some([20.0, 250.0]);
    out.push(("fig1c", "Levy-regime density profile, alpha = 1, N = 1000", c));

    let mut c = base(ClassicalProfile, 1, 2.0, 1.0, 10.0, 1000, Periodic);
    c.run.kappa_times = Some(vec![1.0, 3.0]);
    c.run.fit_window = Some([40.0, 250.0]);
    out.push(("fig1d", "mixed Gaussian/power-law profile, alpha = 2, N = 1000", c));

    let mut c = base(ManybodyRelax, 1, 2.0, 1.0, 10.0, 100, Open);
    c.run.alphas = Some(vec![1.0, 2.0, 3.0]);
    c.run.kappa_times = Some(vec![0.5]);
    c.run.trajectories = Some(10_000);
    c.run.seed = Some(1);
    out.push(("fig2a", "domain-wall occupation profiles at kappa t = 0.5, N = 100", c));

    let mut c = base(ManybodyRelax, 1, 2.0, 1.0, 10.0, 100, Open);
    c.run.alphas = Some(vec![1.0, 2.0, 3.0]);
    c.run.sizes = Some(vec![100, 200, 400, 800]);
    c.run.points = Some(400);
    out.push(("fig2b", "chi^2 relaxation and tau(N) fits", c));

    let mut c = base(QuantumVariance, 1, 1.0, 1.0, 10.0, 41, Open);
    c.run.alphas = Some(vec![1.0, 1.5]);
    c.run.sizes = Some(vec![21, 41, 81]);
    c.run.t_max = Some(10.0);
    c.run.points = Some(200);
    out.push(("figS1", "variance for alpha <= alpha_cr at several N", c));

    let mut c = base(ClassicalProfile, 2, 3.0, 1.0, 10.0, 100, Open);
    c.run.dims = Some(vec![2, 3]);
    c.run.sizes = Some(vec![100, 30]);
    c.run.alphas = Some(vec![2.0, 3.0]);
    c.run.kappa_times = Some(vec![0.2, 1.0]);
    c.run.source = Some(Source::Edge);
    c.run.fit_window = Some([5.0, 99.0]);
    out.push(("figS2", "classical profiles in d = 2 (100^2) and d = 3 (30^3), edge source", c));

    let mut c = base(Spectrum, 1, 1.0, 1.0, 0.1, 51, Periodic);
    c.run.alphas = Some(vec![1.0, 2.0, 3.0]);
    c.run.sizes = Some(vec![51, 101, 201]);
    out.push(("figS3", "weak-dephasing Liouvillian spectra, J = 1, gamma = 0.1", c));

    let mut c = base(QuantumVariance, 1, 1.0, 1.0, 0.1, 41, Open);
    c.run.sizes = Some(vec![21, 41, 81]);
    c.run.t_max = Some(250.0);
    c.run.points = Some(250);
    out.push(("figS4", "weak-dephasing density and diffusion fit, alpha = J = 1, gamma = 0.1", c));

    out
}

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    figure_presets().into_iter().find(|(n, _, _)| *n == name).map(|(_, _, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_roundtrip() {
        for (name, _, c) in figure_presets() {
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(ExperimentConfig::parse(&c.to_toml()).unwrap(), c, "{name}");
        }
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = "kind = \"spectrum\"\n[model]\nd = 1\nalpha = 1.0\nJ = 1.0\ngamma = 0.1\nN = 11\nbc = \"periodic\"\n[run]\nsizez = [11]\n";
        let err = ExperimentConfig::parse(text).unwrap_err();
        assert!(err.0.contains("sizez"), "{err}");
    }

    #[test]
    fn overrides_replace_sweeps() {
        let mut c = preset("figS3").unwrap();
        c.apply(&Overrides {
            alpha: Some(2.5),
            n: Some(31),
            ..Overrides::default()
        });
        assert_eq!(c.alphas(), vec![2.5]);
        assert_eq!(c.geometries(), vec![(1, 31)]);
    }

    #[test]
    fn kind_rules() {
        let mut c = preset("figS3").unwrap();
        c.run.sizes = Some(vec![50]);
        assert!(c.validate().is_err());
        let mut c = preset("fig2b").unwrap();
        c.model.bc = Boundary::Periodic;
        assert!(c.validate().is_err());
    }
}
