//! Physical parameters, lattice indexing and the long-range rate kernel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{CyclicConvolution, PaddedConvolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(Error::params(format!(
                "bc must be `periodic` or `open`, got `{other}`"
            ))),
        }
    }
}

/// Model parameters. Serialized keys are `d, alpha, J, gamma, N, bc`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub d: usize,
    pub alpha: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub gamma: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub bc: Boundary,
}

impl ModelParams {
    pub fn new(d: usize, alpha: f64, j: f64, gamma: f64, n: usize, bc: Boundary) -> Result<Self> {
        let p = ModelParams {
            d,
            alpha,
            j,
            gamma,
            n,
            bc,
        };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor for the common 1d case.
    pub fn chain(alpha: f64, j: f64, gamma: f64, n: usize, bc: Boundary) -> Result<Self> {
        Self::new(1, alpha, j, gamma, n, bc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.d) {
            return Err(Error::params(format!("d must be 1, 2 or 3, got {}", self.d)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::params(format!(
                "alpha must be finite and positive, got {}",
                self.alpha
            )));
        }
        if !self.j.is_finite() {
            return Err(Error::params("J must be finite"));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::params(format!(
                "gamma must be finite and non-negative, got {}",
                self.gamma
            )));
        }
        if self.n < 2 {
            return Err(Error::params(format!("N must be at least 2, got {}", self.n)));
        }
        let total = (self.n as u128).pow(self.d as u32);
        if total > 1 << 28 {
            return Err(Error::params(format!("N^d = {total} sites is too large")));
        }
        Ok(())
    }

    /// Classical hopping rate 2J²/γ.
    pub fn kappa(&self) -> Result<f64> {
        if self.gamma > 0.0 {
            Ok(2.0 * self.j * self.j / self.gamma)
        } else {
            Err(Error::domain("kappa requires gamma > 0"))
        }
    }

    pub fn alpha_cr(&self) -> f64 {
        alpha_cr(self.d)
    }

    pub fn lattice(&self) -> Lattice {
        Lattice {
            d: self.d,
            n: self.n,
            bc: self.bc,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// Refuses thermodynamic-limit requests unless alpha > d/2.
    pub fn require_summable(&self) -> Result<()> {
        if 2.0 * self.alpha > self.d as f64 {
            Ok(())
        } else {
            Err(Error::Divergent(format!(
                "infinite-lattice sums need alpha > d/2 (alpha = {}, d = {})",
                self.alpha, self.d
            )))
        }
    }
}

pub fn alpha_cr(d: usize) -> f64 {
    (d as f64 + 2.0) / 2.0
}

/// Site coordinates; only the first `d` entries are meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeIndex {
    coords: [usize; 3],
    d: usize,
}

impl LatticeIndex {
    pub fn new(coords: &[usize]) -> Self {
        assert!((1..=3).contains(&coords.len()));
        let mut c = [0; 3];
        c[..coords.len()].copy_from_slice(coords);
        LatticeIndex {
            coords: c,
            d: coords.len(),
        }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords[..self.d]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub d: usize,
    pub n: usize,
    pub bc: Boundary,
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major, axis 0 slowest.
    pub fn flatten(&self, idx: &LatticeIndex) -> Result<usize> {
        if idx.d != self.d {
            return Err(Error::domain(format!(
                "index has {} coordinates, lattice has d = {}",
                idx.d, self.d
            )));
        }
        let mut flat = 0;
        for &c in idx.coords() {
            if c >= self.n {
                return Err(Error::domain(format!("coordinate {c} outside [0, {})", self.n)));
            }
            flat = flat * self.n + c;
        }
        Ok(flat)
    }

    pub fn unflatten(&self, flat: usize) -> Result<LatticeIndex> {
        if flat >= self.len() {
            return Err(Error::domain(format!("site {flat} outside [0, {})", self.len())));
        }
        let mut c = [0; 3];
        let mut rem = flat;
        for axis in (0..self.d).rev() {
            c[axis] = rem % self.n;
            rem /= self.n;
        }
        Ok(LatticeIndex { coords: c, d: self.d })
    }

    /// Displacement b - a; minimum image per axis under periodic bc, in (-N/2, N/2].
    pub fn displacement(&self, a: &LatticeIndex, b: &LatticeIndex) -> [i64; 3] {
        let mut r = [0i64; 3];
        for (axis, slot) in r.iter_mut().enumerate().take(self.d) {
            let delta = b.coords[axis] as i64 - a.coords[axis] as i64;
            *slot = match self.bc {
                Boundary::Open => delta,
                Boundary::Periodic => min_image(delta, self.n),
            };
        }
        r
    }

    pub fn distance(&self, a: &LatticeIndex, b: &LatticeIndex) -> f64 {
        (norm2(&self.displacement(a, b)) as f64).sqrt()
    }

    /// The site at N/2 along every axis.
    pub fn center(&self) -> usize {
        let idx = LatticeIndex::new(&vec![self.n / 2; self.d]);
        self.flatten(&idx).expect("center is inside the lattice")
    }
}

pub(crate) fn min_image(delta: i64, n: usize) -> i64 {
    let n = n as i64;
    let m = delta.rem_euclid(n);
    if 2 * m > n {
        m - n
    } else {
        m
    }
}

pub(crate) fn norm2(r: &[i64; 3]) -> i64 {
    r.iter().map(|x| x * x).sum()
}

fn displacement_of(params: &ModelParams, r: &[i64]) -> Result<[i64; 3]> {
    if r.len() != params.d {
        return Err(Error::domain(format!(
            "displacement has {} components, expected d = {}",
            r.len(),
            params.d
        )));
    }
    let mut out = [0i64; 3];
    for (axis, &x) in r.iter().enumerate() {
        out[axis] = match params.bc {
            Boundary::Open => x,
            Boundary::Periodic => min_image(x, params.n),
        };
    }
    if norm2(&out) == 0 {
        return Err(Error::domain("displacement must be non-zero"));
    }
    Ok(out)
}

/// Coherent hopping amplitude for displacement `r`.
///
/// Periodic d = 1 uses the ring form J[m^-α + (N-m)^-α] with m = r mod N;
/// periodic d > 1 uses the minimum image only.
pub fn hopping_amplitude(params: &ModelParams, r: &[i64]) -> Result<f64> {
    let disp = displacement_of(params, r)?;
    if params.bc == Boundary::Periodic && params.d == 1 {
        let n = params.n as i64;
        let m = r[0].rem_euclid(n) as f64;
        return Ok(params.j * (m.powf(-params.alpha) + (n as f64 - m).powf(-params.alpha)));
    }
    Ok(params.j * (norm2(&disp) as f64).powf(-0.5 * params.alpha))
}

/// Classical rate κ/|r|^{2α}, distance per bc convention.
pub fn classical_rate(params: &ModelParams, r: &[i64]) -> Result<f64> {
    let kappa = params.kappa()?;
    let disp = displacement_of(params, r)?;
    Ok(kappa * (norm2(&disp) as f64).powf(-params.alpha))
}

enum Conv {
    Direct,
    Cyclic(CyclicConvolution),
    Padded(PaddedConvolution),
}

/// Lattice sizes at or below this use the O(S²) direct generator.
const DIRECT_LIMIT: usize = 512;

/// Rates stored by displacement: the first row on a torus (periodic) or the
/// full (2N-1)^d displacement grid (open).
pub struct RateKernel {
    lattice: Lattice,
    span: usize,
    weights: Vec<f64>,
    escape: Vec<f64>,
    conv: Conv,
}

impl RateKernel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let kappa = params.kappa()?;
        Ok(Self::with_weight(params, |r2| kappa * (r2 as f64).powf(-params.alpha)))
    }

    /// Kernel with an arbitrary rate as a function of the squared distance.
    pub fn with_weight(params: &ModelParams, w: impl Fn(i64) -> f64) -> Self {
        let lattice = params.lattice();
        let (d, n) = (params.d, params.n);
        let span = match params.bc {
            Boundary::Periodic => n,
            Boundary::Open => 2 * n - 1,
        };
        let weights: Vec<f64> = (0..span.pow(d as u32))
            .map(|k| {
                let mut rem = k;
                let mut r = [0i64; 3];
                for axis in (0..d).rev() {
                    let c = (rem % span) as i64;
                    rem /= span;
                    r[axis] = match params.bc {
                        Boundary::Periodic => min_image(c, n),
                        Boundary::Open => c - (n as i64 - 1),
                    };
                }
                let r2 = norm2(&r);
                if r2 == 0 {
                    0.0
                } else {
                    w(r2)
                }
            })
            .collect();
        let sites = lattice.len();
        let conv = if sites <= DIRECT_LIMIT {
            Conv::Direct
        } else {
            match params.bc {
                Boundary::Periodic => Conv::Cyclic(CyclicConvolution::new(d, n, &weights)),
                Boundary::Open => {
                    let grid = &weights;
                    Conv::Padded(PaddedConvolution::new(d, n, |r| {
                        let mut k = 0;
                        for &x in &r[..d] {
                            k = k * span + (x + n as i64 - 1) as usize;
                        }
                        grid[k]
                    }))
                }
            }
        };
        let mut kernel = RateKernel {
            lattice,
            span,
            weights,
            escape: Vec::new(),
            conv,
        };
        kernel.escape = match params.bc {
            Boundary::Periodic => {
                let total: f64 = kernel.weights.iter().sum();
                vec![total; sites]
            }
            Boundary::Open => kernel.escape_open(),
        };
        kernel
    }

    fn escape_open(&self) -> Vec<f64> {
        let sites = self.lattice.len();
        let ones = vec![1.0; sites];
        let mut out = vec![0.0; sites];
        match &self.conv {
            Conv::Padded(c) => c.apply(&ones, &mut out),
            _ => {
                let coords = self.site_coords();
                for (j, o) in out.iter_mut().enumerate() {
                    *o = (0..sites)
                        .filter(|&m| m != j)
                        .map(|m| self.weights[self.grid_index(&coords[j], &coords[m])])
                        .sum();
                }
            }
        }
        out
    }

    fn site_coords(&self) -> Vec<[usize; 3]> {
        (0..self.lattice.len())
            .map(|s| self.lattice.unflatten(s).expect("in range").coords)
            .collect()
    }

    fn grid_index(&self, from: &[usize; 3], to: &[usize; 3]) -> usize {
        let n = self.lattice.n as i64;
        let span = self.span as i64;
        let mut k = 0i64;
        for axis in 0..self.lattice.d {
            let delta = to[axis] as i64 - from[axis] as i64;
            let c = match self.lattice.bc {
                Boundary::Periodic => delta.rem_euclid(n),
                Boundary::Open => delta + n - 1,
            };
            k = k * span + c;
        }
        k as usize
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Rate between sites `from` and `to` (0 on the diagonal).
    pub fn rate(&self, from: usize, to: usize) -> f64 {
        let a = self.lattice.unflatten(from).expect("site in range");
        let b = self.lattice.unflatten(to).expect("site in range");
        self.weights[self.grid_index(&a.coords, &b.coords)]
    }

    /// Total escape rate Σ_m w(j, m) out of site `j`.
    pub fn escape_rate(&self, j: usize) -> f64 {
        self.escape[j]
    }

    pub fn escape_rates(&self) -> &[f64] {
        &self.escape
    }

    /// `out = L n` for the master-equation generator L.
    pub fn apply(&self, n: &[f64], out: &mut [f64]) {
        match &self.conv {
            Conv::Direct => self.apply_direct(n, out),
            Conv::Cyclic(c) => {
                c.apply(n, out);
                self.subtract_escape(n, out);
            }
            Conv::Padded(c) => {
                c.apply(n, out);
                self.subtract_escape(n, out);
            }
        }
    }

    fn subtract_escape(&self, n: &[f64], out: &mut [f64]) {
        for ((o, &x), &e) in out.iter_mut().zip(n).zip(&self.escape) {
            *o -= e * x;
        }
    }

    fn apply_direct(&self, n: &[f64], out: &mut [f64]) {
        let sites = self.lattice.len();
        if self.lattice.d == 1 {
            let nn = self.lattice.n;
            for j in 0..sites {
                let mut acc = 0.0;
                for (m, &x) in n.iter().enumerate() {
                    let k = match self.lattice.bc {
                        Boundary::Periodic => (m + nn - j) % nn,
                        Boundary::Open => m + nn - 1 - j,
                    };
                    acc += self.weights[k] * (x - n[j]);
                }
                out[j] = acc;
            }
            return;
        }
        let coords = self.site_coords();
        for j in 0..sites {
            let mut acc = 0.0;
            for m in 0..sites {
                acc += self.weights[self.grid_index(&coords[j], &coords[m])] * (n[m] - n[j]);
            }
            out[j] = acc;
        }
    }

    /// Dense generator matrix, row-major (only sensible for small lattices).
    pub fn dense_generator(&self) -> Vec<f64> {
        let sites = self.lattice.len();
        let coords = self.site_coords();
        let mut m = vec![0.0; sites * sites];
        for j in 0..sites {
            for k in 0..sites {
                if j != k {
                    m[j * sites + k] = self.weights[self.grid_index(&coords[j], &coords[k])];
                }
            }
            m[j * sites + j] = -self.escape[j];
        }
        m
    }

    /// First row of a periodic kernel, indexed by wrapped displacement.
    pub(crate) fn periodic_row(&self) -> Option<&[f64]> {
        (self.lattice.bc == Boundary::Periodic).then_some(&self.weights[..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_example() {
        let p = ModelParams::chain(1.0, 1.0, 10.0, 10, Boundary::Open).unwrap();
        assert!((p.kappa().unwrap() - 0.2).abs() < 1e-15);
        let p0 = ModelParams::chain(1.0, 1.0, 0.0, 10, Boundary::Open).unwrap();
        assert!(p0.kappa().is_err());
    }

    #[test]
    fn amplitude_examples() {
        let open = ModelParams::chain(3.0, 1.0, 1.0, 10, Boundary::Open).unwrap();
        assert_eq!(hopping_amplitude(&open, &[2]).unwrap(), 0.125);
        let ring = ModelParams::chain(1.0, 1.0, 1.0, 5, Boundary::Periodic).unwrap();
        assert!((hopping_amplitude(&ring, &[1]).unwrap() - 1.25).abs() < 1e-15);
        assert!((hopping_amplitude(&ring, &[-1]).unwrap() - 1.25).abs() < 1e-15);
        assert!(hopping_amplitude(&open, &[0]).is_err());
        assert!(hopping_amplitude(&ring, &[5]).is_err());
    }

    #[test]
    fn rate_examples() {
        let p = ModelParams::chain(1.0, 1.0, 10.0, 10, Boundary::Open).unwrap();
        assert!((classical_rate(&p, &[1]).unwrap() - 0.2).abs() < 1e-15);
        let p = ModelParams::chain(2.0, 1.0, 10.0, 10, Boundary::Open).unwrap();
        assert!((classical_rate(&p, &[3]).unwrap() - 0.2 / 81.0).abs() < 1e-15);
        assert!(classical_rate(&p, &[0]).is_err());
    }

    #[test]
    fn ring_rates_symmetric() {
        let p = ModelParams::chain(1.5, 1.0, 10.0, 16, Boundary::Periodic).unwrap();
        let k = RateKernel::new(&p).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(k.rate(a, b), k.rate(b, a));
                if a != b {
                    let r = classical_rate(&p, &[b as i64 - a as i64]).unwrap();
                    assert!((k.rate(a, b) - r).abs() < 1e-16);
                }
            }
        }
    }

    #[test]
    fn periodic_distance_bounded() {
        let l = Lattice {
            d: 2,
            n: 7,
            bc: Boundary::Periodic,
        };
        for a in 0..l.len() {
            for b in 0..l.len() {
                let r = l.displacement(&l.unflatten(a).unwrap(), &l.unflatten(b).unwrap());
                assert!(r[0].abs() <= 3 && r[1].abs() <= 3);
            }
        }
    }

    #[test]
    fn open_escape_grows_with_n() {
        let mut prev = 0.0;
        for n in [4, 8, 16, 32, 64] {
            let p = ModelParams::chain(1.0, 1.0, 2.0, n, Boundary::Open).unwrap();
            let k = RateKernel::new(&p).unwrap();
            let e = k.escape_rate(0);
            assert!(e > prev && e < 2.0 * std::f64::consts::PI.powi(2) / 6.0);
            prev = e;
        }
    }

    #[test]
    fn fft_and_direct_generators_agree() {
        for (d, n, bc) in [
            (1, 600, Boundary::Open),
            (1, 600, Boundary::Periodic),
            (2, 24, Boundary::Open),
            (2, 24, Boundary::Periodic),
            (3, 9, Boundary::Open),
        ] {
            let p = ModelParams::new(d, 1.7, 1.0, 4.0, n, bc).unwrap();
            let fast = RateKernel::new(&p).unwrap();
            let x: Vec<f64> = (0..p.n_sites()).map(|k| ((k * 7919) % 101) as f64).collect();
            let mut a = vec![0.0; x.len()];
            let mut b = vec![0.0; x.len()];
            fast.apply(&x, &mut a);
            fast.apply_direct(&x, &mut b);
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() < 1e-10 * (1.0 + v.abs()), "{d} {n} {bc}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn params_serde_keys() {
        let p = ModelParams::chain(2.0, 1.0, 10.0, 64, Boundary::Open).unwrap();
        let s = toml::to_string(&p).unwrap();
        for key in ["d =", "alpha =", "J =", "gamma =", "N =", "bc = \"open\""] {
            assert!(s.contains(key), "{s}");
        }
        let back: ModelParams = toml::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(toml::from_str::<ModelParams>(&format!("{s}\nextra = 1")).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn flatten_roundtrip(d in 1usize..=3, n in 2usize..9, seed in 0usize..10_000) {
                let l = Lattice { d, n, bc: Boundary::Open };
                let flat = seed % l.len();
                let idx = l.unflatten(flat).unwrap();
                prop_assert_eq!(l.flatten(&idx).unwrap(), flat);
            }

            #[test]
            fn amplitude_even(r in -500i64..500, alpha in 0.5f64..4.0, periodic in any::<bool>()) {
                prop_assume!(r != 0);
                let bc = if periodic { Boundary::Periodic } else { Boundary::Open };
                let p = ModelParams::chain(alpha, 1.3, 1.0, 1001, bc).unwrap();
                let a = hopping_amplitude(&p, &[r]).unwrap();
                let b = hopping_amplitude(&p, &[-r]).unwrap();
                prop_assert!(a == b && a > 0.0 && a.is_finite());
            }
        }
    }
}
