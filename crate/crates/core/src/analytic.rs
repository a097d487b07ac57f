//! Closed-form and asymptotic quantities: lattice sums, the structure
//! function 𝒜, diffusion and Lévy coefficients, asymptotic profiles and the
//! Gaussian/power-law crossover.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{alpha_cr, min_image, Boundary, ModelParams};
use crate::quad;
use crate::specfn::{
    dawson, gamma_fn, gamma_upper, lambert_w0_neg, lambert_w_m1, polylog_circle, riemann_zeta,
    zeta_continued, DAWSON_RADIUS,
};

/// Which lattice a sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extent {
    Infinite,
    /// Periodic: all minimum-image displacements from one site.
    /// Open: all displacements from the center site (N/2 along each axis).
    Finite { n: usize, bc: Boundary },
}

fn check_dim(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::params(format!("d must be 1, 2 or 3, got {d}")))
    }
}

/// Σ_{r≠0} |r|^{-s}.
///
/// The infinite lattice uses 2ζ(s) in d = 1 and a theta-function split of the
/// Mellin representation in d ≥ 2; see [`lattice_sum_cutoff`] for the direct sum.
pub fn lattice_sum(s: f64, d: usize, extent: Extent) -> Result<f64> {
    check_dim(d)?;
    if !s.is_finite() {
        return Err(Error::domain("lattice_sum: s must be finite"));
    }
    match extent {
        Extent::Infinite => {
            if s <= d as f64 {
                return Err(Error::Divergent(format!(
                    "Σ|r|^-s over Z^{d} diverges for s = {s} <= d"
                )));
            }
            if d == 1 {
                Ok(2.0 * riemann_zeta(s)?)
            } else {
                Ok(epstein(s, d, &[0.0; 3][..d]))
            }
        }
        Extent::Finite { n, bc } => {
            if n < 2 {
                return Err(Error::params("finite lattice needs N >= 2"));
            }
            let center = (n / 2) as i64;
            let mut total = 0.0;
            let sites = n.pow(d as u32);
            for k in 0..sites {
                let mut rem = k;
                let mut r2 = 0i64;
                for _ in 0..d {
                    let c = (rem % n) as i64;
                    rem /= n;
                    let x = match bc {
                        Boundary::Periodic => min_image(c, n),
                        Boundary::Open => c - center,
                    };
                    r2 += x * x;
                }
                if r2 > 0 {
                    total += (r2 as f64).powf(-0.5 * s);
                }
            }
            Ok(total)
        }
    }
}

/// Default cutoff radius for [`lattice_sum_cutoff`].
pub fn default_cutoff(d: usize) -> f64 {
    match d {
        1 => 1e4,
        2 => 2000.0,
        _ => 300.0,
    }
}

/// Smooth window: 1 below `WINDOW_START`, 0 above 1.
const WINDOW_START: f64 = 0.5;

fn window(u: f64) -> f64 {
    if u <= WINDOW_START {
        return 1.0;
    }
    if u >= 1.0 {
        return 0.0;
    }
    let x = (u - WINDOW_START) / (1.0 - WINDOW_START);
    let a = (-1.0 / (1.0 - x)).exp();
    let b = (-1.0 / x).exp();
    a / (a + b)
}

fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// Infinite-lattice Σ_{r≠0}|r|^{-s} by direct summation over |r| ≤ R with a
/// smooth window, plus the integral of the windowed-out remainder.
pub fn lattice_sum_cutoff(s: f64, d: usize, cutoff: f64) -> Result<f64> {
    check_dim(d)?;
    if s <= d as f64 {
        return Err(Error::Divergent(format!(
            "Σ|r|^-s over Z^{d} diverges for s = {s} <= d"
        )));
    }
    if !(cutoff >= 4.0) {
        return Err(Error::params("cutoff must be at least 4"));
    }
    let rmax = cutoff.floor() as i64;
    let r2max = rmax * rmax;
    // multiplicity of each squared norm
    let mut counts = vec![0u64; r2max as usize + 1];
    match d {
        1 => {
            for x in 1..=rmax {
                counts[(x * x) as usize] += 2;
            }
        }
        2 => {
            for x in -rmax..=rmax {
                let rest = r2max - x * x;
                let ymax = (rest as f64).sqrt() as i64;
                for y in -ymax..=ymax {
                    counts[(x * x + y * y) as usize] += 1;
                }
            }
        }
        _ => {
            for x in -rmax..=rmax {
                for y in -rmax..=rmax {
                    let rest = r2max - x * x - y * y;
                    if rest < 0 {
                        continue;
                    }
                    let zmax = (rest as f64).sqrt() as i64;
                    for z in -zmax..=zmax {
                        counts[(x * x + y * y + z * z) as usize] += 1;
                    }
                }
            }
        }
    }
    let mut total = 0.0;
    for (r2, &c) in counts.iter().enumerate().skip(1).rev() {
        if c > 0 {
            let r = (r2 as f64).sqrt();
            total += c as f64 * (r2 as f64).powf(-0.5 * s) * window(r / cutoff);
        }
    }
    let p = d as f64 - 1.0 - s;
    let ramp = quad::integrate(|u| (1.0 - window(u)) * u.powf(p), WINDOW_START, 1.0, 16, 32);
    let tail = sphere_area(d) * cutoff.powf(d as f64 - s) * (ramp + 1.0 / (s - d as f64));
    Ok(total + tail)
}

/// Σ_{r≠0} |r|^{-s} cos(q·r) over Z^d via
/// |r|^{-s} = Γ(s/2)^{-1} ∫ t^{s/2-1} e^{-t r²} dt, split at t = 1: the
/// small-t part is Poisson-resummed, the large-t part summed directly.
fn epstein(s: f64, d: usize, q: &[f64]) -> f64 {
    let p = 0.5 * (s - d as f64);
    let half_d = 0.5 * d as f64;
    let images: i64 = 3;
    let span = (2 * images + 1) as usize;
    let mut small = 0.0;
    for combo in 0..span.pow(d as u32) {
        let mut rem = combo;
        let mut big_q = 0.0;
        for &qi in q {
            let g = (rem % span) as i64 - images;
            rem /= span;
            let k = qi + 2.0 * PI * g as f64;
            big_q += k * k;
        }
        let x = 0.25 * big_q;
        small += if x == 0.0 {
            1.0 / p
        } else if x > 700.0 {
            0.0
        } else {
            x.powf(p) * gamma_upper(-p, x)
        };
    }
    small = PI.powf(half_d) * small - 2.0 / s;

    let mut large = 0.0;
    let r2max: i64 = 64;
    let rmax = 8i64;
    let a = 0.5 * s;
    let mut visit = |r: [i64; 3]| {
        let r2: i64 = r.iter().map(|x| x * x).sum();
        if r2 == 0 || r2 > r2max {
            return;
        }
        let phase: f64 = r.iter().zip(q).map(|(&ri, &qi)| ri as f64 * qi).sum();
        large += phase.cos() * (r2 as f64).powf(-a) * gamma_upper(a, r2 as f64);
    };
    match d {
        1 => (-rmax..=rmax).for_each(|x| visit([x, 0, 0])),
        2 => {
            for x in -rmax..=rmax {
                for y in -rmax..=rmax {
                    visit([x, y, 0]);
                }
            }
        }
        _ => {
            for x in -rmax..=rmax {
                for y in -rmax..=rmax {
                    for z in -rmax..=rmax {
                        visit([x, y, z]);
                    }
                }
            }
        }
    }
    (small + large) / gamma_fn(a).expect("s > 0")
}

/// 𝒜_{2α,d}(q)/κ with the q = 0 value cached.
#[derive(Clone, Debug)]
pub struct StructureFunction {
    params: ModelParams,
    a0: f64,
}

impl StructureFunction {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        params.require_summable()?;
        let a0 = lattice_sum(2.0 * params.alpha, params.d, Extent::Infinite)?;
        Ok(StructureFunction {
            params: params.clone(),
            a0,
        })
    }

    /// 𝒜(0)/κ = Σ_{r≠0} r^{-2α}.
    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// 𝒜(q)/κ for |q_i| ≤ π.
    pub fn eval(&self, q: &[f64]) -> Result<f64> {
        let d = self.params.d;
        if q.len() != d {
            return Err(Error::domain(format!("q has {} components, expected {d}", q.len())));
        }
        if q.iter().any(|x| !(x.abs() <= PI + 1e-12)) {
            return Err(Error::domain("structure function needs |q_i| <= pi"));
        }
        let beta = 2.0 * self.params.alpha;
        if d == 1 {
            return Ok(2.0 * polylog_circle(beta, q[0].clamp(-PI, PI))?.re);
        }
        if q.iter().all(|&x| x == 0.0) {
            return Ok(self.a0);
        }
        Ok(epstein(beta, d, q))
    }
}

pub fn structure_function_eval(sf: &StructureFunction, q: &[f64]) -> Result<f64> {
    sf.eval(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionBranch {
    /// d = 1, 2α not an integer.
    Generic,
    /// d = 1, α a positive integer (exact).
    IntegerAlpha,
    /// d = 1, 2α an odd integer (logarithmic).
    HalfIntegerAlpha,
    HigherDimension,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expansion {
    /// Approximation of 𝒜(q)/κ.
    pub value: f64,
    pub branch: ExpansionBranch,
    /// Highest analytic power of q retained; `None` when the form is exact.
    pub truncation_order: Option<u32>,
}

/// Constant standing in for ζ(0) in the integer-α expansion.
pub const ZETA_0: f64 = -0.5;

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Near-origin expansion of 𝒜(q)/κ, branch chosen by the class of α.
pub fn small_q_expansion(params: &ModelParams, q: &[f64]) -> Result<Expansion> {
    let sf = StructureFunction::new(params)?;
    let (d, alpha) = (params.d, params.alpha);
    if q.len() != d {
        return Err(Error::domain(format!("q has {} components, expected {d}", q.len())));
    }
    let qn = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let branch = if d > 1 {
        ExpansionBranch::HigherDimension
    } else if is_integer(2.0 * alpha) {
        if (2.0 * alpha).round() as i64 % 2 == 0 {
            ExpansionBranch::IntegerAlpha
        } else {
            ExpansionBranch::HalfIntegerAlpha
        }
    } else {
        ExpansionBranch::Generic
    };
    let truncation_order = match branch {
        ExpansionBranch::Generic => Some(4),
        ExpansionBranch::IntegerAlpha => None,
        ExpansionBranch::HalfIntegerAlpha | ExpansionBranch::HigherDimension => Some(2),
    };
    if branch == ExpansionBranch::HigherDimension {
        let nu = 0.5 * d as f64 - alpha;
        if nu <= 0.0 && is_integer(nu) {
            return Err(Error::domain(format!(
                "Γ(d/2 - α) has a pole at d = {d}, α = {alpha}"
            )));
        }
    }
    if qn == 0.0 {
        return Ok(Expansion {
            value: sf.a0(),
            branch,
            truncation_order,
        });
    }
    let value = match branch {
        ExpansionBranch::Generic => {
            let c = c_alpha_polylog(alpha, 1.0)?;
            let mut v = -c * qn.powf(2.0 * alpha - 1.0);
            for j in 0..=2u32 {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                v += 2.0 * sign * zeta_continued(2.0 * alpha - 2.0 * j as f64) * qn.powi(2 * j as i32)
                    / factorial(2 * j);
            }
            v
        }
        ExpansionBranch::IntegerAlpha => {
            let a = alpha.round() as u32;
            let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
            let mut v = sign * PI / factorial(2 * a - 1) * qn.powi(2 * a as i32 - 1);
            for j in 0..=a {
                let z = if j == a {
                    ZETA_0
                } else {
                    riemann_zeta((2 * (a - j)) as f64)?
                };
                let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
                v += 2.0 * sj * z * qn.powi(2 * j as i32) / factorial(2 * j);
            }
            v
        }
        ExpansionBranch::HalfIntegerAlpha => {
            let s = (alpha - 0.5).round() as u32;
            let q2 = qn * qn;
            if s == 1 {
                0.5 * q2 * q2.ln() + 2.0 * riemann_zeta(3.0)? - 1.5 * q2
            } else {
                let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
                sign * qn.powi(2 * s as i32) / factorial(2 * s) * q2.ln()
                    + 2.0 * riemann_zeta((2 * s + 1) as f64)?
                    - riemann_zeta((2 * s - 1) as f64)? * q2
            }
        }
        ExpansionBranch::HigherDimension => {
            let mut v = sf.a0() - c_alpha_continuum(d, alpha, 1.0)? * qn.powf(2.0 * alpha - d as f64);
            if alpha > alpha_cr(d) {
                v -= 0.5 * lattice_sum(2.0 * alpha - 2.0, d, Extent::Infinite)? * qn * qn;
            }
            v
        }
    };
    Ok(Expansion {
        value,
        branch,
        truncation_order,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Levy,
    Mixed,
}

/// Which formula produced C_α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CAlphaForm {
    /// d = 1, -2κΓ(1-2α)sin(απ).
    Polylog,
    /// d = 1, α ∈ ℕ: (-1)^{α+1}πκ/(2α-1)!.
    Integer,
    /// d = 1, 2α odd: minus the coefficient of |q|^{2α-1} log q².
    Logarithmic,
    /// -κπ^{d/2}2^{d-2α}Γ(d/2-α)/Γ(α).
    Continuum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticCoefficients {
    /// Present only in the mixed regime.
    pub d_alpha: Option<f64>,
    /// Absent where the continuum formula hits a pole of Γ(d/2-α).
    pub c_alpha: Option<f64>,
    pub c_alpha_form: CAlphaForm,
    pub alpha_cr: f64,
    pub regime: Regime,
}

/// -2κΓ(1-2α)sin(απ), valid for 2α ∉ ℕ.
pub fn c_alpha_polylog(alpha: f64, kappa: f64) -> Result<f64> {
    if is_integer(2.0 * alpha) {
        return Err(Error::domain(format!(
            "the generic C_alpha needs 2 alpha not an integer (alpha = {alpha})"
        )));
    }
    Ok(-2.0 * kappa * gamma_fn(1.0 - 2.0 * alpha)? * (alpha * PI).sin())
}

/// -κπ^{d/2}2^{d-2α}Γ(d/2-α)/Γ(α).
pub fn c_alpha_continuum(d: usize, alpha: f64, kappa: f64) -> Result<f64> {
    check_dim(d)?;
    let dh = 0.5 * d as f64;
    Ok(-kappa * PI.powf(dh) * 2f64.powf(d as f64 - 2.0 * alpha) * gamma_fn(dh - alpha)?
        / gamma_fn(alpha)?)
}

/// D_α = κ Σ_{r≠0} r^{2-2α} / 2; refused for α ≤ α_cr.
pub fn diffusion_coefficient(params: &ModelParams) -> Result<f64> {
    let kappa = params.kappa()?;
    if params.alpha <= params.alpha_cr() {
        return Err(Error::Divergent(format!(
            "no finite diffusion coefficient for alpha = {} <= alpha_cr = {}",
            params.alpha,
            params.alpha_cr()
        )));
    }
    Ok(0.5 * kappa * lattice_sum(2.0 * params.alpha - 2.0, params.d, Extent::Infinite)?)
}

pub fn coefficients(params: &ModelParams) -> Result<AsymptoticCoefficients> {
    params.validate()?;
    params.require_summable()?;
    let kappa = params.kappa()?;
    let (d, alpha) = (params.d, params.alpha);
    let acr = alpha_cr(d);
    let regime = if alpha <= acr { Regime::Levy } else { Regime::Mixed };
    let d_alpha = match regime {
        Regime::Mixed => Some(diffusion_coefficient(params)?),
        Regime::Levy => None,
    };
    let (c_alpha, c_alpha_form) = if d == 1 {
        if is_integer(alpha) {
            let a = alpha.round() as u32;
            let sign = if a % 2 == 1 { 1.0 } else { -1.0 };
            (Some(sign * PI * kappa / factorial(2 * a - 1)), CAlphaForm::Integer)
        } else if is_integer(2.0 * alpha) {
            let s = (alpha - 0.5).round() as u32;
            let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
            (Some(-sign * kappa / factorial(2 * s)), CAlphaForm::Logarithmic)
        } else {
            (Some(c_alpha_polylog(alpha, kappa)?), CAlphaForm::Polylog)
        }
    } else {
        (c_alpha_continuum(d, alpha, kappa).ok(), CAlphaForm::Continuum)
    };
    Ok(AsymptoticCoefficients {
        d_alpha,
        c_alpha,
        c_alpha_form,
        alpha_cr: acr,
        regime,
    })
}

/// exp(-r²/4Dt)/(4πDt)^{d/2}.
pub fn gaussian_branch(r: f64, t: f64, d_alpha: f64, d: usize) -> f64 {
    let s = 4.0 * d_alpha * t;
    (-r * r / s).exp() / (PI * s).powf(0.5 * d as f64)
}

/// κt/r^{2α}.
pub fn tail_branch(r: f64, t: f64, kappa: f64, alpha: f64) -> f64 {
    kappa * t * r.powf(-2.0 * alpha)
}

/// Argument of W in the crossing equation.
fn crossing_argument(params: &ModelParams, t: f64, d_alpha: f64) -> Result<f64> {
    let kappa = params.kappa()?;
    let (d, alpha) = (params.d, params.alpha);
    let b = PI.powf(0.5 * d as f64) * kappa / (4.0 * d_alpha)
        * (4.0 * d_alpha * t).powf(alpha_cr(d) - alpha);
    Ok(-b.powf(1.0 / alpha) / alpha)
}

/// Density from the asymptotic forms (Lévy tail, or the larger of the
/// Gaussian and tail branches beyond the inner crossing).
pub fn asymptotic_profile(j: &[i64], t: f64, params: &ModelParams) -> Result<f64> {
    params.validate()?;
    params.require_summable()?;
    if j.len() != params.d {
        return Err(Error::domain(format!("j has {} components, expected {}", j.len(), params.d)));
    }
    if !(t > 0.0) {
        return Err(Error::domain("asymptotic_profile needs t > 0"));
    }
    let kappa = params.kappa()?;
    let r = (j.iter().map(|x| x * x).sum::<i64>() as f64).sqrt();
    if params.alpha <= params.alpha_cr() {
        if r == 0.0 {
            return Err(Error::domain(
                "the power-law branch is undefined at the origin; use the spectral solver",
            ));
        }
        return Ok(tail_branch(r, t, kappa, params.alpha));
    }
    let d_alpha = diffusion_coefficient(params)?;
    let g = gaussian_branch(r, t, d_alpha, params.d);
    if r == 0.0 {
        return Ok(g);
    }
    let arg = crossing_argument(params, t, d_alpha)?;
    if arg >= -1.0 / std::f64::consts::E {
        let x_inner = -params.alpha * lambert_w0_neg(arg)?;
        if r * r < 4.0 * d_alpha * t * x_inner {
            return Ok(g);
        }
    }
    Ok(g.max(tail_branch(r, t, kappa, params.alpha)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactProfile {
    pub value: f64,
    /// True when the Dawson closed form was replaced by its asymptotic series.
    pub asymptotic: bool,
}

/// Above this |D_F| the closed-form difference has lost all significant digits.
const DAWSON_CANCELLATION_LIMIT: f64 = 1e4;

/// Algebraic asymptotic series of D_F, truncated at its smallest term.
fn dawson_asymptotic(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = 0.5 / z;
    let mut sum = term;
    let mut prev = term.norm();
    for k in 0..200 {
        let next = term * ((2 * k + 1) as f64) / (2.0 * z2);
        if next.norm() >= prev {
            break;
        }
        sum += next;
        prev = next.norm();
        term = next;
    }
    sum
}

/// Exact α = 1, d = 1 profile from a delta at the origin on the infinite chain:
/// n_j = 2 Re D_F((πκt + ij)/√(2κt)) / (π√(2κt)).
pub fn exact_profile_alpha1(j: i64, t: f64, params: &ModelParams) -> Result<ExactProfile> {
    if params.d != 1 || (params.alpha - 1.0).abs() > 1e-12 {
        return Err(Error::domain("exact_profile_alpha1 needs d = 1 and alpha = 1"));
    }
    if !(t > 0.0) {
        return Err(Error::domain("exact_profile_alpha1 needs t > 0"));
    }
    let kappa = params.kappa()?;
    let sigma = (2.0 * kappa * t).sqrt();
    let z = Complex64::new(PI * kappa * t, j as f64) / sigma;
    let scale = 2.0 / (PI * sigma);
    if z.norm() <= DAWSON_RADIUS {
        let dz = dawson(z)?;
        if dz.norm() <= DAWSON_CANCELLATION_LIMIT {
            return Ok(ExactProfile {
                value: scale * dz.re,
                asymptotic: false,
            });
        }
    }
    Ok(ExactProfile {
        value: scale * dawson_asymptotic(z).re,
        asymptotic: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossoverScales {
    /// Outer Gaussian/tail crossing; absent for t < t_cr.
    pub xi_exact: Option<f64>,
    /// Large-t logarithmic form; absent where its logarithm is not positive.
    pub xi_approx: Option<f64>,
    pub t_cr: f64,
}

pub fn crossover(params: &ModelParams, t: f64) -> Result<CrossoverScales> {
    params.validate()?;
    let (d, alpha) = (params.d, params.alpha);
    let acr = alpha_cr(d);
    if alpha <= acr {
        return Err(Error::domain(format!(
            "crossover needs alpha > alpha_cr = {acr} (alpha = {alpha})"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain("crossover needs t > 0"));
    }
    let kappa = params.kappa()?;
    let dd = diffusion_coefficient(params)?;
    let pid = PI.powf(0.5 * d as f64);
    let t_cr = 1.0 / (4.0 * dd)
        * (pid * kappa * alpha.exp() / (4.0 * dd * alpha.powf(alpha))).powf(1.0 / (alpha - acr));
    let arg = crossing_argument(params, t, dd)?;
    let branch = -1.0 / std::f64::consts::E;
    let xi_exact = if arg < branch - 1e-13 {
        None
    } else {
        let w = lambert_w_m1(arg.max(branch))?;
        Some((-4.0 * alpha * dd * t * w).sqrt())
    };
    let l = (4.0 * alpha.powf(alpha) * dd / (pid * kappa) * (4.0 * dd * t).powf(alpha - acr)).ln();
    let xi_approx = (l > 0.0).then(|| (4.0 * dd * t * l).sqrt());
    Ok(CrossoverScales {
        xi_exact,
        xi_approx,
        t_cr,
    })
}

/// Ratio of squared diffusion lengths for α = 3 versus nearest-neighbour hopping.
pub fn forster_ratio(d: usize) -> Result<f64> {
    check_dim(d)?;
    Ok(lattice_sum(4.0, d, Extent::Infinite)? / (2.0 * d as f64))
}
