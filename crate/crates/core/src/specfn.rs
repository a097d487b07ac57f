//! Special functions: zeta, polylogarithm on the unit circle, gamma,
//! Lambert W (branch -1) and the complex Dawson integral.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// B_{2j} for j = 1..=10.
const BERNOULLI_2J: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const EM_TERMS: usize = 24;

/// Euler-Maclaurin with `EM_TERMS` explicit terms and ten Bernoulli corrections.
/// Valid for any real s != 1 with s > -19; the remainder is below 1e-16 for s > 0.
fn zeta_em(s: f64) -> f64 {
    let n = EM_TERMS as f64;
    let mut sum = 0.0;
    for k in (1..EM_TERMS).rev() {
        sum += (k as f64).powf(-s);
    }
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        if j > 0 {
            let m = 2.0 * j as f64;
            rising *= (s + m - 1.0) * (s + m);
            fact *= (m + 1.0) * (m + 2.0);
            npow /= n * n;
        }
        sum += b / fact * rising * npow;
    }
    sum
}

/// Riemann zeta for s > 1.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::domain(format!("riemann_zeta needs s > 1, got {s}")));
    }
    if s > 60.0 {
        return Ok(1.0 + 2f64.powf(-s) + 3f64.powf(-s));
    }
    Ok(zeta_em(s))
}

/// Analytic continuation of zeta to s != 1. Only the small-q expansions use it;
/// the public `riemann_zeta` keeps the s > 1 contract.
pub(crate) fn zeta_continued(s: f64) -> f64 {
    if s >= 0.0 {
        return zeta_em(s);
    }
    if s == s.round() && (s as i64) % 2 == 0 {
        return 0.0;
    }
    // functional equation
    let t = 1.0 - s;
    2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma_unchecked(t) * zeta_em(t)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    if x == x.round() && x <= 171.0 {
        return (1..(x as u32)).fold(1.0, |acc, k| acc * k as f64);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    // split the power to delay overflow
    let p = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * p * (-t).exp() * p * a
}

/// Gamma function; poles at the non-positive integers are refused.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() || (x <= 0.0 && x == x.round()) {
        return Err(Error::domain(format!("gamma_fn has a pole at {x}")));
    }
    Ok(gamma_unchecked(x))
}

/// Li_β(e^{iq}) for q in (-π, π].
///
/// Uses the expansion about the point 1,
/// Li_β(e^μ) = Γ(1-β)(-μ)^{β-1} + Σ_k ζ(β-k) μ^k/k!, convergent for |μ| < 2π,
/// with the harmonic-number form at integer β.
pub fn polylog_circle(beta: f64, q: f64) -> Result<ComplexValue> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("polylog_circle needs beta > 0, got {beta}")));
    }
    if !(q > -PI - 1e-12 && q <= PI + 1e-12) {
        return Err(Error::domain(format!("q = {q} outside (-pi, pi]")));
    }
    if q == 0.0 {
        if beta <= 1.0 {
            return Err(Error::Divergent(format!(
                "Li_{beta}(1) diverges for beta <= 1"
            )));
        }
        return Ok(Complex64::new(riemann_zeta(beta)?, 0.0));
    }
    let mu = Complex64::new(0.0, q);
    let log_neg_mu = Complex64::new(q.abs().ln(), -0.5 * PI * q.signum());
    let integer = (beta - beta.round()).abs() < 1e-12;
    let n_int = beta.round() as i64;

    let mut sum = Complex64::new(0.0, 0.0);
    if !integer {
        sum += gamma_unchecked(1.0 - beta) * ((beta - 1.0) * log_neg_mu).exp();
    }
    let mut pow = Complex64::new(1.0, 0.0); // μ^k / k!
    let mut small = 0;
    for k in 0..400i64 {
        if k > 0 {
            pow *= mu / k as f64;
        }
        let term = if integer && k == n_int - 1 {
            let harmonic: f64 = (1..=k).map(|i| 1.0 / i as f64).sum();
            pow * (harmonic - log_neg_mu)
        } else {
            pow * zeta_continued(beta - k as f64)
        };
        sum += term;
        if k > beta as i64 + 2 && term.norm() < 1e-17 * sum.norm().max(1e-300) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    Ok(sum)
}

/// Branch -1 of the Lambert W function on [-1/e, 0).
pub fn lambert_w_m1(y: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if y.is_nan() || y >= 0.0 || y < branch - 1e-15 {
        return Err(Error::domain(format!(
            "lambert_w_m1 needs y in [-1/e, 0), got {y}"
        )));
    }
    let s = 1.0 + E * y;
    if s <= 0.0 {
        return Ok(-1.0);
    }
    let mut w = if y < -0.25 {
        let p = -(2.0 * s).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        let l1 = (-y).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - y;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = (w - step).min(-1.0);
        let done = (next - w).abs() <= 1e-15 * w.abs();
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

/// Principal branch W_0 on [-1/e, 0); only the inner Gaussian/tail crossing needs it.
pub(crate) fn lambert_w0_neg(y: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if y.is_nan() || y >= 0.0 || y < branch - 1e-15 {
        return Err(Error::domain(format!("lambert_w0 needs y in [-1/e, 0), got {y}")));
    }
    let s = 1.0 + E * y;
    if s <= 0.0 {
        return Ok(-1.0);
    }
    let mut w = if y < -0.25 {
        let p = (2.0 * s).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        y * (1.0 - y)
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - y;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = (w - step).clamp(-1.0, 0.0);
        let done = (next - w).abs() <= 1e-15 * w.abs().max(1e-300);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

/// Upper incomplete gamma Γ(a, x) for real a and x > 0.
pub(crate) fn gamma_upper(a: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if a > 0.0 {
        if x > a + 1.0 {
            gamma_upper_cf(a, x)
        } else {
            gamma_unchecked(a) - gamma_lower_series(a, x)
        }
    } else if x > 1.5 {
        gamma_upper_cf(a, x)
    } else {
        // recur down from the fractional part: Γ(k, x) = (Γ(k+1, x) - x^k e^{-x}) / k
        let frac = a - a.floor();
        let mut k = frac;
        let mut g = if frac == 0.0 {
            expint_e1(x)
        } else {
            gamma_unchecked(frac) - gamma_lower_series(frac, x)
        };
        while k > a + 0.5 {
            k -= 1.0;
            g = (g - x.powf(k) * (-x).exp()) / k;
        }
        g
    }
}

fn gamma_lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..500 {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * (a * x.ln() - x).exp()
}

fn gamma_upper_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

fn expint_e1(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..500 {
        term *= -x / n as f64;
        let t = term / n as f64;
        sum += t;
        if t.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER - x.ln() - sum
}

/// Largest |z| accepted by `dawson`.
pub const DAWSON_RADIUS: f64 = 25.0;

/// Dawson integral D_F(z) = e^{-z²} ∫_0^z e^{u²} du for complex z, |z| ≤ 25.
///
/// Integrates D' = 1 - 2zD along the ray from the origin by local Taylor
/// series (step ≤ 0.5/|z|), after mapping z to the first quadrant.
pub fn dawson(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > DAWSON_RADIUS {
        return Err(Error::Accuracy(format!(
            "dawson: |z| = {} outside the stability radius {DAWSON_RADIUS}",
            z.norm()
        )));
    }
    let flip = z.re < 0.0;
    let w = if flip { -z } else { z };
    let conj = w.im < 0.0;
    let w = if conj { w.conj() } else { w };
    let mut d = dawson_ray(w);
    if conj {
        d = d.conj();
    }
    if flip {
        d = -d;
    }
    Ok(d)
}

fn dawson_ray(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let dir = z / r;
    let mut pos = 0.0;
    let mut d = Complex64::new(0.0, 0.0);
    while pos < r {
        let h = (0.5f64).min(0.5 / pos.max(1e-300)).min(r - pos);
        let z0 = dir * pos;
        let w = dir * h;
        // Taylor coefficients of D about z0
        let mut a_prev = d;
        let mut a_cur = Complex64::new(1.0, 0.0) - 2.0 * z0 * d;
        let mut wp = w;
        let mut sum = d + a_cur * w;
        let mut small = 0;
        for n in 1..400 {
            let a_next = (-2.0 * z0 * a_cur - 2.0 * a_prev) / (n as f64 + 1.0);
            wp *= w;
            let term = a_next * wp;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            a_prev = a_cur;
            a_cur = a_next;
        }
        d = sum;
        pos += h;
    }
    d
}

/// Real Dawson function, same algorithm restricted to the real axis.
pub fn dawson_real(x: f64) -> Result<f64> {
    Ok(dawson(Complex64::new(x, 0.0))?.re)
}
