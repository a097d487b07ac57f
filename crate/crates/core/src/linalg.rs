//! Dense complex matrices and a non-Hermitian eigensolver
//! (Householder Hessenberg reduction, single-shift QR, back substitution).

use num_complex::Complex64;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        CMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Inverse by LU with partial pivoting.
    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (piv, pmax) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= EPS * scale * 1e-4 {
                return Err(Error::Conditioning { cond: f64::INFINITY });
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition A V = V diag(values); columns of V have unit 2-norm.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
    pub inverse: CMatrix,
    /// ‖V‖₁ ‖V⁻¹‖₁
    pub condition: f64,
}

/// Eigenvalues only.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let mut h = a.clone();
    hessenberg(&mut h, None);
    schur(&mut h, None)
}

/// Eigenvalues, right eigenvectors and their inverse (rows are left eigenvectors).
pub fn eigen(a: &CMatrix) -> Result<Eigen> {
    let n = a.n;
    let mut t = a.clone();
    let mut z = CMatrix::identity(n);
    hessenberg(&mut t, Some(&mut z));
    let values = schur(&mut t, Some(&mut z))?;
    let x = triangular_vectors(&t);
    let mut vectors = z.matmul(&x);
    for j in 0..n {
        let norm = (0..n).map(|i| vectors[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            vectors[(i, j)] /= norm;
        }
    }
    let inverse = vectors.inverse()?;
    let condition = vectors.norm1() * inverse.norm1();
    Ok(Eigen {
        values,
        vectors,
        inverse,
        condition,
    })
}

fn hessenberg(a: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vnorm;
        }
        // A ← (I - 2vv^H) A
        for j in k..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * a[(i, j)]).sum();
            let s2 = s * 2.0;
            for i in k + 1..n {
                a[(i, j)] -= v[i] * s2;
            }
        }
        // A ← A (I - 2vv^H)
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum();
            let s2 = s * 2.0;
            for j in k + 1..n {
                a[(i, j)] -= s2 * v[j].conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let s: Complex64 = (k + 1..n).map(|j| q[(i, j)] * v[j]).sum();
                let s2 = s * 2.0;
                for j in k + 1..n {
                    q[(i, j)] -= s2 * v[j].conj();
                }
            }
        }
    }
}

/// Complex Givens rotation [[c, s], [-s̄, c]] mapping (x, y) to (r, 0).
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Single-shift QR on an upper Hessenberg matrix. With `z`, the full Schur
/// form is accumulated in `h` and the transformations in `z`.
fn schur(h: &mut CMatrix, mut z: Option<&mut CMatrix>) -> Result<Vec<Complex64>> {
    let n = h.n;
    let want_t = z.is_some();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(w);
    }
    let norm = h.max_abs();
    let small = f64::MIN_POSITIVE * (n as f64 / EPS);
    let mut ihi = n - 1;
    let max_its = 30 * n.max(10);
    loop {
        let mut its = 0;
        loop {
            // locate a negligible subdiagonal entry
            let mut l = ihi;
            while l > 0 {
                let sub = h[(l, l - 1)].norm();
                let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
                let tol = if diag == 0.0 { EPS * norm } else { EPS * diag };
                if sub <= tol.max(small) {
                    h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                    break;
                }
                l -= 1;
            }
            if l == ihi {
                w[ihi] = h[(ihi, ihi)];
                break;
            }
            its += 1;
            if its > max_its {
                return Err(Error::Spectral(format!(
                    "QR iteration did not converge for eigenvalue {ihi}"
                )));
            }
            let mu = if its % 10 == 0 {
                h[(ihi, ihi)] + h[(ihi, ihi - 1)].norm() * 0.75
            } else {
                let a = h[(ihi - 1, ihi - 1)];
                let b = h[(ihi - 1, ihi)];
                let c = h[(ihi, ihi - 1)];
                let d = h[(ihi, ihi)];
                let half = (a - d) * 0.5;
                let disc = (half * half + b * c).sqrt();
                let m1 = d + half + disc;
                let m2 = d + half - disc;
                if (m1 - d).norm() < (m2 - d).norm() {
                    m1
                } else {
                    m2
                }
            };
            let (col_hi, row_lo) = if want_t { (n - 1, 0) } else { (ihi, l) };
            let mut x = h[(l, l)] - mu;
            let mut y = h[(l + 1, l)];
            for k in l..ihi {
                if k > l {
                    x = h[(k, k - 1)];
                    y = h[(k + 1, k - 1)];
                }
                let (c, s) = givens(x, y);
                let start = if k > l { k - 1 } else { k };
                for j in start..=col_hi {
                    let a = h[(k, j)];
                    let b = h[(k + 1, j)];
                    h[(k, j)] = a * c + s * b;
                    h[(k + 1, j)] = -s.conj() * a + b * c;
                }
                if k > l {
                    h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
                }
                let end = (k + 2).min(ihi);
                for i in row_lo..=end {
                    let a = h[(i, k)];
                    let b = h[(i, k + 1)];
                    h[(i, k)] = a * c + b * s.conj();
                    h[(i, k + 1)] = -a * s + b * c;
                }
                if let Some(z) = z.as_deref_mut() {
                    for i in 0..n {
                        let a = z[(i, k)];
                        let b = z[(i, k + 1)];
                        z[(i, k)] = a * c + b * s.conj();
                        z[(i, k + 1)] = -a * s + b * c;
                    }
                }
            }
        }
        if ihi == 0 {
            break;
        }
        ihi -= 1;
    }
    Ok(w)
}

/// Eigenvectors of an upper triangular matrix (columns, unnormalized).
fn triangular_vectors(t: &CMatrix) -> CMatrix {
    let n = t.n;
    let mut x = CMatrix::zeros(n);
    let small = EPS * t.max_abs().max(f64::MIN_POSITIVE);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * x[(j, k)]).sum();
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            x[(i, k)] = -s / d;
            let big = x[(i, k)].norm();
            if big > 1e150 {
                for j in i..=k {
                    x[(j, k)] /= big;
                }
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn residuals_and_inverse() {
        for (n, seed) in [(1, 1), (2, 2), (5, 3), (40, 4), (97, 5)] {
            let a = random(n, seed);
            let e = eigen(&a).unwrap();
            for k in 0..n {
                let v = e.vectors.column(k);
                let av = a.matvec(&v);
                let res: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - e.values[k] * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-11 * a.norm1().max(1.0), "n={n} k={k} res={res}");
            }
            let prod = e.inverse.matmul(&e.vectors);
            let err = CMatrix::from_fn(n, |i, j| prod[(i, j)] - Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
            assert!(err.max_abs() < 1e-10);
            assert!(e.condition >= 1.0);
            let mut only = eigenvalues(&a).unwrap();
            let mut full = e.values.clone();
            let key = |z: &Complex64| (z.re, z.im);
            only.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
            full.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
            for (x, y) in only.iter().zip(&full) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn known_spectra() {
        // triangular: eigenvalues on the diagonal
        let t = CMatrix::from_fn(6, |i, j| if j >= i { Complex64::new((i + 1) as f64, j as f64) } else { Complex64::new(0.0, 0.0) });
        let mut ev = eigenvalues(&t).unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (i, e) in ev.iter().enumerate() {
            assert!((e - Complex64::new((i + 1) as f64, i as f64)).norm() < 1e-12);
        }
        // rotation generator: ±i
        let r = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(-1.0, 0.0),
            (1, 0) => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        });
        let ev = eigenvalues(&r).unwrap();
        assert!(ev.iter().any(|z| (z - Complex64::i()).norm() < 1e-14));
        assert!(ev.iter().any(|z| (z + Complex64::i()).norm() < 1e-14));
    }

    #[test]
    fn trace_and_determinant() {
        let a = random(30, 9);
        let ev = eigenvalues(&a).unwrap();
        let tr: Complex64 = (0..30).map(|i| a[(i, i)]).sum();
        let sum: Complex64 = ev.iter().sum();
        assert!((tr - sum).norm() < 1e-11);
    }

    #[test]
    fn singular_inverse_refused() {
        let a = CMatrix::from_fn(3, |i, _| Complex64::new(i as f64, 0.0));
        assert!(matches!(a.inverse(), Err(Error::Conditioning { .. })));
    }
}
