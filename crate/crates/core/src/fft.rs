//! Separable d-dimensional FFTs and the two lattice convolutions built on them.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Row-major d-dimensional complex FFT (axis 0 slowest).
pub(crate) struct NdFft {
    dims: Vec<usize>,
    fwd: Vec<Arc<dyn Fft<f64>>>,
    inv: Vec<Arc<dyn Fft<f64>>>,
}

impl NdFft {
    pub fn new(dims: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = dims.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inv = dims.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        NdFft {
            dims: dims.to_vec(),
            fwd,
            inv,
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd);
    }

    /// Inverse transform including the 1/len normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    fn run(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        assert_eq!(data.len(), self.len());
        let total = self.len();
        for (axis, plan) in plans.iter().enumerate() {
            let n = self.dims[axis];
            let stride: usize = self.dims[axis + 1..].iter().product();
            if stride == 1 {
                plan.process(data);
                continue;
            }
            let block = n * stride;
            let mut line = vec![Complex64::default(); n];
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = data[base + k * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Cyclic convolution on an `n^d` torus with a fixed real, even kernel.
pub(crate) struct CyclicConvolution {
    fft: NdFft,
    kernel_hat: Vec<Complex64>,
}

impl CyclicConvolution {
    /// `kernel[k]` is the weight of displacement `k` (row-major, wrapped).
    pub fn new(d: usize, n: usize, kernel: &[f64]) -> Self {
        let fft = NdFft::new(&vec![n; d]);
        let mut kernel_hat: Vec<Complex64> =
            kernel.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        fft.forward(&mut kernel_hat);
        CyclicConvolution { fft, kernel_hat }
    }

    pub fn apply(&self, input: &[f64], out: &mut [f64]) {
        let mut buf: Vec<Complex64> = input.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fft.forward(&mut buf);
        buf.iter_mut()
            .zip(&self.kernel_hat)
            .for_each(|(b, k)| *b *= k);
        self.fft.inverse(&mut buf);
        out.iter_mut().zip(&buf).for_each(|(o, b)| *o = b.re);
    }
}

/// Linear (non-wrapping) convolution of an `n^d` field with a displacement kernel
/// defined for every component in `-(n-1)..=(n-1)`, via zero padding to `(2n)^d`.
pub(crate) struct PaddedConvolution {
    d: usize,
    n: usize,
    fft: NdFft,
    kernel_hat: Vec<Complex64>,
}

impl PaddedConvolution {
    /// `weight` maps a displacement (only the first `d` entries meaningful) to its weight.
    pub fn new(d: usize, n: usize, weight: impl Fn(&[i64; 3]) -> f64) -> Self {
        let m = 2 * n;
        let fft = NdFft::new(&vec![m; d]);
        let len = fft.len();
        let mut kernel_hat = vec![Complex64::default(); len];
        for (p, slot) in kernel_hat.iter_mut().enumerate() {
            let mut rem = p;
            let mut disp = [0i64; 3];
            let mut inside = true;
            for axis in (0..d).rev() {
                let c = rem % m;
                rem /= m;
                if c == n {
                    inside = false;
                }
                disp[axis] = if c < n { c as i64 } else { c as i64 - m as i64 };
            }
            if inside {
                slot.re = weight(&disp);
            }
        }
        fft.forward(&mut kernel_hat);
        PaddedConvolution {
            d,
            n,
            fft,
            kernel_hat,
        }
    }

    pub fn apply(&self, input: &[f64], out: &mut [f64]) {
        let (d, n, m) = (self.d, self.n, 2 * self.n);
        let mut buf = vec![Complex64::default(); self.fft.len()];
        for (idx, &x) in input.iter().enumerate() {
            buf[embed(idx, d, n, m)].re = x;
        }
        self.fft.forward(&mut buf);
        buf.iter_mut()
            .zip(&self.kernel_hat)
            .for_each(|(b, k)| *b *= k);
        self.fft.inverse(&mut buf);
        for (idx, o) in out.iter_mut().enumerate() {
            *o = buf[embed(idx, d, n, m)].re;
        }
    }
}

fn embed(idx: usize, d: usize, n: usize, m: usize) -> usize {
    let mut rem = idx;
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..d {
        out += (rem % n) * scale;
        rem /= n;
        scale *= m;
    }
    out
}
