//! Type-I discrete sine transform on complex data, computed through a
//! length-`2M` complex FFT of the odd extension.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unnormalized DST-I of order `M`:
/// `S_k = Σ_{j=1}^{M-1} x_j sin(π k j / M)` for `k = 1..M-1`.
///
/// The transform is its own inverse up to the factor `2/M`.
#[derive(Clone)]
pub struct Dst {
    m: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Dst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dst").field("m", &self.m).finish()
    }
}

impl Dst {
    pub fn new(m: usize) -> Self {
        assert!(m >= 2, "DST order must be at least 2");
        let fft = FftPlanner::new().plan_fft_forward(2 * m);
        Self { m, fft }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Transforms `input[0..len]` (interpreted as `x_1..x_len`, zero beyond)
    /// and writes `S_1..S_{out.len()}` into `out`. Both lengths must be
    /// at most `M - 1`.
    pub fn apply(&self, input: &[Complex64], out: &mut [Complex64]) {
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * self.m];
        self.apply_with(input, out, &mut buf);
    }

    /// Same as [`Dst::apply`] with a caller-provided work buffer of
    /// length `2M`.
    pub fn apply_with(&self, input: &[Complex64], out: &mut [Complex64], buf: &mut [Complex64]) {
        let m = self.m;
        assert!(input.len() < m && out.len() < m, "DST length exceeds M - 1");
        assert_eq!(buf.len(), 2 * m);
        let zero = Complex64::new(0.0, 0.0);
        buf.iter_mut().for_each(|b| *b = zero);
        for (j, &x) in input.iter().enumerate() {
            buf[j + 1] = x;
            buf[2 * m - j - 1] = -x;
        }
        self.fft.process(buf);
        // FFT of the odd extension: X_k = -2i S_k.
        for (k, o) in out.iter_mut().enumerate() {
            let x = buf[k + 1];
            *o = Complex64::new(-x.im * 0.5, x.re * 0.5);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive(input: &[Complex64], m: usize) -> Vec<Complex64> {
        (1..m)
            .map(|k| {
                input
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| x * (PI * (k * (j + 1)) as f64 / m as f64).sin())
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let m = 12;
        let input: Vec<Complex64> = (0..m - 1)
            .map(|j| Complex64::new((j as f64).sin(), (j as f64 * 0.3).cos()))
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); m - 1];
        Dst::new(m).apply(&input, &mut out);
        for (a, b) in out.iter().zip(naive(&input, m)) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn self_inverse_up_to_scale() {
        let m = 33;
        let dst = Dst::new(m);
        let input: Vec<Complex64> = (0..m - 1).map(|j| Complex64::new(j as f64, -(j as f64).sqrt())).collect();
        let mut once = vec![Complex64::new(0.0, 0.0); m - 1];
        let mut twice = vec![Complex64::new(0.0, 0.0); m - 1];
        dst.apply(&input, &mut once);
        dst.apply(&once, &mut twice);
        for (a, b) in twice.iter().zip(&input) {
            assert!((a * (2.0 / m as f64) - b).norm() < 1e-10);
        }
    }
}
