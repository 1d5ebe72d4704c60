//! Quadrature evaluation of the spectral projectors through their
//! explicit kernel `(1/2π²) Z_k(d(P, Q))`.
//!
//! For zonal `f` the kernel integral reduces to
//! `(1/π) ∫₀^π ∫₀^π Z_k(γ) f(θ') sin²θ' sin ψ dψ dθ'` with
//! `cos γ = cos θ cos θ' + sin θ sin θ' cos ψ`. The θ' integral uses the
//! interior trapezoid rule of order `Mq`; the ψ integral is taken in the
//! variable `cos ψ` with a Gauss–Legendre rule of the same order. Nothing
//! here goes through the sine transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::SphereGrid;
use super::quadrature::gauss_legendre;
use super::zonal::{analyze, ZonalField};
use crate::error::{Error, Result};

/// Precomputed kernel matrices for modes `1..=k_max`.
#[derive(Debug, Clone)]
pub struct KernelOracle {
    k_max: usize,
    out_grid: SphereGrid,
    quad_order: usize,
    /// `kernels[k-1][i * Mq + j]`: `(1/π)(π/Mq) sin²θ'_j ∫ Z_k(γ) sin ψ dψ`
    /// at output node `θ_i`.
    kernels: Vec<Vec<f64>>,
}

impl KernelOracle {
    /// Builds kernels for `k ≤ k_max`, evaluated on the order-`out_order`
    /// grid, with quadrature order `quad_order` in both variables.
    pub fn new(k_max: usize, out_order: usize, quad_order: usize) -> Result<Self> {
        if quad_order < 64 {
            return Err(Error::Domain(format!("quadrature order Mq = {quad_order} must be at least 64")));
        }
        if k_max == 0 {
            return Err(Error::Domain("k_max must be at least 1".into()));
        }
        let out_grid = SphereGrid::new(out_order.max(k_max + 1).max(4))?;
        let (c, w) = gauss_legendre(quad_order);
        let h = PI / quad_order as f64;
        let inner: Vec<(f64, f64)> = (1..quad_order).map(|j| (j as f64 * h).sin_cos()).collect();
        let mut kernels = vec![vec![0.0; out_grid.len() * (quad_order - 1)]; k_max];
        let mut acc = vec![0.0; k_max];
        let mut u = vec![0.0; k_max];
        for (i, &theta) in out_grid.nodes().iter().enumerate() {
            let (s, co) = theta.sin_cos();
            for (j, &(sp, cp)) in inner.iter().enumerate() {
                acc.iter_mut().for_each(|a| *a = 0.0);
                for (&cl, &wl) in c.iter().zip(&w) {
                    let x = (co * cp + s * sp * cl).clamp(-1.0, 1.0);
                    // Z_k(γ) = k U_{k-1}(cos γ), second-kind Chebyshev recurrence.
                    u[0] = 1.0;
                    if k_max > 1 {
                        u[1] = 2.0 * x;
                    }
                    for k in 2..k_max {
                        u[k] = 2.0 * x * u[k - 1] - u[k - 2];
                    }
                    for (a, &uk) in acc.iter_mut().zip(&u) {
                        *a += wl * uk;
                    }
                }
                let factor = h * sp * sp / PI;
                for (k, a) in acc.iter().enumerate() {
                    kernels[k][i * (quad_order - 1) + j] = (k + 1) as f64 * a * factor;
                }
            }
        }
        Ok(Self { k_max, out_grid, quad_order, kernels })
    }

    pub fn output_grid(&self) -> &SphereGrid {
        &self.out_grid
    }

    /// `π_k f` by kernel quadrature, returned with the truncation of `f`.
    pub fn apply(&self, field: &ZonalField, k: usize) -> Result<ZonalField> {
        if k == 0 || k > self.k_max {
            return Err(Error::Domain(format!("mode {k} outside the oracle range 1..={}", self.k_max)));
        }
        if field.truncation() >= self.out_grid.order() {
            return Err(Error::Truncation(format!(
                "field truncation {} exceeds the oracle output grid",
                field.truncation()
            )));
        }
        let mq = self.quad_order;
        // Input values by direct summation of the eigenfunction series.
        let f: Vec<Complex64> = (1..mq).map(|j| field.eval(j as f64 * PI / mq as f64)).collect();
        let kern = &self.kernels[k - 1];
        let values: Vec<Complex64> = (0..self.out_grid.len())
            .map(|i| {
                kern[i * (mq - 1)..(i + 1) * (mq - 1)]
                    .iter()
                    .zip(&f)
                    .map(|(&kv, &fv)| fv * kv)
                    .sum()
            })
            .collect();
        analyze(&values, &self.out_grid, field.truncation())
    }
}

/// Independent quadrature evaluation of `π_k f` at order `Mq ≥ 64`.
pub fn projector_kernel_oracle(field: &ZonalField, k: usize, quad_order: usize) -> Result<ZonalField> {
    if k > field.truncation() {
        return Err(Error::Domain(format!("mode {k} exceeds field truncation {}", field.truncation())));
    }
    KernelOracle::new(k, field.truncation() + 1, quad_order)?.apply(field, k)
}
