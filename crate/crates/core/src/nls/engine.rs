//! Split-step machinery shared by the three radial problems.
//!
//! Each geometry uses a sine series `u(x) = Σ b_k sin(ω k x) / (√(2πΛ) w(x))`
//! on `[0, Λ]`, orthonormal in `L²` with measure `4π w(x)² dx`. The sphere
//! has `w = sin θ`, `Λ = π`; the ball and the Euclidean domain have `w = r`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::transform::Dst;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The three radial problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Zonal functions on S³; eigenvalues `k²` of `L = 1 - Δ`.
    Sphere,
    /// Radial functions on `B(0, π)` with Dirichlet condition; eigenvalues
    /// `k²` of `-Δ`.
    Ball,
    /// Radial functions on `B(0, R)` vanishing at `R`; eigenvalues
    /// `(kπ/R)² + mass` of `-Δ + mass`.
    Euclidean { radius: f64, mass: f64 },
}

impl Geometry {
    pub fn length(&self) -> f64 {
        match *self {
            Geometry::Sphere | Geometry::Ball => PI,
            Geometry::Euclidean { radius, .. } => radius,
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        match self {
            Geometry::Sphere => x.sin(),
            _ => x,
        }
    }

    /// Eigenvalue of the linear operator on mode `k`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        match *self {
            Geometry::Sphere | Geometry::Ball => (k * k) as f64,
            Geometry::Euclidean { radius, mass } => (k as f64 * PI / radius).powi(2) + mass,
        }
    }

    /// `∫|∇e_k|²` for the normalized mode `e_k`.
    pub fn gradient_eigenvalue(&self, k: usize) -> f64 {
        match *self {
            Geometry::Sphere => (k * k) as f64 - 1.0,
            Geometry::Ball => (k * k) as f64,
            Geometry::Euclidean { radius, .. } => (k as f64 * PI / radius).powi(2),
        }
    }

    /// `√(2πΛ)`.
    pub fn mode_norm(&self) -> f64 {
        (2.0 * PI * self.length()).sqrt()
    }

    /// Pointwise value of the normalized mode `k` at `x`, with the limits
    /// at `x = 0` (and at `θ = π` on the sphere).
    pub fn mode_value(&self, k: usize, x: f64) -> f64 {
        let omega = PI / self.length();
        let kx = k as f64 * omega * x;
        let w = self.weight(x);
        let ratio = if w.abs() > 1e-8 {
            kx.sin() / w
        } else {
            match self {
                Geometry::Sphere if x > 1.0 => {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign * k as f64
                }
                _ => k as f64 * omega,
            }
        };
        ratio / self.mode_norm()
    }
}

/// Transforms, quadrature and sub-flows for one geometry at truncation `K`
/// on the order-`M` node set `x_j = jΛ/M`.
#[derive(Debug, Clone)]
pub struct RadialEngine {
    geometry: Geometry,
    truncation: usize,
    m: usize,
    dst: Dst,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `4π (Λ/M) w(x_j)²`.
    quadrature: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl RadialEngine {
    pub fn new(geometry: Geometry, truncation: usize, m: usize) -> Result<Self> {
        if truncation == 0 || truncation >= m {
            return Err(Error::Truncation(format!("need 1 <= K < M (K = {truncation}, M = {m})")));
        }
        if m < 4 {
            return Err(Error::InvalidGrid(format!("grid order M = {m} must be at least 4")));
        }
        if let Geometry::Euclidean { radius, mass } = geometry {
            if !(radius > 0.0 && radius.is_finite() && mass.is_finite()) {
                return Err(Error::Domain(format!("invalid Euclidean domain (R = {radius}, mass = {mass})")));
            }
        }
        let h = geometry.length() / m as f64;
        let nodes: Vec<f64> = (1..m).map(|j| j as f64 * h).collect();
        let weights: Vec<f64> = nodes.iter().map(|&x| geometry.weight(x)).collect();
        let quadrature = weights.iter().map(|w| 4.0 * PI * h * w * w).collect();
        let eigenvalues = (1..=truncation).map(|k| geometry.eigenvalue(k)).collect();
        Ok(Self { geometry, truncation, m, dst: Dst::new(m), nodes, weights, quadrature, eigenvalues })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `4π (Λ/M) w(x_j)²`, the weights of `∫ f dx` over the radial domain.
    pub fn quadrature(&self) -> &[f64] {
        &self.quadrature
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Node values from coefficients (length `≤ M - 1`).
    pub fn synthesize(&self, coeffs: &[Complex64], out: &mut [Complex64], buf: &mut [Complex64]) {
        self.dst.apply_with(coeffs, out, buf);
        let norm = self.geometry.mode_norm();
        for (u, w) in out.iter_mut().zip(&self.weights) {
            *u /= norm * w;
        }
    }

    /// Coefficients `1..=coeffs.len()` from node values.
    pub fn analyze(&self, values: &[Complex64], coeffs: &mut [Complex64], buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        scratch.clear();
        scratch.extend(values.iter().zip(&self.weights).map(|(u, w)| u * w));
        self.dst.apply_with(scratch, coeffs, buf);
        let scale = self.geometry.mode_norm() * 2.0 / self.m as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
    }

    pub fn synthesize_vec(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.m - 1];
        let mut buf = vec![ZERO; 2 * self.m];
        self.synthesize(coeffs, &mut out, &mut buf);
        out
    }

    pub fn analyze_vec(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut coeffs = vec![ZERO; self.truncation];
        let mut buf = vec![ZERO; 2 * self.m];
        self.analyze(values, &mut coeffs, &mut buf, &mut Vec::new());
        coeffs
    }

    /// `∫ f` for node values `f_j`.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        self.quadrature.iter().zip(values).map(|(q, v)| q * v).sum()
    }

    /// `e^{itλ_k}` on every mode.
    pub fn phases(&self, t: f64) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, l * t)).collect()
    }

    /// Mass `Σ|b_k|²` and energy `½[Σ g_k |b_k|² + ⅓ ∫|u|⁶]`, with `g_k` the
    /// gradient eigenvalue; also `½ Σ λ_k |b_k|²`-based energy.
    pub fn conserved(&self, coeffs: &[Complex64]) -> ConservedPair {
        let mass = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let grad: f64 = coeffs.iter().enumerate().map(|(i, c)| self.geometry.gradient_eigenvalue(i + 1) * c.norm_sqr()).sum();
        let linear: f64 = coeffs.iter().zip(&self.eigenvalues).map(|(c, l)| l * c.norm_sqr()).sum();
        let vals = self.synthesize_vec(coeffs);
        let sextic = self.integrate(vals.iter().map(|u| u.norm_sqr().powi(3)));
        ConservedPair {
            mass,
            energy: 0.5 * (grad + sextic / 3.0),
            energy_operator_form: 0.5 * (linear + sextic / 3.0),
        }
    }
}

/// Mass `∫|u|²` and energy `½∫[|∇u|² + ⅓|u|⁶]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedPair {
    pub mass: f64,
    pub energy: f64,
    /// The energy with `⟨Lu, u⟩` in place of `∫|∇u|²` (differs from
    /// `energy` by half the mass on the sphere and by the mass term on the
    /// Euclidean domain).
    pub energy_operator_form: f64,
}

/// Work buffers and precomputed phases for repeated Strang steps.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    engine: &'a RadialEngine,
    half: Vec<Complex64>,
    dt: f64,
    rho: f64,
    values: Vec<Complex64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl<'a> Stepper<'a> {
    pub fn new(engine: &'a RadialEngine, dt: f64, rho: f64) -> Self {
        Self {
            engine,
            half: engine.phases(0.5 * dt),
            dt,
            rho,
            values: vec![ZERO; engine.m - 1],
            buf: vec![ZERO; 2 * engine.m],
            scratch: Vec::with_capacity(engine.m - 1),
        }
    }

    /// Half linear step, pointwise phase `e^{-iρ|u|⁴dt}` on the grid with
    /// re-projection onto `K` modes, half linear step.
    pub fn step(&mut self, coeffs: &mut [Complex64]) {
        for (c, p) in coeffs.iter_mut().zip(&self.half) {
            *c *= p;
        }
        if self.rho != 0.0 {
            self.engine.synthesize(coeffs, &mut self.values, &mut self.buf);
            nonlinear_phase(&mut self.values, self.dt, self.rho);
            self.engine.analyze(&self.values, coeffs, &mut self.buf, &mut self.scratch);
        }
        for (c, p) in coeffs.iter_mut().zip(&self.half) {
            *c *= p;
        }
    }
}

/// The exact flow of `i∂_t u = ρ|u|⁴u` over `dt`: `u ↦ e^{-iρ|u|⁴dt} u`.
pub fn nonlinear_phase(values: &mut [Complex64], dt: f64, rho: f64) {
    if rho == 0.0 {
        return;
    }
    for u in values.iter_mut() {
        let a = u.norm_sqr();
        *u *= Complex64::from_polar(1.0, -rho * a * a * dt);
    }
}
