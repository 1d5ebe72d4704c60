//! Zonal eigenfunctions of `L = 1 - Δ` on S³ and the dual spectral/grid
//! representation of zonal fields.
//!
//! Fields are stored in the orthonormal basis `Ẑ_k = Z_k / (√2 π k)`,
//! `k = 1..K`, where `Z_k(θ) = k sin(kθ) / sin θ` spans the zonal part of
//! the eigenspace with eigenvalue `k²`.

use std::f64::consts::{PI, SQRT_2};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::bump::eta;
use super::grid::SphereGrid;
use crate::error::{Error, Result};

/// `√2 π`, the `L²(S³)` norm of `Z_k / k`.
pub const MODE_NORM: f64 = SQRT_2 * PI;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `Z_k(θ) = k sin(kθ)/sin θ`, continuous on `[0, π]`.
pub fn zonal_eval(k: usize, theta: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("mode index k must be at least 1".into()));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("θ = {theta} outside [0, π]")));
    }
    Ok(zonal_unchecked(k, theta))
}

pub(crate) fn zonal_unchecked(k: usize, theta: f64) -> f64 {
    let kf = k as f64;
    let s = theta.sin();
    if s.abs() < 1e-7 {
        // Series about the pole or the antipode; Z_k(π-x) = (-1)^{k+1} Z_k(x).
        let (x, sign) = if theta < 1.0 { (theta, 1.0) } else { (PI - theta, if k % 2 == 1 { 1.0 } else { -1.0 }) };
        return sign * kf * kf * (1.0 - (kf * kf - 1.0) * x * x / 6.0);
    }
    kf * (kf * theta).sin() / s
}

/// `Ẑ_k(θ)`, the `L²(S³)`-normalized zonal eigenfunction.
pub fn normalized_zonal(k: usize, theta: f64) -> Result<f64> {
    Ok(zonal_eval(k, theta)? / (MODE_NORM * k as f64))
}

/// Node values of a zonal field on a [`SphereGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub grid: SphereGrid,
    pub values: Vec<Complex64>,
}

/// A rotationally symmetric complex field on S³, truncated at mode `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonalField {
    coeffs: Vec<Complex64>,
    samples: Option<GridSamples>,
}

impl ZonalField {
    pub fn zeros(truncation: usize) -> Self {
        Self { coeffs: vec![ZERO; truncation], samples: None }
    }

    /// Field with coefficients `c_1..c_K` (index `k-1` holds `c_k`).
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs, samples: None }
    }

    /// The normalized eigenmode `Ẑ_k` in a `K`-truncated field.
    pub fn mode(k: usize, truncation: usize) -> Result<Self> {
        if k == 0 || k > truncation {
            return Err(Error::Domain(format!("mode {k} outside 1..={truncation}")));
        }
        let mut f = Self::zeros(truncation);
        f.coeffs[k - 1] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    /// The unnormalized `Z_k = √2 π k · Ẑ_k`.
    pub fn zonal_mode(k: usize, truncation: usize) -> Result<Self> {
        Ok(Self::mode(k, truncation)?.scale(Complex64::new(MODE_NORM * k as f64, 0.0)))
    }

    /// The spatially constant field `A`, i.e. `A·√(2π²)·Ẑ_1`.
    pub fn constant(value: Complex64, truncation: usize) -> Self {
        let mut f = Self::zeros(truncation.max(1));
        f.coeffs[0] = value * MODE_NORM;
        f
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_k` for `k >= 1`; zero beyond the truncation.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k == 0 {
            return ZERO;
        }
        self.coeffs.get(k - 1).copied().unwrap_or(ZERO)
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Grid values this field was analyzed from, if any.
    pub fn cached_samples(&self) -> Option<&GridSamples> {
        self.samples.as_ref()
    }

    /// Drops or zero-pads modes so the truncation becomes `truncation`.
    pub fn with_truncation(&self, truncation: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(truncation, ZERO);
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * a).collect())
    }

    /// Multiplies `c_k` by `f(k)`.
    pub fn map_modes(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().map(|(i, &c)| f(i + 1, c)).collect())
    }

    /// `Σ |c_k|²`, the squared `L²(S³)` norm by Parseval.
    pub fn mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self, other⟩ = Σ c_k conj(d_k)`.
    pub fn inner(&self, other: &ZonalField) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum()
    }

    /// `max_k |c_k - d_k|` over the union of both truncations.
    pub fn max_coeff_diff(&self, other: &ZonalField) -> f64 {
        let n = self.truncation().max(other.truncation());
        (1..=n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    /// `u(0) = Σ c_k k / (√2π)`.
    pub fn value_at_pole(&self) -> Complex64 {
        self.coeffs.iter().enumerate().map(|(i, &c)| c * ((i + 1) as f64 / MODE_NORM)).sum()
    }

    /// `u(π) = Σ c_k (-1)^{k+1} k / (√2π)`.
    pub fn value_at_antipode(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                c * (sign * (i + 1) as f64 / MODE_NORM)
            })
            .sum()
    }

    /// Pointwise value `Σ c_k Ẑ_k(θ)` by direct summation.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * (zonal_unchecked(i + 1, theta) / (MODE_NORM * (i + 1) as f64)))
            .sum()
    }
}

fn combine(a: &ZonalField, b: &ZonalField, sign: f64) -> ZonalField {
    let n = a.truncation().max(b.truncation());
    ZonalField::from_coeffs((1..=n).map(|k| a.coeff(k) + b.coeff(k) * sign).collect())
}

impl Add for &ZonalField {
    type Output = ZonalField;
    fn add(self, rhs: &ZonalField) -> ZonalField {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &ZonalField {
    type Output = ZonalField;
    fn sub(self, rhs: &ZonalField) -> ZonalField {
        combine(self, rhs, -1.0)
    }
}

impl Mul<Complex64> for &ZonalField {
    type Output = ZonalField;
    fn mul(self, rhs: Complex64) -> ZonalField {
        self.scale(rhs)
    }
}

/// Analysis: `c_k = ⟨u, Ẑ_k⟩` from node values, via the DST-I of
/// `v_j = u(θ_j) sin θ_j`. Exact for `v` a sine polynomial of degree `< M`.
pub fn analyze(values: &[Complex64], grid: &SphereGrid, truncation: usize) -> Result<ZonalField> {
    if values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid with {} nodes",
            values.len(),
            grid.len()
        )));
    }
    if truncation > grid.max_mode() {
        return Err(Error::Truncation(format!(
            "truncation K = {truncation} must be below grid order M = {}",
            grid.order()
        )));
    }
    let v: Vec<Complex64> = values.iter().zip(grid.nodes()).map(|(&u, &t)| u * t.sin()).collect();
    let mut coeffs = vec![ZERO; truncation];
    grid.dst().apply(&v, &mut coeffs);
    let scale = MODE_NORM * 2.0 / grid.order() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Ok(ZonalField {
        coeffs,
        samples: Some(GridSamples { grid: grid.clone(), values: values.to_vec() }),
    })
}

/// Synthesis: `u(θ_j) = Σ_k c_k Ẑ_k(θ_j)`.
pub fn synthesize(field: &ZonalField, grid: &SphereGrid) -> Result<Vec<Complex64>> {
    if field.truncation() > grid.max_mode() {
        return Err(Error::Truncation(format!(
            "field truncation K = {} exceeds grid capacity M - 1 = {}",
            field.truncation(),
            grid.max_mode()
        )));
    }
    let mut out = vec![ZERO; grid.len()];
    grid.dst().apply(field.coeffs(), &mut out);
    for (u, &t) in out.iter_mut().zip(grid.nodes()) {
        *u /= MODE_NORM * t.sin();
    }
    Ok(out)
}

/// Samples of a real function of θ at the grid nodes.
pub fn sample(grid: &SphereGrid, f: impl Fn(f64) -> f64) -> Vec<Complex64> {
    grid.nodes().iter().map(|&t| Complex64::new(f(t), 0.0)).collect()
}

/// Values on the grid `factor` times finer than the smallest grid holding
/// the field, with the pole and antipode limits appended at both ends.
/// Used for sup-norms.
pub fn sample_refined(field: &ZonalField, factor: usize) -> Vec<Complex64> {
    let base = (field.truncation() + 1).max(4);
    let grid = SphereGrid::new(base * factor.max(1)).expect("valid refined order");
    let mut vals = Vec::with_capacity(grid.len() + 2);
    vals.push(field.value_at_pole());
    vals.extend(synthesize(field, &grid).expect("refined grid holds the field"));
    vals.push(field.value_at_antipode());
    vals
}

/// `L = 1 - Δ_{S³}` acting diagonally: `c_k ↦ k² c_k`.
pub fn apply_l(field: &ZonalField) -> ZonalField {
    field.map_modes(|k, c| c * (k * k) as f64)
}

/// Frequency localizations built from the cutoff `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandSpec {
    /// The eigenprojection `π_k`.
    Mode(usize),
    /// `P_N` with weights `η(k/N) - η(2k/N)`; `N` a power of two.
    Dyadic(u64),
    /// `P_{≤N}` with weights `η(k/N)`.
    LowPass(f64),
}

impl BandSpec {
    pub fn dyadic(n: u64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Domain(format!("dyadic band N = {n} is not a power of two")));
        }
        Ok(Self::Dyadic(n))
    }

    /// Multiplier applied to the coefficient of mode `k`.
    pub fn weight(&self, k: usize) -> f64 {
        let kf = k as f64;
        match *self {
            BandSpec::Mode(j) => {
                if j == k {
                    1.0
                } else {
                    0.0
                }
            }
            BandSpec::Dyadic(n) => {
                let n = n as f64;
                eta(kf / n) - eta(2.0 * kf / n)
            }
            BandSpec::LowPass(n) => eta(kf / n),
        }
    }

    /// Mode range where the weight can be nonzero.
    pub fn support(&self) -> (usize, usize) {
        match *self {
            BandSpec::Mode(j) => (j, j),
            BandSpec::Dyadic(n) => (((n as usize) / 2).max(1), 2 * n as usize),
            BandSpec::LowPass(n) => (1, (2.0 * n).ceil() as usize),
        }
    }
}

/// Applies a band multiplier.
pub fn project(field: &ZonalField, band: BandSpec) -> ZonalField {
    if let BandSpec::Mode(k) = band {
        // Exact eigenprojection: copy a single coefficient.
        let mut out = ZonalField::zeros(field.truncation());
        if k >= 1 && k <= field.truncation() {
            out.coeffs[k - 1] = field.coeffs[k - 1];
        }
        return out;
    }
    field.map_modes(|k, c| c * band.weight(k))
}

/// Dyadic `N = 1, 2, 4, …` whose band meets modes `1..=truncation`.
pub fn dyadic_bands(truncation: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = 1u64;
    while (n as usize) / 2 < truncation.max(1) {
        out.push(n);
        n *= 2;
    }
    out
}
