//! Lebesgue, Sobolev and Z-norms of zonal fields.

use num_complex::Complex64;

use super::grid::SphereGrid;
use super::zonal::{dyadic_bands, project, sample_refined, synthesize, BandSpec, ZonalField};
use crate::error::{Error, Result};

/// Refinement factor for sup-norm evaluation.
pub const LINF_REFINEMENT: usize = 8;

/// Exponents of the Z-norm.
pub const Z_EXPONENTS: [f64; 2] = [4.0 + 1.0 / 10.0, 100.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Lp(f64),
    /// Operator-adapted `H^s`: `(Σ k^{2s} |c_k|²)^{1/2}`.
    Hs(f64),
    Linf,
}

/// `‖u‖_{L^p}^p` written as `scale^p · rest` so that large exponents do not
/// overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScaledPower {
    pub scale: f64,
    pub rest: f64,
}

/// Accumulates `Σ wᵢ · sᵢ^p` without overflow; the result is
/// `scale^p · acc`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PowerSum {
    p: f64,
    scale: f64,
    acc: f64,
}

impl PowerSum {
    pub fn new(p: f64) -> Self {
        Self { p, scale: 0.0, acc: 0.0 }
    }

    /// Adds `weight · s^p` where `s = term.scale`, `weight = term.rest · w`.
    pub fn add(&mut self, term: ScaledPower, w: f64) {
        let contribution = term.rest * w;
        if contribution == 0.0 || term.scale == 0.0 {
            return;
        }
        if term.scale > self.scale {
            self.acc *= (self.scale / term.scale).powf(self.p);
            self.scale = term.scale;
        }
        self.acc += contribution * (term.scale / self.scale).powf(self.p);
    }

    pub fn total(&self) -> ScaledPower {
        ScaledPower { scale: self.scale, rest: self.acc }
    }

    /// `(Σ wᵢ sᵢ^p)^{1/p}`.
    pub fn root(&self) -> f64 {
        if self.acc <= 0.0 {
            0.0
        } else {
            self.scale * self.acc.powf(1.0 / self.p)
        }
    }
}

pub(crate) fn lp_scaled(values: &[Complex64], grid: &SphereGrid, p: f64) -> ScaledPower {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return ScaledPower { scale: 0.0, rest: 0.0 };
    }
    let rest = grid.integrate(values.iter().map(|v| (v.norm() / max).powf(p)));
    ScaledPower { scale: max, rest }
}

/// `‖u‖_{L^p(S³)}` of node values by the grid quadrature.
pub fn lp_norm_of_samples(values: &[Complex64], grid: &SphereGrid, p: f64) -> f64 {
    let s = lp_scaled(values, grid, p);
    if s.rest == 0.0 {
        0.0
    } else {
        s.scale * s.rest.powf(1.0 / p)
    }
}

/// `‖u‖` in the requested norm. `L^p` uses the quadrature on `grid`;
/// `L^∞` uses an 8× refined synthesis including the pole and antipode.
pub fn norm(field: &ZonalField, grid: &SphereGrid, spec: NormSpec) -> Result<f64> {
    match spec {
        NormSpec::Lp(p) => {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(Error::Domain(format!("L^p exponent p = {p} must satisfy 1 <= p < ∞")));
            }
            let vals = synthesize(field, grid)?;
            Ok(lp_norm_of_samples(&vals, grid, p))
        }
        NormSpec::Hs(s) => Ok(field
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| ((i + 1) as f64).powf(2.0 * s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()),
        NormSpec::Linf => Ok(sup_norm(field)),
    }
}

/// `‖u‖_{L^∞}` on the refined grid.
pub fn sup_norm(field: &ZonalField) -> f64 {
    sample_refined(field, LINF_REFINEMENT).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Breakdown of a discrete Z-norm evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ZNormReport {
    /// `Σ_p sup_J (…)^{1/p}`.
    pub value: f64,
    /// The `sup_J (…)^{1/p}` term for each of `p₀`, `p₁`.
    pub per_exponent: [f64; 2],
    /// Fraction of the `p₀` windowed sum (at the maximizing window)
    /// carried by bands `N > tail_from`.
    pub tail_fraction: f64,
}

/// Discrete Z-norm over `[a, b]` of a trajectory sampled on a uniform
/// time mesh; the supremum over `|J| ≤ 1` runs over mesh-aligned windows.
pub fn z_norm(times: &[f64], fields: &[ZonalField], interval: (f64, f64), grid: &SphereGrid) -> Result<f64> {
    Ok(z_norm_report(times, fields, interval, grid, usize::MAX)?.value)
}

/// [`z_norm`] with the share of bands `N > tail_from` reported.
pub fn z_norm_report(
    times: &[f64],
    fields: &[ZonalField],
    interval: (f64, f64),
    grid: &SphereGrid,
    tail_from: usize,
) -> Result<ZNormReport> {
    if times.len() != fields.len() {
        return Err(Error::GridMismatch(format!("{} times for {} snapshots", times.len(), fields.len())));
    }
    let (a, b) = interval;
    let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= a - 1e-15 && times[i] <= b + 1e-15).collect();
    if idx.is_empty() {
        return Err(Error::Empty("trajectory has no samples in the interval".into()));
    }
    let truncation = fields.iter().map(|f| f.truncation()).max().unwrap_or(0);
    let bands = dyadic_bands(truncation);

    // Per sample and exponent: the band-summed integrand, and its tail part.
    let mut integrand: [Vec<(ScaledPower, ScaledPower)>; 2] = [Vec::new(), Vec::new()];
    for &i in &idx {
        let per_band: Vec<(u64, Vec<Complex64>)> = bands
            .iter()
            .map(|&n| {
                let piece = project(&fields[i], BandSpec::Dyadic(n));
                (n, synthesize(&piece, grid))
            })
            .map(|(n, r)| r.map(|v| (n, v)))
            .collect::<Result<_>>()?;
        for (e, &p) in Z_EXPONENTS.iter().enumerate() {
            let mut all = PowerSum::new(p);
            let mut tail = PowerSum::new(p);
            for (n, vals) in &per_band {
                let s = lp_scaled(vals, grid, p);
                // N^{5-p/2} folded into the scale: (N^{(5-p/2)/p} · max)^p.
                let term = ScaledPower { scale: s.scale * (*n as f64).powf((5.0 - p / 2.0) / p), rest: s.rest };
                all.add(term, 1.0);
                if (*n as usize) > tail_from {
                    tail.add(term, 1.0);
                }
            }
            integrand[e].push((all.total(), tail.total()));
        }
    }

    let t: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
    let mut per_exponent = [0.0; 2];
    let mut tail_fraction = 0.0;
    for (e, &p) in Z_EXPONENTS.iter().enumerate() {
        let mut best = 0.0;
        let mut best_tail = 0.0;
        for start in 0..t.len() {
            let mut end = start;
            while end + 1 < t.len() && t[end + 1] - t[start] <= 1.0 + 1e-12 {
                end += 1;
            }
            let (total, tail) = window_integral(&t, &integrand[e], start, end, p);
            let root = total.root();
            if root > best {
                best = root;
                let tv = tail.total();
                let av = total.total();
                best_tail = if av.rest > 0.0 && av.scale > 0.0 {
                    (tv.rest / av.rest) * (tv.scale / av.scale).powf(p)
                } else {
                    0.0
                };
            }
        }
        per_exponent[e] = best;
        if e == 0 {
            tail_fraction = best_tail;
        }
    }
    Ok(ZNormReport { value: per_exponent.iter().sum(), per_exponent, tail_fraction })
}

fn window_integral(
    t: &[f64],
    g: &[(ScaledPower, ScaledPower)],
    start: usize,
    end: usize,
    p: f64,
) -> (PowerSum, PowerSum) {
    let mut all = PowerSum::new(p);
    let mut tail = PowerSum::new(p);
    if start == end {
        return (all, tail);
    }
    for i in start..=end {
        let left = if i > start { t[i] - t[i - 1] } else { 0.0 };
        let right = if i < end { t[i + 1] - t[i] } else { 0.0 };
        let w = 0.5 * (left + right);
        all.add(g[i].0, w);
        tail.add(g[i].1, w);
    }
    (all, tail)
}

/// `Σ_p (N^{5-p/2} ‖u‖_{L^p}^p |I|)^{1/p}`: the Z-norm of a time-constant
/// field lying in the single band `N`, for `|I| ≤ 1`.
pub fn z_norm_constant_single_band(values: &[Complex64], grid: &SphereGrid, n: u64, length: f64) -> f64 {
    Z_EXPONENTS
        .iter()
        .map(|&p| {
            let s = lp_scaled(values, grid, p);
            if s.rest == 0.0 {
                return 0.0;
            }
            s.scale * (n as f64).powf((5.0 - p / 2.0) / p) * (s.rest * length).powf(1.0 / p)
        })
        .sum()
}
