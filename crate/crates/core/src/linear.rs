//! The linear propagator `e^{itL}`, concentrating profiles and numerical
//! measurements of the dispersive estimates.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::seed::{cell_rng, complex_gaussian};
use crate::spectral::grid::SphereGrid;
use crate::spectral::norms::{lp_scaled, sup_norm, PowerSum, LINF_REFINEMENT};
use crate::spectral::quadrature::integrate;
use crate::spectral::zonal::{analyze, dyadic_bands, synthesize, BandSpec, ZonalField, MODE_NORM};
use crate::spectral::{eta, norm, NormSpec};

/// `c_k ↦ e^{ik²t} c_k`. The time is reduced modulo `2π` first, so
/// `t = 2π` is the identity to rounding.
pub fn evolve_linear(field: &ZonalField, t: f64) -> ZonalField {
    let t = t.rem_euclid(TAU);
    field.map_modes(|k, c| c * Complex64::from_polar(1.0, (k * k) as f64 * t))
}

/// A radial Euclidean profile `φ(r)`.
#[derive(Clone)]
pub struct RadialProfile {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    bandwidth: f64,
    decay_radius: f64,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("name", &self.name)
            .field("bandwidth", &self.bandwidth)
            .field("decay_radius", &self.decay_radius)
            .finish()
    }
}

impl RadialProfile {
    /// `bandwidth`: radial frequency beyond which the transform of `φ` is
    /// negligible. `decay_radius`: radius beyond which `φ` is negligible.
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static, bandwidth: f64, decay_radius: f64) -> Self {
        Self { name: name.into(), f: Arc::new(f), bandwidth, decay_radius }
    }

    pub fn zero() -> Self {
        Self::new("zero", |_| 0.0, 0.0, 0.0)
    }

    /// `A e^{-r²/(2w²)}`.
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        Self::new(
            format!("gaussian(A={amplitude}, w={width})"),
            move |r| amplitude * (-0.5 * (r / width).powi(2)).exp(),
            1.0 / width,
            9.0 * width,
        )
    }

    /// The compactly supported bump `exp(1 - 1/(1 - (r/s)²))` for `r < s`.
    pub fn bump(radius: f64) -> Self {
        Self::new(
            format!("bump(s={radius})"),
            move |r: f64| {
                let x = r / radius;
                if x.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - x * x)).exp()
                } else {
                    0.0
                }
            },
            4.0 / radius,
            radius,
        )
    }

    /// The reference profile of the extinction and comparison experiments,
    /// the bump of radius 2.
    pub fn reference() -> Self {
        Self::bump(2.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn decay_radius(&self) -> f64 {
        self.decay_radius
    }

    /// `‖∇φ‖_{L²(ℝ³)}` by radial quadrature with centered differences.
    pub fn h1_seminorm(&self) -> f64 {
        let r_max = self.decay_radius.max(1.0);
        let h = 1e-5 * r_max;
        let integrand = |r: f64| {
            let d = (self.eval(r + h) - self.eval((r - h).abs())) / (2.0 * h);
            4.0 * PI * d * d * r * r
        };
        integrate(integrand, 0.0, r_max, 64, 16).sqrt()
    }
}

/// Concentrating profile at the north pole: `φ`, scale `N ≥ 1`, frame time
/// shift `t₀`.
#[derive(Debug, Clone)]
pub struct ProfileSpec {
    pub profile: RadialProfile,
    pub n: f64,
    pub t0: f64,
}

impl ProfileSpec {
    pub fn new(profile: RadialProfile, n: f64) -> Result<Self> {
        Self::shifted(profile, n, 0.0)
    }

    pub fn shifted(profile: RadialProfile, n: f64, t0: f64) -> Result<Self> {
        if !(n >= 1.0 && n.is_finite()) {
            return Err(Error::Domain(format!("concentration scale N = {n} must be at least 1")));
        }
        Ok(Self { profile, n, t0 })
    }

    /// `N^{1/2} η(N^{1/2} θ) φ(Nθ)`.
    pub fn value(&self, theta: f64) -> f64 {
        let n = self.n;
        let cut = eta(n.sqrt() * theta);
        if cut == 0.0 {
            return 0.0;
        }
        n.sqrt() * cut * self.profile.eval(n * theta)
    }
}

/// `T_N φ` on the grid (truncation `M - 1`), shifted by `e^{-it₀L}`.
pub fn make_profile(spec: &ProfileSpec, grid: &SphereGrid) -> Result<ZonalField> {
    let need = 16.0 * spec.n * spec.profile.bandwidth().max(1.0);
    if (grid.order() as f64) < need {
        return Err(Error::Resolution(format!(
            "grid order M = {} below 16·N·max(1, bandwidth) = {need}",
            grid.order()
        )));
    }
    let values: Vec<Complex64> = grid.nodes().iter().map(|&t| Complex64::new(spec.value(t), 0.0)).collect();
    let field = analyze(&values, grid, grid.max_mode())?;
    Ok(if spec.t0 != 0.0 { evolve_linear(&field, -spec.t0) } else { field })
}

/// The pairings used for frame comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePairings {
    /// `⟨f, g⟩_{L²}`.
    pub l2: Complex64,
    /// `⟨f, g⟩_{H¹} = ∫ f ḡ + ∇f·∇ḡ = Σ k² c_k conj(d_k)`.
    pub h1: Complex64,
    /// `⟨|f|³, |g|³⟩_{L²}` by grid quadrature.
    pub l3_cubes: f64,
}

pub fn frame_inner_products(f: &ZonalField, g: &ZonalField, grid: &SphereGrid) -> Result<FramePairings> {
    if f.truncation() != g.truncation() {
        return Err(Error::GridMismatch(format!(
            "truncations {} and {} differ",
            f.truncation(),
            g.truncation()
        )));
    }
    let l2 = f.inner(g);
    let h1 = f.coeffs().iter().zip(g.coeffs()).enumerate().map(|(i, (a, b))| a * b.conj() * ((i + 1) * (i + 1)) as f64).sum();
    let fv = synthesize(f, grid)?;
    let gv = synthesize(g, grid)?;
    let l3_cubes = grid.integrate(fv.iter().zip(&gv).map(|(a, b)| (a.norm() * b.norm()).powi(3)));
    Ok(FramePairings { l2, h1, l3_cubes })
}

/// One row of an estimate sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateRow {
    pub param: f64,
    pub measured: f64,
    pub reference: f64,
}

/// Rows sorted by parameter with the least-squares log-log slope of the
/// measured column.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
    pub slope: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    /// Exponent of the reference scaling, when it is a power law.
    pub reference_slope: Option<f64>,
}

impl EstimateReport {
    pub fn new(mut rows: Vec<EstimateRow>, reference_slope: Option<f64>) -> Self {
        rows.sort_by(|a, b| a.param.total_cmp(&b.param));
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.param, r.measured)).collect();
        let (slope, residual) = loglog_fit(&pts);
        Self { rows, slope, residual, reference_slope }
    }
}

/// Least-squares slope and RMS residual of `log y` against `log x` over the
/// pairs with positive coordinates. NaN when fewer than two remain.
pub fn loglog_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let res = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    (slope, res)
}

/// Time mesh for the extinction scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionMesh {
    /// Log-spaced points across the window.
    pub log_points: usize,
    /// Largest denominator of the resonant times `2πa/q`; `None` selects
    /// `max(64, ⌈8πT⌉)`.
    pub resonant_q_max: Option<u64>,
}

impl Default for ExtinctionMesh {
    fn default() -> Self {
        Self { log_points: 256, resonant_q_max: None }
    }
}

/// The window `[TN⁻², T⁻¹]`.
pub fn extinction_window(t_big: f64, n: f64) -> Result<(f64, f64)> {
    if !(t_big >= 2.0) || !(t_big < n) {
        return Err(Error::Window(format!("need 2 <= T < N (T = {t_big}, N = {n})")));
    }
    Ok((t_big / (n * n), 1.0 / t_big))
}

/// Log-spaced points of the window plus the resonant times `2πa/q` inside
/// it, sorted.
pub fn extinction_times(t_big: f64, n: f64, mesh: ExtinctionMesh) -> Result<Vec<f64>> {
    let (lo, hi) = extinction_window(t_big, n)?;
    let mut times: Vec<f64> = match mesh.log_points {
        0 => Vec::new(),
        1 => vec![lo],
        m => (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect(),
    };
    let q_max = mesh.resonant_q_max.unwrap_or_else(|| 64u64.max((8.0 * PI * t_big).ceil() as u64));
    for q in 1..=q_max {
        let mut a = 1u64;
        while TAU * a as f64 / q as f64 <= hi {
            let t = TAU * a as f64 / q as f64;
            if t >= lo && a.gcd(&q) == 1 {
                times.push(t);
            }
            a += 1;
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    Ok(times)
}

/// `max_{M, t} M^{-1/2} ‖P_M e^{itL} f_N‖_{L^∞}` over dyadic `M ≤ K` and
/// the mesh times inside `[TN⁻², T⁻¹]`.
pub fn extinction_scan(spec: &ProfileSpec, t_big: f64, grid: &SphereGrid, times: &[f64]) -> Result<f64> {
    let (lo, hi) = extinction_window(t_big, spec.n)?;
    let inside: Vec<f64> = times.iter().copied().filter(|&t| t >= lo && t <= hi).collect();
    if inside.is_empty() {
        return Err(Error::Window(format!("no mesh time inside [{lo}, {hi}]")));
    }
    let field = make_profile(spec, grid)?;
    Ok(extinction_scan_field(&field, &inside))
}

/// The extinction functional of a given field over the given times.
pub fn extinction_scan_field(field: &ZonalField, times: &[f64]) -> f64 {
    let k_max = field.truncation();
    // Per band: mode range, weighted coefficients and the time-independent
    // bound M^{-1/2} Σ w_k |c_k| k/(√2π) ≥ M^{-1/2} sup |P_M e^{itL} f|.
    let mut bands: Vec<(f64, u64, usize, Vec<Complex64>)> = dyadic_bands(k_max)
        .into_iter()
        .filter_map(|n| {
            let band = BandSpec::Dyadic(n);
            let (lo, hi) = band.support();
            let hi = hi.min(k_max);
            if lo > hi {
                return None;
            }
            let coeffs: Vec<Complex64> = (1..=hi).map(|k| field.coeff(k) * band.weight(k)).collect();
            let bound = coeffs.iter().enumerate().map(|(i, c)| c.norm() * (i + 1) as f64).sum::<f64>()
                / (MODE_NORM * (n as f64).sqrt());
            (bound > 0.0).then_some((bound, n, hi, coeffs))
        })
        .collect();
    bands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best = 0.0_f64;
    for &t in times {
        for (bound, n, _, coeffs) in &bands {
            if *bound <= best {
                break;
            }
            let piece = evolve_linear(&ZonalField::from_coeffs(coeffs.clone()), t);
            let v = sup_norm(&piece) / (*n as f64).sqrt();
            best = best.max(v);
        }
    }
    best
}

/// `‖u‖_{L^p_{x,t}(S³ × I)}` for `u = e^{itL} f`, trapezoid in
/// time with `samples` nodes and the quadrature of `grid` in space.
pub fn spacetime_lp_norm(field: &ZonalField, p: f64, interval: (f64, f64), samples: usize, grid: &SphereGrid) -> Result<f64> {
    if samples < 2 {
        return Err(Error::Domain("need at least two time samples".into()));
    }
    let (a, b) = interval;
    let h = (b - a) / (samples - 1) as f64;
    let mut acc = PowerSum::new(p);
    for i in 0..samples {
        let t = a + h * i as f64;
        let w = if i == 0 || i == samples - 1 { 0.5 * h } else { h };
        let vals = synthesize(&evolve_linear(field, t), grid)?;
        acc.add(lp_scaled(&vals, grid, p), w);
    }
    Ok(acc.root())
}

/// Time samples for an `L^p_{x,t}` integral of band-`N` data: 32 per period
/// `2π/(2k_min + 1)`, where `k_min` is the lowest mode of the band.
pub fn band_time_samples(n: u64, interval: (f64, f64)) -> usize {
    let band = BandSpec::Dyadic(n);
    let (lo, hi) = band.support();
    let k_min = (lo..=hi).find(|&k| band.weight(k) > 0.0).unwrap_or(1);
    let period = TAU / (2 * k_min + 1) as f64;
    ((interval.1 - interval.0) / (period / 32.0)).ceil() as usize + 1
}

/// Complex Gaussian coefficients weighted by the `P_N` multiplier.
pub fn random_band_field(n: u64, seed: u64, tuple: &[u64]) -> ZonalField {
    let band = BandSpec::Dyadic(n);
    let (_, hi) = band.support();
    let mut rng = cell_rng(seed, tuple);
    ZonalField::from_coeffs((1..=hi).map(|k| complex_gaussian(&mut rng) * band.weight(k)).collect())
}

/// Ensemble maximum of `‖P_N e^{itL} f‖_{L^p_{x,t}} / ‖P_N f‖_{L²}` for each
/// `N`, against the reference `N^{3/2 - 5/p}`.
pub fn strichartz_scan(seed: u64, ns: &[u64], p: f64, interval: (f64, f64), replicates: usize) -> Result<EstimateReport> {
    if !(p > 4.0) {
        return Err(Error::Exponent(format!("Strichartz exponent p = {p} must exceed 4")));
    }
    if !(interval.1 > interval.0) {
        return Err(Error::Window(format!("empty interval [{}, {}]", interval.0, interval.1)));
    }
    let mut rows = Vec::new();
    for &n in ns {
        BandSpec::dyadic(n)?;
        let samples = band_time_samples(n, interval);
        let mut best = 0.0_f64;
        for r in 0..replicates.max(1) {
            let f = random_band_field(n, seed, &[n, r as u64]);
            let grid = SphereGrid::new(LINF_REFINEMENT * (f.truncation() + 1))?;
            let ratio = spacetime_lp_norm(&f, p, interval, samples, &grid)? / f.mass().sqrt();
            best = best.max(ratio);
        }
        rows.push(EstimateRow { param: n as f64, measured: best, reference: (n as f64).powf(1.5 - 5.0 / p) });
    }
    Ok(EstimateReport::new(rows, Some(1.5 - 5.0 / p)))
}

/// `‖Ẑ_q‖_{L^p}` (so the ratio to `‖Ẑ_q‖_{L²} = 1`) against `q^{1-3/p}`;
/// `p = ∞` uses the refined sup.
pub fn sogge_scan(qs: &[usize], p: f64) -> Result<EstimateReport> {
    if !(p >= 2.0) {
        return Err(Error::Exponent(format!("Sogge exponent p = {p} must be at least 2")));
    }
    let mut rows = Vec::new();
    for &q in qs {
        let z = ZonalField::mode(q, q)?;
        let measured = if p.is_infinite() {
            sup_norm(&z)
        } else {
            norm(&z, &SphereGrid::new(LINF_REFINEMENT * (q + 1))?, NormSpec::Lp(p))?
        };
        let exponent = if p.is_infinite() { 1.0 } else { 1.0 - 3.0 / p };
        rows.push(EstimateRow { param: q as f64, measured, reference: (q as f64).powf(exponent) });
    }
    let exponent = if p.is_infinite() { 1.0 } else { 1.0 - 3.0 / p };
    Ok(EstimateReport::new(rows, Some(exponent)))
}

fn oscillatory_integral(f: impl Fn(f64) -> f64, upper: f64, frequency: f64) -> f64 {
    let panels = ((frequency * upper / PI).ceil() as usize + 1).max(4);
    integrate(f, 0.0, upper, panels, 16)
}

/// `‖1_{θ ≤ 1/N} Ẑ_q‖_{L²} / ‖Ẑ_q‖_{L²}`.
pub fn concentration_ratio(q: usize, n: f64) -> Result<f64> {
    if q == 0 || !(n >= 1.0) {
        return Err(Error::Domain(format!("need q >= 1 and N >= 1 (q = {q}, N = {n})")));
    }
    let qf = q as f64;
    let upper = (1.0 / n).min(PI);
    let s = oscillatory_integral(|t| (qf * t).sin().powi(2), upper, qf);
    Ok((2.0 / PI * s).sqrt())
}

/// `|⟨Ẑ_p, 1_{θ ≤ 2/N} Ẑ_q⟩|`.
pub fn hflfi_kernel_entry(p: usize, q: usize, n: f64) -> Result<f64> {
    if p == 0 || q == 0 || !(n >= 2.0) {
        return Err(Error::Domain(format!("need p, q >= 1 and N >= 2 (p = {p}, q = {q}, N = {n})")));
    }
    let (pf, qf) = (p as f64, q as f64);
    let upper = (2.0 / n).min(PI);
    let s = oscillatory_integral(|t| (pf * t).sin() * (qf * t).sin(), upper, pf.max(qf));
    Ok(2.0 / PI * s.abs())
}

/// Entries for `p = q` over `qs` and each `N`, with the per-`N` fitted
/// constant `C_N = max_q entry / (N⁻¹ + q⁻²)`.
pub fn hflfi_scan(qs: &[usize], ns: &[u64]) -> Result<Vec<(u64, EstimateReport, f64)>> {
    let mut out = Vec::new();
    for &n in ns {
        let mut rows = Vec::new();
        for &q in qs {
            let entry = hflfi_kernel_entry(q, q, n as f64)?;
            rows.push(EstimateRow { param: q as f64, measured: entry, reference: 1.0 / n as f64 + 1.0 / (q * q) as f64 });
        }
        let c = rows.iter().map(|r| r.measured / r.reference).fold(0.0, f64::max);
        out.push((n, EstimateReport::new(rows, None), c));
    }
    Ok(out)
}

/// `‖u₁u₂u₃‖_{L²_{x,t}} / (N₂ N₃ Π‖f_i‖_{L²})` for `u_i = e^{itL} f_i`.
pub fn trilinear_ratio(fields: [&ZonalField; 3], n2: u64, n3: u64, interval: (f64, f64), samples: usize) -> Result<f64> {
    let denom = (n2 * n3) as f64 * fields.iter().map(|f| f.mass().sqrt()).product::<f64>();
    if denom == 0.0 {
        return Ok(0.0);
    }
    let order = 2 * fields.iter().map(|f| f.truncation()).sum::<usize>() + 8;
    let grid = SphereGrid::new(order)?;
    let (a, b) = interval;
    let h = (b - a) / (samples.max(2) - 1) as f64;
    let mut total = 0.0;
    for i in 0..samples.max(2) {
        let t = a + h * i as f64;
        let w = if i == 0 || i == samples.max(2) - 1 { 0.5 * h } else { h };
        let vals: Vec<Vec<Complex64>> =
            fields.iter().map(|f| synthesize(&evolve_linear(f, t), &grid)).collect::<Result<_>>()?;
        let s = grid.integrate((0..grid.len()).map(|j| (vals[0][j] * vals[1][j] * vals[2][j]).norm_sqr()));
        total += w * s;
    }
    Ok(total.sqrt() / denom)
}

/// Ensemble maximum of the trilinear ratio for each `N₁` in `n1s` at fixed
/// `N₂ ≥ N₃`; the reference column is `N₃/N₁ + 1/N₂`.
pub fn trilinear_scan(
    n1s: &[u64],
    n2: u64,
    n3: u64,
    seed: u64,
    interval: (f64, f64),
    replicates: usize,
) -> Result<EstimateReport> {
    let mut rows = Vec::new();
    for &n1 in n1s {
        if !(n1 >= n2 && n2 >= n3 && n3 >= 1) {
            return Err(Error::Ordering(format!("need N1 >= N2 >= N3 >= 1 (got {n1}, {n2}, {n3})")));
        }
        for n in [n1, n2, n3] {
            BandSpec::dyadic(n)?;
        }
        let samples = band_time_samples(n1, interval);
        let mut best = 0.0_f64;
        for r in 0..replicates.max(1) as u64 {
            let f1 = random_band_field(n1, seed, &[n1, n2, n3, r, 1]);
            let f2 = random_band_field(n2, seed, &[n1, n2, n3, r, 2]);
            let f3 = random_band_field(n3, seed, &[n1, n2, n3, r, 3]);
            best = best.max(trilinear_ratio([&f1, &f2, &f3], n2, n3, interval, samples)?);
        }
        rows.push(EstimateRow {
            param: n1 as f64,
            measured: best,
            reference: n3 as f64 / n1 as f64 + 1.0 / n2 as f64,
        });
    }
    Ok(EstimateReport::new(rows, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SPHERE_VOLUME;

    fn random_field(k: usize, seed: u64) -> ZonalField {
        let mut rng = cell_rng(seed, &[k as u64]);
        ZonalField::from_coeffs((0..k).map(|_| complex_gaussian(&mut rng)).collect())
    }

    #[test]
    fn evolve_examples() {
        let f = random_field(32, 1);
        assert!(evolve_linear(&f, 0.0).max_coeff_diff(&f) < 1e-15);
        assert!(evolve_linear(&f, TAU).max_coeff_diff(&f) < 1e-12);
        let z = ZonalField::mode(5, 8).unwrap();
        let out = evolve_linear(&z, 0.3);
        assert!((out.coeff(5) - Complex64::from_polar(1.0, 25.0 * 0.3)).norm() < 1e-15);
        let g = evolve_linear(&evolve_linear(&f, 0.4), 1.1);
        assert!(g.max_coeff_diff(&evolve_linear(&f, 1.5)) < 1e-12);
        assert!((evolve_linear(&f, 0.77).mass() - f.mass()).abs() < 1e-12 * f.mass());
    }

    #[test]
    fn profile_examples() {
        let grid = SphereGrid::new(4096).unwrap();
        let zero = make_profile(&ProfileSpec::new(RadialProfile::zero(), 8.0).unwrap(), &grid).unwrap();
        assert_eq!(zero.mass(), 0.0);
        let spec = ProfileSpec::new(RadialProfile::reference(), 16.0).unwrap();
        let f = make_profile(&spec, &grid).unwrap();
        assert!((f.value_at_pole().re - 4.0).abs() < 1e-8);
        let cutoff = 2.0 / 16f64.sqrt();
        assert_eq!(spec.value(cutoff + 1e-9), 0.0);
        assert!(make_profile(&ProfileSpec::new(RadialProfile::reference(), 256.0).unwrap(), &grid).is_err());
        assert!(ProfileSpec::new(RadialProfile::reference(), 0.5).is_err());
    }

    #[test]
    fn time_shift_is_backward_flow() {
        let grid = SphereGrid::new(512).unwrap();
        let plain = make_profile(&ProfileSpec::new(RadialProfile::reference(), 8.0).unwrap(), &grid).unwrap();
        let shifted = make_profile(&ProfileSpec::shifted(RadialProfile::reference(), 8.0, 0.2).unwrap(), &grid).unwrap();
        assert!(evolve_linear(&shifted, 0.2).max_coeff_diff(&plain) < 1e-12);
    }

    #[test]
    fn pairings() {
        let grid = SphereGrid::new(64).unwrap();
        let a = ZonalField::mode(3, 16).unwrap();
        let b = ZonalField::mode(7, 16).unwrap();
        let same = frame_inner_products(&a, &a, &grid).unwrap();
        assert!((same.l2.re - 1.0).abs() < 1e-15);
        assert!((same.h1.re - 9.0).abs() < 1e-13);
        let orth = frame_inner_products(&a, &b, &grid).unwrap();
        assert!(orth.l2.norm() < 1e-10 && orth.h1.norm() < 1e-10);
        assert!(frame_inner_products(&a, &ZonalField::mode(3, 8).unwrap(), &grid).is_err());
    }

    #[test]
    fn profile_mass_decays_like_inverse_scale() {
        let mut c = Vec::new();
        for n in [8.0, 16.0, 32.0, 64.0] {
            let grid = SphereGrid::new((16.0 * n) as usize * 2).unwrap();
            let f = make_profile(&ProfileSpec::new(RadialProfile::gaussian(1.0, 1.0), n).unwrap(), &grid).unwrap();
            c.push(f.mass().sqrt() * n);
        }
        let (lo, hi) = c.iter().fold((f64::MAX, 0.0_f64), |(l, h), &x| (l.min(x), h.max(x)));
        assert!(hi / lo < 1.05, "{c:?}");
    }

    #[test]
    fn pairing_between_scales_vanishes() {
        let mut vals = Vec::new();
        for n in [8.0, 16.0, 32.0, 64.0] {
            let grid = SphereGrid::new((64.0 * n) as usize).unwrap();
            let a = make_profile(&ProfileSpec::new(RadialProfile::gaussian(1.0, 1.0), n).unwrap(), &grid).unwrap();
            let b = make_profile(&ProfileSpec::new(RadialProfile::gaussian(1.0, 1.0), 4.0 * n).unwrap(), &grid).unwrap();
            vals.push(frame_inner_products(&a, &b, &grid).unwrap().l2.norm());
        }
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    }

    #[test]
    fn extinction_field_variant_single_mode() {
        for k in [4usize, 16, 64] {
            let z = ZonalField::mode(k, k).unwrap();
            let v = extinction_scan_field(&z, &[0.01, 0.1, 0.3]);
            let expect = (k as f64).powf(-0.5) * k as f64 / MODE_NORM;
            assert!((v - expect).abs() < 1e-10 * expect, "k = {k}");
        }
    }

    #[test]
    fn extinction_zero_and_window() {
        let grid = SphereGrid::new(512).unwrap();
        let spec = ProfileSpec::new(RadialProfile::zero(), 16.0).unwrap();
        let times = extinction_times(4.0, 16.0, ExtinctionMesh::default()).unwrap();
        assert_eq!(extinction_scan(&spec, 4.0, &grid, &times).unwrap(), 0.0);
        assert!(matches!(extinction_window(16.0, 16.0), Err(Error::Window(_))));
        assert!(matches!(extinction_window(1.5, 16.0), Err(Error::Window(_))));
        assert!(times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn strichartz_single_mode_norm() {
        let k = 6;
        let z = ZonalField::zonal_mode(k, k).unwrap();
        let grid = SphereGrid::new(LINF_REFINEMENT * (k + 1)).unwrap();
        let p = 10.0;
        let st = spacetime_lp_norm(&z, p, (-1.0, 1.0), 17, &grid).unwrap();
        let space = norm(&z, &grid, NormSpec::Lp(p)).unwrap();
        assert!((st - 2f64.powf(1.0 / p) * space).abs() < 1e-12 * st);
        assert!(matches!(strichartz_scan(1, &[8], 4.0, (-1.0, 1.0), 1), Err(Error::Exponent(_))));
    }

    #[test]
    fn sogge_sup_slope() {
        let r = sogge_scan(&[8, 16, 32, 64], f64::INFINITY).unwrap();
        assert!((r.slope - 1.0).abs() < 1e-10);
    }

    #[test]
    fn concentration_examples() {
        assert!(concentration_ratio(3, 1.0).unwrap() <= 1.0);
        for n in [8.0, 16.0] {
            let q = (8.0 * n) as usize;
            let r = concentration_ratio(q, n).unwrap();
            assert!((r / (PI * n).powf(-0.5) - 1.0).abs() < 0.1);
        }
        let seq: Vec<f64> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n| concentration_ratio(5, n).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn hflfi_closed_form() {
        let e = hflfi_kernel_entry(1, 1, 2.0).unwrap();
        let exact = 2.0 / PI * (0.5 - 2f64.sin() / 4.0);
        assert!((e - exact).abs() < 1e-14);
        for q in [16usize, 100] {
            let n = 16.0;
            let exact = 2.0 / PI * (1.0 / n - (4.0 * q as f64 / n).sin() / (4.0 * q as f64));
            assert!((hflfi_kernel_entry(q, q, n).unwrap() - exact).abs() < 1e-13);
        }
        assert!(hflfi_kernel_entry(3, 3, 64.0).unwrap() < hflfi_kernel_entry(3, 3, 8.0).unwrap());
    }

    #[test]
    fn trilinear_constants_and_zero() {
        let c = [Complex64::new(1.5, 0.0), Complex64::new(0.0, 2.0), Complex64::new(-0.5, 0.5)];
        let f: Vec<ZonalField> = c.iter().map(|&a| ZonalField::constant(a, 1)).collect();
        let r = trilinear_ratio([&f[0], &f[1], &f[2]], 1, 1, (-1.0, 1.0), 9).unwrap();
        let norms: f64 = c.iter().map(|a| a.norm() * SPHERE_VOLUME.sqrt()).product();
        let expect = c.iter().map(|a| a.norm()).product::<f64>() * (SPHERE_VOLUME * 2.0).sqrt() / norms;
        assert!((r - expect).abs() < 1e-12 * expect);
        let zero = ZonalField::zeros(4);
        assert_eq!(trilinear_ratio([&f[0], &zero, &f[2]], 1, 1, (-1.0, 1.0), 9).unwrap(), 0.0);
        assert!(matches!(trilinear_scan(&[2], 4, 1, 0, (-1.0, 1.0), 1), Err(Error::Ordering(_))));
    }

    #[test]
    fn fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (2f64.powi(i), 3.0 * 2f64.powi(i).powf(-0.7))).collect();
        let (s, r) = loglog_fit(&pts);
        assert!((s + 0.7).abs() < 1e-12 && r < 1e-12);
    }
}
