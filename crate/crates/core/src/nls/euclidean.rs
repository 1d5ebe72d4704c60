//! The radial Euclidean oracle and its comparison with concentrated sphere
//! solutions.

use num_complex::Complex64;

use super::engine::{Geometry, RadialEngine};
use super::{solve_radial, solve_sphere, SolverConfig, Trajectory};
use crate::error::{Error, Result};
use crate::linear::{evolve_linear, make_profile, ProfileSpec, RadialProfile};
use crate::spectral::grid::SphereGrid;
use crate::spectral::zonal::{analyze, ZonalField};
use crate::spectral::eta;

/// Fraction of the mass allowed within the outer tenth of the domain.
const BOUNDARY_MASS_FRACTION: f64 = 1e-6;

/// Strang trajectory of `(i∂_t - Δ + mass) v = ρ|v|⁴v` for radial `v` on
/// `B(0, radius)` with `v(radius) = 0`, from `v(0) = φ`.
pub fn solve_euclidean_radial(phi: &RadialProfile, radius: f64, mass: f64, config: &SolverConfig) -> Result<Trajectory> {
    let engine = RadialEngine::new(Geometry::Euclidean { radius, mass }, config.k, config.m)?;
    let peak = engine.nodes().iter().map(|&r| phi.eval(r).abs()).fold(0.0, f64::max);
    let outer = engine.nodes().iter().filter(|&&r| r >= 0.5 * radius).map(|&r| phi.eval(r).abs()).fold(0.0, f64::max);
    if outer > 1e-8 * peak {
        return Err(Error::Domain(format!(
            "profile has not decayed inside R_dom/2 (|φ| = {outer} beyond r = {})",
            0.5 * radius
        )));
    }
    let values: Vec<Complex64> = engine.nodes().iter().map(|&r| Complex64::new(phi.eval(r), 0.0)).collect();
    let init = engine.analyze_vec(&values);
    let mut traj = solve_radial(&engine, init, config)?;
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        let vals = engine.synthesize_vec(snap.coeffs());
        let total = engine.integrate(vals.iter().map(|v| v.norm_sqr()));
        let edge = engine
            .quadrature()
            .iter()
            .zip(engine.nodes())
            .zip(&vals)
            .filter(|((_, &r), _)| r >= 0.9 * radius)
            .map(|((q, _), v)| q * v.norm_sqr())
            .sum::<f64>();
        if total > 0.0 && edge > BOUNDARY_MASS_FRACTION * total {
            traj.warnings.push(format!(
                "domain too small: mass fraction {:.3e} within 10% of R_dom at t = {t}",
                edge / total
            ));
            break;
        }
    }
    Ok(traj)
}

/// `V_{R,N}(θ, t) = N^{1/2} η(Nθ/R) v(Nθ, N²t)` on the sphere grid at
/// `t = τ/N²` for each Euclidean sample time `τ`, analyzed onto
/// `truncation` modes. The Euclidean mass term is traded for the sphere's
/// through the exact phase `e^{i(t - mass·τ)}`.
pub fn build_rescaled_comparison(
    traj: &Trajectory,
    r_cut: f64,
    n: f64,
    grid: &SphereGrid,
    truncation: usize,
) -> Result<Vec<(f64, ZonalField)>> {
    let Geometry::Euclidean { radius, mass } = traj.geometry else {
        return Err(Error::Domain("rescaled comparison needs a Euclidean trajectory".into()));
    };
    if !(r_cut > 0.0) || n < 10.0 * r_cut * (1.0 - 1e-12) {
        return Err(Error::Regime(format!("need N >= 10R (N = {n}, R = {r_cut})")));
    }
    if 2.0 * r_cut > radius {
        return Err(Error::Regime(format!("cutoff support 2R = {} exceeds R_dom = {radius}", 2.0 * r_cut)));
    }
    let k_e = traj.snapshots.first().map(|s| s.truncation()).unwrap_or(0);
    let geometry = traj.geometry;
    // Mode values at the rescaled nodes inside the cutoff support.
    let active: Vec<(usize, f64)> = grid
        .nodes()
        .iter()
        .enumerate()
        .filter_map(|(j, &th)| {
            let x = n * th;
            let cut = eta(x / r_cut);
            (cut > 0.0).then_some((j, cut))
        })
        .collect();
    let table: Vec<Vec<f64>> = active
        .iter()
        .map(|&(j, _)| {
            let x = n * grid.nodes()[j];
            (1..=k_e).map(|k| geometry.mode_value(k, x)).collect()
        })
        .collect();
    let amp = n.sqrt();
    let mut out = Vec::with_capacity(traj.times.len());
    for (&tau, snap) in traj.times.iter().zip(&traj.snapshots) {
        let t = tau / (n * n);
        let phase = Complex64::from_polar(1.0, t - mass * tau);
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for ((j, cut), row) in active.iter().zip(&table) {
            let v: Complex64 = snap.coeffs().iter().zip(row).map(|(c, m)| c * m).sum();
            values[*j] = v * (amp * cut) * phase;
        }
        out.push((t, analyze(&values, grid, truncation)?));
    }
    Ok(out)
}

/// Parameters of the profile comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonConfig {
    /// Concentration scale `N`.
    pub n: f64,
    /// Truncation radius `R`; `None` selects `N/10`.
    pub r_cut: Option<f64>,
    /// Window length `T₀`: times `0 ≤ t ≤ T₀ N⁻²`.
    pub t0: f64,
    pub rho: f64,
    /// Number of sampled times after `t = 0`.
    pub snapshots: usize,
    /// Sphere truncation `K = ⌈k_factor · N⌉`; `None` selects
    /// `max(8, 6·bandwidth)`.
    pub k_factor: Option<f64>,
    /// Euclidean domain radius; `None` selects `max(4R, 16·decay radius)`.
    pub euclid_radius: Option<f64>,
    /// Euclidean modes; `None` resolves radial frequencies up to
    /// `8·max(1, bandwidth)`.
    pub euclid_modes: Option<usize>,
}

impl ComparisonConfig {
    pub fn new(n: f64, t0: f64, rho: f64) -> Self {
        Self { n, r_cut: None, t0, rho, snapshots: 16, k_factor: None, euclid_radius: None, euclid_modes: None }
    }
}

/// Sup-in-time discrepancies of the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileComparison {
    pub n: f64,
    pub r_cut: f64,
    pub times: Vec<f64>,
    /// `‖U_N(t) - V_{R,N}(t)‖_{H¹}` at each sampled time.
    pub discrepancy: Vec<f64>,
    pub sup_discrepancy: f64,
    /// The same comparison for the linear flows (`ρ = 0`).
    pub linear_discrepancy: Vec<f64>,
    pub linear_sup_discrepancy: f64,
    /// `sup_t ‖V_{R,N}(t)‖_{H¹}`.
    pub v_h1_sup: f64,
    pub warnings: Vec<String>,
}

fn h1_distance(a: &ZonalField, b: &ZonalField) -> f64 {
    let n = a.truncation().max(b.truncation());
    (1..=n).map(|k| (k * k) as f64 * (a.coeff(k) - b.coeff(k)).norm_sqr()).sum::<f64>().sqrt()
}

fn h1_norm(a: &ZonalField) -> f64 {
    h1_distance(a, &ZonalField::zeros(0))
}

/// Compares the sphere solution with data `T_N φ` against the rescaled
/// Euclidean solution `V_{R,N}` on `0 ≤ t ≤ T₀N⁻²`.
pub fn compare_profile_evolution(phi: &RadialProfile, cfg: &ComparisonConfig) -> Result<ProfileComparison> {
    let n = cfg.n;
    let r_cut = cfg.r_cut.unwrap_or(n / 10.0);
    if !(r_cut > 0.0) || n < 10.0 * r_cut * (1.0 - 1e-12) {
        return Err(Error::Regime(format!("need N >= 10R (N = {n}, R = {r_cut})")));
    }
    if !(cfg.t0 > 0.0) || cfg.snapshots == 0 {
        return Err(Error::Config("need T0 > 0 and at least one snapshot".into()));
    }
    let bw = phi.bandwidth().max(1.0);
    let k = (cfg.k_factor.unwrap_or(f64::max(8.0, 6.0 * bw)) * n).ceil() as usize;
    let m = 3 * k;
    let grid = SphereGrid::new(m)?;
    let u0 = make_profile(&ProfileSpec::new(phi.clone(), n)?, &grid)?.with_truncation(k);

    let s = cfg.snapshots;
    let t_final = cfg.t0 / (n * n);
    let per = ((t_final / s as f64) * 4.0 * (k * k) as f64).ceil().max(1.0) as usize;
    let sphere_cfg = SolverConfig { k, m, dt: t_final / (s * per) as f64, rho: cfg.rho, t_final, stride: per };
    let sphere = solve_sphere(&u0, &sphere_cfg)?;

    let radius = cfg.euclid_radius.unwrap_or(f64::max(4.0 * r_cut, 16.0 * phi.decay_radius()));
    let k_e = cfg.euclid_modes.unwrap_or((8.0 * bw * radius / std::f64::consts::PI).ceil() as usize);
    let mass = 1.0;
    let geometry = Geometry::Euclidean { radius, mass };
    let lambda = geometry.eigenvalue(k_e);
    let per_e = ((cfg.t0 / s as f64) * 4.0 * lambda).ceil().max(1.0) as usize;
    let euclid_cfg =
        SolverConfig { k: k_e, m: 3 * k_e, dt: cfg.t0 / (s * per_e) as f64, rho: cfg.rho, t_final: cfg.t0, stride: per_e };
    let euclid = solve_euclidean_radial(phi, radius, mass, &euclid_cfg)?;
    if euclid.times.len() != sphere.times.len() {
        return Err(Error::Config("sphere and Euclidean sample times do not align".into()));
    }
    let v = build_rescaled_comparison(&euclid, r_cut, n, &grid, k)?;
    let discrepancy: Vec<f64> = sphere.snapshots.iter().zip(&v).map(|(u, (_, vv))| h1_distance(u, vv)).collect();
    let v_h1_sup = v.iter().map(|(_, vv)| h1_norm(vv)).fold(0.0, f64::max);

    // Linear window: both flows are exact phase maps.
    let engine = RadialEngine::new(geometry, k_e, 3 * k_e)?;
    let e0 = euclid.snapshots[0].coeffs();
    let linear_traj = Trajectory {
        geometry,
        times: euclid.times.clone(),
        snapshots: euclid
            .times
            .iter()
            .map(|&tau| ZonalField::from_coeffs(e0.iter().zip(engine.phases(tau)).map(|(c, p)| c * p).collect()))
            .collect(),
        conserved: Vec::new(),
        warnings: Vec::new(),
    };
    let v_lin = build_rescaled_comparison(&linear_traj, r_cut, n, &grid, k)?;
    let linear_discrepancy: Vec<f64> =
        v_lin.iter().map(|(t, vv)| h1_distance(&evolve_linear(&u0, *t), vv)).collect();

    let mut warnings = sphere.warnings.clone();
    warnings.extend(euclid.warnings.iter().cloned());
    Ok(ProfileComparison {
        n,
        r_cut,
        times: sphere.times.clone(),
        sup_discrepancy: discrepancy.iter().copied().fold(0.0, f64::max),
        discrepancy,
        linear_sup_discrepancy: linear_discrepancy.iter().copied().fold(0.0, f64::max),
        linear_discrepancy,
        v_h1_sup,
        warnings,
    })
}
