//! Split-step integrators for the radial quintic NLS on S³, on ℝ³ and on
//! the Dirichlet ball, in the convention `(i∂_t + L)u = ρ|u|⁴u`.

pub mod ball;
pub mod engine;
pub mod euclidean;

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::grid::SphereGrid;
use crate::spectral::norms::{z_norm_report, ZNormReport};
use crate::spectral::zonal::{analyze, synthesize, ZonalField};

pub use ball::{
    ball_lift, ball_push, conjugation_weight, radial_sobolev_ratio, solve_ball_radial, verify_ball_flow, BallField,
};
pub use engine::{nonlinear_phase, ConservedPair, Geometry, RadialEngine, Stepper};
pub use euclidean::{
    build_rescaled_comparison, compare_profile_evolution, solve_euclidean_radial, ComparisonConfig, ProfileComparison,
};

/// Truncation, grid order, time step, nonlinearity sign, final time and
/// snapshot stride.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub k: usize,
    pub m: usize,
    pub dt: f64,
    pub rho: f64,
    pub t_final: f64,
    pub stride: usize,
}

impl SolverConfig {
    /// Checks `M ≥ 3K`, `dt ≤ 1/(4K²)`, `ρ ∈ {-1, 0, 1}`, `T ≥ 0`.
    pub fn validate(&self) -> Result<()> {
        self.validate_for(Geometry::Sphere)
    }

    /// As [`SolverConfig::validate`], with the step bound `dt ≤ 1/(4λ_K)`
    /// for the largest eigenvalue `λ_K` of the geometry.
    pub fn validate_for(&self, geometry: Geometry) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("truncation K must be positive".into()));
        }
        if self.m < 3 * self.k {
            return Err(Error::Config(format!("grid order M = {} below 3K = {}", self.m, 3 * self.k)));
        }
        let limit = 1.0 / (4.0 * geometry.eigenvalue(self.k).max(1.0));
        if !(self.dt > 0.0 && self.dt <= limit * (1.0 + 1e-12)) {
            return Err(Error::Config(format!("time step dt = {} must lie in (0, {limit}]", self.dt)));
        }
        if ![-1.0, 0.0, 1.0].contains(&self.rho) {
            return Err(Error::Config(format!("nonlinearity sign ρ = {} must be -1, 0 or 1", self.rho)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("final time T = {} must be finite and nonnegative", self.t_final)));
        }
        if self.stride == 0 {
            return Err(Error::Config("snapshot stride must be positive".into()));
        }
        Ok(())
    }

    /// Number of steps and the step actually taken: `⌈T/dt⌉` steps of
    /// `T/⌈T/dt⌉`.
    pub fn schedule(&self) -> (usize, f64) {
        if self.t_final == 0.0 {
            return (0, self.dt);
        }
        let n = ((self.t_final / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (n, self.t_final / n as f64)
    }
}

/// Snapshots of a radial solution. Snapshot coefficients are in the
/// normalized sine basis of the geometry; on the sphere they are the zonal
/// field itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub geometry: Geometry,
    pub times: Vec<f64>,
    pub snapshots: Vec<ZonalField>,
    pub conserved: Vec<ConservedPair>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    /// `max_t |X(t) - X(0)| / X(0)` for mass and energy.
    pub fn relative_drift(&self) -> (f64, f64) {
        let Some(first) = self.conserved.first() else {
            return (0.0, 0.0);
        };
        let rel = |a: f64, b: f64| if b != 0.0 { (a - b).abs() / b.abs() } else { (a - b).abs() };
        self.conserved.iter().fold((0.0, 0.0), |(m, e), c| {
            (f64::max(m, rel(c.mass, first.mass)), f64::max(e, rel(c.energy, first.energy)))
        })
    }

    pub fn last(&self) -> Option<&ZonalField> {
        self.snapshots.last()
    }
}

/// Strang integration in any geometry from initial coefficients.
pub(crate) fn solve_radial(engine: &RadialEngine, init: Vec<Complex64>, config: &SolverConfig) -> Result<Trajectory> {
    config.validate_for(engine.geometry())?;
    let (steps, dt) = config.schedule();
    let mut coeffs = init;
    coeffs.resize(engine.truncation(), Complex64::new(0.0, 0.0));
    let mut stepper = Stepper::new(engine, dt, config.rho);
    let mut traj = Trajectory {
        geometry: engine.geometry(),
        times: vec![0.0],
        snapshots: vec![ZonalField::from_coeffs(coeffs.clone())],
        conserved: vec![engine.conserved(&coeffs)],
        warnings: Vec::new(),
    };
    if config.rho > 0.0 {
        traj.warnings.push("ρ = +1 run: no conservation or global-existence claim applies".into());
    }
    let mut last_finite = 0.0;
    for n in 1..=steps {
        stepper.step(&mut coeffs);
        let t = n as f64 * dt;
        if !coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::BlowUp { last_finite_time: last_finite });
        }
        last_finite = t;
        if n % config.stride == 0 || n == steps {
            traj.times.push(t);
            traj.snapshots.push(ZonalField::from_coeffs(coeffs.clone()));
            traj.conserved.push(engine.conserved(&coeffs));
        }
    }
    Ok(traj)
}

/// Strang trajectory of `(i∂_t + L)u = ρ|u|⁴u` on S³ from zonal data.
pub fn solve_sphere(u0: &ZonalField, config: &SolverConfig) -> Result<Trajectory> {
    if u0.truncation() > config.k {
        return Err(Error::Truncation(format!(
            "initial truncation {} exceeds K = {}",
            u0.truncation(),
            config.k
        )));
    }
    config.validate()?;
    let engine = RadialEngine::new(Geometry::Sphere, config.k, config.m)?;
    solve_radial(&engine, u0.coeffs().to_vec(), config)
}

/// `u ↦ e^{-iρ|u|⁴dt}u` on the grid, re-projected onto the truncation of
/// the field.
pub fn nonlinear_step(field: &ZonalField, grid: &SphereGrid, dt: f64, rho: f64) -> Result<ZonalField> {
    let mut values = synthesize(field, grid)?;
    nonlinear_phase(&mut values, dt, rho);
    analyze(&values, grid, field.truncation())
}

/// One Strang step of the sphere flow.
pub fn strang_step(field: &ZonalField, dt: f64, config: &SolverConfig) -> Result<ZonalField> {
    config.validate()?;
    if field.truncation() > config.k {
        return Err(Error::Truncation(format!("field truncation {} exceeds K = {}", field.truncation(), config.k)));
    }
    let engine = RadialEngine::new(Geometry::Sphere, config.k, config.m)?;
    let mut coeffs = field.with_truncation(config.k).into_coeffs();
    Stepper::new(&engine, dt, config.rho).step(&mut coeffs);
    Ok(ZonalField::from_coeffs(coeffs))
}

/// Mass and energy of a zonal field, with the sextic term by quadrature on
/// `grid`.
pub fn conserved_quantities(field: &ZonalField, grid: &SphereGrid) -> Result<ConservedPair> {
    let engine = RadialEngine::new(Geometry::Sphere, field.truncation().max(1), grid.order())?;
    let coeffs = field.with_truncation(engine.truncation()).into_coeffs();
    Ok(engine.conserved(&coeffs))
}

/// The sign of `ρ` for which `E(u) = ½∫[|∇u|² + ⅓|u|⁶]` is conserved.
///
/// Determined by integrating a smooth nonconstant datum with both signs and
/// keeping the one with the smaller energy drift.
pub fn conserving_branch() -> f64 {
    static BRANCH: OnceLock<f64> = OnceLock::new();
    *BRANCH.get_or_init(|| {
        let k = 16;
        let u0 = ZonalField::from_coeffs((1..=k).map(|j| Complex64::new(2.0 * (-((j * j) as f64) / 8.0).exp(), 0.0)).collect());
        let drift = |rho: f64| {
            let cfg = SolverConfig { k, m: 3 * k, dt: 1e-3, rho, t_final: 0.2, stride: 20 };
            solve_sphere(&u0, &cfg).map(|t| t.relative_drift().1).unwrap_or(f64::INFINITY)
        };
        if drift(-1.0) <= drift(1.0) {
            -1.0
        } else {
            1.0
        }
    })
}

/// Discrete Z-norm of a sphere trajectory over `[0, T]`, with the share of
/// dyadic bands above `K/2`.
pub fn z_norm_monitor(traj: &Trajectory, grid: &SphereGrid) -> Result<ZNormReport> {
    if traj.geometry != Geometry::Sphere {
        return Err(Error::Domain("Z-norm monitor applies to sphere trajectories".into()));
    }
    let t_end = traj.times.last().copied().unwrap_or(0.0);
    let k = traj.snapshots.first().map(|s| s.truncation()).unwrap_or(0);
    z_norm_report(&traj.times, &traj.snapshots, (0.0, t_end), grid, k / 2)
}
