//! Radial fields on the Dirichlet ball `B(0, π)` and their conjugation to
//! zonal fields on S³ through `g(θ) = sin θ / θ`.

use num_complex::Complex64;

use super::engine::{Geometry, RadialEngine};
use super::{solve_radial, SolverConfig, Trajectory};
use crate::error::{Error, Result};
use crate::linear::evolve_linear;
use crate::seed::{cell_rng, complex_gaussian};
use crate::spectral::grid::SphereGrid;
use crate::spectral::zonal::{analyze, synthesize, ZonalField};

/// A radial field `Σ b_k sin(kr) / (√2π r)` on `B(0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallField {
    coeffs: Vec<Complex64>,
}

impl BallField {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// Samples `f` on the order-`m` ball nodes and analyzes onto
    /// `truncation` modes. `f(π)` must vanish.
    pub fn from_fn(f: impl Fn(f64) -> Complex64, m: usize, truncation: usize) -> Result<Self> {
        let engine = RadialEngine::new(Geometry::Ball, truncation, m)?;
        let values: Vec<Complex64> = engine.nodes().iter().map(|&r| f(r)).collect();
        let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let trace = f(std::f64::consts::PI).norm();
        if trace > 1e-10 * scale {
            return Err(Error::Dirichlet(format!("boundary trace |φ(π)| = {trace} does not vanish")));
        }
        Ok(Self { coeffs: engine.analyze_vec(&values) })
    }

    /// `modes` complex Gaussian coefficients from the cell stream `(seed, modes)`.
    pub fn random(modes: usize, seed: u64) -> Self {
        let mut rng = cell_rng(seed, &[modes as u64]);
        Self { coeffs: (0..modes).map(|_| complex_gaussian(&mut rng)).collect() }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// `∫_B |φ|²`.
    pub fn mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `‖∇φ‖_{L²(B)}`.
    pub fn gradient_norm(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, c)| ((i + 1) * (i + 1)) as f64 * c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.coeffs.iter().enumerate().map(|(i, &c)| c * Geometry::Ball.mode_value(i + 1, r)).sum()
    }

    /// Values at the interior nodes `r_j = jπ/M`.
    pub fn values(&self, m: usize) -> Result<Vec<Complex64>> {
        Ok(RadialEngine::new(Geometry::Ball, self.truncation().max(1), m)?.synthesize_vec(&self.coeffs))
    }
}

/// `g(θ) = sin θ / θ`, with `g(0) = 1`.
pub fn conjugation_weight(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        1.0 - theta * theta / 6.0
    } else {
        theta.sin() / theta
    }
}

/// `φ / g` as a zonal field. In the normalized bases this maps the ball
/// coefficient of `sin(kr)/r` to the zonal coefficient of
/// `sin(kθ)/sin θ`, so it is the identity on coefficients.
pub fn ball_lift(phi: &BallField) -> ZonalField {
    ZonalField::from_coeffs(phi.coeffs.clone())
}

/// `g · u` as a ball field; inverse of [`ball_lift`].
pub fn ball_push(u: &ZonalField) -> BallField {
    BallField::from_coeffs(u.coeffs().to_vec())
}

/// `‖e^{-itΔ_B} φ - g · e^{itL}(φ/g)‖_{L²(B)}` on the order-`m` nodes. The
/// left side uses the Dirichlet eigenbasis; the right side lifts the node
/// values pointwise, evolves on S³ and pushes back pointwise.
pub fn verify_ball_flow(phi: &BallField, t: f64, m: usize) -> Result<f64> {
    let k = phi.truncation().max(1);
    let engine = RadialEngine::new(Geometry::Ball, k, m)?;
    let left: Vec<Complex64> = {
        let evolved: Vec<Complex64> = phi.coeffs.iter().zip(engine.phases(t)).map(|(c, p)| c * p).collect();
        engine.synthesize_vec(&evolved)
    };
    let values = engine.synthesize_vec(&phi.coeffs);
    let grid = SphereGrid::new(m)?;
    let lifted: Vec<Complex64> = values.iter().zip(grid.nodes()).map(|(v, &th)| v / conjugation_weight(th)).collect();
    let evolved = evolve_linear(&analyze(&lifted, &grid, k)?, t);
    let right: Vec<Complex64> = synthesize(&evolved, &grid)?
        .iter()
        .zip(grid.nodes())
        .map(|(u, &th)| u * conjugation_weight(th))
        .collect();
    Ok(engine.integrate(left.iter().zip(&right).map(|(a, b)| (a - b).norm_sqr())).sqrt())
}

/// Strang trajectory of the radial quintic NLS on `B(0, π)` with Dirichlet
/// condition, `(i∂_t - Δ)u = ρ|u|⁴u`.
pub fn solve_ball_radial(phi: &BallField, config: &SolverConfig) -> Result<Trajectory> {
    if phi.truncation() > config.k {
        return Err(Error::Truncation(format!("data truncation {} exceeds K = {}", phi.truncation(), config.k)));
    }
    let engine = RadialEngine::new(Geometry::Ball, config.k, config.m)?;
    solve_radial(&engine, phi.coeffs.clone(), config)
}

/// `sup_r (r/(π - r))^{1/2} |u(r)| / ‖∇u‖_{L²(B)}` on a grid eight times
/// finer than the truncation.
pub fn radial_sobolev_ratio(u: &BallField) -> Result<f64> {
    let grad = u.gradient_norm();
    if grad == 0.0 {
        return Ok(0.0);
    }
    let m = 8 * (u.truncation() + 1);
    let engine = RadialEngine::new(Geometry::Ball, u.truncation().max(1), m)?;
    let vals = engine.synthesize_vec(&u.coeffs);
    let pi = std::f64::consts::PI;
    let sup = engine
        .nodes()
        .iter()
        .zip(&vals)
        .map(|(&r, v)| (r / (pi - r)).sqrt() * v.norm())
        .fold(0.0, f64::max);
    Ok(sup / grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn weight_limit() {
        assert_eq!(conjugation_weight(0.0), 1.0);
        assert!((conjugation_weight(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 1e-15);
    }

    #[test]
    fn lift_of_sine_mode_is_zonal_mode() {
        let k = 5;
        let phi = BallField::from_fn(|r| Complex64::new((k as f64 * r).sin() / r, 0.0), 64, 16).unwrap();
        let z = ball_lift(&phi);
        let grid = SphereGrid::new(64).unwrap();
        let vals = synthesize(&z, &grid).unwrap();
        for (v, &th) in vals.iter().zip(grid.nodes()) {
            assert!((v.re - (k as f64 * th).sin() / th.sin()).abs() < 1e-11);
        }
        assert_eq!(ball_push(&z), phi);
    }

    #[test]
    fn dirichlet_violation() {
        assert!(matches!(
            BallField::from_fn(|_| Complex64::new(1.0, 0.0), 32, 8),
            Err(Error::Dirichlet(_))
        ));
    }

    #[test]
    fn lift_preserves_norm() {
        let phi = BallField::random(12, 3);
        let z = ball_lift(&phi);
        let grid = SphereGrid::new(64).unwrap();
        let sphere = grid.integrate(synthesize(&z, &grid).unwrap().iter().map(|v| v.norm_sqr()));
        let ball_vals = phi.values(64).unwrap();
        let engine = RadialEngine::new(Geometry::Ball, 12, 64).unwrap();
        let ball = engine.integrate(ball_vals.iter().map(|v| v.norm_sqr()));
        assert!((sphere - ball).abs() < 1e-12 * ball);
    }

    #[test]
    fn conjugation_examples() {
        let mut single = vec![Complex64::new(0.0, 0.0); 4];
        single[3] = Complex64::new(1.0, 0.0);
        assert!(verify_ball_flow(&BallField::from_coeffs(single), 0.37, 64).unwrap() < 1e-12);
        let phi = BallField::random(32, 11);
        assert!(verify_ball_flow(&phi, 0.37, 128).unwrap() < 1e-10);
        let engine = RadialEngine::new(Geometry::Ball, 32, 128).unwrap();
        let back: Vec<Complex64> = phi.coeffs().iter().zip(engine.phases(TAU)).map(|(c, p)| c * p).collect();
        assert!(back.iter().zip(phi.coeffs()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn ball_flow_conserves_mass_and_linear_case_is_phase() {
        let phi = BallField::from_coeffs((1..=8).map(|k| Complex64::new((-(k as f64)).exp(), 0.0)).collect());
        let lin = SolverConfig { k: 8, m: 24, dt: 1e-3, rho: 0.0, t_final: 0.3, stride: 100 };
        let traj = solve_ball_radial(&phi, &lin).unwrap();
        let expect: Vec<Complex64> =
            phi.coeffs().iter().enumerate().map(|(i, c)| c * Complex64::from_polar(1.0, ((i + 1) * (i + 1)) as f64 * 0.3)).collect();
        assert!(traj.last().unwrap().coeffs().iter().zip(&expect).all(|(a, b)| (a - b).norm() < 1e-12));
        let nl = SolverConfig { rho: -1.0, ..lin };
        let (mass, _) = solve_ball_radial(&phi, &nl).unwrap().relative_drift();
        assert!(mass < 1e-12);
    }

    #[test]
    fn sobolev_ratio_finite() {
        let phi = BallField::random(16, 5);
        let r = radial_sobolev_ratio(&phi).unwrap();
        assert!(r.is_finite() && r > 0.0);
        assert_eq!(radial_sobolev_ratio(&BallField::from_coeffs(vec![])).unwrap(), 0.0);
    }
}
