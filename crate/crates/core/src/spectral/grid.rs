use std::f64::consts::PI;
use std::sync::Arc;

use super::transform::Dst;
use crate::error::{Error, Result};

/// Volume of the unit 3-sphere, `2π²`.
pub const SPHERE_VOLUME: f64 = 2.0 * PI * PI;

/// Area of the unit 2-sphere; multiplies θ-integrals of zonal functions.
pub const VOLUME_FACTOR: f64 = 4.0 * PI;

/// Interior sine-transform nodes `θ_j = jπ/M`, `j = 1..M-1`, with trapezoid
/// weights for `∫₀^π f(θ) sin²θ dθ`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    m: usize,
    nodes: Arc<[f64]>,
    weights: Arc<[f64]>,
    dst: Dst,
}

impl PartialEq for SphereGrid {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl SphereGrid {
    /// Builds the grid of order `M`; requires `M >= 4`.
    pub fn new(m: usize) -> Result<Self> {
        if m < 4 {
            return Err(Error::InvalidGrid(format!("grid order M = {m} must be at least 4")));
        }
        let h = PI / m as f64;
        let nodes: Arc<[f64]> = (1..m).map(|j| j as f64 * h).collect();
        let weights: Arc<[f64]> = nodes.iter().map(|&t| h * t.sin().powi(2)).collect();
        Ok(Self { m, nodes, weights, dst: Dst::new(m) })
    }

    /// Grid order `M`.
    pub fn order(&self) -> usize {
        self.m
    }

    /// Number of interior nodes, `M - 1`.
    pub fn len(&self) -> usize {
        self.m - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest mode index the grid represents exactly.
    pub fn max_mode(&self) -> usize {
        self.m - 1
    }

    /// The grid `factor` times finer.
    pub fn refined(&self, factor: usize) -> Self {
        Self::new(self.m * factor.max(1)).expect("refinement of a valid grid")
    }

    pub(crate) fn dst(&self) -> &Dst {
        &self.dst
    }

    /// `4π Σ_j w_j f(θ_j)`: the S³ integral of a zonal function given by
    /// its node values.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        VOLUME_FACTOR * self.weights.iter().zip(values).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Constructor in the operation vocabulary of the crate.
pub fn make_grid(m: usize) -> Result<SphereGrid> {
    SphereGrid::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_eight_has_seven_nodes() {
        let g = make_grid(8).unwrap();
        assert_eq!(g.len(), 7);
        for (j, &t) in g.nodes().iter().enumerate() {
            assert_eq!(t, (j + 1) as f64 * PI / 8.0);
        }
    }

    #[test]
    fn weights_integrate_sin_squared_exactly() {
        for m in [4, 5, 8, 17, 64, 1000] {
            let g = make_grid(m).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!((s - PI / 2.0).abs() < 1e-12, "M = {m}: {s}");
        }
    }

    #[test]
    fn nodes_strictly_increasing_and_interior() {
        let g = make_grid(37).unwrap();
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(g.nodes().iter().all(|&t| t > 0.0 && t < PI));
    }

    #[test]
    fn rejects_small_order() {
        assert!(matches!(make_grid(3), Err(Error::InvalidGrid(_))));
        assert!(make_grid(0).is_err());
    }
}
