//! Zonal harmonic analysis on S³: grids, eigenfunctions, transforms,
//! spectral projectors and norms.

pub mod bump;
pub mod grid;
pub mod kernel;
pub mod norms;
pub mod quadrature;
pub mod transform;
pub mod zonal;

pub use bump::{eta, BumpFunction};
pub use grid::{make_grid, SphereGrid, SPHERE_VOLUME, VOLUME_FACTOR};
pub use kernel::{projector_kernel_oracle, KernelOracle};
pub use norms::{norm, sup_norm, z_norm, z_norm_report, NormSpec, ZNormReport, Z_EXPONENTS};
pub use zonal::{
    analyze, apply_l, dyadic_bands, normalized_zonal, project, sample, synthesize, zonal_eval, BandSpec,
    GridSamples, ZonalField, MODE_NORM,
};
