//! Sweep-level examples: self-convergence, profile comparison trends,
//! estimate scalings and fitted-constant stability.

use std::f64::consts::PI;

use num_complex::Complex64;
use sphere_nls::linear::{
    extinction_scan_field, extinction_times, hflfi_scan, loglog_fit, make_profile, trilinear_scan, ExtinctionMesh,
    ProfileSpec, RadialProfile,
};
use sphere_nls::nls::{
    compare_profile_evolution, conserving_branch, radial_sobolev_ratio, solve_ball_radial, solve_euclidean_radial,
    strang_step, BallField, ComparisonConfig, ProfileComparison, SolverConfig,
};
use sphere_nls::seed::{cell_rng, complex_gaussian};
use sphere_nls::spectral::zonal::{dyadic_bands, project, BandSpec};
use sphere_nls::spectral::{norm, sup_norm, NormSpec, SphereGrid, ZonalField};
use sphere_nls::weyl::{
    difference, dirichlet_approx, verify_weyl_bound, weyl_sum, IndexedSequence, WeylSequence,
};

fn gaussian_datum(k: usize, amplitude: f64) -> ZonalField {
    ZonalField::from_coeffs((1..=k).map(|j| Complex64::new(amplitude * (-((j * j) as f64) / 16.0).exp(), 0.0)).collect())
}

fn dist(a: &ZonalField, b: &ZonalField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn random_field(seed: u64, truncation: usize, index: u64) -> ZonalField {
    let mut rng = cell_rng(seed, &[truncation as u64, index]);
    ZonalField::from_coeffs((0..truncation).map(|_| complex_gaussian(&mut rng)).collect())
}

fn spread(xs: &[f64]) -> f64 {
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    hi / lo
}

#[test]
fn strang_self_convergence_is_second_order() {
    let cfg = SolverConfig { k: 32, m: 96, dt: 1e-5, rho: conserving_branch(), t_final: 0.5, stride: 1 };
    let run = |dt: f64| {
        let mut u = gaussian_datum(32, 1.5);
        for _ in 0..(0.5 / dt).round() as usize {
            u = strang_step(&u, dt, &cfg).unwrap();
        }
        u
    };
    let reference = run(1e-5);
    let ratio = dist(&run(2e-4), &reference) / dist(&run(1e-4), &reference);
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn euclidean_self_convergence_is_second_order() {
    let phi = RadialProfile::reference();
    let run = |dt: f64| {
        let cfg = SolverConfig { k: 128, m: 384, dt, rho: conserving_branch(), t_final: 0.5, stride: 1_000_000 };
        solve_euclidean_radial(&phi, 16.0, 1.0, &cfg).unwrap().last().unwrap().clone()
    };
    let (a, b, c) = (run(2e-4), run(1e-4), run(5e-5));
    let ratio = dist(&a, &b) / dist(&b, &c);
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

fn comparisons() -> Vec<ProfileComparison> {
    let phi = RadialProfile::reference();
    let rho = conserving_branch();
    std::thread::scope(|s| {
        let handles: Vec<_> = [64.0, 128.0, 256.0]
            .into_iter()
            .map(|n| {
                let phi = &phi;
                s.spawn(move || compare_profile_evolution(phi, &ComparisonConfig::new(n, 4.0, rho)).unwrap())
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

#[test]
fn profile_comparison_trends() {
    let results = comparisons();
    let sups: Vec<f64> = results.iter().map(|r| r.sup_discrepancy).collect();
    assert!(sups[0] > sups[1] && sups[1] > sups[2], "discrepancy not decreasing: {sups:?}");
    assert!(sups[2] <= 0.5 * sups[0], "{sups:?}");
    // The rescaled Euclidean solution stays bounded in H¹ uniformly in N.
    let h1: Vec<f64> = results.iter().map(|r| r.v_h1_sup).collect();
    assert!(h1.iter().all(|x| x.is_finite()) && spread(&h1) < 1.5, "{h1:?}");
    let h1_0 = RadialProfile::reference().h1_seminorm();
    assert!(h1.iter().all(|&x| x < 2.0 * h1_0 + 1.0), "{h1:?} against {h1_0}");
}

#[test]
fn extinction_scan_nonincreasing_in_window() {
    let n = 256.0;
    let phi = RadialProfile::reference();
    let order = (16.0 * n * phi.bandwidth().max(1.0)).ceil() as usize;
    let grid = SphereGrid::new(order).unwrap();
    let field = make_profile(&ProfileSpec::new(phi, n).unwrap(), &grid).unwrap();
    let mesh = ExtinctionMesh { log_points: 256, resonant_q_max: None };
    let values: Vec<f64> = [4.0, 16.0, 64.0]
        .iter()
        .map(|&t| extinction_scan_field(&field, &extinction_times(t, n, mesh).unwrap()))
        .collect();
    assert!(values[0] >= values[1] && values[1] >= values[2], "{values:?}");
    assert!(values[2] <= 0.5 * values[0], "{values:?}");
}

#[test]
fn ball_conserves_at_fine_step() {
    let phi = BallField::from_coeffs(gaussian_datum(128, 2.0).coeffs().to_vec());
    let cfg = SolverConfig { k: 128, m: 384, dt: 1e-5, rho: conserving_branch(), t_final: 1.0, stride: 10_000 };
    let traj = solve_ball_radial(&phi, &cfg).unwrap();
    let (mass, energy) = traj.relative_drift();
    assert!(mass <= 1e-10 && energy <= 1e-6, "mass {mass:e}, energy {energy:e}");
}

#[test]
fn radial_sobolev_constant_stable_across_ensemble() {
    let cfg = SolverConfig { k: 32, m: 96, dt: 1e-4, rho: conserving_branch(), t_final: 1.0, stride: 100 };
    let constants: Vec<f64> = (1..=6u64)
        .map(|seed| {
            let data = BallField::random(16, seed);
            let phi = BallField::from_coeffs(data.coeffs().iter().map(|c| c * 0.1).collect());
            let traj = solve_ball_radial(&phi, &cfg).unwrap();
            traj.snapshots
                .iter()
                .map(|u| radial_sobolev_ratio(&BallField::from_coeffs(u.coeffs().to_vec())).unwrap())
                .fold(0.0, f64::max)
        })
        .collect();
    assert!(constants.iter().all(|c| c.is_finite() && *c > 0.0));
    assert!(spread(&constants) <= 2.0, "{constants:?}");
}

/// `‖f‖⁶_{L⁶} / (‖f‖²_{H¹} · (sup_N N^{-1/2} ‖P_N f‖_∞)⁴)`.
fn interpolation_ratio(f: &ZonalField) -> f64 {
    let grid = SphereGrid::new(4 * f.truncation() + 4).unwrap();
    let l6 = norm(f, &grid, NormSpec::Lp(6.0)).unwrap();
    let h1 = norm(f, &grid, NormSpec::Hs(1.0)).unwrap();
    let piece = dyadic_bands(f.truncation())
        .into_iter()
        .map(|n| sup_norm(&project(f, BandSpec::dyadic(n).unwrap())) / (n as f64).sqrt())
        .fold(0.0, f64::max);
    l6.powi(6) / (h1 * h1 * piece.powi(4))
}

#[test]
fn interpolation_constant_stable_across_truncations() {
    let constants: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&k| (0..8).map(|i| interpolation_ratio(&random_field(5, k, i))).fold(0.0, f64::max))
        .collect();
    assert!(spread(&constants) <= 2.0, "{constants:?}");
}

#[test]
fn trilinear_ratio_does_not_grow_in_high_frequency() {
    let report = trilinear_scan(&[8, 16, 32, 64, 128], 4, 2, 1, (-1.0, 1.0), 4).unwrap();
    for row in &report.rows {
        assert!(row.measured <= row.reference, "{row:?}");
    }
    // With N₂, N₃ fixed the reference N₃/N₁ + 1/N₂ flattens at 1/N₂, and so
    // does the measured ratio.
    assert!(report.slope < 0.1, "slope {}", report.slope);
}

#[test]
fn hflfi_constant_stable_in_q_at_fixed_scale() {
    let scans = hflfi_scan(&[16, 32, 64, 128, 256, 512], &[16]).unwrap();
    let (_, report, c) = &scans[0];
    let ratios: Vec<f64> = report.rows.iter().map(|r| r.measured / r.reference).collect();
    assert!(ratios.iter().all(|r| r <= c), "{ratios:?}");
    assert!(*c <= 2.0 * ratios.iter().copied().fold(f64::INFINITY, f64::min), "{ratios:?}");
}

#[test]
fn weyl_prime_ratio_equals_q_over_n() {
    let n = 64u64;
    for q in [5u64, 13, 29, 61] {
        let seq = IndexedSequence::new(0, vec![Complex64::new(1.0, 0.0); q as usize]);
        let c = WeylSequence::new(seq, 1.0, 1.0, n).unwrap();
        let t = 2.0 * PI / q as f64;
        let report = verify_weyl_bound(&c, &[t]).unwrap();
        let expected = q as f64 / n as f64;
        assert!((report.max_ratio - expected).abs() < 1e-10, "q = {q}: {} vs {expected}", report.max_ratio);
        assert!(report.max_ratio <= 1.0);
    }
}

#[test]
fn weyl_resonant_values_scale_like_inverse_root_q() {
    let n = 4096u64;
    let c = WeylSequence::flat(n);
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];
    let points: Vec<(f64, f64)> = primes
        .iter()
        .map(|&q| {
            let t = 2.0 * PI / q as f64;
            assert_eq!(dirichlet_approx(t, n).unwrap().q, q);
            (q as f64, weyl_sum(&c, t).norm())
        })
        .collect();
    let (slope, _) = loglog_fit(&points);
    assert!((slope + 0.5).abs() <= 0.1, "slope {slope}");
}

#[test]
fn summation_by_parts_identity() {
    for (seed, start, len) in [(1u64, -7i64, 40usize), (2, 0, 1), (3, 12, 97)] {
        let mut rng = cell_rng(seed, &[]);
        let seq = IndexedSequence::new(start, (0..len).map(|_| complex_gaussian(&mut rng)).collect());
        let d = difference(&seq, 1).unwrap();
        for (m, t) in [(1i64, 0.3), (3, 1.7), (-2, 2.9)] {
            let z = Complex64::from_polar(1.0, 2.0 * m as f64 * t);
            let lhs = (Complex64::new(1.0, 0.0) - z) * (start..=seq.end()).map(|p| seq.get(p) * z.powi(p as i32)).sum::<Complex64>();
            let rhs: Complex64 = (d.start..=d.end()).map(|p| d.get(p) * z.powi(p as i32)).sum();
            let scale: f64 = seq.values.iter().map(|c| c.norm()).sum();
            assert!((lhs - rhs).norm() <= 1e-10 * scale, "{lhs} vs {rhs}");
        }
    }
}
