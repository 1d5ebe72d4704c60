//! Validation and dispatch of configurations to the experiments.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::config::{Experiment, ExperimentConfig};
use super::table::{Cell, CsvTable};
use super::{par_map, HarnessError};
use crate::error::{Error, Result};
use crate::linear::{
    extinction_scan_field, extinction_times, extinction_window, make_profile, sogge_scan, strichartz_scan,
    trilinear_scan, concentration_ratio, hflfi_scan, EstimateReport, ExtinctionMesh, ProfileSpec, RadialProfile,
};
use crate::nls::{
    compare_profile_evolution, radial_sobolev_ratio, solve_ball_radial, solve_sphere, verify_ball_flow, BallField,
    ComparisonConfig, Geometry, SolverConfig,
};
use crate::seed::{cell_rng, cell_seed, complex_gaussian};
use crate::spectral::zonal::BandSpec;
use crate::spectral::{KernelOracle, SphereGrid, ZonalField};
use crate::weyl::{verify_weyl_bound, weyl_sample_times, weyl_sum, WeylSequence};

type Outcome<T> = std::result::Result<T, HarnessError>;

/// Validates `cfg` against the preconditions of its experiment and runs it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Outcome<CsvTable> {
    validate(cfg)?;
    let e = cfg.experiment;
    let result = match e {
        Experiment::Simulate => simulate(cfg),
        Experiment::Extinction => extinction(cfg),
        Experiment::Weyl => weyl(cfg),
        Experiment::Strichartz => strichartz(cfg),
        Experiment::Sogge => sogge(cfg),
        Experiment::Concentration => concentration(cfg),
        Experiment::Trilinear => trilinear(cfg),
        Experiment::Hflfi => hflfi(cfg),
        Experiment::ProjectorCheck => projector_check(cfg),
        Experiment::ProfileCompare => profile_compare(cfg),
        Experiment::Ball => ball(cfg),
        Experiment::BallVerify => ball_verify(cfg),
    };
    result.map_err(|source| HarnessError::Run { experiment: e.name(), source })
}

fn precondition(cfg: &ExperimentConfig, key: &str, message: impl std::fmt::Display) -> HarnessError {
    let at = cfg.line_of(key).map(|l| format!(" (line {l})")).unwrap_or_default();
    HarnessError::Precondition { experiment: cfg.experiment.name(), message: format!("{key}: {message}{at}") }
}

fn grid_order(cfg: &ExperimentConfig, k: usize) -> usize {
    match cfg.usize("M") {
        0 => 3 * k,
        m => m,
    }
}

fn solver_config(cfg: &ExperimentConfig) -> SolverConfig {
    let k = cfg.usize("K");
    SolverConfig {
        k,
        m: grid_order(cfg, k),
        dt: cfg.float("dt"),
        rho: cfg.float("rho"),
        t_final: cfg.float("T"),
        stride: cfg.usize("stride"),
    }
}

fn check_solver(cfg: &ExperimentConfig, geometry: Geometry) -> Outcome<()> {
    let sc = solver_config(cfg);
    sc.validate_for(geometry).map_err(|e| {
        let key = match &e {
            Error::Config(m) if m.contains("grid order") => "M",
            Error::Config(m) if m.contains("time step") => "dt",
            Error::Config(m) if m.contains('ρ') => "rho",
            _ => "K",
        };
        precondition(cfg, key, e)
    })
}

fn check_sign(cfg: &ExperimentConfig) -> Outcome<()> {
    let rho = cfg.float("rho");
    if ![-1.0, 0.0, 1.0].contains(&rho) {
        return Err(precondition(cfg, "rho", format!("ρ = {rho} must be -1, 0 or 1")));
    }
    Ok(())
}

fn check_interval(cfg: &ExperimentConfig) -> Outcome<()> {
    if cfg.float("t_hi") <= cfg.float("t_lo") {
        return Err(precondition(cfg, "t_hi", "time interval is empty (t_hi <= t_lo)"));
    }
    Ok(())
}

fn check_dyadic(cfg: &ExperimentConfig, key: &str, values: &[u64]) -> Outcome<()> {
    for &n in values {
        BandSpec::dyadic(n).map_err(|e| precondition(cfg, key, e))?;
    }
    Ok(())
}

fn validate(cfg: &ExperimentConfig) -> Outcome<()> {
    match cfg.experiment {
        Experiment::Simulate => {
            check_solver(cfg, Geometry::Sphere)?;
            if cfg.text("init") == "mode" && cfg.uint("mode") > cfg.uint("K") {
                return Err(precondition(cfg, "mode", format!("mode {} exceeds K = {}", cfg.uint("mode"), cfg.uint("K"))));
            }
        }
        Experiment::Ball => {
            check_solver(cfg, Geometry::Ball)?;
            if cfg.uint("modes") > cfg.uint("K") {
                return Err(precondition(cfg, "modes", format!("{} modes exceed K = {}", cfg.uint("modes"), cfg.uint("K"))));
            }
        }
        Experiment::Extinction => {
            let n = cfg.uint("N") as f64;
            for &t in cfg.floats("T") {
                extinction_window(t, n).map_err(|e| precondition(cfg, "T", e))?;
            }
        }
        Experiment::Strichartz => {
            check_dyadic(cfg, "N", cfg.uints("N"))?;
            check_interval(cfg)?;
        }
        Experiment::Trilinear => {
            let (n2, n3) = (cfg.uint("N2"), cfg.uint("N3"));
            check_dyadic(cfg, "N1", cfg.uints("N1"))?;
            check_dyadic(cfg, "N2", &[n2])?;
            check_dyadic(cfg, "N3", &[n3])?;
            if n2 < n3 {
                return Err(precondition(cfg, "N2", format!("need N2 >= N3 (N2 = {n2}, N3 = {n3})")));
            }
            if let Some(&n1) = cfg.uints("N1").iter().find(|&&n1| n1 < n2) {
                return Err(precondition(cfg, "N1", format!("need N1 >= N2 (N1 = {n1}, N2 = {n2})")));
            }
            check_interval(cfg)?;
        }
        Experiment::ProjectorCheck => {
            if cfg.uint("k_max") > cfg.uint("truncation") {
                return Err(precondition(cfg, "k_max", "k_max exceeds the field truncation"));
            }
        }
        Experiment::ProfileCompare => {
            check_sign(cfg)?;
            let r = cfg.float("R");
            if r > 0.0 {
                if let Some(&n) = cfg.uints("N").iter().find(|&&n| (n as f64) < 10.0 * r) {
                    return Err(precondition(cfg, "R", format!("need N >= 10R (N = {n}, R = {r})")));
                }
            }
        }
        Experiment::BallVerify => {
            if cfg.uint("M") <= cfg.uint("modes") {
                return Err(precondition(cfg, "M", "grid order must exceed the mode count"));
            }
        }
        Experiment::Weyl | Experiment::Sogge | Experiment::Concentration | Experiment::Hflfi => {}
    }
    Ok(())
}

fn profile(cfg: &ExperimentConfig) -> RadialProfile {
    match cfg.text("profile") {
        "bump" => RadialProfile::bump(cfg.float("radius")),
        "gaussian" => RadialProfile::gaussian(cfg.float("amplitude"), cfg.float("width")),
        _ => RadialProfile::reference(),
    }
}

fn collect<T>(cells: Vec<Result<T>>) -> Result<Vec<T>> {
    cells.into_iter().collect()
}

fn estimate_rows(table: &mut CsvTable, report: &EstimateReport, lead: impl Fn(f64) -> Vec<Cell>) {
    let reference_slope = report.reference_slope.unwrap_or(f64::NAN);
    for row in &report.rows {
        let mut cells = lead(row.param);
        cells.extend([row.measured.into(), row.reference.into(), report.slope.into(), reference_slope.into()]);
        table.push(cells);
    }
}

fn simulate(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let sc = solver_config(cfg);
    let k = sc.k;
    let amp = cfg.float("amplitude");
    let w = cfg.float("width");
    let envelope = |j: usize| amp * (-((j * j) as f64) / (w * w)).exp();
    let u0 = match cfg.text("init") {
        "mode" => ZonalField::mode(cfg.usize("mode"), k)?.scale(Complex64::new(amp, 0.0)),
        "constant" => ZonalField::constant(Complex64::new(amp, 0.0), k),
        "random" => {
            let mut rng = cell_rng(cfg.seed, &[k as u64]);
            ZonalField::from_coeffs((1..=k).map(|j| complex_gaussian(&mut rng) * envelope(j)).collect())
        }
        _ => ZonalField::from_coeffs((1..=k).map(|j| Complex64::new(envelope(j), 0.0)).collect()),
    };
    let traj = solve_sphere(&u0, &sc)?;
    let mut table = if cfg.text("output") == "coeffs" {
        let mut t = CsvTable::new(&["t", "k", "re", "im"]);
        for (&time, snap) in traj.times.iter().zip(&traj.snapshots) {
            for (i, c) in snap.coeffs().iter().enumerate() {
                t.push(vec![time.into(), (i + 1).into(), c.re.into(), c.im.into()]);
            }
        }
        t
    } else {
        let mut t = CsvTable::new(&["t", "mass", "energy", "energy_operator_form"]);
        for (&time, c) in traj.times.iter().zip(&traj.conserved) {
            t.push(vec![time.into(), c.mass.into(), c.energy.into(), c.energy_operator_form.into()]);
        }
        t
    };
    table.notes = traj.warnings;
    Ok(table)
}

fn extinction(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let n = cfg.uint("N") as f64;
    let phi = profile(cfg);
    let order = (16.0 * n * phi.bandwidth().max(1.0)).ceil() as usize;
    let grid = SphereGrid::new(order)?;
    let field = make_profile(&ProfileSpec::shifted(phi, n, cfg.float("t0"))?, &grid)?;
    let q_max = cfg.uint("q_max");
    let mesh = ExtinctionMesh { log_points: cfg.usize("log_points"), resonant_q_max: (q_max > 0).then_some(q_max) };
    let cells = par_map(cfg.floats("T"), |&t_big| -> Result<Vec<Cell>> {
        let (lo, hi) = extinction_window(t_big, n)?;
        let times = extinction_times(t_big, n, mesh)?;
        let value = extinction_scan_field(&field, &times);
        Ok(vec![n.into(), t_big.into(), lo.into(), hi.into(), times.len().into(), value.into()])
    });
    let mut table = CsvTable::new(&["N", "T", "t_lo", "t_hi", "mesh_points", "scan"]);
    collect(cells)?.into_iter().for_each(|row| table.push(row));
    Ok(table)
}

fn weyl(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let ns = cfg.uints("N");
    if cfg.text("family") == "gauss" {
        let mut table = CsvTable::new(&["q", "t", "modulus", "sqrt_q", "abs_error"]);
        for &q in ns {
            let t = TAU / q as f64;
            let modulus = weyl_sum(&WeylSequence::flat(q), t).norm();
            let root = (q as f64).sqrt();
            table.push(vec![q.into(), t.into(), modulus.into(), root.into(), (modulus - root).abs().into()]);
        }
        return Ok(table);
    }
    let flat = cfg.text("family") == "flat";
    let ts = weyl_sample_times(cfg.usize("samples"), cfg.uint("q_max"));
    let reports = collect(par_map(ns, |&n| {
        let c = if flat { WeylSequence::flat(n) } else { WeylSequence::zero(n) };
        verify_weyl_bound(&c, &ts)
    }))?;
    if cfg.text("rows") == "samples" {
        let mut table = CsvTable::new(&["N", "t", "modulus", "a", "q", "beta", "bound", "ratio"]);
        for (&n, report) in ns.iter().zip(&reports) {
            let mut samples = report.samples.clone();
            samples.sort_by(|a, b| a.t.total_cmp(&b.t));
            for s in samples {
                table.push(vec![
                    n.into(),
                    s.t.into(),
                    s.modulus.into(),
                    s.approx.a.into(),
                    s.approx.q.into(),
                    s.approx.beta.into(),
                    s.bound.into(),
                    s.ratio.into(),
                ]);
            }
        }
        return Ok(table);
    }
    let mut table = CsvTable::new(&["N", "samples", "max_ratio", "argmax_t", "modulus", "a", "q", "beta", "bound"]);
    for (&n, report) in ns.iter().zip(&reports) {
        let s = report
            .samples
            .iter()
            .find(|s| s.t == report.argmax_t)
            .or(report.samples.first())
            .ok_or_else(|| Error::Empty("no Weyl sample times".into()))?;
        table.push(vec![
            n.into(),
            report.samples.len().into(),
            report.max_ratio.into(),
            report.argmax_t.into(),
            s.modulus.into(),
            s.approx.a.into(),
            s.approx.q.into(),
            s.approx.beta.into(),
            s.bound.into(),
        ]);
    }
    Ok(table)
}

fn strichartz(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let p = cfg.float("p");
    let interval = (cfg.float("t_lo"), cfg.float("t_hi"));
    let reps = cfg.usize("replicates");
    let parts = collect(par_map(cfg.uints("N"), |&n| strichartz_scan(cfg.seed, &[n], p, interval, reps)))?;
    let report = EstimateReport::new(parts.into_iter().flat_map(|r| r.rows).collect(), Some(1.5 - 5.0 / p));
    let mut table = CsvTable::new(&["N", "measured", "reference", "slope", "reference_slope"]);
    estimate_rows(&mut table, &report, |n| vec![(n as u64).into()]);
    Ok(table)
}

fn sogge(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let qs: Vec<usize> = cfg.uints("q").iter().map(|&q| q as usize).collect();
    let report = sogge_scan(&qs, cfg.float("p"))?;
    let mut table = CsvTable::new(&["q", "measured", "reference", "slope", "reference_slope"]);
    estimate_rows(&mut table, &report, |q| vec![(q as u64).into()]);
    Ok(table)
}

fn concentration(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let qs = cfg.uints("q");
    let cells = par_map(cfg.floats("N"), |&n| -> Result<Vec<Vec<Cell>>> {
        qs.iter()
            .map(|&q| {
                let ratio = concentration_ratio(q as usize, n)?;
                let zonal = (PI * n).powf(-0.5);
                let reference = n.powf(-0.5) + (q as f64).powi(-2);
                Ok(vec![n.into(), q.into(), ratio.into(), zonal.into(), reference.into()])
            })
            .collect()
    });
    let mut table = CsvTable::new(&["N", "q", "ratio", "zonal_reference", "reference"]);
    collect(cells)?.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}

fn trilinear(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let (n2, n3) = (cfg.uint("N2"), cfg.uint("N3"));
    let interval = (cfg.float("t_lo"), cfg.float("t_hi"));
    let reps = cfg.usize("replicates");
    let parts =
        collect(par_map(cfg.uints("N1"), |&n1| trilinear_scan(&[n1], n2, n3, cfg.seed, interval, reps)))?;
    let report = EstimateReport::new(parts.into_iter().flat_map(|r| r.rows).collect(), None);
    let mut table = CsvTable::new(&["N1", "N2", "N3", "measured", "reference", "slope"]);
    for row in &report.rows {
        table.push(vec![
            (row.param as u64).into(),
            n2.into(),
            n3.into(),
            row.measured.into(),
            row.reference.into(),
            report.slope.into(),
        ]);
    }
    Ok(table)
}

fn hflfi(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let qs: Vec<usize> = cfg.uints("q").iter().map(|&q| q as usize).collect();
    let mut table = CsvTable::new(&["N", "q", "entry", "reference", "c_n"]);
    for (n, report, c) in hflfi_scan(&qs, cfg.uints("N"))? {
        for row in &report.rows {
            table.push(vec![n.into(), (row.param as u64).into(), row.measured.into(), row.reference.into(), c.into()]);
        }
    }
    Ok(table)
}

/// Complex Gaussian coefficients for the `index`-th random zonal field.
pub(crate) fn random_zonal_field(seed: u64, truncation: usize, index: u64) -> ZonalField {
    let mut rng = cell_rng(seed, &[truncation as u64, index]);
    ZonalField::from_coeffs((0..truncation).map(|_| complex_gaussian(&mut rng)).collect())
}

fn projector_check(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let k_max = cfg.usize("k_max");
    let truncation = cfg.usize("truncation");
    let oracle = KernelOracle::new(k_max, truncation + 1, cfg.usize("quad_order"))?;
    let indices: Vec<u64> = (0..cfg.uint("fields")).collect();
    let cells = par_map(&indices, |&i| -> Result<Vec<Vec<Cell>>> {
        let f = random_zonal_field(cfg.seed, truncation, i);
        (1..=k_max)
            .map(|k| {
                let quad = oracle.apply(&f, k)?;
                let ck = f.coeff(k);
                let err = (1..=truncation)
                    .map(|j| (quad.coeff(j) - if j == k { ck } else { Complex64::new(0.0, 0.0) }).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                Ok(vec![i.into(), k.into(), ck.norm().into(), err.into(), (err / ck.norm()).into()])
            })
            .collect()
    });
    let mut table = CsvTable::new(&["field", "k", "spectral_norm", "abs_error", "rel_error"]);
    collect(cells)?.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}

fn profile_compare(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let phi = profile(cfg);
    let positive = |key: &str| Some(cfg.float(key)).filter(|&x| x > 0.0);
    let cells = par_map(cfg.uints("N"), |&n| {
        let cc = ComparisonConfig {
            n: n as f64,
            r_cut: positive("R"),
            t0: cfg.float("T0"),
            rho: cfg.float("rho"),
            snapshots: cfg.usize("snapshots"),
            k_factor: positive("k_factor"),
            euclid_radius: positive("euclid_radius"),
            euclid_modes: Some(cfg.usize("euclid_modes")).filter(|&m| m > 0),
        };
        compare_profile_evolution(&phi, &cc)
    });
    let mut table = CsvTable::new(&[
        "N",
        "R",
        "t",
        "discrepancy",
        "linear_discrepancy",
        "sup_discrepancy",
        "linear_sup_discrepancy",
        "v_h1_sup",
    ]);
    for (&n, result) in cfg.uints("N").iter().zip(collect(cells)?) {
        for i in 0..result.times.len() {
            table.push(vec![
                n.into(),
                result.r_cut.into(),
                result.times[i].into(),
                result.discrepancy[i].into(),
                result.linear_discrepancy[i].into(),
                result.sup_discrepancy.into(),
                result.linear_sup_discrepancy.into(),
                result.v_h1_sup.into(),
            ]);
        }
        table.notes.extend(result.warnings.iter().map(|w| format!("N = {n}: {w}")));
    }
    Ok(table)
}

fn ball(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let amp = Complex64::new(cfg.float("amplitude"), 0.0);
    let phi = BallField::from_coeffs(
        BallField::random(cfg.usize("modes"), cfg.seed).coeffs().iter().map(|c| c * amp).collect(),
    );
    let traj = solve_ball_radial(&phi, &solver_config(cfg))?;
    let mut table = CsvTable::new(&["t", "mass", "energy", "energy_operator_form", "sobolev_ratio"]);
    for ((&t, snap), c) in traj.times.iter().zip(&traj.snapshots).zip(&traj.conserved) {
        let ratio = radial_sobolev_ratio(&BallField::from_coeffs(snap.coeffs().to_vec()))?;
        table.push(vec![t.into(), c.mass.into(), c.energy.into(), c.energy_operator_form.into(), ratio.into()]);
    }
    table.notes = traj.warnings;
    Ok(table)
}

fn ball_verify(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let modes = cfg.usize("modes");
    let m = cfg.usize("M");
    let ts = cfg.floats("t");
    let indices: Vec<u64> = (0..cfg.uint("fields")).collect();
    let cells = par_map(&indices, |&i| -> Result<Vec<Vec<Cell>>> {
        let phi = BallField::random(modes, cell_seed(cfg.seed, &[i]));
        ts.iter().map(|&t| Ok(vec![i.into(), t.into(), verify_ball_flow(&phi, t, m)?.into()])).collect()
    });
    let mut table = CsvTable::new(&["field", "t", "discrepancy"]);
    collect(cells)?.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}
