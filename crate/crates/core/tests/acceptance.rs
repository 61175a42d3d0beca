//! Acceptance criteria 1-8. Each criterion prints one PASS/FAIL line to
//! stderr (uncaptured) and the test fails if any criterion fails.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use dhydro::eigensolver::{count_nodes, solve_states_with, MIN_COLLAPSE_RUNGS};
use dhydro::large_d::RowStatus;
use dhydro::*;
use rayon::prelude::*;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

fn report(number: usize, title: &str, verdict: &Verdict) {
    let line = format!(
        "acceptance {number} [{}] {title}: {}\n",
        if verdict.passed { "PASS" } else { "FAIL" },
        verdict.detail
    );
    let mut err = std::io::stderr().lock();
    err.write_all(line.as_bytes()).unwrap();
    err.flush().unwrap();
}

fn run(number: usize, title: &str, check: impl FnOnce() -> Verdict) -> bool {
    let verdict = check();
    report(number, title, &verdict);
    verdict.passed
}

fn log_problem(l: u32, r0: f64) -> RadialProblem {
    let model = PotentialModel::consistent(2, 1.0, Convention::Gaussian4Pi).unwrap().with_cutoff(r0).unwrap();
    RadialProblem::with_potential(model, l).unwrap()
}

fn log_grid(l: u32) -> GridSpec {
    GridSpec::default_for(&log_problem(l, 1.0), 3).unwrap()
}

fn newtonian_matrix() -> Verdict {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for d in [2u32, 3, 4, 5, 8, 12] {
        for l in [0u32, 1, 2] {
            for z in [1.0, 2.0] {
                jobs.push((d, l, z));
            }
        }
    }
    let results: Vec<(f64, bool, String)> = jobs
        .par_iter()
        .map(|&(d, l, z)| {
            let problem = RadialProblem::with_potential(PotentialModel::newtonian(d, z).unwrap(), l).unwrap();
            let marginal = problem.classify_stability().kind == StabilityKind::Marginal;
            let tolerance = if marginal { 1e-3 } else { 1e-5 };
            let spectrum = solve_states(&problem, &GridSpec::default_for(&problem, 3).unwrap(), 3).unwrap();
            let mut worst: f64 = 0.0;
            let mut ok = spectrum.states.len() == 3;
            for (n_r, state) in spectrum.states.iter().enumerate() {
                let exact = analytic_energy_newtonian(d.into(), l.into(), n_r as i64, z).unwrap();
                let rel = ((state.energy - exact) / exact).abs();
                worst = worst.max(rel / tolerance);
                ok &= rel < tolerance;
            }
            (worst, ok, format!("D={d} l={l} Z={z}"))
        })
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let failures: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.2.as_str()).collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    Verdict::new(
        failures.is_empty() && elapsed < 60.0,
        format!(
            "{} channels x 3 levels, worst error/tolerance {worst:.3e}, failures {failures:?}, {elapsed:.1} s",
            results.len()
        ),
    )
}

fn hydrogen_ground() -> Verdict {
    let start = Instant::now();
    let problem = RadialProblem::with_potential(PotentialModel::newtonian(3, 1.0).unwrap(), 0).unwrap();
    let spectrum = solve_states(&problem, &GridSpec::default_for(&problem, 1).unwrap(), 1).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let state = &spectrum.states[0];
    let order = state.estimated_order.unwrap_or(f64::NAN);
    let error = (state.energy + 0.5).abs();
    Verdict::new(
        spectrum.ladder.len() == 3
            && state.extrapolated
            && error < 1e-6
            && order > 1.8
            && order < 2.2
            && elapsed < 5.0,
        format!("E = {:.12}, |E + 0.5| = {error:.2e}, order {order:.4}, {elapsed:.2} s", state.energy),
    )
}

fn airy_spectrum() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for convention in [Convention::SolidAngle, Convention::Gaussian4Pi] {
        let problem = RadialProblem::with_potential(PotentialModel::consistent(1, 1.0, convention).unwrap(), 0).unwrap();
        let spectrum = solve_states(&problem, &GridSpec::default_for(&problem, 3).unwrap(), 3).unwrap();
        ok &= spectrum.states.len() == 3;
        for (n, state) in spectrum.states.iter().enumerate() {
            let exact = analytic_energy_airy_1d(convention, 1.0, n + 1).unwrap();
            let rel = ((state.energy - exact) / exact).abs();
            worst = worst.max(rel);
            ok &= rel < 1e-5;
        }
    }
    Verdict::new(ok, format!("2 conventions x 3 levels, worst relative error {worst:.2e}"))
}

/// Extrapolated log-potential energies (Gaussian4Pi, Z = 1, r0 = 1) for
/// l = 0, 1 on the default three-state grids. Numerov shooting agrees to
/// 2e-8 (l = 0) and 1e-10 (l = 1); an independent cell-centred finite-volume
/// solver agrees to 1e-6.
const FROZEN_LOG_LEVELS: [[f64; 3]; 2] = [
    [-0.333276397351, 1.936208505975, 2.968070495114],
    [1.386078034131, 2.632655200413, 3.402382945618],
];

fn log_potential() -> Verdict {
    let r0_new = 2.5;
    let expected_shift = -2.0 * (r0_new / 1.0f64).ln();
    let dual = SolveOptions { dual_method: true, ..Default::default() };
    let mut shift_err: f64 = 0.0;
    let mut vector_err: f64 = 0.0;
    let mut virial_err: f64 = 0.0;
    let mut dual_err: f64 = 0.0;
    let mut frozen_err: f64 = 0.0;
    let mut complete = true;
    for l in [0u32, 1, 2] {
        let grid = log_grid(l);
        let base = solve_states_with(&log_problem(l, 1.0), &grid, 3, &dual).unwrap();
        let moved = solve_states(&log_problem(l, r0_new), &grid, 3).unwrap();
        complete &= base.states.len() == 3 && moved.states.len() == 3;
        for (a, b) in base.states.iter().zip(&moved.states) {
            shift_err = shift_err.max((b.energy - a.energy - expected_shift).abs());
            let dv = a.wavefunction.iter().zip(&b.wavefunction).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            vector_err = vector_err.max(dv);
            let virial = virial_report(a, &log_problem(l, 1.0)).unwrap();
            virial_err = virial_err.max((virial.kinetic - 1.0).abs());
            if l > 0 {
                dual_err = dual_err.max((a.numerov_energy.unwrap() - a.energy).abs());
            }
            if let Some(frozen) = FROZEN_LOG_LEVELS.get(l as usize) {
                frozen_err = frozen_err.max((a.energy - frozen[a.index]).abs());
            }
        }
    }
    let a = shift_err <= 1e-10 && vector_err <= 1e-10;
    let b = virial_err <= 5e-3;
    let c = dual_err <= 1e-8;
    let d = frozen_err <= 1e-8;
    Verdict::new(
        complete && a && b && c && d,
        format!(
            "(a) shift {shift_err:.2e} vector {vector_err:.2e}; (b) |<T> - Z| {virial_err:.2e}; \
             (c) Sturm vs Numerov {dual_err:.2e} (l = 1, 2); (d) frozen {frozen_err:.2e}"
        ),
    )
}

fn large_d_limit() -> Verdict {
    let dims = [6u32, 10, 20, 50];
    let rows = classical_limit_scan(Family::Newtonian, Convention::Gaussian4Pi, 1.0, 0, &dims).unwrap();
    let mut ok = rows.len() == dims.len();
    let mut worst: f64 = 0.0;
    let mut previous = f64::INFINITY;
    for row in &rows {
        let d = f64::from(row.dimension);
        let (Some(e), Some(u), Some(harmonic), Some(ratio), Some(predicted)) =
            (row.numeric_ground, row.classical_minimum, row.harmonic_estimate, row.ratio, row.predicted_ratio)
        else {
            ok = false;
            continue;
        };
        worst = worst.max((ratio - predicted).abs());
        ok &= row.classification == RowStatus::Stable && (ratio - predicted).abs() < 1e-3;
        let gap = (ratio - 1.0).abs();
        ok &= gap < previous && gap < 3.0 / d;
        previous = gap;
        if row.dimension >= 10 {
            ok &= (harmonic - e).abs() < (u - e).abs();
        }
    }
    Verdict::new(ok, format!("D = {dims:?}, worst |ratio - (D-3)/(D-1)| {worst:.2e}"))
}

fn consistent_instability() -> Verdict {
    let convention = Convention::SolidAngle;
    let problem = |d: u32, z: f64| RadialProblem::new(d, 0, PotentialModel::consistent(d, z, convention).unwrap()).unwrap();
    let ladder = |p: &RadialProblem, grid: &GridSpec| collapse_diagnostic(p, grid, MIN_COLLAPSE_RUNGS).unwrap();

    let d5 = problem(5, 1.0);
    let d5_report = ladder(&d5, &GridSpec::default_for(&d5, 1).unwrap());
    let e = d5_report.ground_energies();
    let doubling = e.windows(2).all(|w| w[1].abs() >= 2.0 * w[0].abs());
    let d5_ok = d5_report.classification == CollapseClass::Collapse
        && doubling
        && d5.classify_stability().kind == StabilityKind::Supercritical;

    let d4 = problem(4, 0.5);
    let d4_report = ladder(&d4, &GridSpec::default_for(&d4, 1).unwrap());
    let d4_ok = d4_report.classification == CollapseClass::NoBoundStates
        && d4.classify_stability().kind == StabilityKind::Regular;

    let critical = GridSpec::new(1e-3, 200.0, 199_998).unwrap();
    let below = ladder(&problem(4, 0.9), &critical).classification;
    let above = ladder(&problem(4, 1.1), &critical).classification;
    let bracket_ok = below == CollapseClass::NoBoundStates
        && above == CollapseClass::Collapse
        && problem(4, 0.9).classify_stability().kind != StabilityKind::Supercritical
        && problem(4, 1.1).classify_stability().kind == StabilityKind::Supercritical;

    Verdict::new(
        d5_ok && d4_ok && bracket_ok,
        format!(
            "D=5 {} ladder {e:?}; D=4 Z=0.5 {}; D=4 Z=0.9 {} / Z=1.1 {}",
            d5_report.classification.as_str(),
            d4_report.classification.as_str(),
            below.as_str(),
            above.as_str()
        ),
    )
}

fn poisson_and_flux() -> Verdict {
    let mut residual: f64 = 0.0;
    let mut flux: f64 = 0.0;
    for convention in [Convention::Gaussian4Pi, Convention::SolidAngle] {
        for d in 1..=8u32 {
            let model = PotentialModel::consistent(d, 1.0, convention).unwrap();
            if d >= 2 {
                residual = residual.max(model.poisson_residual(&[1.0, 2.0, 5.0], 1e-4).unwrap());
            }
            let q = model.source_strength();
            for r in [1e-2, 1.0, 1e2] {
                flux = flux.max((model.enclosed_flux(r).unwrap() - q).abs() / q);
            }
        }
    }
    Verdict::new(
        residual < 1e-5 && flux <= 1e-13,
        format!("max Poisson residual {residual:.2e}, max relative flux deviation {flux:.2e}"),
    )
}

fn cli_output(workers: &str, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_dhydro"))
        .args(args)
        .env("DHYDRO_WORKERS", workers)
        .output()
        .expect("dhydro runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn structural_invariants() -> Verdict {
    let channels = [
        RadialProblem::with_potential(PotentialModel::newtonian(3, 1.0).unwrap(), 0).unwrap(),
        RadialProblem::with_potential(PotentialModel::newtonian(5, 1.0).unwrap(), 1).unwrap(),
        log_problem(0, 1.0),
        RadialProblem::with_potential(PotentialModel::consistent(1, 1.0, Convention::SolidAngle).unwrap(), 0).unwrap(),
    ];
    let mut nodes_ok = true;
    let mut norm_err: f64 = 0.0;
    for problem in &channels {
        let spectrum = solve_states(problem, &GridSpec::default_for(problem, 6).unwrap(), 6).unwrap();
        nodes_ok &= spectrum.states.len() == 6;
        for state in &spectrum.states {
            nodes_ok &= state.node_count == state.index && count_nodes(&state.wavefunction) == state.index;
            let h = state.grid.spacing();
            let norm = h * state.wavefunction.iter().map(|u| u * u).sum::<f64>();
            norm_err = norm_err.max((norm - 1.0).abs());
        }
    }

    // (D, l) and (D + 2, l - 1) share K and hence every discrete quantity
    let mut degeneracy_ok = true;
    for (d, l) in [(3u32, 1u32), (2, 2), (5, 3)] {
        let a = RadialProblem::with_potential(PotentialModel::newtonian(d, 1.0).unwrap(), l).unwrap();
        let b = RadialProblem::with_potential(PotentialModel::newtonian(d + 2, 1.0).unwrap(), l - 1).unwrap();
        let grid = GridSpec::default_for(&a, 2).unwrap();
        degeneracy_ok &= grid == GridSpec::default_for(&b, 2).unwrap();
        degeneracy_ok &= centrifugal_coefficient(l.into(), d.into()).unwrap()
            == centrifugal_coefficient(i64::from(l) - 1, i64::from(d) + 2).unwrap();
        degeneracy_ok &= solve_states(&a, &grid, 2).unwrap().energies() == solve_states(&b, &grid, 2).unwrap().energies();
        for n_r in 0..3 {
            degeneracy_ok &= analytic_energy_newtonian(d.into(), l.into(), n_r, 1.0).unwrap()
                == analytic_energy_newtonian(i64::from(d) + 2, i64::from(l) - 1, n_r, 1.0).unwrap();
        }
    }

    let commands: [&[&str]; 2] = [
        &["spectrum", "--family", "newtonian", "--dims", "2,3,5", "--l", "0,1", "--states", "2"],
        &["scan-d", "--family", "newtonian", "--dims", "4,6,10", "--format", "json"],
    ];
    let mut cli_ok = true;
    for args in commands {
        let reference = cli_output("1", args);
        for workers in ["1", "2", "4"] {
            cli_ok &= cli_output(workers, args) == reference;
        }
    }

    Verdict::new(
        nodes_ok && norm_err <= 1e-12 && degeneracy_ok && cli_ok,
        format!(
            "nodes k <= 5 {}, normalization {norm_err:.2e}, degeneracy {}, CLI byte-identical across workers {}",
            if nodes_ok { "ok" } else { "broken" },
            if degeneracy_ok { "exact" } else { "broken" },
            if cli_ok { "yes" } else { "no" }
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let results = [
        run(1, "Newtonian oracle matrix", newtonian_matrix),
        run(2, "3D ground state with Richardson", hydrogen_ground),
        run(3, "1D consistent spectrum vs Airy", airy_spectrum),
        run(4, "2D log-potential properties", log_potential),
        run(5, "large-D classical limit", large_d_limit),
        run(6, "consistent-family instability", consistent_instability),
        run(7, "Poisson and Gauss checks", poisson_and_flux),
        run(8, "structural invariants", structural_invariants),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
