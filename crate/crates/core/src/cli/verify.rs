//! Verification suite behind `dhydro verify`.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Outcome, RunConfig, EXIT_FAILURE, EXIT_OK};
use crate::eigensolver::{collapse_diagnostic, solve_states, CollapseClass, GridSpec, MIN_COLLAPSE_RUNGS};
use crate::oracles::{analytic_energy_airy_1d, analytic_energy_newtonian};
use crate::potentials::{Convention, Family, PotentialModel};
use crate::radial::{RadialProblem, StabilityKind};
use crate::specfun::sphere_surface_area;
use crate::{Error, Result};

const FLUX_RADII: [f64; 3] = [1e-2, 1.0, 1e2];
const FLUX_TOLERANCE: f64 = 1e-13;
const POISSON_RADII: [f64; 3] = [1.0, 2.0, 5.0];
const POISSON_STEP: f64 = 1e-4;
const POISSON_TOLERANCE: f64 = 1e-5;
const ORACLE_TOLERANCE: f64 = 1e-5;
const MARGINAL_ORACLE_TOLERANCE: f64 = 1e-3;
/// Base grid of the critical-charge ladder: the first supercritical level
/// appears only once r_max/r_min exceeds e^{π/√(-(¼+2c))}.
const CRITICAL_GRID: (f64, f64, usize) = (1e-3, 200.0, 199_998);
const CRITICAL_BRACKET: (f64, f64) = (0.9, 1.1);

pub const DEFAULT_CASES: &[&str] = &[
    "flux-d1",
    "flux-d2",
    "flux-d3",
    "flux-d4",
    "flux-d5",
    "flux-d6",
    "flux-d7",
    "flux-d8",
    "poisson",
    "oracle",
    "stable-d3",
    "collapse-d4",
    "collapse-d5",
    "critical-d4",
];

pub(super) fn cmd_verify(config: &RunConfig) -> Outcome {
    let names: Vec<String> = if config.cases.is_empty() {
        DEFAULT_CASES.iter().map(|s| s.to_string()).collect()
    } else {
        config.cases.clone()
    };
    for name in &names {
        if parse_case(name).is_none() {
            return Outcome::usage(format!("error: unknown verification case `{name}`\n"));
        }
    }
    let results: Vec<Value> = names
        .par_iter()
        .map(|name| {
            let case = parse_case(name).expect("validated");
            match run_case(case, config) {
                Ok(mut v) => {
                    v["case"] = json!(name);
                    v
                }
                Err(e) => json!({ "case": name, "passed": false, "error": e.to_string() }),
            }
        })
        .collect();
    let passed = results.iter().all(|r| r["passed"] == json!(true));
    let doc = json!({ "passed": passed, "cases": results });
    let mut stdout = serde_json::to_string_pretty(&doc).expect("verdict serializes");
    stdout.push('\n');
    Outcome { code: if passed { EXIT_OK } else { EXIT_FAILURE }, stdout, stderr: String::new() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Case {
    Flux(u32),
    Poisson,
    Oracle,
    Collapse(u32),
    Critical,
}

fn parse_case(name: &str) -> Option<Case> {
    let dim = |prefix: &str| name.strip_prefix(prefix).and_then(|d| d.parse::<u32>().ok()).filter(|d| *d >= 1);
    match name {
        "poisson" => Some(Case::Poisson),
        "oracle" => Some(Case::Oracle),
        "critical-d4" => Some(Case::Critical),
        _ => dim("flux-d")
            .map(Case::Flux)
            .or_else(|| dim("collapse-d").or_else(|| dim("stable-d")).map(Case::Collapse)),
    }
}

fn run_case(case: Case, config: &RunConfig) -> Result<Value> {
    match case {
        Case::Flux(d) => flux(d, config),
        Case::Poisson => poisson(config),
        Case::Oracle => oracle(),
        Case::Collapse(d) => collapse(d, config),
        Case::Critical => critical(config),
    }
}

fn flux(d: u32, config: &RunConfig) -> Result<Value> {
    let model = PotentialModel::new(Family::DimensionConsistent, config.convention, d, config.charge, config.r0)?;
    let q = model.source_strength();
    let fluxes = FLUX_RADII.iter().map(|&r| model.enclosed_flux(r)).collect::<Result<Vec<_>>>()?;
    let deviation = fluxes.iter().map(|f| (f - q).abs() / q).fold(0.0, f64::max);
    Ok(json!({
        "passed": deviation <= FLUX_TOLERANCE,
        "source_strength": q,
        "radii": FLUX_RADII,
        "flux": fluxes,
        "max_relative_deviation": deviation,
    }))
}

fn poisson(config: &RunConfig) -> Result<Value> {
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for convention in [Convention::Gaussian4Pi, Convention::SolidAngle] {
        for d in 2..=8 {
            let model = PotentialModel::new(Family::DimensionConsistent, convention, d, config.charge, config.r0)?;
            let residual = model.poisson_residual(&POISSON_RADII, POISSON_STEP)?;
            worst = worst.max(residual);
            rows.push(json!({ "D": d, "convention": convention.as_str(), "residual": residual }));
        }
    }
    Ok(json!({ "passed": worst < POISSON_TOLERANCE, "max_residual": worst, "rows": rows }))
}

fn oracle() -> Result<Value> {
    let mut jobs = Vec::new();
    for d in [2, 3, 5] {
        for l in [0, 1] {
            jobs.push((d, l));
        }
    }
    let newtonian: Vec<Vec<Value>> = jobs
        .par_iter()
        .map(|&(d, l)| -> Result<Vec<Value>> {
            let problem = RadialProblem::with_potential(PotentialModel::newtonian(d, 1.0)?, l)?;
            let marginal = problem.classify_stability().kind == StabilityKind::Marginal;
            let tolerance = if marginal { MARGINAL_ORACLE_TOLERANCE } else { ORACLE_TOLERANCE };
            let spectrum = solve_states(&problem, &GridSpec::default_for(&problem, 2)?, 2)?;
            (0..2)
                .map(|n_r| {
                    let exact = analytic_energy_newtonian(i64::from(d), i64::from(l), n_r as i64, 1.0)?;
                    let state = spectrum
                        .states
                        .get(n_r)
                        .ok_or_else(|| Error::Config(format!("D = {d}, l = {l}: state {n_r} missing")))?;
                    let rel = ((state.energy - exact) / exact).abs();
                    Ok(json!({
                        "family": "newtonian", "D": d, "l": l, "n_r": n_r,
                        "energy": state.energy, "exact": exact,
                        "relative_error": rel, "passed": rel < tolerance,
                    }))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<Value> = newtonian.into_iter().flatten().collect();
    for convention in [Convention::SolidAngle, Convention::Gaussian4Pi] {
        let problem = RadialProblem::with_potential(PotentialModel::consistent(1, 1.0, convention)?, 0)?;
        let spectrum = solve_states(&problem, &GridSpec::default_for(&problem, 3)?, 3)?;
        for (n, state) in spectrum.states.iter().enumerate() {
            let exact = analytic_energy_airy_1d(convention, 1.0, n + 1)?;
            let rel = ((state.energy - exact) / exact).abs();
            rows.push(json!({
                "family": "consistent", "convention": convention.as_str(), "D": 1, "l": 0, "n_r": n,
                "energy": state.energy, "exact": exact,
                "relative_error": rel, "passed": rel < ORACLE_TOLERANCE,
            }));
        }
        if spectrum.states.len() != 3 {
            rows.push(json!({ "family": "consistent", "D": 1, "passed": false, "error": "missing levels" }));
        }
    }
    let passed = rows.iter().all(|r| r["passed"] == json!(true));
    Ok(json!({ "passed": passed, "rows": rows }))
}

/// Expected ladder outcome from the small-r classification.
fn expected_class(problem: &RadialProblem) -> CollapseClass {
    let stability = problem.classify_stability();
    if stability.kind == StabilityKind::Supercritical {
        CollapseClass::Collapse
    } else if stability.no_intrinsic_bound_states {
        CollapseClass::NoBoundStates
    } else {
        CollapseClass::Stable
    }
}

fn collapse(d: u32, config: &RunConfig) -> Result<Value> {
    let l = config.ls.first().copied().unwrap_or(0);
    let model = PotentialModel::new(Family::DimensionConsistent, config.convention, d, config.charge, config.r0)?;
    let problem = RadialProblem::new(d, l, model)?;
    let rungs = config.rungs.unwrap_or(MIN_COLLAPSE_RUNGS).max(MIN_COLLAPSE_RUNGS);
    let report = collapse_diagnostic(&problem, &GridSpec::default_for(&problem, 1)?, rungs)?;
    let expected = expected_class(&problem);
    Ok(json!({
        "passed": report.classification == expected,
        "D": d, "l": l, "Z": config.charge, "convention": config.convention.as_str(),
        "classification": report.classification.as_str(),
        "expected": expected.as_str(),
        "ground_energies": report.ground_energies(),
        "r_min": report.ladder.iter().map(|(g, _)| g.r_min()).collect::<Vec<_>>(),
        "extrapolated": report.extrapolated,
    }))
}

/// Brackets the charge at which consistent D = 4, l = 0 turns supercritical.
fn critical(config: &RunConfig) -> Result<Value> {
    let d = 4;
    let area = sphere_surface_area(i64::from(d))?;
    let probe = PotentialModel::consistent(d, 1.0, config.convention)?;
    // c = 3/8 - Q/(2 S_3) reaches -1/8 at Q = S_3
    let analytic = area / probe.source_strength();
    let (lo, hi) = CRITICAL_BRACKET;
    let (r_min, r_max, n) = CRITICAL_GRID;
    let grid = GridSpec::new(r_min, r_max, n)?;
    let outcomes = [lo * analytic, hi * analytic]
        .par_iter()
        .map(|&z| {
            let problem = RadialProblem::new(d, 0, PotentialModel::consistent(d, z, config.convention)?)?;
            collapse_diagnostic(&problem, &grid, MIN_COLLAPSE_RUNGS)
        })
        .collect::<Result<Vec<_>>>()?;
    let (below, above) = (&outcomes[0], &outcomes[1]);
    let passed = below.classification == CollapseClass::NoBoundStates
        && above.classification == CollapseClass::Collapse;
    Ok(json!({
        "passed": passed,
        "convention": config.convention.as_str(),
        "analytic_critical_charge": analytic,
        "bracket": [lo * analytic, hi * analytic],
        "below": { "classification": below.classification.as_str(), "ground_energies": below.ground_energies() },
        "above": { "classification": above.classification.as_str(), "ground_energies": above.ground_energies() },
    }))
}
