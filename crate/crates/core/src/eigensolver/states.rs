use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::numerov::NumerovProfile;
use super::richardson::richardson_extrapolate;
use super::tridiag::{count_nodes, discretize, eigen_lowest, eigenfunction};
use crate::radial::{RadialProblem, StabilityClass, StabilityKind};
use crate::{Error, Result};

pub const DEFAULT_RUNGS: usize = 3;
/// The marginal channel (c = -1/8) converges roughly like h; one more rung.
pub const MARGINAL_RUNGS: usize = 4;
pub const DEFAULT_NUMEROV_TOLERANCE: f64 = 1e-5;
/// Slow-convergence tolerance for the Numerov cross-check in the marginal channel.
pub const MARGINAL_NUMEROV_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Grid ladder length; `None` picks [`DEFAULT_RUNGS`] or [`MARGINAL_RUNGS`].
    pub rungs: Option<usize>,
    /// Bound on |Numerov matching defect| at each returned energy.
    pub numerov_tolerance: f64,
    pub marginal_numerov_tolerance: f64,
    pub cross_check: bool,
    /// Also locate the Numerov eigenvalue on the finest rung.
    pub dual_method: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rungs: None,
            numerov_tolerance: DEFAULT_NUMEROV_TOLERANCE,
            marginal_numerov_tolerance: MARGINAL_NUMEROV_TOLERANCE,
            cross_check: true,
            dual_method: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    /// 0-based index within the (D, l) channel.
    pub index: usize,
    /// Hartree; Richardson-extrapolated when `extrapolated` is set.
    pub energy: f64,
    pub node_count: usize,
    /// u on the nodes of `grid` (the finest rung), h·Σu² = 1.
    pub wavefunction: Vec<f64>,
    pub grid: GridSpec,
    pub extrapolated: bool,
    pub estimated_order: Option<f64>,
    /// Raw eigenvalue on each rung, coarse to fine.
    pub rung_energies: Vec<f64>,
    pub numerov_defect: Option<f64>,
    pub numerov_energy: Option<f64>,
}

impl BoundState {
    pub fn raw_energy(&self) -> f64 {
        *self.rung_energies.last().expect("at least one rung")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub states: Vec<BoundState>,
    pub requested: usize,
    /// Eigenvalues among the requested ones that sit at or above the
    /// dissociation threshold.
    pub unbound: usize,
    pub ladder: Vec<GridSpec>,
    pub stability: StabilityClass,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// Lowest `n_states` bound states of `problem`, using `grid` as the coarsest rung.
pub fn solve_states(problem: &RadialProblem, grid: &GridSpec, n_states: usize) -> Result<Spectrum> {
    solve_states_with(problem, grid, n_states, &SolveOptions::default())
}

pub fn solve_states_with(
    problem: &RadialProblem,
    grid: &GridSpec,
    n_states: usize,
    options: &SolveOptions,
) -> Result<Spectrum> {
    let stability = problem.classify_stability();
    if stability.kind == StabilityKind::Supercritical {
        return Err(Error::Supercritical {
            dimension: problem.dimension(),
            l: problem.angular_momentum(),
        });
    }
    let marginal = stability.kind == StabilityKind::Marginal;
    let rungs = options.rungs.unwrap_or(if marginal { MARGINAL_RUNGS } else { DEFAULT_RUNGS });
    if rungs == 0 {
        return Err(Error::InvalidLadder("at least one rung".into()));
    }
    let count = n_states.min(grid.interior_points());
    if count == 0 {
        return Err(Error::EigenCountOutOfRange { requested: n_states, size: grid.interior_points() });
    }
    let ladder = grid.ladder(rungs);
    let levels: Vec<Vec<f64>> = ladder
        .par_iter()
        .map(|g| discretize(problem, g).and_then(|op| eigen_lowest(&op, count)))
        .collect::<Result<_>>()?;

    let finest = *ladder.last().expect("non-empty ladder");
    let finest_op = discretize(problem, &finest)?;
    let numerov = if options.cross_check || options.dual_method {
        Some(NumerovProfile::for_problem(problem, &finest)?)
    } else {
        None
    };
    let tolerance = if marginal { options.marginal_numerov_tolerance } else { options.numerov_tolerance };
    let threshold = problem.potential().has_dissociation_threshold();

    let mut states = Vec::with_capacity(count);
    let mut unbound = 0;
    for index in 0..count {
        let rung_energies: Vec<f64> = levels.iter().map(|l| l[index]).collect();
        let (energy, extrapolated, estimated_order) = if rungs >= 3 {
            let pairs: Vec<(f64, f64)> = ladder
                .iter()
                .zip(&rung_energies)
                .map(|(g, e)| (g.spacing(), *e))
                .collect();
            let r = richardson_extrapolate(&pairs)?;
            (r.energy, r.reliable(), r.order)
        } else {
            (*rung_energies.last().unwrap(), false, None)
        };
        let raw = *rung_energies.last().unwrap();
        if threshold && (raw >= 0.0 || energy >= 0.0) {
            unbound += 1;
            continue;
        }
        let wavefunction = eigenfunction(&finest_op, raw)?;
        let node_count = count_nodes(&wavefunction);

        let mut numerov_defect = None;
        let mut numerov_energy = None;
        if let Some(profile) = &numerov {
            if options.cross_check {
                let defect = profile.shoot(energy).matching_defect;
                if !(defect.abs() <= tolerance) {
                    return Err(Error::CrossCheck {
                        index,
                        reason: format!(
                            "|Numerov defect| {:.3e} at E = {energy} exceeds {tolerance:.1e}",
                            defect.abs()
                        ),
                    });
                }
                numerov_defect = Some(defect);
            }
            if options.dual_method {
                numerov_energy = Some(profile.eigenvalue_near(energy, index)?);
            }
        }

        states.push(BoundState {
            index,
            energy,
            node_count,
            wavefunction,
            grid: finest,
            extrapolated,
            estimated_order,
            rung_energies,
            numerov_defect,
            numerov_energy,
        });
    }
    Ok(Spectrum { states, requested: n_states, unbound, ladder, stability })
}
