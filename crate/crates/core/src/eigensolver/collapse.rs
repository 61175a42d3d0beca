//! Grid-refinement test for fall to the center.
//!
//! The wall at r_min is pulled toward the origin, halving per rung, with h
//! kept proportional to r_min. A spectrum with a floor converges; a
//! supercritical one has a ground energy that runs away.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::richardson::richardson_extrapolate;
use super::tridiag::{discretize, eigen_lowest};
use crate::radial::RadialProblem;
use crate::{Error, Result};

pub const MIN_COLLAPSE_RUNGS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollapseClass {
    Stable,
    NoBoundStates,
    Collapse,
}

impl CollapseClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CollapseClass::Stable => "Stable",
            CollapseClass::NoBoundStates => "NoBoundStates",
            CollapseClass::Collapse => "Collapse",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    /// (grid, ground energy) per rung.
    pub ladder: Vec<(GridSpec, f64)>,
    pub classification: CollapseClass,
    /// Richardson estimate over the last three rungs when `Stable`.
    pub extrapolated: Option<f64>,
}

impl CollapseReport {
    pub fn ground_energies(&self) -> Vec<f64> {
        self.ladder.iter().map(|(_, e)| *e).collect()
    }
}

/// Ground energy on a ladder with r_min halving per rung.
///
/// A base grid with its wall at the origin starts the ladder at r_min = h.
/// Accepts supercritical problems.
pub fn collapse_diagnostic(
    problem: &RadialProblem,
    base_grid: &GridSpec,
    rungs: usize,
) -> Result<CollapseReport> {
    if rungs < MIN_COLLAPSE_RUNGS {
        return Err(Error::InvalidLadder(format!(
            "collapse diagnostic needs at least {MIN_COLLAPSE_RUNGS} rungs, got {rungs}"
        )));
    }
    let h0 = base_grid.spacing();
    let r_min0 = if base_grid.wall_at_origin() { h0 } else { base_grid.r_min() };
    let r_max = base_grid.r_max();
    let grids: Vec<GridSpec> = (0..rungs)
        .map(|k| {
            let scale = 0.5_f64.powi(k as i32);
            let r_min = r_min0 * scale;
            let h = h0 * scale;
            let n = (((r_max - r_min) / h).round() as usize).saturating_sub(1);
            GridSpec::new(r_min, r_max, n)
        })
        .collect::<Result<_>>()?;
    let energies: Vec<f64> = grids
        .par_iter()
        .map(|g| discretize(problem, g).and_then(|op| eigen_lowest(&op, 1)).map(|v| v[0]))
        .collect::<Result<_>>()?;

    let classification = classify(&energies);
    let extrapolated = if classification == CollapseClass::Stable {
        let pairs: Vec<(f64, f64)> = energies
            .iter()
            .enumerate()
            .map(|(k, e)| (h0 * 0.5_f64.powi(k as i32), *e))
            .collect();
        Some(richardson_extrapolate(&pairs)?.energy)
    } else {
        None
    };
    Ok(CollapseReport { ladder: grids.into_iter().zip(energies).collect(), classification, extrapolated })
}

fn classify(energies: &[f64]) -> CollapseClass {
    if energies.iter().all(|e| *e >= 0.0) {
        return CollapseClass::NoBoundStates;
    }
    let runaway = energies.iter().all(|e| *e < 0.0)
        && energies.windows(2).all(|w| w[1].abs() >= 2.0 * w[0].abs());
    if runaway {
        CollapseClass::Collapse
    } else {
        CollapseClass::Stable
    }
}
