//! Classical effective-potential minima and the large-D scan.
//!
//! At fixed quantum numbers the ground energy is compared with the minimum
//! of U_eff = K/r² + V. For the newtonian family at l = 0 the ratio is
//! (D-3)/(D-1) and tends to 1; for the dimension-consistent family the
//! potential overwhelms the centrifugal barrier from D = 4 on and there is no
//! minimum to approach.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{collapse_diagnostic, solve_states, CollapseClass, GridSpec, MIN_COLLAPSE_RUNGS};
use crate::potentials::{Convention, Family, PotentialModel};
use crate::radial::{RadialProblem, StabilityKind};
use crate::{Error, Result};

const LOG_BRACKET: (f64, f64) = (1e-6, 1e6);
const SAMPLES_PER_DECADE: usize = 20;
const GOLDEN_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalPoint {
    pub r_star: f64,
    pub u_min: f64,
    /// √U_eff''(r_star).
    pub omega: f64,
    pub exists: bool,
}

impl ClassicalPoint {
    fn none() -> Self {
        Self { r_star: f64::NAN, u_min: f64::NAN, omega: f64::NAN, exists: false }
    }

    /// u_min + ω/2.
    pub fn harmonic_estimate(&self) -> f64 {
        self.u_min + 0.5 * self.omega
    }
}

/// Minimum of U_eff for `problem`.
pub fn classical_minimum(problem: &RadialProblem) -> ClassicalPoint {
    let k = problem.centrifugal();
    let z = problem.potential().charge();
    if problem.potential().family() == Family::Newtonian {
        if k <= 0.0 {
            return ClassicalPoint::none();
        }
        return ClassicalPoint {
            r_star: 2.0 * k / z,
            u_min: -z * z / (4.0 * k),
            omega: z * z / (2.0 * std::f64::consts::SQRT_2 * k.powf(1.5)),
            exists: true,
        };
    }
    numeric_minimum(problem)
}

fn numeric_minimum(problem: &RadialProblem) -> ClassicalPoint {
    let u = |r: f64| problem.effective_potential_unchecked(r);
    let (lo, hi) = LOG_BRACKET;
    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let samples = ((log_hi - log_lo) / std::f64::consts::LN_10).round() as usize * SAMPLES_PER_DECADE;
    let at = |i: usize| (log_lo + (log_hi - log_lo) * i as f64 / samples as f64).exp();

    // endpoint slopes: a minimum needs U' < 0 at the left end and U' > 0 at the right
    if !(problem.effective_potential_slope(lo) < 0.0 && problem.effective_potential_slope(hi) > 0.0) {
        return ClassicalPoint::none();
    }
    let values: Vec<f64> = (0..=samples).map(|i| u(at(i))).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if best == 0 || best == samples {
        return ClassicalPoint::none();
    }

    // golden section in ln r
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (at(best - 1).ln(), at(best + 1).ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (u(c.exp()), u(d.exp()));
    while (b - a) > GOLDEN_RELATIVE_TOLERANCE {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = u(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = u(d.exp());
        }
    }
    let mut r = (0.5 * (a + b)).exp();
    // Newton on U' = 0
    for _ in 0..8 {
        let curvature = problem.effective_potential_curvature(r);
        if curvature <= 0.0 {
            break;
        }
        let step = problem.effective_potential_slope(r) / curvature;
        if !step.is_finite() {
            break;
        }
        r -= step;
        if step.abs() <= 1e-16 * r {
            break;
        }
    }
    let curvature = problem.effective_potential_curvature(r);
    if !(curvature > 0.0 && r > 0.0) {
        return ClassicalPoint::none();
    }
    ClassicalPoint { r_star: r, u_min: u(r), omega: curvature.sqrt(), exists: true }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    Stable,
    NoBoundStates,
    Collapse,
    Failed,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Stable => "Stable",
            RowStatus::NoBoundStates => "NoBoundStates",
            RowStatus::Collapse => "Collapse",
            RowStatus::Failed => "Failed",
        }
    }
}

impl From<CollapseClass> for RowStatus {
    fn from(c: CollapseClass) -> Self {
        match c {
            CollapseClass::Stable => RowStatus::Stable,
            CollapseClass::NoBoundStates => RowStatus::NoBoundStates,
            CollapseClass::Collapse => RowStatus::Collapse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeDRow {
    pub dimension: u32,
    pub classification: RowStatus,
    pub numeric_ground: Option<f64>,
    pub classical_minimum: Option<f64>,
    pub harmonic_estimate: Option<f64>,
    pub ratio: Option<f64>,
    /// (2l + D - 3)/(2l + D - 1) for the newtonian family.
    pub predicted_ratio: Option<f64>,
    pub message: Option<String>,
}

/// Ground state vs classical minimum for each dimension in `dims`.
pub fn classical_limit_scan(
    family: Family,
    convention: Convention,
    charge: f64,
    l: u32,
    dims: &[u32],
) -> Result<Vec<LargeDRow>> {
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("dimensions must be strictly ascending".into()));
    }
    if family == Family::Newtonian && l == 0 {
        if let Some(&d) = dims.iter().find(|&&d| d < 4) {
            return Err(Error::Config(format!(
                "newtonian l = 0 has no classical minimum for D = {d}; use D >= 4"
            )));
        }
    }
    let models = dims
        .iter()
        .map(|&d| {
            let model = PotentialModel::new(family, convention, d, charge, 1.0)?;
            RadialProblem::new(d, l, model)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(models.par_iter().map(scan_row).collect())
}

fn scan_row(problem: &RadialProblem) -> LargeDRow {
    let dimension = problem.dimension();
    let mut row = LargeDRow {
        dimension,
        classification: RowStatus::Failed,
        numeric_ground: None,
        classical_minimum: None,
        harmonic_estimate: None,
        ratio: None,
        predicted_ratio: None,
        message: None,
    };
    if problem.potential().family() == Family::Newtonian {
        let twice_l = 2.0 * f64::from(problem.angular_momentum()) + f64::from(dimension);
        row.predicted_ratio = Some((twice_l - 3.0) / (twice_l - 1.0));
    }
    let stability = problem.classify_stability();
    let outcome = if stability.kind == StabilityKind::Supercritical || stability.no_intrinsic_bound_states {
        GridSpec::default_for(problem, 1)
            .and_then(|g| collapse_diagnostic(problem, &g, MIN_COLLAPSE_RUNGS))
            .map(|report| {
                row.classification = report.classification.into();
            })
    } else {
        GridSpec::default_for(problem, 1)
            .and_then(|g| solve_states(problem, &g, 1))
            .map(|spectrum| match spectrum.states.first() {
                Some(state) => {
                    row.classification = RowStatus::Stable;
                    row.numeric_ground = Some(state.energy);
                }
                None => row.classification = RowStatus::NoBoundStates,
            })
    };
    if let Err(e) = outcome {
        row.classification = RowStatus::Failed;
        row.message = Some(e.to_string());
        return row;
    }
    let point = classical_minimum(problem);
    if point.exists {
        row.classical_minimum = Some(point.u_min);
        row.harmonic_estimate = Some(point.harmonic_estimate());
        if let Some(e) = row.numeric_ground {
            row.ratio = Some(e / point.u_min);
        }
    }
    row
}
