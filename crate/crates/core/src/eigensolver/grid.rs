use serde::{Deserialize, Serialize};

use crate::radial::RadialProblem;
use crate::{Error, Result};

pub const DEFAULT_INTERIOR_POINTS: usize = 20_000;

/// Minimum V(r_max) - E_top for confining boxes, in Hartree.
const CONFINING_ENERGY_MARGIN: f64 = 5.0;
/// Minimum WKB exponent ∫√(2(U - E_top)) dr between the outer turning point
/// and the wall.
const CONFINING_BARRIER_INTEGRAL: f64 = 20.0;
const ESTIMATE_POINTS: usize = 2_000;

/// Uniform mesh with Dirichlet walls at `r_min` and `r_max`; nodes
/// `r_i = r_min + i·h`, `i = 1..=n`, `h = (r_max - r_min)/(n + 1)`.
///
/// `r_min = 0` puts the wall at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    r_min: f64,
    r_max: f64,
    interior_points: usize,
}

impl GridSpec {
    pub fn new(r_min: f64, r_max: f64, interior_points: usize) -> Result<Self> {
        if !(r_min >= 0.0 && r_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_min must be >= 0, got {r_min}")));
        }
        if !(r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("need r_min < r_max, got {r_min} >= {r_max}")));
        }
        if interior_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 interior points, got {interior_points}"
            )));
        }
        Ok(Self { r_min, r_max, interior_points })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn interior_points(&self) -> usize {
        self.interior_points
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.interior_points + 1) as f64
    }

    /// r_i for i in 1..=n.
    pub fn node(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..=self.interior_points).map(move |i| self.r_min + i as f64 * h)
    }

    pub fn wall_at_origin(&self) -> bool {
        self.r_min == 0.0
    }

    /// Same walls, half the spacing.
    pub fn refined(&self) -> Self {
        Self { interior_points: 2 * (self.interior_points + 1) - 1, ..*self }
    }

    pub fn with_interior_points(&self, interior_points: usize) -> Result<Self> {
        Self::new(self.r_min, self.r_max, interior_points)
    }

    /// `rungs` grids, each with half the spacing of the previous one.
    pub fn ladder(&self, rungs: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(rungs);
        let mut g = *self;
        for _ in 0..rungs {
            out.push(g);
            g = g.refined();
        }
        out
    }

    /// Default mesh for the lowest `n_states` levels of `problem`.
    ///
    /// Decaying potentials: `r_max = 15 (n_states + l + D/2)² / Z`.
    /// Confining potentials: `r_max` doubles from 1 until V(r_max) is at least
    /// 5 Hartree above the highest requested level and the WKB barrier
    /// between that level's turning point and the wall is at least 20.
    pub fn default_for(problem: &RadialProblem, n_states: usize) -> Result<Self> {
        Self::default_with_points(problem, n_states, DEFAULT_INTERIOR_POINTS)
    }

    pub fn default_with_points(
        problem: &RadialProblem,
        n_states: usize,
        interior_points: usize,
    ) -> Result<Self> {
        let r_max = default_r_max(problem, n_states)?;
        Self::new(0.0, r_max, interior_points)
    }
}

pub fn default_r_max(problem: &RadialProblem, n_states: usize) -> Result<f64> {
    let n_states = n_states.max(1);
    let potential = problem.potential();
    if potential.has_dissociation_threshold() {
        let scale = n_states as f64
            + f64::from(problem.angular_momentum())
            + f64::from(problem.dimension()) / 2.0;
        return Ok(15.0 * scale * scale / potential.charge());
    }
    let mut r_max: f64 = 1.0;
    for _ in 0..64 {
        let grid = GridSpec::new(0.0, r_max, ESTIMATE_POINTS)?;
        let op = super::discretize(problem, &grid)?;
        let count = n_states.min(grid.interior_points());
        let levels = super::eigen_lowest(&op, count)?;
        let top = levels[count - 1];
        if potential.potential_energy(r_max)? - top >= CONFINING_ENERGY_MARGIN
            && barrier_integral(problem, top, r_max) >= CONFINING_BARRIER_INTEGRAL
        {
            return Ok(r_max);
        }
        r_max *= 2.0;
    }
    Err(Error::InvalidGrid("confining box search did not terminate".into()))
}

/// ∫ √(2 max(U - E, 0)) dr from the outermost classically allowed point to `r_max`.
fn barrier_integral(problem: &RadialProblem, energy: f64, r_max: f64) -> f64 {
    const SAMPLES: usize = 4_000;
    let dr = r_max / SAMPLES as f64;
    let mut turning = 0.0;
    for i in (1..=SAMPLES).rev() {
        let r = i as f64 * dr;
        if problem.effective_potential_unchecked(r) <= energy {
            turning = r;
            break;
        }
    }
    let span = r_max - turning;
    if span <= 0.0 {
        return 0.0;
    }
    let step = span / SAMPLES as f64;
    (0..SAMPLES)
        .map(|i| {
            let r = turning + (i as f64 + 0.5) * step;
            (2.0 * (problem.effective_potential_unchecked(r) - energy)).max(0.0).sqrt() * step
        })
        .sum()
}
