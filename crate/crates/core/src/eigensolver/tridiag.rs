//! Three-point discretization and symmetric tridiagonal eigen-machinery.

use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::radial::RadialProblem;
use crate::{Error, Result};

const BISECTION_RELATIVE_WIDTH: f64 = 1e-12;
/// Smallest |q_i/a| kept in the Sturm recurrence; smaller pivots are
/// replaced by -PIVOT_MIN.
const PIVOT_MIN: f64 = 1e-290;
/// Solves before the residual test; the second one removes what the
/// all-ones seed leaves in other eigendirections.
const INVERSE_ITERATION_MIN: usize = 2;
const INVERSE_ITERATION_MAX: usize = 50;
const INVERSE_ITERATION_TOLERANCE: f64 = 1e-8;
/// Relative amplitude below which eigenvector entries are roundoff, not signal.
pub const NODE_NOISE_FLOOR: f64 = 1e-9;

/// Discrete `-½ d²/dr² + U_eff` on a [`GridSpec`] with Dirichlet walls:
/// diagonal `1/h² + U_i`, off-diagonal `-1/(2h²)`.
///
/// The potential values are kept separately from the kinetic part so Sturm
/// counts can work in variables scaled by 1/(2h²), which avoids losing the
/// O(1) eigenvalue in the rounding of the O(1/h²) diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    potential: Vec<f64>,
    diagonal: Vec<f64>,
    off_diagonal: f64,
    grid: GridSpec,
}

impl TridiagonalOperator {
    pub fn from_potential_values(grid: GridSpec, potential: &[f64]) -> Result<Self> {
        let n = grid.interior_points();
        if potential.len() != n {
            return Err(Error::InvalidGrid(format!(
                "{} potential values for {n} nodes",
                potential.len()
            )));
        }
        if let Some((i, u)) = potential.iter().enumerate().find(|(_, u)| !u.is_finite()) {
            return Err(Error::NonFinitePotential { r: grid.node(i + 1), value: *u });
        }
        let h = grid.spacing();
        let kinetic = 1.0 / (h * h);
        Ok(Self {
            potential: potential.to_vec(),
            diagonal: potential.iter().map(|u| kinetic + u).collect(),
            off_diagonal: -0.5 * kinetic,
            grid,
        })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// U_i on the interior nodes.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// The constant off-diagonal entry -1/(2h²).
    pub fn off_diagonal(&self) -> f64 {
        self.off_diagonal
    }

    /// Kinetic part 1/h² of every diagonal entry.
    fn kinetic(&self) -> f64 {
        -2.0 * self.off_diagonal
    }

    fn off(&self, i: usize, j: usize) -> f64 {
        if j < self.size() && i < self.size() && i.abs_diff(j) == 1 {
            self.off_diagonal.abs()
        } else {
            0.0
        }
    }

    /// Max row sum of absolute values.
    pub fn norm_inf(&self) -> f64 {
        (0..self.size())
            .map(|i| self.diagonal[i].abs() + self.off(i, i.wrapping_sub(1)) + self.off(i, i + 1))
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.size() {
            let radius = self.off(i, i.wrapping_sub(1)) + self.off(i, i + 1);
            lo = lo.min(self.diagonal[i] - radius);
            hi = hi.max(self.diagonal[i] + radius);
        }
        (lo, hi)
    }

    /// `self + shift·I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let potential: Vec<f64> = self.potential.iter().map(|u| u + shift).collect();
        Self::from_potential_values(self.grid, &potential).expect("finite shift of a valid operator")
    }

    fn apply_shifted(&self, shift: f64, v: &[f64], out: &mut [f64]) {
        let n = self.size();
        for i in 0..n {
            let mut acc = (self.kinetic() + (self.potential[i] - shift)) * v[i];
            if i > 0 {
                acc += self.off_diagonal * v[i - 1];
            }
            if i + 1 < n {
                acc += self.off_diagonal * v[i + 1];
            }
            out[i] = acc;
        }
    }
}

/// Build the tridiagonal operator for `problem` on `grid`.
///
/// With the wall at the origin, the net inverse-square part c/r² of U_eff is
/// replaced on node i by `(1/2h²)·[(i+1)^s - 2i^s + (i-1)^s]/i^s` with s the
/// regular exponent (s(s-1)/2 = c), so that the lattice reproduces u ~ r^s
/// exactly. The two coincide to O(i^-4) away from the origin.
pub fn discretize(problem: &RadialProblem, grid: &GridSpec) -> Result<TridiagonalOperator> {
    let n = grid.interior_points();
    let h = grid.spacing();
    let mut values = Vec::with_capacity(n);
    match (grid.wall_at_origin(), problem.origin_exponent()) {
        (true, Some(s)) => {
            let potential = problem.potential();
            let scale = 0.5 / (h * h);
            for i in 1..=n {
                let r = grid.node(i);
                let rest = potential.potential_without_inverse_square(r);
                values.push(scale * lattice_second_difference_ratio(i, s) + rest);
            }
        }
        _ => {
            for r in grid.nodes() {
                values.push(problem.effective_potential_unchecked(r));
            }
        }
    }
    TridiagonalOperator::from_potential_values(*grid, &values)
}

/// [(i+1)^s - 2 i^s + (i-1)^s] / i^s, free of cancellation for large i.
pub(crate) fn lattice_second_difference_ratio(i: usize, s: f64) -> f64 {
    let fi = i as f64;
    if i < 8 {
        let below = if i == 1 { 0.0 } else { (fi - 1.0).powf(s) };
        return ((fi + 1.0).powf(s) - 2.0 * fi.powf(s) + below) / fi.powf(s);
    }
    // 2 Σ_{k≥1} C(s, 2k) x^{2k}, x = 1/i
    let x2 = 1.0 / (fi * fi);
    let mut binom = 1.0;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let m = 2 * k;
        binom *= (s - (m - 2) as f64) * (s - (m - 1) as f64) / ((m - 1) as f64 * m as f64);
        power *= x2;
        let term = binom * power;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || binom == 0.0 {
            break;
        }
    }
    2.0 * sum
}

/// Number of eigenvalues strictly below `lambda`: the negative pivots of the
/// LDLᵀ factorization of `op - lambda`.
///
/// With a = 1/(2h²) the pivots are written q_i = a(1 + g_i), giving
/// g_1 = 1 + (U_1 - λ)/a and g_i = (U_i - λ)/a + g_{i-1}/(1 + g_{i-1}).
/// Away from the walls g_i is O(h), so λ enters with relative weight h
/// instead of h² and survives rounding on fine grids.
pub fn count_below(op: &TridiagonalOperator, lambda: f64) -> usize {
    let n = op.size();
    if n == 0 {
        return 0;
    }
    let a = op.off_diagonal.abs();
    let mut count = 0;
    let mut g = 1.0 + (op.potential[0] - lambda) / a;
    let mut pivot = 1.0 + g;
    for i in 0..n {
        if i > 0 {
            g = (op.potential[i] - lambda) / a + g / pivot;
            pivot = 1.0 + g;
        }
        if pivot.abs() < PIVOT_MIN {
            pivot = -PIVOT_MIN;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues, ascending, by Sturm bisection.
pub fn eigen_lowest(op: &TridiagonalOperator, count: usize) -> Result<Vec<f64>> {
    let n = op.size();
    if count == 0 || count > n {
        return Err(Error::EigenCountOutOfRange { requested: count, size: n });
    }
    let (lo, hi) = op.gershgorin_bounds();
    let pad = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    let mut lower = vec![lo - pad; count];
    let mut upper = vec![hi + pad; count];
    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        let (mut a, mut b) = (lower[k], upper[k]);
        loop {
            let mid = 0.5 * (a + b);
            if b - a <= BISECTION_RELATIVE_WIDTH * mid.abs().max(1.0) || mid <= a || mid >= b {
                break;
            }
            let below = count_below(op, mid);
            // eigenvalues 0..below lie below mid
            for j in k..count {
                if j < below {
                    upper[j] = upper[j].min(mid);
                } else {
                    lower[j] = lower[j].max(mid);
                }
            }
            a = lower[k];
            b = upper[k];
        }
        let value = 0.5 * (a + b);
        values.push(value);
        for bound in &mut lower[k + 1..] {
            *bound = bound.max(a);
        }
    }
    Ok(values)
}

/// Normalized eigenvector (h·Σu² = 1, first nonzero component positive) for
/// an eigenvalue approximation `energy`, by inverse iteration from the
/// all-ones vector.
pub fn eigenfunction(op: &TridiagonalOperator, energy: f64) -> Result<Vec<f64>> {
    let n = op.size();
    let lu = ShiftedLu::factor(op, energy);
    let tolerance = INVERSE_ITERATION_TOLERANCE * op.norm_inf();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut scratch = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=INVERSE_ITERATION_MAX {
        lu.solve(&mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InverseIterationFailed { residual });
        }
        v.iter_mut().for_each(|x| *x /= norm);
        op.apply_shifted(energy, &v, &mut scratch);
        residual = scratch.iter().map(|x| x * x).sum::<f64>().sqrt();
        if iteration >= INVERSE_ITERATION_MIN && residual <= tolerance {
            return Ok(normalize_on_grid(v, op.grid()));
        }
    }
    Err(Error::InverseIterationFailed { residual })
}

fn normalize_on_grid(mut v: Vec<f64>, grid: &GridSpec) -> Vec<f64> {
    let h = grid.spacing();
    let sign = v.iter().find(|x| **x != 0.0).map_or(1.0, |x| x.signum());
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    v.iter_mut().for_each(|x| *x *= sign / norm);
    // one more pass absorbs the rounding of the first
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Interior sign changes. Entries below `NODE_NOISE_FLOOR·max|u|` are treated
/// as zeros and skipped, so roundoff in an exponentially small tail does not
/// register as nodes and a zero between values of opposite sign counts once.
pub fn count_nodes(values: &[f64]) -> usize {
    let floor = NODE_NOISE_FLOOR * values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for &x in values {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            nodes += 1;
        }
        last = x;
    }
    nodes
}

/// LU factorization of `op - shift·I` with partial pivoting (LAPACK gttrf layout).
struct ShiftedLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(op: &TridiagonalOperator, shift: f64) -> Self {
        let n = op.size();
        let mut lower = vec![op.off_diagonal; op.size().saturating_sub(1)];
        let mut upper = lower.clone();
        let mut diag: Vec<f64> = op.potential.iter().map(|u| op.kinetic() + (u - shift)).collect();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= lower[i].abs() {
                if diag[i] != 0.0 {
                    let fact = lower[i] / diag[i];
                    lower[i] = fact;
                    diag[i + 1] -= fact * upper[i];
                }
            } else {
                let fact = diag[i] / lower[i];
                diag[i] = lower[i];
                lower[i] = fact;
                let temp = upper[i];
                upper[i] = diag[i + 1];
                diag[i + 1] = temp - fact * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper[i + 1];
                    upper[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let guard = f64::EPSILON * op.norm_inf().max(f64::MIN_POSITIVE);
        for d in &mut diag {
            if d.abs() < guard {
                *d = if *d < 0.0 { -guard } else { guard };
            }
        }
        Self { lower, diag, upper, upper2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.upper[n - 2] * b[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1] - self.upper2[i] * b[i + 2]) / self.diag[i];
        }
    }
}
