//! Numerov shooting for `u'' = 2(U_eff - E) u`, used as an independent check
//! of the tridiagonal eigenvalues.
//!
//! With the wall at the origin, outward integration is seeded a few dozen
//! nodes out by integrating `w = u/√r` in `ln r` from the regular series
//! close to the origin; without a known problem it starts from the series
//! itself at the first two nodes. A wall at r_min > 0 starts from
//! `u(r_min) = 0`. Inward integration starts from `u(r_max) = 0`. Both meet
//! at the outer classical turning point.

use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::tridiag::count_nodes;
use crate::radial::RadialProblem;
use crate::{Error, Result};

const RENORMALIZE_EVERY: usize = 1000;
const RENORMALIZE_ABOVE: f64 = 1e100;
/// Node at which outward Numerov starts when the continuous problem is known.
/// The recurrence's truncation error on the first lattice sites is O(1) and
/// mixes in the irregular solution; it decays like i^-6.
const SEED_NODE: usize = 64;
const MIN_SEED_NODE: usize = 4;
/// Largest RK4 step in ln r for the seed integration.
const SEED_LOG_STEP: f64 = 0.005;
/// Largest local phase (or e-folding) advanced per RK4 step.
const SEED_PHASE_STEP: f64 = 0.01;
/// The seed integration starts at SEED_DEPTH·r_seed, where the series is exact
/// to rounding.
const SEED_DEPTH: f64 = 1e-6;

/// Regular small-r behavior u ≈ r^s [1 + a₁ r + r² (a₂ + A ln r)], used to
/// start outward integration from a wall at the origin.
///
/// For U = c/r² - Z'/r + κ ln r + V₀ + o(1): s(s-1) = 2c, a₁ = -Z'/s,
/// A = κ/(1 + 2s) and a₂ = [2s a₁² + 2(V₀ - E) - (3 + 2s) A] / (2(1 + 2s)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginSeries {
    pub exponent: f64,
    pub linear: f64,
    /// κ.
    pub logarithmic: f64,
    /// V₀.
    pub constant: f64,
}

impl OriginSeries {
    /// u ≈ r, for potentials regular at the origin.
    pub fn regular() -> Self {
        Self { exponent: 1.0, linear: 0.0, logarithmic: 0.0, constant: 0.0 }
    }

    fn value(&self, r: f64, energy: f64) -> f64 {
        let s = self.exponent;
        let a1 = self.linear;
        let log = self.logarithmic / (1.0 + 2.0 * s);
        let a2 = (2.0 * s * a1 * a1 + 2.0 * (self.constant - energy) - (3.0 + 2.0 * s) * log)
            / (2.0 * (1.0 + 2.0 * s));
        r.powf(s) * (1.0 + r * (a1 + r * (a2 + log * r.ln())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumerovShot {
    /// Interior sign changes of the stitched solution.
    pub node_count: usize,
    /// sin of the angle between (u, u') of the outward and inward solutions at
    /// the match point; zero exactly at a Numerov eigenvalue.
    pub matching_defect: f64,
    /// Node index (1-based) of the match point.
    pub match_index: usize,
}

/// U_eff tabulated on a grid, ready for shooting.
#[derive(Debug, Clone)]
pub struct NumerovProfile {
    grid: GridSpec,
    u_eff: Vec<f64>,
    origin: OriginSeries,
    /// Continuous problem used to integrate from the origin to the seed node.
    seed: Option<RadialProblem>,
}

impl NumerovProfile {
    pub fn new(grid: GridSpec, u_eff: Vec<f64>, origin: OriginSeries) -> Result<Self> {
        if u_eff.len() != grid.interior_points() {
            return Err(Error::InvalidGrid(format!(
                "{} potential values for {} nodes",
                u_eff.len(),
                grid.interior_points()
            )));
        }
        if let Some((i, v)) = u_eff.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinitePotential { r: grid.node(i + 1), value: *v });
        }
        Ok(Self { grid, u_eff, origin, seed: None })
    }

    pub fn for_problem(problem: &RadialProblem, grid: &GridSpec) -> Result<Self> {
        let u_eff = grid.nodes().map(|r| problem.effective_potential_unchecked(r)).collect();
        let origin = match problem.origin_exponent() {
            Some(exponent) => {
                let (logarithmic, constant) = problem.potential().origin_logarithm();
                OriginSeries { exponent, linear: problem.origin_linear_coefficient(), logarithmic, constant }
            }
            None if grid.wall_at_origin() => {
                return Err(Error::Supercritical {
                    dimension: problem.dimension(),
                    l: problem.angular_momentum(),
                })
            }
            None => OriginSeries::regular(),
        };
        let mut profile = Self::new(*grid, u_eff, origin)?;
        profile.seed = Some(*problem);
        Ok(profile)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Outermost classical turning point for `energy`, clamped so the match
    /// point has neighbors on both sides; grid midpoint if none.
    pub fn match_index(&self, energy: f64) -> usize {
        let n = self.grid.interior_points();
        let turning = (1..=n).rev().find(|&i| self.u_eff[i - 1] < energy);
        turning.unwrap_or(n.div_ceil(2)).clamp(2, n - 1)
    }

    pub fn shoot(&self, energy: f64) -> NumerovShot {
        self.shoot_at(energy, self.match_index(energy))
    }

    /// Shoot with a fixed match point (1-based node index in 2..n).
    pub fn shoot_at(&self, energy: f64, m: usize) -> NumerovShot {
        let n = self.grid.interior_points();
        let h = self.grid.spacing();
        let c = h * h / 12.0;
        // w(i) = 1 - h² f_i / 12 with f = 2(U - E), nodes 1..=n
        let w = |i: usize| 1.0 - c * 2.0 * (self.u_eff[i - 1] - energy);

        // outward: track (u_{i-1}, u_i)
        let (mut prev, mut cur, start, seed_nodes) = match (self.grid.wall_at_origin(), &self.seed) {
            (true, Some(problem)) if m >= 2 * MIN_SEED_NODE => {
                let i0 = SEED_NODE.min(m / 2);
                let (u0, u1, nodes) = self.seed_values(problem, i0, energy);
                (u0, u1, i0 + 1, nodes)
            }
            (true, _) => {
                let at = |i: usize| self.origin.value(i as f64 * h, energy);
                (at(1), at(2), 2, 0)
            }
            (false, _) => (0.0, h, 1, 0),
        };
        let mut out_nodes = seed_nodes + if start >= 2 { count_nodes(&[prev, cur]) } else { 0 };
        let mut last_sign = if cur != 0.0 { cur.signum() } else { prev.signum() };
        let mut steps = 0;
        for i in start..=m {
            // prev = u_{i-1}, cur = u_i; node 0 is the wall where u = 0
            let prev_term = if i == 1 { 0.0 } else { w(i - 1) * prev };
            let next = ((12.0 - 10.0 * w(i)) * cur - prev_term) / w(i + 1);
            if i < m && next != 0.0 {
                if last_sign != 0.0 && next.signum() != last_sign {
                    out_nodes += 1;
                }
                last_sign = next.signum();
            }
            prev = cur;
            cur = next;
            steps += 1;
            if steps % RENORMALIZE_EVERY == 0 || cur.abs() > RENORMALIZE_ABOVE {
                let scale = cur.abs().max(prev.abs());
                if scale > 0.0 {
                    prev /= scale;
                    cur /= scale;
                }
            }
        }
        // now prev = u_out(m), cur = u_out(m+1); need u_out(m-1) too
        let (out_m, out_plus) = (prev, cur);
        let out_minus = self.step_back(energy, m, out_m, out_plus);

        // inward: track (u_{i+1}, u_i), starting u_{n+1} = 0, u_n = 1
        let mut above = 0.0;
        let mut here = 1.0;
        let mut in_nodes = 0;
        let mut in_sign = 1.0;
        steps = 0;
        let mut i = n;
        while i > m - 1 {
            let above_term = if i == n { 0.0 } else { w(i + 1) * above };
            let below = ((12.0 - 10.0 * w(i)) * here - above_term) / w(i - 1);
            if i > m && below != 0.0 {
                if below.signum() != in_sign {
                    in_nodes += 1;
                }
                in_sign = below.signum();
            }
            above = here;
            here = below;
            i -= 1;
            steps += 1;
            if steps % RENORMALIZE_EVERY == 0 || here.abs() > RENORMALIZE_ABOVE {
                let scale = here.abs().max(above.abs());
                if scale > 0.0 {
                    above /= scale;
                    here /= scale;
                }
            }
        }
        // here = u_in(m-1), above = u_in(m)
        let (in_minus, in_m) = (here, above);
        let in_plus = self.step_forward(energy, m, in_minus, in_m);

        let d_out = (out_plus - out_minus) / (2.0 * h);
        let d_in = (in_plus - in_minus) / (2.0 * h);
        let norm = (out_m.hypot(d_out)) * (in_m.hypot(d_in));
        let matching_defect = if norm > 0.0 { (d_out * in_m - d_in * out_m) / norm } else { 0.0 };

        NumerovShot { node_count: out_nodes + in_nodes, matching_defect, match_index: m }
    }

    /// u at nodes i0 and i0 + 1, integrating the continuous equation from the
    /// origin series with RK4 in x = ln r on w = u/√r:
    /// w'' = [2r²(U - E) + ¼] w.
    /// Also returns the sign changes of u in (0, r_{i0}).
    fn seed_values(&self, problem: &RadialProblem, i0: usize, energy: f64) -> (f64, f64, usize) {
        let h = self.grid.spacing();
        let r0 = i0 as f64 * h;
        let r1 = r0 + h;
        let g = |x: f64| {
            let r = x.exp();
            2.0 * r * r * (problem.effective_potential_unchecked(r) - energy) + 0.25
        };
        let rhs = |x: f64, (w, dw): (f64, f64)| (dw, g(x) * w);
        let rk4 = |x: f64, y: (f64, f64), dx: f64| {
            let k1 = rhs(x, y);
            let k2 = rhs(x + 0.5 * dx, (y.0 + 0.5 * dx * k1.0, y.1 + 0.5 * dx * k1.1));
            let k3 = rhs(x + 0.5 * dx, (y.0 + 0.5 * dx * k2.0, y.1 + 0.5 * dx * k2.1));
            let k4 = rhs(x + dx, (y.0 + dx * k3.0, y.1 + dx * k3.1));
            (
                y.0 + dx / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                y.1 + dx / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            )
        };
        // steps limited by SEED_LOG_STEP and by SEED_PHASE_STEP/√|g|; sign changes counted
        let integrate = |x_from: f64, x_to: f64, mut y: (f64, f64), nodes: &mut usize| {
            let mut x = x_from;
            while x < x_to {
                let dx = SEED_LOG_STEP.min(SEED_PHASE_STEP / g(x).abs().sqrt()).min(x_to - x);
                let next = rk4(x, y, dx);
                if next.0 != 0.0 && y.0 != 0.0 && next.0.signum() != y.0.signum() {
                    *nodes += 1;
                }
                y = next;
                x = if x_to - x <= dx { x_to } else { x + dx };
            }
            y
        };
        // w = r^{s-½}(1 + a₁r), dw/dx = r^{s-½}[(s-½)(1 + a₁r) + a₁r]
        let r_start = SEED_DEPTH * r0;
        let s = self.origin.exponent;
        let a1 = self.origin.linear;
        let lead = r_start.powf(s - 0.5);
        let start = (lead * (1.0 + a1 * r_start), lead * ((s - 0.5) * (1.0 + a1 * r_start) + a1 * r_start));
        let (x_start, x0, x1) = (r_start.ln(), r0.ln(), r1.ln());
        let mut nodes = 0;
        let y0 = integrate(x_start, x0, start, &mut nodes);
        let y1 = integrate(x0, x1, y0, &mut 0);
        (y0.0 * r0.sqrt(), y1.0 * r1.sqrt(), nodes)
    }

    /// u_{m-1} from (u_m, u_{m+1}) by running the recurrence backwards.
    fn step_back(&self, energy: f64, m: usize, u_m: f64, u_plus: f64) -> f64 {
        let c = self.grid.spacing().powi(2) / 12.0;
        let w = |i: usize| 1.0 - c * 2.0 * (self.u_eff[i - 1] - energy);
        ((12.0 - 10.0 * w(m)) * u_m - w(m + 1) * u_plus) / w(m - 1)
    }

    /// u_{m+1} from (u_{m-1}, u_m).
    fn step_forward(&self, energy: f64, m: usize, u_minus: f64, u_m: f64) -> f64 {
        let c = self.grid.spacing().powi(2) / 12.0;
        let w = |i: usize| 1.0 - c * 2.0 * (self.u_eff[i - 1] - energy);
        ((12.0 - 10.0 * w(m)) * u_m - w(m - 1) * u_minus) / w(m + 1)
    }

    /// Zero of the matching defect near `guess`, with the match point frozen
    /// at the one chosen for `guess`. Fails unless the root has
    /// `expected_nodes` nodes.
    pub fn eigenvalue_near(&self, guess: f64, expected_nodes: usize) -> Result<f64> {
        let m = self.match_index(guess);
        let defect = |e: f64| self.shoot_at(e, m).matching_defect;
        let f0 = defect(guess);
        if f0 == 0.0 {
            return self.confirm(guess, m, expected_nodes);
        }
        let mut delta = 1e-10 * guess.abs().max(1.0);
        let mut bracket = None;
        for _ in 0..80 {
            let (lo, hi) = (guess - delta, guess + delta);
            let (f_lo, f_hi) = (defect(lo), defect(hi));
            if f_lo.signum() != f0.signum() {
                bracket = Some((lo, guess, f_lo));
                break;
            }
            if f_hi.signum() != f0.signum() {
                bracket = Some((guess, hi, f0));
                break;
            }
            delta *= 2.0;
        }
        let (mut a, mut b, f_a) = bracket.ok_or_else(|| Error::CrossCheck {
            index: expected_nodes,
            reason: format!("no sign change of the Numerov defect near {guess}"),
        })?;
        let sign_a = f_a.signum();
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let f = defect(mid);
            if f == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if f.signum() == sign_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        self.confirm(0.5 * (a + b), m, expected_nodes)
    }

    fn confirm(&self, energy: f64, m: usize, expected_nodes: usize) -> Result<f64> {
        let nodes = self.shoot_at(energy, m).node_count;
        if nodes != expected_nodes {
            return Err(Error::CrossCheck {
                index: expected_nodes,
                reason: format!("Numerov root at {energy} has {nodes} nodes"),
            });
        }
        Ok(energy)
    }
}

/// Node count and matching defect of the Numerov solution at `energy`.
pub fn shoot_numerov(problem: &RadialProblem, grid: &GridSpec, energy: f64) -> Result<NumerovShot> {
    Ok(NumerovProfile::for_problem(problem, grid)?.shoot(energy))
}

/// Same as [`shoot_numerov`] on a tabulated effective potential.
pub fn shoot_numerov_profile(
    grid: &GridSpec,
    u_eff: &[f64],
    origin: OriginSeries,
    energy: f64,
) -> Result<NumerovShot> {
    Ok(NumerovProfile::new(*grid, u_eff.to_vec(), origin)?.shoot(energy))
}
