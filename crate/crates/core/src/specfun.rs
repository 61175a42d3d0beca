//! Special functions restricted to the arguments that actually occur here.
//!
//! Dimensions are integers, so Γ is only ever needed at integer and
//! half-integer points and is evaluated by exact recurrence. Ai is only
//! needed on the real line for the 1D linear-potential spectrum.

use std::f64::consts::PI;

use crate::{Error, Result};

/// |x| at which [`airy_ai`] switches from the Maclaurin series to the
/// large-argument asymptotic expansion.
pub const AIRY_SERIES_LIMIT: f64 = 6.0;

/// Highest supported index for [`airy_negative_zero`].
pub const AIRY_MAX_ZERO: usize = 10;

const SQRT_PI: f64 = 1.772_453_850_905_516;
/// Ai(0) = 1 / (3^{2/3} Γ(2/3)).
const AI_0: f64 = 0.355_028_053_887_817_24;
/// -Ai'(0) = 1 / (3^{1/3} Γ(1/3)).
const AI_PRIME_0_NEG: f64 = 0.258_819_403_792_806_8;

/// A positive half-integer or integer `x`, stored as `2x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice_value: u32,
}

impl HalfInteger {
    pub fn new(twice_value: i64) -> Result<Self> {
        if twice_value < 1 || twice_value > i64::from(u32::MAX) {
            return Err(Error::InvalidHalfInteger(twice_value));
        }
        Ok(Self { twice_value: twice_value as u32 })
    }

    /// `D/2` for an integer dimension.
    pub fn half_of(dimension: u32) -> Result<Self> {
        Self::new(i64::from(dimension))
    }

    pub fn twice_value(self) -> u32 {
        self.twice_value
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_value) / 2.0
    }

    /// `x + 1`.
    pub fn succ(self) -> Self {
        Self { twice_value: self.twice_value + 2 }
    }
}

/// Γ(x) for x ∈ {1/2, 1, 3/2, ...} by the recurrence Γ(x+1) = xΓ(x),
/// starting from Γ(1) = 1 or Γ(1/2) = √π.
pub fn gamma_half_integer(x: HalfInteger) -> f64 {
    let twice = x.twice_value;
    let (mut g, mut arg_twice) = if twice % 2 == 0 { (1.0, 2) } else { (SQRT_PI, 1) };
    while arg_twice < twice {
        g *= f64::from(arg_twice) / 2.0;
        arg_twice += 2;
    }
    g
}

/// Surface area of the unit (D-1)-sphere, `2π^{D/2} / Γ(D/2)`.
pub fn sphere_surface_area(dimension: i64) -> Result<f64> {
    if dimension < 1 || dimension > i64::from(u32::MAX) {
        return Err(Error::InvalidDimension(dimension));
    }
    let half = HalfInteger::new(dimension)?;
    Ok(2.0 * pi_pow_half(dimension as u32) / gamma_half_integer(half))
}

/// π^{D/2}.
fn pi_pow_half(dimension: u32) -> f64 {
    let whole = PI.powi((dimension / 2) as i32);
    if dimension % 2 == 0 {
        whole
    } else {
        whole * SQRT_PI
    }
}

/// Airy function Ai(x) on the real line.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= AIRY_SERIES_LIMIT {
        airy_ai_series(x)
    } else if x < 0.0 {
        airy_ai_oscillatory(-x)
    } else {
        airy_ai_decaying(x)
    }
}

/// Maclaurin series Ai(x) = Ai(0) f(x) + Ai'(0) g(x).
pub(crate) fn airy_ai_series(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f_term = 1.0;
    let mut g_term = x;
    let mut f = f_term;
    let mut g = g_term;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        f_term *= x3 / ((k3 - 1.0) * k3);
        g_term *= x3 / (k3 * (k3 + 1.0));
        f += f_term;
        g += g_term;
        if f_term.abs() < 1e-17 * f.abs().max(1.0) && g_term.abs() < 1e-17 * g.abs().max(1.0) {
            break;
        }
    }
    AI_0 * f - AI_PRIME_0_NEG * g
}

/// Coefficients u_k of the Airy asymptotic expansions,
/// u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) · u_{k-1}.
fn airy_asymptotic_coefficients() -> [f64; 24] {
    let mut u = [0.0; 24];
    u[0] = 1.0;
    for k in 1..u.len() {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

/// Ai(-z) for large z > 0:
/// π^{-1/2} z^{-1/4} [sin(ζ + π/4) P(ζ) - cos(ζ + π/4) Q(ζ)], ζ = (2/3) z^{3/2}.
fn airy_ai_oscillatory(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = airy_asymptotic_coefficients();
    let mut p = 0.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for (k, &uk) in u.iter().enumerate() {
        let term = uk / zeta.powi(k as i32);
        // stop at the smallest term of the divergent series
        if term > last {
            break;
        }
        last = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term < 1e-17 {
            break;
        }
    }
    let phase = zeta + PI / 4.0;
    (phase.sin() * p - phase.cos() * q) / (SQRT_PI * z.powf(0.25))
}

/// Ai(x) for large x > 0: e^{-ζ} / (2√π x^{1/4}) Σ (-1)^k u_k / ζ^k.
fn airy_ai_decaying(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = airy_asymptotic_coefficients();
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for (k, &uk) in u.iter().enumerate() {
        let term = uk / zeta.powi(k as i32);
        if term > last || term < 1e-17 {
            break;
        }
        last = term;
        sum += if k % 2 == 0 { term } else { -term };
    }
    (-zeta).exp() * sum / (2.0 * SQRT_PI * x.powf(0.25))
}

/// n-th negative zero a_n of Ai (a_1 ≈ -2.338), for 1 ≤ n ≤ 10.
///
/// Zeros are bracketed by a sign-change scan of [`airy_ai`] from the origin
/// and refined by bisection to full double precision.
pub fn airy_negative_zero(n: usize) -> Result<f64> {
    if n == 0 || n > AIRY_MAX_ZERO {
        return Err(Error::AiryIndexOutOfRange(n));
    }
    const SCAN_STEP: f64 = 0.05;
    let mut found = 0;
    let mut hi = 0.0_f64;
    let mut f_hi = airy_ai(hi);
    loop {
        let lo = hi - SCAN_STEP;
        let f_lo = airy_ai(lo);
        if f_lo == 0.0 {
            found += 1;
            if found == n {
                return Ok(lo);
            }
        } else if f_lo.signum() != f_hi.signum() && f_hi != 0.0 {
            found += 1;
            if found == n {
                return Ok(bisect_sign_change(lo, hi, f_lo));
            }
        }
        hi = lo;
        f_hi = f_lo;
    }
}

fn bisect_sign_change(mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_sign = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = airy_ai(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn half(twice: i64) -> HalfInteger {
        HalfInteger::new(twice).unwrap()
    }

    #[test]
    fn gamma_base_cases() {
        assert_eq!(gamma_half_integer(half(1)), SQRT_PI);
        assert_eq!(gamma_half_integer(half(2)), 1.0);
        assert_relative_eq!(gamma_half_integer(half(5)), 0.75 * SQRT_PI, max_relative = 1e-15);
        assert_relative_eq!(gamma_half_integer(half(5)), 1.329_340_388_2, epsilon = 1e-10);
        assert_eq!(gamma_half_integer(half(12)), 120.0);
    }

    #[test]
    fn gamma_recurrence_is_exact() {
        for twice in 1..=120 {
            let x = half(twice);
            assert_eq!(gamma_half_integer(x.succ()), x.value() * gamma_half_integer(x));
        }
    }

    #[test]
    fn half_integer_rejects_non_positive() {
        assert!(HalfInteger::new(0).is_err());
        assert!(HalfInteger::new(-3).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert_eq!(sphere_surface_area(1).unwrap(), 2.0);
        assert_relative_eq!(sphere_surface_area(2).unwrap(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_surface_area(3).unwrap(), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_surface_area(4).unwrap(), 2.0 * PI * PI, max_relative = 1e-15);
        assert!(sphere_surface_area(0).is_err());
        assert!(sphere_surface_area(-2).is_err());
    }

    #[test]
    fn sphere_area_matches_gamma_formula() {
        for d in 1..=50_i64 {
            let direct = 2.0 * PI.powf(d as f64 / 2.0) / gamma_half_integer(half(d));
            assert_relative_eq!(sphere_surface_area(d).unwrap(), direct, max_relative = 1e-14);
        }
    }

    #[test]
    fn airy_at_origin() {
        assert_eq!(airy_ai(0.0), AI_0);
    }

    #[test]
    fn airy_branches_agree_at_switch_point() {
        for x in [-AIRY_SERIES_LIMIT, AIRY_SERIES_LIMIT] {
            let series = airy_ai_series(x);
            let asymptotic = if x < 0.0 { airy_ai_oscillatory(-x) } else { airy_ai_decaying(x) };
            assert!((series - asymptotic).abs() < 1e-9, "x={x}: {series} vs {asymptotic}");
        }
        // just inside and just outside the switch are continuous
        let inside = airy_ai(-AIRY_SERIES_LIMIT + 1e-9);
        let outside = airy_ai(-AIRY_SERIES_LIMIT - 1e-9);
        assert!((inside - outside).abs() < 1e-9);
    }

    #[test]
    fn airy_zero_range() {
        assert!(airy_negative_zero(0).is_err());
        assert!(airy_negative_zero(11).is_err());
    }

    #[test]
    fn airy_zeros_interlace_and_vanish() {
        let mut prev = 0.0;
        for n in 1..=AIRY_MAX_ZERO {
            let a = airy_negative_zero(n).unwrap();
            assert!(a < prev);
            assert!(airy_ai(a).abs() < 1e-8);
            prev = a;
        }
    }
}
