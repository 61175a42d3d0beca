use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Result of fitting `E(h) = E₀ + C·h^p` to the last three rungs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Richardson {
    pub energy: f64,
    /// Fitted p; `None` when the triplet is not monotonically convergent and
    /// `energy` is just the finest-grid value.
    pub order: Option<f64>,
}

impl Richardson {
    pub fn reliable(&self) -> bool {
        self.order.is_some()
    }
}

/// Extrapolate `(h, E)` pairs, ordered coarse to fine with h halving.
pub fn richardson_extrapolate(pairs: &[(f64, f64)]) -> Result<Richardson> {
    if pairs.len() < 3 {
        return Err(Error::InvalidLadder(format!("at least 3 rungs, got {}", pairs.len())));
    }
    for w in pairs.windows(2) {
        let ratio = w[0].0 / w[1].0;
        if !((ratio - 2.0).abs() <= 1e-9) {
            return Err(Error::InvalidLadder(format!(
                "h halving per rung, got ratio {ratio}"
            )));
        }
    }
    let tail = &pairs[pairs.len() - 3..];
    let (e1, e2, e3) = (tail[0].1, tail[1].1, tail[2].1);
    let finest = Richardson { energy: e3, order: None };
    let d1 = e1 - e2;
    let d2 = e2 - e3;
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() || d2.abs() >= d1.abs() {
        return Ok(finest);
    }
    let p = (d1 / d2).log2();
    if !p.is_finite() || p <= 0.0 {
        return Ok(finest);
    }
    Ok(Richardson { energy: e3 - d2 / (p.exp2() - 1.0), order: Some(p) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        [1.0, 0.5, 0.25].iter().map(|&h| (h, f(h))).collect()
    }

    #[test]
    fn exact_quadratic() {
        let r = richardson_extrapolate(&ladder(|h| 1.0 + h * h)).unwrap();
        assert!((r.energy - 1.0).abs() < 1e-14);
        assert!((r.order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_linear() {
        let r = richardson_extrapolate(&ladder(|h| 1.0 + h)).unwrap();
        assert!((r.energy - 1.0).abs() < 1e-14);
        assert!((r.order.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uses_last_three_rungs() {
        let mut pairs = vec![(2.0, 100.0)];
        pairs.extend(ladder(|h| -0.5 + 3.0 * h * h));
        let r = richardson_extrapolate(&pairs).unwrap();
        assert!((r.energy + 0.5).abs() < 1e-14);
    }

    #[test]
    fn non_monotone_falls_back_to_finest() {
        let pairs = vec![(1.0, 1.0), (0.5, 2.0), (0.25, 1.5)];
        let r = richardson_extrapolate(&pairs).unwrap();
        assert_eq!(r, Richardson { energy: 1.5, order: None });
        assert!(!r.reliable());
    }

    #[test]
    fn rejects_bad_ladders() {
        assert!(richardson_extrapolate(&[(1.0, 1.0), (0.5, 1.0)]).is_err());
        assert!(richardson_extrapolate(&[(1.0, 1.0), (0.3, 1.0), (0.1, 1.0)]).is_err());
    }
}
