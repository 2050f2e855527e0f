//! Bracketed bisection for the scalar transcendental equations of the bounds.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Stop once the bracket width falls below `rtol · |midpoint|`.
    pub rtol: f64,
    pub max_iter: usize,
    /// Doublings allowed when searching for a bracket on (0, ∞).
    pub max_expansions: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection {
            rtol: 1e-12,
            max_iter: 200,
            max_expansions: 60,
        }
    }
}

impl Bisection {
    /// Root of `f` inside `[lo, hi]`; the endpoints must bracket a sign change.
    pub fn solve<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<f64> {
        let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mut f_lo = f(lo);
        let f_hi = f(hi);
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
            return Err(Error::RootNotFound {
                reason: "endpoints do not bracket a sign change".into(),
                lo,
                hi,
                f_lo,
                f_hi,
            });
        }
        for _ in 0..self.max_iter {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                // Bracket is down to adjacent floats.
                return Ok(mid);
            }
            let f_mid = f(mid);
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if f_mid.is_nan() {
                return Err(Error::RootNotFound {
                    reason: format!("function is NaN at {mid:e}"),
                    lo,
                    hi,
                    f_lo,
                    f_hi,
                });
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
            if hi - lo <= self.rtol * (0.5 * (lo + hi)).abs() {
                return Ok(0.5 * (lo + hi));
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Grows `[guess/2, 2·guess]` geometrically on (0, ∞) until `f` changes sign.
    pub fn bracket_positive<F: Fn(f64) -> f64>(&self, f: F, guess: f64) -> Result<(f64, f64)> {
        let guess = if guess.is_finite() && guess > 0.0 { guess } else { 1.0 };
        let mut lo = 0.5 * guess;
        let mut hi = 2.0 * guess;
        let mut f_lo = f(lo);
        let mut f_hi = f(hi);
        for _ in 0..self.max_expansions {
            if f_lo.signum() != f_hi.signum() && !f_lo.is_nan() && !f_hi.is_nan() {
                return Ok((lo, hi));
            }
            lo *= 0.5;
            hi *= 2.0;
            f_lo = f(lo);
            f_hi = f(hi);
        }
        if f_lo.signum() != f_hi.signum() && !f_lo.is_nan() && !f_hi.is_nan() {
            return Ok((lo, hi));
        }
        Err(Error::RootNotFound {
            reason: format!("no sign change after {} bracket expansions", self.max_expansions),
            lo,
            hi,
            f_lo,
            f_hi,
        })
    }

    /// All sign changes of `f` on the sorted grid `xs`, each refined to a root.
    pub fn all_roots_on_grid<F: Fn(f64) -> f64>(&self, f: F, xs: &[f64]) -> Result<Vec<f64>> {
        let mut roots = Vec::new();
        let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        for (w, v) in xs.windows(2).zip(values.windows(2)) {
            if v[0].is_nan() || v[1].is_nan() {
                continue;
            }
            if v[0] == 0.0 {
                roots.push(w[0]);
            } else if v[0].signum() != v[1].signum() && v[1] != 0.0 {
                roots.push(self.solve(&f, w[0], w[1])?);
            }
        }
        if let (Some(&x), Some(&v)) = (xs.last(), values.last()) {
            if v == 0.0 {
                roots.push(x);
            }
        }
        Ok(roots)
    }
}

/// |lhs − rhs| relative to the larger magnitude of the two sides.
pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = Bisection::default().solve(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn rejects_unbracketed() {
        let err = Bisection::default().solve(|x| x * x + 1.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::RootNotFound { .. }));
    }

    #[test]
    fn expands_bracket() {
        let b = Bisection::default();
        let f = |x: f64| x - 1e6;
        let (lo, hi) = b.bracket_positive(f, 1.0).unwrap();
        assert!(lo < 1e6 && hi > 1e6);
        let (lo, hi) = b.bracket_positive(|x: f64| x - 1e-9, 1.0).unwrap();
        assert!(lo < 1e-9 && hi > 1e-9);
    }

    #[test]
    fn bracket_failure_reports_interval() {
        let err = Bisection::default().bracket_positive(|_| 1.0, 1.0).unwrap_err();
        match err {
            Error::RootNotFound { lo, hi, .. } => assert!(lo < 1e-10 && hi > 1e10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_scan_finds_every_root() {
        let xs: Vec<f64> = (0..=100).map(|i| f64::from(i) * 0.1).collect();
        let roots = Bisection::default()
            .all_roots_on_grid(|x| (x - 1.05) * (x - 4.55) * (x - 8.25), &xs)
            .unwrap();
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.05, 4.55, 8.25]) {
            assert!((r - want).abs() < 1e-10);
        }
    }
}
