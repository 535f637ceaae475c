//! Root finding for strictly increasing functions.
//!
//! Bisection is the correctness anchor: only monotonicity of the lift is
//! guaranteed, so every accepted iterate keeps a sign-changing bracket. When a
//! derivative is available a Newton step is tried first and kept only if it
//! lands strictly inside the current bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute bracket width at which the solve stops.
    pub abs_tol: f64,
    pub max_iter: u32,
    /// Try guarded Newton steps when the caller supplies a derivative.
    pub newton: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            abs_tol: 1e-13,
            max_iter: 200,
            newton: true,
        }
    }
}

/// Solves `g(x) = 0` on `[lo, hi]` for an increasing `g`.
///
/// `g` returns its value and, optionally, its derivative. Fails with
/// [`Error::NoBracket`] if `g(lo) > 0` or `g(hi) < 0`.
pub fn solve_increasing<G>(g: G, mut lo: f64, mut hi: f64, cfg: &SolverConfig) -> Result<f64>
where
    G: Fn(f64) -> (f64, Option<f64>),
{
    if !(lo <= hi) {
        return Err(Error::NoBracket { lo, hi });
    }
    let (g_lo, _) = g(lo);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    let (g_hi, _) = g(hi);
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::NoBracket { lo, hi });
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..cfg.max_iter {
        let (gx, dgx) = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= cfg.abs_tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }

        let newton = match dgx {
            Some(d) if cfg.newton && d > 0.0 && d.is_finite() => Some(x - gx / d),
            _ => None,
        };
        x = match newton {
            Some(xn) if xn > lo && xn < hi => {
                // Newton may creep towards the root from one side; once the
                // step is below tolerance, try to close the bracket around it.
                if (xn - x).abs() < 0.5 * cfg.abs_tol {
                    let a = (xn - 0.5 * cfg.abs_tol).max(lo);
                    let b = (xn + 0.5 * cfg.abs_tol).min(hi);
                    let (ga, _) = g(a);
                    let (gb, _) = g(b);
                    if ga <= 0.0 && gb >= 0.0 {
                        return Ok(0.5 * (a + b));
                    }
                }
                xn
            }
            _ => mid,
        };
    }
    Err(Error::NotConverged {
        iterations: cfg.max_iter,
    })
}
