//! Bracketed root finding: bisection safeguarded by Newton steps.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Find a root of `f` inside `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs (or one endpoint is already a root).
///
/// Newton steps are taken whenever they stay inside the current bracket and
/// shrink it fast enough; otherwise the step degenerates to bisection, so
/// convergence is guaranteed. Iterates until the bracket or the step size
/// falls below a few ulps of the root, i.e. essentially machine precision.
pub fn newton_bisect<T, F, D>(lo: T, hi: T, f: F, df: D, max_iter: usize) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
    D: Fn(T) -> T,
{
    let two = T::of(2.0);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if (f_lo > T::zero()) == (f_hi > T::zero()) {
        return Err(Error::RootSearch {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
            iterations: 0,
        });
    }

    // Orient so that f(xl) < 0 < f(xh).
    let (mut xl, mut xh) = if f_lo < T::zero() { (lo, hi) } else { (hi, lo) };

    let mut root = (lo + hi) / two;
    let mut step_prev = (hi - lo).abs();
    let mut step = step_prev;
    let mut f_root = f(root);
    let mut df_root = df(root);

    for _ in 0..max_iter {
        // Reject the Newton step if it would leave the bracket or if the
        // residual is not shrinking at least as fast as bisection would.
        let newton_escapes = ((root - xh) * df_root - f_root) * ((root - xl) * df_root - f_root)
            > T::zero();
        let newton_slow = (two * f_root).abs() > (step_prev * df_root).abs();
        if newton_escapes || newton_slow {
            step_prev = step;
            step = (xh - xl) / two;
            root = xl + step;
            if root == xl {
                return Ok(root);
            }
        } else {
            step_prev = step;
            step = f_root / df_root;
            let next = root - step;
            if next == root {
                return Ok(root);
            }
            root = next;
        }

        let tol = T::epsilon() * root.abs() + T::min_positive_value();
        if step.abs() <= tol {
            return Ok(root);
        }

        f_root = f(root);
        df_root = df(root);
        if f_root == T::zero() {
            return Ok(root);
        }
        if f_root < T::zero() {
            xl = root;
        } else {
            xh = root;
        }
    }

    Err(Error::RootSearch {
        lo: xl.to_f64().unwrap_or(f64::NAN),
        hi: xh.to_f64().unwrap_or(f64::NAN),
        iterations: max_iter,
    })
}
