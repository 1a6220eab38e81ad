//! Convergence-order estimation from a grid-refinement series.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Least-squares fit of the convergence order `p` in `err ≈ C·N^{-p}` from
/// matched slices of resolution counts and absolute errors. Zero or
/// non-finite errors are skipped; at least two usable points are required.
pub fn fit_order<T: Scalar>(counts: &[usize], errors: &[T]) -> Result<T> {
    if counts.len() != errors.len() {
        return Err(Error::Domain {
            quantity: "convergence fit",
            message: "counts and errors must have equal length".into(),
        });
    }
    let mut xs: Vec<T> = Vec::new();
    let mut ys: Vec<T> = Vec::new();
    for (&n, &e) in counts.iter().zip(errors) {
        let e = e.abs();
        if e > T::zero() && e.is_finite() && n > 0 {
            xs.push(T::of(n as f64).ln());
            ys.push(e.ln());
        }
    }
    let m = xs.len();
    if m < 2 {
        return Err(Error::Domain {
            quantity: "convergence fit",
            message: "need at least two nonzero error samples".into(),
        });
    }
    let mf = T::of(m as f64);
    let sx = xs.iter().fold(T::zero(), |a, &x| a + x);
    let sy = ys.iter().fold(T::zero(), |a, &y| a + y);
    let sxx = xs.iter().fold(T::zero(), |a, &x| a + x * x);
    let sxy = xs
        .iter()
        .zip(&ys)
        .fold(T::zero(), |a, (&x, &y)| a + x * y);
    let denom = mf * sxx - sx * sx;
    if denom == T::zero() {
        return Err(Error::Domain {
            quantity: "convergence fit",
            message: "degenerate resolution set".into(),
        });
    }
    let slope = (mf * sxy - sx * sy) / denom;
    Ok(-slope)
}
