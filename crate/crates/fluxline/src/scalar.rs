//! Scalar abstraction and physical constants.
//!
//! All numerics in this crate are generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. The crate-root aliases pin the
//! concrete type used by the CLI and the reference tests (`f64`).

use std::fmt::{Debug, Display};

use num_traits::float::{Float, FloatConst};
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Conversion from an `f64` literal. Panics only if the value is not
    /// representable, which cannot happen for finite literals and the
    /// supported types.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Reduced Planck constant ħ \[J·s\], from the exact SI value of h.
#[inline]
pub fn hbar<T: Scalar>() -> T {
    T::of(1.054_571_817_646_156_4e-34)
}

/// Superconducting flux quantum Φ₀ = h/(2e) \[Wb\], from exact SI constants.
#[inline]
pub fn flux_quantum<T: Scalar>() -> T {
    T::of(2.067_833_848_461_929_3e-15)
}

/// Euler–Mascheroni constant γ.
#[inline]
pub fn euler_gamma<T: Scalar>() -> T {
    T::of(0.577_215_664_901_532_9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_have_expected_magnitudes() {
        assert!((hbar::<f64>() - 1.054_571_817e-34).abs() < 1e-42);
        assert!((flux_quantum::<f64>() - 2.067_833_848e-15).abs() < 1e-23);
        assert!((euler_gamma::<f64>() - 0.577_215_664_901_532_9).abs() < 1e-16);
    }

    #[test]
    fn constants_available_in_f32() {
        assert!(flux_quantum::<f32>() > 0.0);
        assert!(hbar::<f32>() > 0.0);
    }
}
