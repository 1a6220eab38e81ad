//! Multimode Lamb-shift renormalization of the qubit gap.
//!
//! The cutoff-regularized mode sum
//!
//! `S(n_cutoff) = Σ 1/[n·(1 + n²/n_cutoff²)]`
//!
//! (over odd n for the quarter-wave geometry, over all integers for the
//! half-wave analog) is evaluated three ways: a digamma closed form, a
//! brute-force compensated partial sum with a certified tail bound, and the
//! large-n_cutoff logarithmic asymptote. The renormalized gap is
//! Δ = Δ₀·exp(−2Σ(g_n/ω_n)²); because the couplings decouple at high
//! frequency the exponent converges and Δ stays finite.
//!
//! Index convention: resonator branch n (ω_n/ω₀ = 2n+1) maps to summand
//! m = 2n+1 in the odd-parity sum, so the fundamental mode is m = 1.

use num_complex::Complex;

use crate::digamma::complex_digamma;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::scalar::{euler_gamma, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// n = 1, 3, 5, … — qubit at the grounded end of a quarter-wave line.
    Odd,
    /// n = 1, 2, 3, … — capacitive coupling at the end of a half-wave line.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMethod {
    Digamma,
    PartialSum { terms: usize },
    Asymptotic,
}

/// One evaluated mode sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambSum<T> {
    pub n_cutoff: T,
    pub parity: Parity,
    pub value: T,
    pub method: SumMethod,
    /// Rigorous bound on the omitted tail; `None` for the exact methods.
    pub tail_bound: Option<T>,
}

/// Residual above which the "imaginary part is zero by symmetry" assertion
/// fails and the digamma implementation must be considered broken.
const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-13;

fn require_positive_cutoff<T: Scalar>(n_cutoff: T) -> Result<()> {
    if !(n_cutoff > T::zero()) || !n_cutoff.is_finite() {
        return Err(Error::Domain {
            quantity: "n_cutoff",
            message: format!("must be positive and finite, got {n_cutoff}"),
        });
    }
    Ok(())
}

fn real_by_symmetry<T: Scalar>(z: Complex<T>) -> Result<T> {
    if z.im.abs() > T::of(IMAGINARY_RESIDUE_LIMIT) {
        return Err(Error::Consistency {
            message: format!(
                "conjugate-symmetric digamma combination has imaginary residue {}",
                z.im
            ),
        });
    }
    Ok(z.re)
}

/// Odd-parity closed form:
/// S = (γ + 2·ln 2)/2 + [ψ((1+i·n_c)/2) + ψ((1−i·n_c)/2)]/4.
pub fn lamb_sum_odd<T: Scalar>(n_cutoff: T) -> Result<LambSum<T>> {
    require_positive_cutoff(n_cutoff)?;
    let half = T::of(0.5);
    let quarter = T::of(0.25);
    let two = T::of(2.0);
    let z = Complex::new(half, half * n_cutoff);
    let zc = Complex::new(half, -half * n_cutoff);
    let pair = complex_digamma(z)? + complex_digamma(zc)?;
    let pair_re = real_by_symmetry(pair)?;
    let value = (euler_gamma::<T>() + two * T::LN_2()) * half + quarter * pair_re;
    Ok(LambSum {
        n_cutoff,
        parity: Parity::Odd,
        value,
        method: SumMethod::Digamma,
        tail_bound: None,
    })
}

/// All-integers closed form: S = γ + [ψ(1+i·n_c) + ψ(1−i·n_c)]/2.
pub fn lamb_sum_all<T: Scalar>(n_cutoff: T) -> Result<LambSum<T>> {
    require_positive_cutoff(n_cutoff)?;
    let one = T::one();
    let half = T::of(0.5);
    let z = Complex::new(one, n_cutoff);
    let zc = Complex::new(one, -n_cutoff);
    let pair = complex_digamma(z)? + complex_digamma(zc)?;
    let pair_re = real_by_symmetry(pair)?;
    let value = euler_gamma::<T>() + half * pair_re;
    Ok(LambSum {
        n_cutoff,
        parity: Parity::All,
        value,
        method: SumMethod::Digamma,
        tail_bound: None,
    })
}

/// Brute-force partial sum over the first `terms` summands, ascending, with
/// compensated accumulation. The reported tail bound n_cutoff²/terms comes
/// from the term-wise comparison 1/[n(1+n²/n_c²)] ≤ n_c²/n³.
pub fn lamb_sum_partial<T: Scalar>(
    n_cutoff: T,
    parity: Parity,
    terms: usize,
) -> Result<LambSum<T>> {
    require_positive_cutoff(n_cutoff)?;
    if terms == 0 {
        return Err(Error::Domain {
            quantity: "terms",
            message: "need at least one term".into(),
        });
    }
    let nc2 = n_cutoff * n_cutoff;
    let mut acc = KahanSum::<T>::new();
    for j in 0..terms {
        let m = match parity {
            Parity::Odd => T::of((2 * j + 1) as f64),
            Parity::All => T::of((j + 1) as f64),
        };
        acc.add(T::one() / (m * (T::one() + m * m / nc2)));
    }
    Ok(LambSum {
        n_cutoff,
        parity,
        value: acc.value(),
        method: SumMethod::PartialSum { terms },
        tail_bound: Some(nc2 / T::of(terms as f64)),
    })
}

/// Large-n_cutoff asymptote: (γ + ln 2)/2 + (ln n_c)/2 for the odd sum,
/// γ + ln n_c for the all-integers sum. Accurate for n_cutoff ≫ 1.
pub fn lamb_sum_asymptotic<T: Scalar>(n_cutoff: T, parity: Parity) -> Result<LambSum<T>> {
    require_positive_cutoff(n_cutoff)?;
    let half = T::of(0.5);
    let value = match parity {
        Parity::Odd => (euler_gamma::<T>() + T::LN_2()) * half + half * n_cutoff.ln(),
        Parity::All => euler_gamma::<T>() + n_cutoff.ln(),
    };
    Ok(LambSum {
        n_cutoff,
        parity,
        value,
        method: SumMethod::Asymptotic,
        tail_bound: None,
    })
}

/// Renormalized qubit gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenormalizedGap<T> {
    /// Bare gap Δ₀ \[rad/s\].
    pub bare_gap: T,
    /// Renormalized gap Δ = Δ₀·exp(−exponent) \[rad/s\].
    pub gap: T,
    /// 2·Σ(g_n/ω_n)², dimensionless.
    pub exponent: T,
    /// Set when the step-wise validity margin Δ < ω_n/2 was violated while
    /// folding in the modes from high to low frequency.
    pub validity_warning: bool,
}

/// Validity margin: the step-wise renormalization is trusted while the
/// current Δ stays below this fraction of the mode frequency being folded in.
const VALIDITY_MARGIN: f64 = 0.5;

/// Fold an explicit (g_n, ω_n) list into the renormalized gap
/// Δ = Δ₀·exp(−2Σ(g_n/ω_n)²). An empty list returns Δ = Δ₀. The list is
/// processed in descending ω to track the step-wise validity condition.
pub fn renormalized_gap<T: Scalar>(bare_gap: T, couplings: &[(T, T)]) -> Result<RenormalizedGap<T>> {
    if !(bare_gap > T::zero()) {
        return Err(Error::Domain {
            quantity: "bare gap",
            message: format!("must be > 0, got {bare_gap}"),
        });
    }
    for &(_, omega) in couplings {
        if !(omega > T::zero()) {
            return Err(Error::Domain {
                quantity: "mode frequency",
                message: format!("all omega_n must be > 0, got {omega}"),
            });
        }
    }
    let mut order: Vec<usize> = (0..couplings.len()).collect();
    order.sort_by(|&a, &b| {
        couplings[b]
            .1
            .partial_cmp(&couplings[a].1)
            .expect("mode frequencies are finite")
    });

    let two = T::of(2.0);
    let margin = T::of(VALIDITY_MARGIN);
    let mut acc = KahanSum::<T>::new();
    let mut warning = false;
    for idx in order {
        let (g, omega) = couplings[idx];
        let r = g / omega;
        acc.add(r * r);
        let delta_now = bare_gap * (-two * acc.value()).exp();
        if delta_now >= margin * omega {
            warning = true;
        }
    }
    let exponent = two * acc.value();
    Ok(RenormalizedGap {
        bare_gap,
        gap: bare_gap * (-exponent).exp(),
        exponent,
        validity_warning: warning,
    })
}

/// Factored convenience form Δ ≈ Δ₀·exp(−2(g₀/ω₀)²·S), pairing the
/// fundamental-mode coupling with a precomputed mode sum.
pub fn renormalized_gap_factored<T: Scalar>(
    bare_gap: T,
    g0: T,
    omega0: T,
    sum: &LambSum<T>,
) -> Result<RenormalizedGap<T>> {
    if !(bare_gap > T::zero()) || !(omega0 > T::zero()) {
        return Err(Error::Domain {
            quantity: "factored gap inputs",
            message: "bare gap and omega0 must be > 0".into(),
        });
    }
    let two = T::of(2.0);
    let r = g0 / omega0;
    let exponent = two * r * r * sum.value;
    let gap = bare_gap * (-exponent).exp();
    Ok(RenormalizedGap {
        bare_gap,
        gap,
        exponent,
        validity_warning: gap >= T::of(VALIDITY_MARGIN) * omega0,
    })
}
