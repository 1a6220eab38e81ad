//! Zero-point fluctuations and qubit–mode coupling strengths.
//!
//! The chain is: zero-point amplitude of a mode, its zero-point current at
//! the qubit end, and the coupling rate
//!
//! `ħ·g_n = L_c · I_qubit · I_zp(n)`
//!
//! which grows as √ω below the cutoff and falls as 1/√ω above it. The exact
//! computations always use the boundary inductance L_c2; the labelled
//! `*_approx` operations reproduce the weak-coupling (L_c ≈ L_c2) closed
//! forms instead.

use crate::error::{Error, Result};
use crate::modes::Mode;
use crate::params::{CircuitParams, DerivedParams};
use crate::scalar::{flux_quantum, hbar, Scalar};

/// Where the qubit current used in a coupling evaluation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitCurrentSource {
    /// The order-of-magnitude persistent-current estimate Φ₀/(π(L_c+L_2)).
    PersistentEstimate,
    /// A caller-supplied value.
    Override,
}

/// Per-mode coupling data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingResult<T> {
    pub mode: Mode<T>,
    /// Zero-point amplitude of the mode variable u_c,rms \[Wb\].
    pub zero_point_amplitude: T,
    /// Zero-point current at x = 0 \[A\].
    pub zero_point_current: T,
    /// Qubit current entering ħg = L_c·I_qubit·I_zp \[A\].
    pub qubit_current: T,
    pub qubit_current_source: QubitCurrentSource,
    /// Coupling rate g \[rad/s\].
    pub coupling_rate: T,
    /// 1/√(1 + (ω/ω_cutoff)²), in (0, 1].
    pub suppression: T,
}

/// 1/√(1 + x²) with x = ω/ω_cutoff.
#[inline]
pub fn suppression_factor<T: Scalar>(x: T) -> T {
    (T::one() + x * x).sqrt().recip()
}

/// Zero-point (rms) amplitude √(ħ/(X·c·ω)) of a mode at angular frequency ω.
pub fn zero_point_amplitude<T: Scalar>(derived: &DerivedParams<T>, omega: T) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::Domain {
            quantity: "mode frequency",
            message: format!("omega must be > 0, got {omega}"),
        });
    }
    Ok((hbar::<T>() / (derived.total_capacitance * omega)).sqrt())
}

/// Zero-point current at x = 0 from the mode's own geometry:
/// u_rms · k · sin(kX) / l. On exact roots this equals the closed form of
/// [`zero_point_current_closed`] identically.
pub fn zero_point_current<T: Scalar>(derived: &DerivedParams<T>, mode: &Mode<T>) -> Result<T> {
    let u_rms = zero_point_amplitude(derived, mode.omega)?;
    // k/l = kX/(Xl)
    Ok(u_rms * mode.kx * mode.sin_kx() / derived.total_inductance)
}

/// Closed form of the zero-point current as a function of frequency alone:
/// (1/(Xl))·√(ħπZ₀/2)·√((ω/ω₀)/(1 + (ω/ω_cutoff)²)).
pub fn zero_point_current_closed<T: Scalar>(derived: &DerivedParams<T>, omega: T) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::Domain {
            quantity: "mode frequency",
            message: format!("omega must be > 0, got {omega}"),
        });
    }
    let two = T::of(2.0);
    let supp = if derived.cutoff_unbounded() {
        T::one()
    } else {
        let r = omega / derived.omega_cutoff;
        T::one() + r * r
    };
    let front = (hbar::<T>() * T::PI() * derived.impedance / two).sqrt() / derived.total_inductance;
    Ok(front * (omega / derived.omega0 / supp).sqrt())
}

/// Low-frequency expansion √(ħω/(Xl))·(1 − ½(ω/ω_cutoff)²).
pub fn zero_point_current_low_approx<T: Scalar>(derived: &DerivedParams<T>, omega: T) -> T {
    let half = T::of(0.5);
    let base = (hbar::<T>() * omega / derived.total_inductance).sqrt();
    if derived.cutoff_unbounded() {
        return base;
    }
    let r = omega / derived.omega_cutoff;
    base * (T::one() - half * r * r)
}

/// High-frequency limit (1/L_c2)·√(ħZ₀²/(Xl·ω)) ∝ 1/√ω.
pub fn zero_point_current_high_approx<T: Scalar>(derived: &DerivedParams<T>, omega: T) -> T {
    let z0 = derived.impedance;
    (hbar::<T>() * z0 * z0 / (derived.total_inductance * omega)).sqrt()
        / derived.boundary_inductance
}

/// Order-of-magnitude persistent current of the flux qubit,
/// I_qubit ~ Φ₀/(π(L_c + L_2)). Callers may override it with a measured
/// value anywhere a coupling is computed.
pub fn qubit_persistent_current<T: Scalar>(params: &CircuitParams<T>) -> Result<T> {
    let total = params.coupling_inductance + params.loop_inductance;
    if !(total > T::zero()) {
        return Err(Error::InvalidParameter {
            field: "L_2",
            message: "L_c + L_2 must be > 0".into(),
        });
    }
    Ok(flux_quantum::<T>() / (T::PI() * total))
}

/// Full coupling evaluation for one mode. `i_qubit_override`, when given,
/// replaces the persistent-current estimate verbatim.
pub fn coupling_strength<T: Scalar>(
    params: &CircuitParams<T>,
    derived: &DerivedParams<T>,
    mode: &Mode<T>,
    i_qubit_override: Option<T>,
) -> Result<CouplingResult<T>> {
    let (qubit_current, source) = match i_qubit_override {
        Some(i) => (i, QubitCurrentSource::Override),
        None => (
            qubit_persistent_current(params)?,
            QubitCurrentSource::PersistentEstimate,
        ),
    };
    let zero_point_amplitude = zero_point_amplitude(derived, mode.omega)?;
    let zero_point_current = zero_point_current(derived, mode)?;
    let coupling_rate =
        params.coupling_inductance * qubit_current * zero_point_current / hbar::<T>();
    let suppression = if derived.cutoff_unbounded() {
        T::one()
    } else {
        suppression_factor(mode.omega / derived.omega_cutoff)
    };
    Ok(CouplingResult {
        mode: *mode,
        zero_point_amplitude,
        zero_point_current,
        qubit_current,
        qubit_current_source: source,
        coupling_rate,
        suppression,
    })
}

/// Weak-coupling low-frequency form
/// g ≈ L_c·I_qubit·√(ħω/(Xl))·(1 − ½(ω/ω_cutoff)²)/ħ.
pub fn coupling_low_freq_approx<T: Scalar>(
    params: &CircuitParams<T>,
    derived: &DerivedParams<T>,
    mode: &Mode<T>,
) -> Result<T> {
    let i_q = qubit_persistent_current(params)?;
    Ok(params.coupling_inductance * i_q * zero_point_current_low_approx(derived, mode.omega)
        / hbar::<T>())
}

/// Weak-coupling high-frequency form g ≈ I_qubit·√(2ħZ₀ω₀/(πω))/ħ, in which
/// the coupling inductance has cancelled out (L_c ≈ L_c2).
pub fn coupling_high_freq_approx<T: Scalar>(
    params: &CircuitParams<T>,
    derived: &DerivedParams<T>,
    mode: &Mode<T>,
) -> Result<T> {
    let i_q = qubit_persistent_current(params)?;
    let two = T::of(2.0);
    Ok(i_q * (two * hbar::<T>() * derived.impedance * derived.omega0 / (T::PI() * mode.omega)).sqrt()
        / hbar::<T>())
}
