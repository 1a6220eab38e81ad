//! Circuit parameters, validation, and derived constants.
//!
//! Everything downstream works in SI base units. The configuration layer
//! (see [`crate::config`]) converts engineering-suffixed inputs on ingestion
//! so there is exactly one unit system past this boundary.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Raw physical inputs, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams<T> {
    /// Resonator length X \[m\].
    pub length: T,
    /// Inductance per unit length l \[H/m\].
    pub inductance_per_length: T,
    /// Capacitance per unit length c \[F/m\].
    pub capacitance_per_length: T,
    /// Coupling inductance L_c shared by qubit loop and resonator \[H\].
    pub coupling_inductance: T,
    /// Remaining qubit-loop inductance L_2 \[H\].
    pub loop_inductance: T,
    /// Junction capacitance C_q \[F\].
    pub junction_capacitance: T,
    /// Josephson energy E_J \[J\].
    pub josephson_energy: T,
    /// Termination capacitance C_R at x = X \[F\].
    pub termination_capacitance: T,
    /// External flux threading the qubit loop Φ_ext \[Wb\].
    pub external_flux: T,
}

/// Quantities derived once and consumed everywhere else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams<T> {
    /// Resonator length X \[m\] (carried through for wavenumber conversions).
    pub length: T,
    /// L_c2 = L_c·L_2/(L_c + L_2): the inductance the resonator boundary
    /// sees at x = 0 \[H\]. Zero in the L_c → 0 limit.
    pub boundary_inductance: T,
    /// Characteristic impedance Z₀ = √(l/c) \[Ω\].
    pub impedance: T,
    /// Fundamental angular frequency ω₀ = π/(2X√(cl)) \[rad/s\].
    pub omega0: T,
    /// Low-pass cutoff ω_cutoff = Z₀/L_c2 \[rad/s\]; +∞ when L_c2 = 0.
    pub omega_cutoff: T,
    /// n_cutoff = ω_cutoff/ω₀ = 2Xl/(π·L_c2); +∞ when L_c2 = 0.
    pub n_cutoff: T,
    /// Total resonator inductance X·l \[H\].
    pub total_inductance: T,
    /// Total resonator capacitance X·c \[F\].
    pub total_capacitance: T,
}

impl<T: Scalar> DerivedParams<T> {
    /// True in the degenerate L_c = 0 limit where the cutoff is unbounded.
    pub fn cutoff_unbounded(&self) -> bool {
        self.omega_cutoff.is_infinite()
    }

    /// Xl/L_c2, the dimensionless right-hand side of the boundary equation
    /// `kX·tan(kX) = Xl/L_c2`; +∞ when the cutoff is unbounded.
    pub fn boundary_ratio(&self) -> T {
        if self.boundary_inductance == T::zero() {
            T::infinity()
        } else {
            self.total_inductance / self.boundary_inductance
        }
    }

    /// √(cl) \[s/m\], the inverse phase velocity.
    pub fn sqrt_cl(&self) -> T {
        (self.total_inductance * self.total_capacitance).sqrt() / self.length
    }

    /// Inductance per unit length l \[H/m\].
    pub fn inductance_per_length(&self) -> T {
        self.total_inductance / self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// The parameter set cannot be used.
    Error,
    /// Usable, but a modeling assumption is strained.
    Advisory,
}

/// One validation finding. `field` uses the external configuration key names
/// (`X`, `l`, `c`, `L_c`, `L_2`, `C_q`, `E_J`, `C_R`, `Phi_ext`).
#[derive(Debug, Clone)]
pub struct Violation {
    pub field: &'static str,
    pub rule: String,
    pub severity: Severity,
}

/// Check every invariant; returns an empty list iff the parameters are fully
/// valid. L_c = 0 and C_R = 0 are legal degenerate inputs (unbounded cutoff
/// and infinite Q respectively), not violations.
pub fn validate<T: Scalar>(p: &CircuitParams<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut finite = |field: &'static str, v: T| {
        if !v.is_finite() {
            out.push(Violation {
                field,
                rule: format!("{field} must be finite"),
                severity: Severity::Error,
            });
            false
        } else {
            true
        }
    };

    let fin_x = finite("X", p.length);
    let fin_l = finite("l", p.inductance_per_length);
    let fin_c = finite("c", p.capacitance_per_length);
    let fin_lc = finite("L_c", p.coupling_inductance);
    let fin_l2 = finite("L_2", p.loop_inductance);
    let fin_cq = finite("C_q", p.junction_capacitance);
    let fin_ej = finite("E_J", p.josephson_energy);
    let fin_cr = finite("C_R", p.termination_capacitance);
    finite("Phi_ext", p.external_flux);

    let mut positive = |field: &'static str, v: T, ok: bool| {
        if ok && v <= T::zero() {
            out.push(Violation {
                field,
                rule: format!("{field} must be > 0"),
                severity: Severity::Error,
            });
        }
    };
    positive("X", p.length, fin_x);
    positive("l", p.inductance_per_length, fin_l);
    positive("c", p.capacitance_per_length, fin_c);
    positive("L_2", p.loop_inductance, fin_l2);

    let mut non_negative = |field: &'static str, v: T, ok: bool| {
        if ok && v < T::zero() {
            out.push(Violation {
                field,
                rule: format!("{field} must be >= 0"),
                severity: Severity::Error,
            });
        }
    };
    non_negative("L_c", p.coupling_inductance, fin_lc);
    non_negative("C_q", p.junction_capacitance, fin_cq);
    non_negative("E_J", p.josephson_energy, fin_ej);
    non_negative("C_R", p.termination_capacitance, fin_cr);

    if fin_lc && fin_l2 && p.coupling_inductance > p.loop_inductance && p.loop_inductance > T::zero()
    {
        out.push(Violation {
            field: "L_c",
            rule: "L_c exceeds L_2; the weak-coupling expressions assume L_c \u{226a} L_2".into(),
            severity: Severity::Advisory,
        });
    }

    out
}

/// Derive the invariant constants. Pure and deterministic; fails with the
/// first hard validation finding.
pub fn derive<T: Scalar>(p: &CircuitParams<T>) -> Result<DerivedParams<T>> {
    if let Some(v) = validate(p)
        .into_iter()
        .find(|v| v.severity == Severity::Error)
    {
        return Err(Error::InvalidParameter {
            field: v.field,
            message: v.rule,
        });
    }

    let x = p.length;
    let l = p.inductance_per_length;
    let c = p.capacitance_per_length;
    let lc = p.coupling_inductance;
    let l2 = p.loop_inductance;

    let boundary_inductance = if lc == T::zero() {
        T::zero()
    } else {
        lc * l2 / (lc + l2)
    };
    let impedance = (l / c).sqrt();
    let two = T::of(2.0);
    let omega0 = T::PI() / (two * x * (c * l).sqrt());
    let omega_cutoff = if boundary_inductance == T::zero() {
        T::infinity()
    } else {
        impedance / boundary_inductance
    };
    let n_cutoff = omega_cutoff / omega0;

    Ok(DerivedParams {
        length: x,
        boundary_inductance,
        impedance,
        omega0,
        omega_cutoff,
        n_cutoff,
        total_inductance: x * l,
        total_capacitance: x * c,
    })
}

/// Resonator quality factor from the termination capacitance:
/// Q = (Xc/C_R)²/(2π). Returns +∞ for C_R = 0, the lossless limit.
pub fn q_factor_from_cr<T: Scalar>(p: &CircuitParams<T>) -> Result<T> {
    if p.termination_capacitance < T::zero() {
        return Err(Error::InvalidParameter {
            field: "C_R",
            message: "C_R must be >= 0".into(),
        });
    }
    let xc = p.length * p.capacitance_per_length;
    if p.termination_capacitance == T::zero() {
        return Ok(T::infinity());
    }
    let ratio = xc / p.termination_capacitance;
    Ok(ratio * ratio / T::TAU())
}

/// Inverse of [`q_factor_from_cr`]: the C_R that realizes a target quality
/// factor, C_R = Xc/√(2πQ). Q = +∞ maps to C_R = 0.
pub fn cr_from_q<T: Scalar>(p: &CircuitParams<T>, q: T) -> Result<T> {
    if !(q > T::zero()) {
        return Err(Error::Domain {
            quantity: "quality factor",
            message: "Q must be > 0".into(),
        });
    }
    let xc = p.length * p.capacitance_per_length;
    if q.is_infinite() {
        return Ok(T::zero());
    }
    Ok(xc / (T::TAU() * q).sqrt())
}
