//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)] // each test target uses a different subset

use fluxline::params::{derive, CircuitParams, DerivedParams};

/// Reference device parameters (SI). E_J corresponds to a 500 nA critical
/// current; C_q is a typical junction capacitance. The loop is biased at
/// half a flux quantum.
pub fn reference_params() -> CircuitParams<f64> {
    CircuitParams {
        length: 10.75e-3,
        inductance_per_length: 437e-9,
        capacitance_per_length: 162e-12,
        coupling_inductance: 231e-12,
        loop_inductance: 823e-12,
        junction_capacitance: 5e-15,
        josephson_energy: 1.6455298923772664e-22,
        termination_capacitance: 3.46e-16,
        external_flux: 0.5 * 2.0678338484619293e-15,
    }
}

pub fn reference_derived() -> DerivedParams<f64> {
    derive(&reference_params()).unwrap()
}

/// A synthetic parameter set whose boundary ratio Xl/L_c2 equals `ratio`
/// exactly (X = 1 m, L_c2 = 1 H via L_c = L_2 = 2 H).
pub fn params_with_ratio(ratio: f64) -> CircuitParams<f64> {
    CircuitParams {
        length: 1.0,
        inductance_per_length: ratio,
        capacitance_per_length: 1e-9,
        coupling_inductance: 2.0,
        loop_inductance: 2.0,
        junction_capacitance: 0.0,
        josephson_energy: 0.0,
        termination_capacitance: 0.0,
        external_flux: 0.0,
    }
}

pub fn derived_with_ratio(ratio: f64) -> DerivedParams<f64> {
    derive(&params_with_ratio(ratio)).unwrap()
}

/// Independent root oracle: plain bisection on
/// f(θ) = (nπ + θ)·sin θ − ratio·cos θ over (0, π/2).
/// Shares no code with the library's safeguarded-Newton solver.
pub fn bisect_offset(ratio: f64, n: usize) -> f64 {
    let npi = n as f64 * std::f64::consts::PI;
    let f = |th: f64| (npi + th) * th.sin() - ratio * th.cos();
    let mut lo = 0.0_f64;
    let mut hi = std::f64::consts::FRAC_PI_2;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn bisect_kx(ratio: f64, n: usize) -> f64 {
    n as f64 * std::f64::consts::PI + bisect_offset(ratio, n)
}
