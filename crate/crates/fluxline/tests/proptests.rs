//! Property-based invariants over randomized inputs.

mod common;

use fluxline::coupling::suppression_factor;
use fluxline::digamma::complex_digamma;
use fluxline::modes::{boundary_residual, mode_k_exact};
use fluxline::params::{cr_from_q, derive, q_factor_from_cr, CircuitParams};
use num_complex::Complex;
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = CircuitParams<f64>> {
    (
        1e-4..1.0_f64,    // X
        1e-8..1e-5_f64,   // l
        1e-12..1e-9_f64,  // c
        1e-13..1e-8_f64,  // L_c
        1e-13..1e-8_f64,  // L_2
        0.0..1e-12_f64,   // C_q
        0.0..1e-20_f64,   // E_J
        0.0..1e-12_f64,   // C_R
    )
        .prop_map(|(x, l, c, lc, l2, cq, ej, cr)| CircuitParams {
            length: x,
            inductance_per_length: l,
            capacitance_per_length: c,
            coupling_inductance: lc,
            loop_inductance: l2,
            junction_capacitance: cq,
            josephson_energy: ej,
            termination_capacitance: cr,
            external_flux: 0.0,
        })
}

proptest! {
    #[test]
    fn derived_identities_hold_for_any_valid_device(p in arb_params()) {
        let d = derive(&p).unwrap();
        // Quarter-wave identity ω₀·2X√(cl) = π.
        let lhs = d.omega0 * 2.0 * d.length * d.sqrt_cl();
        prop_assert!((lhs / std::f64::consts::PI - 1.0).abs() < 1e-12);
        // Xl/L_c2 = (π/2)·n_cutoff.
        let ratio = d.total_inductance / d.boundary_inductance;
        let rhs = std::f64::consts::FRAC_PI_2 * d.n_cutoff;
        prop_assert!(((ratio - rhs) / rhs).abs() < 1e-12);
        // L_c2 below both constituents.
        prop_assert!(d.boundary_inductance < p.coupling_inductance.min(p.loop_inductance));
        prop_assert!(d.impedance > 0.0);
    }

    #[test]
    fn q_factor_round_trips(p in arb_params(), q in 1e-3..1e9_f64) {
        let cr = cr_from_q(&p, q).unwrap();
        let mut with_cr = p;
        with_cr.termination_capacitance = cr;
        let back = q_factor_from_cr(&with_cr).unwrap();
        prop_assert!(((back - q) / q).abs() < 1e-12);
    }

    #[test]
    fn digamma_conjugate_symmetry(re in 0.05..30.0_f64, im in -120.0..120.0_f64) {
        let z = Complex::new(re, im);
        let a = complex_digamma(z).unwrap();
        let b = complex_digamma(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn digamma_recurrence(re in 0.1..20.0_f64, im in -100.0..100.0_f64) {
        let z = Complex::new(re, im);
        let lhs = complex_digamma(z + Complex::new(1.0, 0.0)).unwrap();
        let rhs = complex_digamma(z).unwrap() + z.inv();
        prop_assert!((lhs - rhs).norm() <= 1e-13);
    }

    #[test]
    fn roots_stay_bracketed_with_small_residual(
        ratio in 1e-2..1e4_f64,
        n in 0usize..20_000,
    ) {
        let d = common::derived_with_ratio(ratio);
        let m = mode_k_exact(&d, n).unwrap();
        prop_assert!(m.kx_offset > 0.0 && m.kx_offset < std::f64::consts::FRAC_PI_2);
        prop_assert!(boundary_residual(&m, ratio) <= 1e-10 * ratio);
    }

    #[test]
    fn suppression_factor_is_a_decreasing_probability(x in 0.0..1e6_f64, y in 0.0..1e6_f64) {
        let sx = suppression_factor(x);
        prop_assert!(sx > 0.0 && sx <= 1.0);
        if x < y {
            prop_assert!(suppression_factor(y) <= sx);
        }
    }
}

/// The numerics compile and run for f32 as well; accuracy contracts are
/// stated for f64, so this only checks self-consistency at loose tolerance.
#[test]
fn core_is_generic_over_the_scalar_type() {
    let p = CircuitParams::<f32> {
        length: 10.75e-3,
        inductance_per_length: 437e-9,
        capacitance_per_length: 162e-12,
        coupling_inductance: 231e-12,
        loop_inductance: 823e-12,
        junction_capacitance: 5e-15,
        josephson_energy: 0.0,
        termination_capacitance: 0.0,
        external_flux: 0.0,
    };
    let d = derive(&p).unwrap();
    assert!((d.n_cutoff - 16.58).abs() < 0.01);
    let m = mode_k_exact(&d, 0).unwrap();
    assert!((m.kx - 1.5128).abs() < 1e-3);
    assert!((suppression_factor(1.0_f32) - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
}
