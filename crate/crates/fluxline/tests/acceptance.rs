//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured values (run with `--nocapture` to see them all).

mod common;

use std::time::Instant;

use common::{bisect_kx, reference_derived, reference_params};
use fluxline::coupling::{coupling_strength, suppression_factor};
use fluxline::ladder::{convergence_study, ground_state_solve};
use fluxline::lamb::{lamb_sum_odd, lamb_sum_partial, renormalized_gap, Parity};
use fluxline::modes::{freq_ratio_for_cutoff, mode_k_exact};
use fluxline::params::{cr_from_q, derive};
use fluxline::scalar::flux_quantum;

fn report(id: u32, label: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id} [{}] {label}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_frequency_pattern_deviation() {
    let t0 = Instant::now();
    let n_cutoff = 13.2_f64;
    let dev1 = freq_ratio_for_cutoff(n_cutoff, 1).corrected - 3.0;
    let dev2 = freq_ratio_for_cutoff(n_cutoff, 2).corrected - 5.0;

    // Exact transcendental deviations at the same cutoff, for reference.
    let ratio = std::f64::consts::PI * n_cutoff / 2.0;
    let k0 = bisect_kx(ratio, 0);
    let exact1 = bisect_kx(ratio, 1) / k0 - 3.0;
    let exact2 = bisect_kx(ratio, 2) / k0 - 5.0;

    let elapsed = t0.elapsed();
    let ok1 = (dev1 - 0.00221).abs() <= 0.1 * 0.00221;
    let ok2 = (dev2 - 0.0111).abs() <= 0.1 * 0.0111;
    let ok_time = elapsed.as_secs_f64() < 1.0;
    report(
        1,
        "frequency-pattern deviation at n_cutoff = 13.2",
        ok1 && ok2 && ok_time,
        &format!(
            "w1/w0-3 = {dev1:.5e} (target 2.21e-3 ±10%), w2/w0-5 = {dev2:.5e} \
             (target 1.11e-2 ±10%); exact-root deviations {exact1:.5e}, {exact2:.5e}; \
             {:.3} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_lamb_sum_closed_form_and_brute_force() {
    let t0 = Instant::now();
    let closed = lamb_sum_odd(100.0_f64).unwrap();
    let partial = lamb_sum_partial(100.0_f64, Parity::Odd, 10_000_000).unwrap();
    let tail = partial.tail_bound.unwrap();
    let diff = (closed.value - partial.value).abs();
    let elapsed = t0.elapsed();

    let ok_value = (closed.value - 2.94).abs() <= 0.03;
    let ok_tail = tail <= 1e-3 && diff <= tail;
    let ok_time = elapsed.as_secs_f64() < 10.0;
    report(
        2,
        "Lamb sum at n_cutoff = 100",
        ok_value && ok_tail && ok_time,
        &format!(
            "closed {:.6} (target 2.94 ±0.03); |closed − partial(1e7)| = {diff:.2e} \
             within tail bound {tail:.2e}; {:.3} s",
            closed.value,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_3_quality_factor_relation() {
    let p = reference_params();
    let t0 = Instant::now();
    let cr = cr_from_q(&p, 1e3).unwrap();
    let elapsed = t0.elapsed();
    let ratio = cr / (p.length * p.capacitance_per_length);
    let ok = (ratio - 0.01262).abs() <= 1e-5;
    let ok_time = elapsed.as_secs_f64() < 1e-3;
    report(
        3,
        "Q = 1e3 maps to C_R/Xc",
        ok && ok_time,
        &format!(
            "C_R/Xc = {ratio:.7} (target 0.01262 ±1e-5); {:.1} µs",
            elapsed.as_secs_f64() * 1e6
        ),
    );
}

#[test]
fn criterion_4_oracle_equivalence_and_convergence_order() {
    let t0 = Instant::now();
    let p = reference_params();
    let study = convergence_study(&p, &[500, 1000, 2000, 4000]).unwrap();
    let elapsed = t0.elapsed();

    let final_row = study.rows.last().unwrap();
    let worst_err = final_row
        .rel_errors
        .iter()
        .fold(0.0_f64, |a, e| a.max(e.abs()));
    let ok_match = worst_err <= 1e-3;
    let ok_orders = study
        .fitted_orders
        .iter()
        .all(|&p| (1.8..=2.2).contains(&p));
    let ok_time = elapsed.as_secs_f64() < 60.0;
    report(
        4,
        "ladder vs continuum, N = 4000",
        ok_match && ok_orders && ok_time,
        &format!(
            "worst |rel err| over lowest 5 modes = {worst_err:.2e} (≤ 1e-3); \
             fitted orders {:?} (within [1.8, 2.2]); {:.2} s",
            study
                .fitted_orders
                .iter()
                .map(|o| (o * 1e3).round() / 1e3)
                .collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_5_coupling_crossover() {
    let p = reference_params();
    let d = reference_derived();
    let mut low_ratio = Vec::new();
    let mut high_ratio = Vec::new();
    for n in 0..=150usize {
        let m = mode_k_exact(&d, n).unwrap();
        let g = coupling_strength(&p, &d, &m, None).unwrap().coupling_rate;
        if m.omega <= d.omega_cutoff / 5.0 {
            low_ratio.push(g / m.omega.sqrt());
        }
        if m.omega >= 5.0 * d.omega_cutoff {
            high_ratio.push(g * m.omega.sqrt());
        }
    }
    let spread = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().fold(0.0_f64, |a, x| a.max((x / mean - 1.0).abs()))
    };
    let low_spread = spread(&low_ratio);
    let high_spread = spread(&high_ratio);
    let s = suppression_factor(1.0_f64);
    let sup_err = (s - std::f64::consts::FRAC_1_SQRT_2).abs();

    let ok = low_spread <= 0.03 && high_spread <= 0.03 && sup_err <= 1e-12;
    report(
        5,
        "coupling crossover √ω → 1/√ω",
        ok,
        &format!(
            "g/√ω spread below ω_c/5: ±{:.2}% over {} modes; g·√ω spread above \
             5ω_c: ±{:.2}% over {} modes; |S(1) − 1/√2| = {sup_err:.1e}",
            low_spread * 100.0,
            low_ratio.len(),
            high_spread * 100.0,
            high_ratio.len()
        ),
    );
}

#[test]
fn criterion_6_high_frequency_coupling_independent_of_lc() {
    // Weak-coupling baseline L_2 = 100·L_c, doubling L_c with L_2 fixed.
    let mut base = reference_params();
    base.loop_inductance = 100.0 * base.coupling_inductance;
    let mut doubled = base;
    doubled.coupling_inductance = 2.0 * base.coupling_inductance;

    let d1 = derive(&base).unwrap();
    let d2 = derive(&doubled).unwrap();
    let n_high = (10.0 * d1.n_cutoff).round() as usize;

    let g_at = |params, derived: &fluxline::params::DerivedParams<f64>, n| {
        let m = mode_k_exact(derived, n).unwrap();
        coupling_strength(params, derived, &m, None)
            .unwrap()
            .coupling_rate
    };
    let g_high_1 = g_at(&base, &d1, n_high);
    let g_high_2 = g_at(&doubled, &d2, n_high);
    let g0_1 = g_at(&base, &d1, 0);
    let g0_2 = g_at(&doubled, &d2, 0);

    let high_change = (g_high_2 / g_high_1 - 1.0).abs();
    let low_ratio = g0_2 / g0_1;
    let ok = high_change <= 0.02 && (1.9..=2.1).contains(&low_ratio);
    report(
        6,
        "coupling inductance decouples from high-frequency modes",
        ok,
        &format!(
            "at n = 10·n_cutoff = {n_high}: g changes by {:.2}% (≤ 2%); \
             g0 scales by {low_ratio:.4} (target 2 ±5%)",
            high_change * 100.0
        ),
    );
}

#[test]
fn criterion_7_lamb_exponent_converges() {
    let p = reference_params();
    let d = reference_derived();
    let exponent_to = |n_max: usize| {
        let list: Vec<(f64, f64)> = (0..=n_max)
            .map(|n| {
                let m = mode_k_exact(&d, n).unwrap();
                let c = coupling_strength(&p, &d, &m, None).unwrap();
                (c.coupling_rate, m.omega)
            })
            .collect();
        renormalized_gap(d.omega0 * 0.05, &list).unwrap().exponent
    };
    let e1 = exponent_to((100.0 * d.n_cutoff) as usize);
    let e2 = exponent_to((200.0 * d.n_cutoff) as usize);
    let rel = ((e2 - e1) / e1).abs();
    let ok = rel < 1e-4;
    report(
        7,
        "Lamb exponent finiteness",
        ok,
        &format!(
            "exponent changes by {rel:.2e} (< 1e-4) when extending the mode \
             list from 100·n_cutoff to 200·n_cutoff (exponent ≈ {e1:.4})"
        ),
    );
}

#[test]
fn criterion_8_stationary_state_residuals() {
    let phi0 = flux_quantum::<f64>();
    let mut all_ok = true;
    let mut details = Vec::new();
    for frac in [0.4, 0.5, 0.6] {
        let mut p = reference_params();
        p.external_flux = frac * phi0;
        let d = derive(&p).unwrap();
        let gs = ground_state_solve(&p).unwrap();
        let divider = d.boundary_inductance / p.loop_inductance;
        let ratio_err = (gs.node_flux / gs.qubit_flux - divider).abs() / divider;
        let ok = gs.scaled_residual <= 1e-12 && ratio_err <= 1e-10 && gs.qubit_flux != 0.0;
        all_ok &= ok;
        details.push(format!(
            "Φ_ext = {frac}Φ₀: residual {:.1e}, flux-divider error {:.1e}, Φ_GS/Φ₀ = {:.4}",
            gs.scaled_residual,
            ratio_err,
            gs.qubit_flux / phi0
        ));
    }
    report(
        8,
        "stationary-state residuals",
        all_ok,
        &details.join("; "),
    );
}
