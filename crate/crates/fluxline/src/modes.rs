//! Normal modes of the resonator: exact transcendental roots, asymptotic
//! approximations, frequency-pattern corrections, and current profiles.
//!
//! The boundary condition at x = 0 quantizes the wavenumber through
//!
//! `kX · tan(kX) = Xl/L_c2`            (qubit-terminated branch)
//! `kX · tan(kX) = Xc/C_R`             (capacitor-terminated branch)
//!
//! Each branch index n owns exactly one root in the open interval
//! (nπ, nπ + π/2). All root work happens in the offset θ = kX − nπ, where
//! tan(kX) = tan(θ) exactly; this sidesteps both the tangent pole and the
//! precision loss of evaluating trigonometry at kX ≫ 1.

use crate::coupling::suppression_factor;
use crate::error::{Error, Result};
use crate::params::{derive, CircuitParams, DerivedParams};
use crate::roots::newton_bisect;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    /// Grounded through the qubit's L_c2 at x = 0.
    QubitTerminated,
    /// Bare line with a C_R termination (no qubit).
    CrTerminated,
}

/// One normal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode<T> {
    /// Branch index n ≥ 0.
    pub index: usize,
    /// kX, dimensionless.
    pub kx: T,
    /// θ = kX − nπ ∈ (0, π/2]. Kept separately because it carries the full
    /// floating-point resolution of the root at large n.
    pub kx_offset: T,
    /// Wavenumber k \[1/m\].
    pub wavenumber: T,
    /// Angular frequency ω = k/√(cl) \[rad/s\].
    pub omega: T,
    pub branch: BranchKind,
}

impl<T: Scalar> Mode<T> {
    /// |sin(kX)|, evaluated from the offset (exact for any branch index).
    /// The absolute value matters only for the labelled approximations,
    /// whose offsets can leave (0, π/2) outside their regime.
    pub fn sin_kx(&self) -> T {
        self.kx_offset.sin().abs()
    }
}

fn npi<T: Scalar>(index: usize) -> T {
    T::of(index as f64) * T::PI()
}

fn mode_from_offset<T: Scalar>(
    derived: &DerivedParams<T>,
    index: usize,
    offset: T,
    branch: BranchKind,
) -> Mode<T> {
    let kx = npi::<T>(index) + offset;
    let two = T::of(2.0);
    Mode {
        index,
        kx,
        kx_offset: offset,
        wavenumber: kx / derived.length,
        omega: kx * two * derived.omega0 / T::PI(),
        branch,
    }
}

/// Root of `(nπ + θ)·sin θ = ratio·cos θ` on (0, π/2).
///
/// One sign change is guaranteed: the left side rises from below while the
/// right side falls to zero. `ratio = +∞` returns the pole limit θ = π/2.
fn branch_offset<T: Scalar>(ratio: T, index: usize) -> Result<T> {
    if ratio.is_infinite() {
        return Ok(T::FRAC_PI_2());
    }
    if !(ratio > T::zero()) {
        return Err(Error::Domain {
            quantity: "boundary ratio",
            message: format!("expected a positive ratio, got {ratio}"),
        });
    }
    let base = npi::<T>(index);
    let f = |theta: T| (base + theta) * theta.sin() - ratio * theta.cos();
    let df = |theta: T| (T::one() + ratio) * theta.sin() + (base + theta) * theta.cos();

    let margin = T::of(1e-12) * T::PI();
    let mut lo = margin;
    let mut hi = T::FRAC_PI_2() - margin;
    // For extreme ratios the root can sit inside the guard margins; the
    // endpoint values f(0) = −ratio and f(π/2) = nπ + π/2 still bracket it.
    if f(lo) >= T::zero() {
        lo = T::zero();
    }
    if f(hi) <= T::zero() {
        hi = T::FRAC_PI_2();
    }
    newton_bisect(lo, hi, f, df, 200)
}

/// Exact mode of the qubit-terminated resonator.
pub fn mode_k_exact<T: Scalar>(derived: &DerivedParams<T>, index: usize) -> Result<Mode<T>> {
    let offset = branch_offset(derived.boundary_ratio(), index)?;
    Ok(mode_from_offset(derived, index, offset, BranchKind::QubitTerminated))
}

/// Exact mode of the bare resonator terminated by C_R (no qubit). The
/// boundary equation has the same form with Xc/C_R on the right-hand side;
/// C_R = 0 is the ideal open end, kX = nπ + π/2 exactly.
pub fn mode_k_exact_cr<T: Scalar>(params: &CircuitParams<T>, index: usize) -> Result<Mode<T>> {
    let derived = derive(params)?;
    let ratio = if params.termination_capacitance == T::zero() {
        T::infinity()
    } else {
        derived.total_capacitance / params.termination_capacitance
    };
    let offset = branch_offset(ratio, index)?;
    Ok(mode_from_offset(&derived, index, offset, BranchKind::CrTerminated))
}

/// Residual of the boundary equation, |kX·tan(kX) − ratio|, evaluated via
/// the offset so it is meaningful at any branch index. Zero by convention
/// for the unbounded-ratio limit.
pub fn boundary_residual<T: Scalar>(mode: &Mode<T>, ratio: T) -> T {
    if ratio.is_infinite() {
        return T::zero();
    }
    (mode.kx * mode.kx_offset.tan() - ratio).abs()
}

/// First-order low-frequency approximation kX ≈ (nπ + π/2)(1 − L_c2/(Xl)).
/// Intended for ω ≪ ω_cutoff; see [`low_frequency_band`].
pub fn mode_k_low_approx<T: Scalar>(derived: &DerivedParams<T>, index: usize) -> Mode<T> {
    let eps = derived.boundary_inductance / derived.total_inductance;
    let half_pi = T::FRAC_PI_2();
    let kx = (npi::<T>(index) + half_pi) * (T::one() - eps);
    mode_from_offset(derived, index, kx - npi::<T>(index), BranchKind::QubitTerminated)
}

/// Third-order low-frequency approximation
/// kX ≈ (nπ + π/2)·[1 − 1/(1+R) + (1/3)·R/(1+R)⁴·(nπ + π/2)²], R = Xl/L_c2.
/// Strictly more accurate than the first-order form at small n.
pub fn mode_k_low_third_order<T: Scalar>(derived: &DerivedParams<T>, index: usize) -> Mode<T> {
    let half_pi = T::FRAC_PI_2();
    let a = npi::<T>(index) + half_pi;
    let r = derived.boundary_ratio();
    let kx = if r.is_infinite() {
        a
    } else {
        let one = T::one();
        let three = T::of(3.0);
        let onepr = one + r;
        a * (one - one / onepr + r / (onepr * onepr * onepr * onepr) * a * a / three)
    };
    mode_from_offset(derived, index, kx - npi::<T>(index), BranchKind::QubitTerminated)
}

/// High-frequency approximation kX ≈ nπ + (Xl/L_c2)/(nπ), valid for
/// ω ≫ ω_cutoff. Requires n ≥ 1.
pub fn mode_k_high_approx<T: Scalar>(derived: &DerivedParams<T>, index: usize) -> Result<Mode<T>> {
    if index == 0 {
        return Err(Error::Domain {
            quantity: "branch index",
            message: "the high-frequency form diverges at n = 0".into(),
        });
    }
    let base = npi::<T>(index);
    let r = derived.boundary_ratio();
    let offset = if r.is_infinite() {
        T::FRAC_PI_2()
    } else {
        r / base
    };
    Ok(mode_from_offset(derived, index, offset, BranchKind::QubitTerminated))
}

/// All modes with ω ∈ [omega_lo, omega_hi], found by binary search over the
/// branch index (one root per branch, strictly increasing in n).
pub fn modes_in_frequency_window<T: Scalar>(
    derived: &DerivedParams<T>,
    omega_lo: T,
    omega_hi: T,
) -> Result<Vec<Mode<T>>> {
    if !(omega_lo <= omega_hi) {
        return Err(Error::Domain {
            quantity: "frequency window",
            message: "omega_lo must not exceed omega_hi".into(),
        });
    }
    // ω_n < (2n+2)·ω₀ bounds the search range from above.
    let two = T::of(2.0);
    let upper_guess = (omega_hi / (two * derived.omega0))
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX / 2)
        .saturating_add(1);
    // First branch with ω ≥ omega_lo.
    let mut lo = 0usize;
    let mut hi = upper_guess;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if mode_k_exact(derived, mid)?.omega < omega_lo {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let mut out = Vec::new();
    let mut n = lo;
    loop {
        let m = mode_k_exact(derived, n)?;
        if m.omega > omega_hi {
            break;
        }
        out.push(m);
        n += 1;
    }
    Ok(out)
}

/// Largest branch index for which the low-frequency forms are in their
/// stated regime (ω_n below ~ω_cutoff/4, i.e. n ≲ n_cutoff/4).
pub fn low_frequency_band<T: Scalar>(derived: &DerivedParams<T>) -> Option<usize> {
    if derived.cutoff_unbounded() {
        return None;
    }
    let four = T::of(4.0);
    (derived.n_cutoff / four).to_usize()
}

/// Ideal and corrected frequency ratio ω_n/ω₀ for the qubit-terminated
/// branch. The ideal pattern is (2n+1); the correction multiplies it by
/// 1 + 8(n² + n)/(3π·n_cutoff³).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqRatio<T> {
    pub ideal: T,
    pub corrected: T,
}

/// Frequency-pattern correction expressed through the small boundary
/// parameter ε (either L_c2/(Xl) or C_R/(Xc)):
/// ω_n/ω₀ ≈ (2n+1)·[1 + (π²/3)·ε³·(n² + n)].
pub fn freq_ratio_for_small_parameter<T: Scalar>(eps: T, index: usize) -> FreqRatio<T> {
    let n = T::of(index as f64);
    let one = T::one();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let ideal = two * n + one;
    let pi2 = T::PI() * T::PI();
    let corrected = ideal * (one + pi2 / three * eps * eps * eps * (n * n + n));
    FreqRatio { ideal, corrected }
}

/// Frequency-pattern correction in terms of n_cutoff:
/// ω_n/ω₀ ≈ (2n+1)·[1 + 8(n² + n)/(3π·n_cutoff³)].
pub fn freq_ratio_for_cutoff<T: Scalar>(n_cutoff: T, index: usize) -> FreqRatio<T> {
    if n_cutoff.is_infinite() {
        let ideal = T::of(2.0) * T::of(index as f64) + T::one();
        return FreqRatio {
            ideal,
            corrected: ideal,
        };
    }
    // ε = L_c2/(Xl) = 2/(π·n_cutoff)
    let eps = T::of(2.0) / (T::PI() * n_cutoff);
    freq_ratio_for_small_parameter(eps, index)
}

/// As [`freq_ratio_for_cutoff`], reading n_cutoff from the derived set.
pub fn freq_ratio<T: Scalar>(derived: &DerivedParams<T>, index: usize) -> FreqRatio<T> {
    freq_ratio_for_cutoff(derived.n_cutoff, index)
}

/// Sampled electric-current profile I(x) = (u_c·k/l)·sin(k[X − x]) of one
/// mode, normalized to unit peak flux amplitude (u_c = 1). The peak values
/// carry no physical meaning; physical normalization lives in the coupling
/// module.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile<T> {
    pub mode: Mode<T>,
    /// Flux amplitude u_c used for the samples \[Wb\].
    pub amplitude: T,
    /// Sample positions, uniform on [0, X] inclusive \[m\].
    pub positions: Vec<T>,
    /// Current samples \[A\] (for the unit-amplitude normalization).
    pub currents: Vec<T>,
}

impl<T: Scalar> ModeProfile<T> {
    /// I(0) relative to the envelope amplitude u_c·k/l; equals sin(kX).
    pub fn boundary_current_ratio(&self) -> T {
        self.mode.sin_kx()
    }
}

/// Sample the current profile of `mode` on `grid_points` uniform positions.
/// The x = X endpoint is exactly zero by construction of the sampling.
pub fn current_profile<T: Scalar>(
    derived: &DerivedParams<T>,
    mode: &Mode<T>,
    grid_points: usize,
) -> Result<ModeProfile<T>> {
    if grid_points < 2 {
        return Err(Error::Domain {
            quantity: "grid_points",
            message: "need at least two samples".into(),
        });
    }
    let x_len = derived.length;
    let l = derived.inductance_per_length();
    let amplitude = T::one();
    let k = mode.wavenumber;
    let scale = amplitude * k / l;
    let denom = T::of((grid_points - 1) as f64);
    let mut positions = Vec::with_capacity(grid_points);
    let mut currents = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let x = x_len * T::of(i as f64) / denom;
        positions.push(x);
        currents.push(scale * (k * (x_len - x)).sin());
    }
    Ok(ModeProfile {
        mode: *mode,
        amplitude,
        positions,
        currents,
    })
}

/// The suppression identity on exact roots: sin(kX) equals
/// (ω_cutoff/ω)/√(1 + (ω_cutoff/ω)²) = 1/√(1 + (ω/ω_cutoff)²).
pub fn predicted_boundary_current_ratio<T: Scalar>(
    derived: &DerivedParams<T>,
    omega: T,
) -> T {
    if derived.cutoff_unbounded() {
        return T::one();
    }
    suppression_factor(omega / derived.omega_cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive;

    fn reference() -> DerivedParams<f64> {
        derive(&CircuitParams {
            length: 10.75e-3,
            inductance_per_length: 437e-9,
            capacitance_per_length: 162e-12,
            coupling_inductance: 231e-12,
            loop_inductance: 823e-12,
            junction_capacitance: 5e-15,
            josephson_energy: 1.6455298923772664e-22,
            termination_capacitance: 3.46e-16,
            external_flux: 0.5 * crate::scalar::flux_quantum::<f64>(),
        })
        .unwrap()
    }

    #[test]
    fn unbounded_ratio_hits_the_pole_exactly() {
        let mut d = reference();
        d.boundary_inductance = 0.0;
        d.omega_cutoff = f64::INFINITY;
        d.n_cutoff = f64::INFINITY;
        for n in [0usize, 3, 1000] {
            let m = mode_k_exact(&d, n).unwrap();
            assert_eq!(m.kx_offset, std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn low_first_order_limits() {
        let mut d = reference();
        d.boundary_inductance = 0.0;
        d.omega_cutoff = f64::INFINITY;
        d.n_cutoff = f64::INFINITY;
        let m = mode_k_low_approx(&d, 2);
        assert_eq!(m.kx, 2.0 * std::f64::consts::PI + std::f64::consts::FRAC_PI_2);
        let t = mode_k_low_third_order(&d, 2);
        assert_eq!(t.kx, m.kx);
    }

    #[test]
    fn high_approx_needs_positive_index() {
        let d = reference();
        assert!(mode_k_high_approx(&d, 0).is_err());
        let m = mode_k_high_approx(&d, 100).unwrap();
        let r = d.boundary_ratio();
        assert!((m.kx - (100.0 * std::f64::consts::PI + r / (100.0 * std::f64::consts::PI))).abs() < 1e-12);
    }

    #[test]
    fn freq_ratio_trivial_cases() {
        let fr = freq_ratio_for_cutoff(13.2, 0);
        assert_eq!(fr.ideal, 1.0);
        assert_eq!(fr.corrected, 1.0); // n² + n vanishes at n = 0
        let fr1 = freq_ratio_for_cutoff(f64::INFINITY, 4);
        assert_eq!(fr1.ideal, 9.0);
        assert_eq!(fr1.corrected, 9.0);
    }

    #[test]
    fn profile_boundary_conditions() {
        let d = reference();
        let m = mode_k_exact(&d, 0).unwrap();
        let p = current_profile(&d, &m, 301).unwrap();
        assert_eq!(*p.currents.last().unwrap(), 0.0);
        // Fundamental: |I| is largest at x = 0 (kX < π/2, monotone sine).
        let max = p.currents.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
        assert_eq!(max, p.currents[0].abs());
        assert!(current_profile(&d, &m, 1).is_err());
    }

    #[test]
    fn profile_ratio_decreases_with_mode_index() {
        let d = reference();
        let mut prev = f64::INFINITY;
        for n in [0usize, 5, 20, 80, 320] {
            let m = mode_k_exact(&d, n).unwrap();
            let ratio = m.sin_kx();
            assert!(ratio < prev, "ratio not decreasing at n={n}");
            prev = ratio;
        }
    }

    #[test]
    fn low_band_is_quarter_of_cutoff() {
        let d = reference(); // n_cutoff ≈ 16.58
        assert_eq!(low_frequency_band(&d), Some(4));
    }

    #[test]
    fn frequency_window_query_agrees_with_index_scan() {
        let d = reference();
        let lo = 4.0 * d.omega0;
        let hi = 21.0 * d.omega0;
        let windowed = modes_in_frequency_window(&d, lo, hi).unwrap();
        let scanned: Vec<usize> = (0..20)
            .filter(|&n| {
                let w = mode_k_exact(&d, n).unwrap().omega;
                w >= lo && w <= hi
            })
            .collect();
        assert_eq!(
            windowed.iter().map(|m| m.index).collect::<Vec<_>>(),
            scanned
        );
        assert!(!windowed.is_empty());
        // Empty and inverted windows behave.
        assert!(modes_in_frequency_window(&d, 1.2 * d.omega0, 1.3 * d.omega0)
            .unwrap()
            .is_empty());
        assert!(modes_in_frequency_window(&d, hi, lo).is_err());
    }
}
