//! Engineering-unit parsing for configuration files and CLI flags.
//!
//! A quantity is a number optionally followed by a unit, with or without a
//! separating space ("231 pH", "231pH", "3.46e-4 pF", "0.5 Phi0"). A bare
//! number is taken in the SI base unit of the requested dimension.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Inductance,
    Capacitance,
    InductancePerLength,
    CapacitancePerLength,
    /// Joules, or a frequency unit interpreted as E = h·f.
    Energy,
    /// Webers, or multiples of the flux quantum via the unit `Phi0`.
    Flux,
    Current,
    /// Ordinary frequency in Hz; the unit `rad/s` divides by 2π so that
    /// callers multiplying by 2π recover the angular value exactly.
    Frequency,
}

const PLANCK: f64 = 6.62607015e-34;
const FLUX_QUANTUM: f64 = 2.0678338484619293e-15;

/// How a unit maps to the SI base. Decimal prefixes shift the exponent of
/// the literal before it is parsed, so `10.75 mm` yields exactly the same
/// f64 as the literal `10.75e-3`; physical conversion constants multiply.
#[derive(Debug, Clone, Copy)]
enum Factor {
    Pow10(i32),
    Mul(f64),
}

fn unit_factor(dim: Dimension, unit: &str) -> Option<Factor> {
    use Factor::{Mul, Pow10};
    let table: &[(&str, Factor)] = match dim {
        Dimension::Length => &[
            ("m", Pow10(0)),
            ("cm", Pow10(-2)),
            ("mm", Pow10(-3)),
            ("um", Pow10(-6)),
            ("µm", Pow10(-6)),
            ("nm", Pow10(-9)),
        ],
        Dimension::Inductance => &[
            ("H", Pow10(0)),
            ("mH", Pow10(-3)),
            ("uH", Pow10(-6)),
            ("µH", Pow10(-6)),
            ("nH", Pow10(-9)),
            ("pH", Pow10(-12)),
            ("fH", Pow10(-15)),
        ],
        Dimension::Capacitance => &[
            ("F", Pow10(0)),
            ("mF", Pow10(-3)),
            ("uF", Pow10(-6)),
            ("µF", Pow10(-6)),
            ("nF", Pow10(-9)),
            ("pF", Pow10(-12)),
            ("fF", Pow10(-15)),
            ("aF", Pow10(-18)),
        ],
        Dimension::InductancePerLength => &[
            ("H/m", Pow10(0)),
            ("mH/m", Pow10(-3)),
            ("uH/m", Pow10(-6)),
            ("µH/m", Pow10(-6)),
            ("nH/m", Pow10(-9)),
            ("pH/m", Pow10(-12)),
        ],
        Dimension::CapacitancePerLength => &[
            ("F/m", Pow10(0)),
            ("mF/m", Pow10(-3)),
            ("uF/m", Pow10(-6)),
            ("µF/m", Pow10(-6)),
            ("nF/m", Pow10(-9)),
            ("pF/m", Pow10(-12)),
            ("fF/m", Pow10(-15)),
        ],
        Dimension::Energy => &[
            ("J", Pow10(0)),
            ("mJ", Pow10(-3)),
            ("uJ", Pow10(-6)),
            ("nJ", Pow10(-9)),
            ("pJ", Pow10(-12)),
            ("fJ", Pow10(-15)),
            ("aJ", Pow10(-18)),
            ("zJ", Pow10(-21)),
            ("yJ", Pow10(-24)),
            ("Hz", Mul(PLANCK)),
            ("kHz", Mul(PLANCK * 1e3)),
            ("MHz", Mul(PLANCK * 1e6)),
            ("GHz", Mul(PLANCK * 1e9)),
            ("THz", Mul(PLANCK * 1e12)),
        ],
        Dimension::Flux => &[
            ("Wb", Pow10(0)),
            ("mWb", Pow10(-3)),
            ("uWb", Pow10(-6)),
            ("µWb", Pow10(-6)),
            ("nWb", Pow10(-9)),
            ("pWb", Pow10(-12)),
            ("fWb", Pow10(-15)),
            ("Phi0", Mul(FLUX_QUANTUM)),
        ],
        Dimension::Current => &[
            ("A", Pow10(0)),
            ("mA", Pow10(-3)),
            ("uA", Pow10(-6)),
            ("µA", Pow10(-6)),
            ("nA", Pow10(-9)),
            ("pA", Pow10(-12)),
        ],
        Dimension::Frequency => &[
            ("Hz", Pow10(0)),
            ("kHz", Pow10(3)),
            ("MHz", Pow10(6)),
            ("GHz", Pow10(9)),
            ("THz", Pow10(12)),
            ("rad/s", Mul(1.0 / std::f64::consts::TAU)),
        ],
    };
    table.iter().find(|(u, _)| *u == unit).map(|(_, f)| *f)
}

/// Split a numeric literal into mantissa and decimal exponent strings.
fn split_exponent(num: &str) -> (&str, i32) {
    match num.find(['e', 'E']) {
        Some(pos) => {
            let exp = num[pos + 1..].parse::<i32>().unwrap_or(0);
            (&num[..pos], exp)
        }
        None => (num, 0),
    }
}

/// Parse `text` as a quantity of the given dimension, returning the SI value.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Quantity {
            text: text.into(),
            message: "empty value".into(),
        });
    }

    // Longest numeric prefix that parses as f64; the rest is the unit.
    let mut split = None;
    for end in (1..=trimmed.len()).rev() {
        if !trimmed.is_char_boundary(end) {
            continue;
        }
        if let Ok(v) = trimmed[..end].parse::<f64>() {
            split = Some((v, &trimmed[..end], trimmed[end..].trim()));
            break;
        }
    }
    let (value, number_text, unit) = split.ok_or_else(|| Error::Quantity {
        text: text.into(),
        message: "no leading number".into(),
    })?;

    if unit.is_empty() {
        return Ok(value);
    }
    match unit_factor(dim, unit) {
        Some(Factor::Pow10(0)) => Ok(value),
        Some(Factor::Pow10(shift)) => {
            let (mantissa, exp) = split_exponent(number_text);
            let shifted = format!("{mantissa}e{}", exp + shift);
            shifted.parse::<f64>().map_err(|e| Error::Quantity {
                text: text.into(),
                message: e.to_string(),
            })
        }
        Some(Factor::Mul(f)) => Ok(value * f),
        None => Err(Error::Quantity {
            text: text.into(),
            message: format!("unknown unit `{unit}` for {dim:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_spaces() {
        assert_eq!(parse_quantity("10.75 mm", Dimension::Length).unwrap(), 10.75e-3);
        assert_eq!(parse_quantity("231pH", Dimension::Inductance).unwrap(), 231e-12);
        assert_eq!(
            parse_quantity("437 nH/m", Dimension::InductancePerLength).unwrap(),
            437e-9
        );
        assert_eq!(
            parse_quantity("3.46e-4 pF", Dimension::Capacitance).unwrap(),
            3.46e-16
        );
    }

    #[test]
    fn bare_numbers_are_si() {
        assert_eq!(parse_quantity("1.5e-12", Dimension::Capacitance).unwrap(), 1.5e-12);
    }

    #[test]
    fn flux_quantum_unit() {
        let v = parse_quantity("0.5 Phi0", Dimension::Flux).unwrap();
        assert_eq!(v, 0.5 * FLUX_QUANTUM);
    }

    #[test]
    fn energy_accepts_frequency_units() {
        let v = parse_quantity("248 GHz", Dimension::Energy).unwrap();
        assert!((v - 248e9 * PLANCK).abs() < 1e-36);
    }

    #[test]
    fn rad_per_s_round_trips_through_angular_conversion() {
        let hz = parse_quantity("5.5 rad/s", Dimension::Frequency).unwrap();
        assert!((hz * std::f64::consts::TAU - 5.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_units_and_garbage() {
        assert!(parse_quantity("10 parsec", Dimension::Length).is_err());
        assert!(parse_quantity("pF", Dimension::Capacitance).is_err());
        assert!(parse_quantity("", Dimension::Length).is_err());
    }
}
