//! Quantities written as "<number> <unit>", e.g. "100 pH" or "6.835 GHz".

use std::f64::consts::PI;
use std::fmt;

use fluxbec::constants::{ATOMIC_MASS_UNIT, BOHR_MAGNETON, FLUX_QUANTUM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Inductance,
    Capacitance,
    Current,
    Length,
    /// Angular frequency; Hz-family units are multiplied by 2π.
    Frequency,
    Time,
    Flux,
    Mass,
    MagneticMoment,
}

impl Dimension {
    /// SI unit written back into manifests.
    pub fn canonical(self) -> &'static str {
        match self {
            Dimension::Inductance => "H",
            Dimension::Capacitance => "F",
            Dimension::Current => "A",
            Dimension::Length => "m",
            Dimension::Frequency => "rad/s",
            Dimension::Time => "s",
            Dimension::Flux => "Wb",
            Dimension::Mass => "kg",
            Dimension::MagneticMoment => "J/T",
        }
    }

    fn units(self) -> &'static [(&'static str, f64)] {
        const TWO_PI: f64 = 2.0 * PI;
        match self {
            Dimension::Inductance => &[("H", 1.0), ("mH", 1e-3), ("uH", 1e-6), ("nH", 1e-9), ("pH", 1e-12)],
            Dimension::Capacitance => &[("F", 1.0), ("uF", 1e-6), ("nF", 1e-9), ("pF", 1e-12), ("fF", 1e-15)],
            Dimension::Current => &[("A", 1.0), ("mA", 1e-3), ("uA", 1e-6), ("nA", 1e-9)],
            Dimension::Length => &[("m", 1.0), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9)],
            Dimension::Frequency => &[
                ("rad/s", 1.0),
                ("krad/s", 1e3),
                ("Mrad/s", 1e6),
                ("Grad/s", 1e9),
                ("Hz", TWO_PI),
                ("kHz", TWO_PI * 1e3),
                ("MHz", TWO_PI * 1e6),
                ("GHz", TWO_PI * 1e9),
            ],
            Dimension::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9), ("ps", 1e-12)],
            Dimension::Flux => &[("Wb", 1.0), ("Phi0", FLUX_QUANTUM)],
            Dimension::Mass => &[("kg", 1.0), ("u", ATOMIC_MASS_UNIT)],
            Dimension::MagneticMoment => &[("J/T", 1.0), ("muB", BOHR_MAGNETON)],
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Inductance => "inductance",
            Dimension::Capacitance => "capacitance",
            Dimension::Current => "current",
            Dimension::Length => "length",
            Dimension::Frequency => "frequency",
            Dimension::Time => "time",
            Dimension::Flux => "flux",
            Dimension::Mass => "mass",
            Dimension::MagneticMoment => "magnetic moment",
        };
        f.write_str(name)
    }
}

/// Parses `text` as a quantity of dimension `dim`, returning SI (rad/s for frequencies).
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let text = text.trim().replace('\u{2212}', "-").replace(['µ', 'μ'], "u");
    let split = text
        .char_indices()
        .find(|&(i, c)| c.is_ascii_alphabetic() && !is_exponent(&text, i))
        .map(|(i, _)| i)
        .ok_or_else(|| {
            let units: Vec<&str> = dim.units().iter().map(|u| u.0).collect();
            format!("missing unit in \"{text}\"; expected a {dim} in one of {}", units.join(", "))
        })?;
    let (number, unit) = text.split_at(split);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("cannot read a number from \"{}\"", number.trim()))?;
    let unit = unit.trim();
    let scale = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|u| u.1)
        .ok_or_else(|| {
            let units: Vec<&str> = dim.units().iter().map(|u| u.0).collect();
            format!("unit \"{unit}\" does not measure {dim}; expected one of {}", units.join(", "))
        })?;
    if !value.is_finite() {
        return Err(format!("value {value} is not finite"));
    }
    Ok(value * scale)
}

// "1e-3 A": the 'e' belongs to the number when digits surround it.
fn is_exponent(text: &str, i: usize) -> bool {
    let b = text.as_bytes();
    if b[i] != b'e' && b[i] != b'E' || i == 0 {
        return false;
    }
    let before = b[i - 1].is_ascii_digit() || b[i - 1] == b'.';
    let after = b.get(i + 1).is_some_and(|c| c.is_ascii_digit() || *c == b'-' || *c == b'+');
    before && after
}

/// Canonical form that parses back to exactly `value`.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    format!("{value:e} {}", dim.canonical())
}
