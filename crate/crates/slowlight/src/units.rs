//! Quantities written as `"<number> <unit>"`, e.g. `"3.5 cm"`, `"6pi MHz"`,
//! `"1e12 cm^-3"`. The number may carry a `pi` (or `π`) factor.

use std::f64::consts::PI;
use std::fmt;

use serde::Deserialize;

/// How a frequency written in Hz maps to an angular rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngularConvention {
    /// `1 Hz` is read as `1 rad/s`.
    #[default]
    Angular,
    /// `1 Hz` is `2π rad/s`.
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Area,
    Density,
    Rate,
    Time,
    Velocity,
    Angle,
    Dimensionless,
}

impl Dimension {
    /// Bare numbers are only accepted for dimensionless fields and angles (radians).
    pub fn accepts_bare_number(self) -> bool {
        matches!(self, Dimension::Dimensionless | Dimension::Angle)
    }

    fn name(self) -> &'static str {
        match self {
            Dimension::Length => "a length (m, cm, mm, ...)",
            Dimension::Area => "an area (m^2, cm^2, mm^2, ...)",
            Dimension::Density => "a number density (m^-3, cm^-3)",
            Dimension::Rate => "a rate (rad/s, s^-1, Hz, kHz, MHz, GHz)",
            Dimension::Time => "a time (s, ms, us, ns)",
            Dimension::Velocity => "a velocity (m/s, km/s)",
            Dimension::Angle => "an angle (rad, deg)",
            Dimension::Dimensionless => "a plain number",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitError(String);

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UnitError {}

/// SI factor of `unit` for `dimension`, or `None` if the unit does not fit.
fn unit_factor(unit: &str, dimension: Dimension, convention: AngularConvention) -> Option<f64> {
    let hz = match convention {
        AngularConvention::Angular => 1.0,
        AngularConvention::Cyclic => 2.0 * PI,
    };
    let factor = match (dimension, unit) {
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "cm") => 1e-2,
        (Dimension::Length, "mm") => 1e-3,
        (Dimension::Length, "um" | "µm" | "μm") => 1e-6,
        (Dimension::Length, "nm") => 1e-9,
        (Dimension::Area, "m^2" | "m2") => 1.0,
        (Dimension::Area, "cm^2" | "cm2") => 1e-4,
        (Dimension::Area, "mm^2" | "mm2") => 1e-6,
        (Dimension::Area, "um^2" | "µm^2" | "μm^2") => 1e-12,
        (Dimension::Density, "m^-3" | "/m^3" | "1/m^3") => 1.0,
        (Dimension::Density, "cm^-3" | "/cm^3" | "1/cm^3") => 1e6,
        (Dimension::Density, "mm^-3" | "/mm^3" | "1/mm^3") => 1e9,
        (Dimension::Rate, "rad/s" | "s^-1" | "1/s" | "/s") => 1.0,
        (Dimension::Rate, "Hz") => hz,
        (Dimension::Rate, "kHz") => 1e3 * hz,
        (Dimension::Rate, "MHz") => 1e6 * hz,
        (Dimension::Rate, "GHz") => 1e9 * hz,
        (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "ms") => 1e-3,
        (Dimension::Time, "us" | "µs" | "μs") => 1e-6,
        (Dimension::Time, "ns") => 1e-9,
        (Dimension::Time, "ps") => 1e-12,
        (Dimension::Velocity, "m/s") => 1.0,
        (Dimension::Velocity, "km/s") => 1e3,
        (Dimension::Velocity, "cm/s") => 1e-2,
        (Dimension::Angle, "rad") => 1.0,
        (Dimension::Angle, "deg") => PI / 180.0,
        _ => return None,
    };
    Some(factor)
}

/// `"6pi"`, `"2.5"`, `"pi"`, `"1e6π"`.
fn parse_number(text: &str) -> Option<f64> {
    let text = text.trim();
    let (mantissa, pi) = match text.strip_suffix("pi").or_else(|| text.strip_suffix('π')) {
        Some(rest) => (rest.trim_end_matches('*').trim(), true),
        None => (text, false),
    };
    let value = if mantissa.is_empty() && pi {
        1.0
    } else {
        mantissa.parse::<f64>().ok()?
    };
    let value = if pi { value * PI } else { value };
    value.is_finite().then_some(value)
}

/// Parse `"<number> <unit>"` into SI (rates in rad/s).
pub fn parse_quantity(
    text: &str,
    dimension: Dimension,
    convention: AngularConvention,
) -> Result<f64, UnitError> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(_, c)| c.is_whitespace())
        .map(|(i, _)| i);
    let (number, unit) = match split {
        Some(i) => (&text[..i], text[i..].trim()),
        None => (text, ""),
    };
    let value = parse_number(number)
        .ok_or_else(|| UnitError(format!("`{text}`: cannot read the number `{number}`")))?;
    if unit.is_empty() {
        if dimension.accepts_bare_number() {
            return Ok(value);
        }
        return Err(UnitError(format!(
            "`{text}`: missing unit, expected {}",
            dimension.name()
        )));
    }
    let factor = unit_factor(unit, dimension, convention).ok_or_else(|| {
        UnitError(format!("`{text}`: unit `{unit}` is not {}", dimension.name()))
    })?;
    Ok(value * factor)
}

/// A scenario value: either a unit string or, where allowed, a bare number.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    pub fn resolve(&self, dimension: Dimension, convention: AngularConvention) -> Result<f64, UnitError> {
        match self {
            Quantity::Number(v) if dimension.accepts_bare_number() => Ok(*v),
            Quantity::Number(v) => Err(UnitError(format!(
                "bare number {v} is not allowed, expected {} with a unit",
                dimension.name()
            ))),
            Quantity::Text(text) => parse_quantity(text, dimension, convention),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rate(text: &str) -> f64 {
        parse_quantity(text, Dimension::Rate, AngularConvention::Angular).unwrap()
    }

    #[test]
    fn pi_factors() {
        assert_eq!(rate("6pi MHz"), 6.0 * PI * 1e6);
        assert_eq!(rate("30π MHz"), 30.0 * PI * 1e6);
        assert_eq!(rate("pi rad/s"), PI);
        assert_eq!(rate("2*pi kHz"), 2.0 * PI * 1e3);
    }

    #[test]
    fn conventions() {
        assert_eq!(rate("10 Hz"), 10.0);
        assert_eq!(rate("5 kHz"), 5000.0);
        let cyclic = parse_quantity("1 MHz", Dimension::Rate, AngularConvention::Cyclic).unwrap();
        assert_eq!(cyclic, 2.0 * PI * 1e6);
        let literal = parse_quantity("1e6 rad/s", Dimension::Rate, AngularConvention::Cyclic).unwrap();
        assert_eq!(literal, 1e6);
    }

    #[test]
    fn lengths_densities_and_times() {
        let c = AngularConvention::Angular;
        assert!((parse_quantity("3.5 cm", Dimension::Length, c).unwrap() - 0.035).abs() < 1e-15);
        assert_eq!(parse_quantity("1e12 cm^-3", Dimension::Density, c).unwrap(), 1e18);
        assert_eq!(parse_quantity("1 mm^2", Dimension::Area, c).unwrap(), 1e-6);
        assert!((parse_quantity("2 us", Dimension::Time, c).unwrap() - 2e-6).abs() < 1e-20);
        assert_eq!(parse_quantity("3100 m/s", Dimension::Velocity, c).unwrap(), 3100.0);
        assert_eq!(parse_quantity("90 deg", Dimension::Angle, c).unwrap(), PI / 2.0);
    }

    #[test]
    fn bare_numbers_only_where_dimensionless() {
        let c = AngularConvention::Angular;
        assert!(parse_quantity("10", Dimension::Rate, c).is_err());
        assert!(Quantity::Number(10.0).resolve(Dimension::Rate, c).is_err());
        assert_eq!(Quantity::Number(0.4).resolve(Dimension::Dimensionless, c).unwrap(), 0.4);
        assert_eq!(Quantity::Number(0.3).resolve(Dimension::Angle, c).unwrap(), 0.3);
    }

    #[test]
    fn wrong_or_unknown_units() {
        let c = AngularConvention::Angular;
        assert!(parse_quantity("3 cm", Dimension::Rate, c).is_err());
        assert!(parse_quantity("3 furlong", Dimension::Length, c).is_err());
        assert!(parse_quantity("abc Hz", Dimension::Rate, c).is_err());
        assert!(parse_quantity("inf Hz", Dimension::Rate, c).is_err());
    }
}
