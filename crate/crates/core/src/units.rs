//! Unit-suffixed quantities as typed on the command line.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::OpticsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    M,
    Cm,
    Mm,
    In,
    Ft,
}

impl LengthUnit {
    pub fn meters(self) -> f64 {
        match self {
            LengthUnit::M => 1.0,
            LengthUnit::Cm => 0.01,
            LengthUnit::Mm => 0.001,
            LengthUnit::In => 0.0254,
            LengthUnit::Ft => 0.3048,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            LengthUnit::M => "m",
            LengthUnit::Cm => "cm",
            LengthUnit::Mm => "mm",
            LengthUnit::In => "in",
            LengthUnit::Ft => "ft",
        }
    }

    fn parse_suffix(s: &str) -> Option<Self> {
        Some(match s {
            "m" => LengthUnit::M,
            "cm" => LengthUnit::Cm,
            "mm" => LengthUnit::Mm,
            "in" | "inch" | "\"" => LengthUnit::In,
            "ft" | "feet" | "'" => LengthUnit::Ft,
            _ => return None,
        })
    }
}

/// A length remembered in the unit it was given in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Length {
    pub value: f64,
    pub unit: LengthUnit,
}

impl Length {
    pub fn new(value: f64, unit: LengthUnit) -> Self {
        Length { value, unit }
    }

    pub fn meters(m: f64) -> Self {
        Length::new(m, LengthUnit::M)
    }

    pub fn to_meters(self) -> f64 {
        self.value * self.unit.meters()
    }

    /// Expresses `meters` back in this length's unit.
    pub fn from_meters_in(meters: f64, unit: LengthUnit) -> Self {
        Length::new(meters / unit.meters(), unit)
    }
}

fn split_number(s: &str) -> (&str, &str) {
    let idx = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '-'
                || c == '+'
                || ((c == 'e' || c == 'E') && is_exponent(s, i)))
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    (&s[..idx], s[idx..].trim())
}

fn is_exponent(s: &str, i: usize) -> bool {
    let rest = &s[i + 1..];
    let rest = rest.strip_prefix(['-', '+']).unwrap_or(rest);
    i > 0 && rest.starts_with(|c: char| c.is_ascii_digit())
}

impl FromStr for Length {
    type Err = OpticsError;

    /// Accepts `25cm`, `10ft`, `1.5in`, `0.3m`, `12mm`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, suffix) = split_number(s);
        let value: f64 = num
            .parse()
            .map_err(|_| OpticsError::InvalidInput(format!("bad length `{s}`")))?;
        let unit = LengthUnit::parse_suffix(suffix).ok_or_else(|| {
            OpticsError::InvalidInput(format!(
                "length `{s}` needs a unit suffix (m, cm, mm, in, ft)"
            ))
        })?;
        if !value.is_finite() {
            return Err(OpticsError::InvalidInput(format!("bad length `{s}`")));
        }
        Ok(Length { value, unit })
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, self.unit.suffix())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    Deg,
    Rad,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Angle {
    pub value: f64,
    pub unit: AngleUnit,
}

impl Angle {
    pub fn degrees(value: f64) -> Self {
        Angle {
            value,
            unit: AngleUnit::Deg,
        }
    }

    pub fn to_radians(self) -> f64 {
        match self.unit {
            AngleUnit::Deg => self.value.to_radians(),
            AngleUnit::Rad => self.value,
        }
    }
}

impl FromStr for Angle {
    type Err = OpticsError;

    /// Accepts `35deg`, `35°`, `0.6rad`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, suffix) = split_number(s);
        let value: f64 = num
            .parse()
            .map_err(|_| OpticsError::InvalidInput(format!("bad angle `{s}`")))?;
        let unit = match suffix {
            "deg" | "°" => AngleUnit::Deg,
            "rad" => AngleUnit::Rad,
            _ => {
                return Err(OpticsError::InvalidInput(format!(
                    "angle `{s}` needs a unit suffix (deg, rad)"
                )))
            }
        };
        Ok(Angle { value, unit })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.unit {
            AngleUnit::Deg => "deg",
            AngleUnit::Rad => "rad",
        };
        write!(f, "{}{}", self.value, suffix)
    }
}
