//! Shared text utilities used by every descriptor: the descriptor contract,
//! proportion and number phrasing, list joining, trend detection and the
//! Beaufort wind lookup.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("proportion {0} is outside [0, 1]")]
    ProportionOutOfRange(f64),
    #[error("cannot join an empty list")]
    EmptyList,
    #[error("value {0} is not finite")]
    NonFinite(f64),
    #[error("trend detection needs at least 2 values, got {0}")]
    TooFewValues(usize),
    #[error("negative {what}: {value}")]
    Negative { what: &'static str, value: f64 },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
}

/// Anything that can summarise its own state as a single paragraph of text.
pub trait Descriptor: Send + Sync {
    fn describe(&self) -> String;
}

/// Descriptor used before a chart has a real implementation.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlaceholderDescriptor;

pub const PLACEHOLDER_TEXT: &str =
    "generate a text description, which will be passed to screen-reader based on state";

impl Descriptor for PlaceholderDescriptor {
    fn describe(&self) -> String {
        PLACEHOLDER_TEXT.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DescriptorConfig {
    /// Upper bound on how many entries are read out individually.
    pub max_read_entries: usize,
    /// Proportions within this distance of 0.5 are spoken as "approximately half".
    pub half_tolerance: f64,
    pub decimal_places: usize,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        Self {
            max_read_entries: 7,
            half_tolerance: 0.05,
            decimal_places: 2,
        }
    }
}

impl DescriptorConfig {
    pub fn validate(&self) -> Result<(), DomainError> {
        if self.max_read_entries < 1 {
            return Err(DomainError::InvalidConfig(
                "max_read_entries must be at least 1".into(),
            ));
        }
        if !(0.0..0.5).contains(&self.half_tolerance) {
            return Err(DomainError::InvalidConfig(format!(
                "half_tolerance must be in [0, 0.5), got {}",
                self.half_tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trend {
    Upward,
    Downward,
    Flat,
}

impl Trend {
    pub fn reversed(self) -> Self {
        match self {
            Trend::Upward => Trend::Downward,
            Trend::Downward => Trend::Upward,
            Trend::Flat => Trend::Flat,
        }
    }

    /// The word used in "trending ..." sentences.
    pub fn as_phrase(self) -> &'static str {
        match self {
            Trend::Upward => "upwards",
            Trend::Downward => "downwards",
            Trend::Flat => "sideways",
        }
    }
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_phrase())
    }
}

pub fn phrase_proportion(p: f64, cfg: &DescriptorConfig) -> Result<String, DomainError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DomainError::ProportionOutOfRange(p));
    }
    // Slack so that e.g. 0.55 sits inside a 0.05 band despite binary rounding.
    if (p - 0.5).abs() <= cfg.half_tolerance + 1e-12 {
        return Ok("approximately half".to_string());
    }
    Ok(format!(
        "{} percent",
        format_value(p * 100.0, cfg.decimal_places)?
    ))
}

/// Joins items as natural English: `a`, `a and b`, `a, b and c`.
pub fn join_list<S: AsRef<str>>(items: &[S]) -> Result<String, DomainError> {
    match items {
        [] => Err(DomainError::EmptyList),
        [only] => Ok(only.as_ref().to_string()),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(AsRef::as_ref).collect();
            Ok(format!("{} and {}", head.join(", "), last.as_ref()))
        }
    }
}

/// Fixed-point rendering with exactly `places` fractional digits.
///
/// Rounding is half away from zero, applied to the shortest decimal string
/// that round-trips to `v`, so `2.675` renders as `2.68`.
pub fn format_value(v: f64, places: usize) -> Result<String, DomainError> {
    if !v.is_finite() {
        return Err(DomainError::NonFinite(v));
    }
    // `Display` for f64 never uses exponent notation.
    let repr = format!("{}", v.abs());
    let (int_part, frac_part) = match repr.split_once('.') {
        Some((i, f)) => (i, f),
        None => (repr.as_str(), ""),
    };

    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(
            frac_part
                .bytes()
                .chain(std::iter::repeat(b'0'))
                .take(places),
        )
        .map(|b| b - b'0')
        .collect();
    let round_up = frac_part.as_bytes().get(places).is_some_and(|&d| d >= b'5');
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }

    let split = digits.len() - places;
    let mut out = String::with_capacity(digits.len() + 2);
    let is_zero = digits.iter().all(|&d| d == 0);
    if v.is_sign_negative() && !is_zero {
        out.push('-');
    }
    out.extend(digits[..split].iter().map(|d| char::from(b'0' + d)));
    if places > 0 {
        out.push('.');
        out.extend(digits[split..].iter().map(|d| char::from(b'0' + d)));
    }
    Ok(out)
}

/// Compares only the endpoints; interior points are ignored.
pub fn detect_trend(values: &[f64], flat_epsilon: f64) -> Result<Trend, DomainError> {
    if values.len() < 2 {
        return Err(DomainError::TooFewValues(values.len()));
    }
    if flat_epsilon < 0.0 {
        return Err(DomainError::Negative {
            what: "flat epsilon",
            value: flat_epsilon,
        });
    }
    let delta = values[values.len() - 1] - values[0];
    Ok(if delta < -flat_epsilon {
        Trend::Downward
    } else if delta > flat_epsilon {
        Trend::Upward
    } else {
        Trend::Flat
    })
}

/// Lower bound (m/s) of each Beaufort band with its name.
pub const BEAUFORT_BANDS: [(f64, &str); 13] = [
    (0.0, "calm"),
    (0.5, "light air"),
    (1.6, "light breeze"),
    (3.4, "gentle breeze"),
    (5.5, "moderate breeze"),
    (8.0, "fresh breeze"),
    (10.8, "strong breeze"),
    (13.9, "near gale"),
    (17.2, "gale"),
    (20.8, "strong gale"),
    (24.5, "storm"),
    (28.5, "violent storm"),
    (32.7, "hurricane force"),
];

/// Beaufort band number (0..=12) for a wind speed in meters per second.
pub fn beaufort_band(speed: f64) -> Result<usize, DomainError> {
    if speed.is_nan() {
        return Err(DomainError::NonFinite(speed));
    }
    if speed < 0.0 {
        return Err(DomainError::Negative {
            what: "wind speed",
            value: speed,
        });
    }
    Ok(BEAUFORT_BANDS
        .iter()
        .rposition(|&(lower, _)| speed >= lower)
        .unwrap_or(0))
}

pub fn beaufort_phrase(speed: f64) -> Result<&'static str, DomainError> {
    beaufort_band(speed).map(|band| BEAUFORT_BANDS[band].1)
}
