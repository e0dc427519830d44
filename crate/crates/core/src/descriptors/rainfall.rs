use chrono::DateTime;
use log::warn;
use serde::{Deserialize, Serialize};

use crate::text::{format_value, Descriptor, DomainError};

/// Which millimeter band table to use when naming rainfall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RainBands {
    /// The original first-match table. Values in the gaps (4-5, 6-8, 20-30,
    /// above 700) are read as a bare amount.
    #[default]
    Original,
    /// Contiguous bands with every gap absorbed by its neighbour.
    Repaired,
}

/// Daily forecast rainfall. Negative (and NaN) readings are dropped on
/// construction, as are unpaired entries when the two arrays differ in length.
#[derive(Debug, Clone, PartialEq)]
pub struct RainfallSeries {
    day_timestamps: Vec<i64>,
    rainfall_mm: Vec<f64>,
    location: Option<String>,
    warnings: Vec<String>,
}

impl RainfallSeries {
    pub fn new(
        day_timestamps: Vec<i64>,
        rainfall_mm: Vec<f64>,
        location: Option<String>,
    ) -> Result<Self, DomainError> {
        let mut warnings = Vec::new();
        let paired = day_timestamps.len().min(rainfall_mm.len());
        let (days, mm): (Vec<i64>, Vec<f64>) = day_timestamps
            .iter()
            .copied()
            .zip(rainfall_mm.iter().copied())
            .filter(|&(_, mm)| mm >= 0.0)
            .unzip();

        if day_timestamps.len() != rainfall_mm.len() {
            warnings.push(format!(
                "timestamps ({}) and rainfall values ({}) differ in length, some entries were omitted",
                day_timestamps.len(),
                rainfall_mm.len()
            ));
        } else if days.len() != paired {
            warnings.push(format!(
                "dropped {} negative rainfall entries",
                paired - days.len()
            ));
        }
        for w in &warnings {
            warn!("{w}");
        }

        if days.is_empty() {
            return Err(DomainError::InvalidSeries(
                "rainfall series has no non-negative entries".into(),
            ));
        }
        if let Some(&bad) = days
            .iter()
            .find(|&&t| DateTime::from_timestamp_millis(t).is_none())
        {
            return Err(DomainError::InvalidSeries(format!(
                "timestamp {bad} is out of range"
            )));
        }
        Ok(Self {
            day_timestamps: days,
            rainfall_mm: mm,
            location,
            warnings,
        })
    }

    pub fn day_timestamps(&self) -> &[i64] {
        &self.day_timestamps
    }

    pub fn rainfall_mm(&self) -> &[f64] {
        &self.rainfall_mm
    }

    pub fn location(&self) -> Option<&str> {
        self.location.as_deref()
    }

    /// Problems found while filtering the input.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.day_timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.day_timestamps.is_empty()
    }
}

/// Abbreviated weekday, day of month and month in UTC, e.g. `Mon 12 Oct`.
pub fn day_label(epoch_millis: i64) -> Result<String, DomainError> {
    DateTime::from_timestamp_millis(epoch_millis)
        .map(|t| t.format("%a %d %b").to_string())
        .ok_or_else(|| {
            DomainError::InvalidSeries(format!("timestamp {epoch_millis} is out of range"))
        })
}

pub fn rain_phrase(mm: f64) -> Result<String, DomainError> {
    rain_phrase_with(mm, RainBands::Original)
}

pub fn rain_phrase_with(mm: f64, bands: RainBands) -> Result<String, DomainError> {
    if mm.is_nan() {
        return Err(DomainError::NonFinite(mm));
    }
    if mm < 0.0 {
        return Err(DomainError::Negative {
            what: "rainfall",
            value: mm,
        });
    }
    if mm == 0.0 {
        return Ok("none".to_string());
    }
    let amount = format!("{} millimeters", format_value(mm, 2)?);
    let kind = match bands {
        RainBands::Original => match mm {
            m if m <= 2.0 => Some("drizzle"),
            m if (2.0..=4.0).contains(&m) => Some("light rain"),
            m if (5.0..=6.0).contains(&m) => Some("moderate rain"),
            m if (8.0..=15.0).contains(&m) => Some("moderate strong rain"),
            m if (15.0..=20.0).contains(&m) => Some("strong rain"),
            m if (30.0..=700.0).contains(&m) => Some("heavy rainfall"),
            _ => None,
        },
        RainBands::Repaired => Some(match mm {
            m if m <= 2.0 => "drizzle",
            m if m < 5.0 => "light rain",
            m if m < 8.0 => "moderate rain",
            m if m <= 15.0 => "moderate strong rain",
            m if m < 30.0 => "strong rain",
            _ => "heavy rainfall",
        }),
    };
    Ok(match kind {
        Some(k) => format!("{k} of {amount}"),
        None => amount,
    })
}

/// Days are read in input order, not by magnitude.
pub fn describe_rainfall(s: &RainfallSeries, bands: RainBands) -> Result<String, DomainError> {
    let location = s
        .location
        .as_deref()
        .map(|l| format!(" for {l}"))
        .unwrap_or_default();
    let days = s
        .day_timestamps
        .iter()
        .zip(&s.rainfall_mm)
        .map(|(&t, &mm)| {
            Ok(format!(
                "On {}, {} is forecasted",
                day_label(t)?,
                rain_phrase_with(mm, bands)?
            ))
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    Ok(format!(
        "This column chart describes the forecasted rainfall{location} in the upcoming week. \
         It has {} entries. {}.",
        s.len(),
        days.join(",")
    ))
}

#[derive(Debug, Clone)]
pub struct RainfallDescriptor {
    series: RainfallSeries,
    text: String,
}

impl RainfallDescriptor {
    pub fn new(series: RainfallSeries, bands: RainBands) -> Result<Self, DomainError> {
        let text = describe_rainfall(&series, bands)?;
        Ok(Self { series, text })
    }

    pub fn series(&self) -> &RainfallSeries {
        &self.series
    }
}

impl Descriptor for RainfallDescriptor {
    fn describe(&self) -> String {
        self.text.clone()
    }
}
