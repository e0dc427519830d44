use chrono::DateTime;

use crate::text::{detect_trend, format_value, Descriptor, DomainError};

const PLACES: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<i64>,
    values: Vec<f64>,
    subject: String,
    unit_name: String,
}

impl TimeSeries {
    pub fn new(
        timestamps: Vec<i64>,
        values: Vec<f64>,
        subject: impl Into<String>,
        unit_name: impl Into<String>,
    ) -> Result<Self, DomainError> {
        if timestamps.len() != values.len() || timestamps.len() < 2 {
            return Err(DomainError::InvalidSeries(format!(
                "time series needs at least 2 paired points (got {} timestamps, {} values)",
                timestamps.len(),
                values.len()
            )));
        }
        if let Some(w) = timestamps.windows(2).find(|w| w[0] >= w[1]) {
            return Err(DomainError::InvalidSeries(format!(
                "timestamps must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(DomainError::NonFinite(bad));
        }
        if let Some(&bad) = timestamps
            .iter()
            .find(|&&t| DateTime::from_timestamp_millis(t).is_none())
        {
            return Err(DomainError::InvalidSeries(format!(
                "timestamp {bad} is out of range"
            )));
        }
        Ok(Self {
            timestamps,
            values,
            subject: subject.into(),
            unit_name: unit_name.into(),
        })
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of the smallest value, earliest on ties.
    pub fn min_index(&self) -> usize {
        self.extreme_index(|candidate, best| candidate < best)
    }

    /// Index of the largest value, earliest on ties.
    pub fn max_index(&self) -> usize {
        self.extreme_index(|candidate, best| candidate > best)
    }

    fn extreme_index(&self, better: impl Fn(f64, f64) -> bool) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate().skip(1) {
            if better(v, self.values[best]) {
                best = i;
            }
        }
        best
    }
}

/// UTC stamp in the form `12 Oct 2020 11:41 17 seconds`.
pub fn stamp_label(epoch_millis: i64) -> Result<String, DomainError> {
    DateTime::from_timestamp_millis(epoch_millis)
        .map(|t| t.format("%d %b %Y %H:%M %S seconds").to_string())
        .ok_or_else(|| {
            DomainError::InvalidSeries(format!("timestamp {epoch_millis} is out of range"))
        })
}

pub fn describe_stock(s: &TimeSeries, flat_epsilon: f64) -> Result<String, DomainError> {
    let trend = detect_trend(&s.values, flat_epsilon)?;
    let last = s.values.len() - 1;
    let (lo, hi) = (s.min_index(), s.max_index());
    let value = |i: usize| format_value(s.values[i], PLACES);
    let unit = &s.unit_name;
    Ok(format!(
        "The line chart shows information about {subject}, which is trending {trend}. \
         The chart shows data from {from} to {to}. \
         The starting value is {start} {unit} and the closing value is {close} {unit}. \
         The minimum value is {min} {unit} on {min_at}. \
         The maximum value is {max} {unit} on {max_at}.",
        subject = s.subject,
        from = stamp_label(s.timestamps[0])?,
        to = stamp_label(s.timestamps[last])?,
        start = value(0)?,
        close = value(last)?,
        min = value(lo)?,
        min_at = stamp_label(s.timestamps[lo])?,
        max = value(hi)?,
        max_at = stamp_label(s.timestamps[hi])?,
    ))
}

#[derive(Debug, Clone)]
pub struct StockDescriptor {
    series: TimeSeries,
    text: String,
}

impl StockDescriptor {
    pub fn new(series: TimeSeries, flat_epsilon: f64) -> Result<Self, DomainError> {
        let text = describe_stock(&series, flat_epsilon)?;
        Ok(Self { series, text })
    }

    pub fn series(&self) -> &TimeSeries {
        &self.series
    }
}

impl Descriptor for StockDescriptor {
    fn describe(&self) -> String {
        self.text.clone()
    }
}
