//! JSON chart-data documents: `{"type": "pie" | "bar" | "rainfall" | "stock", "data": {...}}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::text::{Descriptor, DescriptorConfig, DomainError};

use super::{
    BarDescriptor, CategoricalSeries, PieDescriptor, ProportionSeries, RainBands,
    RainfallDescriptor, RainfallSeries, StockDescriptor, TimeSeries,
};

/// Everything a descriptor may need besides its data.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChartSettings {
    pub descriptor: DescriptorConfig,
    pub flat_epsilon: f64,
    pub rain_bands: RainBands,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "lowercase")]
pub enum ChartData {
    Pie(PieData),
    Bar(BarData),
    Rainfall(RainfallData),
    Stock(StockData),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PieData {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proportions: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    pub category_title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_title: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BarData {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub category_title: String,
    pub value_title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_title: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RainfallData {
    pub epoch_millis: Vec<i64>,
    pub rainfall_mm: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StockData {
    pub epoch_millis: Vec<i64>,
    pub values: Vec<f64>,
    pub subject: String,
    pub unit_name: String,
}

impl ChartData {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ChartData::Pie(_) => "pie",
            ChartData::Bar(_) => "bar",
            ChartData::Rainfall(_) => "rainfall",
            ChartData::Stock(_) => "stock",
        }
    }

    /// Validates the data and builds the matching descriptor.
    pub fn build(&self, settings: &ChartSettings) -> Result<Arc<dyn Descriptor>, DomainError> {
        settings.descriptor.validate()?;
        Ok(match self {
            ChartData::Pie(d) => {
                let series = match (&d.proportions, &d.values) {
                    (Some(p), None) => {
                        ProportionSeries::new(d.labels.clone(), p.clone(), &d.category_title)?
                    }
                    (None, Some(v)) => {
                        ProportionSeries::from_values(d.labels.clone(), v, &d.category_title)?
                    }
                    _ => {
                        return Err(DomainError::InvalidSeries(
                            "pie data needs exactly one of `proportions` or `values`".into(),
                        ))
                    }
                };
                let series = match &d.chart_title {
                    Some(t) => series.with_chart_title(t),
                    None => series,
                };
                Arc::new(PieDescriptor::new(series, settings.descriptor)?)
            }
            ChartData::Bar(d) => {
                let series = CategoricalSeries::new(
                    d.labels.clone(),
                    d.values.clone(),
                    &d.category_title,
                    &d.value_title,
                    d.chart_title.clone(),
                )?;
                Arc::new(BarDescriptor::new(series, settings.descriptor)?)
            }
            ChartData::Rainfall(d) => {
                let series = RainfallSeries::new(
                    d.epoch_millis.clone(),
                    d.rainfall_mm.clone(),
                    d.location.clone(),
                )?;
                Arc::new(RainfallDescriptor::new(series, settings.rain_bands)?)
            }
            ChartData::Stock(d) => {
                let series = TimeSeries::new(
                    d.epoch_millis.clone(),
                    d.values.clone(),
                    &d.subject,
                    &d.unit_name,
                )?;
                Arc::new(StockDescriptor::new(series, settings.flat_epsilon)?)
            }
        })
    }

    /// Warnings produced while cleaning the input (rainfall only).
    pub fn warnings(&self) -> Vec<String> {
        match self {
            ChartData::Rainfall(d) => RainfallSeries::new(
                d.epoch_millis.clone(),
                d.rainfall_mm.clone(),
                d.location.clone(),
            )
            .map(|s| s.warnings().to_vec())
            .unwrap_or_default(),
            _ => Vec::new(),
        }
    }
}
