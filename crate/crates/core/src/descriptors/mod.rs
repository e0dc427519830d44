//! Concrete chart descriptors.
//!
//! Each descriptor validates its series on construction and then renders a
//! context-setting sentence followed by a data description. No descriptor
//! draws inferences from the data.

mod bar;
mod input;
mod pie;
mod rainfall;
mod stock;

pub use bar::{describe_bar, BarDescriptor, CategoricalSeries};
pub use input::{ChartData, ChartSettings};
pub use pie::{describe_pie, order_and_group, Grouping, PieDescriptor, ProportionSeries};
pub use rainfall::{
    day_label, describe_rainfall, rain_phrase, rain_phrase_with, RainBands, RainfallDescriptor,
    RainfallSeries,
};
pub use stock::{describe_stock, stamp_label, StockDescriptor, TimeSeries};

/// Stable descending ranking: returns input indices ordered by value, ties
/// keeping input order.
pub(crate) fn rank_descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// How many ranked entries are read individually before the rest is grouped.
pub(crate) fn read_count(n: usize, max_read: usize) -> usize {
    n.min(max_read)
}
