use crate::text::{join_list, phrase_proportion, Descriptor, DescriptorConfig, DomainError};

use super::{rank_descending, read_count};

/// Per-slice proportions of a pie chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionSeries {
    labels: Vec<String>,
    proportions: Vec<f64>,
    category_title: String,
    chart_title: Option<String>,
}

const SUM_TOLERANCE: f64 = 0.01;

impl ProportionSeries {
    pub fn new(
        labels: Vec<String>,
        proportions: Vec<f64>,
        category_title: impl Into<String>,
    ) -> Result<Self, DomainError> {
        if labels.is_empty() || labels.len() != proportions.len() {
            return Err(DomainError::InvalidSeries(format!(
                "pie needs equal, non-zero numbers of labels and proportions (got {} and {})",
                labels.len(),
                proportions.len()
            )));
        }
        if let Some(&bad) = proportions.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(DomainError::ProportionOutOfRange(bad));
        }
        let sum: f64 = proportions.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(DomainError::InvalidSeries(format!(
                "pie proportions sum to {sum}, expected 1 ± {SUM_TOLERANCE}"
            )));
        }
        Ok(Self {
            labels,
            proportions,
            category_title: category_title.into(),
            chart_title: None,
        })
    }

    /// Builds proportions from raw slice magnitudes, the way a chart's
    /// entries are divided by the data set's value sum.
    pub fn from_values(
        labels: Vec<String>,
        values: &[f64],
        category_title: impl Into<String>,
    ) -> Result<Self, DomainError> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(DomainError::InvalidSeries(format!(
                "pie values must be finite and non-negative, got {bad}"
            )));
        }
        let total: f64 = values.iter().sum();
        if total <= 0.0 {
            return Err(DomainError::InvalidSeries(
                "pie values must contain at least one positive entry".into(),
            ));
        }
        let proportions = values.iter().map(|v| v / total).collect();
        Self::new(labels, proportions, category_title)
    }

    /// Title used in the opening sentence; defaults to the category title.
    pub fn with_chart_title(mut self, title: impl Into<String>) -> Self {
        self.chart_title = Some(title.into());
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn proportions(&self) -> &[f64] {
        &self.proportions
    }

    pub fn category_title(&self) -> &str {
        &self.category_title
    }

    pub fn chart_title(&self) -> Option<&str> {
        self.chart_title.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Entries read out individually, and the labels folded into "the rest".
#[derive(Debug, Clone, PartialEq)]
pub struct Grouping {
    pub read: Vec<(String, f64)>,
    pub others: Vec<String>,
}

pub fn order_and_group(s: &ProportionSeries, cfg: &DescriptorConfig) -> Grouping {
    let order = rank_descending(&s.proportions);
    let keep = read_count(order.len(), cfg.max_read_entries);
    let (read, rest) = order.split_at(keep);
    Grouping {
        read: read
            .iter()
            .map(|&i| (s.labels[i].clone(), s.proportions[i]))
            .collect(),
        others: rest.iter().map(|&i| s.labels[i].clone()).collect(),
    }
}

pub fn describe_pie(s: &ProportionSeries, cfg: &DescriptorConfig) -> Result<String, DomainError> {
    let grouping = order_and_group(s, cfg);
    let title = s.chart_title().unwrap_or(&s.category_title);
    let mut out = format!(
        "The pie chart describes {title}. There are {} data points. ",
        s.len()
    );
    let clauses = grouping
        .read
        .iter()
        .map(|(label, p)| {
            Ok(format!(
                "{label} fills up {} of {}",
                phrase_proportion(*p, cfg)?,
                s.category_title
            ))
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    out.push_str(&clauses.join(", "));
    out.push('.');
    if !grouping.others.is_empty() {
        out.push_str(&format!(
            " {} fill up the rest.",
            join_list(&grouping.others)?
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PieDescriptor {
    series: ProportionSeries,
    cfg: DescriptorConfig,
    text: String,
}

impl PieDescriptor {
    pub fn new(series: ProportionSeries, cfg: DescriptorConfig) -> Result<Self, DomainError> {
        cfg.validate()?;
        let text = describe_pie(&series, &cfg)?;
        Ok(Self { series, cfg, text })
    }

    pub fn series(&self) -> &ProportionSeries {
        &self.series
    }

    pub fn config(&self) -> &DescriptorConfig {
        &self.cfg
    }
}

impl Descriptor for PieDescriptor {
    fn describe(&self) -> String {
        self.text.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn series(props: &[f64]) -> ProportionSeries {
        let labels = (0..props.len()).map(|i| format!("L{i}")).collect();
        ProportionSeries::new(labels, props.to_vec(), "T").unwrap()
    }

    #[test]
    fn groups_beyond_the_cap() {
        let s = series(&[0.5, 0.17, 0.08, 0.07, 0.06, 0.05, 0.04, 0.03]);
        let cfg = DescriptorConfig {
            max_read_entries: 3,
            ..Default::default()
        };
        let g = order_and_group(&s, &cfg);
        assert_eq!(g.read.len(), 3);
        assert_eq!(g.others, strings(&["L3", "L4", "L5", "L6", "L7"]));
    }

    #[test]
    fn under_the_cap_reads_everything() {
        let s = series(&[0.25; 4]);
        let g = order_and_group(&s, &DescriptorConfig::default());
        assert_eq!(g.read.len(), 4);
        assert!(g.others.is_empty());
    }

    #[test]
    fn read_order_is_descending() {
        let s = series(&[0.1, 0.4, 0.3, 0.2]);
        let g = order_and_group(&s, &DescriptorConfig::default());
        let labels: Vec<_> = g.read.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["L1", "L2", "L3", "L0"]);
    }

    #[test]
    fn single_slice() {
        let s = ProportionSeries::new(strings(&["X"]), vec![1.0], "T").unwrap();
        assert_eq!(
            describe_pie(&s, &DescriptorConfig::default()).unwrap(),
            "The pie chart describes T. There are 1 data points. X fills up 100.00 percent of T."
        );
    }

    #[test]
    fn equal_halves_keep_input_order() {
        let s = ProportionSeries::new(strings(&["B", "A"]), vec![0.5, 0.5], "T").unwrap();
        assert_eq!(
            describe_pie(&s, &DescriptorConfig::default()).unwrap(),
            "The pie chart describes T. There are 2 data points. \
             B fills up approximately half of T, A fills up approximately half of T."
        );
    }

    #[test]
    fn rejects_bad_series() {
        assert!(ProportionSeries::new(vec![], vec![], "T").is_err());
        assert!(ProportionSeries::new(strings(&["a"]), vec![0.5, 0.5], "T").is_err());
        assert!(ProportionSeries::new(strings(&["a", "b"]), vec![0.5, 0.4], "T").is_err());
        assert!(ProportionSeries::new(strings(&["a", "b"]), vec![1.2, -0.2], "T").is_err());
        assert!(ProportionSeries::from_values(strings(&["a"]), &[0.0], "T").is_err());
    }

    #[test]
    fn normalises_raw_values() {
        let s = ProportionSeries::from_values(strings(&["a", "b"]), &[3.0, 1.0], "T").unwrap();
        assert_eq!(s.proportions(), [0.75, 0.25]);
    }

    fn arb_series() -> impl Strategy<Value = ProportionSeries> {
        prop::collection::vec(0u32..20, 1..20)
            .prop_filter("needs a positive value", |v| v.iter().any(|&x| x > 0))
            .prop_map(|raw| {
                let values: Vec<f64> = raw.iter().map(|&x| x as f64).collect();
                let labels = (0..values.len()).map(|i| format!("L{i}")).collect();
                ProportionSeries::from_values(labels, &values, "T").unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn grouping_properties(s in arb_series(), cap in 1usize..10) {
            let cfg = DescriptorConfig { max_read_entries: cap, ..Default::default() };
            let g = order_and_group(&s, &cfg);

            let mut seen: Vec<String> = g.read.iter().map(|(l, _)| l.clone()).collect();
            seen.extend(g.others.iter().cloned());
            seen.sort();
            let mut input = s.labels().to_vec();
            input.sort();
            prop_assert_eq!(seen, input);

            prop_assert!(g.read.windows(2).all(|w| w[0].1 >= w[1].1));
            prop_assert!(g.read.len() <= cap);
            if g.read.len() < s.len() {
                prop_assert!(!g.others.is_empty());
            }
            if s.len() <= cap {
                prop_assert!(g.others.is_empty());
            }
        }
    }
}
