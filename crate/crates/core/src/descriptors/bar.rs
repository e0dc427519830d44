use crate::text::{format_value, join_list, Descriptor, DescriptorConfig, DomainError};

use super::{rank_descending, read_count};

/// Raw magnitudes for discrete (non-temporal) categories.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalSeries {
    labels: Vec<String>,
    values: Vec<f64>,
    category_title: String,
    value_title: String,
    chart_title: Option<String>,
}

impl CategoricalSeries {
    pub fn new(
        labels: Vec<String>,
        values: Vec<f64>,
        category_title: impl Into<String>,
        value_title: impl Into<String>,
        chart_title: Option<String>,
    ) -> Result<Self, DomainError> {
        if labels.is_empty() || labels.len() != values.len() {
            return Err(DomainError::InvalidSeries(format!(
                "bar needs equal, non-zero numbers of labels and values (got {} and {})",
                labels.len(),
                values.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(DomainError::InvalidSeries(format!(
                "bar values must be finite and non-negative, got {bad}"
            )));
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(DomainError::InvalidSeries(
                "bar values must contain at least one positive entry".into(),
            ));
        }
        Ok(Self {
            labels,
            values,
            category_title: category_title.into(),
            value_title: value_title.into(),
            chart_title,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Same structure as the pie summary with raw counts in place of proportions.
pub fn describe_bar(s: &CategoricalSeries, cfg: &DescriptorConfig) -> Result<String, DomainError> {
    let title = match &s.chart_title {
        Some(t) => t.clone(),
        None => format!("{} by {}", s.category_title, s.value_title),
    };
    let order = rank_descending(&s.values);
    let (read, rest) = order.split_at(read_count(order.len(), cfg.max_read_entries));

    let clauses = read
        .iter()
        .map(|&i| {
            Ok(format!(
                "{} has {} {}",
                s.labels[i],
                format_value(s.values[i], cfg.decimal_places)?,
                s.value_title
            ))
        })
        .collect::<Result<Vec<_>, DomainError>>()?;

    let mut out = format!(
        "The bar chart describes {title}. There are {} data points. {}.",
        s.len(),
        clauses.join(", ")
    );
    if !rest.is_empty() {
        let others: Vec<&str> = rest.iter().map(|&i| s.labels[i].as_str()).collect();
        out.push_str(&format!(" {} make up the rest.", join_list(&others)?));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BarDescriptor {
    series: CategoricalSeries,
    text: String,
}

impl BarDescriptor {
    pub fn new(series: CategoricalSeries, cfg: DescriptorConfig) -> Result<Self, DomainError> {
        cfg.validate()?;
        let text = describe_bar(&series, &cfg)?;
        Ok(Self { series, text })
    }

    pub fn series(&self) -> &CategoricalSeries {
        &self.series
    }
}

impl Descriptor for BarDescriptor {
    fn describe(&self) -> String {
        self.text.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn honda() -> CategoricalSeries {
        CategoricalSeries::new(
            ["Jazz", "City", "Accord", "HRV"].map(String::from).to_vec(),
            vec![333.0, 3223.0, 234.0, 342.0],
            "Car model",
            "sale count",
            Some("Honda Car model sales count for 2020".into()),
        )
        .unwrap()
    }

    #[test]
    fn honda_sales_read_in_descending_order() {
        let text = describe_bar(&honda(), &DescriptorConfig::default()).unwrap();
        assert_eq!(
            text,
            "The bar chart describes Honda Car model sales count for 2020. There are 4 data points. \
             City has 3223.00 sale count, HRV has 342.00 sale count, \
             Jazz has 333.00 sale count, Accord has 234.00 sale count."
        );
    }

    #[test]
    fn title_falls_back_to_axis_titles() {
        let s =
            CategoricalSeries::new(vec!["A".into()], vec![2.0], "Model", "sales", None).unwrap();
        assert_eq!(
            describe_bar(&s, &DescriptorConfig::default()).unwrap(),
            "The bar chart describes Model by sales. There are 1 data points. A has 2.00 sales."
        );
    }

    #[test]
    fn equal_values_keep_input_order() {
        let s = CategoricalSeries::new(
            ["C", "A", "B"].map(String::from).to_vec(),
            vec![1.0; 3],
            "x",
            "y",
            None,
        )
        .unwrap();
        let text = describe_bar(&s, &DescriptorConfig::default()).unwrap();
        assert!(text.ends_with("C has 1.00 y, A has 1.00 y, B has 1.00 y."));
    }

    #[test]
    fn grouping_beyond_cap() {
        let cfg = DescriptorConfig {
            max_read_entries: 2,
            ..Default::default()
        };
        let text = describe_bar(&honda(), &cfg).unwrap();
        assert!(text.ends_with(
            "City has 3223.00 sale count, HRV has 342.00 sale count. Jazz and Accord make up the rest."
        ));
    }

    #[test]
    fn rejects_all_zero() {
        assert!(CategoricalSeries::new(vec!["a".into()], vec![0.0], "x", "y", None).is_err());
        assert!(CategoricalSeries::new(vec!["a".into()], vec![-1.0], "x", "y", None).is_err());
    }
}
