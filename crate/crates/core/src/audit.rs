//! Chart detection and accessibility checks over parsed hierarchies, plus
//! corpus scoring against hand-labelled screens.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::{Bounds, Hierarchy, NodePath, UiNode};

/// Class names (last dotted segment) that custom-drawn charts hide behind.
pub const CHART_CLASSES: [&str; 4] = ["View", "ViewGroup", "SurfaceView", "FrameLayout"];

pub const DEFAULT_PROXIMITY_PX: i32 = 120;

/// Why `node` looks like a chart, or `None` when it does not.
pub fn chart_match_reason(node: &UiNode) -> Option<String> {
    let class = node.simple_class();
    if !CHART_CLASSES.contains(&class) {
        return None;
    }
    if !node.resource_id.to_lowercase().contains("chart") {
        return None;
    }
    let mut reason = format!("class {class} with resource-id containing \"chart\"");
    if !node.resource_id.contains("chart") {
        reason.push_str(" (case-insensitive match)");
    }
    Some(reason)
}

pub fn is_chart_candidate(node: &UiNode) -> bool {
    chart_match_reason(node).is_some()
}

/// What a screen-reader user gets from a node without help.
pub fn is_node_accessible(node: &UiNode) -> bool {
    node.focusable || node.has_content_desc()
}

/// First node, in document order, that carries readable text and either
/// overlaps the chart or sits entirely inside the band `proximity_px` tall
/// directly below it. The chart itself and its ancestors are never returned.
pub fn nearby_text_description<'a>(
    chart: &NodePath,
    root: &'a Hierarchy,
    proximity_px: i32,
) -> Option<(NodePath, &'a UiNode)> {
    let chart_bounds = root.node_at(chart)?.bounds;
    let below = Bounds {
        left: chart_bounds.left,
        top: chart_bounds.bottom,
        right: chart_bounds.right,
        bottom: chart_bounds.bottom.saturating_add(proximity_px.max(0)),
    };
    root.walk().find(|(path, node)| {
        if path == chart || path.is_ancestor_of(chart) {
            return false;
        }
        if !(node.has_text() || node.has_content_desc()) {
            return false;
        }
        let b = &node.bounds;
        b.intersects(&chart_bounds)
            || (b.overlaps_horizontally(&chart_bounds)
                && b.top >= below.top
                && b.bottom <= below.bottom)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccessibilityStatus {
    FocusableChart,
    NearbyTextDescription,
    Inaccessible,
}

impl AccessibilityStatus {
    pub fn is_accessible(self) -> bool {
        self != AccessibilityStatus::Inaccessible
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartCandidate {
    pub path: NodePath,
    pub resource_id: String,
    pub class_name: String,
    pub bounds: Bounds,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub candidate: ChartCandidate,
    pub status: AccessibilityStatus,
    /// Node whose text describes the chart, when status is `NearbyTextDescription`.
    pub described_by: Option<NodePath>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenAudit {
    source_file: String,
    findings: Vec<Finding>,
}

impl ScreenAudit {
    pub fn new(source_file: impl Into<String>, findings: Vec<Finding>) -> Self {
        Self {
            source_file: source_file.into(),
            findings,
        }
    }

    pub fn source_file(&self) -> &str {
        &self.source_file
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn has_chart(&self) -> bool {
        !self.findings.is_empty()
    }

    /// At least one chart on the screen is reachable by a screen reader.
    pub fn any_accessible(&self) -> bool {
        self.findings.iter().any(|f| f.status.is_accessible())
    }
}

pub fn audit_screen(source_file: &str, root: &Hierarchy, proximity_px: i32) -> ScreenAudit {
    let findings = root
        .walk()
        .filter_map(|(path, node)| {
            let reason = chart_match_reason(node)?;
            let (status, described_by) = if is_node_accessible(node) {
                (AccessibilityStatus::FocusableChart, None)
            } else if let Some((text_path, _)) = nearby_text_description(&path, root, proximity_px)
            {
                (AccessibilityStatus::NearbyTextDescription, Some(text_path))
            } else {
                (AccessibilityStatus::Inaccessible, None)
            };
            Some(Finding {
                candidate: ChartCandidate {
                    path,
                    resource_id: node.resource_id.clone(),
                    class_name: node.class_name.clone(),
                    bounds: node.bounds,
                    reason,
                },
                status,
                described_by,
            })
        })
        .collect();
    ScreenAudit::new(source_file, findings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartType {
    Line,
    Bar,
    Pie,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusLabel {
    pub source_file: String,
    pub has_chart: bool,
    pub chart_type: Option<ChartType>,
    pub accessible: Option<bool>,
}

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("labels CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("labels CSV header must be `file,has_chart,chart_type,accessible`, got `{0}`")]
    Header(String),
    #[error("labels CSV line {line}: {message}")]
    Value { line: u64, message: String },
}

#[derive(Deserialize)]
struct LabelRow {
    file: String,
    has_chart: String,
    chart_type: String,
    accessible: String,
}

pub fn read_labels<R: Read>(reader: R) -> Result<Vec<CorpusLabel>, LabelError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != ["file", "has_chart", "chart_type", "accessible"] {
        return Err(LabelError::Header(header.join(",")));
    }
    let mut labels = Vec::new();
    for row in rdr.deserialize::<LabelRow>() {
        let row = row?;
        let line = labels.len() as u64 + 2;
        let bad = |message: String| LabelError::Value { line, message };
        let has_chart = match row.has_chart.as_str() {
            "y" => true,
            "n" => false,
            other => return Err(bad(format!("has_chart must be y or n, got {other:?}"))),
        };
        let chart_type = match row.chart_type.as_str() {
            "" => None,
            "l" => Some(ChartType::Line),
            "b" => Some(ChartType::Bar),
            "p" => Some(ChartType::Pie),
            other => {
                return Err(bad(format!(
                    "chart_type must be l, b, p or empty, got {other:?}"
                )))
            }
        };
        let accessible = match row.accessible.as_str() {
            "" => None,
            "y" => Some(true),
            "n" => Some(false),
            other => {
                return Err(bad(format!(
                    "accessible must be y, n or empty, got {other:?}"
                )))
            }
        };
        if !has_chart && (chart_type.is_some() || accessible.is_some()) {
            return Err(bad(format!(
                "{}: chart_type and accessible only apply to screens with a chart",
                row.file
            )));
        }
        labels.push(CorpusLabel {
            source_file: row.file,
            has_chart,
            chart_type,
            accessible,
        });
    }
    Ok(labels)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("audits and labels do not pair up: unlabelled screens {unlabelled:?}, labels without screens {unmatched_labels:?}, duplicate labels {duplicate_labels:?}")]
pub struct PairingError {
    pub unlabelled: Vec<String>,
    pub unmatched_labels: Vec<String>,
    pub duplicate_labels: Vec<String>,
}

/// Chart-presence confusion counts and derived rates. Rates with a zero
/// denominator are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalMetrics {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    /// Screens where both the label and the audit say there is a chart and
    /// the label records accessibility.
    pub accessibility_compared: usize,
    pub accessibility_agreement: Option<f64>,
}

impl EvalMetrics {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
        Self {
            tp,
            fp,
            fn_,
            tn,
            accuracy: ratio(tp + tn, tp + fp + fn_ + tn),
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            accessibility_compared: 0,
            accessibility_agreement: None,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

pub fn evaluate_corpus(
    audits: &[ScreenAudit],
    labels: &[CorpusLabel],
) -> Result<EvalMetrics, PairingError> {
    let mut by_file: BTreeMap<&str, &CorpusLabel> = BTreeMap::new();
    let mut duplicate_labels = BTreeSet::new();
    for label in labels {
        if by_file.insert(&label.source_file, label).is_some() {
            duplicate_labels.insert(label.source_file.clone());
        }
    }
    let screens: BTreeSet<&str> = audits.iter().map(ScreenAudit::source_file).collect();
    let unlabelled: Vec<String> = audits
        .iter()
        .map(ScreenAudit::source_file)
        .filter(|f| !by_file.contains_key(f))
        .map(str::to_string)
        .collect();
    let unmatched_labels: Vec<String> = by_file
        .keys()
        .filter(|f| !screens.contains(*f))
        .map(|f| f.to_string())
        .collect();
    if !unlabelled.is_empty() || !unmatched_labels.is_empty() || !duplicate_labels.is_empty() {
        return Err(PairingError {
            unlabelled,
            unmatched_labels,
            duplicate_labels: duplicate_labels.into_iter().collect(),
        });
    }

    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    let (mut compared, mut agreed) = (0usize, 0usize);
    for audit in audits {
        let label = by_file[audit.source_file()];
        match (label.has_chart, audit.has_chart()) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
        }
        if let (true, Some(truth)) = (audit.has_chart(), label.accessible) {
            compared += 1;
            if truth == audit.any_accessible() {
                agreed += 1;
            }
        }
    }
    let mut metrics = EvalMetrics::from_counts(tp, fp, fn_, tn);
    metrics.accessibility_compared = compared;
    metrics.accessibility_agreement = (compared > 0).then(|| agreed as f64 / compared as f64);
    Ok(metrics)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStats {
    pub total_charts: usize,
    pub accessible: usize,
    pub inaccessible: usize,
    pub accessible_pct: Option<f64>,
    pub inaccessible_pct: Option<f64>,
}

fn percent_1dp(part: usize, whole: usize) -> Option<f64> {
    (whole > 0).then(|| (part as f64 * 1000.0 / whole as f64).round() / 10.0)
}

/// Counts every chart finding across all screens.
pub fn aggregate_stats(audits: &[ScreenAudit]) -> AggregateStats {
    let (total, accessible) = audits
        .iter()
        .flat_map(ScreenAudit::findings)
        .fold((0, 0), |(t, a), f| {
            (t + 1, a + usize::from(f.status.is_accessible()))
        });
    AggregateStats {
        total_charts: total,
        accessible,
        inaccessible: total - accessible,
        accessible_pct: percent_1dp(accessible, total),
        inaccessible_pct: percent_1dp(total - accessible, total),
    }
}

/// Error entry for a dump that could not be audited.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileError {
    pub file: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub path: String,
    pub resource_id: String,
    pub class: String,
    pub bounds: Bounds,
    pub reason: String,
    pub status: AccessibilityStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub described_by: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenReport {
    pub file: String,
    pub has_chart: bool,
    pub candidates: Vec<CandidateReport>,
}

/// JSON audit report; screens are ordered by file name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub screens: Vec<ScreenReport>,
    pub errors: Vec<FileError>,
    pub aggregate: AggregateStats,
}

impl AuditReport {
    pub fn new(audits: &[ScreenAudit], mut errors: Vec<FileError>) -> Self {
        let mut screens: Vec<ScreenReport> = audits
            .iter()
            .map(|a| ScreenReport {
                file: a.source_file().to_string(),
                has_chart: a.has_chart(),
                candidates: a
                    .findings()
                    .iter()
                    .map(|f| CandidateReport {
                        path: f.candidate.path.to_string(),
                        resource_id: f.candidate.resource_id.clone(),
                        class: f.candidate.class_name.clone(),
                        bounds: f.candidate.bounds,
                        reason: f.candidate.reason.clone(),
                        status: f.status,
                        described_by: f.described_by.as_ref().map(NodePath::to_string),
                    })
                    .collect(),
            })
            .collect();
        screens.sort_by(|a, b| a.file.cmp(&b.file));
        errors.sort_by(|a, b| a.file.cmp(&b.file));
        Self {
            screens,
            errors,
            aggregate: aggregate_stats(audits),
        }
    }
}
