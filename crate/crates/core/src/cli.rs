//! `chartsay` command-line front end.
//!
//! Exit codes: 0 success, 1 inaccessible charts found under
//! `--fail-on-inaccessible`, 2 input or schema error, 3 some files could not
//! be processed, 64 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::{
    aggregate_stats, audit_screen, evaluate_corpus, read_labels, AggregateStats, AuditReport,
    EvalMetrics, FileError, ScreenAudit, DEFAULT_PROXIMITY_PX,
};
use crate::descriptors::{ChartData, ChartSettings, RainBands};
use crate::focus::{simulate, DescriptorRegistry};
use crate::hierarchy::{parse_dump_bytes, Hierarchy};
use crate::text::DescriptorConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INACCESSIBLE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PARTIAL: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "chartsay",
    version,
    about = "Chart summaries and chart accessibility audits"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Default, Args)]
struct Overrides {
    /// Most entries read out individually before the rest are grouped
    #[arg(long, global = true, value_name = "N")]
    max_read: Option<usize>,
    /// Distance from 50% that is still spoken as "approximately half"
    #[arg(long, global = true, value_name = "P")]
    half_tolerance: Option<f64>,
    /// Endpoint difference below which a line chart is trending sideways
    #[arg(long, global = true, value_name = "E")]
    flat_epsilon: Option<f64>,
    /// How far below a chart (pixels) text still counts as its description
    #[arg(long, global = true, value_name = "PX")]
    proximity_px: Option<i32>,
    /// Use contiguous rainfall bands instead of the original gapped table
    #[arg(long, global = true)]
    repaired_rain_bands: bool,
    /// TOML config file; flags take precedence over its values
    #[arg(long, global = true, env = "CAM_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the summary for a chart-data JSON file
    Describe { input: PathBuf },
    /// Audit view-hierarchy dumps for charts and their accessibility
    Audit {
        #[arg(required = true)]
        dumps: Vec<PathBuf>,
        /// Exit with status 1 when any chart is inaccessible
        #[arg(long)]
        fail_on_inaccessible: bool,
    },
    /// Score chart detection on a directory of dumps against a labels CSV
    Eval { dump_dir: PathBuf, labels: PathBuf },
    /// Print what a screen reader would say walking a dump
    Simulate { dump: PathBuf, registry: PathBuf },
}

/// Tunables shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub max_read_entries: usize,
    pub half_tolerance: f64,
    pub flat_epsilon: f64,
    pub proximity_px: i32,
    pub repaired_rain_bands: bool,
}

impl Default for CliConfig {
    fn default() -> Self {
        let d = DescriptorConfig::default();
        Self {
            max_read_entries: d.max_read_entries,
            half_tolerance: d.half_tolerance,
            flat_epsilon: 0.0,
            proximity_px: DEFAULT_PROXIMITY_PX,
            repaired_rain_bands: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}: {source}")]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl CliConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|source| ConfigError::Toml {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.descriptor_config()
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.flat_epsilon.is_nan() || self.flat_epsilon < 0.0 {
            return Err(ConfigError::Invalid(format!(
                "flat_epsilon must be non-negative, got {}",
                self.flat_epsilon
            )));
        }
        if self.proximity_px < 0 {
            return Err(ConfigError::Invalid(format!(
                "proximity_px must be non-negative, got {}",
                self.proximity_px
            )));
        }
        Ok(())
    }

    pub fn descriptor_config(&self) -> DescriptorConfig {
        DescriptorConfig {
            max_read_entries: self.max_read_entries,
            half_tolerance: self.half_tolerance,
            ..DescriptorConfig::default()
        }
    }

    pub fn chart_settings(&self) -> ChartSettings {
        ChartSettings {
            descriptor: self.descriptor_config(),
            flat_epsilon: self.flat_epsilon,
            rain_bands: if self.repaired_rain_bands {
                RainBands::Repaired
            } else {
                RainBands::Original
            },
        }
    }

    fn resolve(overrides: &Overrides) -> Result<Self, ConfigError> {
        let mut cfg = match &overrides.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        if let Some(v) = overrides.max_read {
            cfg.max_read_entries = v;
        }
        if let Some(v) = overrides.half_tolerance {
            cfg.half_tolerance = v;
        }
        if let Some(v) = overrides.flat_epsilon {
            cfg.flat_epsilon = v;
        }
        if let Some(v) = overrides.proximity_px {
            cfg.proximity_px = v;
        }
        cfg.repaired_rain_bands |= overrides.repaired_rain_bands;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Metrics plus the chart accessibility totals for the same corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub metrics: EvalMetrics,
    pub aggregate: AggregateStats,
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let cfg = match CliConfig::resolve(&cli.overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    match cli.command {
        Command::Describe { input } => cmd_describe(&input, &cfg, out, err),
        Command::Audit {
            dumps,
            fail_on_inaccessible,
        } => cmd_audit(&dumps, &cfg, fail_on_inaccessible, out, err),
        Command::Eval { dump_dir, labels } => cmd_eval(&dump_dir, &labels, &cfg, out, err),
        Command::Simulate { dump, registry } => cmd_simulate(&dump, &registry, &cfg, out, err),
    }
}

fn load_dump(path: &Path) -> Result<Hierarchy, String> {
    let bytes = fs::read(path).map_err(|e| format!("cannot read: {e}"))?;
    parse_dump_bytes(&bytes).map_err(|e| e.to_string())
}

pub fn cmd_describe(input: &Path, cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", input.display());
            return EXIT_INPUT;
        }
    };
    let data = match ChartData::from_json(&text) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", input.display());
            return EXIT_INPUT;
        }
    };
    for w in data.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    match data.build(&cfg.chart_settings()) {
        Ok(descriptor) => {
            let _ = writeln!(out, "{}", descriptor.describe());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {} data: {e}", input.display(), data.kind());
            EXIT_INPUT
        }
    }
}

pub fn cmd_audit(
    dumps: &[PathBuf],
    cfg: &CliConfig,
    fail_on_inaccessible: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let mut audits = Vec::new();
    let mut errors = Vec::new();
    for path in dumps {
        let file = path.display().to_string();
        match load_dump(path) {
            Ok(h) => audits.push(audit_screen(&file, &h, cfg.proximity_px)),
            Err(e) => {
                let _ = writeln!(err, "error: {file}: {e}");
                errors.push(FileError { file, error: e });
            }
        }
    }
    let report = AuditReport::new(&audits, errors);
    match serde_json::to_string_pretty(&report) {
        Ok(json) => {
            let _ = writeln!(out, "{json}");
        }
        Err(e) => {
            let _ = writeln!(err, "error: cannot render report: {e}");
            return EXIT_PARTIAL;
        }
    }
    if !report.errors.is_empty() {
        EXIT_PARTIAL
    } else if fail_on_inaccessible && report.aggregate.inaccessible > 0 {
        EXIT_INACCESSIBLE
    } else {
        EXIT_OK
    }
}

/// Dumps in `dir` (files ending in `.xml`), sorted by name.
fn dump_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "xml"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn cmd_eval(
    dump_dir: &Path,
    labels_path: &Path,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let labels = match fs::File::open(labels_path)
        .map_err(|e| e.to_string())
        .and_then(|f| read_labels(f).map_err(|e| e.to_string()))
    {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", labels_path.display());
            return EXIT_INPUT;
        }
    };
    let files = match dump_files(dump_dir) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: cannot list {}: {e}", dump_dir.display());
            return EXIT_INPUT;
        }
    };
    let mut audits: Vec<ScreenAudit> = Vec::new();
    let mut failed = false;
    for path in &files {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        match load_dump(path) {
            Ok(h) => audits.push(audit_screen(&name, &h, cfg.proximity_px)),
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                failed = true;
            }
        }
    }
    if failed {
        return EXIT_PARTIAL;
    }
    let metrics = match evaluate_corpus(&audits, &labels) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let report = EvalReport {
        metrics,
        aggregate: aggregate_stats(&audits),
    };
    match serde_json::to_string_pretty(&report) {
        Ok(json) => {
            let _ = writeln!(out, "{json}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: cannot render metrics: {e}");
            EXIT_PARTIAL
        }
    }
}

pub fn cmd_simulate(
    dump: &Path,
    registry_path: &Path,
    cfg: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let hierarchy = match load_dump(dump) {
        Ok(h) => h,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", dump.display());
            return EXIT_INPUT;
        }
    };
    let registry = match fs::read_to_string(registry_path)
        .map_err(|e| e.to_string())
        .and_then(|t| {
            DescriptorRegistry::from_json(&t, &cfg.chart_settings()).map_err(|e| e.to_string())
        }) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", registry_path.display());
            return EXIT_INPUT;
        }
    };
    for id in registry.missing_from(&hierarchy) {
        let _ = writeln!(
            err,
            "warning: registry binds {id:?}, which is not in {}",
            dump.display()
        );
    }
    match simulate(&hierarchy, &registry) {
        Ok(transcript) => {
            for u in transcript {
                let line = u.spoken_text.replace(['\n', '\r'], " ");
                let _ = writeln!(out, "[{}] {line}", u.source.tag());
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["chartsay"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_args(&["audit"]).0, EXIT_USAGE);
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["describe", "x.json", "--max-read", "many"]).0,
            EXIT_USAGE
        );
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("describe"));
    }

    #[test]
    fn config_file_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        fs::write(&path, "max_read_entries = 3\nproximity_px = 50\n").unwrap();
        let overrides = Overrides {
            config: Some(path.clone()),
            ..Default::default()
        };
        let cfg = CliConfig::resolve(&overrides).unwrap();
        assert_eq!((cfg.max_read_entries, cfg.proximity_px), (3, 50));
        assert_eq!(cfg.half_tolerance, 0.05);

        let overrides = Overrides {
            config: Some(path),
            max_read: Some(5),
            repaired_rain_bands: true,
            ..Default::default()
        };
        let cfg = CliConfig::resolve(&overrides).unwrap();
        assert_eq!(cfg.max_read_entries, 5);
        assert_eq!(cfg.chart_settings().rain_bands, RainBands::Repaired);
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = CliConfig {
            max_read_entries: 4,
            half_tolerance: 0.1,
            flat_epsilon: 0.5,
            proximity_px: 80,
            repaired_rain_bands: true,
        };
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(CliConfig::from_toml(&text).unwrap(), cfg);
        assert!(CliConfig::from_toml("max_read = 3").is_err());
    }

    #[test]
    fn invalid_config_is_an_input_error() {
        let (code, _, err) = run_args(&["describe", "x.json", "--max-read", "0"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("max_read_entries"));
        let (code, _, _) = run_args(&["describe", "x.json", "--half-tolerance", "0.7"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn describe_errors() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        fs::write(&bad, "{not json").unwrap();
        assert_eq!(run_args(&["describe", bad.to_str().unwrap()]).0, EXIT_INPUT);
        let unknown = dir.path().join("unknown.json");
        fs::write(&unknown, r#"{"type":"radar","data":{}}"#).unwrap();
        assert_eq!(
            run_args(&["describe", unknown.to_str().unwrap()]).0,
            EXIT_INPUT
        );
        let invalid = dir.path().join("invalid.json");
        fs::write(&invalid, r#"{"type":"stock","data":{"epochMillis":[2,1],"values":[1,2],"subject":"S","unitName":"u"}}"#).unwrap();
        let (code, _, err) = run_args(&["describe", invalid.to_str().unwrap()]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("strictly increasing"));
    }

    #[test]
    fn rainfall_warnings_go_to_stderr() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rain.json");
        fs::write(
            &path,
            r#"{"type":"rainfall","data":{"epochMillis":[0,86400000],"rainfallMm":[-1,3.5]}}"#,
        )
        .unwrap();
        let (code, out, err) = run_args(&["describe", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("It has 1 entries."));
        assert!(err.contains("negative"));
    }
}
