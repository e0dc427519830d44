use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn chartsay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chartsay"))
        .args(args)
        .env_remove("CAM_CONFIG")
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn audit_reports_inaccessible_chart_and_exits_zero() {
    let dump = fixture("demo_screen.xml");
    let out = chartsay(&["audit", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let candidates = &json["screens"][0]["candidates"];
    assert_eq!(candidates.as_array().unwrap().len(), 1);
    assert_eq!(candidates[0]["resource_id"], "com.example.cam:id/piechart");
    assert_eq!(candidates[0]["status"], "Inaccessible");
    assert_eq!(candidates[0]["bounds"]["bottom"], 1300);
    assert!(out.stderr.is_empty());

    let gated = chartsay(&["audit", "--fail-on-inaccessible", dump.to_str().unwrap()]);
    assert_eq!(gated.status.code(), Some(1));
}

#[test]
fn audit_without_files_is_a_usage_error() {
    let out = chartsay(&["audit"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(out.stdout.is_empty());
}

#[test]
fn audit_reports_valid_files_when_others_fail() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("a_broken.xml");
    fs::write(&broken, "<hierarchy><node></hierarchy>").unwrap();
    let missing = dir.path().join("b_missing.xml");
    let good = fixture("corpus/s03_budget_pie.xml");
    let out = chartsay(&[
        "audit",
        good.to_str().unwrap(),
        broken.to_str().unwrap(),
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["screens"].as_array().unwrap().len(), 1);
    assert_eq!(
        json["screens"][0]["candidates"][0]["status"],
        "FocusableChart"
    );
    let errors = json["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 2);
    assert!(errors[0]["file"]
        .as_str()
        .unwrap()
        .ends_with("a_broken.xml"));
    assert!(errors[0]["error"]
        .as_str()
        .unwrap()
        .contains("malformed XML"));
    assert!(text(&out.stderr).contains("b_missing.xml"));
}

#[test]
fn audit_orders_screens_by_path() {
    let a = fixture("corpus/s02_portfolio_line.xml");
    let b = fixture("corpus/s01_steps_bar.xml");
    let out = chartsay(&["audit", a.to_str().unwrap(), b.to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let files: Vec<&str> = json["screens"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["file"].as_str().unwrap())
        .collect();
    assert!(files[0].ends_with("s01_steps_bar.xml"));
    assert!(files[1].ends_with("s02_portfolio_line.xml"));
    assert_eq!(
        json["screens"][1]["candidates"][0]["status"],
        "NearbyTextDescription"
    );
}

#[test]
fn eval_bundled_corpus() {
    let out = chartsay(&[
        "eval",
        fixture("corpus").to_str().unwrap(),
        fixture("corpus_labels.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = &json["metrics"];
    assert_eq!(
        (
            m["tp"].as_u64(),
            m["fp"].as_u64(),
            m["fn"].as_u64(),
            m["tn"].as_u64()
        ),
        (Some(10), Some(2), Some(4), Some(14))
    );
    assert_eq!(m["accuracy"].as_f64(), Some(0.8));
    // s09 has one accessible chart out of two but is labelled inaccessible.
    assert_eq!(m["accessibility_compared"].as_u64(), Some(10));
    assert_eq!(m["accessibility_agreement"].as_f64(), Some(0.9));
    assert_eq!(json["aggregate"]["total_charts"].as_u64(), Some(13));
    assert_eq!(json["aggregate"]["accessible"].as_u64(), Some(7));
}

#[test]
fn eval_perfect_corpus() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        fixture("corpus/s03_budget_pie.xml"),
        dir.path().join("chart.xml"),
    )
    .unwrap();
    fs::copy(
        fixture("corpus/s17_login.xml"),
        dir.path().join("login.xml"),
    )
    .unwrap();
    let labels = dir.path().join("labels.csv");
    fs::write(
        &labels,
        "file,has_chart,chart_type,accessible\nchart.xml,y,p,y\nlogin.xml,n,,\n",
    )
    .unwrap();
    let out = chartsay(&[
        "eval",
        dir.path().to_str().unwrap(),
        labels.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["metrics"]["accuracy"].as_f64(), Some(1.0));
    assert_eq!(json["metrics"]["precision"].as_f64(), Some(1.0));
}

#[test]
fn eval_label_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        fixture("corpus/s17_login.xml"),
        dir.path().join("login.xml"),
    )
    .unwrap();
    let labels = dir.path().join("labels.csv");
    fs::write(
        &labels,
        "file,has_chart,chart_type,accessible\nother.xml,n,,\n",
    )
    .unwrap();
    let out = chartsay(&[
        "eval",
        dir.path().to_str().unwrap(),
        labels.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = text(&out.stderr);
    assert!(
        err.contains("login.xml") && err.contains("other.xml"),
        "{err}"
    );
    assert!(out.stdout.is_empty());
}

#[test]
fn simulate_warns_about_unknown_bindings() {
    let dump = fixture("demo_screen.xml");
    let empty = chartsay(&[
        "simulate",
        dump.to_str().unwrap(),
        fixture("registry_empty.json").to_str().unwrap(),
    ]);
    let missing = chartsay(&[
        "simulate",
        dump.to_str().unwrap(),
        fixture("registry_missing.json").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(0));
    assert_eq!(missing.stdout, empty.stdout);
    assert!(text(&missing.stderr).contains("no_such_chart"));
    assert!(text(&empty.stdout).lines().all(|l| l.starts_with('[')));
}

#[test]
fn config_from_environment_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chartsay.toml");
    fs::write(&cfg, "max_read_entries = 3\n").unwrap();
    let pie = fixture("market_share_pie.json");

    let via_env = Command::new(env!("CARGO_BIN_EXE_chartsay"))
        .args(["describe", pie.to_str().unwrap()])
        .env("CAM_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(0));
    assert!(
        text(&via_env.stdout).contains("Tata, Honda, Toyota, Renault and Ford fill up the rest.")
    );

    let flag_wins = chartsay(&[
        "describe",
        "--config",
        cfg.to_str().unwrap(),
        "--max-read",
        "7",
        pie.to_str().unwrap(),
    ]);
    assert!(text(&flag_wins.stdout).ends_with("Ford fill up the rest.\n"));
    assert!(text(&flag_wins.stdout).contains("Renault fills up 4.00 percent"));

    let default = chartsay(&["describe", pie.to_str().unwrap()]);
    assert_eq!(default.stdout, flag_wins.stdout);
}

#[test]
fn describe_other_chart_kinds() {
    let rain = chartsay(&["describe", fixture("rainfall_week.json").to_str().unwrap()]);
    assert_eq!(rain.status.code(), Some(0));
    let rain = text(&rain.stdout);
    assert!(rain.starts_with("This column chart describes the forecasted rainfall for Melbourne in the upcoming week. It has 7 entries. On Sun 18 Oct, none is forecasted,"));
    assert!(rain.ends_with("On Sat 24 Oct, light rain of 3.50 millimeters is forecasted.\n"));

    let bar = chartsay(&["describe", fixture("honda_bar.json").to_str().unwrap()]);
    assert!(text(&bar.stdout).contains("City has 3223.00 sale count, HRV has 342.00 sale count"));

    let malformed = chartsay(&["describe", fixture("demo_screen.xml").to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(2));
}
