use std::path::Path;
use std::process::{Command, Output};

use repeaterlab::io::{sweep_from_csv, sweep_from_json, SWEEP_CSV_HEADER};

const FIFTY_CHANNELS: [&str; 10] = [
    "--alpha-db",
    "0.15",
    "--tau-ns",
    "50",
    "--mu",
    "0.405",
    "--q",
    "0.255",
    "--channels",
    "50",
];
const POINT: [&str; 16] = [
    "--alpha-db",
    "0.15",
    "--length-km",
    "100",
    "--tau-ns",
    "50",
    "--channels",
    "1",
    "--mu",
    "0.405",
    "--q",
    "0.255",
    "--n",
    "4",
    "--m",
    "10",
];

fn repeaterlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repeaterlab"))
        .args(args)
        .env_remove("REPEATERLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .parse()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn rate_reports_probabilities_and_resources() {
    let out = repeaterlab(&[&["rate"][..], &POINT].concat());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((field(&text, "rate_ebits_per_s") - 4898.780666471664).abs() < 1e-6);
    assert!((field(&text, "p_link") - 0.896_560_199_487_715_9).abs() < 1e-12);
    assert_eq!(field(&text, "q_eff"), 0.255);
    assert_eq!(field(&text, "n_mem_min"), 4020.0);
}

#[test]
fn zero_mu_gives_zero_rate() {
    let mut args = [&["rate"][..], &POINT].concat();
    let i = args.iter().position(|a| *a == "--mu").unwrap();
    args[i + 1] = "0";
    let out = repeaterlab(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "rate_ebits_per_s"), 0.0);
}

#[test]
fn per_mode_divides_by_mode_rate() {
    let text = stdout(&repeaterlab(&[&["rate", "--per-mode"][..], &POINT].concat()));
    let per_mode = field(&text, "rate_ebits_per_mode");
    assert!((per_mode - 4898.780666471664 * 50e-9).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_2() {
    let without_length: Vec<&str> = POINT
        .chunks(2)
        .filter(|kv| kv[0] != "--length-km")
        .flatten()
        .copied()
        .collect();
    let out = repeaterlab(&[&["rate"][..], &without_length].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length_km"));
    assert_eq!(
        repeaterlab(&[&["rate", "--q", "1.5"][..], &POINT].concat())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(repeaterlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_file_rules() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"alpha_db":0.15,"length_km":100,"tau_ns":50,"channels":1,"mu":0.405,"q":0.255,"n":4,"m":10}"#,
    );
    let out = repeaterlab(&["rate", "--config", &good]);
    assert_eq!(out.status.code(), Some(0));
    let base = field(&stdout(&out), "q_eff");
    assert_eq!(base, 0.255);
    let overridden = stdout(&repeaterlab(&["rate", "--config", &good, "--q", "0.3"]));
    assert_eq!(field(&overridden, "q_eff"), 0.3);

    let unknown = write(dir.path(), "unknown.json", r#"{"alpha_db":0.15,"colour":"blue"}"#);
    let out = repeaterlab(&["rate", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let mistyped = write(dir.path(), "typed.json", r#"{"alpha_db":"high"}"#);
    assert_eq!(repeaterlab(&["rate", "--config", &mistyped]).status.code(), Some(2));

    let missing = dir.path().join("absent.json");
    assert_eq!(
        repeaterlab(&["rate", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn envelope_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let mut args = vec![
        "envelope",
        "--length-start",
        "50",
        "--length-stop",
        "500",
        "--length-step",
        "10",
    ];
    args.extend(FIFTY_CHANNELS);
    args.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(repeaterlab(&args).status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some(SWEEP_CSV_HEADER));
    let rows = sweep_from_csv(&text).unwrap();
    assert_eq!(rows.len(), 46);
    for r in &rows {
        for v in [r.length_km, r.rate, r.ub, r.lb, r.lossy_lb, r.plob] {
            assert!(v.is_finite(), "{r:?}");
        }
        assert!(r.n_opt < 100 && r.m_opt >= 1);
    }
    assert!(!rows[0].feasible && rows[45].feasible);

    let again = dir.path().join("again.csv");
    args.pop();
    args.push(again.to_str().unwrap());
    assert_eq!(repeaterlab(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn envelope_sweep_json_round_trips() {
    let mut args = vec!["envelope", "--lengths", "100,200,300", "--format", "json"];
    args.extend(FIFTY_CHANNELS);
    let out = repeaterlab(&args);
    assert_eq!(out.status.code(), Some(0));
    let rows = sweep_from_json(&stdout(&out)).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.length_km).collect::<Vec<_>>(),
        [100.0, 200.0, 300.0]
    );
}

#[test]
fn envelope_errors() {
    let mut empty = vec![
        "envelope",
        "--length-start",
        "500",
        "--length-stop",
        "50",
        "--length-step",
        "10",
    ];
    empty.extend(FIFTY_CHANNELS);
    assert_eq!(repeaterlab(&empty).status.code(), Some(2));

    let mut unwritable = vec!["envelope", "--lengths", "100", "--output", "/nonexistent-dir/sweep.csv"];
    unwritable.extend(FIFTY_CHANNELS);
    assert_eq!(repeaterlab(&unwritable).status.code(), Some(3));
}

#[test]
fn optimal_params_command() {
    let mut args = vec!["optimal-params", "--length-km", "400"];
    args.extend(FIFTY_CHANNELS);
    let out = repeaterlab(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!((field(&text, "n_star") - 1.751_263_458_104_479_3).abs() < 1e-9);
    assert!((field(&text, "m_star") - 7.488_437_364_294_146).abs() < 1e-8);
    assert_eq!(field(&text, "n_int"), 1.0);
    assert_eq!(field(&text, "m_int"), 7.0);
    assert!(text.contains("feasible = true"));

    let mut short = vec!["optimal-params", "--length-km", "50"];
    short.extend(FIFTY_CHANNELS);
    assert!(stdout(&repeaterlab(&short)).contains("feasible = false"));

    let out = repeaterlab(&[
        "optimal-params",
        "--alpha-db",
        "0.15",
        "--length-km",
        "400",
        "--tau-ns",
        "50",
        "--channels",
        "1000000",
        "--mu",
        "1",
        "--q",
        "0.9",
        "--lambda-t-db",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bounds_and_resources_commands() {
    let mut args = vec!["bounds", "--length-km", "300"];
    args.extend(FIFTY_CHANNELS);
    let text = stdout(&repeaterlab(&args));
    let (ub, lb) = (field(&text, "ub_ebits_per_s"), field(&text, "lb_ebits_per_s"));
    assert!(ub > lb && lb > 0.0);
    assert_eq!(field(&text, "lossy_lb_ebits_per_s"), lb);

    let text = stdout(&repeaterlab(&[&["resources"][..], &POINT].concat()));
    assert_eq!(field(&text, "j_slots"), 2000.0);
    assert_eq!(field(&text, "occupancy_at_meas"), 4002.0);
}

#[test]
fn simulate_report_schema_and_determinism() {
    let mut args = vec![
        "simulate",
        "--seed",
        "5",
        "--trials",
        "20000",
        "--protocol",
        "first-success",
    ];
    args.extend(POINT);
    let a = repeaterlab(&args);
    assert_eq!(a.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let rate = &report["rate"];
    let z = rate["z_score"].as_f64().unwrap();
    let want =
        (rate["estimate"].as_f64().unwrap() - rate["analytic"].as_f64().unwrap()) / rate["stderr"].as_f64().unwrap();
    assert!(z.is_finite() && (z - want).abs() < 1e-9);
    assert!(report["wait_times"]["mean_Y"].is_number());
    assert!(report["wait_times"]["delta1_analytic"].is_number());

    let b = repeaterlab(&args);
    assert_eq!(a.stdout, b.stdout);
    args.extend(["--workers", "3"]);
    assert_eq!(a.stdout, repeaterlab(&args).stdout);

    let zero = repeaterlab(&[&["simulate", "--trials", "0"][..], &POINT].concat());
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn thread_cap_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_repeaterlab"))
        .args([&["rate"][..], &POINT].concat())
        .env("REPEATERLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
