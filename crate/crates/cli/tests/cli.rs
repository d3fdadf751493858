use std::process::{Command, Output};

use clap::Parser;
use ringmimo_cli::app::{run, Cli};
use ringmimo_cli::config::{ScenarioConfig, SEED_ENV};
use ringmimo_cli::validate::{run_all, ValidateOptions};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringmimo"))
        .args(args)
        .env_remove(SEED_ENV)
        .output()
        .expect("binary runs")
}

fn run_lib(args: &[&str]) -> Result<String, ringmimo_cli::CliError> {
    let cli = Cli::try_parse_from(std::iter::once("ringmimo").chain(args.iter().copied()))
        .expect("arguments parse");
    let mut out = Vec::new();
    run(&cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn field(text: &str, key: &str) -> Option<f64> {
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.parse().expect("numeric field"))
}

#[test]
fn written_config_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.conf");
    let out = bin(&[
        "show-config",
        "--antennas",
        "123",
        "--exponent",
        "4.25",
        "--power-db=-2.5",
        "--normalization",
        "raw",
        "--seed",
        "77",
        "--output",
    ]
    .iter()
    .copied()
    .chain([path.to_str().unwrap()])
    .collect::<Vec<_>>());
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    let parsed = ScenarioConfig::parse(&written).unwrap();
    assert_eq!(parsed.antenna_count, 123);
    assert_eq!(parsed.exponent_v, 4.25);
    assert_eq!(parsed.master_seed, 77);
    assert_eq!(parsed.to_text(), written);

    // Reading the file back through --config reproduces it exactly.
    let again = bin(&["show-config", "--config", path.to_str().unwrap()]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), written);
}

#[test]
fn flags_override_config_and_env_sets_default_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.conf");
    std::fs::write(&path, "antenna_count = 64\nexponent_v = 3\n").unwrap();
    let p = path.to_str().unwrap();
    let text =
        String::from_utf8(bin(&["show-config", "--config", p, "--antennas", "80"]).stdout).unwrap();
    let cfg = ScenarioConfig::parse(&text).unwrap();
    assert_eq!((cfg.antenna_count, cfg.exponent_v), (80, 3.0));

    let env_only = Command::new(env!("CARGO_BIN_EXE_ringmimo"))
        .args(["show-config"])
        .env(SEED_ENV, "31337")
        .output()
        .unwrap();
    let cfg = ScenarioConfig::parse(&String::from_utf8(env_only.stdout).unwrap()).unwrap();
    assert_eq!(cfg.master_seed, 31337);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_ringmimo"))
        .args(["show-config", "--seed", "5"])
        .env(SEED_ENV, "31337")
        .output()
        .unwrap();
    let cfg = ScenarioConfig::parse(&String::from_utf8(flag_wins.stdout).unwrap()).unwrap();
    assert_eq!(cfg.master_seed, 5);
}

#[test]
fn rate_user_defaults_agree_with_asymptote() {
    let text = run_lib(&["rate-user", "--trials", "2000"]).unwrap();
    let asy = field(&text, "asymptotic").unwrap();
    let mc = field(&text, "mc").unwrap();
    assert!((mc - asy).abs() <= 0.02 * asy, "mc {mc} vs asymptote {asy}");
    assert!(text.contains("ordering = b1_upper"));
    assert_eq!(field(&text, "user_radius_m"), Some(300.0));
}

#[test]
fn zero_trials_omits_monte_carlo_fields() {
    let text = run_lib(&["rate-user", "--trials", "0"]).unwrap();
    assert!(field(&text, "asymptotic").is_some());
    assert!(!text.contains("mc"));
    let text = run_lib(&["rate-average", "--trials", "0"]).unwrap();
    for key in ["bar_b1", "bar_b2", "quadrature", "quadrature_err"] {
        assert!(field(&text, key).is_some(), "{key}");
    }
    assert!(!text.contains("mc"));
}

#[test]
fn rate_average_emits_all_fields() {
    let text = run_lib(&["rate-average", "--trials", "200"]).unwrap();
    for key in [
        "bar_b1",
        "bar_b2",
        "quadrature",
        "quadrature_err",
        "mc",
        "mc_half_width",
    ] {
        assert!(field(&text, key).is_some(), "{key} missing from {text}");
    }
}

#[test]
fn singular_user_and_bad_config_exit_one() {
    let out = bin(&["rate-user", "--user-radius", "500", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));

    let out = bin(&["rate-user", "--exponent", "7", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exponent_v"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "ring_radius_m = 1500\n").unwrap();
    let out = bin(&[
        "rate-average",
        "--trials",
        "0",
        "--config",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = bin(&["sweep", "--axis", "sideways", "--values", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn optimize_reports_ratio_and_limit() {
    let text = run_lib(&["optimize", "--exponent", "3.5"]).unwrap();
    assert!((field(&text, "ratio").unwrap() - 0.758).abs() <= 0.002);
    let text = run_lib(&["optimize", "--exponent", "2"]).unwrap();
    assert!((field(&text, "ratio").unwrap() - 0.5f64.sqrt()).abs() < 1e-9);
    assert!(text.contains("limit = true"));
    let text = run_lib(&["optimize", "--exponent", "6"]).unwrap();
    assert!((field(&text, "ratio").unwrap() - 0.773).abs() <= 0.001);
}

fn csv_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn ring_radius_sweep_peaks_near_three_quarters() {
    let csv = run_lib(&[
        "sweep",
        "--axis",
        "ring_radius",
        "--from",
        "0",
        "--to",
        "990",
        "--steps",
        "100",
        "--antennas",
        "150",
        "--power-db",
        "20",
        "--trials",
        "0",
    ])
    .unwrap();
    let rows = csv_rows(&csv);
    assert_eq!(rows[0][0], "ring_radius_m");
    assert_eq!(rows.len(), 101);
    // r = 0 has no closed-form average: empty cells and a note.
    assert!(rows[1][2].is_empty() && !rows[1][6].is_empty());
    let best = rows[1..]
        .iter()
        .filter(|r| !r[2].is_empty())
        .max_by(|a, b| {
            a[2].parse::<f64>()
                .unwrap()
                .total_cmp(&b[2].parse().unwrap())
        })
        .unwrap();
    let r: f64 = best[0].parse().unwrap();
    assert!((r - 750.0).abs() <= 20.0, "argmax at {r}");
    assert!(!csv.to_lowercase().contains("nan") && !csv.contains("inf"));
}

#[test]
fn singular_sweep_rows_are_marked_not_nan() {
    let csv = run_lib(&[
        "sweep",
        "--axis",
        "user_radius",
        "--values",
        "700,500,300,300",
        "--trials",
        "20",
    ])
    .unwrap();
    let rows = csv_rows(&csv);
    let values: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(values, ["300", "500", "700"]);
    assert!(rows[2][1..6].iter().all(String::is_empty));
    assert!(rows[2][6].contains("singular"));
    assert!(!csv.to_lowercase().contains("nan"));
    assert!(run_lib(&["sweep", "--axis", "user_radius", "--values", "500"]).is_err());
    assert_eq!(
        bin(&["sweep", "--axis", "user_radius", "--values", "500"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn sweep_output_is_stable() {
    let args = [
        "sweep",
        "--axis",
        "power_db",
        "--values",
        "4,14",
        "--antennas",
        "60",
        "--trials",
        "100",
        "--seed",
        "3",
    ];
    let a = run_lib(&args).unwrap();
    let b = run_lib(&args).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("power_db,asymptotic_bits,b1_bits,b2_bits,mc_bits,mc_half_width,note\n"));
}

#[test]
fn validate_passes_fast_criteria_and_fails_on_corrupted_coefficient() {
    let out = bin(&["validate", "--only", "1,3,8"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert!(lines
        .iter()
        .all(|l| l["passed"] == true && l["measured"].is_object()));

    let out = bin(&["validate", "--only", "2,3", "--corrupt-coefficient", "1.6"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.contains("\"passed\":false")));
}

#[test]
fn verdicts_do_not_depend_on_seed() {
    let verdicts = |seed| {
        let opts = ValidateOptions {
            master_seed: seed,
            trials: 2000,
            only: Some(vec![5, 6, 11]),
            ..ValidateOptions::default()
        };
        run_all(&opts, |_| {})
            .iter()
            .map(|o| o.passed)
            .collect::<Vec<_>>()
    };
    let base = verdicts(1);
    assert_eq!(base, [true, true, true]);
    assert_eq!(verdicts(2), base);
    assert_eq!(verdicts(987_654_321), base);
}
