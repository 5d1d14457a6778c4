use std::collections::HashMap;
use std::fs;
use std::process::{Command, Output};

fn mgtf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgtf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Keys may carry `[...=...]` indices; values may contain `=`.
fn split_entry(line: &str) -> Option<(&str, &str)> {
    let start = match (line.find('['), line.find('=')) {
        (Some(b), Some(e)) if b < e => line.find(']')?,
        _ => 0,
    };
    let i = start + line[start..].find('=')?;
    Some((&line[..i], &line[i + 1..]))
}

fn report(args: &[&str]) -> (i32, HashMap<String, String>) {
    let out = mgtf(args);
    let map = stdout(&out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(split_entry)
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    (out.status.code().unwrap(), map)
}

fn value(map: &HashMap<String, String>, key: &str) -> f64 {
    map[key].parse().unwrap()
}

/// Data rows of a CSV output, header skipped.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|f| f.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

fn trailer(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key}=");
    let line = text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap();
    line.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(mgtf(&["nonsense"]).status.code(), Some(1));
    assert_eq!(mgtf(&["classify", "--alpha", "-1"]).status.code(), Some(1));
    assert_eq!(mgtf(&["classify", "--modes", "0"]).status.code(), Some(1));
    assert_eq!(
        mgtf(&["threshold", "--grid-min", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(mgtf(&["simulate", "--dt", "1"]).status.code(), Some(1));
    assert_eq!(
        mgtf(&["decay", "--grid-min", "3", "--grid-max", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(mgtf(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_reference_point() {
    let (code, r) = report(&["classify"]);
    assert_eq!(code, 0);
    assert_eq!(r["regime"], "supercritical");
    assert_eq!(r["verdict"], "stable");
    assert_eq!(r["stability_predicate"], "true");
    assert!((value(&r, "tau_star") - 0.5).abs() < 1e-10);
    assert!((value(&r, "tau") - 1.0).abs() < 1e-12);
}

#[test]
fn classify_uncoupled_is_unstable() {
    let (code, r) = report(&["classify", "--eta", "0"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "unstable");
    assert_eq!(r["stability_predicate"], "false");
}

#[test]
fn classify_subcritical_notes_scope() {
    let (_, r) = report(&["classify", "--gamma", "1"]);
    assert_eq!(r["regime"], "subcritical");
    assert!(r.contains_key("note"));
}

#[test]
fn certify_reference_is_valid_and_sound() {
    let (code, r) = report(&["certify"]);
    assert_eq!(code, 0);
    assert_eq!(r["valid"], "true");
    let cert = value(&r, "omega_cert");
    assert!(cert > 0.0 && cert <= value(&r, "omega_star"));
    let margins: Vec<f64> = r
        .iter()
        .filter(|(k, _)| k.starts_with("lyapunov_margin["))
        .map(|(_, v)| v.parse().unwrap())
        .collect();
    assert_eq!(margins.len(), 10);
    assert!(margins.iter().all(|&m| m <= 0.0));
}

#[test]
fn certify_below_threshold_reports_sigma() {
    let (code, r) = report(&["certify", "--eta", "0.5"]);
    assert_eq!(code, 0);
    assert_eq!(r["valid"], "false");
    assert!(r["reasons"].contains("sigma<=0"));
}

#[test]
fn certify_critical_case() {
    for kappa in ["0.5", "2", "8"] {
        let (_, r) = report(&["certify", "--gamma", "2", "--kappa", kappa, "--eta", "1"]);
        assert!(value(&r, "omega_cert") > 0.0, "kappa = {kappa}");
        assert_eq!(r["valid"], "true", "kappa = {kappa}");
    }
}

#[test]
fn threshold_dominates_spectral_threshold() {
    let out = mgtf(&["threshold", "--grid-steps", "25"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\nkappa,tau_theoretical,tau_theoretical_1d,tau_star,ratio\n"));
    let data = rows(&text);
    assert_eq!(data.len(), 25);
    assert!(data.iter().all(|r| r[4] > 1.0));
}

#[test]
fn decay_argmax_of_bound() {
    let out = mgtf(&[
        "decay",
        "--grid-min",
        "1",
        "--grid-max",
        "4",
        "--grid-steps",
        "301",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let eta_b = trailer(&text, "eta_b");
    assert!((1.81..=1.91).contains(&eta_b), "eta_b = {eta_b}");
    for r in rows(&text) {
        if r[2].is_finite() {
            assert!(r[2] <= r[1] + 1e-9);
        }
    }
}

#[test]
fn simulate_energy_identity_and_header() {
    let out = mgtf(&["simulate", "--modes", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\nt,u_1,v_1,w_1,theta_1,u_2,v_2,w_2,theta_2,E_total,W_total\n"));
    assert!(trailer(&text, "energy_identity_residual") < 1e-8);
    assert!(text.contains("# blow_up=false"));
}

#[test]
fn simulate_flags_blow_up() {
    let out = mgtf(&[
        "simulate", "--eta", "0.1", "--dt", "0.01", "--t-end", "20000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# blow_up=true"));
}

#[test]
fn output_is_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "4", "4"].iter().enumerate() {
        let path = dir.path().join(format!("decay{i}.csv"));
        let out = mgtf(&[
            "decay",
            "--grid-steps",
            "40",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        outputs.push(fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn every_output_starts_with_preamble() {
    for cmd in ["classify", "threshold", "decay", "certify", "oscillator"] {
        let text = stdout(&mgtf(&[cmd, "--grid-steps", "3"]));
        let lines: Vec<&str> = text.lines().take(4).collect();
        assert!(lines[0].starts_with("# mgtf "), "{cmd}");
        assert_eq!(lines[1], format!("# command: {cmd}"));
        assert!(lines[2].starts_with("# flags: --alpha 2 "));
        assert!(lines[3].starts_with("# columns: ") || lines[3] == "# format: key=value");
    }
}

#[test]
fn oscillator_report() {
    let (code, r) = report(&["oscillator"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "pass");
    assert!((value(&r, "omega_b") - (1.0 - 5f64.sqrt() / 5.0)).abs() < 1e-9);
    assert!((value(&r, "epsilon_opt") - 0.5).abs() < 1e-6);
}

#[test]
fn asymptotics_report() {
    let (code, r) = report(&["asymptotics"]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "pass");
    assert!((value(&r, "eta_probe[10000].p_value") + 1.0).abs() < 1e-3);
    assert!(value(&r, "kappa_probe[eta=1].p_value") < 0.0);
}
