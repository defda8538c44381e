#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_octic-cert"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn temp_path(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(format!("{name}-{}", std::process::id()));
    let _ = std::fs::remove_file(&path);
    path
}

/// `"[x, y]"` as the projective `"(x : y : 1)"`, with `y ≥ 0` so that a
/// point and its negative agree.
pub fn up_to_sign(p: &str) -> String {
    let inner = p.trim_matches(|c| c == '[' || c == ']' || c == '(' || c == ')');
    let parts: Vec<&str> = inner.split([',', ':']).map(str::trim).collect();
    format!("({} : {} : 1)", parts[0], parts[1].trim_start_matches('-'))
}

pub fn magma_model(coeffs: &[Value]) -> String {
    let c: Vec<i64> = coeffs
        .iter()
        .map(|v| v.as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!((c[0], c[2]), (0, 0), "short form only");
    let mut s = String::from("y^2 = x^3");
    for (coef, mon) in [(c[1], "x^2"), (c[3], "x"), (c[4], "")] {
        if coef == 0 {
            continue;
        }
        let sign = if coef < 0 { " - " } else { " + " };
        let abs = coef.abs();
        let term = match (abs, mon) {
            (1, "") => "1".to_string(),
            (1, m) => m.to_string(),
            (a, "") => a.to_string(),
            (a, m) => format!("{a}*{m}"),
        };
        s.push_str(sign);
        s.push_str(&term);
    }
    s
}

pub fn canonical(mut golden: Value) -> String {
    let pts = golden["integral_points"].as_array().unwrap();
    let mut pts: Vec<String> = pts
        .iter()
        .map(|p| up_to_sign(p.as_str().unwrap()))
        .collect();
    pts.sort();
    golden["integral_points"] = json!(pts);
    serde_json::to_string_pretty(&golden).unwrap()
}

/// The `curve-report` and `points --height 1000` outputs projected onto the
/// golden file's keys, next to the golden file itself, both canonical.
pub fn transcript_pair() -> (String, String) {
    let report = run(&["curve-report"]);
    assert_eq!(code(&report), 0);
    let report = json_of(&report);
    let points = run(&["points", "--height", "1000"]);
    assert_eq!(code(&points), 0);
    let points = json_of(&points);

    let integral: Vec<String> = report["integral_points"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| up_to_sign(p.as_str().unwrap()))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let curve: Vec<i64> = report["curve"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().parse().unwrap())
        .collect();
    let projected = json!({
        "conductor": report["conductor"],
        "cremona_reference": report["cremona_reference"],
        "curve": curve,
        "integral_points": integral,
        "isomorphic_to_jacobian": report["quartic"]["isomorphic_to_curve"],
        "minimal_model": magma_model(report["minimal_model"].as_array().unwrap()),
        "rank": report["rank"],
        "rank_proved": report["rank_bounds"]["conclusion"] == "rank_zero_proved",
        "rational_points": points["points"],
        "torsion_invariants": report["torsion"]["invariants"],
    });

    let golden: Value = serde_json::from_str(include_str!("../golden/transcript.json")).unwrap();
    (canonical(projected), canonical(golden))
}
