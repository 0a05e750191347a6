use std::process::Command;

#[test]
fn score_command_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    let out = dir.path().join("report.json");
    let header: Vec<String> = (1..=32).map(|i| format!("q{i:02}")).collect();
    let mut text = format!("demo_group,{}\n", header.join(","));
    for r in 0..4 {
        text.push_str(&format!("g{r},{}\n", vec!["5"; 32].join(",")));
    }
    std::fs::write(&csv, text).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_coopvax-survey"))
        .args(["score", "--csv"])
        .arg(&csv)
        .args(["--alpha-px", "0.9", "--alpha-us", "0.8", "--sample-sd", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["quality_score"], 100.0);
    assert_eq!(report["classification"], "excellent");
    assert_eq!(report["sd"], "sample");
    assert_eq!(report["weights"]["alpha_px"], 0.9);
    assert!(report["formula"].as_str().unwrap().starts_with("quality_score = 100"));
    assert_eq!(report["questions"].as_array().unwrap().len(), 32);
}

#[test]
fn bad_csv_fails_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    let header: Vec<String> = (1..=32).map(|i| format!("q{i:02}")).collect();
    let mut cells = vec!["3"; 32];
    cells[2] = "9";
    std::fs::write(&csv, format!("{}\n{}\n", header.join(","), cells.join(","))).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_coopvax-survey")).args(["score", "--csv"]).arg(&csv).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 1") && err.contains("q03"), "{err}");
}
