//! Acceptance criterion 10: the CLI pseudonorm experiment end to end.

use std::process::Command;
use std::time::Instant;

#[test]
fn criterion_10_kobayashi_cli() {
    let start = Instant::now();
    let out_dir = std::env::temp_dir().join("dbar-lab-acceptance-kobayashi");
    let _ = std::fs::remove_dir_all(&out_dir);

    let output = Command::new(env!("CARGO_BIN_EXE_dbar-lab"))
        .args([
            "verify",
            "--suite",
            "kobayashi",
            "--alpha",
            "0.5",
            "--b",
            "0.01",
            "--out",
        ])
        .arg(&out_dir)
        .output()
        .expect("failed to run the binary");
    let stdout = String::from_utf8_lossy(&output.stdout);
    println!("{stdout}");
    assert!(
        output.status.success(),
        "verify --suite kobayashi must exit 0, got {:?}; stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );

    // The contradiction is reproduced: sup|f| > S = 1/4.
    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("reports.json")).unwrap())
            .unwrap();
    let main = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check_id"] == "kobayashi-experiment")
        .expect("missing experiment report");
    assert_eq!(main["status"], "pass");
    assert!(main["margin"].as_f64().unwrap() > 0.0);
    assert_eq!(main["params"]["S_alpha"].as_f64().unwrap(), 0.25);

    // The bound pair is reported: lower 3/(4 sqrt 2) ~ 0.53, upper 1/2.
    assert!(stdout.contains("lower 0.530330"));
    assert!(stdout.contains("upper 0.5"));
    // The quantifier gap is stated in the report itself.
    assert!(main["notes"]
        .as_str()
        .unwrap()
        .contains("infimum over all disks is not computed"));

    let elapsed = start.elapsed().as_secs_f64();
    println!("[acceptance] criterion 10 (kobayashi CLI): PASS ({elapsed:.1}s, budget 120s)");
    assert!(elapsed < 120.0);
}
