//! Acceptance criterion for the CLI: the self-verification suite exits 0 on
//! a clean build, exits 1 under a deliberately injected B-sign fault, and
//! finishes comfortably inside its time budget.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qionss"))
}

#[test]
fn acceptance_10_cmd_verify() {
    let start = std::time::Instant::now();

    let clean = bin().arg("verify").output().unwrap();
    assert_eq!(
        clean.status.code(),
        Some(0),
        "clean verify must exit 0\n{}",
        String::from_utf8_lossy(&clean.stdout)
    );
    let report = String::from_utf8_lossy(&clean.stdout);
    let named_checks = report
        .lines()
        .filter(|l| l.trim_start().starts_with("ok") || l.trim_start().starts_with("FAIL"))
        .count();
    assert!(
        named_checks >= 10,
        "report must list at least 10 named checks, found {named_checks}"
    );

    let faulted = bin()
        .arg("verify")
        .arg("--inject-b-sign-flip")
        .output()
        .unwrap();
    assert_eq!(
        faulted.status.code(),
        Some(1),
        "B-sign fault must be detected\n{}",
        String::from_utf8_lossy(&faulted.stdout)
    );
    let report = String::from_utf8_lossy(&faulted.stdout);
    assert!(report.contains("FAIL all-pass-sweep"), "{report}");

    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < 120.0,
        "verify suite overran 2 minutes: {elapsed:.1}s"
    );
    println!(
        "PASS criterion 10 (cmd_verify): clean exit 0, injected fault exit 1, \
         {named_checks} checks in {elapsed:.1}s"
    );
}
