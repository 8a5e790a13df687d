//! The aggregated seeded property suite must pass end to end, and must be
//! deterministic for a fixed seed.

use ramlab_core::checks::run_all;

#[test]
fn full_suite_passes() {
    let report = run_all(0);
    for r in &report.results {
        println!(
            "[check] {} ({} cases): {}",
            r.name,
            r.cases,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    assert!(report.pass);
}

#[test]
fn suite_is_deterministic() {
    let a = serde_json::to_string(&run_all(42)).unwrap();
    let b = serde_json::to_string(&run_all(42)).unwrap();
    assert_eq!(a, b);
}
