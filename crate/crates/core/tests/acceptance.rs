use std::io::Write;

use ringlaw::validation::{run, ValidationConfig};

#[test]
fn acceptance() {
    let report = run(&ValidationConfig::default()).expect("suite configuration");
    // Written to the handle directly so the lines survive output capture.
    let mut out = std::io::stdout().lock();
    for c in &report.criteria {
        writeln!(
            out,
            "[{}] {:>4} {:<11} {:<62} measured {:<12.4e} threshold {:.1e}{}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.group,
            c.name,
            c.measured,
            c.threshold,
            c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        )
        .unwrap();
    }
    let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
