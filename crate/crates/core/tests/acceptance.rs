//! The acceptance suite as an integration test: one line per criterion.

use corolla_core::acceptance::run_all;

#[test]
fn acceptance_suite() {
    let workers = std::env::var("COROLLA_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let report = run_all(workers);
    for c in &report.criteria {
        println!(
            "criterion {:>2} [{}] {} (checked {})",
            c.id,
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.checked
        );
        if let Some(v) = &c.violation {
            println!("              witness: {v}");
        }
    }
    assert!(
        report.pass,
        "acceptance criteria failed: {:?}",
        report
            .criteria
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id)
            .collect::<Vec<_>>()
    );
}
