//! The acceptance suite: one pass/fail line per criterion.

use fthms::harness::acceptance::Suite;

#[test]
fn acceptance() {
    let suite = Suite::new();
    let results = suite.run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
