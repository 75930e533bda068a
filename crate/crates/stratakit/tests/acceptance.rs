//! Runs every acceptance criterion and prints one pass/fail line each.
//! The seed, sample sizes and time limits are the ones pinned in `selftest`.

use stratakit::selftest::{run, suite, DEFAULT_SEED};

#[test]
fn acceptance() {
    let ids = suite("all").expect("known suite");
    println!("\nseed {DEFAULT_SEED}");
    let outcomes = run(&ids, DEFAULT_SEED, |o| println!("{}", o.line()));
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
