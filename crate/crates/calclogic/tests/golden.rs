//! Every fixture's expected-verdict table against the engine.

use calclogic::fixture::{fixture, fixture_names, Origin};
use calclogic::golden::run_all;
use calclogic_core::Budget;

#[test]
fn every_expectation_holds() {
    let mut failures = Vec::new();
    let mut total = 0;
    for name in fixture_names() {
        let fx = fixture(name).unwrap();
        for r in run_all(&fx, &Budget::default()) {
            total += 1;
            if !r.passed {
                failures.push(format!("{name}: {} [{:?}] observed {}", r.description, r.origin, r.observed));
            }
        }
    }
    assert!(total > 0);
    assert!(failures.is_empty(), "{} of {total} failed:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn every_fixture_has_worked_or_derived_rows() {
    for name in fixture_names() {
        let fx = fixture(name).unwrap();
        assert!(
            fx.expectations.iter().any(|e| e.origin() != Origin::Trivial),
            "{name} only has trivial expectations"
        );
    }
}
