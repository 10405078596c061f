use std::time::{Duration, Instant};

use resind::verify::{noncrossing_moments, run_all, VerifyConfig};
use resind::{BigRational, CumulantSeq, FiniteGroupTable};

#[test]
fn default_suites_pass() {
    let summary = run_all(&VerifyConfig::default()).unwrap();
    for r in summary.failed() {
        eprintln!("{}: {:?}", r.name, r.failures);
    }
    assert!(summary.passed());
    assert!(summary.reports.len() >= 30);
    assert!(
        summary.reports.iter().all(|r| r.checked > 0),
        "an identity was never exercised"
    );
}

#[test]
fn injected_fault_is_caught() {
    let config = VerifyConfig {
        inject_fault: true,
        ..VerifyConfig::single(FiniteGroupTable::trivial(), 3).unwrap()
    };
    let summary = run_all(&config).unwrap();
    assert!(!summary.passed());
    let failed: Vec<&str> = summary.failed().map(|r| r.name.as_str()).collect();
    assert!(
        failed.iter().any(|n| n.starts_with("rows of P")),
        "{failed:?}"
    );
    assert!(
        failed.iter().any(|n| n.starts_with("detailed balance")),
        "{failed:?}"
    );
}

#[test]
fn cyclic2_up_to_six_within_budget() {
    let start = Instant::now();
    let summary =
        run_all(&VerifyConfig::single(FiniteGroupTable::cyclic(2).unwrap(), 6).unwrap()).unwrap();
    assert!(summary.passed());
    assert!(
        start.elapsed() < Duration::from_secs(60),
        "took {:?}",
        start.elapsed()
    );
}

#[test]
fn inexact_tables_are_rejected() {
    assert!(VerifyConfig::single(FiniteGroupTable::cyclic(3).unwrap(), 3).is_err());
    assert!(VerifyConfig::single(FiniteGroupTable::trivial(), 0).is_err());
}

#[test]
fn noncrossing_counts_are_catalan() {
    let ones = CumulantSeq::new(vec![BigRational::from_integer(1.into()); 8]);
    let catalan = [1, 2, 5, 14, 42, 132, 429, 1430];
    let m = noncrossing_moments(&ones, 8);
    for (k, c) in catalan.iter().enumerate() {
        assert_eq!(m[k], BigRational::from_integer((*c).into()));
    }
}
