//! Experiment drivers through the library API: float backends, argument
//! validation and report persistence.

use stickysim::experiments::{
    run_example3_nonuniqueness, run_example4_nonexistence, run_jeps_sweep, run_property_suite, Report,
};
use stickysim::Error;
use stickysim_core::constructions::TailParams;
use stickysim_core::{Backend, Rational, Scalar};

fn assert_passes(report: &Report) {
    let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    assert!(
        report.pass && failed.is_empty(),
        "{}: failed {failed:?}",
        report.experiment
    );
}

#[test]
fn cascade_in_floating_point() {
    let report = run_example3_nonuniqueness(&[3, 4, 5], 7, Backend::Float).unwrap();
    assert_eq!(report.backend, "float");
    assert_passes(&report);
}

#[test]
fn bullets_in_floating_point() {
    let report = run_example4_nonexistence(&TailParams::reference(), &[3, 4, 5], Backend::Float).unwrap();
    assert_passes(&report);
    let table = &report.cases.last().unwrap().details;
    assert!(table.to_string().contains("hit"), "{table}");
}

#[test]
fn discounted_energy_in_floating_point() {
    let report = run_jeps_sweep(&TailParams::reference(), 3, &[10.0, 0.01], Backend::Float).unwrap();
    assert_passes(&report);
}

#[test]
fn invalid_arguments_are_rejected() {
    assert!(matches!(
        run_example3_nonuniqueness(&[1], 1, Backend::Rational),
        Err(Error::Usage(_))
    ));
    let p = TailParams::reference();
    assert!(matches!(
        run_example4_nonexistence(&p, &[2], Backend::Rational),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        run_jeps_sweep(&p, 7, &[1.0], Backend::Rational),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        run_jeps_sweep(&p, 3, &[], Backend::Rational),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        run_jeps_sweep(&p, 3, &[-1.0], Backend::Rational),
        Err(Error::Usage(_))
    ));
    let bad = TailParams::new(
        Rational::from_ratio(3, 5),
        Rational::from_ratio(1, 2),
        Rational::from_ratio(3, 4),
    );
    assert!(matches!(
        run_example4_nonexistence(&bad, &[3], Backend::Rational),
        Err(Error::Core(_))
    ));
}

#[test]
fn reports_are_named_by_parameters() {
    let a = run_property_suite(3, 6).unwrap();
    let b = run_property_suite(3, 6).unwrap();
    let c = run_property_suite(4, 6).unwrap();
    assert_passes(&a);
    assert_eq!(a.file_name(), b.file_name());
    assert_ne!(a.file_name(), c.file_name());
    assert!(a.file_name().starts_with("properties-") && a.file_name().ends_with(".json"));

    let dir = tempfile::TempDir::new().unwrap();
    let path = a.persist(dir.path()).unwrap();
    assert_eq!(std::fs::read_to_string(path).unwrap(), a.to_json().unwrap());
}
