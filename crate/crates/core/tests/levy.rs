use resind::freeprob::{RTransform, C64};
use resind::levy::*;
use resind::pausing::a_half_stable_gaussian;

#[test]
fn free_poisson_cumulants() {
    let c = levy_to_r(&LevyMeasure::atom(1.0, 1.0), 6, 0.0).unwrap();
    assert_eq!(c.values(), &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
    let c = levy_to_r(&LevyMeasure::zero(), 4, 0.0).unwrap();
    assert!(c.values().iter().all(|v| *v == 0.0));
    let c = levy_to_r(&LevyMeasure::atom(0.0, 2.0), 5, 0.0).unwrap();
    assert_eq!(c.values(), &[0.0, 2.0, 0.0, 0.0, 0.0]);
}

#[test]
fn uniform_moments() {
    let l = LevyMeasure::zero().with_uniform(0.0, 1.0, 1.0);
    for j in 0..6 {
        assert!((l.moment(j).unwrap() - 1.0 / (j as f64 + 1.0)).abs() < 1e-15);
    }
    let split = LevyMeasure::zero().with_uniform(-1.0, 2.0, 0.5);
    assert_eq!(split.pieces.len(), 2);
    assert!((split.moment(0).unwrap() - 1.5).abs() < 1e-15);
}

#[test]
fn series_agrees_with_closed_form_near_zero() {
    let l = LevyMeasure::atom(0.5, 0.3).with_uniform(-0.4, 0.0, 0.7);
    let r = LevyRTransform::new(l.clone(), 0.1).unwrap();
    let c = levy_to_r(&l, 30, 0.1).unwrap();
    let w = C64::new(0.2, -0.3);
    assert!((r.eval(w) - c.eval(w)).norm() < 1e-12);
    assert!((r.derivative(w) - c.derivative(w)).norm() < 1e-10);
}

#[test]
fn zero_measure_stable_flow_is_pure_delta() {
    let l = levy_flow_stable(&LevyMeasure::zero(), 1.0, 0.5).unwrap();
    assert!(l.pieces.is_empty());
    let a1 = a_half_stable_gaussian(1, 1.0).unwrap();
    assert!((l.moment(0).unwrap() - 0.5 * (1.0 - a1)).abs() < 1e-15);
}
