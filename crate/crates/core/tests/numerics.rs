use num_bigint::BigInt;
use num_traits::Zero;
use resind::quad::*;
use resind::scalar::*;
use resind::{AtomicMeasure, BigRational};

#[test]
fn merging_and_moments() {
    let m = AtomicMeasure::new(vec![(1.0, 0.25), (-1.0, 0.5), (1.0, 0.25), (3.0, 0.0)]);
    assert_eq!(m.atoms().len(), 2);
    assert_eq!(m.total_mass(), 1.0);
    assert_eq!(m.mean(), 0.0);
    assert_eq!(m.variance(), 1.0);
}

#[test]
fn exact_two_atom_cumulants() {
    let half = BigRational::from_ratio(1, 2);
    let m = AtomicMeasure::new(vec![
        (BigRational::from_i64(-1), half.clone()),
        (BigRational::from_i64(1), half),
    ]);
    let r = m.free_cumulants(4);
    assert_eq!(r.get(4), BigRational::from_i64(-1));
    assert_eq!(r.get(2), BigRational::from_i64(1));
}

#[test]
fn polynomial_is_exact() {
    let v = integrate(|x| x * x * x - 2.0 * x, -1.0, 3.0, QuadOptions::default()).unwrap();
    assert!((v - 12.0).abs() < 1e-12);
}

#[test]
fn cauchy_on_half_line() {
    let v = integrate_to_infinity(|u| 1.0 / (1.0 + u * u), 0.0, QuadOptions::default()).unwrap();
    assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
}

#[test]
fn gaussian_normalizes() {
    let v = integrate_to_infinity(gaussian_density, 0.0, QuadOptions::default()).unwrap();
    assert!((2.0 * v - 1.0).abs() < 1e-10);
    assert!((gaussian_central_mass(1.0) - 0.682_689_492_137_085_9).abs() < 1e-12);
}

#[test]
fn sqrt_endpoint_singularity() {
    let v = integrate(|x| x.sqrt(), 0.0, 1.0, QuadOptions::default()).unwrap();
    assert!((v - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn falling_factorial_basics() {
    assert_eq!(falling_factorial(5, 2), BigInt::from(20));
    assert_eq!(falling_factorial(3, 4), BigInt::zero());
    assert_eq!(falling_factorial(4, 0), BigInt::from(1));
    assert_eq!(factorial(6), BigInt::from(720));
}

#[test]
fn rational_formatting() {
    let q = BigRational::from_ratio(-3, 6);
    assert_eq!(fmt_rational(&q), "-1/2");
    let z = ExactComplex::new(
        BigRational::from_ratio(1, 2),
        BigRational::from_ratio(-1, 3),
    );
    assert_eq!(fmt_exact_complex(&z), "1/2-1/3i");
}

#[test]
fn from_f64_is_exact_for_rationals() {
    let q = <BigRational as Scalar>::from_float(0.375);
    assert_eq!(q, BigRational::from_ratio(3, 8));
}
