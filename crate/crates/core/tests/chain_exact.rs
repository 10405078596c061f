use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resind::chain::{
    explicit_entry, step, step_distribution, verify_detailed_balance, verify_explicit_entries,
    verify_spectrum, ChainMatrices,
};
use resind::scalar::factorial;
use resind::{Error, FiniteGroupTable, MultiDiagram};

fn tables() -> Vec<(FiniteGroupTable, usize)> {
    vec![
        (FiniteGroupTable::trivial(), 5),
        (FiniteGroupTable::builtin("cyclic(2)").unwrap(), 5),
        (FiniteGroupTable::builtin("s3").unwrap(), 3),
        (FiniteGroupTable::builtin("dihedral(4)").unwrap(), 3),
    ]
}

#[test]
fn matrices_are_stochastic_and_factorize() {
    for (t, max_n) in tables() {
        for n in 1..=max_n {
            let cm = ChainMatrices::build(n, &t).unwrap();
            assert!(
                cm.stochasticity_violations().is_empty(),
                "{} n={n}",
                t.name()
            );
            let total: BigRational = cm.stationary.iter().cloned().sum();
            assert!(total.is_one());
        }
    }
}

#[test]
fn detailed_balance_and_explicit_entries() {
    for (t, max_n) in tables() {
        for n in 1..=max_n {
            let cm = ChainMatrices::build(n, &t).unwrap();
            let db = verify_detailed_balance(&cm);
            assert!(db.passed(), "{:?}", db.failures);
            let ex = verify_explicit_entries(&cm).unwrap();
            assert!(ex.passed(), "{} n={n}: {:?}", t.name(), ex.failures);
        }
    }
}

#[test]
fn spectrum_matches_character_columns() {
    for (t, max_n) in tables() {
        for n in 1..=max_n {
            let cm = ChainMatrices::build(n, &t).unwrap();
            let r = verify_spectrum(&cm).unwrap();
            assert!(r.passed(), "{} n={n}: {:?}", t.name(), r.failures);
            assert!(r.checked > 0);
        }
    }
}

#[test]
fn spectrum_examples() {
    let t = FiniteGroupTable::trivial();
    let cm = ChainMatrices::build(2, &t).unwrap();
    // v = (1, -1) has eigenvalue 0
    let v = [BigRational::one(), -BigRational::one()];
    for i in 0..2 {
        let pv: BigRational = (0..2).map(|j| cm.p.get(i, j) * v[j].clone()).sum();
        assert!(pv.is_zero());
    }
}

#[test]
fn sampler_factorization_matches_matrix_rows() {
    for (t, max_n) in tables() {
        for n in 1..=max_n.min(4) {
            let cm = ChainMatrices::build(n, &t).unwrap();
            for (i, lambda) in cm.states.iter().enumerate() {
                let row = step_distribution(lambda, &t);
                let expected: BTreeMap<MultiDiagram, BigRational> =
                    cm.p.row(i)
                        .iter()
                        .map(|(j, v)| (cm.states[*j].clone(), v.clone()))
                        .collect();
                assert_eq!(row, expected);
            }
        }
    }
}

#[test]
fn plancherel_normalization() {
    let z2 = FiniteGroupTable::builtin("cyclic(2)").unwrap();
    let s3 = FiniteGroupTable::builtin("s3").unwrap();
    for t in [FiniteGroupTable::trivial(), z2, s3] {
        for n in 0..=6 {
            let total: BigInt = MultiDiagram::enumerate(n, t.num_irreps())
                .iter()
                .map(|l| l.dim(&t).pow(2))
                .sum();
            assert_eq!(
                total,
                factorial(n as u64) * BigInt::from(t.order()).pow(n as u32)
            );
        }
    }
}

#[test]
fn branching_identities() {
    for t in [
        FiniteGroupTable::trivial(),
        FiniteGroupTable::builtin("cyclic(2)").unwrap(),
    ] {
        for n in 1..=8 {
            for lambda in MultiDiagram::enumerate(n, t.num_irreps()) {
                let down: BigInt = lambda
                    .cells()
                    .iter()
                    .map(|(nu, z)| BigInt::from(t.dim(*z)) * nu.dim(&t))
                    .sum();
                assert_eq!(down, lambda.dim(&t));
            }
            for nu in MultiDiagram::enumerate(n - 1, t.num_irreps()) {
                let up: BigInt = nu
                    .covers()
                    .iter()
                    .map(|(mu, z)| BigInt::from(t.dim(*z)) * mu.dim(&t))
                    .sum();
                assert_eq!(up, BigInt::from(n as u64 * t.order()) * nu.dim(&t));
            }
        }
    }
}

#[test]
fn single_box_chain_is_fixed() {
    let t = FiniteGroupTable::trivial();
    let one = MultiDiagram::parse("1", &t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        assert_eq!(step(&one, &t, &mut rng), one);
    }
}

/// Pearson statistic against the exact row; 99.9% quantiles of chi-square
/// for up to 12 degrees of freedom.
#[test]
fn step_frequencies_match_rows() {
    const CHI2_999: [f64; 13] = [
        0.0, 10.83, 13.82, 16.27, 18.47, 20.52, 22.46, 24.32, 26.12, 27.88, 29.59, 31.26, 32.91,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (t, max_n) in tables().into_iter().take(2) {
        for n in 2..=max_n.min(4) {
            let cm = ChainMatrices::build(n, &t).unwrap();
            for (i, lambda) in cm.states.iter().enumerate() {
                let draws = 20_000;
                let mut counts = vec![0usize; cm.states.len()];
                for _ in 0..draws {
                    let mu = step(lambda, &t, &mut rng);
                    counts[cm.state_index(&mu).unwrap()] += 1;
                }
                let mut stat = 0.0;
                let mut cells = 0;
                for (j, c) in counts.iter().enumerate() {
                    let p: f64 = num_traits::ToPrimitive::to_f64(&cm.p.get(i, j)).unwrap();
                    if p == 0.0 {
                        assert_eq!(*c, 0);
                        continue;
                    }
                    let e = p * draws as f64;
                    stat += (*c as f64 - e).powi(2) / e;
                    cells += 1;
                }
                assert!(
                    stat < CHI2_999[cells - 1],
                    "{} n={n} from {lambda}: chi2 = {stat}",
                    t.name()
                );
            }
        }
    }
}

#[test]
fn two_box_step_is_fair() {
    let t = FiniteGroupTable::trivial();
    let two = MultiDiagram::parse("2", &t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let draws = 100_000;
    let stay = (0..draws)
        .filter(|_| step(&two, &t, &mut rng) == two)
        .count() as f64
        / draws as f64;
    let se = (0.25f64 / draws as f64).sqrt();
    assert!((stay - 0.5).abs() < 3.0 * se, "{stay}");
}

#[test]
fn explicit_entry_zero_for_far_states() {
    let z2 = FiniteGroupTable::builtin("cyclic(2)").unwrap();
    let a = MultiDiagram::parse("1:3;chi1:-", &z2).unwrap();
    let b = MultiDiagram::parse("1:1;chi1:2", &z2).unwrap();
    assert!(explicit_entry(&a, &b, &z2).unwrap().is_zero());
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

#[test]
fn two_box_chain() {
    let cm = ChainMatrices::build(2, &FiniteGroupTable::trivial()).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(cm.p.get(i, j), q(1, 2));
        }
    }
}

#[test]
fn three_box_stationary() {
    let cm = ChainMatrices::build(3, &FiniteGroupTable::trivial()).unwrap();
    assert_eq!(cm.stationary, vec![q(1, 6), q(2, 3), q(1, 6)]);
    assert!(cm.stochasticity_violations().is_empty());
}

#[test]
fn cap_is_enforced() {
    assert!(matches!(
        ChainMatrices::build(9, &FiniteGroupTable::trivial()),
        Err(Error::CapExceeded { n: 9, cap: 8 })
    ));
}

#[test]
fn explicit_examples() {
    let t = FiniteGroupTable::trivial();
    let m = |s: &str| MultiDiagram::parse(s, &t).unwrap();
    assert_eq!(explicit_entry(&m("2,1"), &m("3"), &t).unwrap(), q(1, 6));
    assert_eq!(explicit_entry(&m("2"), &m("2"), &t).unwrap(), q(1, 2));
    assert_eq!(explicit_entry(&m("4"), &m("2,2"), &t).unwrap(), q(0, 1));
}

#[test]
fn perturbed_matrix_fails_balance() {
    let mut cm = ChainMatrices::build(3, &FiniteGroupTable::trivial()).unwrap();
    let v = cm.p.get(0, 1) + q(1, 100);
    cm.p.set(0, 1, v);
    let report = verify_detailed_balance(&cm);
    assert!(!report.passed());
    assert!(report.failures[0].contains("(3)"));
}
