use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;
use resind::evolution::*;
use resind::freeprob::C64;
use resind::levy::{levy_to_r, LevyMeasure};
use resind::pausing::a_half_stable;
use resind::{BigRational, CumulantSeq, Exact, FiniteGroupTable, RSeries};

fn trivial_spec(clock: EvolutionClock, r: Vec<f64>) -> EvolutionSpec {
    EvolutionSpec::new(
        FiniteGroupTable::trivial(),
        clock,
        vec![CumulantSeq::new(r)],
    )
    .unwrap()
}

fn half_stable_oracle(k: usize, t: f64) -> f64 {
    let a = t * (k * k) as f64 / 2.0;
    a.exp() * libm::erfc(a.sqrt())
}

fn z2() -> FiniteGroupTable {
    FiniteGroupTable::cyclic(2).unwrap()
}

fn z2_params() -> PresetParams {
    PresetParams {
        r: 1.5,
        r_prime: 2.0,
        a: vec![0.25, 0.1],
        b: vec![0.15, 0.1],
        c: vec![0.55, 0.45],
    }
}

#[test]
fn zero_time_is_identity() {
    for clock in [
        EvolutionClock::Exponential { mean: 2.0 },
        EvolutionClock::StableHalf,
    ] {
        let spec = trivial_spec(clock, vec![0.0, 1.0, 0.3, -0.7, 0.2]);
        let c = evolve_cumulants(&spec, 0.0).unwrap();
        for (x, y) in c[0].values().iter().zip(spec.initial[0].values()) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn long_time_limit_is_semicircle() {
    let spec = EvolutionSpec::new(
        z2(),
        EvolutionClock::Exponential { mean: 1.0 },
        vec![
            CumulantSeq::new(vec![0.0, 0.7, 0.2, 0.4]),
            CumulantSeq::new(vec![0.0, 0.3, -0.1, 0.5]),
        ],
    )
    .unwrap();
    let c = evolve_cumulants(&spec, 60.0).unwrap();
    for seq in &c {
        assert!((seq.get(2) - 0.5).abs() < 1e-12);
        assert!(seq.get(3).abs() < 1e-12 && seq.get(4).abs() < 1e-12);
    }
}

#[test]
fn square_initial_condition_example() {
    let spec = trivial_spec(
        EvolutionClock::Exponential { mean: 1.0 },
        vec![0.0, 1.0, 0.0, -1.0],
    );
    let c = evolve_cumulants(&spec, 1.0).unwrap();
    let expected = [0.0, 1.0, 0.0, -(-3.0f64).exp()];
    for (x, y) in c[0].values().iter().zip(expected) {
        assert!((x - y).abs() < 1e-15);
    }
}

#[test]
fn exact_flow_matches_series_substitution() {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let init: CumulantSeq<Exact> =
        CumulantSeq::new(vec![q(0, 1), q(2, 3), q(1, 5), q(-3, 7), q(1, 2), q(5, 9)]);
    let sigma2 = q(1, 3);
    let c = q(2, 5);
    let a: Vec<Exact> = (1..6).map(|k| num_traits::pow(c.clone(), k)).collect();
    let flowed = evolve_cumulants_with(&init, &sigma2, &a);
    let series = r_series_exponential(&RSeries::from_cumulants(init), &sigma2, &c);
    assert_eq!(flowed.values(), series.coefficients());
    // t = 0 leaves the series alone
    let same = r_series_exponential(
        &RSeries::from_cumulants(flowed.clone()),
        &sigma2,
        &Exact::one(),
    );
    assert_eq!(same.cumulants(), &flowed);
    assert!(flowed.get(1).is_zero());
}

#[test]
fn stable_coefficients_match_half_stable_law() {
    let spec = trivial_spec(
        EvolutionClock::StableHalf,
        vec![0.0, 1.0, 0.4, -0.8, 0.3, 0.6, -0.2],
    );
    for t in [0.0, 0.3, 1.0, 3.0] {
        let series = r_transform_stable(&spec, t).unwrap();
        for k in 2..6 {
            let expected = half_stable_oracle(k, t) * spec.initial[0].get(k + 1);
            assert!(
                (series[0].coefficient(k) - expected).abs() < 1e-8,
                "t={t} k={k}"
            );
            assert!(series[0].coefficient(k).abs() <= spec.initial[0].get(k + 1).abs() + 1e-12);
        }
        assert!((series[0].coefficient(1) - 1.0).abs() < 1e-10);
    }
    let quad = a_half_stable(2, 1.0).unwrap();
    assert!((quad - half_stable_oracle(2, 1.0)).abs() < 1e-10);
}

#[test]
fn exponential_levy_flow_of_single_atom() {
    let l = levy_flow_exponential(&LevyMeasure::atom(0.5, 0.3), 0.7, 1.0, 1.0).unwrap();
    let e = (-0.7f64).exp();
    let atoms = l.atoms.atoms();
    assert!(atoms
        .iter()
        .any(|(x, m)| (x - 0.5 * e).abs() < 1e-15 && (m - 0.3 * e).abs() < 1e-15));
    assert!(atoms
        .iter()
        .any(|(x, m)| *x == 0.0 && (m - (1.0 - e)).abs() < 1e-15));
    let same = levy_flow_exponential(&LevyMeasure::atom(0.5, 0.3), 0.0, 1.0, 1.0).unwrap();
    assert_eq!(
        same.moments(4).unwrap(),
        LevyMeasure::atom(0.5, 0.3).moments(4).unwrap()
    );
}

#[test]
fn stable_levy_flow_moments() {
    let l0 = LevyMeasure::atom(0.8, 0.4)
        .with_atom(-0.5, 0.2)
        .with_uniform(0.1, 0.6, 0.5);
    let t = 0.6;
    let lt = levy_flow_stable(&l0, t, 1.0).unwrap();
    for k in 2..7 {
        let lhs = lt.moment(k as u32 - 1).unwrap();
        let rhs = half_stable_oracle(k, t) * l0.moment(k as u32 - 1).unwrap();
        assert!((lhs - rhs).abs() < 1e-6, "k={k}: {lhs} vs {rhs}");
    }
    // weak convergence as t -> 0: M_{k-1} is off by about k sqrt(2t/pi)
    let small = levy_flow_stable(&l0, 1e-4, 1.0).unwrap();
    let mass0 = l0.moment(0).unwrap();
    assert!(((small.moment(0).unwrap() - mass0) / mass0).abs() < 1e-2);
    for j in 1..6u32 {
        let (a, b) = (small.moment(j).unwrap(), l0.moment(j).unwrap());
        let rate = (j + 1) as f64 * (2e-4 / std::f64::consts::PI).sqrt();
        assert!(((a - b) / b).abs() < 1.05 * rate, "j={j}");
        let tiny = levy_flow_stable(&l0, 1e-7, 1.0).unwrap().moment(j).unwrap();
        assert!(((tiny - b) / b).abs() < 1e-2, "j={j}");
    }
    let empty = levy_flow_stable(&LevyMeasure::zero(), 1.0, 0.5).unwrap();
    assert!((empty.total_mass().unwrap() - 0.5 * (1.0 - half_stable_oracle(1, 1.0))).abs() < 1e-12);
    assert_eq!(empty.atoms.atoms().len(), 1);
}

#[test]
fn preset_p1_p2_p3_initial_data() {
    let p1 = EnsemblePreset::new(PresetKind::P1, None, FiniteGroupTable::s3()).unwrap();
    for z in 0..3 {
        let s2 = p1.sigma2(z);
        assert_eq!(p1.levy0(z).atoms.atoms(), &[(0.0, s2)]);
        let w = C64::new(0.3, 0.2);
        assert!((p1.r0(z, w) - w * s2).norm() < 1e-15);
    }

    let single = PresetParams::single(1.0, 1.0, 1.0, 0.0, 1.0);
    let p2 = EnsemblePreset::new(
        PresetKind::P2,
        Some(single.clone()),
        FiniteGroupTable::trivial(),
    )
    .unwrap();
    assert_eq!(p2.levy0(0).atoms.atoms(), &[(1.0, 1.0)]);
    let w = C64::new(0.2, -0.4);
    let one = C64::new(1.0, 0.0);
    assert!((p2.r0(0, w) - w / (one - w)).norm() < 1e-15);
    assert_eq!(
        p2.initial_cumulants(0, 6).values(),
        &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0]
    );

    let p3 =
        EnsemblePreset::new(PresetKind::P3, Some(single), FiniteGroupTable::trivial()).unwrap();
    let l = p3.levy0(0);
    assert!(l.atoms.atoms().is_empty());
    assert!((l.density(0.4) - 1.0).abs() < 1e-15 && l.density(1.2) == 0.0);
    assert!((p3.r0(0, w) + (one - w).ln()).norm() < 1e-15);
    for k in 2..7 {
        assert!((p3.initial_cumulants(0, 7).get(k) - 1.0 / (k - 1) as f64).abs() < 1e-15);
    }
}

#[test]
fn preset_constraints_are_named() {
    let t = z2();
    let mut p = z2_params();
    p.c = vec![0.5, 0.4];
    let err = EnsemblePreset::new(PresetKind::P2, Some(p), t.clone())
        .unwrap_err()
        .to_string();
    assert!(err.contains("sum of c_zeta"), "{err}");
    let mut p = z2_params();
    p.a[1] = 0.4;
    let err = EnsemblePreset::new(PresetKind::P3, Some(p), t.clone())
        .unwrap_err()
        .to_string();
    assert!(err.contains("a_zeta + b_zeta <= c_zeta"), "{err}");
    let mut p = z2_params();
    p.r = -1.0;
    assert!(EnsemblePreset::new(PresetKind::P3, Some(p), t.clone()).is_err());
    assert!(EnsemblePreset::new(PresetKind::P2, None, t).is_err());
}

#[test]
fn closed_forms_commute_with_generic_flows() {
    let table = z2();
    let order = 8;
    for kind in [PresetKind::P2, PresetKind::P3] {
        let preset = EnsemblePreset::new(kind, Some(z2_params()), table.clone()).unwrap();
        let m = 1.3;
        let exp_spec = preset
            .spec(EvolutionClock::Exponential { mean: m }, order)
            .unwrap();
        let stab_spec = preset.spec(EvolutionClock::StableHalf, order).unwrap();
        for z in 0..2 {
            let from_levy = levy_to_r(&preset.levy0(z), order, 0.0).unwrap();
            for k in 1..=order {
                assert!((from_levy.get(k) - exp_spec.initial[z].get(k)).abs() < 1e-12);
            }
        }
        for t in [0.3, 1.0, 3.0] {
            let exp_generic = evolve_cumulants(&exp_spec, t).unwrap();
            let stab_generic = evolve_cumulants(&stab_spec, t).unwrap();
            let exp_levy = levy_flow(&exp_spec, t).unwrap();
            let stab_levy = levy_flow(&stab_spec, t).unwrap();
            for z in 0..2 {
                let re = preset.exponential_coefficients(z, t, m, order - 1).unwrap();
                let rs = preset.stable_coefficients(z, t, order - 1).unwrap();
                for k in 0..order - 1 {
                    assert!(
                        (re.get(k + 1) - exp_generic[z].get(k + 1)).abs() < 1e-8,
                        "{kind:?} RE t={t} k={k}"
                    );
                    assert!(
                        (rs.get(k + 1) - stab_generic[z].get(k + 1)).abs() < 1e-8,
                        "{kind:?} RS t={t} k={k}"
                    );
                }
                let le = preset.levy_exponential(z, t, m).moments(6).unwrap();
                let ls = preset.levy_stable(z, t).unwrap().moments(6).unwrap();
                let ge = exp_levy[z].moments(6).unwrap();
                let gs = stab_levy[z].moments(6).unwrap();
                for j in 0..=6 {
                    assert!((le[j] - ge[j]).abs() < 1e-6, "{kind:?} LE t={t} j={j}");
                    assert!(
                        (ls[j] - gs[j]).abs() < 1e-6,
                        "{kind:?} LS t={t} j={j}: {} vs {}",
                        ls[j],
                        gs[j]
                    );
                }
                // moments of the flowed measure are the evolved cumulants
                for k in 2..=order {
                    assert!((ge[k - 2] - exp_generic[z].get(k)).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn levy_diagram_commutes_for_both_clocks() {
    let table = z2();
    let l0 = vec![
        LevyMeasure::atom(0.4, 0.3)
            .with_atom(0.0, 0.1)
            .with_uniform(-0.3, 0.2, 0.5),
        LevyMeasure::atom(-0.6, 0.2).with_uniform(0.1, 0.5, 0.375),
    ];
    let order = 7;
    let initial: Vec<_> = l0
        .iter()
        .map(|l| levy_to_r(l, order, 0.0).unwrap())
        .collect();
    for clock in [
        EvolutionClock::Exponential { mean: 0.8 },
        EvolutionClock::StableHalf,
    ] {
        let spec = EvolutionSpec::new(table.clone(), clock, initial.clone())
            .unwrap()
            .with_levy(l0.clone())
            .unwrap();
        for t in [0.2, 1.5] {
            let via_levy = levy_flow_cumulants(&spec, t, order).unwrap();
            let via_cumulants = evolve_cumulants(&spec, t).unwrap();
            for z in 0..2 {
                for k in 2..=order {
                    assert!(
                        (via_levy[z].get(k) - via_cumulants[z].get(k)).abs() < 1e-7,
                        "{clock:?} t={t} k={k}"
                    );
                }
            }
            let total: f64 = via_cumulants.iter().map(|c| c.get(2)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn pde_residual_examples() {
    let planch = trivial_spec(EvolutionClock::Exponential { mean: 1.0 }, vec![0.0, 1.0]);
    let r = pde_residual(&planch, 0, 0.5, Complex::new(1.0, 1.0), 1e-3).unwrap();
    assert!(r.norm() < 1e-6, "{r}");

    let square = trivial_spec(
        EvolutionClock::Exponential { mean: 1.0 },
        vec![0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
    );
    let r3 = pde_residual(&square, 0, 0.5, Complex::new(0.0, 2.0), 1e-3).unwrap();
    assert!(r3.norm() < 1e-3, "{r3}");
    let r2 = pde_residual(&square, 0, 0.5, Complex::new(0.3, 1.0), 1e-2).unwrap();
    let r3b = pde_residual(&square, 0, 0.5, Complex::new(0.3, 1.0), 1e-3).unwrap();
    assert!(r3b.norm() < r2.norm() / 20.0, "{r2} {r3b}");

    assert!(pde_residual(&square, 0, 0.5, Complex::new(0.0, 0.05), 1e-3).is_err());
    let stable = trivial_spec(EvolutionClock::StableHalf, vec![0.0, 1.0]);
    assert!(pde_residual(&stable, 0, 0.5, Complex::new(0.0, 1.0), 1e-3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_series_equals_cumulant_flow(
        tail in proptest::collection::vec(-2.0f64..2.0, 4),
        t in 0.0f64..5.0,
        m in 0.2f64..3.0,
    ) {
        let mut r = vec![0.0, 1.0];
        r.extend(tail);
        let spec = trivial_spec(EvolutionClock::Exponential { mean: m }, r);
        let a = evolve_cumulants(&spec, t).unwrap();
        let b = r_transform_exponential(&spec, t).unwrap();
        for k in 1..=6 {
            prop_assert!((a[0].get(k) - b[0].cumulants().get(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn evolved_variance_mass_is_conserved(
        split in 0.05f64..0.95,
        x in -1.0f64..1.0,
        t in 0.0f64..4.0,
        stable in any::<bool>(),
    ) {
        let clock = if stable { EvolutionClock::StableHalf } else { EvolutionClock::Exponential { mean: 1.0 } };
        let spec = EvolutionSpec::new(
            z2(),
            clock,
            vec![CumulantSeq::new(vec![0.0, split, x]), CumulantSeq::new(vec![0.0, 1.0 - split, -x])],
        ).unwrap();
        let c = evolve_cumulants(&spec, t).unwrap();
        let total: f64 = c.iter().map(|s| s.get(2)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for s in &c {
            prop_assert!(s.get(1) == 0.0);
            prop_assert!(s.get(3).abs() <= x.abs() + 1e-15);
        }
    }
}
