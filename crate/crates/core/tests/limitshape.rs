use resind::evolution::{EnsemblePreset, EvolutionClock, EvolutionSpec, PresetKind, PresetParams};
use resind::freeprob::{stieltjes, StieltjesOptions, C64};
use resind::levy::{LevyMeasure, LevyRTransform};
use resind::limitshape::*;
use resind::{AtomicMeasure, CumulantSeq, FiniteGroupTable, YoungDiagram};

fn semicircle_g(z: C64) -> C64 {
    // branch with Im G < 0 in the upper half plane
    let s = (z * z - 4.0).sqrt();
    let g = (z - s) / 2.0;
    if g.im <= 0.0 {
        g
    } else {
        (z + s) / 2.0
    }
}

#[test]
fn semicircle_density() {
    let grid = Grid::new(-2.4, 2.4, 401).unwrap();
    let est =
        density_from_cumulants(&CumulantSeq::semicircle(1.0, 4), &grid, &DEFAULT_EPS).unwrap();
    let exact = |x: f64| (4.0 - x * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI);
    let (mut interior, mut all) = (0.0f64, 0.0f64);
    for (x, d) in est.x.iter().zip(&est.density) {
        let e = (d - exact(*x)).abs();
        all = all.max(e);
        if x.abs() <= 1.9 {
            interior = interior.max(e);
        }
    }
    println!("semicircle density sup error: interior {interior:.2e}, overall {all:.2e}");
    assert!(interior < 5e-3);
    assert!(all < 1.2e-2);
    assert!((est.mass - 1.0).abs() < 1e-2);
    assert!(!est.not_a_probability && est.atom_candidates.is_empty());
}

#[test]
fn marchenko_pastur_density() {
    let r = LevyRTransform::new(LevyMeasure::atom(1.0, 1.0), 1.0).unwrap();
    let grid = Grid::new(-0.4, 4.4, 481).unwrap();
    let est = density_from_r(&r, &grid, &DEFAULT_EPS).unwrap();
    let exact = |x: f64| {
        if x > 0.0 && x < 4.0 {
            (x * (4.0 - x)).sqrt() / (2.0 * std::f64::consts::PI * x)
        } else {
            0.0
        }
    };
    let mut worst = (0.0f64, 0.0);
    for (x, d) in est.x.iter().zip(&est.density) {
        if *x >= 0.25 {
            let e = (d - exact(*x)).abs();
            if e > worst.0 {
                worst = (e, *x);
            }
        }
    }
    println!(
        "Marchenko-Pastur sup error on [0.25, 4.4]: {:.2e} at {}",
        worst.0, worst.1
    );
    assert!(worst.0 < 1e-2);
    assert!((est.mass - 1.0).abs() < 2e-2, "{}", est.mass);
}

#[test]
fn two_atoms_are_flagged() {
    let grid = Grid::new(-1.6, 1.6, 321).unwrap();
    let m = AtomicMeasure::new([(-1.0, 0.5), (1.0, 0.5)]);
    let est = density_from_g(|z| Ok(m.stieltjes(z)), &grid, &DEFAULT_EPS).unwrap();
    assert_eq!(est.atom_candidates.len(), 2, "{:?}", est.atom_candidates);
    for (a, want) in est.atom_candidates.iter().zip([-1.0, 1.0]) {
        assert!((a - want).abs() < 0.011);
    }
    let atoms = detect_atoms(&|z| Ok(m.stieltjes(z)), &grid, 0.0125);
    assert_eq!(atoms.len(), 2);
    for ((x, w), want) in atoms.iter().zip([-1.0, 1.0]) {
        assert!((x - want).abs() < 1e-8 && (w - 0.5).abs() < 1e-8, "{x} {w}");
    }
}

#[test]
fn non_probability_cumulants_are_flagged() {
    let grid = Grid::new(-4.0, 4.0, 161).unwrap();
    // truncation of the two-atom law (its R_6, R_8, ... are dropped)
    for r in [vec![0.0, 1.0, 0.0, -1.0], vec![0.0, 1.0, 0.8, -0.8]] {
        let est =
            density_from_cumulants(&CumulantSeq::new(r.clone()), &grid, &DEFAULT_EPS).unwrap();
        assert!(est.not_a_probability, "{r:?}: mass {}", est.mass);
    }
    let ok = density_from_cumulants(&CumulantSeq::semicircle(1.0, 6), &grid, &DEFAULT_EPS).unwrap();
    assert!(!ok.not_a_probability);
    assert!(density_from_cumulants(
        &CumulantSeq::new(vec![0.0, 1.0, 0.0, 1.0]),
        &grid,
        &DEFAULT_EPS
    )
    .is_err());
}

#[test]
fn delta_at_zero_gives_abs() {
    let grid = Grid::new(-1.0, 1.0, 201).unwrap();
    let d = diagram_from_measure(|z: C64| Ok(z.inv()), &grid, &ShapeOptions::default()).unwrap();
    assert!(d.sup_distance(f64::abs) < 1e-12);
}

#[test]
fn vkls_reconstruction() {
    let grid = Grid::around_support(-2.0, 2.0).unwrap();
    let d = diagram_from_measure(
        |z: C64| Ok(semicircle_g(z)),
        &grid,
        &ShapeOptions::default(),
    )
    .unwrap();
    let err = d.sup_distance(|x| vkls(x, 1.0));
    let c = CumulantSeq::semicircle(1.0, 2);
    let opts = StieltjesOptions::default();
    let via_solver =
        diagram_from_measure(|z| stieltjes(&c, z, &opts), &grid, &ShapeOptions::default()).unwrap();
    let err2 = via_solver.sup_distance(|x| vkls(x, 1.0));
    println!("VKLS sup error: closed-form G {err:.2e}, solver G {err2:.2e}");
    assert!(err < 1e-2 && err2 < 1e-2);
    d.check(2e-3).unwrap();
    assert!((d.half_area() - 1.0).abs() < 1e-2);
}

#[test]
fn two_atoms_give_square() {
    for q in [0.5, 1.0, 1.7] {
        let m = AtomicMeasure::new([(-q, 0.5), (q, 0.5)]);
        let grid = Grid::new(-2.0 * q, 2.0 * q, 400).unwrap();
        let d =
            diagram_from_measure(|z| Ok(m.stieltjes(z)), &grid, &ShapeOptions::default()).unwrap();
        let err = d.sup_distance(|x| (x - q).abs() + (x + q).abs() - x.abs());
        assert!(err < 1e-2, "q={q}: {err}");
    }
}

#[test]
fn diagram_measure_roundtrip() {
    let mut worst = 0.0f64;
    for n in 1..=8 {
        for nu in YoungDiagram::partitions(n) {
            let m = nu.transition_measure::<f64>();
            let coords = nu.interlacing();
            let lo = coords.x[0] as f64 - 1.5;
            let hi = *coords.x.last().unwrap() as f64 + 1.5;
            let grid = Grid::new(lo, hi, 400).unwrap();
            let d = diagram_from_measure(|z| Ok(m.stieltjes(z)), &grid, &ShapeOptions::default())
                .unwrap();
            let err = d.sup_distance(|x| nu.profile(x));
            worst = worst.max(err);
            assert!(err < 2e-2, "{nu}: {err}");
            assert!((d.half_area() - n as f64).abs() < 1e-2 * n as f64);
        }
    }
    println!("roundtrip worst sup error {worst:.2e}");
}

#[test]
fn long_time_shape_is_rescaled_vkls() {
    let table = FiniteGroupTable::s3();
    let initial = vec![
        CumulantSeq::new(vec![0.0, 0.5, 0.3, -0.2, 0.1]),
        CumulantSeq::new(vec![0.0, 0.2, -0.1, 0.1, 0.0]),
        CumulantSeq::new(vec![0.0, 0.3, 0.0, 0.05, 0.02]),
    ];
    let spec = EvolutionSpec::new(
        table.clone(),
        EvolutionClock::Exponential { mean: 1.0 },
        initial,
    )
    .unwrap();
    let shapes = shapes_at_time(&spec, 50.0, None).unwrap();
    for (z, d) in shapes.iter().enumerate() {
        let var = (table.dim(z) * table.dim(z)) as f64 / 6.0;
        let err = d.sup_distance(|x| vkls(x, var));
        assert!(err < 2e-2, "zeta={z}: {err}");
        d.check(2e-3).unwrap();
        assert!((d.half_area() - var).abs() < 1e-2 * var);
    }
}

#[test]
fn plancherel_shape_is_stationary() {
    let preset = EnsemblePreset::new(PresetKind::P1, None, FiniteGroupTable::trivial()).unwrap();
    let spec = preset
        .spec(EvolutionClock::Exponential { mean: 1.0 }, 6)
        .unwrap();
    for t in [0.0, 0.5, 2.0] {
        let d = &shapes_at_time(&spec, t, None).unwrap()[0];
        assert!(d.sup_distance(|x| vkls(x, 1.0)) < 1e-2);
    }
}

#[test]
fn preset_shapes_are_diagrams() {
    let params = PresetParams::single(1.0, 1.0, 0.6, 0.3, 1.0);
    for kind in [PresetKind::P2, PresetKind::P3] {
        let preset =
            EnsemblePreset::new(kind, Some(params.clone()), FiniteGroupTable::trivial()).unwrap();
        for clock in [
            EvolutionClock::Exponential { mean: 1.0 },
            EvolutionClock::StableHalf,
        ] {
            let spec = preset.spec(clock, 8).unwrap();
            for t in [0.5, 2.0] {
                let d = &shapes_at_time(&spec, t, None).unwrap()[0];
                assert!(
                    d.lipschitz_excess() < 1e-3,
                    "{kind:?} {clock:?} t={t}: {}",
                    d.lipschitz_excess()
                );
                assert!(
                    (d.half_area() - 1.0).abs() < 1e-2,
                    "{kind:?} {clock:?} t={t}: area {}",
                    d.half_area()
                );
            }
        }
    }
}
