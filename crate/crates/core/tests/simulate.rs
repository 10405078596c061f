use resind::pausing::{ClockMode, PausingTime};
use resind::simulate::*;
use resind::{FiniteGroupTable, MultiDiagram, YoungDiagram};

#[test]
fn square_cumulants() {
    let sq = YoungDiagram::rectangle(4, 4);
    let r = rescaled_cumulants(&sq, 16, 4);
    assert!(r[0].abs() < 1e-12);
    assert!((r[1] - 1.0).abs() < 1e-12);
    assert!(r[2].abs() < 1e-12);
    assert!((r[3] + 1.0).abs() < 1e-12);
}

#[test]
fn zero_time_keeps_state() {
    let t = FiniteGroupTable::trivial();
    let l = MultiDiagram::parse("3,1", &t).unwrap();
    let cfg = SimConfig {
        n: 4,
        table: t,
        ensemble: Ensemble::Delta(l.clone()),
        pausing: PausingTime::Exponential { mean: 1.0 },
        clock: ClockMode::Diffusive,
        t_grid: vec![0.0],
        samples: 1,
        order: 3,
        seed: 1,
    };
    let mut rng = sample_rng(1, 0);
    assert_eq!(run_ct(&l, 0.0, &cfg, &mut rng), l);
}

use num_traits::ToPrimitive;
use resind::chain::ChainMatrices;

fn config(table: FiniteGroupTable, n: usize, ensemble: Ensemble, samples: usize) -> SimConfig {
    SimConfig {
        n,
        table,
        ensemble,
        pausing: PausingTime::Exponential { mean: 1.0 },
        clock: ClockMode::Diffusive,
        t_grid: vec![0.0, 0.5, 1.0],
        samples,
        order: 3,
        seed: 42,
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let t = FiniteGroupTable::cyclic(2).unwrap();
    let cfg = config(t, 30, Ensemble::Plancherel, 64);
    let base = serde_json::to_string(&estimate_with_workers(&cfg, 1).unwrap()).unwrap();
    for w in [2, 8] {
        assert_eq!(
            serde_json::to_string(&estimate_with_workers(&cfg, w).unwrap()).unwrap(),
            base
        );
    }
    let mut other = cfg.clone();
    other.seed = 43;
    assert_ne!(
        serde_json::to_string(&estimate_with_workers(&other, 2).unwrap()).unwrap(),
        base
    );
}

#[test]
fn plancherel_start_is_stationary_in_size() {
    let t = FiniteGroupTable::s3();
    let sigma = t.plancherel_weights_as::<f64>();
    let report = estimate(&config(t.clone(), 40, Ensemble::Plancherel, 600)).unwrap();
    for row in &report.rows {
        let z = t.irrep_index(&row.zeta).unwrap();
        assert!(
            (row.size.mean - sigma[z]).abs() < 4.0 * row.size.se + 1e-12,
            "{row:?}"
        );
    }
}

#[test]
fn size_series_matches_closed_form() {
    for table in [
        FiniteGroupTable::trivial(),
        FiniteGroupTable::cyclic(2).unwrap(),
    ] {
        let sigma = table.plancherel_weights_as::<f64>();
        for n in 1..=5 {
            let cm = ChainMatrices::build(n, &table).unwrap();
            let start = cm.states.len() - 1;
            let mut initial = vec![0.0; cm.states.len()];
            initial[start] = 1.0;
            let f0: Vec<f64> = (0..table.num_irreps())
                .map(|z| cm.states[start].entry(z).size() as f64 / n as f64)
                .collect();
            for s in [0.5, 1.0, 3.0] {
                let got = expected_sizes_by_series(&cm, &initial, s, 1.0).unwrap();
                let decay = (-s / n as f64).exp();
                for z in 0..table.num_irreps() {
                    let want = (1.0 - decay) * sigma[z] + decay * f0[z];
                    assert!(
                        (got[z] - want).abs() < 1e-10,
                        "{} n={n} s={s} z={z}",
                        table.name()
                    );
                }
            }
        }
    }
}

#[test]
fn stationary_law_is_fixed_by_the_series() {
    let table = FiniteGroupTable::cyclic(2).unwrap();
    let cm = ChainMatrices::build(4, &table).unwrap();
    let pi: Vec<f64> = cm.stationary.iter().map(|p| p.to_f64().unwrap()).collect();
    let sizes = expected_sizes_by_series(&cm, &pi, 2.0, 1.0).unwrap();
    for (got, want) in sizes.iter().zip(table.plancherel_weights_as::<f64>()) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn plancherel_growth_matches_hook_lengths() {
    let n = 5;
    let parts = YoungDiagram::partitions(n);
    let fact = 120.0;
    let samples = 60_000;
    let mut counts = vec![0usize; parts.len()];
    let mut rng = sample_rng(9, 0);
    for _ in 0..samples {
        let nu = plancherel_growth(n, &mut rng);
        counts[parts.iter().position(|p| *p == nu).unwrap()] += 1;
    }
    let chi2: f64 = parts
        .iter()
        .zip(&counts)
        .map(|(p, &c)| {
            let d = p.hook_dim().to_f64().unwrap();
            let e = samples as f64 * d * d / fact;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    // 6 degrees of freedom; the 0.999 quantile is about 22.5
    assert!(chi2 < 22.5, "chi2 = {chi2}");
}

#[test]
fn near_square_shape() {
    let d = YoungDiagram::near_square(200);
    assert_eq!(d.size(), 200);
    assert_eq!(&d.parts()[..14], &[14; 14]);
    assert_eq!(&d.parts()[14..], &[4]);
    for n in 0..60 {
        let d = YoungDiagram::near_square(n);
        assert_eq!(d.size(), n);
        let k = (n as f64).sqrt().floor() as usize;
        assert!(d.parts().iter().all(|&p| p <= k.max(1)));
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let t = FiniteGroupTable::cyclic(2).unwrap();
    let mut cfg = config(t.clone(), 4, Ensemble::Plancherel, 4);
    cfg.t_grid = vec![1.0, 0.5];
    assert!(estimate(&cfg).is_err());
    let mut cfg = config(t.clone(), 4, Ensemble::Plancherel, 4);
    cfg.order = 0;
    assert!(estimate(&cfg).is_err());
    let wrong = MultiDiagram::parse("3,1", &FiniteGroupTable::trivial()).unwrap();
    assert!(estimate(&config(t, 4, Ensemble::Delta(wrong), 4)).is_err());
}
