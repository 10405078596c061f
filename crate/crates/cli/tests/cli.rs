use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn resind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resind"))
        .args(args)
        .env_remove("RESIND_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn vkls(x: f64, s: f64) -> f64 {
    let u = x / s;
    if u.abs() >= 2.0 {
        return x.abs();
    }
    s * (2.0 / std::f64::consts::PI) * (u * (u / 2.0).asin() + (4.0 - u * u).sqrt())
}

#[test]
fn verify_default_passes() {
    let o = resind(&["verify"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS  detailed balance [cyclic(2), n <= 5]"));
    assert!(out.contains("PASS  orthogonality of wreath characters"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_injected_fault_exits_nonzero() {
    let o = resind(&["verify", "--group", "trivial", "--n", "3", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  rows of P_down, P_up, P sum to 1"));
}

#[test]
fn verify_cyclic2_at_six_within_a_minute() {
    let start = Instant::now();
    let o = resind(&["verify", "--n", "6", "--group", "cyclic2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(start.elapsed() < Duration::from_secs(60));
    assert!(stdout(&o).contains("[cyclic(2), n <= 6]"));
}

#[test]
fn verify_rejects_inexact_group() {
    let o = resind(&["verify", "--group", "cyclic(3)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not exact"));
}

fn simulate_args<'a>(dir: &'a str, workers: &'a str) -> Vec<&'a str> {
    vec![
        "simulate",
        "--group",
        "cyclic2",
        "--n",
        "16",
        "--initial",
        "square",
        "--samples",
        "64",
        "--t-grid",
        "0,0.5,1",
        "--seed",
        "11",
        "--workers",
        workers,
        "-o",
        dir,
    ]
}

#[test]
fn simulate_is_reproducible_and_creates_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("nested/a");
    let b = tmp.path().join("b");
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let oa = resind(&simulate_args(a, "1"));
    assert!(oa.status.success(), "{}", stderr(&oa));
    let ob = resind(&simulate_args(b, "4"));
    assert!(ob.status.success());
    for f in ["simulate.csv", "simulate.json", "comparison.csv"] {
        let x = fs::read(Path::new(a).join(f)).unwrap();
        let y = fs::read(Path::new(b).join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
    let out = stdout(&oa);
    assert!(out.contains("\"seed\": 11"));
    assert!(out.contains("\"t_grid\": [\n    0.0,\n    0.5,\n    1.0\n  ]"));

    let (header, rows) = read_csv(&Path::new(a).join("simulate.csv"));
    assert_eq!(header, ["t", "zeta", "quantity", "mean", "se"]);
    // 3 times x 2 irreps x (size + R2..R5)
    assert_eq!(rows.len(), 3 * 2 * 5);
    let (header, rows) = read_csv(&Path::new(a).join("comparison.csv"));
    assert_eq!(
        header,
        ["t", "zeta", "quantity", "mc_mean", "mc_se", "theory", "z_score"]
    );
    assert_eq!(rows.len(), 30);
}

#[test]
fn seed_comes_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_resind"))
        .args([
            "simulate",
            "--n",
            "4",
            "--samples",
            "4",
            "--t-grid",
            "1",
            "-o",
            dir,
        ])
        .env("RESIND_SEED", "99")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"seed\": 99"));
    let o = Command::new(env!("CARGO_BIN_EXE_resind"))
        .args([
            "simulate",
            "--n",
            "4",
            "--samples",
            "4",
            "--t-grid",
            "1",
            "--seed",
            "5",
            "-o",
            dir,
        ])
        .env("RESIND_SEED", "99")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("\"seed\": 5"), "flag beats environment");
}

#[test]
fn config_file_is_read_and_flags_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    let out = tmp.path().join("from-config");
    fs::write(
        &cfg,
        format!(
            "seed = 3\noutput = {:?}\ngroup = \"cyclic(2)\"\n\n[run]\nn = 9\nsamples = 8\nt_grid = [0.0, 2.0]\ninitial = \"square\"\n\n[clock]\npausing = \"gamma\"\nshape = 2.0\nscale = 0.5\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = resind(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "6",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.contains("\"samples\": 6")
            && text.contains("\"seed\": 3")
            && text.contains("\"kind\": \"gamma\"")
    );
    assert!(out.join("simulate.csv").exists());

    fs::write(&cfg, "bogus = 1\n").unwrap();
    let o = resind(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn theory_ensemble_accepts_zero_b_and_names_violations() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = resind(&[
        "theory", "ensemble", "--preset", "p2", "--r", "1", "--a", "1", "--b", "0", "--c", "1",
        "--t-grid", "0,1", "--n", "100", "-o", dir,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&tmp.path().join("thoma.csv"));
    assert_eq!(
        header,
        [
            "n",
            "zeta",
            "j",
            "power_sum",
            "dilated_moment",
            "limit_moment"
        ]
    );
    // free Poisson: N = 10 atoms 1/10, p_j = 10^{1-j}
    for row in &rows {
        let j: i32 = row[2].parse().unwrap();
        let p: f64 = row[3].parse().unwrap();
        assert!((p - 10f64.powi(1 - j)).abs() < 1e-15);
    }
    let (_, rows) = read_csv(&tmp.path().join("ensemble_cumulants.csv"));
    for row in rows {
        let (c, g): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
        assert!((c - g).abs() < 1e-8, "{row:?}");
    }

    let o = resind(&[
        "theory", "ensemble", "--preset", "p2", "--r", "1", "--a", "0.7", "--b", "0.4", "--c", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("a_zeta + b_zeta <= c_zeta violated"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn theory_a_and_evolve_write_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = resind(&[
        "theory", "a", "--n", "50", "--t-grid", "0.5", "--order", "2", "-o", dir,
    ]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&tmp.path().join("theory_a.csv"));
    assert_eq!(header, ["t", "k", "a_limit", "a_finite", "a_finite_se"]);
    assert_eq!(rows.len(), 3);
    let a1: f64 = rows[0][2].parse().unwrap();
    assert!((a1 - (-0.5f64).exp()).abs() < 1e-15);

    let o = resind(&[
        "theory",
        "evolve",
        "--n",
        "16",
        "--initial",
        "4,4,4,4",
        "--t-grid",
        "3",
        "-o",
        dir,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&tmp.path().join("theory_evolve.csv"));
    assert_eq!(header, ["t", "zeta", "k", "value"]);
    let r4: f64 = rows[3][3].parse().unwrap();
    assert!(
        (r4 + (-9f64).exp()).abs() < 1e-12,
        "R_4(3) = -e^-9, got {r4}"
    );
}

#[test]
fn plancherel_shape_is_vkls_and_svg_is_written() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = resind(&["shape", "--group", "s3", "--t-grid", "0,2", "-o", dir]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&tmp.path().join("shape.csv"));
    assert_eq!(header, ["zeta", "t", "x", "omega"]);
    let table = resind::FiniteGroupTable::s3();
    let weights = table.plancherel_weights_as::<f64>();
    for row in &rows {
        let z = table.irrep_index(&row[0]).unwrap();
        let (x, w): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
        assert!((w - vkls(x, weights[z].sqrt())).abs() < 1e-2, "{row:?}");
    }
    let svg = fs::read_to_string(tmp.path().join("shape.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"viewBox="0 0 800 500""#));
    assert_eq!(svg.matches("<polyline").count(), 6);
}

#[test]
fn characters_spectrum_and_tables() {
    let o = resind(&["characters", "--group", "cyclic2", "--n", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("irrep,class_type,normalized_character"));
    // 5 multi-diagrams x 5 class types
    assert_eq!(text.lines().count(), 26);

    let o = resind(&["characters", "--lambda", "2,1"]);
    assert!(stdout(&o).contains("\"1:2,1\",e:3,-1/2"));

    let o = resind(&["spectrum", "--group", "s3", "--n", "3"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("PASS"));
    assert!(stdout(&o).starts_with("class_type,k,fixed_points,eigenvalue"));

    let o = resind(&["tables"]);
    assert!(stdout(&o).contains("dihedral(4),8,5,5,true"));
    let o = resind(&["tables", "--group", "s3"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["order"], 6);
}
