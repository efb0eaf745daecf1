//! End-to-end checks of the binary: exit codes, CSV structure, determinism,
//! presets, sweeps, caching.

use std::path::Path;
use std::process::{Command, Output};

fn kerrmodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrmodes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn evolve_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let args = |path: &Path| {
        vec![
            "evolve".to_string(),
            "--preset".into(),
            "fig1".into(),
            "--set".into(),
            "m_cut=12".into(),
            "--set".into(),
            "n_points=9".into(),
            "--set".into(),
            "t_max=3".into(),
            "--set".into(),
            format!("csv_path={}", path.display()),
        ]
    };
    let run = |path: &Path| {
        let argv = args(path);
        let argv: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
        let out = kerrmodes(&argv);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let first = run(&csv);
    let second = run(&csv);
    assert_eq!(first, second, "identical config must give identical bytes");

    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# command = evolve"));
    assert!(text.contains("# lambda1 = "));
    assert!(text.contains("# m_cut = 12"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0].len(), 25);
    // report on stdout carries certificates
    let argv = args(&csv);
    let argv: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
    let out = kerrmodes(&argv);
    let report = stdout_str(&out);
    assert!(report.contains("eigen_residual = "));
    assert!(report.contains("status = ok"));
}

#[test]
fn unknown_set_key_exits_2() {
    let out = kerrmodes(&["evolve", "--set", "omega3=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown configuration key"));
}

#[test]
fn config_file_with_unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "omega = 0.15\nwibble = 3\n").unwrap();
    let out = kerrmodes(&["evolve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("wibble"), "stderr: {err}");
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &conf,
        format!(
            "# weak-coupling check\nomega = 0.45\nalpha1_re = 0.5\nalpha2_re = 0.5\n\
             m_cut = 10\nn_points = 5\nt_max = 1.0\ncsv_path = {}\n",
            csv.display()
        ),
    )
    .unwrap();
    let out = kerrmodes(&["evolve", "--config", conf.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("# omega = 4.50000000000e-1"));
}

#[test]
fn both_coupling_routes_exit_2() {
    let out = kerrmodes(&["evolve", "--set", "omega=0.15", "--set", "lambda1=0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn truncation_overflow_exits_3() {
    let out = kerrmodes(&[
        "evolve",
        "--set",
        "alpha1_re=2",
        "--set",
        "alpha2_re=2",
        "--set",
        "m_cut=6",
        "--set",
        "n_points=3",
        "--set",
        "t_max=1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncation"));
}

#[test]
fn spectrum_matches_harmonic_sums() {
    let out = kerrmodes(&[
        "spectrum",
        "--set",
        "omega=0",
        "--set",
        "beta1=0",
        "--set",
        "beta2=0",
        "--set",
        "m_cut=3",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("# stable = true"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 16);
    let mut expected: Vec<f64> = (0..4)
        .flat_map(|n1| (0..4).map(move |n2| (n1 as f64 + 0.5) + 0.5 * (n2 as f64 + 0.5)))
        .collect();
    expected.sort_by(f64::total_cmp);
    for (row, want) in rows.iter().zip(expected) {
        let got: f64 = row[1].parse().unwrap();
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}

#[test]
fn sweep_orders_rows_value_major() {
    let out = kerrmodes(&[
        "sweep",
        "--axis",
        "alpha",
        "--values",
        "0,1",
        "--jobs",
        "2",
        "--set",
        "m_cut=12",
        "--set",
        "n_points=4",
        "--set",
        "t_max=1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 8);
    let first_col: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(first_col[..4], ["0", "0", "0", "0"]);
    assert!(first_col[4].starts_with('1'));
    // the alpha = 0, t = 0 point has <N> = 0: the ratio indicators are emitted
    // as empty fields, never numeric sentinels (columns 12..=17 after the axis)
    for field in &rows[0][12..=17] {
        assert!(field.is_empty(), "expected empty undefined ratio, got '{field}'");
    }
    let g2_late: f64 = rows[7][16].parse().expect("defined once populated");
    assert!(g2_late.is_finite());
    // header carries the axis as the first column
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap();
    assert!(header.starts_with("alpha,t,E12"));
}

#[test]
fn sweep_continues_past_failed_points() {
    // alpha = 4 cannot fit in m_cut = 12 and must fail without killing the sweep
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = kerrmodes(&[
        "sweep",
        "--axis",
        "alpha",
        "--values",
        "0.5,4",
        "--set",
        "m_cut=12",
        "--set",
        "n_points=4",
        "--set",
        "t_max=1",
        "--set",
        &format!("csv_path={}", csv.display()),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_str(&out);
    assert!(report.contains("points_ok = 1"), "report: {report}");
    assert!(report.contains("points_failed = 1"));
    assert!(report.contains("truncation"));
    let rows = data_rows(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(rows.len(), 4, "only the good point contributes rows");
}

#[test]
fn spectrum_header_reports_stability_near_border() {
    let out = kerrmodes(&["spectrum", "--set", "omega=0.45", "--set", "m_cut=4"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("# stable = true"));
    let omega_minus_line = text
        .lines()
        .find(|l| l.starts_with("# omega_minus"))
        .unwrap();
    let value: f64 = omega_minus_line.rsplit('=').next().unwrap().trim().parse().unwrap();
    assert!(value > 0.0 && value < 0.2, "omega_minus = {value}");
}

#[test]
fn no_coupling_generates_no_entanglement() {
    let out = kerrmodes(&[
        "evolve",
        "--set",
        "lambda1=0",
        "--set",
        "lambda2=0",
        "--set",
        "m_cut=12",
        "--set",
        "n_points=11",
        "--set",
        "t_max=10",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    for row in data_rows(&text) {
        let e12: f64 = row[1].parse().unwrap();
        assert!(e12.abs() <= 1e-10, "E12 = {e12} without coupling");
    }
}

#[test]
fn converge_reports_convergence() {
    let out = kerrmodes(&[
        "converge",
        "--m-list",
        "8,10,12",
        "--set",
        "alpha1_re=0.4",
        "--set",
        "alpha2_re=0.4",
        "--set",
        "t_max=5",
        "--set",
        "n_points=11",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    assert!(text.contains("# converged = true"), "output: {text}");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 9); // 3 cutoffs x 3 probe times
    assert_eq!(rows[0][0], "8");
    assert_eq!(rows[8][0], "12");
}

#[test]
fn converge_flags_unconverged_small_cutoffs() {
    let out = kerrmodes(&[
        "converge",
        "--m-list",
        "4,6",
        "--set",
        "alpha1_re=2",
        "--set",
        "alpha2_re=2",
        "--set",
        "t_max=5",
        "--set",
        "n_points=11",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("# converged = false"), "output: {text}");
    // the recorded truncation weight is large at m_cut = 6 for alpha = 2
    let rows = data_rows(&text);
    let weight: f64 = rows.last().unwrap()[2].parse().unwrap();
    assert!(weight > 1e-8, "weight {weight}");
}

#[test]
fn shorttime_check_ratios_near_cubic() {
    let out = kerrmodes(&[
        "shorttime-check",
        "--preset",
        "fig1",
        "--set",
        "m_cut=14",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 9);
    for row in rows.iter().filter(|r| !r[3].is_empty()) {
        let ratio: f64 = row[3].parse().unwrap();
        assert!(
            (5.0..=11.0).contains(&ratio),
            "{} ratio {ratio} far from cubic",
            row[0]
        );
    }
}

#[test]
fn eigensystem_cache_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let csv = dir.path().join("out.csv");
    let csv_arg = format!("csv_path={}", csv.display());
    let args = [
        "spectrum",
        "--set",
        "m_cut=8",
        "--set",
        &csv_arg,
        "--cache-dir",
        cache.to_str().unwrap(),
    ];
    let first = kerrmodes(&args);
    assert!(first.status.success());
    assert!(stdout_str(&first).contains("eigen_cache = miss"));
    let bytes_first = std::fs::read(&csv).unwrap();

    let second = kerrmodes(&args);
    assert!(second.status.success());
    assert!(stdout_str(&second).contains("eigen_cache = hit"));
    let bytes_second = std::fs::read(&csv).unwrap();
    assert_eq!(bytes_first, bytes_second, "cache must not alter output");
}

#[test]
fn svg_is_emitted_alongside_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let out = kerrmodes(&[
        "evolve",
        "--preset",
        "fig5",
        "--set",
        "m_cut=12",
        "--set",
        "n_points=21",
        "--set",
        "t_max=5",
        "--set",
        &format!("csv_path={}", csv.display()),
        "--set",
        &format!("svg_path={}", svg.display()),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg"));
    assert!(doc.contains("polyline"));
    // plots are derived artifacts: the CSV data rows are identical without them
    let with_svg = data_rows(&std::fs::read_to_string(&csv).unwrap());
    let out = kerrmodes(&[
        "evolve",
        "--preset",
        "fig5",
        "--set",
        "m_cut=12",
        "--set",
        "n_points=21",
        "--set",
        "t_max=5",
        "--set",
        &format!("csv_path={}", csv.display()),
    ]);
    assert!(out.status.success());
    let without_svg = data_rows(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(with_svg, without_svg);
}

#[test]
fn invalid_preset_exits_2() {
    let out = kerrmodes(&["evolve", "--preset", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
}
