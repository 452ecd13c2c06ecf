use std::fs;
use std::path::Path;

use taxicab::cli::{run, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("taxicab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn default_sweep_matches_golden_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout, stderr) = invoke(&[
        "--dims",
        "1,2,3,5,10,20,50,100",
        "--pairs",
        "10000",
        "--seed",
        "42",
        "--out",
        out,
    ]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    // header, 8 rows, footer, summary line
    assert_eq!(stdout.lines().count(), 11, "{stdout}");
    assert!(dir.path().join("report.json").exists());
    let table = read(dir.path(), "table.csv");
    let golden = include_str!("golden/table_seed42.csv");
    assert_eq!(table, golden);
}

#[test]
fn zero_dimension_is_a_usage_error() {
    let (code, _, stderr) = invoke(&["--dims", "0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(stderr.contains("invalid dimension 0"), "{stderr}");
    assert_eq!(stderr.lines().count(), 1);
}

#[test]
fn unknown_flag_is_a_single_line_usage_error() {
    let (code, _, stderr) = invoke(&["--frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.contains("--frobnicate"));
}

#[test]
fn non_positive_pairs_and_bad_format() {
    for args in [
        &["--pairs", "0"][..],
        &["--pairs", "1"][..],
        &["--bins", "0"][..],
        &["--seed", "-1"][..],
        &["--format", "xml"][..],
    ] {
        let (code, _, stderr) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert_eq!(stderr.lines().count(), 1);
    }
}

#[test]
fn unwritable_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let (code, _, stderr) = invoke(&["--dims", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(stderr.contains("output directory"), "{stderr}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        format!(
            "dims=2,4\npairs=300\nseed=5\nformat=csv\nout={}\n",
            out.display()
        ),
    )
    .unwrap();
    let (code, _, stderr) = invoke(&["--config", cfg.to_str().unwrap(), "--dims", "3"]);
    assert_eq!(code, EXIT_OK, "{stderr}");
    let table = read(&out, "table.csv");
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().starts_with("3,"));
    assert!(!out.join("report.json").exists());

    let (code, _, _) = invoke(&["--config", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn figure_files_and_normalization() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, stderr) = invoke(&[
        "--dims",
        "1,100",
        "--pairs",
        "5000",
        "--histograms",
        "--gof",
        "--out",
        out,
    ]);
    assert_eq!(code, EXIT_OK, "{stderr}");

    for dim in [1, 100] {
        let hist = read(dir.path(), &format!("hist_n{dim}.csv"));
        let mut lines = hist.lines();
        assert_eq!(lines.next(), Some("bin_left,bin_right,density"));
        let mass: f64 = lines
            .map(|l| {
                let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
                (f[1] - f[0]) * f[2]
            })
            .sum();
        assert!((mass - 1.0).abs() < 1e-9, "dim {dim}: {mass}");
    }

    let overlay = read(dir.path(), "overlay_n1.csv");
    let rows: Vec<Vec<f64>> = overlay
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 512);
    assert!((rows[0][1] - 2.0).abs() < 0.02, "{}", rows[0][1]);
    // linear: exact column is 2(1 - x) at every grid point
    assert!(rows
        .iter()
        .all(|r| (r[1] - 2.0 * (1.0 - r[0])).abs() < 1e-12));
    assert!(rows[511][1] < 0.1, "{}", rows[511][1]);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));

    let overlay = read(dir.path(), "overlay_n100.csv");
    assert!(overlay.starts_with("x,normal_pdf\n"));
    let (peak_x, _) = overlay
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .fold((0.0, 0.0), |best, p| if p.1 > best.1 { p } else { best });
    let grid_step = {
        let xs: Vec<f64> = overlay
            .lines()
            .skip(1)
            .take(2)
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        xs[1] - xs[0]
    };
    assert!((peak_x - 100.0 / 3.0).abs() <= grid_step, "{peak_x}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = |d: &Path| {
        vec![
            "--dims".to_string(),
            "1,7,35".into(),
            "--pairs".into(),
            "4000".into(),
            "--seed".into(),
            "99".into(),
            "--gof".into(),
            "--histograms".into(),
            "--out".into(),
            d.to_str().unwrap().to_string(),
        ]
    };
    let run_in = |d: &Path| {
        let v = args(d);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        invoke(&refs)
    };
    let (ca, sa, _) = run_in(a.path());
    let (cb, sb, _) = run_in(b.path());
    assert_eq!((ca, cb), (EXIT_OK, EXIT_OK));
    assert_eq!(
        sa.replace(a.path().to_str().unwrap(), ""),
        sb.replace(b.path().to_str().unwrap(), "")
    );
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 2 + 2 * 3);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}
