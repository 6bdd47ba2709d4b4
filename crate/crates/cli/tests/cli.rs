//! End-to-end runs of the command line front end through `run_cli`,
//! checking exit codes and the shape of the emitted CSV.

use multiway_cli::csv::{sig6, CSV_HEADER};
use multiway_cli::run_cli;
use multiway_core::channel::{tau_from_environment, Environment, Geometry};

fn run(args: &[&str]) -> i32 {
    let argv: Vec<String> =
        std::iter::once("multiway").chain(args.iter().copied()).map(String::from).collect();
    run_cli(argv)
}

#[test]
fn usage_errors_exit_with_2() {
    // Out-of-range availability.
    assert_eq!(run(&["--tau", "1.5", "--trials", "1", "--snr", "10"]), 2);
    assert_eq!(run(&["--tau", "-0.1", "--trials", "1", "--snr", "10"]), 2);
    // Both tau sources at once, or neither.
    assert_eq!(run(&["--tau", "0.5", "--env", "urban"]), 2);
    assert_eq!(run(&[]), 2);
    // Geometry flags make sense only with --env, and --env needs both.
    assert_eq!(run(&["--tau", "0.5", "--altitude", "100"]), 2);
    assert_eq!(run(&["--env", "urban", "--altitude", "100"]), 2);
    // Unknown tokens and malformed grids.
    assert_eq!(run(&["--tau", "0.5", "--schemes", "iazf,nope"]), 2);
    assert_eq!(run(&["--tau", "0.5", "--env", "rural"]), 2);
    assert_eq!(run(&["--tau", "0.5", "--snr", "60:0:5"]), 2);
    assert_eq!(run(&["--tau", "0.5", "--antennas", "2,3,5"]), 2);
    assert_eq!(run(&["--tau", "0.5", "--trials", "0"]), 2);
}

#[test]
fn unwritable_output_path_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let code = run(&[
        "--tau", "0.5", "--snr", "10", "--trials", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
}

#[test]
fn small_sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let code = run(&[
        "--tau", "0.25,0.75", "--snr", "0:10:10", "--trials", "3", "--seed", "11",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    // 5 schemes x 2 taus x 2 SNR points.
    assert_eq!(lines.len(), 1 + 5 * 2 * 2);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6, "bad row: {line}");
        assert_eq!(fields[3], "3");
        assert!(fields[4].parse::<f64>().unwrap() >= 0.0);
        assert!(fields[5].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn scheme_filter_limits_the_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let code = run(&[
        "--tau", "0.5", "--snr", "10", "--trials", "2", "--schemes", "iazf,2w",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let schemes: Vec<&str> =
        text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(schemes, ["2w", "iazf"]);
}

#[test]
fn environment_source_resolves_tau_in_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let code = run(&[
        "--env", "urban", "--altitude", "609", "--distance", "1000",
        "--snr", "10", "--trials", "2", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let geom = Geometry::new(609.0, 1000.0).unwrap();
    let want = sig6(tau_from_environment(Environment::Urban, geom).unwrap());
    let text = std::fs::read_to_string(&path).unwrap();
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(1).unwrap(), want);
    }
}

#[test]
fn repeated_runs_reproduce_the_same_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "--tau".to_string(),
            "0.3".to_string(),
            "--snr".to_string(),
            "0:20:10".to_string(),
            "--trials".to_string(),
            "5".to_string(),
            "--seed".to_string(),
            "42".to_string(),
            "--out".to_string(),
            p.to_str().unwrap().to_string(),
        ]
    };
    let head = || std::iter::once("multiway".to_string());
    assert_eq!(run_cli(head().chain(args(&a))), 0);
    assert_eq!(run_cli(head().chain(args(&b))), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
