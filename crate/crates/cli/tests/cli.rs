use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const EXAMPLE: &str = r#"{"n":2,"entries":[[[2,-3],[0,0]],[[0,0],[3,2]]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antieigen")).args(args).env_remove("ANTIEIGEN_SEED").output().unwrap()
}

fn matrix_file(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.split_whitespace().next() == Some(key)).unwrap();
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn compute_reports_the_example_values() {
    let f = matrix_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    let o = run(&["compute", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!((field(&text, "mu_theta") - 2.0 / 13f64.sqrt()).abs() < 1e-9);
    assert!((field(&text, "centre_of_mass") - 2.0 / 13.0).abs() < 1e-9);

    let o = run(&["--theta", "0.7853981633974483", "--format", "json", "compute", path]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let expected = -1.0 / (13f64.sqrt() * 2f64.sqrt());
    assert!((v["mu_theta"].as_f64().unwrap() - expected).abs() < 1e-9);
    assert_eq!(v["converged"], true);
}

#[test]
fn com_modes() {
    let f = matrix_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    let total = stdout(&run(&["com", path, "total"]));
    assert!((field(&total, "distance") - 0.5f64.sqrt()).abs() < 1e-8);
    let real = stdout(&run(&["--theta", "0", "com", path, "real"]));
    assert!((field(&real, "centre") - 2.0 / 13.0).abs() < 1e-9);
    let missing = run(&["com", path, "real"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn sweep_csv_header_and_rows() {
    let f = matrix_file(EXAMPLE);
    let o = run(&["--format", "csv", "--resolution", "8", "sweep", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header, ["theta", "mu_theta", "witness_params", "epsilon_star_at_witness", "centre_of_mass_distance"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let theta: f64 = r[0].parse().unwrap();
        let mu: f64 = r[1].parse().unwrap();
        let (s, c) = theta.sin_cos();
        let expected = ((3.0 * c + 2.0 * s) / 13f64.sqrt()).min((2.0 * c - 3.0 * s) / 13f64.sqrt());
        assert!((mu - expected).abs() < 1e-9);
        assert_eq!(r[2].split(';').count(), 2);
    }
}

#[test]
fn zero_matrix_is_an_input_error() {
    let f = matrix_file(r#"{"n":2,"entries":[[[0,0],[0,0]],[[0,0],[0,0]]]}"#);
    let o = run(&["compute", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("zero operator has no antieigenvalues"));
}

#[test]
fn bad_inputs_exit_with_two() {
    let f = matrix_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    for args in [
        vec!["--theta", "45deg", "compute", path],
        vec!["--theta", "NaN", "compute", path],
        vec!["compute", "/nonexistent/matrix.json"],
        vec!["--restarts", "0", "compute", path],
        vec!["verify", "--random", "n=9 count=1 seed=0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    let g = matrix_file("[[1,2],[3]]");
    assert_eq!(run(&["compute", g.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn radian_suffix_and_negative_angles_are_accepted() {
    let f = matrix_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    let a = stdout(&run(&["--theta", "-0.5", "compute", path]));
    let b = stdout(&run(&["--theta", "-0.5rad", "compute", path]));
    assert_eq!(field(&a, "mu_theta"), field(&b, "mu_theta"));
}

#[test]
fn verify_exit_status_tracks_tolerance() {
    let f = matrix_file(EXAMPLE);
    let path = f.path().to_str().unwrap();
    assert_eq!(run(&["verify", path]).status.code(), Some(0));
    let strict = run(&["--tol", "1e-300", "verify", path]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stderr(&strict).contains("outside tolerance"));
}

#[test]
fn random_verify_is_deterministic() {
    let args = ["--format", "csv", "--resolution", "90", "verify", "--random", "n=2 count=3 seed=11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--seed", "5", "--format", "csv", "--resolution", "90", "verify", "--random", "n=2 count=3 seed=12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn example_table_agrees() {
    let o = run(&["example"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("|cos|T"));
    assert!(text.lines().count() >= 12);
    assert_eq!(run(&["--tol", "1e-300", "example"]).status.code(), Some(1));
}
