use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rss-entropy")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

struct Csv {
    header: String,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines();
        let header = lines.next().unwrap().to_string();
        let columns = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Csv { header, columns, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.columns.iter().position(|c| c == name).unwrap()
    }

    fn floats(&self, name: &str) -> Vec<f64> {
        let i = self.col(name);
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }
}

fn data_file(values: &[f64]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for v in values {
        writeln!(f, "{v}").unwrap();
    }
    f
}

fn ok(args: &[&str]) -> Csv {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    Csv::parse(&stdout(&out))
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["critical-values", "--stat", "tv", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--seed"));

    let out = run(&["power", "--stat", "tv", "--alt", "exp:1", "--n", "10", "--seed", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--bogus"));

    let out = run(&["critical-values", "--stat", "tv", "--n", "10", "--seed", "1", "--alpha", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"));

    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["critical-values", "--stat", "nope", "--n", "10", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn compute_errors_exit_1_with_name() {
    let f = data_file(&[1.0, 2.0, 2.0, 2.0, 2.0, 3.0]);
    let path = f.path().to_str().unwrap();
    let out = run(&["estimate", "--input", path, "--estimator", "hv", "--n-from-data", "--m", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("TiedSpacing"), "{}", stderr(&out));

    let out = run(&["estimate", "--input", "/nonexistent/data.txt", "--estimator", "hv", "--n-from-data", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn header_echoes_run_parameters() {
    let csv = ok(&["critical-values", "--stat", "tw_r", "--n", "10", "--m", "2", "--reps", "200", "--seed", "5"]);
    assert!(csv.header.starts_with('#'));
    for key in ["seed=5", "n=10", "m=2", "w=3", "mode=full"] {
        assert!(csv.header.contains(key), "{}", csv.header);
    }
}

#[test]
fn csv_and_json_agree() {
    let base = ["rmse-table", "--estimator", "hv,hw_r", "--alt", "exp:1", "--n", "10,20", "--reps", "300", "--seed", "9"];
    let csv = ok(&base);
    let mut args = base.to_vec();
    args.extend(["--output", "json"]);
    let out = run(&args);
    assert!(out.status.success());
    assert!(stderr(&out).starts_with('#'));
    let json: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json.len(), csv.rows.len());
    for (row, obj) in csv.rows.iter().zip(&json) {
        for (name, cell) in csv.columns.iter().zip(row) {
            let v = &obj[name.as_str()];
            if cell.is_empty() {
                assert!(v.is_null());
            } else if let Some(x) = v.as_f64() {
                assert_eq!(cell.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{name}");
            } else {
                assert_eq!(v.as_str().unwrap(), cell);
            }
        }
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&["smooth-demo", "--n", "8", "--seed", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let csv = Csv::parse(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(csv.rows.len(), 8);
}

fn sign_changes(xs: &[f64]) -> usize {
    let d2: Vec<f64> = xs.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect();
    d2.windows(2).filter(|p| p[0] * p[1] < 0.0).count()
}

fn interior_roughness(xs: &[f64]) -> f64 {
    let d2: Vec<f64> = xs.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect();
    d2[3..d2.len() - 3].iter().map(|d| d * d).sum()
}

#[test]
fn smooth_demo_wider_window_fewer_sign_changes() {
    let path = |w: &str| ok(&["smooth-demo", "--n", "30", "--w", w, "--seed", "11"]).floats("smoothed");
    let (c3, c5) = (sign_changes(&path("3")), sign_changes(&path("5")));
    assert!(c5 < c3, "sign changes of second differences: w=3 {c3}, w=5 {c5}");
}

#[test]
fn smooth_demo_shapes() {
    let w3 = ok(&["smooth-demo", "--n", "30", "--w", "3", "--seed", "11"]);
    assert_eq!(w3.rows.len(), 30);
    assert_eq!(w3.columns, ["index", "raw", "smoothed"]);
    let s3 = w3.floats("smoothed");
    assert!(s3.windows(2).all(|p| p[0] <= p[1]));
    let raw = w3.floats("raw");
    assert!(raw.windows(2).all(|p| p[0] <= p[1]));

    let w5 = ok(&["smooth-demo", "--n", "30", "--w", "5", "--seed", "11"]);
    assert_eq!(w5.floats("raw"), raw);
    assert!(interior_roughness(&w5.floats("smoothed")) < interior_roughness(&s3));

    let small = ok(&["smooth-demo", "--n", "5", "--w", "3", "--seed", "3"]);
    assert_eq!(small.floats("smoothed")[0], small.floats("raw")[0]);

    assert_eq!(run(&["smooth-demo", "--n", "2", "--seed", "3"]).status.code(), Some(2));
    assert_ne!(run(&["smooth-demo", "--n", "30", "--w", "4", "--seed", "3"]).status.code(), Some(0));
}

#[test]
fn estimate_from_file() {
    let values = [1.2, 0.4, 2.2, 3.1, 0.9, 1.7, 2.8, 0.3, 1.1, 2.5];
    let f = data_file(&values);
    let path = f.path().to_str().unwrap();
    let args = ["estimate", "--input", path, "--estimator", "hw_r", "--n-from-data", "--mode", "bootstrap", "--seed", "7"];
    let csv = ok(&args);
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.rows[0][csv.col("kind")], "hw_r");
    assert_eq!(csv.rows[0][csv.col("n")], "10");
    assert_eq!(csv.rows[0][csv.col("seed")], "7");
    assert!(csv.floats("value")[0].is_finite());
    assert_eq!(ok(&args).rows, csv.rows);

    let plain = ok(&["estimate", "--input", path, "--estimator", "hv", "--n", "10"]);
    assert!(plain.floats("value")[0].is_finite());
    assert_eq!(run(&["estimate", "--input", path, "--estimator", "hv", "--n", "11"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "--input", path, "--estimator", "hw_r", "--n-from-data"]).status.code(), Some(2));
}

#[test]
fn normality_test_rows() {
    let values = [4.1, 5.3, 4.8, 5.9, 5.0, 4.4, 6.2, 5.5, 4.9, 5.1, 3.8, 5.6];
    let f = data_file(&values);
    let csv = ok(&["normality-test", "--input", f.path().to_str().unwrap(), "--stat", "tv", "--reps", "500", "--seed", "4"]);
    let kinds: Vec<&str> = csv.rows.iter().map(|r| r[csv.col("kind")].as_str()).collect();
    assert_eq!(kinds, ["tv:statistic", "tv:critical", "tv:p_value", "tv:reject"]);
    let v = csv.floats("value");
    assert!(v[2] > 0.0 && v[2] <= 1.0);
    assert_eq!(v[3] == 1.0, v[0] < v[1]);
}

#[test]
fn critical_value_cli_matches_table() {
    let csv = ok(&["critical-values", "--stat", "tve_r", "--n", "20", "--m", "3", "--alpha", "0.05", "--reps", "10000", "--seed", "1"]);
    let v = csv.floats("value")[0];
    assert!((v - 3.3320).abs() < 0.05, "{v}");
}

#[test]
fn real_data_tw_r() {
    let csv = ok(&["real-data", "--stat", "tw_r", "--m", "4"]);
    let find = |k: &str| csv.rows.iter().find(|r| r[csv.col("kind")] == k).unwrap().clone();
    let p: f64 = find("tw_r:p_value")[csv.col("value")].parse().unwrap();
    assert!(p < 0.02, "{p}");
    let power_row = find("tw_r:power");
    assert_eq!(power_row[csv.col("n")], "15");
    let power: f64 = power_row[csv.col("value")].parse().unwrap();
    assert!((power - 0.866).abs() < 0.02, "power at n=15: {power}");
}
