use std::process::{Command, Output};

fn pcot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcot"))
        .args(args)
        .env_remove("PCOT_PREC_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV output into a header and rows of fields.
fn csv_rows(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let s = stdout(o);
    let mut lines = s.lines();
    let head = lines.next().unwrap().split(',').map(str::to_string).collect();
    (head, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn field(head: &[String], row: &[String], name: &str) -> f64 {
    let i = head.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    row[i].parse().unwrap()
}

#[test]
fn help_matches_golden() {
    let o = pcot(&["--help"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), include_str!("golden/help.txt"));
    let o = pcot(&["cotsum", "--help"]);
    assert_eq!(stdout(&o), include_str!("golden/cotsum_help.txt"));
}

#[test]
fn cotsum_one_third() {
    let o = pcot(&["cotsum", "--a", "0", "--h", "1", "--k", "3"]);
    assert!(o.status.success());
    let (h, r) = csv_rows(&o);
    let v = field(&h, &r[0], "value_re");
    assert!((v - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15, "{v}");
    assert_eq!(format!("{v:.8}"), "0.19245009");
}

#[test]
fn cotsum_methods_agree() {
    let run = |m: &str| {
        let o = pcot(&["cotsum", "--a", "-3", "--h", "5", "--k", "13", "--method", m]);
        let (h, r) = csv_rows(&o);
        field(&h, &r[0], "value_re")
    };
    let (a, b, c) = (run("auto"), run("direct"), run("fast"));
    assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{a} {b}");
    assert!((a - c).abs() < 1e-12 * a.abs().max(1.0), "{a} {c}");
}

#[test]
fn taylor_a20() {
    let o = pcot(&["taylor", "--am", "20"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("20,0.0499998087"));
    let o = pcot(&["taylor", "--am", "6", "--upto"]);
    assert_eq!(csv_rows(&o).1.len(), 5);
}

#[test]
fn figure_five_first_row() {
    let o = pcot(&["figure", "--id", "5", "--kmax", "2"]);
    let (h, r) = csv_rows(&o);
    assert_eq!(&r[0][..2], ["1", "1"]);
    let v = field(&h, &r[0], "value");
    assert!((v + 1.0 / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn figure_one_is_odd() {
    let o = pcot(&["figure", "--id", "1"]);
    let (h, r) = csv_rows(&o);
    let first = field(&h, &r[0], "value");
    let last = field(&h, r.last().unwrap(), "value");
    assert_eq!(r.last().unwrap()[0], "540");
    assert!((first + last).abs() < 1e-12 * first.abs());
}

#[test]
fn csv_values_round_trip() {
    let o = pcot(&["figure", "--id", "2", "--kmax", "6"]);
    let (_, r) = csv_rows(&o);
    for row in r {
        let v: f64 = row[2].parse().unwrap();
        assert_eq!(format!("{v:?}"), row[2]);
    }
}

#[test]
fn json_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = pcot(&["cotsum", "--a", "1", "--h", "2", "--k", "7", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v[0]["method"], "bernoulli");
    assert_eq!(v[0]["k"], 7);
    assert!(v[0]["value_re"].as_f64().is_some());
}

#[test]
fn exit_codes() {
    assert_eq!(pcot(&["cotsum", "--a", "0", "--h", "1", "--k", "0"]).status.code(), Some(2));
    assert_eq!(pcot(&["figure", "--id", "9"]).status.code(), Some(2));
    assert_eq!(pcot(&["period", "--a", "0", "--z-re", "-1", "--z-im", "0"]).status.code(), Some(2));
    assert_eq!(pcot(&["taylor"]).status.code(), Some(2));
    let o = pcot(&["verify", "--suite", "dedekind", "--kmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",pass"));
    // a tolerance nothing can meet
    let o = pcot(&["verify", "--suite", "voronoi", "--tol", "1e-40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",fail"));
}

#[test]
fn precision_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_pcot"))
        .args(["cotsum", "--a", "0.5", "--h", "3", "--k", "11"])
        .env("PCOT_PREC_BITS", "256")
        .output()
        .unwrap();
    let (h, r) = csv_rows(&o);
    assert!(field(&h, &r[0], "err") < 1e-60);
}

#[test]
fn reciprocity_suite_passes() {
    let o = pcot(&["verify", "--suite", "reciprocity", "--kmax", "10", "--a", "0,0.5,-2.5", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn moment_matches_oracle() {
    let o = pcot(&["moment", "--delta", "1", "--oracle"]);
    let (h, r) = csv_rows(&o);
    assert!(field(&h, &r[0], "difference") < 1e-10);
}
