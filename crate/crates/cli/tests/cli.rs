use std::process::{Command, Output};

use fpbl_core::dist::enumeration_counts;
use fpbl_core::Pattern3;

fn fpbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpbl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fpbl(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows of a CSV, skipping `#` comments and the header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(csv: &str, i: usize) -> Vec<String> {
    rows(csv).into_iter().map(|r| r[i].clone()).collect()
}

#[test]
fn count_examples() {
    let csv = stdout(&["count", "--tau", "321", "--n", "4"]);
    assert_eq!(column(&csv, 1), ["6", "4", "3", "0", "1"]);
    let csv = stdout(&["count", "--tau", "231", "--n", "3"]);
    let oracle: Vec<String> = enumeration_counts(3, Some(Pattern3::P231))
        .unwrap()
        .iter()
        .map(ToString::to_string)
        .collect();
    assert_eq!(column(&csv, 1), oracle);
    let csv = stdout(&["count", "--n", "4"]);
    assert_eq!(column(&csv, 1), ["9", "8", "6", "0", "1"]);
}

#[test]
fn scaled_counts_sum_to_scaled_catalan() {
    let csv = stdout(&[
        "count",
        "--tau",
        "132",
        "--n",
        "10",
        "--mode",
        "scaled-float",
    ]);
    let total: f64 = column(&csv, 1)
        .iter()
        .map(|v| v.parse::<f64>().unwrap())
        .sum();
    assert!((total - 16796.0 / 4f64.powi(10)).abs() < 1e-15);
}

#[test]
fn zn_examples() {
    let csv = stdout(&["zn", "--n", "4", "--q", "2", "--tau", "321"]);
    assert_eq!(column(&csv, 1), ["1", "2", "5", "14", "42"]);
    let csv = stdout(&["zn", "--n", "3", "--tau", "321"]);
    let last: Vec<String> = rows(&csv)
        .into_iter()
        .filter(|r| r[0] == "3")
        .map(|r| r[2].clone())
        .collect();
    assert_eq!(last, ["2", "2", "0", "1"]);
    let csv = stdout(&[
        "zn",
        "--n",
        "300",
        "--q",
        "7/3",
        "--tau",
        "321",
        "--mode",
        "scaled-float",
    ]);
    let exact = stdout(&["zn", "--n", "300", "--q", "7/3", "--tau", "321"]);
    let a: f64 = column(&csv, 1)[300].parse().unwrap();
    let b: f64 = column(&exact, 2)[300].parse().unwrap();
    assert!((a - b).abs() < 1e-9 * b.abs(), "{a} {b}");
}

#[test]
fn pmf_examples() {
    let csv = stdout(&["pmf", "--n", "3", "--q", "2", "--tau", "321"]);
    assert_eq!(column(&csv, 1), ["1/7", "2/7", "0", "4/7"]);
    let csv = stdout(&["pmf", "--n", "2", "--q", "1"]);
    assert_eq!(column(&csv, 1), ["1/2", "0", "1/2"]);
    let csv = stdout(&[
        "pmf",
        "--n",
        "1000",
        "--q",
        "3",
        "--tau",
        "321",
        "--mode",
        "scaled-float",
    ]);
    let total: f64 = column(&csv, 1)
        .iter()
        .map(|v| v.parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12, "{total}");
    assert!(column(&csv, 2).iter().all(|m| m == "scaled-float"));
}

#[test]
fn pmf_refuses_unavailable_modes() {
    let out = fpbl(&["pmf", "--n", "20", "--q", "2", "--tau", "231"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("legal modes"));
}

#[test]
fn json_round_trips_byte_for_byte() {
    let json = stdout(&[
        "pmf", "--n", "6", "--q", "5/2", "--tau", "132", "--format", "json",
    ]);
    let pmf = fpbl_core::dist::FixedPointPmf::from_json(&json).unwrap();
    assert_eq!(pmf.to_json(), json);
    let csv = stdout(&["pmf", "--n", "6", "--q", "5/2", "--tau", "132"]);
    assert_eq!(pmf.to_csv(), csv);
}

#[test]
fn verify_theorems_pass() {
    let cases: [&[&str]; 3] = [
        &["verify", "--theorem", "1", "--q", "2", "--n", "25,50,100"],
        &[
            "verify",
            "--theorem",
            "3",
            "--q",
            "2",
            "--n",
            "250,500,1000",
        ],
        &["verify", "--theorem", "5", "--q", "4", "--n", "2000"],
    ];
    for args in cases {
        let out = fpbl(args);
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {err}");
        assert!(err.lines().any(|l| l.starts_with("PASS")), "{err}");
        assert!(!err.contains("FAIL"));
    }
}

#[test]
fn verify_reports_failures_with_exit_one() {
    let out = fpbl(&[
        "verify",
        "--theorem",
        "3",
        "--q",
        "2",
        "--n",
        "10",
        "--tolerance",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL theorem=3"));
}

#[test]
fn verify_refuses_outside_hypotheses() {
    let out = fpbl(&["verify", "--theorem", "3", "--q", "4", "--n", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < q < 3"));
}

#[test]
fn verify_lemma1() {
    let out = fpbl(&["verify", "--lemma1", "--q", "4", "--n", "500"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn sample_is_reproducible() {
    let args = [
        "sample", "--n", "30", "--q", "2", "--tau", "321", "--count", "200", "--seed", "7",
        "--stream", "3",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert!(a.starts_with("# seed=7 stream_id=3 n=30 q=2 tau=321\nsample_index,fp\n"));
    assert_eq!(rows(&a).len(), 200);
    let other = stdout(&[
        "sample", "--n", "30", "--q", "2", "--tau", "321", "--count", "200", "--seed", "8",
    ]);
    assert_ne!(a, other);
}

#[test]
fn sampled_permutations_avoid_and_match_counts() {
    let csv = stdout(&[
        "sample", "--n", "9", "--q", "1/2", "--tau", "213", "--count", "50", "--emit", "perm",
    ]);
    for r in rows(&csv) {
        let p: fpbl_core::Permutation = r[2].parse().unwrap();
        assert!(p.avoids(Pattern3::P213));
        assert_eq!(p.fixed_points().to_string(), r[1]);
    }
}

#[test]
fn whole_permutation_sampling_refused_beyond_routes() {
    let out = fpbl(&[
        "sample", "--n", "20", "--q", "4", "--tau", "321", "--emit", "perm",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("fixed-point count sampling"));
}

#[test]
fn explore_mean_increases() {
    let csv = stdout(&["explore", "--tau", "231", "--n-max", "8", "--q", "2"]);
    let means: Vec<f64> = column(&csv, 2).iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(means.len(), 8);
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
}

#[test]
fn asym_tables() {
    let out = fpbl(&[
        "asym",
        "--kind",
        "lemma1",
        "--q",
        "1",
        "--n",
        "250,500,1000",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("monotone=true"));
    let csv = String::from_utf8(out.stdout).unwrap();
    let last: f64 = column(&csv, 3)[2].parse().unwrap();
    assert!((last - 1.0).abs() < 0.01);
    let out = fpbl(&["asym", "--kind", "distance", "--q", "2", "--n", "10,20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("fpbl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("count.csv");
    let out = fpbl(&[
        "count",
        "--tau",
        "132",
        "--n",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&["count", "--tau", "132", "--n", "5"])
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(
        fpbl(&["pmf", "--n", "3", "--q", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fpbl(&["count", "--n", "3", "--tau", "4321"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fpbl(&["verify", "--q", "2", "--n", "10"]).status.code(),
        Some(2)
    );
}
