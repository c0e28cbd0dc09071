use std::process::{Command, Output};

fn manypts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_manypts"))
        .args(args)
        .output()
        .expect("spawn manypts")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const RECORDS: &str = include_str!("../../core/fixtures/record_witnesses.jsonl");

#[test]
fn analyze_small_examples() {
    let o = manypts(&["analyze", "--q", "2", "--h", "x", "--f", "x^5+x^3+x^2+x"]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("N1=4\tN2=8\tdeg2=2\ta1=1\ta2=2\th=10\tstructure=Z/10"),
        "{}",
        stdout(&o)
    );

    let o = manypts(&["analyze", "--q", "5", "--f", "x^5-x^3+x"]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("h=64\tstructure=Z/8 x Z/8"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn singular_curve_is_a_usage_error() {
    let o = manypts(&["analyze", "--q", "3", "--f", "x^5+x+1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a smooth genus-2 model"));
}

#[test]
fn covers_of_the_binary_example() {
    let o = manypts(&[
        "covers",
        "--q",
        "2",
        "--h",
        "x",
        "--f",
        "x^5+x^3+x^2+x",
        "--place",
        "P_inf",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.contains("\"d\":5,\"genus\":6,\"N\":10")),
        "{out}"
    );
}

#[test]
fn covers_from_generating_places() {
    let o = manypts(&[
        "covers",
        "--q",
        "5",
        "--f",
        "x^5-x^3+x",
        "--place",
        "P_{0}",
        "--gen-places",
        "P_inf",
        "P_{4,3}",
        "P_{4,2}",
    ]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("\"d\":8,\"genus\":9,\"N\":32"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn verify_accepts_fixture_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.jsonl");
    std::fs::write(&good, RECORDS).unwrap();
    let o = manypts(&["verify", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, RECORDS.replacen("\"N\":63", "\"N\":64", 1)).unwrap();
    let o = manypts(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_over_f5_flags_improvements() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.jsonl");
    let o = manypts(&[
        "search",
        "--q",
        "5",
        "--genus-max",
        "13",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let table = stdout(&o);
    assert!(table.starts_with("genus\tbest_N\tclassification\twitness_ref"));
    for row in [
        "7\t24\timproves_lower_bound",
        "9\t32\timproves_lower_bound",
        "12\t33\timproves_lower_bound",
    ] {
        assert!(table.contains(row), "{row} missing from\n{table}");
    }
    let o = manypts(&["verify", out.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn reproduction_checks_filtered() {
    let o = manypts(&["verify-paper", "--only", "q5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().count() >= 5);
    assert!(out.lines().all(|l| l.starts_with("PASS\t")), "{out}");
}
