use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_artinhexa"));
    c.env_remove("ARTINHEXA_DATA");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("artinhexa-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_braid_prints_tag_and_clause() {
    let o = run(&["classify-braid", "--blocks", "1,1", "--twist", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "EssentialTorus Thm4.2-ii\n");
    let o = run(&["classify-braid", "--blocks", "2,3", "--twist", "-1"]);
    assert_eq!(stdout(&o), "Hyperbolic\n");
}

#[test]
fn rho_of_half_twist() {
    let o = run(&["rho", "--braid-word", "s1*s2*s1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "D\n");
    let o = run(&["rho", "--braid-word", "s1^2", "--even-power"]);
    assert_eq!(stdout(&o), "y^2*D*y^2*D\neven-power YES (y^2*D)^(2*1)\n");
}

#[test]
fn gen_presentation_from_filling() {
    let o = run(&["gen-presentation", "--hex", "1,1,1,0,0,0"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "rank 3\nx1^-1\nx2^-1*x3^-1*x2^-1\nx3^-1*x2^-1\n"
    );
    let o = run(&["gen-presentation", "--params", "-1,0,2,1,-1,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_and_simplify_a_file() {
    let f = scratch(
        "t5r1.txt",
        "rank 3\nx1^-1\nx2^-1*x3^-1*x2^-1\nx3^-1*x2^-1\n",
    );
    let o = run(&[
        "verify-artin",
        "--file",
        f.to_str().unwrap(),
        "--condition",
        "w",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "W true\nF false\n");
    let o = run(&[
        "verify-artin",
        "--file",
        f.to_str().unwrap(),
        "--condition",
        "f",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["simplify", "--file", f.to_str().unwrap(), "--emit-log"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tag"], "Trivial");
    assert_eq!(v["divisors"], serde_json::json!([1, 1, 1]));
    assert!(v["moves"].as_array().is_some_and(|m| !m.is_empty()));
    assert!(v["budget_spent"].as_u64().is_some());
}

#[test]
fn simplify_reports_torsion() {
    let f = scratch("torsion.txt", "rank 3\nx1^2\nx2\nx3\n");
    let o = run(&["simplify", "--file", f.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tag"], "NotTrivial");
    assert_eq!(v["divisors"], serde_json::json!([1, 1, 2]));
}

#[test]
fn rat_group_drops_last_relator() {
    let f = scratch("units.txt", "rank 3\nx1^-1\nx2^-1\nx3^-1\n");
    let o = run(&["rat-group", "--file", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "rank 3\nx1^-1\nx2^-1\n");
    assert!(o.stderr.is_empty());
    let f = scratch("bad.txt", "rank 3\nx1*x2\nx2\nx3^2\n");
    let o = run(&["rat-group", "--file", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn symmetry_and_orbit() {
    let o = run(&["symmetry", "--index", "3", "--hex", "1,2,3,4,5,6"]);
    assert_eq!(stdout(&o), "3,1,2,6,4,5\n");
    let o = run(&["symmetry", "--index", "25", "--hex", "1,2,3,4,5,6"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["orbit", "--hex", "0,0,0,0,0,0", "--mirror"]);
    assert_eq!(stdout(&o), "0,0,0,0,0,0\n");
    let o = run(&["orbit", "--hex", "-1,2,3,0,5,7"]);
    assert_eq!(stdout(&o).lines().count(), 24);
}

#[test]
fn validate_symmetries_reports() {
    let o = run(&["validate-symmetries", "--control"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("PASS\tclosure"));
    assert!(out.contains("opposite pairs: {alpha,epsilon} {beta,eta} {gamma,delta}"));
}

#[test]
fn parse_cell_evaluates_branches() {
    let o = run(&["parse-cell", "±1-gamma", "--assign", "gamma=2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "±1-gamma\n-1 -3\n");
    let o = run(&["parse-cell", "gamma+delta"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two_with_grammar() {
    let o = run(&["run-tables", "--param-range", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--help"]);
    assert!(stdout(&o).contains("Input grammars"));
}

#[test]
fn domain_errors_exit_one() {
    let f = scratch("garbage.txt", "rank 3\nx1^0\n");
    let o = run(&["verify-artin", "--file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exponent 0"));
}

#[test]
fn run_tables_is_deterministic_across_jobs() {
    let args = [
        "run-tables",
        "--tables",
        "1",
        "--param-range",
        "-2..2",
        "--symmetries",
        "all",
    ];
    let a = bin().args(args).args(["--jobs", "1"]).output().unwrap();
    let b = bin().args(args).args(["--jobs", "8"]).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with(
        "1\t1\t-\t+++\t1\t-\t1,1,1,0,0,0\tx1^-1, x2^-1*x3^-1*x2^-1, x3^-1*x2^-1\ttrue"
    ));
    assert!(
        first.ends_with("\tTrivial\tSplittable Thm4.2-i\t5:1"),
        "{first}"
    );
}

#[test]
fn run_tables_json_and_out() {
    let out =
        std::env::temp_dir().join(format!("artinhexa-cli-{}-report.jsonl", std::process::id()));
    let o = run(&[
        "run-tables",
        "--tables",
        "1",
        "--param-range",
        "0..0",
        "--symmetries",
        "id",
        "--json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["table"], 1);
    assert_eq!(first["w"], true);
}

#[test]
fn data_directory_override() {
    let dir = std::env::temp_dir().join(format!("artinhexa-cli-{}-data", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let o = bin()
        .env("ARTINHEXA_DATA", &dir)
        .args(["run-tables", "--tables", "1", "--symmetries", "id"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("table1.tsv"));
}

#[test]
fn match_examples_summary() {
    let o = run(&[
        "match-examples",
        "--tables",
        "1",
        "--param-range",
        "-1..1",
        "--symmetries",
        "id",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("5\t1\t")).unwrap();
    assert_eq!(row, "5\t1\tconcrete\t1\t1\t1\t0\t1\t1\t1:1@1");
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("examples=120 matched="));
}
