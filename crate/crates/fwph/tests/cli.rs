use std::path::Path;

use fwph::cli::{run, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_USAGE};
use fwph::generator::{generate_instance, Shape};
use fwph::native::parse_native;
use fwph_core::oracle::{enumerate_ld, ENUMERATION_BUDGET};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["fwph"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace().find_map(|t| t.strip_prefix(&format!("{key}="))).unwrap()
}

fn columns(path: &Path, names: &[&str]) -> Vec<Vec<String>> {
    let mut rd = csv::Reader::from_path(path).unwrap();
    let header = rd.headers().unwrap().clone();
    let idx: Vec<usize> = names.iter().map(|n| header.iter().position(|h| h == *n).unwrap()).collect();
    rd.records().map(|r| idx.iter().map(|&i| r.as_ref().unwrap()[i].to_string()).collect()).collect()
}

#[test]
fn fwph_end_to_end_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g1.toml");
    let trace = dir.path().join("g1.csv");
    let (code, _, _) = call(&["gen", "--seed", "1", "--out", inst.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let problem = parse_native(&std::fs::read_to_string(&inst).unwrap()).unwrap().problem;
    let ld = enumerate_ld(&problem, ENUMERATION_BUDGET).unwrap().value;
    let (code, out, err) = call(&[
        "fwph", "--instance", inst.to_str().unwrap(), "--rho", "10", "--alpha", "0", "--eps", "1e-3",
        "--trace", trace.to_str().unwrap(), "--ref-value", &ld.to_string(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(field(&out, "termination"), "C");
    let best: f64 = field(&out, "best_phi").parse().unwrap();
    assert!(best <= ld + 1e-9 && best >= ld - 1e-2 * ld.abs(), "{best} vs {ld}");
    assert!(field(&out, "gap").ends_with('%'));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("iter,wall_s,phi,best_phi,residual,milp_solves,vertices,flags\n"));
    let k: usize = field(&out, "iterations").parse().unwrap();
    assert_eq!(text.lines().count(), k + 1);
}

#[test]
fn ph_rejects_general_integer_first_stage() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("int.toml");
    let (_, doc) = generate_instance(2, &Shape::default()).unwrap();
    let doc = doc.replacen("kinds = [\"binary\"", "kinds = [\"integer\"", 1).replacen("upper = [1.0", "upper = [2.0", 1);
    std::fs::write(&inst, doc).unwrap();
    let (code, _, err) = call(&["ph", "--instance", inst.to_str().unwrap()]);
    assert_eq!(code, EXIT_PRECONDITION, "{err}");
    assert!(err.contains("not binary"), "{err}");
}

#[test]
fn parse_and_usage_failures_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[metadata]\nname = 1\n").unwrap();
    let (code, _, err) = call(&["fwph", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("bad.toml:2:"), "{err}");
    assert_eq!(call(&["fwph", "--instance", "/nonexistent/x.toml"]).0, EXIT_PARSE);
    assert_eq!(call(&["fwph"]).0, EXIT_USAGE);
    assert_eq!(call(&["fwph", "--seed", "0", "--format", "xml"]).0, EXIT_USAGE);
    assert_eq!(call(&["fwph", "--seed", "0", "--rho", "0"]).0, EXIT_PRECONDITION);
}

#[test]
fn smps_instances_solve() {
    let base = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/tiny");
    let (code, out, err) = call(&["solve-ef", "--instance", base.to_str().unwrap(), "--format", "smps", "--ref-value", "20"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(field(&out, "objective"), "20");
    assert_eq!(field(&out, "gap"), "0.0000%");
}

#[test]
fn traces_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for threads in ["1", "4"] {
        let trace = dir.path().join(format!("t{threads}.csv"));
        let (code, _, err) = call(&[
            "ph", "--seed", "3", "--rho", "3", "--kmax", "40", "--threads", threads, "--trace", trace.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        runs.push(columns(&trace, &["iter", "phi", "best_phi", "residual", "milp_solves"]));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn oracle_and_sweep() {
    let (code, out, _) = call(&["oracle", "--seed", "0", "--ef"]);
    assert_eq!(code, EXIT_OK);
    let value = |key: &str| -> f64 {
        out.lines().find_map(|l| l.strip_prefix(&format!("oracle: {key}="))).unwrap().split_whitespace().next().unwrap().parse().unwrap()
    };
    assert!((value("enumeration") - value("kelley")).abs() < 1e-6);
    assert!(value("wait-and-see") <= value("enumeration") + 1e-9);
    assert!(value("enumeration") <= value("extensive-form") + 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = call(&[
        "sweep", "--seed", "0", "--rho", "2,5,10", "--kmax", "50", "--trace", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out.lines().count(), 4);
    for rho in ["2", "5", "10"] {
        assert!(dir.path().join(format!("fwph_rho_{rho}.csv")).is_file());
    }
}
