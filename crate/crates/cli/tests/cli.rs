use assert_cmd::Command;
use serde_json::Value;
use stratlam::derivation::json::{load_str, to_json_string};
use stratlam::derivation::{ax, loll_e, Derivation};
use stratlam::names::name;
use stratlam::numerals::Bit;
use stratlam::sta::corpus::sta_succ;
use stratlam::types::Type;

fn bin() -> Command {
    Command::cargo_bin("stratlam").unwrap()
}

fn stdout(args: &[&str]) -> (String, i32) {
    let o = bin().args(args).output().unwrap();
    (String::from_utf8(o.stdout).unwrap(), o.status.code().unwrap())
}

#[test]
fn infer_self_application() {
    let (out, code) = stdout(&["infer", "\\x. x x"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("{a1 -o a2, a1} -o a2"), "{out}");
}

#[test]
fn infer_rejects_omega() {
    let (_, code) = stdout(&["infer", "(\\x. x x)(\\x. x x)"]);
    assert_eq!(code, 1);
}

#[test]
fn emitted_derivation_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("d.json");
    let (_, code) = stdout(&["infer", "(\\x. x x)(\\y. y)", "--emit-derivation", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let d = load_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert!(d.subject().alpha_eq(&stratlam::term::parse_term("(\\x. x x) (\\y. y)").unwrap()));
    let (out, code) = stdout(&["check", f.to_str().unwrap()]);
    assert_eq!((out.trim(), code), ("ok", 0));
}

fn clashing() -> Derivation {
    // both premises bind x
    let good = loll_e(
        ax(name("f"), Type::arrow(Type::var("a"), Type::var("b")).unwrap()).unwrap(),
        ax(name("x"), Type::var("a")).unwrap(),
    )
    .unwrap();
    let mut bad = good.clone();
    bad.premises[0] = std::sync::Arc::new(ax(name("x"), Type::arrow(Type::var("a"), Type::var("b")).unwrap()).unwrap());
    bad.concl.subject = stratlam::term::parse_term("x x").unwrap();
    bad
}

#[test]
fn check_reports_reason() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, to_json_string(&clashing())).unwrap();
    let (out, code) = stdout(&["--json", "check", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reason"], "contexts-not-disjoint");
}

#[test]
fn demo_iter_prints_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.json");
    let (out, code) = stdout(&["demo", "iter", "--k", "3", "--succ", "0", "--input", "5", "--report", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("output: 40"), "{out}");
    assert!(out.contains("pass"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(r["output"], 40);
    assert_eq!(r["pass"], true);
}

#[test]
fn demo_succ_json() {
    let (out, code) = stdout(&["--json", "demo", "succ", "--bit", "1", "--input", "6"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["output"], 13);
}

#[test]
fn translate_sta_file_and_measure() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("sta.json");
    let dst = dir.path().join("str.json");
    std::fs::write(&src, stratlam::sta::json::to_json_string(&sta_succ(Bit::Zero, 2, 1).unwrap())).unwrap();
    let (_, code) =
        stdout(&["translate", "--from", "sta", src.to_str().unwrap(), "--emit-derivation", dst.to_str().unwrap()]);
    assert_eq!(code, 0);
    let a: Value = serde_json::from_str(&stdout(&["--json", "measure", src.to_str().unwrap(), "--r", "1,2,3"]).0).unwrap();
    let b: Value = serde_json::from_str(&stdout(&["--json", "measure", dst.to_str().unwrap(), "--r", "1,2,3"]).0).unwrap();
    assert_eq!(a, b);
    assert_eq!(a["degree"], 2);
}

#[test]
fn translate_type_to_intersections() {
    let (out, code) = stdout(&["translate", "--to", "inter", "{a, {b, c}} -o a"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(a /\\ (b /\\ c)) -> a");
}

#[test]
fn sn_and_fuel_exit_codes() {
    assert_eq!(stdout(&["sn", "(\\x. x x)(\\x. x x)"]), ("no\n".into(), 0));
    assert_eq!(stdout(&["sn", "\\x. x"]).0, "yes\n");
    let (_, code) = stdout(&["reduce", "(\\x. x x x)(\\x. x x x)", "--fuel", "50"]);
    assert_eq!(code, 3);
}

#[test]
fn reduce_traces_weights() {
    let (out, code) = stdout(&["--json", "reduce", "(\\x. x) (\\y. y) (\\z. z)", "--trace-weights"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["steps"], 2);
    let ws: Vec<u64> = v["trace"].as_array().unwrap().iter().map(|r| r["weight"].as_str().unwrap().parse().unwrap()).collect();
    assert!(ws.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(stdout(&["infer", "\\x."]).1, 2);
    assert_eq!(stdout(&["frobnicate"]).1, 2);
    assert_eq!(stdout(&["sweep", "--max-size", "99"]).1, 2);
}

#[test]
fn sweep_csv() {
    let (out, code) = stdout(&["sweep", "--max-size", "5"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "term,size,is_sn,infer_ok,degree,steps,bound,bound_ok");
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with(",true")), "{out}");
}
