//! End-to-end tests of the `motivica` binary: golden outputs, exit codes,
//! JSON round trips and determinism.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the files under `tests/golden/`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use motivica::convolution::{convolve, MeasureZeta};
use motivica::mckay::{mckay_compare, AbelianAction, McKayReport};
use motivica::resolution::{builtin_fixture, Mode, ResolutionData};
use motivica::zeta::{
    igusa_zeta, measure_pushforward, monodromy_zeta, nearby_class, topological_zeta,
    vanishing_class, Form, IgusaZeta,
};
use motivica::{EPoly, EqClass, SRational};
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn input(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motivica"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fx(name: &str) -> ResolutionData {
    builtin_fixture(name).unwrap().data
}

/// Runs `args` and returns the parsed `value` of the JSON envelope.
fn json_value(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    doc["value"].clone()
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("topzeta_cuspA", &["topzeta", "--fixture", "cuspA", "--mode", "local"]),
    ("topzeta_cuspA_global", &["topzeta", "--fixture", "cuspA", "--mode", "global"]),
    ("topzeta_cuspA_json", &["topzeta", "--fixture", "cuspA", "--format", "json"]),
    ("igusa_x", &["igusa", "--fixture", "xN(1)"]),
    ("igusa_x2", &["igusa", "--fixture", "xN(2)"]),
    ("igusa_cusp_q5", &["igusa", "--fixture", "cuspA", "--q", "5"]),
    ("nearby_cuspA", &["nearby", "--fixture", "cuspA"]),
    ("vanishing_node_latex", &["vanishing", "--fixture", "node", "--format", "latex"]),
    ("spectrum_cuspA", &["spectrum", "--fixture", "cuspA"]),
    ("zeta_cuspA", &["zeta", "--fixture", "cuspA", "--order", "6"]),
    ("dlzeta_cuspA", &["dlzeta", "--fixture", "cuspA"]),
    ("monodromy_cuspA", &["monodromy", "--fixture", "cuspA"]),
    ("acampo_cuspA_6", &["acampo", "--fixture", "cuspA", "--n", "6"]),
    ("pushforward_cuspB", &["pushforward", "--fixture", "cuspB"]),
    ("convolve_x2_x2", &["convolve", "--fixture", "xN(2)", "--with-fixture", "xN(2)", "--order", "4"]),
    ("convolve_infinity", &["convolve", "--input", "fixtures/half.json", "--with-input", "fixtures/thirds.json", "--infinity"]),
    ("mckay_a1", &["mckay", "--group", "fixtures/a1.json", "--input", "fixtures/an1.json"]),
    ("kapranov_p1", &["kapranov", "--class", "1 + uv", "--order", "6", "--factor", "0,0", "--factor", "1,1"]),
    ("kapranov_genus2", &["kapranov", "--class", "1 - 2u - 2v + uv", "--order", "8", "--functional-equation"]),
    ("validate_cuspA", &["validate", "--fixture", "cuspA"]),
    ("batch_nearby", &["nearby", "--input", "fixtures/batch"]),
];

fn golden_text(o: &Output) -> String {
    format!("exit: {}\n--- stdout\n{}", o.status.code().unwrap_or(-1), stdout(o))
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = root().join("golden");
    let mut mismatches = Vec::new();
    for (name, args) in GOLDEN {
        let path: PathBuf = dir.join(format!("{name}.txt"));
        let got = golden_text(&run(args));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        if got != want {
            mismatches.push(format!("{name}:\n--- want\n{want}--- got\n{got}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn golden_corpus_has_no_strays() {
    let names: Vec<String> = GOLDEN.iter().map(|(n, _)| format!("{n}.txt")).collect();
    for entry in std::fs::read_dir(root().join("golden")).unwrap() {
        let f = entry.unwrap().file_name().to_string_lossy().into_owned();
        assert!(names.contains(&f), "unreferenced golden file {f}");
    }
}

#[test]
fn known_values() {
    let o = run(&["igusa", "--fixture", "xN(1)"]);
    assert_eq!(stdout(&o).trim(), "(1-q^(-1))/(1-q^(-1-s))");
    let o = run(&["mckay", "--group", &input("a1.json"), "--input", &input("an1.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "equal: true"), "{}", stdout(&o));
    let o = run(&["monodromy", "--fixture", "cuspA"]);
    assert_eq!(stdout(&o).trim(), "(1-t+t^2)/(1-t)");
}

#[test]
fn exit_codes() {
    let o = run(&["validate", "--input", &input("broken.json")]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("ValidationError:"), "{err}");
    // All problems are reported at once.
    for needle in ["non-positive nu", "duplicate component id", "unknown component \"E9\""] {
        assert!(err.contains(needle), "missing {needle:?} in {err}");
    }
    assert!(stdout(&o).is_empty());

    assert_eq!(run(&["nearby", "--fixture", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["nearby", "--input", "fixtures/missing.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // Computation errors exit 2 and name the error.
    let o = run(&["igusa", "--fixture", "node"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).lines().last().unwrap().starts_with("MissingCounts:"));
    let o = run(&["convolve", "--fixture", "xN(2)", "--with-fixture", "xN(1)", "--infinity"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotMassless"), "{}", stderr(&o));
}

#[test]
fn batch_exit_code_is_the_worst() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(input("an1.json"), dir.path().join("a.json")).unwrap();
    std::fs::copy(input("broken.json"), dir.path().join("b.json")).unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let o = run(&["pushforward", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let a = out.find("a.json ==").unwrap();
    let b = out.find("b.json ==").unwrap();
    assert!(a < b);
    assert!(out.contains("L^2"));
    assert!(!out.contains("notes.txt"));
}

#[test]
fn json_round_trips() {
    let cusp = fx("cuspA");
    let v = json_value(&["topzeta", "--fixture", "cuspA"]);
    let z: SRational = serde_json::from_value(v).unwrap();
    assert_eq!(z, topological_zeta(&cusp, Mode::Local).unwrap());

    let v = json_value(&["igusa", "--fixture", "cuspB"]);
    let z: IgusaZeta = serde_json::from_value(v).unwrap();
    assert_eq!(z, igusa_zeta(&fx("cuspB")).unwrap());

    let v = json_value(&["nearby", "--fixture", "cuspA"]);
    assert_eq!(serde_json::from_value::<EqClass>(v).unwrap(), nearby_class(&cusp).unwrap());
    let v = json_value(&["vanishing", "--fixture", "node"]);
    assert_eq!(serde_json::from_value::<EqClass>(v).unwrap(), vanishing_class(&fx("node")).unwrap());

    let v = json_value(&["pushforward", "--fixture", "cuspB", "--form", "closed"]);
    let p: EPoly = serde_json::from_value(v["value"].clone()).unwrap();
    assert_eq!(p, measure_pushforward(&fx("cuspB"), Mode::Global, Form::Closed).unwrap().value);

    let v = json_value(&["monodromy", "--fixture", "cuspA"]);
    let m = monodromy_zeta(&cusp).unwrap();
    assert_eq!(v, serde_json::to_value(&m).unwrap());

    let v = json_value(&["convolve", "--fixture", "xN(2)", "--with-fixture", "xN(2)", "--order", "5"]);
    let s: Vec<EqClass> = serde_json::from_value(v).unwrap();
    let m2 = MeasureZeta::from_nearby(&fx("xN(2)"), "xN(2)").unwrap();
    let direct = convolve(&m2, &m2, 5).unwrap();
    assert_eq!(s, (0..=5).map(|n| direct.get(n)).collect::<Vec<_>>());

    let v = json_value(&["mckay", "--group", &input("a1.json"), "--input", &input("an1.json")]);
    let r: McKayReport = serde_json::from_value(v).unwrap();
    let g = AbelianAction::from_json(&std::fs::read_to_string(input("a1.json")).unwrap()).unwrap();
    let res = ResolutionData::from_json(&std::fs::read_to_string(input("an1.json")).unwrap()).unwrap();
    assert_eq!(r, mckay_compare(&g, &res).unwrap());

    // Printed fixtures load back to the same data.
    let o = run(&["fixtures", "--fixture", "cuspB"]);
    assert_eq!(ResolutionData::from_json(&stdout(&o)).unwrap(), fx("cuspB"));
}

#[test]
fn identical_runs_are_bit_identical() {
    for args in [
        &["topzeta", "--fixture", "cuspB", "--format", "json"][..],
        &["convolve", "--fixture", "cuspA", "--with-fixture", "xN(2)", "--order", "6", "--format", "json"],
        &["nearby", "--input", "fixtures/batch", "--format", "json"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn json_keys_are_sorted() {
    fn check(v: &Value, path: &Path) {
        match v {
            Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                let mut sorted = keys.clone();
                sorted.sort();
                assert_eq!(keys, sorted, "at {}", path.display());
                for (k, x) in m {
                    check(x, &path.join(k));
                }
            }
            Value::Array(xs) => xs.iter().for_each(|x| check(x, path)),
            _ => {}
        }
    }
    let o = run(&["igusa", "--fixture", "cuspA", "--format", "json"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    check(&v, Path::new("/"));
    // The textual order matches too, not just the parsed map.
    let first = text.find("\"data\"").unwrap();
    assert!(first < text.find("\"kind\"").unwrap());
    assert!(text.find("\"kind\"").unwrap() < text.find("\"value\"").unwrap());
}
