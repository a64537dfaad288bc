use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn manifest(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests").join(format!("{name}.json"))
}

fn twk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twk")).args(args).env_remove("TWK_THREADS").output().expect("run twk")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn p1() -> String {
    manifest("p1-line-bundles").to_string_lossy().into_owned()
}

/// Writes `v` to a temporary file and returns its handle.
fn temp_manifest(v: &Value) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), serde_json::to_string(v).unwrap()).unwrap();
    f
}

fn load(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(manifest(name)).unwrap()).unwrap()
}

#[test]
fn shipped_manifests_match_the_builtin_examples() {
    for name in ["p1-line-bundles", "z2-sign-rep", "three-open-nerve"] {
        let out = twk(&["example", name]);
        assert_eq!(code(&out), 0);
        let shipped: Value = load(name);
        let built: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(shipped, built, "{name} is stale; regenerate with `twk example {name}`");
    }
}

#[test]
fn line_bundle_validates() {
    let out = twk(&["validate", &p1(), "--object", "O(3)"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    for n in -5..=5 {
        assert_eq!(code(&twk(&["validate", &p1(), "--object", &format!("O({n})")])), 0);
    }
}

#[test]
fn perturbed_bundle_fails_and_names_the_tuple() {
    let out = twk(&["validate", &p1(), "--object", "O(3)-perturbed"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("(U0,U1,U0)"), "{}", stdout(&out));
    let out = twk(&["--format", "json", "validate", &p1(), "--object", "O(3)-perturbed"]);
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["first_failure"]["kind"], "residual");
    assert_eq!(v["first_failure"]["cell"], "(U0,U1,U0)");
}

#[test]
fn malformed_scalar_is_an_input_error() {
    let mut v = load("p1-line-bundles");
    v["objects"]["O(3)"]["components"][1]["blocks"][0]["rows"][0][0] = Value::from("2*t^^3");
    let f = temp_manifest(&v);
    let out = twk(&["validate", f.path().to_str().unwrap(), "--object", "O(3)"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2*t^^3"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&twk(&["validate", &p1(), "--object", "nope"])), 2);
    assert_eq!(code(&twk(&["validate", "/nonexistent/manifest.json", "--object", "O(0)"])), 2);
    let mut v = load("p1-line-bundles");
    v["surprise"] = Value::from(1);
    let f = temp_manifest(&v);
    assert_eq!(code(&twk(&["validate", f.path().to_str().unwrap(), "--object", "O(0)"])), 2);
    // floats are not scalar literals
    let mut v = load("p1-line-bundles");
    v["objects"]["O(0)"]["components"][0]["blocks"][0]["rows"][0][0] = Value::from(1.0);
    let f = temp_manifest(&v);
    assert_eq!(code(&twk(&["validate", f.path().to_str().unwrap(), "--object", "O(0)"])), 2);
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_twk"))
        .args(["validate", &p1(), "--object", "O(0)"])
        .env("TWK_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad_threads), 2);
}

fn dims(from: &str, to: &str) -> (u64, u64) {
    let out = twk(&["--format", "json", "cohomology", &p1(), "--from", from, "--to", to, "--degrees", "0..1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let d = |i: usize| v["degrees"][i]["dim"].as_u64().unwrap();
    (d(0), d(1))
}

#[test]
fn projective_line_cohomology() {
    assert_eq!(dims("O(0)", "O(2)"), (3, 0));
    assert_eq!(dims("O(0)", "O(-2)"), (0, 1));
    assert_eq!(dims("O(0)", "O(0)"), (1, 0));
    assert_eq!(dims("O(1)", "O(4)"), (4, 0));
    assert_eq!(dims("O(0)", "O(-5)"), (0, 4));
}

#[test]
fn cohomology_refuses_invalid_inputs() {
    let out = twk(&["cohomology", &p1(), "--from", "O(0)", "--to", "O(3)-perturbed"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("refusing"));
}

#[test]
fn roundtrips_are_identical() {
    for obj in ["O(0)", "O(-4)", "O(5)"] {
        let out = twk(&["roundtrip", &p1(), "--object", obj]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(stdout(&out).contains("identical"));
    }
    let three = manifest("three-open-nerve");
    for obj in ["O", "random"] {
        let out = twk(&["--format", "json", "roundtrip", three.to_str().unwrap(), "--object", obj]);
        assert_eq!(code(&out), 0);
        assert_eq!(json(&out)["problems"], Value::Array(vec![]));
    }
}

#[test]
fn equivariant_fixtures() {
    let z2 = manifest("z2-sign-rep");
    let z2 = z2.to_str().unwrap();
    for (obj, want) in [("sign", 0), ("swap", 0), ("repaired", 0), ("broken", 1), ("unrepaired", 1)] {
        assert_eq!(code(&twk(&["equivariant", z2, "--object", obj])), want, "{obj}");
    }
    let v = json(&twk(&["--format", "json", "equivariant", z2, "--object", "broken"]));
    assert_eq!(v["levels"][1]["level"], 2);
    assert!(v["levels"][1]["nonzero_residuals"].as_u64().unwrap() > 0);
    assert_eq!(v["levels"][0]["nonzero_residuals"], 0);
    assert_eq!(code(&twk(&["validate", z2, "--object", "edge"])), 0);
    // `equivariant` insists on the right kind
    assert_eq!(code(&twk(&["equivariant", z2, "--object", "edge"])), 2);
}

#[test]
fn nerve_levels_and_matching_factors() {
    let three = manifest("three-open-nerve");
    for k in 0..=4usize {
        let out = twk(&["--format", "json", "nerve", three.to_str().unwrap(), "--level", &k.to_string()]);
        assert_eq!(code(&out), 0);
        let v = json(&out);
        assert_eq!(v["tuples"].as_array().unwrap().len(), 3usize.pow(k as u32 + 1));
        assert_eq!(v["factors"].as_array().unwrap().len(), (1 << k) - 1);
        assert_eq!(v["projection"], true);
    }
}

#[test]
fn closed_and_arbitrary_morphisms_square_to_zero() {
    let mut v = load("p1-line-bundles");
    let comp = |tuple: &[&str], k: i32, q: i32, entry: &str| {
        serde_json::json!({"tuple": tuple, "bidegree": [k, q], "blocks": [{"degree": 0, "rows": [[entry]]}]})
    };
    v["morphisms"] = serde_json::json!({
        "s": {"from": "O(0)", "to": "O(2)", "degree": 0, "components": [
            comp(&["U0"], 0, 0, "1 + t^2"), comp(&["U1"], 0, 0, "s^2 + 1")
        ]},
        "h": {"from": "O(0)", "to": "O(1)", "degree": 1, "components": [comp(&["U0", "U1"], 1, 0, "3*t^-1 + t")]},
    });
    let f = temp_manifest(&v);
    let path = f.path().to_str().unwrap();
    for m in ["s", "h"] {
        let out = twk(&["validate", path, "--object", m]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(stdout(&out).contains("d∘d = 0"));
    }
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = twk(&["selftest", "--seed", "3", "--trials", "4"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let b = twk(&["selftest", "--seed", "3", "--trials", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_twk"))
        .args(["--format", "json", "selftest", "--seed", "3", "--trials", "4"])
        .env("TWK_THREADS", "1")
        .output()
        .unwrap();
    let many = twk(&["--format", "json", "selftest", "--seed", "3", "--trials", "4"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn selftest_beyond_truncation_still_passes() {
    let out = twk(&["selftest", "--trials", "1", "--levels", "5"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn injected_failure_yields_a_reproducer_that_fails_again() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("rep.json");
    let out = twk(&["selftest", "--trials", "2", "--inject-bad", "--out", rep.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("suite mc         FAIL"));
    let rep = rep.to_str().unwrap();
    assert_eq!(code(&twk(&["validate", rep, "--object", "counterexample"])), 1);
    assert_eq!(code(&twk(&["selftest", "--replay", rep])), 1);
    let v = json(&twk(&["--format", "json", "selftest", "--trials", "2", "--inject-bad"]));
    assert_eq!(v["pass"], false);
    assert_eq!(v["suites"][0]["failure"]["reproducer"]["options"]["selftest"]["suite"], "mc");
}
