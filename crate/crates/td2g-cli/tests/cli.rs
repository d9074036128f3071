use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use td2g::intlinalg::{vec_add, IntMat};
use td2g::json::{cocycle_from_json, parse};

fn td2g(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_td2g")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn matrix(rows: &[&[i64]]) -> Value {
    json!({ "rows": rows.len(), "cols": rows[0].len(), "data": rows })
}

fn flip(n: usize) -> Value {
    let d = 2 * n;
    let rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| ((i + n) % d == j) as i64).collect()).collect();
    json!({ "rows": d, "cols": d, "data": rows })
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, v: &Value) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_owned()
    }
}

fn read(path: impl AsRef<Path>) -> Value {
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_of(s: &str) -> PathBuf {
    PathBuf::from(s)
}

#[test]
fn check_classifies() {
    let d = Dir::new();
    let i = d.write("i.json", &flip(1));
    let out = td2g(&["check", &i]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({ "member": true, "iso": 1, "n": 1 }));

    let r = d.write("r.json", &matrix(&[&[0, -1], &[1, 0]]));
    let out = td2g(&["check", &r]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["iso"], json!(-1));

    let j = d.write("j.json", &matrix(&[&[0, 0], &[1, 0]]));
    let out = td2g(&["check", &j]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["member"], json!(false));
}

#[test]
fn section_of_the_flip() {
    let d = Dir::new();
    let i = d.write("i.json", &flip(2));
    let out = td2g(&["section", &i]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let j = json!({ "rows": 4, "cols": 4, "data": [[0,0,0,0],[0,0,0,0],[1,0,0,0],[0,1,0,0]] });
    assert_eq!(v["eta"], j);
}

#[test]
fn kinv_identities_vanish() {
    let d = Dir::new();
    let e = d.write("e.json", &matrix(&[&[1, 0], &[0, 1]]));
    let i = d.write("i.json", &flip(1));
    let r = d.write("r.json", &matrix(&[&[0, -1], &[1, 0]]));
    for (a, b, c) in [(&e, &e, &e), (&i, &i, &i), (&r, &i, &r), (&e, &r, &i)] {
        let out = td2g(&["kinv", "--a", a, "--b", b, "--c", c]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout_json(&out), json!([0, 0]));
    }
}

#[test]
fn mult_of_flips() {
    let d = Dir::new();
    let i = d.write("i.json", &flip(1));
    let out = td2g(&["mult", "--a", &i, "--b", &i]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["H"], matrix(&[&[0, 1], &[1, 0]]));
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--suite", "cocycle", "--n", "2", "--trials", "20", "--seed", "11", "--no-timing"];
    let (a, b) = (td2g(&args), td2g(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["passed"], json!(true));
    let threaded = Command::new(env!("CARGO_BIN_EXE_td2g")).args(args).env("TD2G_THREADS", "1").output().unwrap();
    assert_eq!(threaded.stdout, a.stdout);
}

#[test]
fn verify_reports_the_epsilon_counterexample() {
    let out = td2g(&["verify", "--suite", "tdcorr", "--n", "2", "--trials", "5", "--seed", "3", "--no-timing"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures.iter().all(|f| f["check"] == json!("epsilon Cech cocycle")), "{failures:?}");
}

#[test]
fn verify_jsonl_shape() {
    let out = td2g(&["verify", "--suite", "torsion", "--trials", "4", "--seed", "9", "--jsonl"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = std::str::from_utf8(&out.stdout).unwrap().lines().map(|l| parse(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["suite"], json!("torsion"));
    assert_eq!(lines[1]["passed"], json!(true));
    assert!(lines[1].get("elapsed_ms").is_some());
}

#[test]
fn input_errors_exit_2() {
    let d = Dir::new();
    let bad = d.write("bad.json", &json!({ "rows": 2 }));
    assert_eq!(code(&td2g(&["check", &bad])), 2);
    assert_eq!(code(&td2g(&["check", &d.path("missing.json")])), 2);
    assert_eq!(code(&td2g(&["verify", "--suite", "nope", "--seed", "1"])), 2);
    assert_eq!(code(&td2g(&["verify", "--suite", "torsion"])), 2);
    assert_eq!(code(&td2g(&["verify", "--suite", "torsion", "--n", "0", "--seed", "1"])), 2);
    let j = d.write("j.json", &matrix(&[&[0, 0], &[1, 0]]));
    assert_eq!(code(&td2g(&["kinv", "--a", &j, "--b", &j, "--c", &j])), 2);
    assert_eq!(code(&td2g(&["--help"])), 0);
}

fn random_cocycle(d: &Dir, n: usize, seed: u64) -> String {
    let p = d.path(&format!("c{n}_{seed}.json"));
    let out = td2g(&["random-cocycle", "--n", &n.to_string(), "--seed", &seed.to_string(), "-o", &p]);
    assert_eq!(code(&out), 0);
    p
}

#[test]
fn act_with_the_unit_is_the_identity() {
    let d = Dir::new();
    let c = random_cocycle(&d, 2, 5);
    let e = d.write("e.json", &json!({ "matrix": matrix(&[&[1,0,0,0], &[0,1,0,0], &[0,0,1,0], &[0,0,0,1]]) }));
    let out = d.path("out.json");
    assert_eq!(code(&td2g(&["act", "--auto", &e, "--cocycle", &c, "-o", &out])), 0);
    let mut acted = read(&out);
    let meta = acted.as_object_mut().unwrap().remove("meta").unwrap();
    assert_eq!(meta["command"], json!("act"));
    assert_eq!(meta["iso"], json!(1));
    assert_eq!(meta["auto_sha256"].as_str().unwrap().len(), 64);
    let original = std::fs::read_to_string(&c).unwrap();
    assert_eq!(td2g::json::to_canonical_string(&acted), original);
}

#[test]
fn flipping_twice_restores_the_legs() {
    let d = Dir::new();
    let c = random_cocycle(&d, 1, 8);
    let i = d.write("i.json", &json!({ "matrix": flip(1) }));
    let (once, twice) = (d.path("once.json"), d.path("twice.json"));
    assert_eq!(code(&td2g(&["act", "--auto", &i, "--cocycle", &c, "-o", &once])), 0);
    assert_eq!(code(&td2g(&["act", "--auto", &i, "--cocycle", &once, "-o", &twice])), 0);
    let (c0, c1, c2) = (read(&c), read(&once), read(&twice));
    assert_eq!(c1["a"], c0["ahat"]);
    assert_eq!(c1["ahat"], c0["a"]);
    for leg in ["a", "ahat", "m", "mhat"] {
        assert_eq!(c2[leg], c0[leg], "{leg}");
    }
    assert!(cocycle_from_json(&c2).unwrap().validate().is_ok());
}

#[test]
fn b_shift_moves_the_dual_leg() {
    let d = Dir::new();
    let c = random_cocycle(&d, 2, 13);
    let eb = matrix(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 1, 0], &[-1, 0, 0, 1]]);
    let auto = d.write("eb.json", &json!({ "matrix": eb }));
    let out = d.path("out.json");
    assert_eq!(code(&td2g(&["act", "--auto", &auto, "--cocycle", &c, "-o", &out])), 0);
    let before = cocycle_from_json(&read(&c)).unwrap();
    let after = cocycle_from_json(&read(path_of(&out))).unwrap();
    let b = IntMat::from_i64(&[vec![0, 1], vec![-1, 0]]);
    for (k, a) in &before.a {
        assert_eq!(after.a[k], *a);
        assert_eq!(after.ahat[k], vec_add(&b.mul_ratvec(a), &before.ahat[k]));
    }
}

#[test]
fn act_rejects_bad_inputs() {
    let d = Dir::new();
    let c = random_cocycle(&d, 1, 2);
    let out = d.path("out.json");
    let j = d.write("j.json", &json!({ "matrix": matrix(&[&[0, 0], &[1, 0]]) }));
    assert_eq!(code(&td2g(&["act", "--auto", &j, "--cocycle", &c, "-o", &out])), 2);
    let big = d.write("i2.json", &json!({ "matrix": flip(2) }));
    assert_eq!(code(&td2g(&["act", "--auto", &big, "--cocycle", &c, "-o", &out])), 2);
    let mut broken = read(&c);
    broken["t"]["0"]["0,1,2"] = json!([1, 3]);
    let broken = d.write("broken.json", &broken);
    let i = d.write("i.json", &json!({ "matrix": flip(1) }));
    assert_eq!(code(&td2g(&["act", "--auto", &i, "--cocycle", &broken, "-o", &out])), 2);
    let mut extra = read(&c);
    extra["surprise"] = json!(1);
    let extra = d.write("extra.json", &extra);
    assert_eq!(code(&td2g(&["act", "--auto", &i, "--cocycle", &extra, "-o", &out])), 2);
    assert!(!Path::new(&out).exists());
}
