use std::path::Path;
use std::process::{Command, Output};

use nearderiv::exactmath::{int, SparsePoly};
use nearderiv::format::{parse_algebra, print_seeds};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nearderiv"));
    cmd.env_remove("NEARDERIV_SEED");
    cmd
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    for args in [
        &["example", "sl", "2"][..],
        &["example", "grading", "sl", "2", "--weights", "1,0,1", "--modulus", "2"],
        &["example", "identity", "sl", "2"],
        &["example", "inner", "sl", "2", "--element", "0,1,0"],
        &["example", "nilpotent-square", "sl", "2", "--partition", "2"],
        &["example", "nilpotent-square", "sl", "3", "--partition", "2,1"],
        &["example", "splitting", "sl", "2", "--h", "0,1", "--r", "2"],
    ] {
        let out = run(p, args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    dir
}

#[test]
fn classification_table() {
    let dir = setup();
    let p = dir.path();
    let out = run(p, &["classify", "sl2.json", "sl2-grading.json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["tag"], "near");
    assert_eq!(v["a"], "0");
    assert_eq!(v["b"], "-2");
    assert_eq!(v["mode"], "semisimple");
    assert_eq!(v["degenerate_lines"].as_array().unwrap().len(), 2);
    assert!(v["jacobi_checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["jacobi"] == true));

    assert_eq!(
        json(&run(p, &["classify", "sl2.json", "sl2-ad.json"]))["tag"],
        "derivation"
    );
    let scalar = json(&run(p, &["classify", "sl2.json", "sl2-identity.json"]));
    assert_eq!(scalar["tag"], "scalar-type");
    assert_eq!(scalar["scalar"], "-1");

    let v = json(&run(p, &["classify", "sl3.json", "sl3-nilsquare-2-1.json"]));
    assert_eq!(
        (v["tag"].as_str(), v["a"].as_str(), v["b"].as_str()),
        (Some("quasi"), Some("0"), Some("0"))
    );
    assert_eq!(v["mode"], "nilpotent");

    let v = json(&run(p, &["classify", "sl2.json", "sl2-split-h.json"]));
    assert_eq!((v["a"].as_str(), v["b"].as_str()), (Some("0"), Some("-1")));
}

#[test]
fn text_output() {
    let dir = setup();
    let out = run(dir.path(), &["--text", "classify", "sl2.json", "sl2-grading.json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tag: near\n"), "{text}");
    assert!(text.contains("mode: semisimple\n"));
}

#[test]
fn example_outputs() {
    let dir = setup();
    let p = dir.path();
    for f in [
        "sl3.json",
        "sl3-nilsquare-2-1.json",
        "sl3-nilsquare-2-1-diagnostics.json",
        "sl2-split-h.json",
        "sl2-split-r.json",
    ] {
        assert!(p.join(f).exists(), "{f}");
    }
    let (file, t) = parse_algebra(&std::fs::read_to_string(p.join("sl2.json")).unwrap()).unwrap();
    assert_eq!(t.dim(), 3);
    assert_eq!(file.metadata.unwrap().family.as_deref(), Some("sl"));
    let out = run(p, &["example", "nilpotent-square", "sl", "3", "--partition", "3"]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&run(p, &["example", "sl"])), 2);
}

#[test]
fn pencil_and_derive() {
    let dir = setup();
    let p = dir.path();
    let v = json(&run(p, &["pencil", "sl2.json", "sl2-grading.json"]));
    assert_eq!(v["eigenvalues"], serde_json::json!(["0", "-2"]));
    let out = run(p, &["pencil", "sl2.json", "sl2-ad.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a near-derivation"));

    let out = run(p, &["derive", "sl2.json", "sl2-nilsquare-2.json", "-o", "gd.json"]);
    assert_eq!(code(&out), 0);
    let (_, gd) = parse_algebra(&std::fs::read_to_string(p.join("gd.json")).unwrap()).unwrap();
    // [h, f]' = 8e
    assert_eq!(gd.product(1, 2), vec![int(8), int(0), int(0)]);
    assert!(gd.product(0, 1).iter().all(|c| *c == int(0)));
}

#[test]
fn index_modes_and_seed() {
    let dir = setup();
    let p = dir.path();
    let v = json(&run(p, &["index", "sl3.json", "--mode", "exact"]));
    assert_eq!(v["index"], 2);
    assert_eq!(v["method"], "exact-symbolic");
    let out = bin()
        .current_dir(p)
        .env("NEARDERIV_SEED", "3")
        .args(["index", "sl3.json"])
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["index"], 2);
    assert!(v["note"].as_str().unwrap().contains("seed 3"));
    let v = json(&run(
        p,
        &[
            "index",
            "sl3.json",
            "--operator",
            "sl3-nilsquare-2-1.json",
            "--mode",
            "exact",
        ],
    ));
    assert_eq!(
        (
            v["index"].as_u64(),
            v["centre_dim"].as_u64(),
            v["nilpotency_class"].as_u64()
        ),
        (Some(4), Some(4), Some(2))
    );
    let out = run(p, &["index", "sl3.json", "--mode", "exact", "--max-dim", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn torsion_and_nijenhuis() {
    let dir = setup();
    let p = dir.path();
    let v = json(&run(p, &["torsion", "sl2.json", "sl2-grading.json"]));
    assert_eq!(v["decomposition"]["holds"], true);
    assert_eq!(v["vanishes"], false);

    let out = run(p, &["nijenhuis-check", "sl2.json", "sl2-grading.json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["verdict"]["is_nijenhuis"], false);
    assert!(v["verdict"]["eigenspace_witness"].is_object());

    let out = run(p, &["nijenhuis-check", "sl2.json", "sl2-split-h.json", "--depth", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["properties"]["powers"].as_array().unwrap().len(), 2);
}

#[test]
fn exponential_identities() {
    let dir = setup();
    let p = dir.path();
    let v = json(&run(
        p,
        &["exp-check", "sl2.json", "sl2-grading.json", "--points", "2,3,5,7"],
    ));
    assert_eq!(v["identity"], "near");
    assert_eq!(v["certificate"]["holds"], true);
    assert_eq!(v["certified"], true);
    let out = run(
        p,
        &["exp-check", "sl3.json", "sl3-nilsquare-2-1.json", "--points", "1,2,3"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["certificate"]["holds"], true);
    let out = run(p, &["exp-check", "sl2.json", "sl2-grading.json", "--points", "1/0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn poisson_commutative_families() {
    let dir = setup();
    let p = dir.path();
    let v = json(&run(p, &["pc-check", "sl2.json", "sl2-grading.json"]));
    let gens: Vec<&str> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["poly"].as_str().unwrap())
        .collect();
    assert_eq!(gens, ["e*f + 1/4*h^2", "2*e*f"]);
    assert_eq!(v["certificate"]["commutes"], true);

    let out = run(p, &["pc-check", "sl2.json", "--direction", "0,0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["generators"][1]["poly"], "e");

    let h = SparsePoly::var(3, 1);
    std::fs::write(p.join("bad-seeds.json"), print_seeds(3, &[h])).unwrap();
    let out = run(
        p,
        &[
            "pc-check",
            "sl2.json",
            "sl2-grading.json",
            "--seed-file",
            "bad-seeds.json",
        ],
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not central"));
    assert_eq!(code(&run(p, &["pc-check", "sl2.json"])), 2);
}

#[test]
fn full_reports() {
    let dir = setup();
    let p = dir.path();
    let out = run(p, &["report", "sl2.json", "sl2-nilsquare-2.json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["classification"]["tag"], "quasi");
    assert_eq!(v["derived_algebra"]["index_equals_centre"], true);
    assert_eq!(v["derived_algebra"]["two_step_nilpotent"], true);

    let out = run(p, &["report", "sl2.json", "sl2-grading.json", "--mode", "exact"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["classification"]["tag"], "near");
    assert_eq!(v["classification"]["degenerate_lines"].as_array().unwrap().len(), 2);
    assert_eq!(v["pc_family"]["certificate"]["commutes"], true);
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
}

#[test]
fn malformed_input() {
    let dir = setup();
    let p = dir.path();
    std::fs::write(
        p.join("bad.json"),
        "{\n  \"dim\": 2,\n  \"brackets\": [\n    {\"i\": 0, \"j\": 5, \"coeffs\": {}}\n  ]\n}\n",
    )
    .unwrap();
    let out = run(p, &["report", "bad.json", "sl2-ad.json"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json"), "{err}");
    std::fs::write(p.join("trunc.json"), "{\n  \"dim\": 2,\n").unwrap();
    let err = String::from_utf8_lossy(&run(p, &["classify", "trunc.json", "sl2-ad.json"]).stderr).into_owned();
    assert!(err.contains("line"), "{err}");
    assert_eq!(code(&run(p, &["classify", "missing.json", "sl2-ad.json"])), 2);
    assert_eq!(code(&run(p, &["classify", "sl3.json", "sl2-ad.json"])), 2);
}
