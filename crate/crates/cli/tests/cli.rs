use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hardy_core::fixtures::{g_flagship, g_one_plus_z, z};
use hardy_core::symbol::MatrixSymbol;
use serde_json::Value;
use tempfile::TempDir;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).output().expect("binary runs")
}

fn put(dir: &Path, name: &str, s: &MatrixSymbol) -> String {
    let path: PathBuf = dir.join(name);
    fs::write(&path, s.to_json()).unwrap();
    path.display().to_string()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn flagship_is_a_kernel_and_one_plus_z_is_not() {
    let dir = TempDir::new().unwrap();
    let u = put(dir.path(), "u.json", &z());
    let g = put(dir.path(), "g.json", &g_flagship(64));
    let out = hardy(&["classify", &g, &u]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["final"], "is-kernel");

    let g = put(dir.path(), "opz.json", &g_one_plus_z());
    let out = hardy(&["classify", &g, &u]);
    // A negative verdict is still a successful run.
    assert_eq!(out.status.code(), Some(0));
    let rep = stdout_json(&out);
    assert_eq!(rep["final"], "not-kernel");
    assert!((rep["special"]["mass_gap"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let u = put(dir.path(), "u.json", &z());
    let g = put(dir.path(), "g.json", &g_flagship(64));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = hardy(&["classify", &g, &u, "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(a.join("phi.json")).unwrap(), fs::read(b.join("phi.json")).unwrap());
    let strip = |d: &Path| {
        let mut v: Value = serde_json::from_slice(&fs::read(d.join("report.json")).unwrap()).unwrap();
        v["symbol_ref"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn rank_deficient_u_and_bad_files_exit_2() {
    let dir = TempDir::new().unwrap();
    let g = put(dir.path(), "g.json", &MatrixSymbol::identity(2));
    let u = put(dir.path(), "u.json", &MatrixSymbol::block_diag(&[z(), MatrixSymbol::zeros(1, 1)]));
    assert_eq!(hardy(&["classify", &g, &u]).status.code(), Some(2));

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"rows\": 1}").unwrap();
    assert_eq!(hardy(&["classify", junk.to_str().unwrap(), &u]).status.code(), Some(2));
    assert_eq!(hardy(&["classify", "/nonexistent/g.json", &u]).status.code(), Some(2));
}

#[test]
fn unknown_identity_exits_2() {
    assert_eq!(hardy(&["verify", "lemma99"]).status.code(), Some(2));
    assert_eq!(hardy(&["verify", "thm34", "--fixtures", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_emits_the_csv_contract() {
    let out = hardy(&["verify", "pair-identity"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("fixture,N,residual,tolerance,pass"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    let z2: Vec<_> = rows.iter().filter(|r| r[0] == "z2-half").collect();
    assert_eq!(z2.len(), 3);
    for r in z2 {
        assert!(r[2].parse::<f64>().unwrap() <= 1e-10);
        assert_eq!(r[4], "true");
    }
}

#[test]
fn operator_identity_residuals_shrink_with_n() {
    let out = hardy(&["verify", "thm34", "--fixtures", "flagship"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let res: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(res.len(), 3);
    assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
}

#[test]
fn verify_writes_to_a_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sub/cor53.csv");
    let out = hardy(&["verify", "cor53", "--ladder", "32,64", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(path).unwrap().lines().count(), 7);
}

#[test]
fn trivial_recipe_gives_conj_z() {
    let dir = TempDir::new().unwrap();
    let g0 = put(dir.path(), "g0.json", &MatrixSymbol::identity(1));
    let u = put(dir.path(), "u.json", &z());
    let out_dir = dir.path().join("out");
    let out = hardy(&["construct", &g0, &u, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for f in ["G.json", "F.json", "phi.json", "report.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let phi = MatrixSymbol::from_json(&fs::read_to_string(out_dir.join("phi.json")).unwrap()).unwrap();
    assert!(phi.max_coeff_diff(&z().adjoint_flip()) < 1e-12);
    let rep = stdout_json(&out);
    assert_eq!(rep["f_dim"], 1);
    assert!(rep["cross_check"].as_array().unwrap().iter().all(|c| c["angle"].as_f64().unwrap() < 1e-10));
}

#[test]
fn examples_run_in_both_formats() {
    let out = hardy(&["examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().any(|l| l.starts_with("flagship") && l.contains("IsKernel")));

    let rep = stdout_json(&hardy(&["examples", "--json"]));
    assert_eq!(rep["flagship"]["final"], "is-kernel");
    assert_eq!(rep["diagonal-negative"]["final"], "not-kernel");
    assert!((rep["counterexample"]["p_minus_mass"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn bad_ladder_is_an_input_error() {
    assert_eq!(hardy(&["examples", "--ladder", "32,16"]).status.code(), Some(2));
}
