use std::path::PathBuf;
use std::process::{Command, Output};

use crjet::cli::{catalog, check_entry};
use crjet::invariants::MapJet;
use crjet::manifold::{parse_model, ManifoldModel};
use crjet::reflection::JetFile;
use crjet::series::{Coeff, GaussRational, Monomial, TruncSeries, EXACT};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crjet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crjet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_jet(name: &str, source: &ManifoldModel, jet: &MapJet, order: u32) -> String {
    let path = scratch(name);
    let f = JetFile::from_jet("quadric", "target", jet, source.big_n(), order);
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn quadric() -> ManifoldModel {
    parse_model("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }", 12).unwrap()
}

fn linear(m: &ManifoldModel, a: GaussRational, b: GaussRational) -> MapJet {
    let t = |e: &[u32], c: GaussRational| TruncSeries::monomial(&m.vars, EXACT, Monomial::from_exps(e), c);
    MapJet { f: vec![t(&[1, 0], a), t(&[0, 1], b)] }
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn every_catalog_annotation_holds() {
    for e in catalog() {
        let checks = check_entry(e, 6, 7).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        for c in checks {
            assert!(c.ok, "{}: {:?} but found {}", e.name, c.annotation, c.found);
        }
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["ok"], true);
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["analyze", "segre"] {
        for model in ["quadric", "codim2", "quartic"] {
            let a = run(&[cmd, "--model", model]);
            let b = run(&[cmd, "--model", model]);
            assert!(a.status.success());
            assert_eq!(a.stdout, b.stdout, "{cmd} {model}");
        }
    }
}

#[test]
fn analyze_quadric_report() {
    let v = json(&run(&["analyze", "--model", "quadric"]));
    assert_eq!(v["schema"], crjet::cli::SCHEMA_VERSION);
    assert_eq!(v["nu"], 2);
    assert_eq!(v["mu"], serde_json::json!([2]));
    assert_eq!(v["l"], 1);
    assert_eq!((v["r"].as_u64(), v["k"].as_u64(), v["m_bound"].as_u64()), (Some(4), Some(19), Some(2)));
}

#[test]
fn quartic_is_not_finitely_nondegenerate() {
    let v = json(&run(&["analyze", "--model", "quartic", "--kappa", "10"]));
    assert_eq!(v["nu"], 4);
    assert_eq!(v["l"], serde_json::Value::Null);
    assert_eq!(v["l_verdict"], "none ≤ 6 (stabilized: absolute)");
}

#[test]
fn segre_verdicts() {
    let q = json(&run(&["segre", "--model", "quadric", "--s", "2"]));
    assert_eq!(q["rank_table"][3]["rank"], 2);
    assert_eq!(q["delta"]["m"], 2);
    assert_eq!(q["verdict"], "PASS");
    let c = json(&run(&["segre", "--model", "codim2"]));
    assert_eq!(c["delta"]["m"], 6);
    assert_eq!(c["verdict"], "PASS");
    let h = json(&run(&["segre", "--model", "hyperplane"]));
    assert_eq!(h["verdict"], "infinite type suspected");
    assert!(h["rank_table"].as_array().unwrap().iter().all(|r| r["rank"] == 1));
}

#[test]
fn text_format() {
    let out = run(&["analyze", "--model", "quadric", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "nu: 2"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--model", "no-such-model"]).status.code(), Some(1));
    let bad = scratch("bad.model");
    std::fs::write(&bad, "model \"x\" { ambient 2; codim 1; rho 1: z + chi + i*z; }").unwrap();
    assert_eq!(run(&["analyze", "--model", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--model", "quadric", "--kappa", "3"]).status.code(), Some(3));
}

#[test]
fn parametrize_and_reconstruct_a_dilation() {
    let m = quadric();
    let jet = write_jet("dilation.json", &m, &linear(&m, GaussRational::rational(3, 2), GaussRational::rational(9, 4)), 4);
    let art = scratch("dilation-artifact.json");
    let out = run(&["parametrize", "--model", "quadric", "--jet", &jet, "--k", "19", "--out", art.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    assert!(v["guaranteed_order"].as_u64().unwrap() >= 5);
    assert_eq!(v["complete_system"]["k_needed"], 19);

    let out = run(&["reconstruct", "--system", art.to_str().unwrap(), "--jet", &jet, "--grid", "1/10,1/10", "--step", "1/100"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let samples: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(samples.len(), 27);
    for s in &samples {
        let x: Vec<f64> = s["x"].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).collect();
        let z = (x[0], x[1]);
        let w = (x[2], x[0] * x[0] + x[1] * x[1]);
        let val = |k: usize, j: usize| s["value"][k][j].as_f64().unwrap();
        assert!((val(0, 0) - 1.5 * z.0).abs() < 1e-6 && (val(0, 1) - 1.5 * z.1).abs() < 1e-6);
        assert!((val(1, 0) - 2.25 * w.0).abs() < 1e-6 && (val(1, 1) - 2.25 * w.1).abs() < 1e-6);
        assert!(s["jet_residuals"].as_f64().unwrap() < 1e-9);
    }

    let out = run(&["reconstruct", "--system", art.to_str().unwrap(), "--jet", &jet, "--grid", "1/2,1/2", "--step", "1/10"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn degenerate_jet_is_attributed() {
    let m = quadric();
    let jet = write_jet("flat.json", &m, &linear(&m, GaussRational::zero(), GaussRational::real(1)), 4);
    let out = run(&["parametrize", "--model", "quadric", "--jet", &jet, "--k", "19"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nondegeneracy"), "{err}");
}

/// The Whitney map of spheres in Heisenberg coordinates.
fn whitney(m: &ManifoldModel, order: u32) -> MapJet {
    let c = |x: GaussRational| TruncSeries::constant(&m.vars, order, x);
    let i = c(GaussRational::from_parts(0, 1, 1, 1));
    let one = c(GaussRational::real(1));
    let z = TruncSeries::var(&m.vars, order, 0);
    let w = TruncSeries::var(&m.vars, order, 1);
    let mul = |a: &TruncSeries, b: &TruncSeries| a.try_mul(b).unwrap();
    let den = i.try_add(&w).unwrap().recip().unwrap();
    let z1 = mul(&z.scale(&GaussRational::real(2)), &den);
    let z2 = mul(&i.try_sub(&w).unwrap(), &den);
    let inv = one.try_add(&z2).unwrap().recip().unwrap();
    let f = vec![
        mul(&mul(&i, &mul(&z1, &z1)), &inv),
        mul(&mul(&mul(&i, &z1), &z2), &inv),
        mul(&mul(&i, &one.try_sub(&z2).unwrap()), &inv),
    ];
    MapJet { f: f.into_iter().map(|s| s.with_order(EXACT)).collect() }
}

#[test]
fn sphere_embedding_artifact() {
    let m = quadric();
    let jet = write_jet("whitney.json", &m, &whitney(&m, 8), 8);
    let out = run(&["parametrize", "--model", "quadric", "--model", "sphere5", "--jet", &jet, "--k", "12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["l"], 2);
    assert_eq!(v["setup"]["r"], 8);
    assert!(v["psi"].as_array().unwrap().len() > 0);
}
