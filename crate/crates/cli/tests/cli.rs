use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;

fn regge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regge")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!("regge-cli-{}-{}", std::process::id(), N.fetch_add(1, Ordering::SeqCst)));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

/// Two tets glued along a triangle, with the apex segment missing the triangle.
const REFLEX_PAIR: &str = r#"{
  "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.2, 0.2, 1], [1.5, 1.5, -1]],
  "tets": [[0, 1, 2, 3], [0, 2, 1, 4]]
}"#;

#[test]
fn catalog_list_names_every_model() {
    let o = regge(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    for want in ["regular-tetrahedron", "cube-5tet", "cube-6tet", "octahedron-cone", "jessen-icosahedron", "wunderlich-octahedron", "flat-vertex-sphere"] {
        assert!(names.iter().any(|n| n == want), "{want} missing");
    }
}

#[test]
fn analyze_reports_the_signature() {
    let o = regge(&["analyze", "--catalog", "cube-6tet"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let sig = &r["hessian"]["signature"];
    assert_eq!((sig["neg"].as_u64(), sig["zero"].as_u64(), sig["pos"].as_u64()), (Some(0), Some(0), Some(1)));
    assert_eq!(r["exit_code"].as_i64(), Some(0));
    assert_eq!(r["rigidity"]["rigid"].as_bool(), Some(true));
}

#[test]
fn analyze_output_is_byte_identical() {
    let off = stdout(&regge(&["catalog", "dump", "octahedron-cone", "--format", "off"]));
    let file = scratch("oct.off", &off);
    for args in [vec!["analyze", "--catalog", "jessen-icosahedron"], vec!["analyze", path(&file), "--cone-apex", "0"]] {
        let a = regge(&args);
        let b = regge(&args);
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn off_dump_round_trips_through_analyze() {
    let off = stdout(&regge(&["catalog", "dump", "cube-6tet", "--format", "off"]));
    let file = scratch("cube.off", &off);
    let r = json(&regge(&["analyze", path(&file), "--boundary-only"]));
    assert_eq!(r["rigidity"]["kernel_dim"].as_u64(), Some(6));
    let tri = stdout(&regge(&["catalog", "dump", "cube-6tet", "--format", "triangulation"]));
    let file = scratch("cube.json", &tri);
    let a = regge(&["analyze", path(&file)]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
}

#[test]
fn input_errors_exit_with_two() {
    let bad = scratch("bad.json", "{\"vertices\": [[0, 0, 0]],\n \"tets\": [[0, 1");
    let o = regge(&["analyze", path(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(code(&regge(&["analyze", "--catalog", "no-such-model"])), 2);
    assert_eq!(code(&regge(&["catalog", "dump", "oct-theta(3.0)"])), 2);
    let invalid = scratch("invalid.json", r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]], "tets": [[0,1,2,3],[0,1,2,3]]}"#);
    assert_eq!(code(&regge(&["analyze", path(&invalid)])), 2);
}

#[test]
fn reflex_two_three_fails_its_precondition() {
    let t = scratch("pair.json", REFLEX_PAIR);
    let script = scratch("script.json", r#"[{"kind": "2-3", "cell": [0, 1, 2]}]"#);
    let o = regge(&["move", path(&t), "--script", path(&script)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("step 0"), "{}", stderr(&o));
}

#[test]
fn one_four_then_four_one_restores_the_hash() {
    let t = stdout(&regge(&["catalog", "dump", "octahedron-cone", "--format", "triangulation"]));
    let t = scratch("oct.json", &t);
    let script = scratch(
        "script.json",
        r#"[{"kind": "1-4", "cell": [0, 1, 2, 4], "point": [0.1, 0.2, 0.3]}, {"kind": "4-1", "cell": [6]}]"#,
    );
    let out = t.with_file_name("final.json");
    let o = regge(&["move", path(&t), "--script", path(&script), "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["initial_hash"], r["final_hash"]);
    assert_eq!(r["steps"].as_array().unwrap().len(), 2);
    assert_eq!(r["steps"][0]["delta"]["definiteness"], "nsd");
    assert_eq!(r["consistent"].as_bool(), Some(true));
    assert!(out.exists());
}

#[test]
fn octsweep_csv() {
    let o = regge(&["octsweep", "--steps", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    let expect = 3.0 * 3f64.sqrt() / 4.0;
    for r in &rows {
        assert!((r[1] - expect).abs() < 1e-12 && (r[3] - expect).abs() < 1e-12);
    }
    assert!(rows[0][4] > 0.0 && rows[1][4] < 0.0);
    assert!(text.contains("changes sign"));
    assert_eq!(code(&regge(&["octsweep", "--theta-max", "2.1"])), 2);
}

#[test]
fn flex_dimensions() {
    let nontrivial = |name: &str| json(&regge(&["flex", "--catalog", name]))["nontrivial_dim"].as_u64().unwrap();
    assert_eq!(nontrivial("octahedron-cone"), 0);
    assert!(nontrivial("wunderlich-octahedron") >= 1);
    assert!(nontrivial("jessen-icosahedron") >= 1);

    let r = json(&regge(&["flex", "--catalog", "flat-vertex-sphere"]));
    let flat: Vec<usize> = r["flat_vertices"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect();
    assert_eq!(r["nontrivial_dim"].as_u64(), Some(flat.len() as u64));
    // The nontrivial flex moves the flat vertex far more than any other.
    let q = &r["nontrivial_basis"][0];
    let norms: Vec<f64> = q
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_array().unwrap().iter().map(|c| c.as_f64().unwrap().powi(2)).sum::<f64>().sqrt())
        .collect();
    let others = norms.iter().enumerate().filter(|(i, _)| !flat.contains(i)).map(|(_, n)| *n).fold(0.0, f64::max);
    assert!(flat.iter().all(|&v| norms[v] > 5.0 * others), "{norms:?}");

    let csv = stdout(&regge(&["flex", "--catalog", "cube-6tet", "--csv"]));
    assert!(csv.starts_with("index,singular_value\n"));
    assert_eq!(csv.lines().count(), 1 + 24);
}
