//! End-to-end behaviour of the `fanic` binary: outputs and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use fanic::io::{read_fan, FanDocument};
use fanic::{corpus, Fan, Subdivision};
use tempfile::TempDir;

fn fanic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

struct Files(TempDir);

impl Files {
    fn new() -> Files {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn fan(&self, fan: &Fan) -> String {
        let name = format!("{}.json", fan.name.clone().unwrap_or_else(|| "fan".into()));
        self.write(&name, &FanDocument::from_fan(fan).to_json())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

#[test]
fn info_summarises_a_fan() {
    let f = Files::new();
    let o = fanic(&["info", &f.fan(&corpus::p2())]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "rank 2, f = (1,3,3), complete, simplicial");
    let empty = f.write("empty.json", r#"{"rank":1,"rays":[],"cones":[]}"#);
    assert!(stdout(&fanic(&["info", &empty])).contains("f = (1), not complete"));
    let o = fanic(&["info", &f.fan(&corpus::cube_boundary())]);
    assert_eq!(stdout(&o).trim(), "rank 4, f = (1,8,12,6), not complete, not simplicial");
}

#[test]
fn exit_codes_classify_errors() {
    let f = Files::new();
    let bad = f.write("bad.json", "{\"rank\": 2,\n \"rays\": [[1, 0],\n");
    let o = fanic(&["info", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let overlapping = f.write("overlap.json", r#"{"rank":2,"rays":[[1,0],[0,1],[1,1]],"cones":[[0,1],[0,2]]}"#);
    assert_eq!(code(&fanic(&["info", &overlapping])), 3);
    assert_eq!(code(&fanic(&["info", f.path("missing.json").to_str().unwrap()])), 4);
    assert_eq!(code(&fanic(&["frobnicate"])), 2);
    let version = f.write("v9.json", r#"{"format":"fanic/9","rank":1,"rays":[],"cones":[]}"#);
    assert_eq!(code(&fanic(&["info", &version])), 2);
}

#[test]
fn betti_tables_in_both_formats() {
    let f = Files::new();
    let p1 = f.fan(&corpus::p1());
    let o = fanic(&["betti", &p1, "--perversity", "middle"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0\t-1\t1\n1\t0\t1\n");
    let zero = f.write("zero.json", r#"{"rank":0,"rays":[],"cones":[]}"#);
    for p in ["bottom", "middle", "top"] {
        assert_eq!(stdout(&fanic(&["betti", &zero, "--perversity", p])), "0\t0\t1\n");
    }
    let p2 = f.fan(&corpus::p2());
    assert_eq!(stdout(&fanic(&["betti", &p2, "--perversity", "top"])), "0\t-2\t1\n1\t-1\t1\n2\t0\t1\n");
    let o = fanic(&["betti", &p2, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["format"], "fanic/1");
}

#[test]
fn perversity_documents_and_domain_errors() {
    let f = Files::new();
    let p2 = f.fan(&corpus::p2());
    let by_dim = f.write("top.json", r#"{"format":"fanic/1","by_dim":{"1":0,"2":1}}"#);
    let named = stdout(&fanic(&["betti", &p2, "--perversity", "top"]));
    assert_eq!(stdout(&fanic(&["betti", &p2, "--perversity", &by_dim])), named);
    let short = f.write("short.json", r#"{"by_dim":{"1":0}}"#);
    assert_eq!(code(&fanic(&["betti", &p2, "--perversity", &short])), 3);
    let bad_cone = f.write("cone.json", r#"{"by_cone":[{"rays":[0,2,1],"value":0}]}"#);
    assert_eq!(code(&fanic(&["betti", &p2, "--perversity", &bad_cone])), 3);
}

#[test]
fn checks_report_json_lines_and_exit_status() {
    let f = Files::new();
    let p2 = f.fan(&corpus::p2());
    let o = fanic(&["check", &p2, "thm4.1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "pass");
    let sq = f.fan(&corpus::square_boundary());
    assert!(stdout(&fanic(&["check", &sq, "thm4.3"])).contains(r#""status":"pass""#));
    assert_eq!(code(&fanic(&["check", &p2, "nosuch"])), 2);
    assert_eq!(code(&fanic(&["check", &p2, "thm3.5", "--ray", "7"])), 3);

    // hypothesis_not_met does not count as a failure
    let o = fanic(&["check", &p2, "--all"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), fanic::harness::names().len());
    assert!(out.contains("hypothesis_not_met"));

    // the decomposition map cannot be built over the non-simplicial square cone
    let cone = f.fan(&corpus::square_cone_fan());
    let o = fanic(&["check", &cone, "thm2.8"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains(r#""status":"fail""#));
}

fn subdivide(f: &Files, fan: &Fan, out: &str) -> Fan {
    let input = f.fan(fan);
    let out = f.path(out);
    let o = fanic(&["subdivide", &input, "--barycentric", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    read_fan(&fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn subdivisions_round_trip() {
    let f = Files::new();
    let p1 = subdivide(&f, &corpus::p1(), "p1s.json");
    assert_eq!(p1.rays, corpus::p1().rays);
    assert_eq!(p1.maximal_ray_sets(), corpus::p1().maximal_ray_sets());

    let single = Fan::new(2, vec![vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap();
    let s = subdivide(&f, &single, "single.json");
    assert_eq!(s.maximal().len(), 2);
    assert!(f.path("single.map.json").exists());

    let cube = corpus::cube_faces();
    let s = subdivide(&f, &cube, "cube.json");
    assert_eq!(s.maximal().len(), 48);
    assert!(s.is_complete() && s.is_simplicial());
    // the output re-ingests with the same support
    Subdivision::from_containment(Arc::new(s), Arc::new(cube)).unwrap();

    let map: serde_json::Value = serde_json::from_str(&fs::read_to_string(f.path("cube.map.json")).unwrap()).unwrap();
    assert_eq!(map["format"], "fanic/1");
    assert_eq!(map["pairs"].as_array().unwrap().len(), 1 + 26 + 72 + 48);
}

#[test]
fn subdivide_reports_io_errors() {
    let f = Files::new();
    let input = f.fan(&corpus::p2());
    let out = Path::new("/nonexistent-dir/out.json");
    assert_eq!(code(&fanic(&["subdivide", &input, "--barycentric", "-o", out.to_str().unwrap()])), 4);
}

#[test]
fn grading_slices_of_boundary_fans() {
    let f = Files::new();
    // F(π)∖{π} for π = ⟨e1, e2⟩
    let quadrant = f.write("q.json", r#"{"rank":2,"rays":[[1,0],[0,1]],"cones":[[0],[1]]}"#);
    assert_eq!(stdout(&fanic(&["gslice", &quadrant, "--ell", "0"])), "0\t-2\t1\n");
    for ell in ["-1", "3"] {
        let o = fanic(&["gslice", &quadrant, "--ell", ell]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), "");
    }
    // cone over the square: H^i vanishes at ℓ = i for r/2 < i
    let sq = f.fan(&corpus::square_boundary());
    for i in [2, 3] {
        let out = stdout(&fanic(&["gslice", &sq, "--ell", &i.to_string()]));
        assert!(out.lines().all(|l| !l.starts_with(&format!("{i}\t"))), "ℓ = {i}: {out}");
    }
    assert_eq!(code(&fanic(&["gslice", &f.fan(&corpus::p2()), "--ell", "0"])), 3);
}

#[test]
fn corpus_commands() {
    let o = fanic(&["corpus", "list"]);
    let names: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(names, corpus::names());
    let shown = read_fan(&stdout(&fanic(&["corpus", "show", "p2"]))).unwrap();
    assert_eq!(shown.maximal_ray_sets(), corpus::p2().maximal_ray_sets());
    assert_eq!(code(&fanic(&["corpus", "show", "nosuch"])), 2);
    let o = fanic(&["checks"]);
    assert_eq!(stdout(&o).lines().count(), fanic::harness::names().len());
}
