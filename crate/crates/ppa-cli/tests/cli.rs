use std::path::{Path, PathBuf};
use std::process::Command;

use ppa_reductions::instances::{NVHDTInstance, NecklaceInstance, NecklaceSplit};
use ppa_reductions::measure::{Block, CHInstance, LabelledCutSet, StepMeasure};
use ppa_reductions::oracles::verify_necklace;
use ppa_reductions::rational::{int, q};
use serde_json::Value;

fn ppa(args: &[&str]) -> (i32, Value, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ppa")).args(args).output().expect("spawn ppa");
    let report = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap_or(-1), report, out.stdout)
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(p: &Path, v: &impl serde::Serialize) {
    std::fs::write(p, serde_json::to_string(v).unwrap()).unwrap();
}

#[test]
fn necklace_roundtrip_reports_pass() {
    let dir = tempfile::tempdir().unwrap();
    let neck = path(dir.path(), "neck.json");
    let (code, _, _) = ppa(&["--seed", "5", "gen", "necklace", "--beads", "10", "--out", s(&neck)]);
    assert_eq!(code, 0);
    let (code, rep, _) = ppa(&["roundtrip", "ns-dhs", "--in", s(&neck)]);
    assert_eq!(code, 0);
    assert_eq!(rep["roundtrip"], "pass");
}

#[test]
fn staged_sandwich_pipeline_yields_valid_split() {
    let dir = tempfile::tempdir().unwrap();
    let neck = path(dir.path(), "neck.json");
    write(&neck, &NecklaceInstance::new(vec![1, 2, 2, 1, 1, 2, 1, 2], 2, 2).unwrap());
    let dhs = path(dir.path(), "dhs.json");
    let emb = path(dir.path(), "emb.json");
    let sol = path(dir.path(), "sol.json");
    let split = path(dir.path(), "split.json");
    assert_eq!(ppa(&["reduce", "ns-to-dhs", "--in", s(&neck), "--out", s(&dhs), "--embedding", s(&emb)]).0, 0);
    assert_eq!(ppa(&["solve", "sandwich", "--inst", s(&dhs), "--out", s(&sol)]).0, 0);
    assert_eq!(ppa(&["verify", "sandwich", "--inst", s(&dhs), "--solution", s(&sol)]).0, 0);
    assert_eq!(ppa(&["reduce", "dhs-to-ns", "--in", s(&sol), "--embedding", s(&emb), "--out", s(&split)]).0, 0);
    let got: NecklaceSplit = serde_json::from_str(&std::fs::read_to_string(&split).unwrap()).unwrap();
    let inst: NecklaceInstance = serde_json::from_str(&std::fs::read_to_string(&neck).unwrap()).unwrap();
    assert!(verify_necklace(&inst, &got).unwrap());
    assert!(got.cut_positions.len() <= 2);
}

#[test]
fn generators_are_deterministic_per_seed() {
    let a = ppa(&["--seed", "9", "gen", "tucker2d", "--m", "5"]).2;
    let b = ppa(&["--seed", "9", "gen", "tucker2d", "--m", "5"]).2;
    let c = ppa(&["--seed", "10", "gen", "tucker2d", "--m", "5"]).2;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn verify_ch_reports_discrepancy_and_exit() {
    let dir = tempfile::tempdir().unwrap();
    let agent = StepMeasure::from_blocks(int(2), vec![Block::with_mass(int(0), int(1), &int(1))]).unwrap();
    let inst = CHInstance::new(int(2), vec![agent], q(0, 1), 0).unwrap();
    let ch = path(dir.path(), "ch.json");
    write(&ch, &inst);
    let good = path(dir.path(), "good.json");
    write(&good, &LabelledCutSet::new(vec![q(1, 2)]));
    let (code, rep, _) = ppa(&["verify", "ch", "--inst", s(&ch), "--cuts", s(&good)]);
    assert_eq!(code, 0);
    assert_eq!(rep["is_epsilon_solution"], true);
    // A+ on [0, 1/4] carries 1/4, A- carries 3/4
    let bad = path(dir.path(), "bad.json");
    write(&bad, &LabelledCutSet::new(vec![q(1, 4)]));
    let (code, rep, _) = ppa(&["verify", "ch", "--inst", s(&ch), "--cuts", s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(rep["per_agent"][0], "-1/2");
    assert_eq!(rep["max_abs"], "1/2");
}

#[test]
fn exit_codes_for_malformed_and_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let junk = path(dir.path(), "junk.json");
    std::fs::write(&junk, "{not json").unwrap();
    let (code, rep, _) = ppa(&["solve", "tucker2d", "--inst", s(&junk)]);
    assert_eq!(code, 2);
    assert!(rep["error"].is_string());
    let missing = path(dir.path(), "nope.json");
    assert_eq!(ppa(&["solve", "tucker2d", "--inst", s(&missing)]).0, 3);
    // odd colour count cannot be split between two thieves
    let odd = path(dir.path(), "odd.json");
    std::fs::write(&odd, r#"{"beads":[1,1,2],"thieves":2,"colours":2}"#).unwrap();
    assert_eq!(ppa(&["roundtrip", "ns-dhs", "--in", s(&odd)]).0, 2);
}

#[test]
fn tucker_solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.json");
    assert_eq!(ppa(&["--seed", "2", "gen", "tucker2d", "--m", "6", "--out", s(&g)]).0, 0);
    let (code, rep, _) = ppa(&["solve", "tucker2d", "--inst", s(&g)]);
    assert_eq!(code, 0);
    let coord = |v: &Value| format!("{},{}", v[0], v[1]);
    let (p, qq) = (coord(&rep["p"]), coord(&rep["q"]));
    assert_eq!(ppa(&["verify", "tucker2d", "--inst", s(&g), "--p", &p, "--q", &qq]).0, 0);
    // a point is never complementary to itself
    assert_eq!(ppa(&["verify", "tucker2d", "--inst", s(&g), "--p", &p, "--q", &p]).0, 1);
}

#[test]
fn four_thief_necklace_solves_within_bound() {
    let dir = tempfile::tempdir().unwrap();
    let neck = path(dir.path(), "neck.json");
    let split = path(dir.path(), "split.json");
    assert_eq!(ppa(&["--seed", "4", "gen", "necklace", "--beads", "16", "--thieves", "4", "--out", s(&neck)]).0, 0);
    let (code, rep, _) = ppa(&["solve", "necklace", "--inst", s(&neck), "--out", s(&split)]);
    assert_eq!(code, 0);
    assert!(rep["cuts"].as_u64().unwrap() <= 3 * 2);
    assert_eq!(ppa(&["verify", "necklace", "--inst", s(&neck), "--solution", s(&split)]).0, 0);
}

#[test]
fn snake_reduction_writes_valid_cubelet_instance() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.json");
    let nv = path(dir.path(), "nv.json");
    ppa(&["--seed", "1", "gen", "tucker2d", "--m", "5", "--out", s(&g)]);
    let (code, rep, _) = ppa(&["reduce", "tucker2d-to-nvhdt", "--in", s(&g), "--out", s(&nv)]);
    assert_eq!(code, 0);
    assert!(rep["folds"].as_u64().unwrap() > 0);
    let inst: NVHDTInstance = serde_json::from_str(&std::fs::read_to_string(&nv).unwrap()).unwrap();
    inst.validate().unwrap();
    assert_eq!(ppa(&["--seed", "1", "roundtrip", "snake", "--m", "5"]).1["roundtrip"], "pass");
}

#[test]
fn params_check_accepts_presets_and_rejects_bad_order() {
    let (code, rep, _) = ppa(&["params-check", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(rep["p_huge"], 2700);
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "p.json");
    std::fs::write(&bad, r#"{"n":2,"delta_tiny":"1/400","delta_t":"1/1000","delta_w":"1/8","p_large":20,"p_c":8}"#)
        .unwrap();
    assert_eq!(ppa(&["--params", s(&bad), "params-check"]).0, 2);
}

#[test]
fn mobius_roundtrip_passes() {
    let (code, rep, _) = ppa(&["roundtrip", "mobius", "--n", "4", "--count", "300"]);
    assert_eq!(code, 0);
    assert_eq!(rep["mismatches"], 0);
}
