use std::path::PathBuf;
use std::process::{Command, Output};

fn shiftforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftforge"))
        .args(args)
        .env_remove("SHIFTFORGE_DEFAULT_BOUND")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

#[test]
fn verify_z4_exits_zero() {
    let out = shiftforge(&["verify", "--spec", "z4_coset"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["bounds"]["bound"], 64);
}

#[test]
fn closure_violation_exits_one_with_witness() {
    let out = shiftforge(&["verify", "--spec", "broken_closure"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(r["witness"]["left"].is_string());
}

#[test]
fn unstabilized_classes_exit_two() {
    let out = shiftforge(&["classes", "--spec", "z2_second", "--bound", "16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_usage_exits_three() {
    assert_eq!(shiftforge(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(shiftforge(&["verify", "--spec", "z4_coset", "--bound", "zero"]).status.code(), Some(3));
    assert_eq!(shiftforge(&["--help"]).status.code(), Some(0));
}

#[test]
fn env_var_sets_the_default_bound() {
    let out = Command::new(env!("CARGO_BIN_EXE_shiftforge"))
        .args(["verify", "--spec", "z4_coset"])
        .env("SHIFTFORGE_DEFAULT_BOUND", "9")
        .output()
        .unwrap();
    assert_eq!(report(&out)["bounds"]["bound"], 9);
    let out = Command::new(env!("CARGO_BIN_EXE_shiftforge"))
        .args(["verify", "--spec", "z4_coset", "--bound", "5"])
        .env("SHIFTFORGE_DEFAULT_BOUND", "9")
        .output()
        .unwrap();
    assert_eq!(report(&out)["bounds"]["bound"], 5);
}

#[test]
fn spec_from_a_path() {
    let dir = scratch("path");
    let file = dir.join("mine.json");
    std::fs::write(&file, r#"{"name": "mine", "alphabet": {"kind": "finite_cyclic", "n": 3}, "shift": {"kind": "full"}}"#).unwrap();
    let out = shiftforge(&["classify", "--spec", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["input"], "mine");
}

#[test]
fn graph_to_stdout_and_to_file() {
    let out = shiftforge(&["graph", "--spec", "z4_coset"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches(" -> ").count(), 8);
    let dir = scratch("graph");
    let dot = dir.join("z4.dot");
    let rep = dir.join("z4.json");
    let out = shiftforge(&["graph", "--spec", "z4_coset", "--emit-dot", dot.to_str().unwrap(), "--out", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&dot).unwrap(), text);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["result"]["edges"], 8);
}

#[test]
fn decompose_writes_a_graph_per_stage() {
    let dir = scratch("stages");
    let dot = dir.join("z4.dot");
    let out = shiftforge(&["decompose", "--spec", "z4_coset", "--emit-dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["dot_files"].as_array().unwrap().len(), 3);
    for i in 0..3 {
        assert!(dir.join(format!("z4.stage{i}.dot")).exists());
    }
    assert!(r["result"]["trace"].as_array().unwrap().len() >= 2);
}

#[test]
fn missing_output_directories_are_created() {
    let dir = scratch("nested").join("a").join("b");
    let (dot, json) = (dir.join("z4.dot"), dir.join("z4.json"));
    let out = shiftforge(&["graph", "--spec", "z4_coset", "--emit-dot", dot.to_str().unwrap(), "--out", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dot.exists() && json.exists());
}

#[test]
fn followers_of_a_block() {
    let out = shiftforge(&["followers", "--spec", "z4_coset", "--block", "[1]", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = shiftforge(&["followers", "--spec", "z4_coset", "--block", "[7]"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn embed_monoids() {
    let out = shiftforge(&["embed", "--monoid", "truncated_z2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["embedding"]["group"]["order"], 2);
    let out = shiftforge(&["embed", "--monoid", "incomparable_idempotents"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["witness"]["hypothesis"], "idempotents form a chain");
}

#[test]
fn reports_and_graphs_are_byte_identical_across_runs() {
    let dir = scratch("det");
    let mut seen = Vec::new();
    for round in 0..2 {
        let rep = dir.join(format!("r{round}.json"));
        let dot = dir.join(format!("g{round}.dot"));
        let out = shiftforge(&[
            "decompose", "--spec", "z4_coset", "--seed", "11", "--emit-dot", dot.to_str().unwrap(), "--out", rep.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut files = vec![std::fs::read(&rep).unwrap()];
        for i in 0..3 {
            files.push(std::fs::read(dir.join(format!("g{round}.stage{i}.dot"))).unwrap());
        }
        seen.push(files);
    }
    // the report lists its own dot paths, which differ by round
    let strip = |b: &[u8]| String::from_utf8_lossy(b).replace("g0.", "g.").replace("g1.", "g.");
    assert_eq!(strip(&seen[0][0]), strip(&seen[1][0]));
    assert_eq!(seen[0][1..], seen[1][1..]);
}
