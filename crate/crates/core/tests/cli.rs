//! End-to-end runs of the `evs-lab` binary: exit statuses, output shape and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn evs_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evs-lab")).args(args).env_remove("EVS_LAB_SEED").output().expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn input_file(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("evs-lab-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("one json record per line")).collect()
}

fn without_elapsed(out: &Output) -> Vec<Value> {
    let mut recs = records(out);
    for r in &mut recs {
        r.as_object_mut().unwrap().remove("elapsed").expect("elapsed field present");
    }
    recs
}

#[test]
fn halfline_axioms_exit_zero_with_no_refuted_axiom() {
    let out = evs_lab(&["axioms", "halfline", "--budget", "10000", "--format", "jsonlines"]);
    assert_eq!(status(&out), 0);
    let recs = records(&out);
    let axioms: Vec<_> = recs.iter().filter(|r| r["check"].as_str().unwrap().starts_with("axiom.")).collect();
    assert_eq!(axioms.len(), 13);
    assert!(axioms.iter().all(|r| r["verdict"] != "Refuted"));
}

#[test]
fn lattice_is_refuted_radial_with_two_subspaces() {
    let out = evs_lab(&["radial", "lattice2", "--format", "jsonlines"]);
    assert_eq!(status(&out), 0, "a radial verdict is a decision");
    let recs = records(&out);
    let r = recs.iter().find(|r| r["check"] == "radial").unwrap();
    assert_eq!(r["verdict"], "Refuted");
    let (x, y) = (r["witness"]["x"].as_str().unwrap(), r["witness"]["y"].as_str().unwrap());
    assert!(x.starts_with("span(") && y.starts_with("span(") && x != y, "{x} {y}");
}

#[test]
fn audit_finding_fails_unless_findings_ok() {
    let gens = input_file("gens.txt", "[1,2)\n");
    let g = gens.to_str().unwrap();
    let out = evs_lab(&["audit", "--input", g, "--format", "jsonlines"]);
    assert_eq!(status(&out), 1);
    let recs = records(&out);
    let r = recs.iter().find(|r| r["check"] == "audit.0000").unwrap();
    assert_eq!(r["verdict"], "Refuted");
    assert!(r["witness"].to_string().contains("left-closed"), "{}", r["witness"]);
    assert_eq!(status(&evs_lab(&["audit", "--input", g, "--findings-ok"])), 0);
}

#[test]
fn squaring_is_not_a_morphism() {
    assert_eq!(status(&evs_lab(&["morphism", "squaring"])), 1);
    assert_eq!(status(&evs_lab(&["morphism", "doubling"])), 0);
}

#[test]
fn errors_exit_two() {
    let out = evs_lab(&["axioms", "hexagon"]);
    assert_eq!(status(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("evs-lab:"));
    assert_eq!(status(&evs_lab(&["sets", "halfline", "--input", "/nonexistent/sets.txt"])), 2);
    let bad = input_file("bad.txt", "[0,1)\n[-1,0)\n");
    let out = evs_lab(&["sets", "halfline", "--input", bad.to_str().unwrap()]);
    assert_eq!(status(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn set_decisions_never_fail_the_run() {
    let sets = input_file("sets.txt", "# one per line\n[0,1/2) U (3/4,2]\n[0,1)\n[0,0]\n");
    let out = evs_lab(&["sets", "halfline", "--input", sets.to_str().unwrap(), "--format", "jsonlines"]);
    assert_eq!(status(&out), 0);
    let recs = records(&out);
    let verdict = |check: &str| recs.iter().find(|r| r["check"] == check).unwrap()["verdict"].clone();
    assert_eq!(verdict("input.0000.absorbing"), "Proven");
    assert_eq!(verdict("input.0000.balanced"), "Refuted");
    assert_eq!(verdict("input.0001.absorbing"), "Proven");
    assert_eq!(verdict("input.0001.balanced"), "Proven");
    assert_eq!(verdict("input.0002.absorbing"), "Refuted");
}

#[test]
fn all_halfline_is_deterministic() {
    let args = ["all", "halfline", "--format", "jsonlines", "--seed", "42", "--findings-ok"];
    let (a, b) = (evs_lab(&args), evs_lab(&args));
    assert_eq!(status(&a), 0);
    assert_eq!(without_elapsed(&a), without_elapsed(&b));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_evs-lab"));
        c.args(["radial", "halfline", "--format", "jsonlines"]).env_remove("EVS_LAB_SEED");
        if let Some(s) = env {
            c.env("EVS_LAB_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        records(&c.output().unwrap())[0]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(Some("7"), None), 7);
    assert_eq!(run(Some("7"), Some("9")), 9);
}

#[test]
fn localbase_reads_the_family_literally_unless_a_tail_is_asked_for() {
    let body: String = (1..=8).map(|n| format!("[0,1/{n})\n")).collect();
    let family = input_file("family.txt", &body);
    let f = family.to_str().unwrap();
    let verdicts = |extra: &[&str]| {
        let mut args = vec!["localbase", "halfline", "--input", f, "--format", "jsonlines", "--findings-ok"];
        args.extend_from_slice(extra);
        let out = evs_lab(&args);
        assert_eq!(status(&out), 0);
        let recs = records(&out);
        ["localbase.ii", "localbase.iv", "localbase.v"]
            .map(|id| recs.iter().find(|r| r["check"] == id).unwrap()["verdict"].as_str().unwrap().to_string())
    };
    assert_eq!(verdicts(&[]), ["Refuted", "Refuted", "Refuted"]);
    assert_eq!(verdicts(&["--reciprocal-tail"]), ["Proven", "Unfalsified", "Refuted"]);
}
