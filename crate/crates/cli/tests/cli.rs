use std::path::PathBuf;
use std::process::{Command, Output};

use germdyn::parse::parse_scalar;
use germdyn::Germ;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_germdyn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn job_files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../examples/paper");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("jobs directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "job"))
        .collect();
    files.sort();
    files
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn every_job_holds_and_names_its_claim() {
    let files = job_files();
    assert!(files.len() >= 20, "only {} jobs", files.len());
    for f in files {
        let out = run(&["run", "--format", "json", f.to_str().unwrap()]);
        let v = json_of(&out);
        assert_eq!(out.status.code(), Some(0), "{}: {v}", f.display());
        assert_eq!(v["expectations_hold"], Value::Bool(true), "{}", f.display());
        assert!(v["claim"].as_str().is_some_and(|c| !c.is_empty()), "{}", f.display());
    }
}

#[test]
fn job_output_is_byte_identical() {
    for f in job_files() {
        let a = run(&["run", "--format", "json", f.to_str().unwrap()]);
        let b = run(&["run", "--format", "json", f.to_str().unwrap()]);
        assert_eq!(a.stdout, b.stdout, "{}", f.display());
    }
}

#[test]
fn reported_germs_and_scalars_round_trip() {
    for f in job_files() {
        let v = json_of(&run(&["run", "--format", "json", f.to_str().unwrap()]));
        let n = v["N"].as_u64().unwrap() as u32;
        let r = &v["result"];
        for key in ["target", "final", "germ"] {
            if let Some(src) = r[key].as_str() {
                let g = Germ::parse(src, n).unwrap_or_else(|e| panic!("{}: {key} = {src}: {e}", f.display()));
                assert_eq!(g.to_string(), src, "{}", f.display());
            }
        }
        for key in ["lambda", "epsilon", "coefficient", "beta"] {
            if let Some(src) = r[key].as_str() {
                if key == "epsilon" && r["case"] == "CaseIII" {
                    continue;
                }
                let x = parse_scalar(src).unwrap_or_else(|e| panic!("{}: {key} = {src}: {e}", f.display()));
                assert_eq!(x.to_string(), src);
            }
        }
    }
}

#[test]
fn classify_inline() {
    let out = run(&["classify", "(2z+w^2, z*w)", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["type"], "SemiSuper");
    assert_eq!(v["result"]["lambda"], "2");
    assert_eq!(v["result"]["position"], "Greater");
    assert!(v.get("claim").is_none());
}

#[test]
fn normal_form_inline_with_divergence() {
    let out = run(&["normal-form", "(2z, z*w*(1+w))", "-N", "12", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["normal_form"], "(2 z, z w)");
    assert_eq!(v["result"]["psi_divergence"]["verdict"], "GrowthDetected");
}

#[test]
fn germ_from_file() {
    let dir = std::env::temp_dir().join(format!("germdyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("germ.txt");
    std::fs::write(&p, "f = (z^2, z w)\n").unwrap();
    let v = json_of(&run(&["classify", p.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["result"]["rigid_class"], 4);
}

#[test]
fn exit_codes_are_distinct() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["classify", "(2z + , w)"]), Some(2));
    assert_eq!(code(&["walk", "(w^2, z^3)", "--steps", "q:0"]), Some(2));
    assert_eq!(code(&["first-action", "(z^2, w^2)"]), Some(3));
    assert_eq!(code(&["walk", "(z^2 + w^2, w^2)", "--steps", "z:1"]), Some(3));
    assert_eq!(code(&["rates", "(w^2, z^3)", "-N", "12"]), Some(4));
    assert_eq!(code(&["eigen", "(z + w^2, z w + w^3)"]), Some(5));
    assert_eq!(code(&["classify", "(z, w)", "-N", "2"]), Some(2));

    let dir = std::env::temp_dir().join(format!("germdyn-cli-exp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("wrong.job");
    std::fs::write(&p, "claim = \"wrong on purpose\"\ncommand = \"classify\"\ngerm = \"(z^2, 2w)\"\n\n[expect]\nrigid_class = 4\n")
        .unwrap();
    let out = run(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rigid_class"));
}

#[test]
fn max_steps_flag_reaches_rigidify() {
    let out = run(&["rigidify", "(2z, w (z^9 + w))", "-N", "16", "--max-steps", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["rigidify", "(2z, w (z^3 + w))", "-N", "16", "--max-steps", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["blowups"], 3);
}
