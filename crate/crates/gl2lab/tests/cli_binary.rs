//! The `gl2lab` binary: JSON envelope, exit codes, determinism and the
//! catalog environment variable.

use std::process::Command;

use serde_json::Value;

fn gl2lab(args: &[&str], env_catalog: Option<&std::path::Path>) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gl2lab"));
    cmd.args(args).env_remove("GL2LAB_CATALOG");
    if let Some(p) = env_catalog {
        cmd.env("GL2LAB_CATALOG", p);
    }
    let out = cmd.output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

#[test]
fn envelope_and_exit_codes() {
    let (code, doc) = gl2lab(&["info", "--name", "H_3"], None);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], "gl2lab/1");
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["payload"]["label"], "4.2.0");

    let (code, doc) = gl2lab(&["isogeny", "--name", "H_1", "--r", "1", "--kernel", "0,1"], None);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["payload"]["kind"], "kernel-too-large");

    let (code, doc) = gl2lab(&["info", "--bogus"], None);
    assert_eq!(code, 2);
    assert_eq!(doc["payload"]["kind"], "usage");
}

#[test]
fn every_subcommand_answers() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/t8_row1.json");
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("c.jsonl");
    std::fs::write(&cat, "{\"name\":\"B4\",\"modulus\":4,\"generators\":[[[1,1],[0,1]],[[3,0],[0,1]],[[1,0],[0,3]]]}\n").unwrap();
    let cat = cat.to_str().unwrap();
    let lines: [&[&str]; 11] = [
        &["info", "--name", "H_193n", "--transpose"],
        &["isogeny", "--name", "H_193n", "--transpose", "--kernel", "0,1", "--r", "1"],
        &["propagate", "--gens", "[[1,0],[0,1]]", "--mod", "2"],
        &["twists", "--name", "H_1"],
        &["fiber", "--odd", "Nsp(3)", "--two", "H_3"],
        &["match", "--name", "H_193n", "--transpose"],
        &["verify", fixture],
        &["catalog-load", cat, "--verify-labels"],
        &["lift", "--name", "H_3", "--to", "16"],
        &["level", "--name", "G1-06"],
        &["conjugate", "--name", "H_3", "--with-name", "H_3", "--with-transpose"],
    ];
    for args in lines {
        let (code, doc) = gl2lab(args, None);
        assert_eq!((code, &doc["status"]), (0, &Value::from("ok")), "{args:?}: {doc}");
        assert_eq!(doc["schema"], "gl2lab/1");
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let args = ["propagate", "--name", "H_193n", "--transpose"];
    let run = || Command::new(env!("CARGO_BIN_EXE_gl2lab")).args(args).env_remove("GL2LAB_CATALOG").output().unwrap().stdout;
    let (a, b) = (run(), run());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn catalog_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.jsonl");
    std::fs::write(&path, "{\"name\":\"My8\",\"modulus\":8,\"generators\":[[[1,2],[0,1]],[[3,0],[0,1]],[[1,0],[0,3]],[[5,0],[0,1]],[[1,0],[0,5]]]}\n").unwrap();
    let (code, doc) = gl2lab(&["info", "--name", "My8"], Some(&path));
    assert_eq!(code, 0, "{doc}");
    assert!(doc["diagnostics"][0].as_str().unwrap().contains("loaded 1 catalog entries"));
    let (code, doc) = gl2lab(&["info", "--name", "My8"], None);
    assert_eq!((code, doc["payload"]["kind"].as_str()), (1, Some("unknown-name")));

    std::fs::write(&path, "{\"name\":\"H_3\",\"modulus\":4,\"generators\":[[[1,0],[0,1]]]}\n").unwrap();
    let (_, doc) = gl2lab(&["level", "--name", "H_1"], Some(&path));
    assert_eq!(doc["payload"]["kind"], "duplicate-name");
}

#[test]
fn max_elements_is_enforced() {
    let (code, doc) = gl2lab(&["--max-elements", "100", "info", "--name", "H_1", "--full-lift"], None);
    assert_eq!(code, 1);
    assert_eq!(doc["payload"]["kind"], "cap-exceeded");
}

#[test]
fn human_rendering() {
    let out = Command::new(env!("CARGO_BIN_EXE_gl2lab"))
        .args(["--human", "propagate", "--name", "H_193n", "--transpose"])
        .env_remove("GL2LAB_CATALOG")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("shape: T_8"));
    assert_eq!(text.lines().filter(|l| l.starts_with("edge ")).count(), 7);
}
