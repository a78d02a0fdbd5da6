use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

fn finsheaf(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_finsheaf"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().expect("exited normally"),
    )
}

fn json_of(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (stdout, stderr, code) = finsheaf(&full);
    assert_eq!(code, 0, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn cohomology_examples() {
    assert_eq!(
        json_of(&["cohomology", "--disks", "2", "--degree", "2"])["group"],
        "Z^2"
    );
    assert_eq!(
        json_of(&["cohomology", "--disks", "1", "--sheaf", "constant", "--degree", "0"])["group"],
        "Z"
    );
    assert_eq!(json_of(&["cohomology", "--disks", "1", "--degree", "99"])["group"], "0");
}

#[test]
fn cech_examples() {
    assert_eq!(
        json_of(&["cech", "--disks", "3", "--degree", "1", "--coeff", "1"])["group"],
        "Z^3"
    );
    assert_eq!(json_of(&["cech", "--disks", "3", "--degree", "2"])["group"], "0");
}

#[test]
fn single_member_covering_gives_global_sections() {
    let space = json_of(&["space", "build", "--disks", "2"]);
    let elements = space["poset"]["elements"].clone();
    let covering = json!({ "members": { "X": elements }, "order": ["X"] });
    let path = scratch_file("single_member.json", &covering.to_string());
    for sheaf in ["wedge", "constant"] {
        let cech = json_of(&[
            "cech",
            "--disks",
            "2",
            "--sheaf",
            sheaf,
            "--covering",
            path.to_str().unwrap(),
            "--degree",
            "0",
        ]);
        let h0 = json_of(&["cohomology", "--disks", "2", "--sheaf", sheaf, "--degree", "0"]);
        assert_eq!(cech["group"], h0["group"], "{sheaf}");
    }
}

#[test]
fn reproduce_outcomes() {
    let (stdout, _, code) = finsheaf(&["reproduce", "--disks", "4"]);
    assert_eq!(code, 0);
    assert!(!stdout.contains("FAIL"));
    assert!(stdout.contains("uncountable"));

    let (stdout, _, code) = finsheaf(&["reproduce", "--disks", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("caveat"));

    let (_, stderr, code) = finsheaf(&["reproduce", "--disks", "0"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("input error"));
}

#[test]
fn json_output_is_byte_identical_and_seeded() {
    let args = ["--format", "json", "--seed", "41", "selftest", "--cases", "5"];
    let (a, _, code) = finsheaf(&args);
    let (b, _, _) = finsheaf(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 41);
    assert_eq!(v["passed"], true);

    let (table, _, _) = finsheaf(&["--seed", "41", "cech", "--disks", "1"]);
    assert!(table.starts_with("seed: 41"));
}

#[test]
fn malformed_json_reports_its_location() {
    let path = scratch_file(
        "truncated_poset.json",
        "{\"elements\": [\"a\", \"b\"],\n  \"covers\": [[\"a\"",
    );
    let (_, stderr, code) = finsheaf(&["cohomology", "--space", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn poset_files_drive_cohomology() {
    // The boundary of a square: a circle, so H^1 with constant coefficients is Z.
    let poset = json!({
        "elements": ["p", "q", "r", "s", "pq", "qr", "rs", "sp"],
        "covers": [["p", "pq"], ["q", "pq"], ["q", "qr"], ["r", "qr"], ["r", "rs"], ["s", "rs"], ["s", "sp"], ["p", "sp"]]
    });
    let path = scratch_file("square.json", &poset.to_string());
    let path = path.to_str().unwrap();
    assert_eq!(
        json_of(&["cohomology", "--space", path, "--sheaf", "constant", "--degree", "1"])["group"],
        "Z"
    );
    assert_eq!(
        json_of(&[
            "cohomology",
            "--space",
            path,
            "--sheaf",
            "constant",
            "--degree",
            "1",
            "--open",
            "pq,qr"
        ])["group"],
        "0"
    );
}

#[test]
fn covering_validation_verdicts() {
    let ok = json_of(&["covering", "validate", "--disks", "3"]);
    assert_eq!(ok["passed"], true);
    assert_eq!(
        json_of(&["covering", "validate", "--disks", "3", "--stage", "1"])["passed"],
        true
    );
    // Later stages fold the first disks into U0, so they are not of the
    // five-condition shape.
    assert_eq!(finsheaf(&["covering", "validate", "--disks", "3", "--stage", "2"]).2, 1);

    // Swapping the two roles breaks only the index-order condition.
    let mut covering = ok["covering"].clone();
    covering["order"] = json!(["U1", "U0", "U2", "U3"]);
    let path = scratch_file("swapped.json", &covering.to_string());
    let (stdout, _, code) = finsheaf(&[
        "--format",
        "json",
        "covering",
        "validate",
        "--disks",
        "3",
        "--covering",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let failed: Vec<&str> = v["verdict"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["condition"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["IndexOrder"]);
}

#[test]
fn wedge_commands() {
    let built = json_of(&["wedge", "build", "--disks", "2"]);
    assert_eq!(built["poset"]["elements"].as_array().unwrap().len(), 9);
    let (stdout, _, code) = finsheaf(&["wedge", "verify", "--all", "--disks", "3"]);
    assert_eq!(code, 0);
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(finsheaf(&["nonsense"]).2, 1);
    assert_eq!(finsheaf(&["cohomology", "--disks", "1", "--open", "nowhere"]).2, 1);
    assert_eq!(finsheaf(&["cohomology", "--space", "/nonexistent/poset.json"]).2, 1);
}
