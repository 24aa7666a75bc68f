use std::path::Path;
use std::process::Command;

use serde_json::Value;

use real_spherical::cli::{render_json, run, Outcome};

fn realsph(args: &[&str]) -> Outcome {
    let mut full = vec!["realsph"];
    full.extend_from_slice(args);
    run(full)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn human_witnesses(stdout: &str) -> Vec<String> {
    stdout
        .lines()
        .filter_map(|l| l.trim().strip_prefix("witness: "))
        .map(str::to_string)
        .collect()
}

fn json_witness_texts(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            if let (Some(Value::String(t)), Some(_)) = (m.get("text"), m.get("kind")) {
                out.push(t.clone());
            }
            m.values().for_each(|x| json_witness_texts(x, out));
        }
        Value::Array(a) => a.iter().for_each(|x| json_witness_texts(x, out)),
        _ => {}
    }
}

#[test]
fn forms_listing() {
    let out = realsph(&["--json", "forms", "E8"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    let forms = v["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 3);
    assert!(forms.iter().all(|f| f["epsilon_text"] == "id"));
    assert_eq!(json(&realsph(&["--json", "forms", "A1"]))["forms"].as_array().unwrap().len(), 2);
    let out = realsph(&["forms", "Z9"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Z9"));
}

#[test]
fn check_examples() {
    let out = realsph(&["check", "--fixture", "E6-nilpotent", "--form", "EIV"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("answer: YES"));
    assert!(out.stdout.contains("unique"));

    for fixture in ["A3-product", "E7-EVI-nilpotent", "D6-37", "GB-A3", "A2-monoid"] {
        let ty = match fixture {
            "A3-product" | "GB-A3" => "sl(4,R)",
            "E7-EVI-nilpotent" => "EV",
            "D6-37" => "so(6,6)",
            _ => "sl(3,R)",
        };
        let out = realsph(&["check", "--fixture", fixture, "--form", ty]);
        assert_eq!(out.code, 0, "{fixture}: {}", out.stderr);
        assert!(out.stdout.contains("answer: YES"), "{fixture}: {}", out.stdout);
    }

    let out = realsph(&["check", "--fixture", "A2-monoid", "--form", "su(3)"]);
    assert!(out.stdout.contains("answer: NO"));
    assert!(out.stdout.contains("ω2 ↦ ω1"));

    let out = realsph(&["check", "--fixture", "D4-34", "--form", "so(5,3)"]);
    assert!(out.stdout.contains("answer: NO"));
    assert!(out.stdout.contains("relabeled"));
}

#[test]
fn orbit_tables() {
    let out = realsph(&["--json", "orbits", "--fixture", "E8-00000010", "--form", "EVIII"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["guaranteed_real_points"]["answer"], "yes");
    assert_eq!(v["orbits"].as_array().unwrap().len(), 8);

    let dir = tempfile::tempdir().unwrap();
    let rank0 = write(dir.path(), "flag.json", r#"{"type":"A2","sigma":[],"spherically_closed":true}"#);
    let out = realsph(&["--json", "orbits", &rank0, "--form", "split"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    let rows = v["orbits"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["candidate"], true);
    assert!(v["cartan_index_obstruction"]["not_evaluated"].is_string());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_schema = write(dir.path(), "bad.json", "{\"type\": \"A3\",\n \"sigma\": [[1,0,0]],\n \"extra\": 1}");
    let out = realsph(&["check", &bad_schema, "--form", "split"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("extra") && out.stderr.contains("line 3"), "{}", out.stderr);

    let dependent = write(
        dir.path(),
        "dep.json",
        r#"{"type":"A2","sigma":[[1,1],[2,2]],"spherically_closed":true}"#,
    );
    let out = realsph(&["check", &dependent, "--form", "split"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("not linearly independent"));

    let open = write(dir.path(), "open.json", r#"{"type":"A3","sigma":[[1,1,0]]}"#);
    assert_eq!(realsph(&["check", &open, "--form", "split"]).code, 3);

    let redundant = write(dir.path(), "m.json", r#"{"type":"A2","generators":[[1,0],[0,1],[1,1]]}"#);
    assert_eq!(realsph(&["check", &redundant, "--form", "split"]).code, 2);

    // orbit queries need a real structure
    assert_eq!(realsph(&["orbits", "--fixture", "A3-product", "--form", "su(2,2)"]).code, 3);
    assert_eq!(realsph(&["orbits", "--fixture", "A2-monoid", "--form", "su(3)"]).code, 2);
    assert_eq!(realsph(&["check", "--fixture", "A3-product", "--form", "so(4,4)"]).code, 2);
    assert_eq!(realsph(&["check", "--fixture", "nope", "--form", "split"]).code, 2);
    assert_eq!(realsph(&["check", "/no/such/file.json", "--form", "split"]).code, 2);
    assert_eq!(realsph(&["check", "--form", "split"]).code, 2);
    assert_eq!(realsph(&["scan", "5"]).code, 2);
    assert_eq!(realsph(&["--version"]).code, 0);

    let catalog = write(dir.path(), "cat.json", r#"{"schema":2,"forms":[]}"#);
    assert_eq!(realsph(&["--catalog", &catalog, "forms", "A1"]).code, 2);

    let out = realsph(&["--json", "check", "--fixture", "nope", "--form", "split"]);
    assert_eq!(json(&out)["exit_code"], 2);
}

#[test]
fn catalog_override_by_env() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = write(
        dir.path(),
        "a1.json",
        r#"{"schema":1,"forms":[{"type":"A","rank":1,"name":"sl(2,R)","black_nodes":[],"omega":[]}]}"#,
    );
    let bin = env!("CARGO_BIN_EXE_realsph");
    let out = Command::new(bin)
        .args(["--json", "forms", "A1"])
        .env("REALSPH_CATALOG", &catalog)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["forms"].as_array().unwrap().len(), 1);

    let out = Command::new(bin)
        .args(["--catalog", &catalog, "orbits", "--fixture", "A2-full-flag", "--form", "split"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin).args(["forms", "A1"]).env_remove("REALSPH_CATALOG").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("2 real forms"));
}

#[test]
fn json_is_canonical() {
    let queries: [&[&str]; 6] = [
        &["--json", "forms", "D4"],
        &["--json", "check", "--fixture", "A3-product", "--form", "su(2,2)"],
        &["--json", "orbits", "--fixture", "E7-EVI-nilpotent", "--form", "EVI"],
        &["--json", "scan", "2"],
        &["--json", "fixtures"],
        &["fixtures", "--export", "D4-34"],
    ];
    for q in queries {
        let out = realsph(q);
        assert_eq!(out.code, 0, "{q:?}");
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(render_json(&v), out.stdout, "{q:?}");
        assert_eq!(realsph(q).stdout, out.stdout, "{q:?} is not deterministic");
    }
}

#[test]
fn human_witnesses_appear_in_json() {
    let queries: [&[&str]; 4] = [
        &["check", "--fixture", "A3-product", "--form", "su(2,2)"],
        &["orbits", "--fixture", "E7-EVI-nilpotent", "--form", "EVI"],
        &["scan", "3"],
        &["check", "--fixture", "A3-single-color", "--form", "su(2,2)"],
    ];
    for q in queries {
        let human = realsph(q);
        let mut with_json = vec!["--json"];
        with_json.extend_from_slice(q);
        let machine = realsph(&with_json);
        let mut texts = Vec::new();
        json_witness_texts(&json(&machine), &mut texts);
        let witnesses = human_witnesses(&human.stdout);
        assert!(!witnesses.is_empty(), "{q:?}");
        for w in witnesses {
            assert!(texts.contains(&w), "{q:?}: `{w}` missing from JSON");
        }
    }
}

#[test]
fn exported_fixture_checks_like_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["A3-product", "D4-36", "GB-A3", "A2-monoid"] {
        let exported = realsph(&["fixtures", "--export", name]);
        assert_eq!(exported.code, 0);
        let path = write(dir.path(), &format!("{name}.json"), &exported.stdout);
        let form = if name.starts_with("D4") { "so(3,5)" } else if name.starts_with("A2") { "su(3)" } else { "su(2,2)" };
        let from_file = json(&realsph(&["--json", "check", &path, "--form", form]));
        let from_fixture = json(&realsph(&["--json", "check", "--fixture", name, "--form", form]));
        assert_eq!(from_file["verdict"], from_fixture["verdict"], "{name}");
    }
}
