//! Bundled inputs and live outputs validate against the shipped schemas.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(rel: &str) -> Value {
    let text = std::fs::read_to_string(root().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"));
    serde_json::from_str(&text).unwrap()
}

/// Validate against `schema`, or against `$defs/<def>` of it.
fn validate(instance: &Value, schema: &str, def: Option<&str>) {
    let mut schema = load(&format!("schemas/{schema}"));
    if let Some(def) = def {
        let defs = schema["$defs"].clone();
        schema = serde_json::json!({"$defs": defs, "$ref": format!("#/$defs/{def}")});
    }
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{def:?}: {errors:?}");
}

fn run(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_preper"))
        .current_dir(root())
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check_output(doc: &Value) {
    validate(doc, "output.schema.json", None);
    let command = doc["command"].as_str().unwrap();
    validate(&doc["config"], "args.schema.json", Some(command));
    let def = match command {
        "marked-grid" | "bifslice" => "grid",
        c => c,
    };
    validate(&doc["result"], "results.schema.json", Some(def));
}

#[test]
fn bundled_inputs_match_their_schemas() {
    for map in [
        "quadratic_f",
        "quadratic_g",
        "chebyshev",
        "square",
        "symmetric_f",
        "symmetric_g",
    ] {
        validate(&load(&format!("data/{map}.json")), "map.schema.json", None);
    }
    for fam in [
        "quadratic_family",
        "quadratic_f_constant_family",
        "symmetric_family_f",
        "symmetric_family_g",
    ] {
        validate(
            &load(&format!("data/{fam}.json")),
            "family.schema.json",
            None,
        );
    }
    validate(
        &load("data/quadratic_pair_experiment.json"),
        "transversality-experiment.schema.json",
        None,
    );
}

#[test]
fn config_outputs_match_their_schemas() {
    let mut configs: Vec<PathBuf> = std::fs::read_dir(root().join("data/configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    configs.sort();
    // The two slowest configs are covered elsewhere.
    for cfg in configs {
        let name = cfg.file_name().unwrap().to_str().unwrap().to_owned();
        let rel = format!("data/configs/{name}");
        let config = load(&rel);
        validate(&config, "experiment-config.schema.json", None);
        validate(
            &config["args"],
            "args.schema.json",
            Some(config["command"].as_str().unwrap()),
        );
        if name == "intersect_quadratic.json" || name == "bifslice_symmetric.json" {
            continue;
        }
        check_output(&run(&["run", &rel, "--format", "json"]));
    }
}

#[test]
fn command_outputs_match_their_schemas() {
    for args in [
        &[
            "iterate",
            "--map",
            "data/quadratic_f.json",
            "--point",
            "inf",
            "--steps",
            "2",
        ][..],
        &["orbit", "--map", "data/symmetric_f.json", "--point", "0.5"],
        &["preper", "--map", "data/quadratic_f.json", "--max-n", "3"],
        &[
            "intersect",
            "--f",
            "data/quadratic_f.json",
            "--g",
            "data/quadratic_g.json",
            "--max-n",
            "4",
        ],
        &[
            "dynatomic",
            "--map",
            "data/quadratic_f.json",
            "--period",
            "3",
        ],
        &[
            "transversality",
            "--experiment",
            "data/quadratic_pair_experiment.json",
        ],
        &[
            "measure-sample",
            "--map",
            "data/square.json",
            "--preperiodic",
            "6,0",
        ],
        &[
            "lattes-torsion",
            "--t",
            "0.5+1.5i",
            "--nmax",
            "4",
            "--mmax",
            "6",
        ],
        &[
            "bifslice",
            "--f",
            "data/quadratic_f_constant_family.json",
            "--g",
            "data/quadratic_family.json",
            "--re=-2,0",
            "--im=-1,1",
            "--resolution",
            "3",
            "--samples",
            "16",
            "--seed",
            "1",
        ],
    ] {
        check_output(&run(args));
    }
}

#[test]
fn csv_headers_match_the_schema() {
    let schema = load("schemas/csv.schema.json");
    for args in [
        &[
            "intersect",
            "--f",
            "data/quadratic_f.json",
            "--g",
            "data/quadratic_g.json",
            "--max-n",
            "3",
        ][..],
        &["preper", "--map", "data/quadratic_f.json", "--max-n", "2"],
        &["iterate", "--map", "data/quadratic_f.json", "--point", "0"],
        &[
            "measure-sample",
            "--map",
            "data/square.json",
            "--samples",
            "4",
            "--seed",
            "1",
        ],
        &[
            "marked-grid",
            "--family",
            "data/quadratic_family.json",
            "--marked",
            "0",
            "--re=-2,1",
            "--im=-1,1",
            "--resolution",
            "3",
        ],
    ] {
        let mut full = args.to_vec();
        full.extend(["--format", "csv"]);
        let out = Command::new(env!("CARGO_BIN_EXE_preper"))
            .current_dir(root())
            .args(&full)
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        let want: Vec<&str> = schema["properties"][args[0]]["const"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect();
        assert_eq!(header, want.join(","), "{}", args[0]);
    }
}
