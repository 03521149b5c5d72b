use std::path::PathBuf;

use bwrk_core::environments::adversarial_two_phase;
use bwrk_core::harness::{emit, run_experiment, ExperimentConfig, Format};
use serde_json::Value;

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))).unwrap()
}

fn validator(name: &str) -> jsonschema::Validator {
    jsonschema::validator_for(&read_json(repo().join("schemas").join(name))).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, instance: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}");
}

fn config_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(repo().join("configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn shipped_configs_match_schema_and_parse() {
    let v = validator("experiment-config.schema.json");
    let files = config_files();
    assert!(files.len() >= 5);
    for path in files {
        assert_valid(&v, &read_json(path.clone()), &path.display().to_string());
        ExperimentConfig::load(&path).unwrap();
    }
}

#[test]
fn schema_rejects_malformed_configs() {
    let v = validator("experiment-config.schema.json");
    let mut config = read_json(repo().join("configs/two_phase.json"));
    config["replications"] = 0.into();
    assert!(!v.is_valid(&config));
    let mut config = read_json(repo().join("configs/two_phase.json"));
    config["mode"] = serde_json::json!({"kind": "known_beta"});
    assert!(!v.is_valid(&config));
}

#[test]
fn emitted_report_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::load(repo().join("configs/stochastic.json")).unwrap();
    config.horizons = vec![200, 400];
    config.replications = 3;
    let report = run_experiment(&config, None).unwrap();
    let out = dir.path().join("report.json");
    emit(&report, Format::Json, &out).unwrap();
    let value = read_json(out);
    assert_valid(&validator("report.schema.json"), &value, "report");
    assert_valid(&validator("experiment-config.schema.json"), &value["config"], "embedded config");
}

#[test]
fn scripts_match_schema() {
    let v = validator("script.schema.json");
    assert_valid(&v, &read_json(repo().join("configs/scripts/alternating.json")), "shipped script");
    let generated: Value = serde_json::from_str(&adversarial_two_phase(10, 2, 2, 0.25).unwrap().to_json().unwrap()).unwrap();
    assert_valid(&v, &generated, "generated script");
}
