#![allow(dead_code)]

use std::path::PathBuf;

use jsonschema::Registry;
use serde_json::Value;
use wbroadcast_cli::{ProtocolConfig, Validated};

const COMMON_ID: &str = "https://wbroadcast.invalid/schema/common.v1.json";

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema")
}

fn load(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    serde_json::from_str(&text).unwrap()
}

/// Validation errors of `doc` against a shipped schema, as strings.
pub fn schema_errors(schema_file: &str, doc: &Value) -> Vec<String> {
    let registry = Registry::new()
        .add(COMMON_ID, load("common.v1.json"))
        .expect("valid uri")
        .prepare()
        .expect("registry");
    let validator = jsonschema::options()
        .with_registry(&registry)
        .build(&load(schema_file))
        .expect("schema compiles");
    validator
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect()
}

pub fn assert_valid(schema_file: &str, doc: &Value) {
    let errors = schema_errors(schema_file, doc);
    assert!(errors.is_empty(), "{schema_file}: {errors:#?}");
}

pub fn config(alpha: f64, beta: f64, gamma: f64, x: f64, y: f64) -> ProtocolConfig {
    ProtocolConfig {
        alpha,
        beta,
        gamma,
        x,
        y,
        tol: 1e-9,
        outcome: None,
    }
}

/// The unequal-amplitude config used for the frozen regression values.
pub fn config_a() -> Validated {
    config(0.48, 0.6, 0.64, 0.8, 0.6).validate().unwrap()
}

pub fn uniform_symmetric() -> Validated {
    ProtocolConfig::uniform_symmetric().validate().unwrap()
}

pub fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap()
}
