//! Replays the checked-in fuzz corpus through the same entry points the fuzz
//! targets drive.

use std::path::PathBuf;

use glmboot::bootstrap::{Centering, Method, WeightDistribution};
use glmboot::io::{load_csv_reader, parse_json, to_json, BootstrapReport, DiagnoseReport, FitReport, ResponseCoding};
use glmboot::simulation::{ExperimentManifest, SimConfig};
use glmboot::{FamilyId, LambdaPolicy};

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus {}", dir.display());
    files
}

#[test]
fn csv_seeds() {
    let mut accepted = 0;
    for (name, bytes) in corpus("csv_load") {
        match load_csv_reader(&bytes[..], "y", None, &ResponseCoding::default()) {
            Ok(l) => {
                accepted += 1;
                assert!(l.dataset.x().iter().all(|v| v.is_finite()), "{name}");
            }
            Err(e) => assert_eq!(e.exit_code(), 2, "{name}: {e}"),
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn sim_config_seeds() {
    for (name, bytes) in corpus("sim_config") {
        let config =
            SimConfig::from_toml(std::str::from_utf8(&bytes).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"));
        config.validate().unwrap();
    }
}

#[test]
fn flag_seeds() {
    for (name, bytes) in corpus("flag_values") {
        let text = std::str::from_utf8(&bytes).unwrap();
        let parsed = text.parse::<LambdaPolicy>().is_ok() as u8
            + text.parse::<WeightDistribution>().is_ok() as u8
            + text.parse::<FamilyId>().is_ok() as u8
            + text.parse::<Method>().is_ok() as u8
            + text.parse::<Centering>().is_ok() as u8;
        assert_eq!(parsed, 1, "{name}");
    }
}

#[test]
fn report_seeds() {
    for (name, bytes) in corpus("report_json") {
        let text = std::str::from_utf8(&bytes).unwrap();
        let ok = match name.as_str() {
            "fit.json" => parse_json::<FitReport>(text).map(|v| to_json(&v).unwrap()),
            "bootstrap.json" => parse_json::<BootstrapReport>(text).map(|v| to_json(&v).unwrap()),
            "diagnose.json" => parse_json::<DiagnoseReport>(text).map(|v| to_json(&v).unwrap()),
            "manifest.json" => parse_json::<ExperimentManifest>(text).map(|v| to_json(&v).unwrap()),
            other => panic!("unexpected seed {other}"),
        };
        assert_eq!(ok.unwrap(), text, "{name} does not re-serialize identically");
    }
}
