#![no_main]

use glmboot::io::{parse_json, to_json, BootstrapReport, DiagnoseReport, FitReport};
use glmboot::simulation::ExperimentManifest;
use libfuzzer_sys::fuzz_target;
use serde::{de::DeserializeOwned, Serialize};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) {
    if let Ok(value) = parse_json::<T>(text) {
        let again: T = parse_json(&to_json(&value).unwrap()).unwrap();
        assert_eq!(again, value);
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    round_trip::<FitReport>(text);
    round_trip::<BootstrapReport>(text);
    round_trip::<DiagnoseReport>(text);
    round_trip::<ExperimentManifest>(text);
});
