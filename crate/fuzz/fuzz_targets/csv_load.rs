#![no_main]

use glmboot::io::{load_csv_reader, ResponseCoding};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    for coding in [ResponseCoding::default(), ResponseCoding { positive_class: Some("2".into()) }] {
        if let Ok(loaded) = load_csv_reader(data, "y", None, &coding) {
            let d = &loaded.dataset;
            assert!(d.n() >= 1 && d.p() >= 1);
            assert_eq!(loaded.covariates.len(), d.p());
            assert!(d.x().iter().chain(d.y().iter()).all(|v| v.is_finite()));
        }
    }
    let cols = vec!["a".to_string(), "b".to_string()];
    if let Ok(loaded) = load_csv_reader(data, "y", Some(&cols), &ResponseCoding::default()) {
        assert_eq!(loaded.covariates, cols);
    }
});
