#![no_main]

use glmboot::simulation::SimConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = SimConfig::from_toml(text) {
        assert!(config.p0 <= config.p && config.mc_reps >= 1);
        assert!(config.alpha > 0.0 && config.alpha < 1.0);
        config.validate().unwrap();
    }
});
