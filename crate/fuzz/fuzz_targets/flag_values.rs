#![no_main]

use glmboot::bootstrap::{Centering, Method, WeightDistribution};
use glmboot::{FamilyId, LambdaPolicy};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(policy) = text.parse::<LambdaPolicy>() {
        policy.validate().unwrap();
        assert_eq!(policy.to_string().parse::<LambdaPolicy>().unwrap(), policy);
    }
    if let Ok(w) = text.parse::<WeightDistribution>() {
        assert!(w.mean() > 0.0);
        assert!((w.variance() - w.mean() * w.mean()).abs() <= 1e-9 * w.mean() * w.mean());
        assert_eq!(w.to_string().parse::<WeightDistribution>().unwrap(), w);
    }
    if let Ok(f) = text.parse::<FamilyId>() {
        assert_eq!(f.as_str().parse::<FamilyId>().unwrap(), f);
    }
    if let Ok(m) = text.parse::<Method>() {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    if let Ok(c) = text.parse::<Centering>() {
        assert_eq!(c.to_string().parse::<Centering>().unwrap(), c);
    }
});
