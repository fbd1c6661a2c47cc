#![no_main]

use std::str::FromStr;

use libfuzzer_sys::fuzz_target;
use rfe_core::presets::Preset;

fuzz_target!(|data: &str| {
    if let Ok(p) = Preset::from_str(data) {
        assert_eq!(Preset::from_str(&p.to_string()).ok(), Some(p));
    }
});
