#![no_main]

use libfuzzer_sys::fuzz_target;
use rfe_core::config::ScenarioConfig;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = ScenarioConfig::parse(data) {
        let s = cfg.scenario().expect("parsed scenario must convert");
        s.validate().expect("converted scenario must validate");
        cfg.knob_values().expect("parsed knobs must convert");
        cfg.fom().expect("parsed fom must convert");
        cfg.array().expect("parsed array must convert");
    }
});
