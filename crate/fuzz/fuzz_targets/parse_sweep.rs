#![no_main]

use libfuzzer_sys::fuzz_target;
use rfe_core::config::SweepConfig;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = SweepConfig::parse(data) {
        if let Some(grid) = &cfg.grid {
            grid.to_grid().expect("parsed grid must convert");
        }
        cfg.fom().expect("parsed fom must convert");
        assert!(cfg.kt() > 0.0);
    }
});
