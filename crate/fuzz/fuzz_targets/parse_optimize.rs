#![no_main]

use libfuzzer_sys::fuzz_target;
use rfe_core::config::OptimizeConfig;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = OptimizeConfig::parse(data) {
        cfg.fom().expect("parsed fom must convert");
        cfg.grid().expect("parsed grid must convert");
        match cfg {
            OptimizeConfig::MinPower { .. } => {
                cfg.search_context().expect("parsed context must convert");
            }
            OptimizeConfig::MinEbOverNf { .. } => {
                assert!(!cfg.nf_axis().expect("parsed axis must convert").is_empty());
            }
            OptimizeConfig::MinEbOverBits { .. } => {
                cfg.bit_search().expect("parsed search must convert");
            }
        }
    }
});
