#![no_main]

use libfuzzer_sys::fuzz_target;
use rfe_core::config::FomSection;

fuzz_target!(|data: &str| {
    if let Ok(f) = FomSection::parse(data) {
        f.to_fom().expect("parsed fom must convert").validate().expect("converted fom must validate");
    }
});
