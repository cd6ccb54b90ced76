#![no_main]

use libfuzzer_sys::fuzz_target;
use satake_core::job;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(config) = job::parse_config(text) else {
        return;
    };
    // Validation builds the root datum and checks every shape; it must reject
    // bad input with an error, never a panic.
    let _ = config.validate();
});
