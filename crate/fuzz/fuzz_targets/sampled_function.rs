#![no_main]

use emt_core::io::{parse_sampled_function, write_sampled_function};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(f) = parse_sampled_function(text) else { return };
    let again = parse_sampled_function(&write_sampled_function(&f)).expect("written function reparses");
    assert_eq!(again, f);
});
