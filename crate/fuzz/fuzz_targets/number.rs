#![no_main]

use emt_core::io::{format_g17, parse_number};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_number(text) {
        assert_eq!(parse_number(&format_g17(x.to_f64())), Ok(x));
    }
});
