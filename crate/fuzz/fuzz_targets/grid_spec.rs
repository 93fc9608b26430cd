#![no_main]

use emt_core::io::{parse_axis_spec, parse_grid_spec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_grid_spec(text) {
        let values = spec.values().expect("accepted specs build");
        assert_eq!(values.len(), spec.count);
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }
    let _ = parse_axis_spec(text);
});
