#![no_main]

use emt_core::io::parse_subset;
use emt_core::GenMetricSpace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let space = GenMetricSpace::discrete(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    if let Ok(s) = parse_subset(text, &space) {
        assert!(s.members().iter().all(|&i| i < space.len()));
    }
});
