#![no_main]

use emt_core::io::{parse_presheaf, write_presheaf};
use emt_core::{GenMetricSpace, SpaceKind};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let space = GenMetricSpace::from_f64(
        &["a", "b", "c"],
        &[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0], &[2.0, 1.0, 0.0]],
        SpaceKind::ClassicalMetric,
    )
    .unwrap();
    let Ok(p) = parse_presheaf(text, &space) else { return };
    let again = parse_presheaf(&write_presheaf(&p), &space).expect("written presheaf reparses");
    assert_eq!(again, p);
});
