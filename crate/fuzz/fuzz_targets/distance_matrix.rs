#![no_main]

use emt_core::io::{read_space, write_space};
use emt_core::SpaceKind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(space) = read_space(text, SpaceKind::RplusCategory) else { return };
    // validation is cubic; keep the inputs it sees small
    if space.len() <= 32 {
        let _ = space.validate();
    }
    let again = read_space(&write_space(&space), SpaceKind::RplusCategory).expect("written space reparses");
    assert_eq!(again, space);
});
