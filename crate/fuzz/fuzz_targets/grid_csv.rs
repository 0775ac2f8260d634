#![no_main]

use landau_core::spectral::GridFunction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(grid) = GridFunction::from_csv(text) else { return };
    let back = GridFunction::from_csv(&grid.to_csv()).expect("serialized form re-parses");
    assert_eq!(back.values().len(), grid.values().len());
    let _ = grid.interpolate(grid.grid().center());
});
