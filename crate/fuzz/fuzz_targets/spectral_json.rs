#![no_main]

use landau_core::spectral::SpectralFunction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = SpectralFunction::from_json(text) else { return };
    for xi in [-1e3, -1.0, 0.0, 0.5, 7.0] {
        let _ = spec.eval(xi);
    }
    let back = SpectralFunction::from_json(&spec.to_json()).expect("serialized form re-parses");
    assert_eq!(back.kind_tag(), spec.kind_tag());
});
