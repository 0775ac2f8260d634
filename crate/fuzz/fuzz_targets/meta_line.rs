#![no_main]

use landau_cli::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::parse_meta(text) {
        assert_eq!(RunConfig::parse_meta(&cfg.meta_line()).expect("re-parses"), cfg);
    }
});
