#![no_main]

use landau_cli::{parse_config, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(settings) = parse_config(text) else { return };
    if let Ok(cfg) = RunConfig::from_settings(settings) {
        let again = RunConfig::parse_meta(&cfg.meta_line()).expect("meta line re-parses");
        assert_eq!(again, cfg);
    }
});
