//! Config files and sweep ranges must parse or fail cleanly.

#![no_main]

use libfuzzer_sys::fuzz_target;
use lplab_cli::config::{parse_config, parse_range};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(map) = parse_config(text, "fuzz") {
        assert!(map.keys().all(|k| !k.is_empty()));
    }
    let _ = parse_range(text);
});
