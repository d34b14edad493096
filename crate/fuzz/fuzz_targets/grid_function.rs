//! Grid function files must parse or fail cleanly, and accepted files round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use lplab::functions::io::{write_grid_function, parse_grid_function};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_grid_function(text, "fuzz") {
        let again = parse_grid_function(&write_grid_function(&file.function, file.s), "fuzz").unwrap();
        assert_eq!(again, file);
    }
});
