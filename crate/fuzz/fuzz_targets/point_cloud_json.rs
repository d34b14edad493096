//! Point cloud JSON must parse or fail cleanly, and accepted clouds round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use lplab::sets::io::{parse_points_json, points_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_points_json(text, "fuzz") {
        assert_eq!(parse_points_json(&points_to_json(&set), "fuzz").unwrap(), set);
    }
});
