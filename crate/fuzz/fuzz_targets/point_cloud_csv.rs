//! Point cloud CSV must parse or fail cleanly, and accepted clouds round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use lplab::sets::io::{parse_points_csv, points_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = parse_points_csv(text, "fuzz") {
        assert_eq!(parse_points_csv(&points_to_csv(&set), "fuzz").unwrap(), set);
    }
});
