#![no_main]

use libfuzzer_sys::fuzz_target;
use nonlocal_pencil::literal::{parse_angle, parse_rational, parse_scalar};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_scalar(text);
    let _ = parse_angle(text);
    if let Ok(q) = parse_rational(text) {
        assert_eq!(parse_rational(&q.to_string()), Ok(q));
    }
});
