#![no_main]
use libfuzzer_sys::fuzz_target;

use polyfus::codec::parse_target;
use polyfus::verify::target_name;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(kind) = parse_target(s) {
        assert_eq!(parse_target(&target_name(Some(kind))).unwrap(), kind);
    }
});
