#![no_main]
use libfuzzer_sys::fuzz_target;

use polyfus::codec::{decode_field_spec, field_spec_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = decode_field_spec(s) {
        let again = decode_field_spec(&field_spec_to_json(f.spec()).to_string()).expect("re-encoded spec decodes");
        assert_eq!(again, f);
    }
});
