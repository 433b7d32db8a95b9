#![no_main]
use libfuzzer_sys::fuzz_target;

use polyfus::fusion::system::describe_system;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = describe_system(s, None, None, None) {
        // the canonical name describes the same system
        assert_eq!(describe_system(&d.name, None, None, None).unwrap(), d);
    }
});
