#![no_main]
use libfuzzer_sys::fuzz_target;

use polyfus::codec::{decode_module_vector, module_vector_to_json};
use polyfus::field::Field;

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let (p, m) = [(3, 1), (3, 2), (5, 1), (7, 2)][pick as usize % 4];
    let f = Field::new(p, m).unwrap();
    if let Ok(v) = decode_module_vector(&f, s) {
        let again = decode_module_vector(&f, &module_vector_to_json(&f, &v).to_string()).unwrap();
        assert_eq!(again, v);
    }
});
