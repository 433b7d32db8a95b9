#![no_main]
use libfuzzer_sys::fuzz_target;

use polyfus::codec::{decode_s_element, s_element_to_json};
use polyfus::field::Field;
use polyfus::sgroup::{PGroup, SKind};

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let (p, m) = [(3, 1), (3, 2), (5, 1)][pick as usize % 3];
    let kind = [SKind::Sn(1), SKind::Sn(2), SKind::SLambda][(pick as usize / 3) % 3];
    let g = PGroup::new(Field::new(p, m).unwrap(), kind).unwrap();
    if let Ok(a) = decode_s_element(&g, s) {
        let again = decode_s_element(&g, &s_element_to_json(&g, &a).to_string()).unwrap();
        assert_eq!(again, a);
        assert_eq!(g.decode(g.encode(&a)), a);
    }
});
