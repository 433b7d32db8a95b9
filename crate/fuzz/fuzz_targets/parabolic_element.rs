#![no_main]
use libfuzzer_sys::fuzz_target;

use polyfus::codec::{decode_parabolic, parabolic_to_json};
use polyfus::field::Field;
use polyfus::parabolic::{Ambient, Parabolic};

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let (p, m) = [(3, 1), (3, 2), (5, 2)][pick as usize % 3];
    let ambient = [Ambient::Pn(1), Ambient::Pn(2), Ambient::PLambda][(pick as usize / 3) % 3];
    let par = Parabolic::new(Field::new(p, m).unwrap(), ambient).unwrap();
    if let Ok(g) = decode_parabolic(&par, s) {
        par.validate(&g).expect("decoded elements are valid");
        let again = decode_parabolic(&par, &parabolic_to_json(&par, &g).to_string()).unwrap();
        assert_eq!(again, g);
        assert!(par.is_identity(&par.mul(&g, &par.inv(&g))));
    }
});
