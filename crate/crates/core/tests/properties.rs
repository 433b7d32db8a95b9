use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyfus::codec;
use polyfus::field::{Field, FieldSpec};
use polyfus::fusion::psi::{in_domain, psi_star};
use polyfus::fusion::system::describe_system;
use polyfus::fusion::{delta, Essential};
use polyfus::parabolic::{Ambient, Parabolic};
use polyfus::poly::{DTriple, Mat2, ModuleKind, ModuleVector};
use polyfus::sgroup::{closure, PGroup, SKind};
use polyfus::structure::series::{central_series, Mode, SeriesKind};
use polyfus::verify::{self, RunConfig, Selection, Tier};

const FIELDS: &[(u32, u32)] = &[(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)];

fn field(i: usize) -> Field {
    let (p, m) = FIELDS[i % FIELDS.len()];
    Field::new(p, m).unwrap()
}

fn elem(f: &Field, i: u64) -> polyfus::field::FieldElement {
    f.element(i % f.q()).unwrap()
}

/// A small group: `S_n(q)` with `1 <= n <= p` or `S_Lambda(q)`.
fn group(fi: usize, ni: usize) -> PGroup {
    let f = field(fi);
    let p = f.p() as usize;
    let kind = if ni % (p + 1) == p { SKind::SLambda } else { SKind::Sn(ni % (p + 1) + 1) };
    PGroup::new(f, kind).unwrap()
}

fn ambient(ai: usize, p: usize) -> Ambient {
    match ai % 3 {
        0 => Ambient::Pn(1),
        1 => Ambient::Pn(p - 1),
        _ => Ambient::PLambda,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(fi in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(fi);
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }

    #[test]
    fn frobenius_order_divides_m(fi in 0usize..6, a in any::<u64>()) {
        let f = field(fi);
        let a = elem(&f, a);
        prop_assert_eq!(f.pow(a, f.q() as i64).unwrap(), a);
        prop_assert_eq!(f.frobenius(a, f.m() as i64), a);
    }

    #[test]
    fn coefficient_tuples(fi in 0usize..6, a in any::<u64>()) {
        let f = field(fi);
        let a = elem(&f, a);
        let cs = f.coeffs(a);
        prop_assert_eq!(cs.len(), f.m() as usize);
        prop_assert!(cs.iter().all(|&c| c < f.p()));
        prop_assert_eq!(f.from_coeffs(&cs).unwrap(), a);
    }

    #[test]
    fn reducible_quadratics_are_rejected(pi in 0usize..3, a in 0u64..7, b in 0u64..7) {
        let p = [3u64, 5, 7][pi];
        let (a, b) = (a % p, b % p);
        // (x + a)(x + b) = x^2 + (a + b) x + ab
        let modulus = vec![(a * b % p) as u32, ((a + b) % p) as u32, 1];
        let built = Field::from_spec(FieldSpec { p: p as u32, m: 2, modulus });
        prop_assert!(built.is_err());
    }

    #[test]
    fn module_vectors_form_a_group(fi in 0usize..6, ai in 0usize..3, seed in any::<u64>()) {
        let f = field(fi);
        let p = f.p() as usize;
        let par = Parabolic::new(f.clone(), ambient(ai, p)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = par.random_p_star(&mut rng).vec;
        let w = par.random_p_star(&mut rng).vec;
        let want = match par.module() {
            ModuleKind::Vn(n) => n + 1,
            ModuleKind::Lambda => p + 1,
        };
        prop_assert_eq!(v.coeffs.len(), want);
        prop_assert_eq!(v.add(&f, &w), w.add(&f, &v));
        prop_assert_eq!(v.add(&f, &ModuleVector::zero(&f, par.module())), v.clone());
        prop_assert!(v.add(&f, &v.neg(&f)).is_zero());
    }

    #[test]
    fn d_triples(fi in 0usize..6, seed in any::<u64>(), x in any::<u64>()) {
        let f = field(fi);
        let par = Parabolic::new(f.clone(), Ambient::Pn(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| par.random_p_star(&mut rng).d);
        prop_assert!(a.validate(&f).is_ok());
        prop_assert_eq!(a.mul(&f, &b).mul(&f, &c), a.mul(&f, &b.mul(&f, &c)));
        prop_assert!(a.mul(&f, &a.inv(&f)).is_identity());
        // a rank-one matrix is rejected
        let s = elem(&f, x);
        let singular = DTriple::linear(f.one(), Mat2::new(f.one(), s, f.zero(), f.zero()));
        prop_assert!(singular.validate(&f).is_err());
    }

    #[test]
    fn parabolic_group_axioms(fi in 0usize..6, ai in 0usize..3, seed in any::<u64>()) {
        let f = field(fi);
        let par = Parabolic::new(f.clone(), ambient(ai, f.p() as usize)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| par.random_p_star(&mut rng));
        prop_assert!(par.in_p_star(&a));
        prop_assert_eq!(par.mul(&par.mul(&a, &b), &c), par.mul(&a, &par.mul(&b, &c)));
        prop_assert!(par.is_identity(&par.mul(&a, &par.inv(&a))));
        prop_assert_eq!(par.mul(&a, &par.identity()), a.clone());
        // right action: (v.a).b = v.(ab)
        let v = &c.vec;
        prop_assert_eq!(par.act(&par.act(v, &a.d), &b.d), par.act(v, &a.d.mul(&f, &b.d)));
        // V is normal in P*
        let conj = par.conj(&par.from_vec(c.vec.clone()), &a);
        prop_assert!(conj.d.is_identity());
    }

    #[test]
    fn s_embeds_in_the_parabolic(fi in 0usize..6, ni in 0usize..8, seed in any::<u64>()) {
        let g = group(fi, ni);
        let par = g.parabolic();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (g.random(&mut rng), g.random(&mut rng));
        let (pa, pb) = (g.to_parabolic(&a), g.to_parabolic(&b));
        prop_assert!(par.in_s(&pa));
        prop_assert_eq!(g.from_parabolic(&pa).unwrap(), a.clone());
        prop_assert_eq!(g.to_parabolic(&g.mul(&a, &b)), par.mul(&pa, &pb));
        prop_assert_eq!(g.to_parabolic(&g.inv(&a)), par.inv(&pa));
        prop_assert!(g.is_identity(&g.mul(&a, &g.inv(&a))));
    }

    #[test]
    fn encoding_is_a_bijection(fi in 0usize..6, ni in 0usize..8, seed in any::<u64>()) {
        let g = group(fi, ni);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = g.random(&mut rng);
        let idx = g.encode(&a);
        prop_assert!((idx as u128) < g.order());
        prop_assert_eq!(g.decode(idx), a);
    }

    #[test]
    fn generated_subgroups_are_closed(ni in 0usize..3, seed in any::<u64>(), k in 1usize..3) {
        let f = Field::new(3, 1).unwrap();
        let g = PGroup::new(f, [SKind::Sn(1), SKind::Sn(2), SKind::SLambda][ni]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<_> = (0..k).map(|_| g.random(&mut rng)).collect();
        let h = closure(&g, &gens).unwrap();
        prop_assert_eq!(g.order() % h.len() as u128, 0);
        let elems: Vec<_> = h.indices().take(40).map(|i| g.decode(i)).collect();
        for x in &elems {
            prop_assert!(h.contains(g.encode(&g.inv(x))));
            for y in &elems {
                prop_assert!(h.contains(g.encode(&g.mul(x, y))));
            }
        }
    }

    #[test]
    fn series_are_strictly_nested(fi in 0usize..6, ni in 0usize..8, ki in 0usize..4) {
        let g = group(fi, ni);
        let kind = [SeriesKind::UpperCentral, SeriesKind::LowerCentral, SeriesKind::WeightFiltration, SeriesKind::CommutatorChain][ki];
        if let Ok(r) = central_series(&g, kind, Mode::Linear) {
            let o = &r.orders;
            let increasing = o.windows(2).all(|w| w[0] < w[1]);
            let decreasing = o.windows(2).all(|w| w[0] > w[1]);
            prop_assert!(increasing || decreasing, "{:?}", o);
            prop_assert!(o.iter().all(|&x| g.order() % x == 0));
        }
    }

    #[test]
    fn codecs_roundtrip(fi in 0usize..6, ni in 0usize..8, seed in any::<u64>()) {
        let g = group(fi, ni);
        let f = g.field();
        let par = g.parabolic();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(&codec::decode_field_spec(&codec::field_spec_to_json(f.spec()).to_string()).unwrap(), f);
        let a = g.random(&mut rng);
        prop_assert_eq!(codec::decode_s_element(&g, &codec::s_element_to_json(&g, &a).to_string()).unwrap(), a);
        let t = par.random_p_star(&mut rng);
        prop_assert_eq!(&codec::decode_parabolic(par, &codec::parabolic_to_json(par, &t).to_string()).unwrap(), &t);
        let v = t.vec;
        prop_assert_eq!(codec::decode_module_vector(f, &codec::module_vector_to_json(f, &v).to_string()).unwrap(), v);
        let name = verify::target_name(Some(g.kind()));
        prop_assert_eq!(codec::parse_target(&name).unwrap(), g.kind());
    }

    #[test]
    fn psi_star_image_is_invertible(fi in 0usize..6, seed in any::<u64>()) {
        let f = field(fi);
        let par = Parabolic::new(f.clone(), Ambient::PLambda).unwrap();
        let p = f.p() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = par.random_borel(&mut rng);
        for x in &mut t.vec.coeffs[..p - 2] {
            *x = f.zero();
        }
        prop_assert!(in_domain(&par, &t));
        let m = psi_star(&par, &t).unwrap().mat;
        let minor = f.sub(f.mul(m.get(1, 1), m.get(2, 2)), f.mul(m.get(1, 2), m.get(2, 1)));
        prop_assert!(!f.mul(f.mul(m.get(0, 0), minor), m.get(3, 3)).is_zero());
        for (i, j) in [(0, 1), (0, 2), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2)] {
            prop_assert!(m.get(i, j).is_zero());
        }
    }

    #[test]
    fn delta_lands_in_gamma_l1(fi in 0usize..6, n in 1usize..4, seed in any::<u64>()) {
        let f = field(fi);
        let g = PGroup::sn(&f, n.min(f.p() as usize - 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = g.parabolic().random_borel(&mut rng);
        let d = delta(&g, &t).unwrap();
        for x in [d.on_sv, d.on_z] {
            prop_assert!(x.aut_exp < f.m());
            prop_assert!(!x.scalar.is_zero());
        }
    }

    #[test]
    fn descriptors_have_allowed_essentials(pi in 0usize..3, m in 2u32..4, n in 1usize..7, fam in 0usize..5) {
        let p = [3u32, 5, 7][pi];
        let q = (p as u64).pow(m);
        let name = match fam {
            0 => format!("F*({n},{q},R)"),
            1 => format!("F*({n},{q},Q)"),
            2 => format!("F*({n},{q},R)_P"),
            3 => format!("F*_Lambda({q})"),
            _ => format!("F*_Lambda({q})_P"),
        };
        if let Ok(d) = describe_system(&name, None, None, None) {
            let es = &d.essentials;
            let allowed = match d.kind() {
                SKind::Sn(_) => [vec![Essential::V, Essential::R], vec![Essential::V, Essential::Q], vec![Essential::R]].contains(es),
                SKind::SLambda => [vec![Essential::V, Essential::R], vec![Essential::R]].contains(es),
            };
            prop_assert!(allowed, "{name}: {es:?}");
            prop_assert_eq!(name.ends_with("_P"), !es.contains(&Essential::V));
        } else {
            prop_assert!(n >= p as usize || (fam == 1 && n < 2));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn sampled_runs_are_reproducible(seed in any::<u64>(), si in 0usize..3) {
        let suite = ["gamma-iso", "psi-star", "r-cap"][si];
        let sel = Selection { p: Some(5), m: Some(2), n: Some(2), system: None };
        let cfg = RunConfig { seed, tier: Some(Tier::Sampled) };
        let a = verify::run_all(&verify::plan(suite, &sel, &cfg).unwrap());
        let b = verify::run_all(&verify::plan(suite, &sel, &cfg).unwrap());
        prop_assert_eq!(a, b);
    }
}
