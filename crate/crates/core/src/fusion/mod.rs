//! Fusion-theoretic data: the map `delta` to pairs of semilinear scalars,
//! the embedding `psi*`, local data at essential subgroups, the groups
//! `Out^0` and the descriptors of the named fusion systems.

pub mod psi;
pub mod system;

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::field::{Field, FieldElement};
use crate::parabolic::{GroupError, Parabolic, ParabolicElement};
use crate::sgroup::{PGroup, SElement, SKind};

/// The semilinear map `x -> scalar * x^{p^aut_exp}` of `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Gamma1 {
    pub aut_exp: u32,
    pub scalar: FieldElement,
}

impl Gamma1 {
    pub fn identity() -> Gamma1 {
        Gamma1 { aut_exp: 0, scalar: FieldElement::ONE }
    }

    pub fn apply(&self, f: &Field, x: FieldElement) -> FieldElement {
        f.mul(self.scalar, f.frobenius(x, self.aut_exp as i64))
    }

    /// `self` followed by `o`.
    pub fn then(&self, f: &Field, o: &Gamma1) -> Gamma1 {
        Gamma1 {
            aut_exp: (self.aut_exp + o.aut_exp) % f.m(),
            scalar: f.mul(o.scalar, f.frobenius(self.scalar, o.aut_exp as i64)),
        }
    }

    /// Recovers the semilinear map from its values on a prime-field basis.
    pub fn from_map(f: &Field, map: impl Fn(FieldElement) -> FieldElement) -> Option<Gamma1> {
        let s = map(f.one());
        (0..f.m()).map(|e| Gamma1 { aut_exp: e, scalar: s }).find(|g| {
            f.prime_basis().into_iter().all(|b| g.apply(f, b) == map(b))
        })
    }
}

/// Action of a normaliser element of `S` on `S/V` and on `Z(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DeltaImage {
    pub on_sv: Gamma1,
    pub on_z: Gamma1,
}

impl DeltaImage {
    pub fn then(&self, f: &Field, o: &DeltaImage) -> DeltaImage {
        DeltaImage { on_sv: self.on_sv.then(f, &o.on_sv), on_z: self.on_z.then(f, &o.on_z) }
    }

    pub fn is_trivial(&self) -> bool {
        self.on_sv == Gamma1::identity() && self.on_z == Gamma1::identity()
    }
}

/// `delta(t)` for `t` in `N_{P^*}(S)` on `S_n(q)`.
pub fn delta(g: &PGroup, t: &ParabolicElement) -> Result<DeltaImage, GroupError> {
    let SKind::Sn(_) = g.kind() else {
        return Err(GroupError::Unsupported("delta is defined for S_n; Z(S_Lambda) is not a line".into()));
    };
    let par = g.parabolic();
    par.validate(t)?;
    if !par.normalizes_s(t) {
        return Err(GroupError::NotInSubgroup("N_{P*}(S)"));
    }
    let f = g.field();
    let bad = || GroupError::Unsupported("induced map is not semilinear".into());
    let on_sv = Gamma1::from_map(f, |c| g.conj_by(&g.u(c), t).c).ok_or_else(bad)?;
    let on_z = Gamma1::from_map(f, |x| g.conj_by(&g.vbasis(0, x), t).v[0]).ok_or_else(bad)?;
    Ok(DeltaImage { on_sv, on_z })
}

/// Images of the generators of `S` under conjugation by `t`; two normaliser
/// elements induce the same automorphism exactly when these agree.
pub fn automorphism_signature(g: &PGroup, t: &ParabolicElement) -> Vec<SElement> {
    g.generators().iter().map(|s| g.conj_by(s, t)).collect()
}

/// Order of the group generated by the automorphisms that `gens` induce on
/// `S`, by closure on signatures.
pub fn generated_automorphism_order(g: &PGroup, gens: &[ParabolicElement]) -> u64 {
    let par = g.parabolic();
    let mut seen: HashSet<Vec<SElement>> = HashSet::new();
    let id = par.identity();
    seen.insert(automorphism_signature(g, &id));
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = par.mul(&x, s);
            if seen.insert(automorphism_signature(g, &y)) {
                queue.push_back(y);
            }
        }
    }
    seen.len() as u64
}

/// Order of the subgroup of `Gamma1 x Gamma1` generated by `delta(gens)`.
pub fn generated_delta_order(g: &PGroup, gens: &[ParabolicElement]) -> Result<u64, GroupError> {
    let f = g.field();
    let images: Vec<DeltaImage> = gens.iter().map(|t| delta(g, t)).collect::<Result<_, _>>()?;
    let id = DeltaImage { on_sv: Gamma1::identity(), on_z: Gamma1::identity() };
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for d in &images {
            let y = x.then(f, d);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Essential subgroups of the polynomial systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Essential {
    V,
    R,
    Q,
}

impl Essential {
    pub fn name(self) -> &'static str {
        match self {
            Essential::V => "V",
            Essential::R => "R",
            Essential::Q => "Q",
        }
    }
}

/// Torus elements lifting a generator of the `p'`-part that `E` contributes
/// to `Out^0`.
pub fn lift_generators(par: &Parabolic, e: Essential) -> Vec<ParabolicElement> {
    let f = par.field();
    let w = f.primitive_element();
    let wi = f.inv(w).expect("primitive element is a unit");
    let one = f.one();
    let lambda = matches!(par.ambient(), crate::parabolic::Ambient::PLambda);
    match e {
        // SL_2 torus
        Essential::V => vec![par.torus(0, one, w, wi)],
        // delta = (w^{-1}, w) on S_n; on S_Lambda the element (1, w^p, diag(1, w^{-1}))
        Essential::R if lambda => {
            vec![par.torus(0, f.pow(w, f.p() as i64).expect("unit"), one, wi)]
        }
        Essential::R => vec![par.torus(0, w, one, w)],
        // delta = (w^{-1}, 1)
        Essential::Q => vec![par.torus(0, one, one, w)],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Out0 {
    /// closure on automorphism signatures
    pub by_signature: u64,
    /// closure on delta images, `S_n` only
    pub by_delta: Option<u64>,
}

/// `|Out^0|` for the essential set `es` on `g`.
pub fn out0(g: &PGroup, es: &[Essential]) -> Result<Out0, GroupError> {
    let gens: Vec<ParabolicElement> = es.iter().flat_map(|&e| lift_generators(g.parabolic(), e)).collect();
    let by_signature = generated_automorphism_order(g, &gens);
    let by_delta = match g.kind() {
        SKind::Sn(_) => Some(generated_delta_order(g, &gens)?),
        SKind::SLambda => None,
    };
    Ok(Out0 { by_signature, by_delta })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Closed forms for `|Out^0|`.
pub fn out0_closed_form(kind: SKind, q: u64, es: &[Essential]) -> Option<u64> {
    let mut es = es.to_vec();
    es.sort();
    let q1 = q - 1;
    match (kind, es.as_slice()) {
        (SKind::Sn(n), [Essential::V, Essential::Q]) => Some(q1 * q1 / gcd(n as u64, q1)),
        (SKind::Sn(n), [Essential::V, Essential::R]) => Some(q1 * q1 / gcd(n as u64 + 2, q1)),
        (SKind::Sn(_), [Essential::R]) => Some(q1),
        (SKind::SLambda, [Essential::V, Essential::R]) => Some(q1 * q1),
        (SKind::SLambda, [Essential::R]) => Some(q1),
        _ => None,
    }
}

/// Whether `(n+1) p^k + 1` is nonzero modulo `p^m - 1` for `1 <= k <= m`.
pub fn no_essential_obstruction(p: u64, m: u32, n: u64) -> bool {
    let modulus = (p as u128).pow(m) - 1;
    (1..=m).all(|k| ((n as u128 + 1) * (p as u128).pow(k) + 1) % modulus != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_of_torus_elements() {
        let f = Field::new(3, 2).unwrap();
        for n in 1..=2 {
            let g = PGroup::sn(&f, n).unwrap();
            let par = g.parabolic();
            for (l, mu, nu) in [(2u64, 3u64, 5u64), (7, 1, 4), (1, 8, 8)] {
                let (l, mu, nu) = (f.element(l).unwrap(), f.element(mu).unwrap(), f.element(nu).unwrap());
                let t = par.torus(0, l, mu, nu);
                let d = delta(&g, &t).unwrap();
                assert_eq!(d.on_sv, Gamma1 { aut_exp: 0, scalar: f.div(mu, nu).unwrap() });
                assert_eq!(d.on_z, Gamma1 { aut_exp: 0, scalar: f.mul(l, f.pow(mu, n as i64).unwrap()) });
            }
        }
    }

    #[test]
    fn delta_is_multiplicative() {
        use rand::SeedableRng;
        let f = Field::new(5, 2).unwrap();
        let g = PGroup::sn(&f, 3).unwrap();
        let par = g.parabolic();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let s = par.random_borel(&mut rng);
            let t = par.random_borel(&mut rng);
            let lhs = delta(&g, &par.mul(&s, &t)).unwrap();
            let rhs = delta(&g, &s).unwrap().then(&f, &delta(&g, &t).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exclusion_arithmetic() {
        assert!(no_essential_obstruction(3, 2, 1));
        assert!(!no_essential_obstruction(3, 2, 6));
        for p in [3u64, 5, 7] {
            for m in 2..=3 {
                for n in 1..p {
                    assert!(no_essential_obstruction(p, m, n));
                }
            }
        }
    }

    #[test]
    fn out0_matches_closed_forms_at_q9() {
        let f = Field::new(3, 2).unwrap();
        for n in 1..=2usize {
            let g = PGroup::sn(&f, n).unwrap();
            let mut sets = vec![vec![Essential::V, Essential::R], vec![Essential::R]];
            if n >= 2 {
                sets.push(vec![Essential::V, Essential::Q]);
            }
            for es in sets {
                let o = out0(&g, &es).unwrap();
                let cf = out0_closed_form(g.kind(), 9, &es).unwrap();
                assert_eq!(o.by_signature, cf, "n={n} {es:?}");
                assert_eq!(o.by_delta, Some(cf), "n={n} {es:?}");
            }
        }
        let g = PGroup::s_lambda(&f).unwrap();
        let es = [Essential::V, Essential::R];
        assert_eq!(out0(&g, &es).unwrap().by_signature, 64);
    }
}
