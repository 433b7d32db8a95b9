//! Explicit homomorphisms between polynomial groups and tools to certify them.

use rand::Rng;

use crate::field::FieldElement;
use crate::parabolic::GroupError;
use crate::sgroup::{PGroup, SElement, SKind, Subset};

/// `gamma : S_n -> S_{n-1}`, `(c, sum l_i x^{n-i} y^i) -> (c, sum i l_i x^{n-i} y^{i-1})`.
pub fn gamma(src: &PGroup, a: &SElement) -> SElement {
    let f = src.field();
    let n = src.degree();
    let v = (1..=n).map(|i| f.mul(f.from_int(i as i64), a.v[i])).collect();
    SElement { c: a.c, v }
}

/// `S_Lambda -> S_{p-1}` with kernel the line of the last dual coordinate;
/// the dual coordinate `j < p` goes to coordinate `p-1-j`.
pub fn lambda_to_sp1(src: &PGroup, a: &SElement) -> SElement {
    let p = src.degree();
    SElement { c: a.c, v: (0..p).map(|k| a.v[p - 1 - k]).collect() }
}

/// Keeps the first `k + 1` coordinates: `U C_k -> S_k`.
pub fn truncate(a: &SElement, k: usize) -> SElement {
    SElement { c: a.c, v: a.v[..=k].to_vec() }
}

pub fn gamma_target(src: &PGroup) -> Result<PGroup, GroupError> {
    match src.kind() {
        SKind::Sn(n) if n >= 2 && n < src.field().p() as usize => PGroup::sn(src.field(), n - 1),
        _ => Err(GroupError::Unsupported("gamma is defined on S_n with 2 <= n <= p-1".into())),
    }
}

pub fn lambda_target(src: &PGroup) -> Result<PGroup, GroupError> {
    match src.kind() {
        SKind::SLambda => PGroup::sn(src.field(), src.field().p() as usize - 1),
        _ => Err(GroupError::Unsupported("the quotient is defined on S_Lambda".into())),
    }
}

/// Counts for a map restricted to an enumerated domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomStats {
    /// pairs `(x, s)` with `s` a generator where `f(xs) = f(x) f(s)` was tested
    pub pairs: u64,
    pub failures: u64,
    pub domain_order: u64,
    pub kernel_order: u64,
    pub image_order: u64,
}

impl HomStats {
    pub fn is_hom(&self) -> bool {
        self.failures == 0
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_order == 1
    }
}

/// Tests `f(xs) = f(x) f(s)` for every `x` in the domain and every generator
/// `s`, which proves `f` is a homomorphism, and counts kernel and image.
pub fn hom_certificate(
    src: &PGroup,
    domain: &Subset,
    gens: &[SElement],
    dst: &PGroup,
    f: impl Fn(&SElement) -> SElement,
) -> Result<HomStats, GroupError> {
    dst.require_enumerable()?;
    let mut image = Subset::empty(dst);
    let mut failures = 0;
    let mut kernel = 0;
    let fg: Vec<SElement> = gens.iter().map(&f).collect();
    for idx in domain.indices() {
        let x = src.decode(idx);
        let fx = f(&x);
        if dst.is_identity(&fx) {
            kernel += 1;
        }
        image.insert(dst.encode(&fx));
        for (s, fs) in gens.iter().zip(&fg) {
            if f(&src.mul(&x, s)) != dst.mul(&fx, fs) {
                failures += 1;
            }
        }
    }
    Ok(HomStats {
        pairs: domain.len() * gens.len() as u64,
        failures,
        domain_order: domain.len(),
        kernel_order: kernel,
        image_order: image.len(),
    })
}

/// Random-pair test of the homomorphism law.
pub fn hom_sampled<R: Rng>(
    src: &PGroup,
    dst: &PGroup,
    sample: impl Fn(&mut R) -> SElement,
    f: impl Fn(&SElement) -> SElement,
    pairs: usize,
    rng: &mut R,
) -> u64 {
    let mut failures = 0;
    for _ in 0..pairs {
        let a = sample(rng);
        let b = sample(rng);
        if f(&src.mul(&a, &b)) != dst.mul(&f(&a), &f(&b)) {
            failures += 1;
        }
    }
    failures
}

/// Whether `c` ranges over all of `K` on the generators' `F_p`-span.
pub fn covers_u(g: &PGroup, gens: &[SElement]) -> bool {
    let f = g.field();
    let fp = crate::field::Field::new(f.p(), 1).expect("prime field");
    let rows: Vec<Vec<FieldElement>> =
        gens.iter().map(|s| f.coeffs(s.c).into_iter().map(|x| FieldElement(x)).collect()).collect();
    if rows.is_empty() {
        return false;
    }
    crate::linalg::Matrix::from_rows(&rows).rank(&fp) == f.m() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::sgroup::closure;

    #[test]
    fn gamma_is_a_surjection_with_kernel_z() {
        let f = Field::new(3, 2).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        let t = gamma_target(&g).unwrap();
        let all = closure(&g, &g.generators()).unwrap();
        let st = hom_certificate(&g, &all, &g.generators(), &t, |a| gamma(&g, a)).unwrap();
        assert!(st.is_hom());
        assert_eq!(st.kernel_order, 9);
        assert_eq!(st.image_order as u128, t.order());
    }

    #[test]
    fn lambda_quotient_small() {
        let f = Field::new(3, 1).unwrap();
        let g = PGroup::s_lambda(&f).unwrap();
        let t = lambda_target(&g).unwrap();
        let all = closure(&g, &g.generators()).unwrap();
        let st = hom_certificate(&g, &all, &g.generators(), &t, |a| lambda_to_sp1(&g, a)).unwrap();
        assert!(st.is_hom());
        assert_eq!(st.kernel_order, 3);
        assert_eq!(st.image_order as u128, t.order());
    }
}
