//! Dense arithmetic in `S_n(q) = V_n(q) U` and `S_Lambda(q) = Lambda(q) U`,
//! where `U = { [[1, 0], [c, 1]] }`.
//!
//! Elements are pairs `(c, v)`. When the group is small enough every element
//! also has an integer index `c + q * (v_0 + q v_1 + ...)`, which is what
//! [`Subset`] stores.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::field::{Field, FieldElement};
use crate::linalg::{vec_add, vec_mul, vec_neg, Matrix, Subspace};
use crate::parabolic::{Ambient, GroupError, Parabolic, ParabolicElement};
use crate::poly::{self, DTriple, Mat2, ModuleKind, ModuleVector};

/// Default bound on the number of elements any enumeration may visit.
pub const DEFAULT_SIZE_CAP: u64 = 1_000_000;

/// The enumeration cap, overridable through `POLYFUS_SIZE_CAP`.
pub fn size_cap() -> u64 {
    std::env::var("POLYFUS_SIZE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SKind {
    Sn(usize),
    SLambda,
}

impl SKind {
    pub fn ambient(self) -> Ambient {
        match self {
            SKind::Sn(n) => Ambient::Pn(n),
            SKind::SLambda => Ambient::PLambda,
        }
    }

    pub fn name(self) -> String {
        match self {
            SKind::Sn(n) => format!("S_{n}"),
            SKind::SLambda => "S_Lambda".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SElement {
    pub c: FieldElement,
    pub v: Vec<FieldElement>,
}

#[derive(Debug)]
struct Inner {
    par: Parabolic,
    kind: SKind,
    dim: usize,
    /// action matrix of `u_c` on the module, indexed by `c`, when `q` is small
    u_mats: Option<Vec<Matrix>>,
}

/// The group `S`. Cheap to clone.
#[derive(Debug, Clone)]
pub struct PGroup(Arc<Inner>);

const U_TABLE_LIMIT: u64 = 1 << 12;

impl PGroup {
    pub fn new(field: Field, kind: SKind) -> Result<PGroup, GroupError> {
        let par = Parabolic::new(field.clone(), kind.ambient())?;
        let dim = par.dim();
        if (field.q() as u128).checked_pow(dim as u32 + 1).is_none() {
            return Err(GroupError::Unsupported(format!("|S| = {}^{} does not fit in 128 bits", field.q(), dim + 1)));
        }
        let u_mats = (field.q() <= U_TABLE_LIMIT).then(|| {
            field.elements().map(|c| u_matrix(&field, par.module(), c)).collect()
        });
        Ok(PGroup(Arc::new(Inner { par, kind, dim, u_mats })))
    }

    pub fn sn(field: &Field, n: usize) -> Result<PGroup, GroupError> {
        PGroup::new(field.clone(), SKind::Sn(n))
    }

    pub fn s_lambda(field: &Field) -> Result<PGroup, GroupError> {
        PGroup::new(field.clone(), SKind::SLambda)
    }

    pub fn field(&self) -> &Field {
        self.0.par.field()
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.0.par
    }

    pub fn kind(&self) -> SKind {
        self.0.kind
    }

    pub fn module(&self) -> ModuleKind {
        self.0.par.module()
    }

    /// `K`-dimension of `V`.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// `n` for `S_n`, `p` for `S_Lambda`.
    pub fn degree(&self) -> usize {
        self.dim() - 1
    }

    pub fn order(&self) -> u128 {
        (self.field().q() as u128).pow(self.dim() as u32 + 1)
    }

    pub fn v_order(&self) -> u128 {
        (self.field().q() as u128).pow(self.dim() as u32)
    }

    pub fn is_enumerable(&self) -> bool {
        self.order() <= size_cap() as u128
    }

    pub fn require_enumerable(&self) -> Result<(), GroupError> {
        let cap = size_cap();
        if self.order() > cap as u128 {
            return Err(GroupError::TooLarge { order: self.order(), cap });
        }
        Ok(())
    }

    /// `v . u_c` as a matrix.
    pub fn u_mat(&self, c: FieldElement) -> std::borrow::Cow<'_, Matrix> {
        match &self.0.u_mats {
            Some(t) => std::borrow::Cow::Borrowed(&t[c.index() as usize]),
            None => std::borrow::Cow::Owned(u_matrix(self.field(), self.module(), c)),
        }
    }

    pub fn identity(&self) -> SElement {
        SElement { c: FieldElement::ZERO, v: vec![FieldElement::ZERO; self.dim()] }
    }

    pub fn u(&self, c: FieldElement) -> SElement {
        SElement { c, v: vec![FieldElement::ZERO; self.dim()] }
    }

    pub fn vel(&self, v: Vec<FieldElement>) -> SElement {
        debug_assert_eq!(v.len(), self.dim());
        SElement { c: FieldElement::ZERO, v }
    }

    /// `s` times the `i`-th basis vector of `V`.
    pub fn vbasis(&self, i: usize, s: FieldElement) -> SElement {
        let mut v = vec![FieldElement::ZERO; self.dim()];
        v[i] = s;
        self.vel(v)
    }

    pub fn act_u(&self, v: &[FieldElement], c: FieldElement) -> Vec<FieldElement> {
        if c.is_zero() {
            return v.to_vec();
        }
        vec_mul(self.field(), v, &self.u_mat(c))
    }

    /// `(c, v)(c', v') = (c + c', v . u_{c'} + v')`
    pub fn mul(&self, a: &SElement, b: &SElement) -> SElement {
        let f = self.field();
        SElement { c: f.add(a.c, b.c), v: vec_add(f, &self.act_u(&a.v, b.c), &b.v) }
    }

    pub fn inv(&self, a: &SElement) -> SElement {
        let f = self.field();
        let nc = f.neg(a.c);
        SElement { c: nc, v: vec_neg(f, &self.act_u(&a.v, nc)) }
    }

    pub fn pow(&self, a: &SElement, e: u64) -> SElement {
        let mut acc = self.identity();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `b^{-1} a b`
    pub fn conj(&self, a: &SElement, b: &SElement) -> SElement {
        self.mul(&self.mul(&self.inv(b), a), b)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`
    pub fn comm(&self, a: &SElement, b: &SElement) -> SElement {
        self.mul(&self.mul(&self.inv(a), &self.inv(b)), &self.mul(a, b))
    }

    pub fn is_identity(&self, a: &SElement) -> bool {
        a.c.is_zero() && a.v.iter().all(|x| x.is_zero())
    }

    pub fn in_v(&self, a: &SElement) -> bool {
        a.c.is_zero()
    }

    /// Element order, always a power of `p`.
    pub fn element_order(&self, a: &SElement) -> u64 {
        let p = self.field().p() as u64;
        let mut k = 1u64;
        let mut x = a.clone();
        while !self.is_identity(&x) {
            x = self.pow(&x, p);
            k *= p;
        }
        k
    }

    pub fn encode(&self, a: &SElement) -> u64 {
        let q = self.field().q();
        let mut idx = 0u64;
        for &x in a.v.iter().rev() {
            idx = idx * q + x.index() as u64;
        }
        idx * q + a.c.index() as u64
    }

    pub fn decode(&self, mut idx: u64) -> SElement {
        let q = self.field().q();
        let c = FieldElement((idx % q) as u32);
        idx /= q;
        let v = (0..self.dim())
            .map(|_| {
                let x = FieldElement((idx % q) as u32);
                idx /= q;
                x
            })
            .collect();
        SElement { c, v }
    }

    pub fn to_parabolic(&self, a: &SElement) -> ParabolicElement {
        ParabolicElement {
            d: DTriple::linear(FieldElement::ONE, Mat2::lower_unipotent(a.c)),
            vec: ModuleVector { kind: self.module(), coeffs: a.v.clone() },
        }
    }

    pub fn from_parabolic(&self, g: &ParabolicElement) -> Result<SElement, GroupError> {
        let par = self.parabolic();
        par.validate(g)?;
        if !par.in_s(g) {
            return Err(GroupError::NotInSubgroup("S"));
        }
        Ok(SElement { c: g.d.mat.c, v: g.vec.coeffs.clone() })
    }

    /// `t^{-1} a t` for `t` normalizing `S`.
    pub fn conj_by(&self, a: &SElement, t: &ParabolicElement) -> SElement {
        let par = self.parabolic();
        let g = par.conj(&self.to_parabolic(a), t);
        self.from_parabolic(&g).expect("conjugating element normalizes S")
    }

    /// `F_p`-generators of `U`.
    pub fn u_generators(&self) -> Vec<SElement> {
        self.field().prime_basis().into_iter().map(|b| self.u(b)).collect()
    }

    /// `F_p`-generators of the `K`-subspace `w` of `V`.
    pub fn subspace_generators(&self, w: &Subspace) -> Vec<SElement> {
        let f = self.field();
        let mut out = Vec::new();
        for b in &w.basis {
            for &s in &f.prime_basis() {
                out.push(self.vel(crate::linalg::vec_scale(f, b, s)));
            }
        }
        out
    }

    pub fn v_generators(&self) -> Vec<SElement> {
        self.subspace_generators(&Subspace::whole(self.field(), self.dim()))
    }

    pub fn generators(&self) -> Vec<SElement> {
        let mut g = self.u_generators();
        g.extend(self.v_generators());
        g
    }

    /// Uniform random element.
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> SElement {
        let q = self.field().q();
        SElement {
            c: FieldElement(rng.gen_range(0..q) as u32),
            v: (0..self.dim()).map(|_| FieldElement(rng.gen_range(0..q) as u32)).collect(),
        }
    }

    pub fn random_v<R: rand::Rng>(&self, rng: &mut R) -> SElement {
        let mut s = self.random(rng);
        s.c = FieldElement::ZERO;
        s
    }

    pub fn format(&self, a: &SElement) -> String {
        let f = self.field();
        let v = ModuleVector { kind: self.module(), coeffs: a.v.clone() };
        format!("(u[{}], {})", f.format(a.c), v.format(f))
    }
}

fn u_matrix(f: &Field, kind: ModuleKind, c: FieldElement) -> Matrix {
    poly::rho(f, kind, &DTriple::linear(FieldElement::ONE, Mat2::lower_unipotent(c)))
}

/// A set of elements of an enumerable [`PGroup`], stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    bits: FixedBitSet,
    len: u64,
}

impl Subset {
    pub fn empty(g: &PGroup) -> Subset {
        Subset { bits: FixedBitSet::with_capacity(g.order() as usize), len: 0 }
    }

    pub fn insert(&mut self, idx: u64) -> bool {
        let i = idx as usize;
        if self.bits.contains(i) {
            return false;
        }
        self.bits.insert(i);
        self.len += 1;
        true
    }

    pub fn contains(&self, idx: u64) -> bool {
        self.bits.contains(idx as usize)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones().map(|i| i as u64)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        let len = bits.count_ones(..) as u64;
        Subset { bits, len }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        let len = bits.count_ones(..) as u64;
        Subset { bits, len }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        let len = bits.count_ones(..) as u64;
        Subset { bits, len }
    }

    pub fn filter(g: &PGroup, pred: impl Fn(u64) -> bool) -> Subset {
        let mut s = Subset::empty(g);
        for i in 0..g.order() as u64 {
            if pred(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn whole(g: &PGroup) -> Subset {
        let n = g.order() as usize;
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Subset { bits, len: n as u64 }
    }
}

/// Subgroup generated by `gens`, by breadth-first closure.
pub fn closure(g: &PGroup, gens: &[SElement]) -> Result<Subset, GroupError> {
    g.require_enumerable()?;
    let mut set = Subset::empty(g);
    let id = g.identity();
    set.insert(g.encode(&id));
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for s in gens {
            let y = g.mul(&x, s);
            if set.insert(g.encode(&y)) {
                queue.push(y);
            }
        }
    }
    Ok(set)
}

/// The elements of the `K`-subspace `w` of `V`, optionally extended by `U`.
pub fn subspace_set(g: &PGroup, w: &Subspace, with_u: bool) -> Result<Subset, GroupError> {
    let mut gens = g.subspace_generators(w);
    if with_u {
        gens.extend(g.u_generators());
    }
    closure(g, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn encode_roundtrip() {
        let f = Field::new(3, 2).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        for i in [0u64, 1, 77, 6560] {
            assert_eq!(g.encode(&g.decode(i)), i);
        }
    }

    #[test]
    fn matches_parabolic_multiplication() {
        let f = Field::new(3, 2).unwrap();
        for g in [PGroup::sn(&f, 2).unwrap(), PGroup::s_lambda(&f).unwrap()] {
            let par = g.parabolic();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..50 {
                let a = g.random(&mut rng);
                let b = g.random(&mut rng);
                let lhs = g.to_parabolic(&g.mul(&a, &b));
                let rhs = par.mul(&g.to_parabolic(&a), &g.to_parabolic(&b));
                assert_eq!(lhs, rhs);
                assert_eq!(g.to_parabolic(&g.inv(&a)), par.inv(&g.to_parabolic(&a)));
            }
        }
    }

    #[test]
    fn explicit_unipotent_coefficients() {
        // new_j = sum_{i >= j} C(i, j) c^{i-j} v_i on V_n, and the transpose
        // rule with -c on Lambda.
        let f = Field::new(5, 1).unwrap();
        let c = f.from_int(2);
        let binom = poly::binomials(&f, 5);
        let g = PGroup::sn(&f, 3).unwrap();
        let v: Vec<_> = [1, 4, 0, 3].iter().map(|&x| f.from_int(x)).collect();
        let got = g.act_u(&v, c);
        for j in 0..4 {
            let mut e = f.zero();
            for i in j..4 {
                e = f.add(e, f.mul(binom[i][j], f.mul(f.pow(c, (i - j) as i64).unwrap(), v[i])));
            }
            assert_eq!(got[j], e);
        }
        let gl = PGroup::s_lambda(&f).unwrap();
        let eta: Vec<_> = [2, 0, 1, 4, 3, 1].iter().map(|&x| f.from_int(x)).collect();
        let got = gl.act_u(&eta, c);
        let mc = f.neg(c);
        for i in 0..6 {
            let mut e = f.zero();
            for j in 0..=i {
                e = f.add(e, f.mul(binom[i][j], f.mul(f.pow(mc, (i - j) as i64).unwrap(), eta[j])));
            }
            assert_eq!(got[i], e);
        }
    }

    #[test]
    fn commutator_of_y_and_u() {
        let f = Field::new(3, 1).unwrap();
        let g = PGroup::sn(&f, 1).unwrap();
        let y = g.vbasis(1, f.one());
        let u = g.u(f.one());
        assert_eq!(g.comm(&y, &u), g.vbasis(0, f.one()));
    }

    #[test]
    fn closure_of_whole_group() {
        let f = Field::new(3, 1).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        let s = closure(&g, &g.generators()).unwrap();
        assert_eq!(s.len(), 81);
    }
}
