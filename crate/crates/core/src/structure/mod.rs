//! Subgroups of `S`, central series, quotient maps and the structural
//! lemmas about them.
//!
//! Most quantities are available by up to three routes: closed-form
//! coordinate descriptions, linear algebra over `K` on the module, and
//! enumeration of the group. Checks compare the routes against each other.

pub mod lemmas;
pub mod maps;
pub mod series;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::field::FieldElement;
use crate::linalg::{Matrix, Subspace};
use crate::parabolic::GroupError;
use crate::sgroup::{closure, PGroup, SElement, SKind, Subset};

/// A subgroup of `S` known as a `K`-subspace of `V`, possibly times `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    V(Subspace),
    UV(Subspace),
    Whole,
}

impl Shape {
    pub fn order(&self, g: &PGroup) -> u128 {
        let q = g.field().q() as u128;
        match self {
            Shape::V(w) => q.pow(w.rank() as u32),
            Shape::UV(w) => q.pow(w.rank() as u32 + 1),
            Shape::Whole => g.order(),
        }
    }

    pub fn contains(&self, g: &PGroup, s: &SElement) -> bool {
        match self {
            Shape::V(w) => s.c.is_zero() && w.contains(g.field(), &s.v),
            Shape::UV(w) => w.contains(g.field(), &s.v),
            Shape::Whole => true,
        }
    }

    pub fn generators(&self, g: &PGroup) -> Vec<SElement> {
        match self {
            Shape::V(w) => g.subspace_generators(w),
            Shape::UV(w) => {
                let mut gens = g.u_generators();
                gens.extend(g.subspace_generators(w));
                gens
            }
            Shape::Whole => g.generators(),
        }
    }
}

/// A subgroup given by generators; the element set is built on first use.
#[derive(Debug)]
pub struct SubgroupHandle {
    pub name: String,
    group: PGroup,
    gens: Vec<SElement>,
    shape: Option<Shape>,
    elements: OnceLock<Subset>,
}

impl Clone for SubgroupHandle {
    fn clone(&self) -> Self {
        let h = SubgroupHandle {
            name: self.name.clone(),
            group: self.group.clone(),
            gens: self.gens.clone(),
            shape: self.shape.clone(),
            elements: OnceLock::new(),
        };
        if let Some(s) = self.elements.get() {
            let _ = h.elements.set(s.clone());
        }
        h
    }
}

impl SubgroupHandle {
    pub fn from_generators(name: impl Into<String>, group: &PGroup, gens: Vec<SElement>) -> SubgroupHandle {
        SubgroupHandle { name: name.into(), group: group.clone(), gens, shape: None, elements: OnceLock::new() }
    }

    pub fn from_shape(name: impl Into<String>, group: &PGroup, shape: Shape) -> SubgroupHandle {
        let gens = shape.generators(group);
        SubgroupHandle { name: name.into(), group: group.clone(), gens, shape: Some(shape), elements: OnceLock::new() }
    }

    pub fn from_subset(name: impl Into<String>, group: &PGroup, set: Subset) -> SubgroupHandle {
        let gens = generators_of(group, &set);
        let h = SubgroupHandle::from_generators(name, group, gens);
        let _ = h.elements.set(set);
        h
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn gens(&self) -> &[SElement] {
        &self.gens
    }

    pub fn shape(&self) -> Option<&Shape> {
        self.shape.as_ref()
    }

    pub fn elements(&self) -> Result<&Subset, GroupError> {
        if let Some(s) = self.elements.get() {
            return Ok(s);
        }
        let set = closure(&self.group, &self.gens)?;
        Ok(self.elements.get_or_init(|| set))
    }

    pub fn order(&self) -> Result<u128, GroupError> {
        match &self.shape {
            Some(s) => Ok(s.order(&self.group)),
            None => Ok(self.elements()?.len() as u128),
        }
    }

    pub fn contains(&self, s: &SElement) -> Result<bool, GroupError> {
        match &self.shape {
            Some(sh) => Ok(sh.contains(&self.group, s)),
            None => Ok(self.elements()?.contains(self.group.encode(s))),
        }
    }

    /// Order divides `|S|` and every generator lies in `S`.
    pub fn is_consistent(&self) -> Result<bool, GroupError> {
        let o = self.order()?;
        Ok(o > 0 && self.group.order() % o == 0)
    }
}

/// A small generating set of an enumerated subgroup: greedily add elements
/// not in the span so far.
pub fn generators_of(g: &PGroup, set: &Subset) -> Vec<SElement> {
    let mut gens = Vec::new();
    let mut span = Subset::empty(g);
    span.insert(g.encode(&g.identity()));
    for idx in set.indices() {
        if !span.contains(idx) {
            gens.push(g.decode(idx));
            span = closure(g, &gens).expect("subset of an enumerable group");
            if span.len() == set.len() {
                break;
            }
        }
    }
    gens
}

/// Element set of a shape.
pub fn shape_set(g: &PGroup, shape: &Shape) -> Result<Subset, GroupError> {
    match shape {
        Shape::Whole => {
            g.require_enumerable()?;
            Ok(Subset::whole(g))
        }
        _ => closure(g, &shape.generators(g)),
    }
}

/// `m` copies of `M_{beta} - I` for the prime-field basis `beta`.
fn u_minus_one(g: &PGroup) -> Vec<Matrix> {
    let f = g.field();
    let id = Matrix::identity(g.dim());
    f.prime_basis().into_iter().map(|b| g.u_mat(b).sub(f, &id)).collect()
}

/// Matrix whose left kernel is exactly `w`.
fn annihilator_columns(g: &PGroup, w: &Subspace) -> Matrix {
    let f = g.field();
    let d = g.dim();
    if w.rank() == 0 {
        return Matrix::identity(d);
    }
    let ker = Matrix::from_rows(&w.basis).right_kernel(f);
    if ker.is_empty() {
        return Matrix::zero(d, 0);
    }
    Matrix::from_rows(&ker).transpose()
}

fn hconcat(ms: &[Matrix]) -> Matrix {
    let rows = ms[0].rows;
    let cols: usize = ms.iter().map(|m| m.cols).sum();
    let mut out = Matrix::zero(rows, cols);
    let mut off = 0;
    for m in ms {
        for i in 0..rows {
            for j in 0..m.cols {
                out.set(i, off + j, m.get(i, j));
            }
        }
        off += m.cols;
    }
    out
}

/// `{v in V : [v, S] <= y}` by linear algebra.
pub fn preimage_of_commutators(g: &PGroup, y: &Subspace) -> Subspace {
    let f = g.field();
    let a = annihilator_columns(g, y);
    if a.cols == 0 {
        return Subspace::whole(f, g.dim());
    }
    let blocks: Vec<Matrix> = u_minus_one(g).iter().map(|n| n.mul(f, &a)).collect();
    let ker = hconcat(&blocks).left_kernel(f);
    Subspace::span(f, g.dim(), &ker)
}

/// `[w, S]` for an `S`-invariant subspace `w`.
pub fn commutator_with_s(g: &PGroup, w: &Subspace) -> Subspace {
    let f = g.field();
    let mut acc = Subspace { dim: g.dim(), basis: Vec::new() };
    for n in u_minus_one(g) {
        acc = acc.sum(f, &w.image(f, &n));
    }
    acc
}

/// `C_V(z)` for `z = (c, v)`; depends on `c` only.
pub fn centralizer_in_v(g: &PGroup, c: FieldElement) -> Subspace {
    let f = g.field();
    let n = g.u_mat(c).sub(f, &Matrix::identity(g.dim()));
    Subspace::span(f, g.dim(), &n.left_kernel(f))
}

/// `C_V(S)` by linear algebra.
pub fn fixed_space(g: &PGroup) -> Subspace {
    preimage_of_commutators(g, &Subspace { dim: g.dim(), basis: Vec::new() })
}

/// Closed-form coordinate descriptions, valid for the parameter ranges
/// where they are known.
pub mod closed_form {
    use super::*;

    fn coords(g: &PGroup, it: impl IntoIterator<Item = usize>) -> Subspace {
        Subspace::coordinate(g.field(), g.dim(), it)
    }

    fn generic(g: &PGroup) -> bool {
        g.field().q() > g.field().p() as u64
    }

    fn unsupported(what: &str, g: &PGroup) -> GroupError {
        GroupError::Unsupported(format!("no closed form for {what} of {} over GF({})", g.kind().name(), g.field().q()))
    }

    pub fn center(g: &PGroup) -> Result<Subspace, GroupError> {
        let p = g.field().p() as usize;
        let f = g.field();
        Ok(match g.kind() {
            SKind::Sn(n) if n < p => coords(g, [0]),
            SKind::Sn(_) if generic(g) => coords(g, [0]),
            SKind::Sn(_) => {
                // x^p and x^{p-1} y - y^p
                let mut b = vec![FieldElement::ZERO; p + 1];
                b[1] = f.one();
                b[p] = f.neg(f.one());
                Subspace::span(f, p + 1, &[Matrix::identity(p + 1).row(0).to_vec(), b])
            }
            SKind::SLambda => coords(g, [p - 1, p]),
        })
    }

    /// `Z_1(S), Z_2(S), ...` ending with `S`.
    pub fn upper_central(g: &PGroup) -> Result<Vec<Shape>, GroupError> {
        let p = g.field().p() as usize;
        let mut out = Vec::new();
        match g.kind() {
            SKind::Sn(n) if n < p => {
                for i in 1..=n {
                    out.push(Shape::V(coords(g, 0..i)));
                }
            }
            SKind::Sn(_) if generic(g) => {
                out.push(Shape::V(coords(g, [0])));
                for i in 2..p {
                    out.push(Shape::V(coords(g, (0..i).chain([p]))));
                }
            }
            SKind::Sn(_) => return Err(unsupported("the upper central series", g)),
            SKind::SLambda => {
                for i in 1..p {
                    out.push(Shape::V(coords(g, p - i..=p)));
                }
            }
        }
        out.push(Shape::Whole);
        Ok(out)
    }

    /// `[V,S;1], [V,S;2], ...` down to the last nonzero term.
    pub fn commutator_chain(g: &PGroup) -> Result<Vec<Subspace>, GroupError> {
        let p = g.field().p() as usize;
        Ok(match g.kind() {
            SKind::Sn(n) if n < p => (1..=n).map(|i| coords(g, 0..=n - i)).collect(),
            SKind::Sn(_) if generic(g) => (1..p).map(|i| coords(g, 0..=p - 1 - i)).collect(),
            SKind::SLambda if generic(g) => {
                let mut out = vec![coords(g, 1..=p)];
                out.extend((2..p).map(|i| coords(g, i..p)));
                out
            }
            _ => return Err(unsupported("the commutator chain", g)),
        })
    }

    /// `Z_2(S)`.
    pub fn z2(g: &PGroup) -> Result<Shape, GroupError> {
        Ok(upper_central(g)?.swap_remove(1))
    }
}

/// The named subgroups of `S`: `U`, `V`, `Z(S)`, `Z_2(S)`, `R`, `Q`, `[V,S]`
/// and `U[V,S]`. `Q` is omitted for `S_1(q)`.
pub fn standard_subgroups(g: &PGroup) -> Result<BTreeMap<&'static str, SubgroupHandle>, GroupError> {
    let f = g.field();
    let mut out = BTreeMap::new();
    let zero = Subspace { dim: g.dim(), basis: Vec::new() };
    out.insert("U", SubgroupHandle::from_shape("U", g, Shape::UV(zero)));
    out.insert("V", SubgroupHandle::from_shape("V", g, Shape::V(Subspace::whole(f, g.dim()))));
    let z = closed_form::center(g)?;
    out.insert("Z(S)", SubgroupHandle::from_shape("Z(S)", g, Shape::V(z.clone())));
    out.insert("R", SubgroupHandle::from_shape("R", g, Shape::UV(z)));
    let vs = commutator_with_s(g, &Subspace::whole(f, g.dim()));
    out.insert("[V,S]", SubgroupHandle::from_shape("[V,S]", g, Shape::V(vs.clone())));
    out.insert("U[V,S]", SubgroupHandle::from_shape("U[V,S]", g, Shape::UV(vs)));
    let z2 = match closed_form::upper_central(g) {
        Ok(series) => series.into_iter().nth(1),
        Err(_) => None,
    };
    if let Some(z2) = z2 {
        if let Shape::V(w) = &z2 {
            out.insert("Q", SubgroupHandle::from_shape("Q", g, Shape::UV(w.clone())));
        }
        out.insert("Z_2(S)", SubgroupHandle::from_shape("Z_2(S)", g, z2));
    }
    Ok(out)
}

/// `{x in H : [x, k] = 1 for every generator k}`.
pub fn centralizer_set(g: &PGroup, h: &Subset, of: &[SElement]) -> Subset {
    let mut out = Subset::empty(g);
    for idx in h.indices() {
        let x = g.decode(idx);
        if of.iter().all(|k| g.mul(&x, k) == g.mul(k, &x)) {
            out.insert(idx);
        }
    }
    out
}

pub fn centre_set(g: &PGroup, h: &SubgroupHandle) -> Result<Subset, GroupError> {
    Ok(centralizer_set(g, h.elements()?, h.gens()))
}

/// `N_S(A)`.
pub fn normalizer_set(g: &PGroup, a: &SubgroupHandle) -> Result<Subset, GroupError> {
    let aset = a.elements()?;
    let mut out = Subset::empty(g);
    for idx in 0..g.order() as u64 {
        let s = g.decode(idx);
        if a.gens().iter().all(|x| aset.contains(g.encode(&g.conj(x, &s)))) {
            out.insert(idx);
        }
    }
    Ok(out)
}

/// `<[a, s] : a in A, s in gens(S)>` for `A` normal in `S`.
pub fn commutator_with_s_set(g: &PGroup, a: &Subset) -> Result<Subset, GroupError> {
    let gens = g.generators();
    let mut comms = Vec::new();
    let mut seen = Subset::empty(g);
    for idx in a.indices() {
        let x = g.decode(idx);
        for s in &gens {
            let c = g.comm(&x, s);
            if seen.insert(g.encode(&c)) {
                comms.push(c);
            }
        }
    }
    closure(g, &comms)
}

pub fn exponent(g: &PGroup, set: &Subset) -> u64 {
    set.indices().map(|i| g.element_order(&g.decode(i))).max().unwrap_or(1)
}

pub fn gens_commute(g: &PGroup, gens: &[SElement]) -> bool {
    gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| g.mul(a, b) == g.mul(b, a)))
}

/// `A^t` computed elementwise.
pub fn conjugate_set(g: &PGroup, a: &Subset, t: &SElement) -> Subset {
    let mut out = Subset::empty(g);
    for idx in a.indices() {
        out.insert(g.encode(&g.conj(&g.decode(idx), t)));
    }
    out
}

/// The `S`-conjugacy class of the subgroup `a`, by orbit closure under the
/// generators of `S`.
pub fn conjugates(g: &PGroup, a: &Subset) -> Vec<Subset> {
    let gens = g.generators();
    let mut orbit = vec![a.clone()];
    let mut i = 0;
    while i < orbit.len() {
        for s in &gens {
            let b = conjugate_set(g, &orbit[i], s);
            if !orbit.contains(&b) {
                orbit.push(b);
            }
        }
        i += 1;
    }
    orbit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn standard_orders_s2_9() {
        let f = Field::new(3, 2).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        let std = standard_subgroups(&g).unwrap();
        assert_eq!(std["R"].order().unwrap(), 81);
        assert_eq!(std["Q"].order().unwrap(), 729);
        assert_eq!(std["Z(S)"].order().unwrap(), 9);
        for h in std.values() {
            assert!(h.is_consistent().unwrap());
            assert_eq!(h.elements().unwrap().len() as u128, h.order().unwrap(), "{}", h.name);
        }
    }

    #[test]
    fn conjugates_of_r() {
        let f = Field::new(3, 2).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        let std = standard_subgroups(&g).unwrap();
        let r = std["R"].elements().unwrap();
        assert_eq!(conjugates(&g, r).len(), 9);
        let n = normalizer_set(&g, &std["R"]).unwrap();
        assert_eq!(g.order() / n.len() as u128, 9);
    }

    #[test]
    fn linear_algebra_centre_matches_closed_form() {
        for (p, m) in [(3, 1), (3, 2), (5, 1)] {
            let f = Field::new(p, m).unwrap();
            let mut groups: Vec<PGroup> = (1..=p as usize).map(|n| PGroup::sn(&f, n).unwrap()).collect();
            groups.push(PGroup::s_lambda(&f).unwrap());
            for g in groups {
                assert_eq!(fixed_space(&g), closed_form::center(&g).unwrap(), "{:?} q={}", g.kind(), f.q());
            }
        }
    }
}
