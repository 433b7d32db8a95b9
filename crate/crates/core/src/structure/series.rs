//! Upper and lower central series, the weight filtration and commutator chains.

use serde::Serialize;
use serde_json::Value;

use super::{closed_form, commutator_with_s, commutator_with_s_set, preimage_of_commutators, shape_set, Shape};
use crate::codec;
use crate::field::FieldElement;
use crate::linalg::{Matrix, Subspace};
use crate::parabolic::GroupError;
use crate::poly::ModuleKind;
use crate::sgroup::{closure, PGroup, SElement, Subset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    UpperCentral,
    LowerCentral,
    WeightFiltration,
    CommutatorChain,
}

impl SeriesKind {
    pub fn parse(s: &str) -> Option<SeriesKind> {
        Some(match s {
            "upper_central" | "upper" => SeriesKind::UpperCentral,
            "lower_central" | "lower" => SeriesKind::LowerCentral,
            "weight_filtration" | "weight" => SeriesKind::WeightFiltration,
            "commutator_chain" | "chain" => SeriesKind::CommutatorChain,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// enumerate the group
    Brute,
    /// closed-form coordinate descriptions
    Structural,
    /// linear algebra on the module
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub orders: Vec<u128>,
    pub generators: Vec<Vec<Value>>,
}

/// `Z_1(S) < Z_2(S) < ... < S` by enumeration.
pub fn upper_central_brute(g: &PGroup) -> Result<Vec<Subset>, GroupError> {
    g.require_enumerable()?;
    let gens = g.generators();
    let mut prev = Subset::empty(g);
    prev.insert(g.encode(&g.identity()));
    let mut out = Vec::new();
    loop {
        let next = Subset::filter(g, |idx| {
            let x = g.decode(idx);
            gens.iter().all(|s| prev.contains(g.encode(&g.comm(&x, s))))
        });
        let done = next.len() as u128 == g.order();
        assert!(next.len() > prev.len(), "upper central series stalled");
        out.push(next.clone());
        prev = next;
        if done {
            return Ok(out);
        }
    }
}

/// `S = gamma_1 > gamma_2 > ... > 1` by enumeration, the trivial term omitted.
pub fn lower_central_brute(g: &PGroup) -> Result<Vec<Subset>, GroupError> {
    g.require_enumerable()?;
    let mut cur = Subset::whole(g);
    let mut out = Vec::new();
    while cur.len() > 1 {
        out.push(cur.clone());
        cur = commutator_with_s_set(g, &cur)?;
    }
    Ok(out)
}

/// `[V,S;1], [V,S;2], ...` by enumeration, down to the last nontrivial term.
pub fn commutator_chain_brute(g: &PGroup) -> Result<Vec<Subset>, GroupError> {
    let mut cur = closure(g, &g.v_generators())?;
    let mut out = Vec::new();
    loop {
        cur = commutator_with_s_set(g, &cur)?;
        if cur.len() <= 1 {
            return Ok(out);
        }
        out.push(cur.clone());
    }
}

/// Upper central series from repeated preimages of commutator maps; an
/// element outside `V` enters once `[V,S]` lies in the previous term.
pub fn upper_central_linear(g: &PGroup) -> Vec<Shape> {
    let f = g.field();
    let d = g.dim();
    let vs = commutator_with_s(g, &Subspace::whole(f, d));
    let mut prev = Subspace { dim: d, basis: Vec::new() };
    let mut out = Vec::new();
    loop {
        let next = preimage_of_commutators(g, &prev);
        let u_enters = vs.basis.iter().all(|b| prev.contains(f, b));
        if u_enters {
            if next.rank() == d {
                out.push(Shape::Whole);
            } else {
                out.push(Shape::UV(next));
            }
            return out;
        }
        out.push(Shape::V(next.clone()));
        prev = next;
    }
}

pub fn commutator_chain_linear(g: &PGroup) -> Vec<Subspace> {
    let f = g.field();
    let mut cur = Subspace::whole(f, g.dim());
    let mut out = Vec::new();
    loop {
        cur = commutator_with_s(g, &cur);
        if cur.rank() == 0 {
            return out;
        }
        out.push(cur.clone());
    }
}

/// `[W, z; 1], [W, z; 2], ...` for `z = (c, v)`: images of powers of `M_c - I`,
/// down to the last nonzero term.
pub fn element_chain_linear(g: &PGroup, w: &Subspace, c: FieldElement) -> Vec<Subspace> {
    let f = g.field();
    let n = g.u_mat(c).sub(f, &Matrix::identity(g.dim()));
    let mut cur = w.clone();
    let mut out = Vec::new();
    loop {
        cur = cur.image(f, &n);
        if cur.rank() == 0 {
            return out;
        }
        out.push(cur.clone());
    }
}

/// The same chain by enumeration: `{[x, z] : x in W}` at each step.
pub fn element_chain_brute(g: &PGroup, w: &Subset, z: &SElement) -> Vec<Subset> {
    let mut cur = w.clone();
    let mut out = Vec::new();
    loop {
        let mut next = Subset::empty(g);
        for idx in cur.indices() {
            next.insert(g.encode(&g.comm(&g.decode(idx), z)));
        }
        if next.len() <= 1 {
            return out;
        }
        out.push(next.clone());
        cur = next;
    }
}

fn weight_filtration_shapes(g: &PGroup) -> Result<Vec<Shape>, GroupError> {
    if !matches!(g.module(), ModuleKind::Vn(_)) {
        return Err(GroupError::Unsupported("the weight filtration is defined on V_n".into()));
    }
    Ok((0..g.dim()).map(|i| Shape::V(Subspace::coordinate(g.field(), g.dim(), 0..=i))).collect())
}

fn report_from_sets(g: &PGroup, kind: SeriesKind, sets: &[Subset]) -> SeriesReport {
    let generators = sets
        .iter()
        .map(|s| super::generators_of(g, s).iter().map(|e| codec::s_element_to_json(g, e)).collect())
        .collect();
    SeriesReport { kind, orders: sets.iter().map(|s| s.len() as u128).collect(), generators }
}

fn report_from_shapes(g: &PGroup, kind: SeriesKind, shapes: &[Shape]) -> SeriesReport {
    let generators = shapes
        .iter()
        .map(|s| s.generators(g).iter().map(|e| codec::s_element_to_json(g, e)).collect())
        .collect();
    SeriesReport { kind, orders: shapes.iter().map(|s| s.order(g)).collect(), generators }
}

pub fn central_series(g: &PGroup, kind: SeriesKind, mode: Mode) -> Result<SeriesReport, GroupError> {
    match mode {
        Mode::Brute => {
            let sets = match kind {
                SeriesKind::UpperCentral => upper_central_brute(g)?,
                SeriesKind::LowerCentral => lower_central_brute(g)?,
                SeriesKind::CommutatorChain => commutator_chain_brute(g)?,
                SeriesKind::WeightFiltration => {
                    let mut out = Vec::new();
                    for sh in weight_filtration_shapes(g)? {
                        let Shape::V(w) = &sh else { unreachable!() };
                        let all = closure(g, &g.v_generators())?;
                        let mut set = Subset::empty(g);
                        for idx in all.indices() {
                            let x = g.decode(idx);
                            let top = w.rank() - 1;
                            if x.v.iter().skip(top + 1).all(|a| a.is_zero()) {
                                set.insert(idx);
                            }
                        }
                        out.push(set);
                    }
                    out
                }
            };
            Ok(report_from_sets(g, kind, &sets))
        }
        Mode::Structural | Mode::Linear => {
            let structural = mode == Mode::Structural;
            let shapes = match kind {
                SeriesKind::UpperCentral if structural => closed_form::upper_central(g)?,
                SeriesKind::UpperCentral => upper_central_linear(g),
                SeriesKind::LowerCentral => {
                    let chain =
                        if structural { closed_form::commutator_chain(g)? } else { commutator_chain_linear(g) };
                    let mut v = vec![Shape::Whole];
                    v.extend(chain.into_iter().map(Shape::V));
                    v
                }
                SeriesKind::CommutatorChain => {
                    let chain =
                        if structural { closed_form::commutator_chain(g)? } else { commutator_chain_linear(g) };
                    chain.into_iter().map(Shape::V).collect()
                }
                SeriesKind::WeightFiltration => weight_filtration_shapes(g)?,
            };
            Ok(report_from_shapes(g, kind, &shapes))
        }
    }
}

/// Element sets of shapes, for comparison with enumeration.
pub fn shapes_to_sets(g: &PGroup, shapes: &[Shape]) -> Result<Vec<Subset>, GroupError> {
    shapes.iter().map(|s| shape_set(g, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn s2_9_upper_central_orders() {
        let f = Field::new(3, 2).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        let r = central_series(&g, SeriesKind::UpperCentral, Mode::Brute).unwrap();
        assert_eq!(r.orders, vec![9, 81, 6561]);
        let s = central_series(&g, SeriesKind::UpperCentral, Mode::Structural).unwrap();
        assert_eq!(s.orders, r.orders);
    }

    #[test]
    fn three_routes_agree() {
        for (p, m) in [(3u32, 1u32), (3, 2), (5, 1)] {
            let f = Field::new(p, m).unwrap();
            let mut groups: Vec<PGroup> = (1..p as usize).map(|n| PGroup::sn(&f, n).unwrap()).collect();
            if f.q() > p as u64 {
                groups.push(PGroup::sn(&f, p as usize).unwrap());
            }
            groups.push(PGroup::s_lambda(&f).unwrap());
            for g in groups {
                let brute = upper_central_brute(&g).unwrap();
                let lin = shapes_to_sets(&g, &upper_central_linear(&g)).unwrap();
                assert_eq!(brute, lin, "upper linear {:?} q={}", g.kind(), f.q());
                if let Ok(cf) = closed_form::upper_central(&g) {
                    assert_eq!(brute, shapes_to_sets(&g, &cf).unwrap(), "upper closed {:?} q={}", g.kind(), f.q());
                }
                let chain = commutator_chain_brute(&g).unwrap();
                let lin: Vec<Shape> = commutator_chain_linear(&g).into_iter().map(Shape::V).collect();
                assert_eq!(chain, shapes_to_sets(&g, &lin).unwrap(), "chain {:?} q={}", g.kind(), f.q());
                if let Ok(cf) = closed_form::commutator_chain(&g) {
                    let cf: Vec<Shape> = cf.into_iter().map(Shape::V).collect();
                    assert_eq!(chain, shapes_to_sets(&g, &cf).unwrap(), "chain closed {:?} q={}", g.kind(), f.q());
                }
            }
        }
    }
}
