//! Computational primitives behind the structural checks: Jordan forms,
//! centralisers inside `D^*`, the families `B(S)` and `C(S)`, and the action
//! of torus elements on sections of `V`.

use serde::Serialize;

use super::{centre_set, exponent, gens_commute, maps::covers_u, SubgroupHandle};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, Subspace};
use crate::parabolic::{GroupError, Parabolic, ParabolicElement};
use crate::poly::{DTriple, Mat2, ModuleVector, PolyError};
use crate::sgroup::{PGroup, SKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanProfile {
    /// block sizes over `K`, largest first
    pub over_k: Vec<usize>,
    /// block sizes over the prime field
    pub over_fp: Vec<usize>,
}

/// Jordan block sizes of a unipotent `K`-linear map.
pub fn jordan_profile(f: &Field, t: &Matrix) -> Result<JordanProfile, PolyError> {
    let n = t.rows;
    let nil = t.sub(f, &Matrix::identity(n));
    if !nil.pow(f, n as u64).is_zero() {
        return Err(PolyError::WrongKind { expected: "unipotent matrix" });
    }
    // number of blocks of size >= k is dim ker N^k - dim ker N^{k-1}
    let mut kernel_dims = vec![0usize];
    let mut pk = Matrix::identity(n);
    for _ in 0..n {
        pk = pk.mul(f, &nil);
        kernel_dims.push(n - pk.rank(f));
    }
    let at_least: Vec<usize> = (1..=n).map(|k| kernel_dims[k] - kernel_dims[k - 1]).collect();
    let mut over_k = Vec::new();
    for k in (1..=n).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        over_k.extend(std::iter::repeat(k).take(exact));
    }
    let over_fp = over_k.iter().flat_map(|&k| std::iter::repeat(k).take(f.m() as usize)).collect();
    Ok(JordanProfile { over_k, over_fp })
}

/// Every element of `GL_2(q)`.
pub fn gl2(f: &Field) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                for d in f.elements() {
                    let m = Mat2::new(a, b, c, d);
                    if !m.det(f).is_zero() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Every element of `SL_2(q)`.
pub fn sl2(f: &Field) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                if a.is_zero() {
                    // -bc = 1
                    if !b.is_zero() && f.mul(b, c) == f.neg(f.one()) {
                        for d in f.elements() {
                            out.push(Mat2::new(a, b, c, d));
                        }
                    }
                } else {
                    let d = f.div(f.add(f.one(), f.mul(b, c)), a).expect("a is nonzero");
                    out.push(Mat2::new(a, b, c, d));
                }
            }
        }
    }
    out
}

/// Whether `d` fixes every vector of an `F_p`-basis of `w`.
pub fn fixes_pointwise(par: &Parabolic, d: &DTriple, w: &Subspace) -> bool {
    let f = par.field();
    w.basis.iter().all(|b| {
        f.prime_basis().into_iter().all(|s| {
            let v = ModuleVector { kind: par.module(), coeffs: crate::linalg::vec_scale(f, b, s) };
            par.act(&v, d) == v
        })
    })
}

/// `C_{D^*}(V)`, enumerating the `(aut, mat)` part of `D^*`.
///
/// The scalar `theta` acts on `V_n` by `theta` and on `Lambda` by `theta^-1`,
/// so for each `(aut, mat)` at most one scalar can fix the first basis vector.
pub fn gamma_centraliser(par: &Parabolic) -> Vec<DTriple> {
    let f = par.field();
    let whole = Subspace::whole(f, par.dim());
    let mut e0 = vec![FieldElement::ZERO; par.dim()];
    e0[0] = f.one();
    let e0 = ModuleVector { kind: par.module(), coeffs: e0 };
    let mats = gl2(f);
    let mut out = Vec::new();
    let mut e = 0;
    while e < f.m() {
        for m in &mats {
            let w = par.act(&e0, &DTriple { aut_exp: e, scalar: f.one(), mat: *m });
            let Ok(inv) = f.inv(w.coeffs[0]) else { continue };
            let th = match par.module() {
                crate::poly::ModuleKind::Vn(_) => inv,
                crate::poly::ModuleKind::Lambda => w.coeffs[0],
            };
            let d = DTriple { aut_exp: e, scalar: th, mat: *m };
            if fixes_pointwise(par, &d, &whole) {
                out.push(d);
            }
        }
        e += par.m_p();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentsLem {
    pub sl2_order: u64,
    /// elements of `SL_2(q)` centralising `C_V(T)`
    pub centralising: u64,
    /// how many of those are lower triangular, i.e. normalise `T`
    pub in_normaliser: u64,
}

/// Centraliser in `SL_2(q)` of the fixed points of its lower unitriangular
/// Sylow subgroup on `V_n(q)`.
pub fn centslem(f: &Field, n: usize) -> Result<CentsLem, GroupError> {
    let g = PGroup::sn(f, n)?;
    let par = g.parabolic();
    let cv = super::fixed_space(&g);
    let mut out = CentsLem { sl2_order: 0, centralising: 0, in_normaliser: 0 };
    for m in sl2(f) {
        out.sl2_order += 1;
        let d = DTriple::linear(f.one(), m);
        if fixes_pointwise(par, &d, &cv) {
            out.centralising += 1;
            if m.is_lower_triangular() {
                out.in_normaliser += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BcClass {
    pub in_b: bool,
    pub in_c: bool,
}

/// `d` with `|Z(S)| = q d`-style exponents: 1 for `S_Lambda`, 0 for `S_n`.
pub fn d_exponent(g: &PGroup) -> u32 {
    match g.kind() {
        SKind::SLambda => 1,
        SKind::Sn(_) => 0,
    }
}

/// Membership of `A` in `B(S)` (elementary abelian of order `q^2 d`) and
/// `C(S)` (class two, exponent `p`, order `q^3 d`), both with `AV = S`.
pub fn classify_bc(g: &PGroup, a: &SubgroupHandle) -> Result<BcClass, GroupError> {
    let q = g.field().q() as u128;
    let de = d_exponent(g);
    let order = a.order()?;
    let supplements = covers_u(g, a.gens());
    let set = a.elements()?;
    let exp_p = exponent(g, set) == g.field().p() as u64;
    let abelian = gens_commute(g, a.gens());
    let in_b = supplements && abelian && exp_p && order == q.pow(2 + de);
    let class_two = !abelian && {
        let z = centre_set(g, a)?;
        a.gens().iter().all(|x| a.gens().iter().all(|y| z.contains(g.encode(&g.comm(x, y)))))
    };
    let in_c = supplements && class_two && exp_p && order == q.pow(3 + de);
    Ok(BcClass { in_b, in_c })
}

/// The `q + 1` subgroups of `S_Lambda` of index `q` containing `[V,S]`:
/// `V` and `A_t = { (c, eta) : eta_0 = t c }`.
pub fn index_q_over_vs(g: &PGroup) -> Result<Vec<(String, SubgroupHandle)>, GroupError> {
    if g.kind() != SKind::SLambda {
        return Err(GroupError::Unsupported("defined for S_Lambda".into()));
    }
    let f = g.field();
    let vs = super::commutator_with_s(g, &Subspace::whole(f, g.dim()));
    let mut out = vec![(
        "V".to_string(),
        SubgroupHandle::from_shape("V", g, super::Shape::V(Subspace::whole(f, g.dim()))),
    )];
    for t in f.elements() {
        let mut gens = g.subspace_generators(&vs);
        for b in f.prime_basis() {
            let mut s = g.u(b);
            s.v[0] = f.mul(t, b);
            gens.push(s);
        }
        let name = format!("A[{}]", f.format(t));
        out.push((name.clone(), SubgroupHandle::from_generators(name, g, gens)));
    }
    Ok(out)
}

/// The induced map of `t` on the line of the basis vector `i`, if `t`
/// preserves it modulo `below` (given as coordinates that are ignored).
pub fn induced_scalar(par: &Parabolic, t: &ParabolicElement, i: usize) -> FieldElement {
    let f = par.field();
    let v = ModuleVector::monomial(f, par.module(), i, f.one());
    par.act(&v, &t.d).coeffs[i]
}

/// Every element of `Sigma cap P^*`: `(phi, lambda, diag(mu, nu))`.
pub fn sigma_elements(par: &Parabolic) -> Vec<ParabolicElement> {
    let f = par.field();
    let mut out = Vec::new();
    let mut e = 0;
    while e < f.m() {
        for l in f.nonzero_elements() {
            for mu in f.nonzero_elements() {
                for nu in f.nonzero_elements() {
                    out.push(par.torus(e, l, mu, nu));
                }
            }
        }
        e += par.m_p();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_and_gl2_orders() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(sl2(&f).len(), 720);
        let f = Field::new(3, 1).unwrap();
        assert_eq!(gl2(&f).len(), 48);
    }

    #[test]
    fn gamma_centraliser_matches_full_scan() {
        for (p, m) in [(3, 1), (3, 2), (5, 1)] {
            let f = Field::new(p, m).unwrap();
            for amb in [crate::parabolic::Ambient::Pn(1), crate::parabolic::Ambient::Pn(2), crate::parabolic::Ambient::PLambda] {
                let par = Parabolic::new(f.clone(), amb).unwrap();
                let whole = Subspace::whole(&f, par.dim());
                let mut full = Vec::new();
                for e in (0..f.m()).step_by(par.m_p() as usize) {
                    for th in f.nonzero_elements() {
                        for mat in gl2(&f) {
                            let d = DTriple { aut_exp: e, scalar: th, mat };
                            if fixes_pointwise(&par, &d, &whole) {
                                full.push(d);
                            }
                        }
                    }
                }
                let fast = gamma_centraliser(&par);
                assert_eq!(fast.len(), full.len());
                assert!(full.iter().all(|d| fast.contains(d)));
            }
        }
    }

    #[test]
    fn jordan_of_u1_on_v_p_minus_1() {
        let f = Field::new(3, 2).unwrap();
        let g = PGroup::sn(&f, 2).unwrap();
        let j = jordan_profile(&f, &g.u_mat(f.one())).unwrap();
        assert_eq!(j.over_k, vec![3]);
        assert_eq!(j.over_fp, vec![3, 3]);
        assert!(jordan_profile(&f, &Matrix::identity(2).scale(&f, f.from_int(2))).is_err());
    }
}
