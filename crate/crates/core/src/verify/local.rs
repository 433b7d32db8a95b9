//! Local data: centralisers in `SL_2(q)` and `D^*`, torus actions on sections
//! of `V`, conjugacy of the candidates `R` and `Q`, and `R cap R^s`.

use std::collections::HashSet;

use super::{gcd, skip, Env, Stop};
use crate::fusion::{generated_automorphism_order, Gamma1};
use crate::linalg::Subspace;
use crate::parabolic::ParabolicElement;
use crate::poly::{DTriple, Mat2};
use crate::report::CheckReport;
use crate::sgroup::{closure, PGroup, SKind, Subset};
use crate::structure::lemmas::{centslem as centslem_counts, classify_bc, d_exponent, gamma_centraliser, gl2, induced_scalar, sigma_elements};
use crate::structure::series::upper_central_linear;
use crate::structure::{centre_set, conjugates, normalizer_set, shape_set, standard_subgroups, Shape, SubgroupHandle};

fn d_star_order(env: &Env) -> u128 {
    let par = env.g().parabolic();
    let f = env.g().field();
    let gl = gl2(f).len() as u128;
    (f.m() / par.m_p()) as u128 * (env.q() as u128 - 1) * gl
}

pub(super) fn centslem(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let q = env.q();
    let mut out = Vec::new();
    if let SKind::Sn(n) = g.kind() {
        out.push(env.run("centslem", |c, _| {
            let counts = centslem_counts(f, n)?;
            c.count("sl2_order", counts.sl2_order);
            c.expect_eq("sl2_order", counts.sl2_order, q * (q * q - 1));
            c.count("centralising", counts.centralising);
            if n < env.p() as usize {
                c.expect_eq("centralising", counts.centralising, q * gcd(n as u64, q - 1));
            }
            c.expect_eq("in_normaliser", counts.in_normaliser, counts.centralising);
            Ok(())
        }));
    }
    out.push(env.run("centslem.gammacentraliser", |c, _| {
        let cap = crate::sgroup::size_cap() as u128;
        let size = d_star_order(env);
        c.count("d_star_order", size as u64);
        let scanned = size / (env.q() as u128 - 1);
        if scanned > cap {
            return skip(format!("size: {scanned} pairs (aut, mat) exceed the cap {cap}"));
        }
        let par = g.parabolic();
        let found = gamma_centraliser(par);
        let exp = match g.kind() {
            SKind::Sn(n) => n as i64,
            SKind::SLambda => env.p() as i64,
        };
        let want: HashSet<DTriple> = f
            .nonzero_elements()
            .map(|a| DTriple { aut_exp: 0, scalar: f.pow(a, -exp).expect("unit"), mat: Mat2::diag(a, a) })
            .collect();
        c.expect_eq("order", found.len() as u64, q - 1);
        let got: HashSet<DTriple> = found.into_iter().collect();
        c.ensure(got == want, || "C_D*(V) differs from the scalar family (a^-n, aI)".into());
        Ok(())
    }));
    out
}

/// Semilinear map induced by `t` on the line of coordinate `i`.
fn on_line(g: &PGroup, t: &ParabolicElement, i: usize) -> Option<Gamma1> {
    Gamma1::from_map(g.field(), |x| g.conj_by(&g.vbasis(i, x), t).v[i])
}

pub(super) fn action_centre(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let n = g.degree();
    let q = env.q();
    vec![env.run("action-centre", |c, _| {
        let par = g.parabolic();
        // L_0: torus elements trivial on V/[V,S], the line of y^n
        let mut scalars = HashSet::new();
        let mut l0 = 0u64;
        for t in sigma_elements(par) {
            if on_line(g, &t, n) != Some(Gamma1::identity()) {
                continue;
            }
            l0 += 1;
            let z = on_line(g, &t, 0).ok_or_else(|| Stop::Error("action on C_V(S) is not semilinear".into()))?;
            c.ensure(z.aut_exp == 0, || "L_0 twists C_V(S) by a field automorphism".into());
            scalars.insert(z.scalar);
        }
        c.count("l0_torus_elements", l0);
        c.expect_eq("scalars_on_centre", scalars.len() as u64, (q - 1) / gcd(q - 1, n as u64));
        // irreducible over F_p: the scalars span K
        let rows: Vec<Vec<_>> = scalars.iter().map(|&s| vec![s]).collect();
        c.expect_eq("fp_span_rank", super::fp_rank(f, &rows), env.m() as usize);
        let trivial = scalars.len() == 1;
        c.expect_eq("trivial", trivial, n == env.p() as usize - 1 && q == env.p() as u64);
        Ok(())
    })]
}

pub(super) fn action_centre_lambda(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let p = env.p() as usize;
    let q = env.q();
    // K_1 centralises C_[V,S,S](S), the line p-1; K_2 centralises the section at p
    [("action-centre-lambda.k1", p - 1), ("action-centre-lambda.k2", p)]
        .into_iter()
        .map(|(id, line)| {
            env.run(id, |c, _| {
                let par = g.parabolic();
                let mut large = 0u64;
                let mut best = 0u64;
                for t in sigma_elements(par).into_iter().filter(|t| t.d.aut_exp == 0) {
                    if induced_scalar(par, &t, line) != f.one() {
                        continue;
                    }
                    let order = generated_automorphism_order(g, std::slice::from_ref(&t));
                    best = best.max(order);
                    if 2 * order < q - 1 {
                        continue;
                    }
                    large += 1;
                    // t is diagonal on V, so C_V(t) is spanned by the lines it fixes
                    let fixed: Vec<usize> = (0..=p).filter(|&i| induced_scalar(par, &t, i) == f.one()).collect();
                    if fixed != vec![line] {
                        c.fail(format!("C_V(t) = coordinates {fixed:?} for t = {:?}", t.d));
                    }
                }
                c.count("max_order", best);
                c.count("large_cyclic_generators", large);
                c.ensure(large > 0, || "no cyclic p'-subgroup of order at least (q-1)/2".into());
                Ok(())
            })
        })
        .collect()
}

struct Candidates {
    z: Subset,
    z2: Option<Subset>,
    r: SubgroupHandle,
    q: Option<SubgroupHandle>,
}

fn candidates(g: &PGroup) -> Result<Candidates, Stop> {
    let std = standard_subgroups(g)?;
    let z = std["Z(S)"].elements()?.clone();
    let z2 = match std.get("Z_2(S)") {
        Some(h) => Some(h.elements()?.clone()),
        None => None,
    };
    Ok(Candidates { z, z2, r: std["R"].clone(), q: std.get("Q").cloned() })
}

pub(super) fn intersec(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    vec![
        env.run("intersec.classes", |c, _| {
            if !env.exhaustive() {
                return skip("sampled tier: membership needs enumeration");
            }
            let k = candidates(g)?;
            let r = classify_bc(g, &k.r)?;
            c.ensure(r.in_b && !r.in_c, || "R is not in B(S)".into());
            if let Some(qh) = &k.q {
                let qc = classify_bc(g, qh)?;
                c.ensure(qc.in_c && !qc.in_b, || "Q is not in C(S)".into());
            }
            let v = SubgroupHandle::from_shape("V", g, Shape::V(crate::linalg::Subspace::whole(g.field(), g.dim())));
            let vc = classify_bc(g, &v)?;
            c.ensure(!vc.in_b && !vc.in_c, || "V is classified as a candidate".into());
            Ok(())
        }),
        env.run("intersec", |c, _| {
            if !env.exhaustive() {
                return skip("sampled tier: conjugates need enumeration");
            }
            let k = candidates(g)?;
            let rs = conjugates(g, k.r.elements()?);
            c.count("r_class", rs.len());
            let mut pairs = 0u64;
            for i in 0..rs.len() {
                for j in i + 1..rs.len() {
                    pairs += 1;
                    if rs[i].intersection(&rs[j]) != k.z {
                        c.fail(format!("R-conjugates {i} and {j} meet outside Z(S)"));
                    }
                }
            }
            c.count("r_pairs", pairs);
            if let (Some(qh), Some(z2)) = (&k.q, &k.z2) {
                let qs = conjugates(g, qh.elements()?);
                c.count("q_class", qs.len());
                let mut qpairs = 0u64;
                for i in 0..qs.len() {
                    for j in i + 1..qs.len() {
                        qpairs += 1;
                        if qs[i].intersection(&qs[j]) != *z2 {
                            c.fail(format!("Q-conjugates {i} and {j} meet outside Z_2(S)"));
                        }
                    }
                }
                c.count("q_pairs", qpairs);
                let mut contained = 0u64;
                for b in &rs {
                    for cc in &qs {
                        if b.is_subset(cc) {
                            contained += 1;
                        } else if b.intersection(cc) != k.z {
                            c.fail("an R-conjugate meets a Q-conjugate outside Z(S) without lying in it");
                        }
                    }
                }
                c.count("r_inside_q", contained);
            }
            Ok(())
        }),
    ]
}

/// `a` with `|A| = q^{a+d+1}`: 1 for `R`, 2 for `Q`.
fn s_conj_one(c: &mut crate::report::Check, g: &PGroup, name: &str, a: &SubgroupHandle, level: usize) -> super::Res {
    let q = g.field().q() as u128;
    let d = d_exponent(g) as u32;
    let n = match g.kind() {
        SKind::Sn(n) => n as u32,
        SKind::SLambda => g.field().p(),
    };
    let aset = a.elements()?;
    c.expect_eq(&format!("{name}_order"), aset.len() as u128, q.pow(level as u32 + d + 1));
    let class = conjugates(g, aset);
    c.expect_eq(&format!("{name}_class"), class.len() as u128, q.pow(n - level as u32 - d));
    // N_S(A) = A Z_{a+1}(S)
    let upper = upper_central_linear(g);
    let mut gens = a.gens().to_vec();
    gens.extend(upper[level].generators(g));
    let want = closure(g, &gens)?;
    let norm = normalizer_set(g, a)?;
    c.ensure(norm == want, || format!("N_S({name}) differs from {name} Z_{}(S)", level + 1));
    c.expect_eq(&format!("{name}_normaliser_index"), norm.len() as u128 / aset.len() as u128, q);
    // A[V,S] - [V,S] lies in the union of the conjugates
    let vs = crate::structure::commutator_with_s(g, &crate::linalg::Subspace::whole(g.field(), g.dim()));
    let vs_set = shape_set(g, &Shape::V(vs.clone()))?;
    let mut gens = a.gens().to_vec();
    gens.extend(g.subspace_generators(&vs));
    let avs = closure(g, &gens)?;
    let union = class.iter().fold(Subset::empty(g), |acc, s| acc.union(s));
    let outside = avs.difference(&vs_set);
    let missed = outside.difference(&union).len();
    c.count(&format!("{name}_elements_checked"), outside.len());
    c.expect_eq(&format!("{name}_missed"), missed, 0);
    Ok(())
}

pub(super) fn s_conj(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    vec![env.run("s-conj", |c, _| {
        if !env.exhaustive() {
            return skip("sampled tier: conjugacy classes need enumeration");
        }
        let k = candidates(g)?;
        s_conj_one(c, g, "R", &k.r, 1)?;
        if let Some(qh) = &k.q {
            s_conj_one(c, g, "Q", qh, 2)?;
        }
        Ok(())
    })]
}

pub(super) fn size_ess(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    vec![env.run("size-ess", |c, _| {
        if !env.exhaustive() {
            return skip("sampled tier: normalisers need enumeration");
        }
        let k = candidates(g)?;
        let std = standard_subgroups(g)?;
        let v = std["V"].elements()?;
        let upper = upper_central_linear(g);
        let product = |a: &SubgroupHandle, i: usize| -> Result<Subset, Stop> {
            let mut gens = a.gens().to_vec();
            if let Some(s) = upper.get(i) {
                gens.extend(s.generators(g));
            } else {
                gens.extend(g.generators());
            }
            Ok(closure(g, &gens)?)
        };
        let r = k.r.elements()?;
        c.ensure(classify_bc(g, &k.r)?.in_b, || "R is not in B(S)".into());
        c.ensure(r.intersection(v) == k.z, || "R cap V differs from Z(S)".into());
        let nr = normalizer_set(g, &k.r)?;
        c.ensure(nr == product(&k.r, 1)?, || "N_S(R) differs from R Z_2(S)".into());
        c.count("n_s_r_order", nr.len());
        if let (Some(qh), Some(z2)) = (&k.q, &k.z2) {
            let qset = qh.elements()?;
            c.ensure(classify_bc(g, qh)?.in_c, || "Q is not in C(S)".into());
            c.ensure(qset.intersection(v) == *z2, || "Q cap V differs from Z_2(S)".into());
            c.ensure(centre_set(g, qh)? == k.z, || "Z(Q) differs from Z(S)".into());
            let nq = normalizer_set(g, qh)?;
            c.ensure(nq == product(qh, 2)?, || "N_S(Q) differs from Q Z_3(S)".into());
            c.count("n_s_q_order", nq.len());
        }
        let nv = normalizer_set(g, &std["V"])?;
        c.expect_eq("n_s_v_order", nv.len() as u128, g.order());
        Ok(())
    })]
}

pub(super) fn r_cap(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    vec![env.run("r-cap", |c, rng| {
        let par = g.parabolic();
        let z = crate::structure::closed_form::center(g)?;
        let shape = Shape::UV(z.clone());
        let in_r = |x: &ParabolicElement| -> bool {
            par.in_s(x) && g.from_parabolic(x).map(|s| shape.contains(g, &s)).unwrap_or(false)
        };
        let rgens: Vec<ParabolicElement> = shape.generators(g).iter().map(|s| g.to_parabolic(s)).collect();
        let zbasis: Vec<ParabolicElement> = z.basis.iter().map(|v| g.to_parabolic(&g.vel(v.clone()))).collect();
        let us: Vec<ParabolicElement> = f.nonzero_elements().map(|x| par.u(x)).collect();
        let total = 10_000;
        let mut normalising = 0u64;
        let mut tested = 0u64;
        let mut bad = 0u64;
        for i in 0..total {
            let s = if i % 2 == 0 { par.random_borel(rng) } else { par.random_p_star(rng) };
            if rgens.iter().all(|r| in_r(&par.conj(r, &s))) {
                normalising += 1;
                continue;
            }
            tested += 1;
            // R - V = { u_c z : c != 0, z in Z(S) } and (u_c z)^s = u_c^s z^s, where
            // z -> z^s is semilinear on V, so Z(S)^s is the K-span of the basis images
            let zimg: Vec<Vec<_>> = zbasis
                .iter()
                .map(|x| g.from_parabolic(&par.conj(x, &s)).map(|y| y.v))
                .collect::<Result<_, _>>()?;
            let reach = z.sum(f, &Subspace::span(f, g.dim(), &zimg));
            let mut hit = false;
            for u in &us {
                let w = par.conj(u, &s);
                if !par.in_s(&w) {
                    continue;
                }
                let w = g.from_parabolic(&w)?;
                if !w.c.is_zero() && reach.contains(f, &w.v) {
                    hit = true;
                    break;
                }
            }
            if hit {
                bad += 1;
                if bad <= 3 {
                    c.fail(format!("R cap R^s is not inside V for s = {:?}", s.d));
                }
            }
        }
        c.count("conjugators", total);
        c.count("normalising", normalising);
        c.count("tested", tested);
        c.expect_eq("failures", bad, 0);
        Ok(())
    })]
}
