//! `delta`, the embedding `psi*`, the orders of `Out^0` and the arithmetic
//! excluding further essential subgroups.

use super::{skip, Env, Stop};
use crate::field::FieldElement;
use crate::fusion::psi::{self, in_domain, psi_star_entries, Gamma4};
use crate::fusion::{
    automorphism_signature, delta, lift_generators, out0 as out0_orders, out0_closed_form, Essential, Gamma1,
};
use crate::linalg::Matrix;
use crate::parabolic::{Parabolic, ParabolicElement};
use crate::poly::{DTriple, Mat2};
use crate::report::CheckReport;
use crate::sgroup::{PGroup, SKind};
use crate::structure::lemmas::sigma_elements;
use crate::structure::Shape;

pub(super) fn delta_kernel(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let n = g.degree();
    let q = env.q();
    vec![
        env.run("delta-kernel", |c, _| {
            let par = g.parabolic();
            let id = automorphism_signature(g, &par.identity());
            let (mut kernel, mut central, mut bad) = (0u64, 0u64, 0u64);
            let mut total = 0u64;
            for t in sigma_elements(par) {
                total += 1;
                let trivial_sig = automorphism_signature(g, &t) == id;
                if trivial_sig {
                    central += 1;
                }
                if delta(g, &t)?.is_trivial() {
                    kernel += 1;
                    if !trivial_sig {
                        bad += 1;
                        c.fail(format!("{:?} has trivial delta but acts nontrivially on S", t.d));
                    }
                }
            }
            c.count("torus_elements", total);
            c.expect_eq("delta_trivial", kernel, q - 1);
            c.expect_eq("acting_trivially", central, q - 1);
            c.expect_eq("nontrivial_kernel_elements", bad, 0);
            Ok(())
        }),
        env.run("delta-kernel.inner", |c, rng| {
            let par = g.parabolic();
            let mut ts: Vec<ParabolicElement> = g.generators().iter().map(|s| g.to_parabolic(s)).collect();
            ts.extend((0..50).map(|_| par.random_s(rng)));
            for t in &ts {
                c.ensure(delta(g, t)?.is_trivial(), || "an inner automorphism has nontrivial delta".into());
            }
            // an element of C_{D*}(V) U
            let a = f.primitive_element();
            let cu = par.mul(
                &par.from_d(DTriple { aut_exp: 0, scalar: f.pow(a, -(n as i64))?, mat: Mat2::diag(a, a) }),
                &par.u(f.one()),
            );
            c.ensure(delta(g, &cu)?.is_trivial(), || "C_D*(V) U has nontrivial delta".into());
            c.ensure(delta(g, &par.identity())?.is_trivial(), || "delta(1) is not trivial".into());
            c.count("inner_elements", ts.len());
            Ok(())
        }),
    ]
}

fn random_domain(par: &Parabolic, rng: &mut super::Rng) -> ParabolicElement {
    let p = par.field().p() as usize;
    let mut g = par.random_borel(rng);
    for x in &mut g.vec.coeffs[..p - 2] {
        *x = FieldElement::ZERO;
    }
    g
}

/// Whether `m` is the identity apart from the entries `(0,3)`, `(1,3)`, `(2,3)`.
fn radical_pattern(m: &Matrix) -> bool {
    (0..4).all(|i| (0..4).all(|j| i == j && m.get(i, j) == FieldElement::ONE || i != j && (j == 3 || m.get(i, j).is_zero())))
}

pub(super) fn psi_star(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let p = env.p() as usize;
    let par = g.parabolic();
    vec![
        env.run("psi-star.hom", |c, rng| {
            let mut bad = 0u64;
            for _ in 0..2000 {
                let (a, b) = (random_domain(par, rng), random_domain(par, rng));
                if psi::psi_star(par, &par.mul(&a, &b))? != psi::psi_star(par, &a)?.mul(f, &psi::psi_star(par, &b)?) {
                    bad += 1;
                }
            }
            c.count("pairs", 2000);
            c.expect_eq("failures", bad, 0);
            c.ensure(psi::psi_star(par, &par.identity())?.is_identity(), || "identity does not map to identity".into());
            Ok(())
        }),
        env.run("psi-star.torus", |c, _| {
            let z = f.primitive_element();
            let zi = f.inv(z)?;
            let t = par.torus(0, f.pow(z, p as i64)?, f.one(), zi);
            let img = psi::psi_star(par, &t)?;
            let diag = |xs: [FieldElement; 4]| {
                let mut m = Matrix::identity(4);
                for (i, x) in xs.into_iter().enumerate() {
                    m.set(i, i, x);
                }
                Gamma4 { aut_exp: 0, mat: m }
            };
            let one = f.one();
            c.ensure(img == diag([one, z, zi, one]), || format!("image is {:?}", img.mat));
            // the printed diag(1, z^-1, z, 1) is the image of t^-1 and generates the same cyclic group
            let printed = diag([one, zi, z, one]);
            c.ensure(psi::psi_star(par, &par.inv(&t))? == printed, || "t^-1 does not map to diag(1, z^-1, z, 1)".into());
            let cyclic = |x: &Gamma4| {
                let mut out = vec![Gamma4::identity()];
                let mut y = x.clone();
                while !y.is_identity() {
                    out.push(y.clone());
                    y = y.mul(f, x);
                }
                out.sort_by_key(|m| format!("{:?}", m.mat));
                out
            };
            c.ensure(cyclic(&img) == cyclic(&printed), || "the two diagonal elements generate different groups".into());
            c.count("torus_image_order", cyclic(&img).len());
            Ok(())
        }),
        env.run("psi-star.radical", |c, rng| {
            let z = crate::structure::closed_form::center(g)?;
            let r = Shape::UV(z);
            let mut seen = std::collections::HashSet::new();
            let mut elems: Vec<crate::sgroup::SElement> = r.generators(g);
            let exhaustive = (env.q() as u128).pow(3) <= 100_000;
            if exhaustive {
                elems = Vec::new();
                for x in f.elements() {
                    for a in f.elements() {
                        for b in f.elements() {
                            let mut v = vec![FieldElement::ZERO; g.dim()];
                            v[p - 1] = a;
                            v[p] = b;
                            elems.push(g.mul(&g.u(x), &g.vel(v)));
                        }
                    }
                }
            } else {
                elems.extend((0..2000).map(|_| {
                    let mut s = g.random(rng);
                    for x in &mut s.v[..p - 1] {
                        *x = FieldElement::ZERO;
                    }
                    s
                }));
            }
            for s in &elems {
                let img = psi::psi_star(par, &g.to_parabolic(s))?;
                c.ensure(img.aut_exp == 0 && radical_pattern(&img.mat), || format!("image of {} is not in O_p(P_R)", g.format(s)));
                seen.insert(img);
            }
            c.count("elements", elems.len());
            if exhaustive {
                c.expect_eq("distinct_images", seen.len() as u64, env.q().pow(3));
            }
            Ok(())
        }),
        env.run("psi-star.kernel", |c, _| {
            if !env.exhaustive() {
                return skip("sampled tier: the domain is not enumerated");
            }
            // stream the whole domain: (phi, theta, a, b, c, lambda, mu, nu)
            let mut kernel = 0u64;
            let mut total = 0u64;
            let mut e = 0;
            while e < f.m() {
                for th in f.nonzero_elements() {
                    for a in f.nonzero_elements() {
                        for b in f.nonzero_elements() {
                            for cc in f.elements() {
                                for l in f.elements() {
                                    for mu in f.elements() {
                                        for nu in f.elements() {
                                            total += 1;
                                            if psi_star_entries(f, e, th, a, b, cc, l, mu, nu).is_identity() {
                                                kernel += 1;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                e += par.m_p();
            }
            c.count("domain_order", total);
            c.expect_eq("kernel_order", kernel, 1);
            Ok(())
        }),
        env.run("psi-star.domain", |c, rng| {
            let z = crate::structure::closed_form::center(g)?;
            let r = Shape::UV(z);
            let rgens: Vec<ParabolicElement> = r.generators(g).iter().map(|s| g.to_parabolic(s)).collect();
            let normalises = |t: &ParabolicElement| {
                rgens.iter().all(|x| {
                    let y = par.conj(x, t);
                    par.in_s(&y) && g.from_parabolic(&y).map(|s| r.contains(g, &s)).unwrap_or(false)
                })
            };
            let (mut inside, mut outside) = (0u64, 0u64);
            for _ in 0..500 {
                let t = random_domain(par, rng);
                c.ensure(in_domain(par, &t) && normalises(&t), || "a domain element does not normalise R".into());
                inside += 1;
                let mut s = par.random_borel(rng);
                let k = rand::Rng::gen_range(rng, 0..p - 2);
                s.vec.coeffs[k] = f.add(s.vec.coeffs[k], f.one());
                if !in_domain(par, &s) {
                    outside += 1;
                    c.ensure(!normalises(&s), || "an element outside the domain normalises R".into());
                    c.ensure(psi::psi_star(par, &s).is_err(), || "psi* accepted an element outside the domain".into());
                }
            }
            c.count("domain_samples", inside);
            c.count("outside_samples", outside);
            Ok(())
        }),
    ]
}

fn essential_sets(g: &PGroup) -> Vec<Vec<Essential>> {
    match g.kind() {
        SKind::Sn(n) => {
            let mut out = vec![vec![Essential::V, Essential::R], vec![Essential::R]];
            if n >= 2 {
                out.push(vec![Essential::V, Essential::Q]);
            }
            out
        }
        SKind::SLambda => vec![vec![Essential::V, Essential::R], vec![Essential::R]],
    }
}

fn names(es: &[Essential]) -> String {
    es.iter().map(|e| e.name()).collect::<Vec<_>>().join(",")
}

/// Semilinear map induced on `S/V` by `t`.
fn on_top(g: &PGroup, t: &ParabolicElement) -> Option<Gamma1> {
    Gamma1::from_map(g.field(), |x| g.conj_by(&g.u(x), t).c)
}

fn on_line(g: &PGroup, t: &ParabolicElement, i: usize) -> Option<Gamma1> {
    Gamma1::from_map(g.field(), |x| g.conj_by(&g.vbasis(i, x), t).v[i])
}

pub(super) fn out0(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let q = env.q();
    let sets: Vec<(String, Vec<Essential>)> = match &env.system {
        Some(d) => vec![(d.name.clone(), d.essentials.clone())],
        None => essential_sets(g).into_iter().map(|es| (names(&es), es)).collect(),
    };
    let mut out: Vec<CheckReport> = sets
        .into_iter()
        .map(|(label, es)| {
            env.run(&format!("out0.{}", names(&es)), |c, _| {
                c.set_param("essentials", &label);
                let o = out0_orders(g, &es)?;
                let want = out0_closed_form(g.kind(), q, &es)
                    .ok_or_else(|| Stop::Error(format!("no closed form for {{{label}}}")))?;
                c.expect_eq("out0_order", o.by_signature, want);
                if let Some(d) = o.by_delta {
                    c.expect_eq("out0_order_by_delta", d, want);
                }
                if let Some(d) = &env.system {
                    c.expect_eq("descriptor_out0_order", d.out0_order, want);
                    c.count("out_order", d.out_order);
                }
                Ok(())
            })
        })
        .collect();
    out.push(env.run("out0.te", |c, _| {
        let par = g.parabolic();
        let bad = || Stop::Error("lift does not act semilinearly".to_string());
        let primitive = |x: &Gamma1| x.aut_exp == 0 && f.mult_order(x.scalar).ok() == Some(q - 1);
        for t in lift_generators(par, Essential::R) {
            let top = on_top(g, &t).ok_or_else(bad)?;
            c.ensure(primitive(&top), || "R lift is not primitive on S/V".into());
            match g.kind() {
                SKind::Sn(_) => {
                    let z = on_line(g, &t, 0).ok_or_else(bad)?;
                    c.ensure(primitive(&z), || "R lift is not primitive on Z(S)".into());
                }
                SKind::SLambda => {
                    let p = env.p() as usize;
                    let z1 = on_line(g, &t, p - 1).ok_or_else(bad)?;
                    let z2 = on_line(g, &t, p).ok_or_else(bad)?;
                    c.ensure(primitive(&z1), || "R lift is not primitive on C_[V,S,S](S)".into());
                    c.ensure(z2 == Gamma1::identity(), || "R lift moves the last dual line".into());
                }
            }
        }
        if let SKind::Sn(n) = g.kind() {
            if n >= 2 {
                for t in lift_generators(par, Essential::Q) {
                    let d = delta(g, &t)?;
                    c.ensure(d.on_z == Gamma1::identity(), || "Q lift moves Z(S)".into());
                    c.ensure(primitive(&d.on_sv), || "Q lift is not primitive on S/V".into());
                }
            }
        }
        Ok(())
    }));
    out
}

/// `(n+1) p^k + 1 mod (p^m - 1)` by repeated multiplication.
fn obstruction_residue(p: u64, m: u32, n: u64, k: u32) -> u64 {
    let modulus = p.pow(m) - 1;
    let mut pk = 1 % modulus;
    for _ in 0..k {
        pk = pk * p % modulus;
    }
    ((n + 1) % modulus * pk + 1) % modulus
}

pub(super) fn essential_exclusion(env: &Env) -> Vec<CheckReport> {
    let (p, m) = (env.p() as u64, env.m());
    vec![env.run("essential-exclusion", |c, _| {
        let mut cases = 0u64;
        for n in 1..p {
            let direct = (1..=m).all(|k| obstruction_residue(p, m, n, k) != 0);
            cases += 1;
            c.ensure(direct, || format!("p^m - 1 divides (n+1) p^k + 1 for n = {n}"));
            c.ensure(direct == crate::fusion::no_essential_obstruction(p, m, n), || {
                format!("the two residue computations disagree at n = {n}")
            });
        }
        c.count("cases", cases);
        Ok(())
    })]
}
