//! Orders, central series, centralisers and commutator structure.

use super::{coords, cv_by_conjugation, fp_rank, intersect, outside_v_indices, skip, units, v_indices, zero_space, Env};
use crate::field::FieldElement;
use crate::linalg::{Matrix, Subspace};
use crate::poly::{self, DTriple, Mat2, ModuleKind, ModuleVector};
use crate::report::CheckReport;
use crate::sgroup::{closure, subspace_set, PGroup, Subset};
use crate::structure::lemmas::{index_q_over_vs, jordan_profile};
use crate::structure::series::{
    commutator_chain_brute, commutator_chain_linear, element_chain_brute, element_chain_linear, lower_central_brute,
    upper_central_brute, upper_central_linear,
};
use crate::structure::{
    centralizer_in_v, centralizer_set, closed_form, commutator_with_s, commutator_with_s_set, exponent, fixed_space,
    preimage_of_commutators, standard_subgroups, Shape,
};

fn orders_of(sets: &[Subset]) -> Vec<u64> {
    sets.iter().map(|s| s.len()).collect()
}

fn shape_orders(g: &PGroup, shapes: &[Shape]) -> Vec<u64> {
    shapes.iter().map(|s| s.order(g) as u64).collect()
}

fn q_pow(env: &Env, k: usize) -> u64 {
    env.q().pow(k as u32)
}

pub(super) fn orders(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let d = g.dim();
    vec![
        env.run("orders.enumerate", |c, _| {
            if !env.exhaustive() {
                return skip("sampled tier: enumeration not attempted");
            }
            c.expect_eq("order", closure(g, &g.generators())?.len(), q_pow(env, d + 1));
            c.expect_eq("u_order", closure(g, &g.u_generators())?.len(), env.q());
            c.expect_eq("v_order", closure(g, &g.v_generators())?.len(), q_pow(env, d));
            Ok(())
        }),
        env.run("orders.axioms", |c, rng| {
            let id = g.identity();
            let mut bad = 0u64;
            for _ in 0..1000 {
                let (a, b, x) = (g.random(rng), g.random(rng), g.random(rng));
                let ok = g.mul(&g.mul(&a, &b), &x) == g.mul(&a, &g.mul(&b, &x))
                    && g.mul(&a, &id) == a
                    && g.mul(&id, &a) == a
                    && g.is_identity(&g.mul(&a, &g.inv(&a)))
                    && (!g.is_enumerable() || g.decode(g.encode(&a)) == a);
                if !ok {
                    bad += 1;
                    c.fail(format!("axiom failure at {}", g.format(&a)));
                }
            }
            c.count("triples", 1000);
            c.expect_eq("failures", bad, 0);
            Ok(())
        }),
        env.run("orders.embedding", |c, rng| {
            let par = g.parabolic();
            let mut bad = 0u64;
            for _ in 0..500 {
                let (a, b) = (g.random(rng), g.random(rng));
                let (pa, pb) = (g.to_parabolic(&a), g.to_parabolic(&b));
                let hom = g.to_parabolic(&g.mul(&a, &b)) == par.mul(&pa, &pb);
                let back = par.in_s(&pa) && g.from_parabolic(&pa)? == a;
                if !(hom && back) {
                    bad += 1;
                }
            }
            c.count("pairs", 500);
            c.expect_eq("failures", bad, 0);
            Ok(())
        }),
        env.run("orders.cs-of-v", |c, rng| {
            // linear route: u_c acts trivially on V only for c = 0
            let trivial = units(f, rng, 200).into_iter().filter(|&x| g.u_mat(x).is_identity()).count();
            c.expect_eq("units_acting_trivially", trivial, 0);
            if env.exhaustive() {
                let vset = closure(g, &g.v_generators())?;
                let cent = centralizer_set(g, &Subset::whole(g), &g.v_generators());
                c.ensure(cent == vset, || "C_S(V) differs from V".into());
                c.count("cs_v_order", cent.len());
            }
            Ok(())
        }),
    ]
}

pub(super) fn somnibus(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let n = g.degree();
    let ci = |i: usize| coords(g, 0..=i);
    let below = |i: usize| if i == 0 { zero_space(g) } else { ci(i - 1) };
    let mut out = vec![
        env.run("somnibus.1", |c, _| {
            for i in 0..=n {
                let lin = commutator_with_s(g, &ci(i));
                c.ensure(lin == below(i), || format!("[C_{i}, S] differs from C_{} (linear)", i as i64 - 1));
            }
            if env.exhaustive() {
                for i in 0..=n {
                    let brute = commutator_with_s_set(g, &subspace_set(g, &ci(i), false)?)?;
                    let want = subspace_set(g, &below(i), false)?;
                    c.ensure(brute == want, || format!("[C_{i}, S] differs from C_{} (enumeration)", i as i64 - 1));
                }
            }
            c.count("levels", n + 1);
            Ok(())
        }),
        env.run("somnibus.2", |c, _| {
            let upper = closed_form::upper_central(g)?;
            let lin = upper_central_linear(g);
            c.ensure(lin == upper, || "linear upper central series differs from C_{i-1}".into());
            let chain = commutator_chain_linear(g);
            c.ensure(chain == closed_form::commutator_chain(g)?, || "linear lower central series differs".into());
            c.count("upper_orders", shape_orders(g, &lin));
            if env.exhaustive() {
                let ub = upper_central_brute(g)?;
                let mut lb = lower_central_brute(g)?;
                let want = super::super::structure::series::shapes_to_sets(g, &upper)?;
                c.ensure(ub == want, || "enumerated upper central series differs from C_{i-1}".into());
                c.count("brute_upper_orders", orders_of(&ub));
                c.count("brute_lower_orders", orders_of(&lb));
                lb.reverse();
                c.ensure(lb == ub, || "upper and lower central series differ".into());
            }
            Ok(())
        }),
        env.run("somnibus.3", |c, rng| {
            let c0 = ci(0);
            let c1 = if n >= 1 { ci(1) } else { c0.clone() };
            let mut cs = 0;
            for x in units(f, rng, 200) {
                cs += 1;
                c.ensure(centralizer_in_v(g, x) == c0, || format!("C_V(u_{}) differs from C_0", f.format(x)));
                // v with [v, u_x] in C_0
                let mut nmat = g.u_mat(x).sub(f, &Matrix::identity(g.dim()));
                for r in 0..g.dim() {
                    nmat.set(r, 0, FieldElement::ZERO);
                }
                let pre = Subspace::span(f, g.dim(), &nmat.left_kernel(f));
                c.ensure(pre == c1, || format!("C_(V/C_0)(u_{}) differs from C_1/C_0", f.format(x)));
            }
            c.ensure(preimage_of_commutators(g, &c0) == c1, || "C_(V/C_0)(S) differs from C_1/C_0".into());
            c.count("units_checked", cs);
            if env.exhaustive() {
                let mut zs = 0u64;
                for idx in outside_v_indices(g) {
                    let z = g.decode(idx);
                    zs += 1;
                    if cv_by_conjugation(g, &z) != c0 {
                        c.fail(format!("C_V(z) differs from C_0 for z = {}", g.format(&z)));
                    }
                }
                c.count("z_checked", zs);
                // enumeration of V for each nonzero c
                let c0set = subspace_set(g, &c0, false)?;
                for x in f.nonzero_elements() {
                    let u = g.u(x);
                    let mut found = Subset::empty(g);
                    for idx in v_indices(g) {
                        let v = g.decode(idx);
                        if g.mul(&v, &u) == g.mul(&u, &v) {
                            found.insert(idx);
                        }
                    }
                    c.ensure(found == c0set, || format!("enumerated C_V(u_{}) differs from C_0", f.format(x)));
                }
            }
            Ok(())
        }),
    ];
    out.push(env.run("somnibus.4", |c, rng| {
        if n < 2 {
            return skip("n = 1: R is abelian of the same order as V");
        }
        let q = env.q() as u128;
        let max_cv = units(f, rng, 200).into_iter().map(|x| centralizer_in_v(g, x).rank()).max().unwrap_or(0);
        // an abelian A not inside V satisfies |A| <= |S/V| |C_V(z)| for z in A - V
        let bound = q * q.pow(max_cv as u32);
        c.count("abelian_bound", bound as u64);
        c.ensure(bound < g.v_order(), || "bound does not force A <= V".into());
        if env.exhaustive() && g.order() <= 100_000 {
            let mut max_cs = 0;
            for x in f.nonzero_elements() {
                let u = g.u(x);
                let cs = centralizer_set(g, &Subset::whole(g), std::slice::from_ref(&u)).len();
                max_cs = max_cs.max(cs);
            }
            c.count("max_cs_u", max_cs);
            c.ensure((max_cs as u128) < g.v_order(), || "some C_S(u_c) is as large as V".into());
        }
        Ok(())
    }));
    out.push(env.run("somnibus.5", |c, rng| {
        let par = g.parabolic();
        let vs = commutator_with_s(g, &Subspace::whole(f, g.dim()));
        let uvs = Shape::UV(vs.clone());
        let mut ts = par.borel_generators();
        ts.extend(par.sigma_generators());
        ts.extend((0..100).map(|_| par.random_borel(rng)));
        let mut checked = 0;
        for t in &ts {
            checked += 1;
            for x in g.v_generators() {
                c.ensure(g.in_v(&g.conj_by(&x, t)), || "V is not normalised".into());
            }
            for x in uvs.generators(g) {
                c.ensure(uvs.contains(g, &g.conj_by(&x, t)), || "U[V,S] is not normalised".into());
            }
        }
        c.count("elements", checked);
        Ok(())
    }));
    if n == env.p() as usize - 1 {
        out.push(env.run("somnibus.jordan", |c, rng| {
            let mut xs = vec![f.one()];
            xs.extend(units(f, rng, 5));
            for x in xs {
                let j = jordan_profile(f, &g.u_mat(x)).map_err(crate::parabolic::GroupError::from)?;
                c.ensure(j.over_k == vec![env.p() as usize], || format!("u_{} has blocks {:?}", f.format(x), j.over_k));
                c.ensure(j.over_fp == vec![env.p() as usize; env.m() as usize], || "blocks over F_p".into());
            }
            Ok(())
        }));
    }
    out
}

/// The `F_p`-span of `{[z, s] : s in S}` for `z` in `V` or outside it.
fn commutator_span(g: &PGroup, z: &crate::sgroup::SElement) -> Vec<Vec<FieldElement>> {
    let f = g.field();
    let mut vs: Vec<Vec<FieldElement>> = f.elements().map(|x| g.comm(z, &g.u(x)).v).collect();
    if !g.in_v(z) {
        let img = Subspace { dim: g.dim(), basis: Vec::new() }
            .sum(f, &Subspace::whole(f, g.dim()).image(f, &g.u_mat(z.c).sub(f, &Matrix::identity(g.dim()))));
        for b in &img.basis {
            for s in f.prime_basis() {
                vs.push(crate::linalg::vec_scale(f, b, s));
            }
        }
    }
    vs
}

pub(super) fn com_full(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let n = g.degree();
    let m = env.m() as usize;
    vec![env.run("com-full", |c, rng| {
        // z in Z_{w+1} - Z_w has [z, S] = Z_w = C_{w-1}; outside V, w = n
        let weight = |z: &crate::sgroup::SElement| -> usize {
            if !g.in_v(z) {
                return n;
            }
            z.v.iter().rposition(|x| !x.is_zero()).unwrap_or(0)
        };
        let mut tested = vec![0u64; n + 1];
        let mut test = |c: &mut crate::report::Check, z: &crate::sgroup::SElement| {
            if g.is_identity(z) {
                return;
            }
            let w = weight(z);
            let span = commutator_span(g, z);
            let rank = fp_rank(f, &span);
            let inside = span.iter().all(|v| v.iter().skip(w).all(|x| x.is_zero()));
            if rank != m * w || !inside {
                c.fail(format!("[z, S] is not Z_{w} for z = {} (F_p-rank {rank})", g.format(z)));
            }
            tested[w] += 1;
        };
        if env.exhaustive() {
            for idx in v_indices(g) {
                test(c, &g.decode(idx));
            }
            if g.order() <= 100_000 {
                for idx in outside_v_indices(g) {
                    test(c, &g.decode(idx));
                }
            } else {
                for _ in 0..2000 {
                    let mut z = g.random(rng);
                    if z.c.is_zero() {
                        z.c = f.one();
                    }
                    test(c, &z);
                }
            }
        } else {
            for w in 0..=n {
                for _ in 0..200 {
                    let mut z = g.random_v(rng);
                    for x in z.v.iter_mut().skip(w + 1) {
                        *x = FieldElement::ZERO;
                    }
                    if z.v[w].is_zero() {
                        z.v[w] = f.one();
                    }
                    test(c, &z);
                }
            }
            for _ in 0..200 {
                let mut z = g.random(rng);
                if z.c.is_zero() {
                    z.c = f.one();
                }
                test(c, &z);
            }
        }
        c.count("tested_by_weight", &tested);
        // enumerate [z, S] for one z of each weight when small
        if env.exhaustive() {
            for w in 1..=n {
                let z = g.vbasis(w, f.one());
                let gens: Vec<_> = f.elements().map(|x| g.comm(&z, &g.u(x))).collect();
                let set = closure(g, &gens)?;
                let want = subspace_set(g, &coords(g, 0..w), false)?;
                c.ensure(set == want, || format!("enumerated [z, S] differs from Z_{w}"));
            }
        }
        Ok(())
    })]
}

fn v_p_vector(f: &crate::field::Field, p: usize, rng: &mut super::Rng) -> ModuleVector {
    use rand::Rng;
    let coeffs = (0..=p).map(|_| FieldElement(rng.gen_range(0..f.q()) as u32)).collect();
    ModuleVector { kind: ModuleKind::Vn(p), coeffs }
}

pub(super) fn cvs_p(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let p = env.p() as usize;
    let generic = env.m() > 1;
    let need_generic = || if generic { Ok(()) } else { skip("requires q > p") };
    let whole = Subspace::whole(f, g.dim());
    vec![
        env.run("cvs-p.centre", |c, _| {
            let z = fixed_space(g);
            let want = if generic {
                coords(g, [0])
            } else {
                let mut b = vec![FieldElement::ZERO; p + 1];
                b[1] = f.one();
                b[p] = f.neg(f.one());
                Subspace::span(f, p + 1, &[coords(g, [0]).basis[0].clone(), b])
            };
            c.ensure(z == want, || "C_V(S) differs from the stated span".into());
            c.ensure(z == closed_form::center(g)?, || "closed form disagrees".into());
            c.expect_eq("centre_order", (env.q() as u128).pow(z.rank() as u32) as u64, if generic { env.q() } else { env.q() * env.q() });
            if env.exhaustive() {
                let ub = upper_central_brute(g)?;
                c.ensure(ub[0] == subspace_set(g, &want, false)?, || "enumerated centre differs".into());
                c.count("brute_upper_orders", orders_of(&ub));
            }
            Ok(())
        }),
        env.run("cvs-p.z2", |c, _| {
            need_generic()?;
            let z2 = preimage_of_commutators(g, &fixed_space(g));
            c.ensure(z2 == coords(g, [0, 1, p]), || "Z_2(S) differs from <x^p, x^(p-1) y, y^p>".into());
            c.expect_eq("z2_order", q_pow(env, z2.rank()), q_pow(env, 3));
            let lin = upper_central_linear(g);
            c.ensure(lin == closed_form::upper_central(g)?, || "upper central series differs from closed form".into());
            let orders = shape_orders(g, &lin);
            c.expect_eq("upper_length", lin.len(), p);
            for i in 2..p - 1 {
                c.ensure(orders[i] == orders[i - 1] * env.q(), || format!("|Z_{}/Z_{}| is not q", i + 1, i));
            }
            c.count("upper_orders", &orders);
            if env.exhaustive() {
                let ub = upper_central_brute(g)?;
                c.ensure(orders_of(&ub) == orders, || "enumerated upper central orders differ".into());
                c.ensure(ub[1] == subspace_set(g, &z2, false)?, || "enumerated Z_2 differs".into());
            }
            Ok(())
        }),
        env.run("cvs-p.vs", |c, rng| {
            need_generic()?;
            let vs = commutator_with_s(g, &whole);
            c.ensure(vs == coords(g, 0..=p - 2), || "[V,S] differs from <x^i y^(p-i) : i >= 2>".into());
            c.expect_eq("v_mod_vs", q_pow(env, p + 1 - vs.rank()), q_pow(env, 2));
            for x in units(f, rng, 100) {
                let vz = whole.image(f, &g.u_mat(x).sub(f, &Matrix::identity(p + 1)));
                c.ensure(vz == vs, || format!("[V, u_{}] differs from [V,S]", f.format(x)));
            }
            Ok(())
        }),
        env.run("cvs-p.cw", |c, rng| {
            need_generic()?;
            let w = coords(g, [0, p]);
            let vs = commutator_with_s(g, &whole);
            for x in units(f, rng, 100) {
                let cv = centralizer_in_v(g, x);
                let cw = intersect(f, &w, &cv);
                c.ensure(cv.rank() == 2, || format!("|C_V(u_{})| is not q^2", f.format(x)));
                c.ensure(cw.rank() == 1, || format!("|C_W(u_{})| is not q", f.format(x)));
                c.ensure(intersect(f, &vs, &cv) == cw, || "C_[V,S](z) differs from C_W(z)".into());
            }
            if env.exhaustive() {
                let mut zs = 0u64;
                for idx in outside_v_indices(g) {
                    let z = g.decode(idx);
                    zs += 1;
                    let cv = cv_by_conjugation(g, &z);
                    if cv.rank() != 2 || intersect(f, &w, &cv).rank() != 1 {
                        c.fail(format!("centraliser orders wrong for z = {}", g.format(&z)));
                    }
                }
                c.count("z_checked", zs);
            }
            Ok(())
        }),
        env.run("cvs-p.chain", |c, rng| {
            need_generic()?;
            let chain = commutator_chain_linear(g);
            c.ensure(chain == closed_form::commutator_chain(g)?, || "[V,S;i] differs from closed form".into());
            let ranks: Vec<usize> = chain.iter().map(|s| s.rank()).collect();
            c.expect_eq("chain_ranks", ranks, (1..p).rev().collect::<Vec<_>>());
            for x in units(f, rng, 50) {
                c.ensure(element_chain_linear(g, &whole, x) == chain, || format!("[V, u_{}; i] differs", f.format(x)));
            }
            if env.exhaustive() {
                let b = commutator_chain_brute(g)?;
                c.count("brute_chain_orders", orders_of(&b));
                let want: Vec<u64> = (1..p).rev().map(|k| q_pow(env, k)).collect();
                c.ensure(orders_of(&b) == want, || "enumerated chain orders differ".into());
            }
            Ok(())
        }),
        env.run("cvs-p.unique", |c, rng| {
            need_generic()?;
            let max_cv = units(f, rng, 100).into_iter().map(|x| centralizer_in_v(g, x).rank()).max().unwrap_or(0);
            let bound = q_pow(env, 1 + max_cv) as u128;
            c.count("abelian_bound", bound as u64);
            c.ensure(bound < g.v_order(), || "bound does not force A <= V".into());
            Ok(())
        }),
        env.run("cvs-p.psi", |c, rng| {
            let gens: Vec<Mat2> = std::iter::once(Mat2::new(f.one(), f.zero(), f.one(), f.one()))
                .chain(f.nonzero_elements().map(|t| {
                    let ti = f.inv(t).expect("unit");
                    Mat2::new(f.zero(), t, f.neg(ti), f.zero())
                }))
                .collect();
            let mut vs: Vec<ModuleVector> = (0..=p).map(|i| ModuleVector::monomial(f, ModuleKind::Vn(p), i, f.one())).collect();
            vs.extend((0..100).map(|_| v_p_vector(f, p, rng)));
            let mut bad = 0u64;
            for m in &gens {
                let d = DTriple::linear(f.one(), *m);
                for v in &vs {
                    let lhs = poly::psi_derivation(f, &poly::act_vn(f, v, &d).map_err(crate::parabolic::GroupError::from)?)
                        .map_err(crate::parabolic::GroupError::from)?;
                    let rhs = poly::act_vn(
                        f,
                        &poly::psi_derivation(f, v).map_err(crate::parabolic::GroupError::from)?,
                        &d,
                    )
                    .map_err(crate::parabolic::GroupError::from)?;
                    if lhs != rhs {
                        bad += 1;
                    }
                }
            }
            c.count("generators", gens.len());
            c.count("vectors", vs.len());
            c.expect_eq("equivariance_failures", bad, 0);
            let rows: Vec<Vec<FieldElement>> = (0..=p)
                .map(|i| {
                    poly::psi_derivation(f, &ModuleVector::monomial(f, ModuleKind::Vn(p), i, f.one()))
                        .map(|v| v.coeffs)
                        .map_err(crate::parabolic::GroupError::from)
                })
                .collect::<Result<_, _>>()?;
            let mat = Matrix::from_rows(&rows);
            let ker = Subspace::span(f, p + 1, &mat.left_kernel(f));
            c.expect_eq("kernel_rank", ker.rank(), 2);
            c.ensure(ker == coords(g, [0, p]), || "kernel differs from <x^p, y^p>".into());
            c.expect_eq("image_rank", mat.rank(f), p - 1);
            Ok(())
        }),
    ]
}

pub(super) fn cups_lambda(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let p = env.p() as usize;
    let generic = env.m() > 1;
    let whole = Subspace::whole(f, g.dim());
    let zs = coords(g, [p - 1, p]);
    let w = coords(g, 1..p);
    vec![
        env.run("cups-lambda.centre", |c, rng| {
            let z = fixed_space(g);
            c.ensure(z == zs, || "C_V(S) differs from the last two dual coordinates".into());
            c.expect_eq("centre_order", q_pow(env, z.rank()), q_pow(env, 2));
            for x in units(f, rng, 200) {
                c.ensure(centralizer_in_v(g, x) == zs, || format!("C_V(u_{}) differs from Z(S)", f.format(x)));
            }
            if env.exhaustive() {
                let mut n = 0u64;
                for idx in outside_v_indices(g) {
                    let zz = g.decode(idx);
                    n += 1;
                    if cv_by_conjugation(g, &zz) != zs {
                        c.fail(format!("C_V(z) differs from Z(S) for z = {}", g.format(&zz)));
                    }
                }
                c.count("z_checked", n);
                let ub = upper_central_brute(g)?;
                c.ensure(ub[0] == subspace_set(g, &zs, false)?, || "enumerated centre differs".into());
            }
            Ok(())
        }),
        env.run("cups-lambda.upper", |c, _| {
            let lin = upper_central_linear(g);
            c.ensure(lin == closed_form::upper_central(g)?, || "upper central series differs from closed form".into());
            let orders = shape_orders(g, &lin);
            c.expect_eq("upper_length", lin.len(), p);
            c.expect_eq("z2_order", orders[1], q_pow(env, 3));
            c.count("upper_orders", &orders);
            if env.exhaustive() {
                let ub = upper_central_brute(g)?;
                c.count("brute_upper_orders", orders_of(&ub));
                c.ensure(orders_of(&ub) == orders, || "enumerated upper central orders differ".into());
            }
            Ok(())
        }),
        env.run("cups-lambda.vs", |c, rng| {
            let vs = commutator_with_s(g, &whole);
            let idx = q_pow(env, p + 1 - vs.rank());
            if generic {
                c.expect_eq("v_mod_vs", idx, env.q());
                c.ensure(vs == w.sum(f, &zs), || "[V,S] differs from W C_V(S)".into());
            } else {
                c.expect_eq("v_mod_vs", idx, env.q() * env.q());
            }
            for x in units(f, rng, 100) {
                let vz = whole.image(f, &g.u_mat(x).sub(f, &Matrix::identity(p + 1)));
                if generic {
                    c.ensure(vz.rank() == p - 1, || format!("|V/[V, u_{}]| is not q^2", f.format(x)));
                    c.ensure(vz.sum(f, &zs) == vs, || "[V,z] C_V(S) differs from [V,S]".into());
                    c.ensure(vz.sum(f, &w) == vs, || "[V,z] W differs from [V,S]".into());
                } else {
                    c.ensure(vz == vs, || "[V,z] differs from [V,S]".into());
                }
                let wz = w.image(f, &g.u_mat(x).sub(f, &Matrix::identity(p + 1)));
                c.ensure(intersect(f, &vz, &w) == wz, || "[V,z] meets W outside [W,z]".into());
            }
            Ok(())
        }),
        env.run("cups-lambda.cw", |c, rng| {
            let cw = intersect(f, &w, &fixed_space(g));
            c.ensure(cw == coords(g, [p - 1]), || "C_W(S) differs from <xy^(p-1)>".into());
            for x in units(f, rng, 100) {
                let vz = whole.image(f, &g.u_mat(x).sub(f, &Matrix::identity(p + 1)));
                c.ensure(intersect(f, &vz, &centralizer_in_v(g, x)) == cw, || "C_[V,z](z) differs from C_W(S)".into());
            }
            Ok(())
        }),
        env.run("cups-lambda.chain", |c, rng| {
            if !generic {
                return skip("requires q > p");
            }
            let chain = commutator_chain_linear(g);
            c.ensure(chain == closed_form::commutator_chain(g)?, || "[V,S;i] differs from closed form".into());
            let ranks: Vec<usize> = chain.iter().map(|s| s.rank()).collect();
            c.expect_eq("chain_length", chain.len(), p - 1);
            for i in 2..ranks.len() {
                c.ensure(ranks[i - 1] == ranks[i] + 1, || format!("|[V,S;{}]/[V,S;{}]| is not q", i, i + 1));
            }
            c.expect_eq("last_rank", ranks.last().copied(), Some(1));
            c.count("chain_ranks", &ranks);
            for x in units(f, rng, 50) {
                let ec = element_chain_linear(g, &whole, x);
                c.ensure(ec.len() >= p - 1, || "[V,z;i] dies too early".into());
                for i in 1..p - 1 {
                    // [V,z;i] = [V,S;i] for 2 <= i < p
                    c.ensure(ec[i] == chain[i], || format!("[V, u_{}; {}] differs from [V,S;{}]", f.format(x), i + 1, i + 1));
                }
            }
            if env.exhaustive() {
                let b = commutator_chain_brute(g)?;
                c.ensure(orders_of(&b) == ranks.iter().map(|&r| q_pow(env, r)).collect::<Vec<_>>(), || {
                    "enumerated chain orders differ".into()
                });
                let vset = closure(g, &g.v_generators())?;
                let eb = element_chain_brute(g, &vset, &g.u(f.one()));
                c.count("brute_element_chain_orders", orders_of(&eb));
                for i in 1..p - 1 {
                    c.ensure(eb[i] == b[i], || format!("enumerated [V,z;{}] differs", i + 1));
                }
            }
            Ok(())
        }),
        env.run("cups-lambda.exponent", |c, rng| {
            let p2 = (p * p) as u64;
            if env.exhaustive() {
                c.expect_eq("exponent", exponent(g, &Subset::whole(g)), p2);
            } else {
                let e = (0..2000).map(|_| g.element_order(&g.random(rng))).max().unwrap_or(1);
                c.expect_eq("sampled_exponent", e, p2);
            }
            Ok(())
        }),
        env.run("cups-lambda.unique", |c, rng| {
            let max_cv = units(f, rng, 100).into_iter().map(|x| centralizer_in_v(g, x).rank()).max().unwrap_or(0);
            let bound = q_pow(env, 1 + max_cv) as u128;
            c.count("abelian_bound", bound as u64);
            c.ensure(bound < g.v_order(), || "bound does not force A <= V".into());
            Ok(())
        }),
    ]
}

pub(super) fn charsub(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let f = g.field();
    let p = env.p() as u64;
    vec![env.run("charsub", |c, rng| {
        let std = standard_subgroups(g)?;
        let uvs = &std["U[V,S]"];
        let index_q = (g.order() / env.q() as u128) as u64;
        if env.exhaustive() {
            let cands = index_q_over_vs(g)?;
            c.expect_eq("candidates", cands.len() as u64, env.q() + 1);
            let gens = g.generators();
            let mut good = Vec::new();
            for (name, h) in &cands {
                let set = h.elements()?;
                let normal = h.gens().iter().all(|x| gens.iter().all(|s| set.contains(g.encode(&g.conj(x, s)))));
                let exp = exponent(g, set);
                if normal && exp == p && set.len() == index_q {
                    good.push(name.clone());
                }
            }
            c.count("qualifying", &good);
            c.ensure(good.len() == 2 && good.contains(&"V".to_string()) && good.contains(&"A[0]".to_string()), || {
                format!("qualifying subgroups: {good:?}")
            });
            let a0 = &cands.iter().find(|(n, _)| n == "A[0]").expect("A[0] is listed").1;
            c.ensure(a0.elements()? == uvs.elements()?, || "A[0] differs from U[V,S]".into());
            c.expect_eq("uvs_exponent", exponent(g, uvs.elements()?), p);
            c.expect_eq("s_exponent", exponent(g, &Subset::whole(g)), p * p);
        } else {
            // U[V,S] and V have exponent p on samples; the other candidates carry elements of order p^2
            let vs = commutator_with_s(g, &Subspace::whole(f, g.dim()));
            let shape = Shape::UV(vs.clone());
            let mut bad = 0;
            for _ in 0..500 {
                let mut x = g.random(rng);
                x.v[0] = FieldElement::ZERO;
                if !shape.contains(g, &x) || g.element_order(&x) != p {
                    bad += 1;
                }
            }
            c.expect_eq("uvs_exponent_failures", bad, 0);
            for x in g.v_generators() {
                for s in shape.generators(g) {
                    c.ensure(shape.contains(g, &g.conj(&s, &x)), || "U[V,S] is not normal".into());
                }
            }
            let mut missing = 0;
            for t in units(f, rng, 50) {
                let found = (0..200).any(|_| {
                    let mut x = g.random(rng);
                    if x.c.is_zero() {
                        x.c = f.one();
                    }
                    x.v[0] = f.mul(t, x.c);
                    g.element_order(&x) == p * p
                });
                if !found {
                    missing += 1;
                }
            }
            c.expect_eq("candidates_without_order_p2_witness", missing, 0);
        }
        Ok(())
    })]
}
