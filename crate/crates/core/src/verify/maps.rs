//! The maps `gamma`, `S_Lambda -> S_{p-1}` and the truncations onto smaller `S_k`.

use super::{coords, skip, Env, Res, Rng};
use crate::field::FieldElement;
use crate::report::{Check, CheckReport};
use crate::sgroup::{subspace_set, PGroup, SElement, Subset};
use crate::structure::maps::{gamma, hom_certificate, hom_sampled, lambda_target, lambda_to_sp1, truncate};
use crate::structure::series::{commutator_chain_linear, upper_central_linear};
use crate::structure::{shape_set, Shape};

/// Certifies `f : shape -> dst` as a homomorphism and records kernel and
/// image orders; returns the kernel as a set when enumerated.
fn certify(
    c: &mut Check,
    env: &Env,
    src: &PGroup,
    shape: &Shape,
    dst: &PGroup,
    f: &dyn Fn(&SElement) -> SElement,
    rng: &mut Rng,
) -> Result<Option<Subset>, super::Stop> {
    if env.exhaustive() {
        let domain = shape_set(src, shape)?;
        let stats = hom_certificate(src, &domain, &shape.generators(src), dst, f)?;
        c.count("pairs", stats.pairs);
        c.expect_eq("hom_failures", stats.failures, 0);
        c.expect_eq("domain_order", stats.domain_order as u128, shape.order(src));
        c.count("kernel_order", stats.kernel_order);
        c.count("image_order", stats.image_order);
        c.ensure(stats.image_order as u128 == dst.order(), || "map is not surjective".into());
        let kernel = Subset::filter(src, |i| domain.contains(i) && dst.is_identity(&f(&src.decode(i))));
        Ok(Some(kernel))
    } else {
        let sample = |r: &mut Rng| {
            let mut x = src.random(r);
            if let Shape::V(w) | Shape::UV(w) = shape {
                // project to the coordinate subspace w
                for (k, a) in x.v.iter_mut().enumerate() {
                    if !w.contains(src.field(), &coord_vec(src, k)) {
                        *a = FieldElement::ZERO;
                    }
                }
                if matches!(shape, Shape::V(_)) {
                    x.c = FieldElement::ZERO;
                }
            }
            x
        };
        let failures = hom_sampled(src, dst, sample, f, 500, rng);
        c.count("pairs", 500);
        c.expect_eq("hom_failures", failures, 0);
        Ok(None)
    }
}

fn coord_vec(g: &PGroup, k: usize) -> Vec<FieldElement> {
    let mut v = vec![FieldElement::ZERO; g.dim()];
    v[k] = g.field().one();
    v
}

/// Coordinates `j` (over a prime-field basis) whose basis vectors `f` kills.
fn killed_coords(g: &PGroup, dst: &PGroup, f: &dyn Fn(&SElement) -> SElement) -> Vec<usize> {
    let fe = g.field();
    (0..g.dim()).filter(|&j| fe.prime_basis().into_iter().all(|b| dst.is_identity(&f(&g.vbasis(j, b))))).collect()
}

/// Whether `f` is injective on the span of the basis vectors not in `killed`
/// and on `U`, checked by rank of the images.
fn linear_kernel_ok(g: &PGroup, f: &dyn Fn(&SElement) -> SElement, killed: &[usize]) -> bool {
    let fe = g.field();
    let mut rows = Vec::new();
    for j in (0..g.dim()).filter(|j| !killed.contains(j)) {
        for b in fe.prime_basis() {
            rows.push(f(&g.vbasis(j, b)).v);
        }
    }
    let want = rows.len();
    super::fp_rank(fe, &rows) == want && fe.prime_basis().into_iter().all(|b| f(&g.u(b)).c == b)
}

pub(super) fn gamma_iso(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let fe = g.field();
    let n = g.degree();
    vec![
        env.run("gamma-iso", |c, rng| {
            let dst = PGroup::sn(fe, n - 1)?;
            let map = |x: &SElement| gamma(g, x);
            let kernel = certify(c, env, g, &Shape::Whole, &dst, &map, rng)?;
            if let Some(k) = kernel {
                c.ensure(k == subspace_set(g, &coords(g, [0]), false)?, || "kernel differs from Z(S)".into());
            }
            let killed = killed_coords(g, &dst, &map);
            c.expect_eq("killed_coordinates", killed.clone(), vec![0]);
            c.ensure(linear_kernel_ok(g, &map, &killed), || "kernel is larger than Z(S)".into());
            Ok(())
        }),
        env.run("gamma-iso.iterated", |c, _| {
            // gamma^i : S_n -> S_{n-i} has kernel Z_i
            let mut groups = vec![g.clone()];
            for k in 1..n {
                groups.push(PGroup::sn(fe, n - k)?);
            }
            for i in 1..n {
                let map = |x: &SElement| {
                    let mut y = x.clone();
                    for src in &groups[..i] {
                        y = gamma(src, &y);
                    }
                    y
                };
                let killed = killed_coords(g, &groups[i], &map);
                c.ensure(killed == (0..i).collect::<Vec<_>>(), || format!("gamma^{i} kills {killed:?}"));
                c.ensure(linear_kernel_ok(g, &map, &killed), || format!("kernel of gamma^{i} exceeds Z_{i}"));
                if env.exhaustive() {
                    let mut k = 0u64;
                    for idx in super::v_indices(g) {
                        if groups[i].is_identity(&map(&g.decode(idx))) {
                            k += 1;
                        }
                    }
                    c.ensure(k == env.q().pow(i as u32), || format!("|ker gamma^{i}| = {k}"));
                }
            }
            Ok(())
        }),
        env.run("gamma-iso.examples", |c, _| {
            let one = fe.one();
            c.ensure(g.is_identity(&gamma(g, &g.vbasis(0, one))), || "gamma(x^n) is not trivial".into());
            for x in fe.elements() {
                let got = gamma(g, &g.u(x));
                c.ensure(got.c == x && got.v.iter().all(|a| a.is_zero()), || "gamma(u_c) differs from u_c".into());
            }
            if n == 2 && env.p() == 3 {
                // (0, xy) -> (0, x)
                let got = gamma(g, &g.vbasis(1, one));
                c.ensure(got.c.is_zero() && got.v == vec![one, FieldElement::ZERO], || "gamma(xy) is not x".into());
            }
            Ok(())
        }),
    ]
}

pub(super) fn lambda_iso(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let fe = g.field();
    let p = env.p() as usize;
    vec![
        env.run("lambda-iso", |c, rng| {
            let dst = lambda_target(g)?;
            let map = |x: &SElement| lambda_to_sp1(g, x);
            let kernel = certify(c, env, g, &Shape::Whole, &dst, &map, rng)?;
            if let Some(k) = kernel {
                c.expect_eq("kernel_order", k.len(), env.q());
                c.ensure(k == subspace_set(g, &coords(g, [p]), false)?, || "kernel is not the last dual line".into());
            } else if dst.is_enumerable() {
                let mut img = Subset::empty(&dst);
                for _ in 0..500 {
                    img.insert(dst.encode(&map(&g.random(rng))));
                }
                c.count("sampled_image_size", img.len());
            }
            let killed = killed_coords(g, &dst, &map);
            c.expect_eq("killed_coordinates", killed.clone(), vec![p]);
            c.ensure(linear_kernel_ok(g, &map, &killed), || "kernel is larger than a line".into());
            Ok(())
        }),
        env.run("lambda-iso.examples", |c, _| {
            let dst = lambda_target(g)?;
            let one = fe.one();
            for x in fe.elements() {
                let got = lambda_to_sp1(g, &g.u(x));
                c.ensure(got == dst.u(x), || "u_c does not map to u_c".into());
            }
            for j in 0..p {
                c.ensure(lambda_to_sp1(g, &g.vbasis(j, one)) == dst.vbasis(p - 1 - j, one), || {
                    format!("dual coordinate {j} does not map to coordinate {}", p - 1 - j)
                });
            }
            Ok(())
        }),
    ]
}

fn truncation_iso(c: &mut Check, env: &Env, w: &crate::linalg::Subspace, k: usize, rng: &mut Rng) -> Res {
    let g = env.g();
    let fe = g.field();
    c.ensure(*w == coords(g, 0..=k), || format!("subgroup is not U C_{k}"));
    let dst = PGroup::sn(fe, k)?;
    let map = move |x: &SElement| truncate(x, k);
    let shape = Shape::UV(w.clone());
    let kernel = certify(c, env, g, &shape, &dst, &map, rng)?;
    if let Some(kset) = kernel {
        c.expect_eq("kernel_order", kset.len(), 1);
    }
    c.expect_eq("order", shape.order(g), dst.order());
    Ok(())
}

pub(super) fn similarity(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let n = g.degree();
    let chain = commutator_chain_linear(g);
    (1..n)
        .map(|i| {
            env.run(&format!("similarity.{i}"), |c, rng| {
                c.set_param("i", i);
                let Some(w) = chain.get(i - 1) else {
                    return skip("commutator chain is shorter than expected");
                };
                truncation_iso(c, env, w, n - i, rng)
            })
        })
        .collect()
}

pub(super) fn tower(env: &Env) -> Vec<CheckReport> {
    let g = env.g();
    let fe = g.field();
    let n = g.degree();
    let upper = upper_central_linear(g);
    (2..=n)
        .map(|i| {
            env.run(&format!("tower.{i}"), |c, rng| {
                c.set_param("i", i);
                // N^i = U Z_{i+1}, with Z_{n+1} replaced by V
                let w = match upper.get(i) {
                    Some(Shape::V(w)) if i < n => w.clone(),
                    _ if i == n => crate::linalg::Subspace::whole(fe, g.dim()),
                    other => return Err(super::Stop::Error(format!("unexpected Z_{}: {other:?}", i + 1))),
                };
                c.expect_eq("order", Shape::UV(w.clone()).order(g), (env.q() as u128).pow(i as u32 + 2));
                truncation_iso(c, env, &w, i, rng)
            })
        })
        .collect()
}
