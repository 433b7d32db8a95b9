//! Named verification suites.
//!
//! A suite is a list of checks run against one field and one target group.
//! [`plan`] expands a suite id (or `all`) and the command-line selection into
//! independent [`Job`]s; [`run_job`] executes one job. Jobs share nothing, so
//! callers may run them in parallel and print the results in plan order.

mod fusion;
mod local;
mod maps;
mod structural;

use std::fmt;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};
use crate::fusion::system::{describe_system, SystemDescriptor};
use crate::parabolic::GroupError;
use crate::report::{Check, CheckReport};
use crate::linalg::{vec_add, vec_neg, vec_scale, Matrix, Subspace};
use crate::sgroup::{size_cap, PGroup, SElement, SKind};

pub type Rng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Exhaustive,
    Sampled,
}

impl Tier {
    pub fn parse(s: &str) -> Option<Tier> {
        match s {
            "exhaustive" => Some(Tier::Exhaustive),
            "sampled" => Some(Tier::Sampled),
            _ => None,
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Exhaustive => "exhaustive",
            Tier::Sampled => "sampled",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; run `polyfus verify list` for the registered ids")]
    UnknownSuite(String),
    #[error("invalid field: {0}")]
    Field(#[from] FieldError),
    #[error("invalid system: {0}")]
    System(String),
    #[error("{0}")]
    Usage(String),
}

/// Parameters taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub p: Option<u32>,
    pub m: Option<u32>,
    pub n: Option<usize>,
    pub system: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub seed: u64,
    pub tier: Option<Tier>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, tier: None }
    }
}

type NRange = fn(u32, u32) -> Result<(usize, usize), &'static str>;
type Applies = fn(u32, u32) -> Result<(), &'static str>;

pub struct Suite {
    pub id: &'static str,
    pub summary: &'static str,
    /// fields run when `-p` is not given
    fields: &'static [(u32, u32, Option<Tier>)],
    /// range of `n` for `S_n` targets
    sn: Option<NRange>,
    /// whether `S_Lambda` is a target
    lambda: Option<Applies>,
    run: fn(&Env) -> Vec<CheckReport>,
}

impl fmt::Debug for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Suite").field("id", &self.id).finish()
    }
}

const GRID: &[(u32, u32, Option<Tier>)] =
    &[(3, 1, None), (3, 2, None), (3, 3, None), (5, 1, None), (5, 2, Some(Tier::Sampled))];
const GRID_Q: &[(u32, u32, Option<Tier>)] = &[(3, 2, None), (3, 3, None), (5, 2, Some(Tier::Sampled))];
const CENTS: &[(u32, u32, Option<Tier>)] = &[(3, 1, None), (3, 2, None), (5, 1, None)];
const EXCLUSION: &[(u32, u32, Option<Tier>)] =
    &[(3, 2, None), (3, 3, None), (5, 2, None), (5, 3, None), (7, 2, None), (7, 3, None)];

fn below_p(p: u32, _: u32) -> Result<(usize, usize), &'static str> {
    Ok((1, p as usize - 1))
}

fn two_below_p(p: u32, _: u32) -> Result<(usize, usize), &'static str> {
    if p < 3 {
        return Err("needs 2 <= n <= p-1");
    }
    Ok((2, p as usize - 1))
}

fn up_to_p(p: u32, _: u32) -> Result<(usize, usize), &'static str> {
    Ok((1, p as usize))
}

fn exactly_p(p: u32, _: u32) -> Result<(usize, usize), &'static str> {
    Ok((p as usize, p as usize))
}

fn below_p_generic(p: u32, m: u32) -> Result<(usize, usize), &'static str> {
    if m < 2 {
        return Err("requires q > p");
    }
    Ok((1, p as usize - 1))
}

fn always(_: u32, _: u32) -> Result<(), &'static str> {
    Ok(())
}

fn generic(_: u32, m: u32) -> Result<(), &'static str> {
    if m < 2 {
        return Err("requires q > p");
    }
    Ok(())
}

pub static SUITES: &[Suite] = &[
    Suite {
        id: "orders",
        summary: "group orders, group axioms and the embedding into the parabolic group",
        fields: GRID,
        sn: Some(up_to_p),
        lambda: Some(always),
        run: structural::orders,
    },
    Suite {
        id: "somnibus",
        summary: "weight filtration, central series and centralisers in S_n(q), n <= p-1",
        fields: GRID,
        sn: Some(below_p),
        lambda: None,
        run: structural::somnibus,
    },
    Suite {
        id: "com-full",
        summary: "[z, S] = Z_i for z in Z_{i+1} minus Z_i",
        fields: GRID,
        sn: Some(below_p),
        lambda: None,
        run: structural::com_full,
    },
    Suite {
        id: "cvs-p",
        summary: "structure of S_p(q) and the map psi: V_p -> V_{p-2}",
        fields: GRID,
        sn: Some(exactly_p),
        lambda: None,
        run: structural::cvs_p,
    },
    Suite {
        id: "cups-lambda",
        summary: "centre, central series and commutator chains of S_Lambda(q)",
        fields: GRID,
        sn: None,
        lambda: Some(always),
        run: structural::cups_lambda,
    },
    Suite {
        id: "charsub",
        summary: "V and U[V,S] are the only normal exponent-p subgroups of index q in S_Lambda(q)",
        fields: GRID_Q,
        sn: None,
        lambda: Some(generic),
        run: structural::charsub,
    },
    Suite {
        id: "gamma-iso",
        summary: "gamma: S_n(q) -> S_{n-1}(q) is onto with kernel Z(S)",
        fields: GRID,
        sn: Some(two_below_p),
        lambda: None,
        run: maps::gamma_iso,
    },
    Suite {
        id: "lambda-iso",
        summary: "S_Lambda(q) modulo the last dual coordinate is S_{p-1}(q)",
        fields: GRID,
        sn: None,
        lambda: Some(always),
        run: maps::lambda_iso,
    },
    Suite {
        id: "similarity",
        summary: "U[V,S;i] is isomorphic to S_{n-i}(q)",
        fields: GRID,
        sn: Some(two_below_p),
        lambda: None,
        run: maps::similarity,
    },
    Suite {
        id: "tower",
        summary: "N^i = R Z_{i+1}(S) is isomorphic to S_i(q)",
        fields: GRID,
        sn: Some(two_below_p),
        lambda: None,
        run: maps::tower,
    },
    Suite {
        id: "centslem",
        summary: "centralisers in SL_2(q) and in D* of fixed spaces",
        fields: CENTS,
        sn: Some(up_to_p),
        lambda: Some(always),
        run: local::centslem,
    },
    Suite {
        id: "action-centre",
        summary: "C_L(V/[V,S]) acts irreducibly on Z(S_n(q))",
        fields: GRID,
        sn: Some(two_below_p),
        lambda: None,
        run: local::action_centre,
    },
    Suite {
        id: "action-centre-lambda",
        summary: "large cyclic p'-subgroups fixing a line of Z(S_Lambda(q)) have fixed space of order q",
        fields: GRID_Q,
        sn: None,
        lambda: Some(generic),
        run: local::action_centre_lambda,
    },
    Suite {
        id: "intersec",
        summary: "intersections of S-conjugates of R and Q",
        fields: GRID,
        sn: Some(below_p),
        lambda: Some(always),
        run: local::intersec,
    },
    Suite {
        id: "s-conj",
        summary: "elements of A[V,S] outside [V,S] are S-conjugate into A",
        fields: GRID,
        sn: Some(below_p),
        lambda: Some(always),
        run: local::s_conj,
    },
    Suite {
        id: "size-ess",
        summary: "normalisers, centres and intersections with V of R and Q",
        fields: GRID,
        sn: Some(below_p),
        lambda: Some(always),
        run: local::size_ess,
    },
    Suite {
        id: "r-cap",
        summary: "R meets its P*-conjugates inside V",
        fields: GRID_Q,
        sn: Some(below_p_generic),
        lambda: Some(generic),
        run: local::r_cap,
    },
    Suite {
        id: "delta-kernel",
        summary: "torus elements with trivial delta centralise S",
        fields: GRID,
        sn: Some(below_p),
        lambda: None,
        run: fusion::delta_kernel,
    },
    Suite {
        id: "psi-star",
        summary: "psi*: N_{P*}(R) -> Gamma L_4(q) is an injective homomorphism",
        fields: GRID_Q,
        sn: None,
        lambda: Some(always),
        run: fusion::psi_star,
    },
    Suite {
        id: "out0",
        summary: "orders of Out^0 for the polynomial fusion systems",
        fields: GRID_Q,
        sn: Some(below_p_generic),
        lambda: Some(generic),
        run: fusion::out0,
    },
    Suite {
        id: "essential-exclusion",
        summary: "(n+1) p^k + 1 is never divisible by p^m - 1",
        fields: EXCLUSION,
        sn: None,
        lambda: None,
        run: fusion::essential_exclusion,
    },
];

pub fn find_suite(id: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.id == id)
}

/// One suite at one field and target.
#[derive(Debug, Clone)]
pub struct Job {
    pub suite: &'static Suite,
    pub p: u32,
    pub m: u32,
    pub target: Option<SKind>,
    hint: Option<Tier>,
    forced: Option<Tier>,
    seed: u64,
    system: Option<SystemDescriptor>,
    skip: Option<String>,
}

pub fn target_name(t: Option<SKind>) -> String {
    match t {
        Some(SKind::Sn(n)) => format!("Sn:{n}"),
        Some(SKind::SLambda) => "SLambda".into(),
        None => "-".into(),
    }
}

fn grid_cap(p: u32) -> usize {
    if p <= 3 {
        2
    } else {
        3
    }
}

/// Expands `suite` (an id or `all`) into jobs.
pub fn plan(suite: &str, sel: &Selection, cfg: &RunConfig) -> Result<Vec<Job>, VerifyError> {
    let suites: Vec<&'static Suite> = if suite == "all" {
        SUITES.iter().collect()
    } else {
        vec![find_suite(suite).ok_or_else(|| VerifyError::UnknownSuite(suite.into()))?]
    };
    let mut sel = sel.clone();
    let system = match &sel.system {
        Some(name) => {
            let d = describe_system(name, sel.p, sel.m, sel.n).map_err(|e| VerifyError::System(e.to_string()))?;
            sel.p = Some(d.base.p);
            sel.m = Some(d.base.m);
            sel.n = d.base.n;
            Some(d)
        }
        None => None,
    };
    if sel.p.is_none() && (sel.m.is_some() || sel.n.is_some()) {
        return Err(VerifyError::Usage("-m and -n need -p".into()));
    }
    if let Some(p) = sel.p {
        Field::new(p, sel.m.unwrap_or(1))?;
    }
    let mut jobs = Vec::new();
    for s in suites {
        let fields: Vec<(u32, u32, Option<Tier>)> = match sel.p {
            Some(p) => vec![(p, sel.m.unwrap_or(1), None)],
            None => s.fields.to_vec(),
        };
        let explicit = sel.p.is_some();
        for (p, m, hint) in fields {
            let base = Job {
                suite: s,
                p,
                m,
                target: None,
                hint,
                forced: cfg.tier,
                seed: cfg.seed,
                system: system.clone(),
                skip: None,
            };
            let skip = |target: Option<SKind>, why: String| Job { target, skip: Some(why), ..base.clone() };
            if p == 2 {
                jobs.push(skip(None, "characteristic 2 is outside the range of the group constructors".into()));
                continue;
            }
            if let Some(d) = &system {
                // the system fixes the target
                let t = d.kind();
                let ok = match t {
                    SKind::Sn(n) => s.sn.map(|f| f(p, m).map(|(lo, hi)| lo <= n && n <= hi).unwrap_or(false)),
                    SKind::SLambda => s.lambda.map(|f| f(p, m).is_ok()),
                };
                match ok {
                    Some(true) => jobs.push(Job { target: Some(t), ..base.clone() }),
                    Some(false) => jobs.push(skip(Some(t), format!("{} is outside the range of this suite", target_name(Some(t))))),
                    None if s.sn.is_none() && s.lambda.is_none() => jobs.push(base.clone()),
                    None => jobs.push(skip(Some(t), "target kind not covered by this suite".into())),
                }
                continue;
            }
            if s.sn.is_none() && s.lambda.is_none() {
                if !explicit || m >= 2 {
                    jobs.push(base.clone());
                } else {
                    jobs.push(skip(None, "requires q > p".into()));
                }
                continue;
            }
            let before = jobs.len();
            if let Some(f) = s.sn {
                match (f(p, m), sel.n) {
                    (Ok((lo, hi)), Some(n)) => {
                        if lo <= n && n <= hi {
                            jobs.push(Job { target: Some(SKind::Sn(n)), ..base.clone() });
                        } else {
                            jobs.push(skip(Some(SKind::Sn(n)), format!("n = {n} outside {lo}..={hi}")));
                        }
                    }
                    (Ok((lo, hi)), None) => {
                        let hi = if explicit { hi } else { hi.min(grid_cap(p).max(lo)) };
                        for n in lo..=hi {
                            jobs.push(Job { target: Some(SKind::Sn(n)), ..base.clone() });
                        }
                    }
                    (Err(why), n) if explicit => jobs.push(skip(n.map(SKind::Sn), why.into())),
                    (Err(_), _) => {}
                }
            }
            if let Some(f) = s.lambda {
                let in_grid = explicit || m == 2;
                match f(p, m) {
                    Ok(()) if in_grid => jobs.push(Job { target: Some(SKind::SLambda), ..base.clone() }),
                    Ok(()) => {}
                    Err(why) if explicit && s.sn.is_none() => jobs.push(skip(Some(SKind::SLambda), why.into())),
                    Err(_) => {}
                }
            }
            if explicit && jobs.len() == before {
                jobs.push(skip(None, "no applicable target".into()));
            }
        }
    }
    Ok(jobs)
}

/// What a check body can end with besides success.
#[derive(Debug)]
pub(crate) enum Stop {
    Skip(String),
    Error(String),
}

impl From<GroupError> for Stop {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::TooLarge { order, cap } => Stop::Skip(format!("size: order {order} exceeds the cap {cap}")),
            GroupError::Unsupported(s) => Stop::Skip(s),
            e => Stop::Error(e.to_string()),
        }
    }
}

impl From<FieldError> for Stop {
    fn from(e: FieldError) -> Self {
        Stop::Error(e.to_string())
    }
}

pub(crate) type Res = Result<(), Stop>;

pub(crate) fn skip(why: impl Into<String>) -> Res {
    Err(Stop::Skip(why.into()))
}

/// Everything a suite sees.
pub struct Env {
    pub suite: &'static str,
    pub field: Field,
    group: Option<PGroup>,
    pub target: Option<SKind>,
    pub tier: Tier,
    seed: u64,
    pub system: Option<SystemDescriptor>,
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Env {
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// The target group; suites with targets always have one.
    pub fn g(&self) -> &PGroup {
        self.group.as_ref().expect("suite has a target group")
    }

    pub fn exhaustive(&self) -> bool {
        self.tier == Tier::Exhaustive
    }

    pub fn rng(&self, check: &str) -> Rng {
        let key = format!("{}|{}|{}|{}|{}", self.suite, self.p(), self.m(), target_name(self.target), check);
        Rng::seed_from_u64(self.seed ^ fnv1a(&key))
    }

    pub fn check(&self, id: &str) -> Check {
        Check::new(id)
            .param("p", self.p())
            .param("m", self.m())
            .param("q", self.q())
            .param("target", target_name(self.target))
            .param("tier", self.tier)
    }

    pub(crate) fn run(&self, id: &str, body: impl FnOnce(&mut Check, &mut Rng) -> Res) -> CheckReport {
        let mut c = self.check(id);
        let mut rng = self.rng(id);
        match body(&mut c, &mut rng) {
            Ok(()) => c.finish(),
            Err(Stop::Skip(why)) => c.skip(why),
            Err(Stop::Error(e)) => {
                c.fail(e);
                c.finish()
            }
        }
    }
}

fn job_skip(job: &Job, why: String) -> CheckReport {
    Check::new(job.suite.id)
        .param("p", job.p)
        .param("m", job.m)
        .param("target", target_name(job.target))
        .skip(why)
}

pub fn run_job(job: &Job) -> Vec<CheckReport> {
    if let Some(why) = &job.skip {
        return vec![job_skip(job, why.clone())];
    }
    let field = match Field::new(job.p, job.m) {
        Ok(f) => f,
        Err(e) => return vec![job_skip(job, e.to_string())],
    };
    let group = match job.target {
        Some(t) => match PGroup::new(field.clone(), t) {
            Ok(g) => Some(g),
            Err(e) => return vec![job_skip(job, e.to_string())],
        },
        None => None,
    };
    let fits = group.as_ref().map_or(true, |g| g.is_enumerable());
    let tier = job.forced.or(job.hint).unwrap_or(if fits { Tier::Exhaustive } else { Tier::Sampled });
    if tier == Tier::Exhaustive && !fits {
        let g = group.as_ref().expect("checked above");
        return vec![job_skip(job, format!("size: order {} exceeds the cap {}", g.order(), size_cap()))];
    }
    let env = Env {
        suite: job.suite.id,
        field,
        group,
        target: job.target,
        tier,
        seed: job.seed,
        system: job.system.clone(),
    };
    (job.suite.run)(&env)
}

/// Runs every job in order on the current thread.
pub fn run_all(jobs: &[Job]) -> Vec<CheckReport> {
    jobs.iter().flat_map(run_job).collect()
}

/// Rank over `F_p` of vectors in `K^d`.
pub(crate) fn fp_rank(f: &Field, vs: &[Vec<FieldElement>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let fp = Field::new(f.p(), 1).expect("prime field");
    let rows: Vec<Vec<FieldElement>> = vs
        .iter()
        .map(|v| v.iter().flat_map(|&x| f.coeffs(x)).map(FieldElement).collect())
        .collect();
    crate::linalg::Matrix::from_rows(&rows).rank(&fp)
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Span of the coordinate vectors `e_i` of `V`.
pub(crate) fn coords(g: &PGroup, it: impl IntoIterator<Item = usize>) -> Subspace {
    Subspace::coordinate(g.field(), g.dim(), it)
}

pub(crate) fn zero_space(g: &PGroup) -> Subspace {
    Subspace { dim: g.dim(), basis: Vec::new() }
}

pub(crate) fn intersect(f: &Field, a: &Subspace, b: &Subspace) -> Subspace {
    if a.rank() == 0 || b.rank() == 0 {
        return Subspace { dim: a.dim, basis: Vec::new() };
    }
    let mut rows = a.basis.clone();
    rows.extend(b.basis.iter().map(|v| vec_neg(f, v)));
    let ker = Matrix::from_rows(&rows).left_kernel(f);
    let vs: Vec<Vec<FieldElement>> = ker
        .iter()
        .map(|k| {
            let mut acc = vec![FieldElement::ZERO; a.dim];
            for (i, b) in a.basis.iter().enumerate() {
                acc = vec_add(f, &acc, &vec_scale(f, b, k[i]));
            }
            acc
        })
        .collect();
    Subspace::span(f, a.dim, &vs)
}

/// All of `K^*` when small, otherwise `k` random units.
pub(crate) fn units(f: &Field, rng: &mut Rng, k: usize) -> Vec<FieldElement> {
    if f.q() - 1 <= k as u64 {
        return f.nonzero_elements().collect();
    }
    (0..k).map(|_| FieldElement(rng.gen_range(1..f.q()) as u32)).collect()
}

/// `C_V(z)` from the matrix of `v -> [v, z]` built with the group law.
pub(crate) fn cv_by_conjugation(g: &PGroup, z: &SElement) -> Subspace {
    let f = g.field();
    let rows: Vec<Vec<FieldElement>> = (0..g.dim()).map(|i| g.comm(&g.vbasis(i, f.one()), z).v).collect();
    Subspace::span(f, g.dim(), &Matrix::from_rows(&rows).left_kernel(f))
}

/// Indices of the elements of `V`.
pub(crate) fn v_indices(g: &PGroup) -> impl Iterator<Item = u64> {
    let q = g.field().q();
    (0..g.v_order() as u64).map(move |k| k * q)
}

/// Indices of the elements outside `V`.
pub(crate) fn outside_v_indices(g: &PGroup) -> impl Iterator<Item = u64> {
    let q = g.field().q();
    (0..g.order() as u64).filter(move |i| i % q != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sel(p: u32, m: u32, n: Option<usize>) -> Selection {
        Selection { p: Some(p), m: Some(m), n, system: None }
    }

    #[test]
    fn plans() {
        let cfg = RunConfig::default();
        assert!(matches!(plan("nope", &Selection::default(), &cfg), Err(VerifyError::UnknownSuite(_))));
        assert!(matches!(plan("somnibus", &sel(4, 1, None), &cfg), Err(VerifyError::Field(_))));
        let jobs = plan("somnibus", &sel(3, 2, Some(5)), &cfg).unwrap();
        assert_eq!(jobs.len(), 1);
        assert!(jobs[0].skip.is_some());
        let jobs = plan("somnibus", &sel(5, 1, None), &cfg).unwrap();
        assert_eq!(jobs.iter().map(|j| j.target).collect::<Vec<_>>(), (1..=4).map(|n| Some(SKind::Sn(n))).collect::<Vec<_>>());
        let jobs = plan("cvs-p", &Selection::default(), &cfg).unwrap();
        assert!(jobs.iter().all(|j| j.target == Some(SKind::Sn(j.p as usize))));
        let all = plan("all", &sel(3, 2, None), &cfg).unwrap();
        assert!(all.len() > SUITES.len());
    }

    #[test]
    fn system_fixes_target() {
        let s = Selection { p: Some(3), m: Some(2), n: Some(2), system: Some("F*(n,q,R)".into()) };
        let jobs = plan("out0", &s, &RunConfig::default()).unwrap();
        assert_eq!(jobs.len(), 1);
        assert_eq!(jobs[0].target, Some(SKind::Sn(2)));
        let bad = Selection { system: Some("F*(3,9,R)".into()), ..Selection::default() };
        assert!(matches!(plan("out0", &bad, &RunConfig::default()), Err(VerifyError::System(_))));
    }

    #[test]
    fn check_rngs_are_keyed() {
        use rand::RngCore;
        let f = Field::new(3, 1).unwrap();
        let env = Env {
            suite: "orders",
            field: f.clone(),
            group: Some(PGroup::sn(&f, 1).unwrap()),
            target: Some(SKind::Sn(1)),
            tier: Tier::Exhaustive,
            seed: 7,
            system: None,
        };
        assert_eq!(env.rng("a").next_u64(), env.rng("a").next_u64());
        assert_ne!(env.rng("a").next_u64(), env.rng("b").next_u64());
    }
}
