//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always shown.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use polyfus::field::Field;
use polyfus::report::{CheckReport, Status};
use polyfus::sgroup::{closure, PGroup, SKind};
use polyfus::structure::maps::gamma;
use polyfus::structure::series::upper_central_brute;
use polyfus::structure::{exponent, shape_set, Shape};
use polyfus::verify::{self, RunConfig, Selection, Tier};

type Outcome = Result<String, Vec<String>>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reports(suite: &str, p: u32, m: u32, n: Option<usize>, tier: Option<Tier>, only: Option<SKind>) -> Vec<CheckReport> {
    let sel = Selection { p: Some(p), m: Some(m), n, system: None };
    let jobs = verify::plan(suite, &sel, &RunConfig { seed: 0, tier }).expect("valid plan");
    jobs.iter().filter(|j| only.is_none() || j.target == only).flat_map(verify::run_job).collect()
}

fn count(r: &CheckReport, key: &str) -> Option<u64> {
    r.counts.get(key).and_then(|v| v.as_u64())
}

fn target_of(r: &CheckReport) -> String {
    r.params.get("target").and_then(|v| v.as_str()).unwrap_or("-").to_string()
}

/// Failures, plus a complaint for every id in `need` that is missing or not verified.
fn audit(rs: &[CheckReport], need: &[&str], errs: &mut Vec<String>) {
    for r in rs.iter().filter(|r| r.status == Status::Failed) {
        errs.push(format!("{} failed at {}: {:?}", r.check, target_of(r), r.witness));
    }
    for id in need {
        match rs.iter().find(|r| r.check == *id) {
            Some(r) if r.status == Status::Verified => {}
            Some(r) => errs.push(format!("{id} was {:?}", r.status)),
            None => errs.push(format!("{id} did not run")),
        }
    }
}

fn finish(errs: Vec<String>, detail: String) -> Outcome {
    if errs.is_empty() {
        Ok(detail)
    } else {
        Err(errs)
    }
}

fn orders() -> Outcome {
    let mut errs = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut cases = vec![];
    for (p, m) in [(3, 1), (3, 2)] {
        for n in [1, 2] {
            cases.push((p, m, SKind::Sn(n)));
        }
    }
    cases.push((3, 2, SKind::SLambda));
    for (p, m, kind) in cases {
        let t = Instant::now();
        let f = Field::new(p, m).unwrap();
        let g = PGroup::new(f, kind).unwrap();
        let q = g.field().q() as u128;
        let want = q.pow(g.degree() as u32 + 2);
        let got = closure(&g, &g.generators()).unwrap().len() as u128;
        if got != want {
            errs.push(format!("|{}({q})| = {got}, expected {want}", kind.name()));
        }
        audit(&reports("orders", p, m, None, None, Some(kind)), &["orders.enumerate", "orders.axioms"], &mut errs);
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        if dt > Duration::from_secs(10) {
            errs.push(format!("{}({q}) took {dt:?}", kind.name()));
        }
    }
    finish(errs, format!("5 groups, slowest {:.2} s", slowest.as_secs_f64()))
}

fn somnibus() -> Outcome {
    let mut errs = Vec::new();
    let need = ["somnibus.1", "somnibus.2", "somnibus.3", "somnibus.4", "somnibus.5"];
    let mut checks = 0;
    for (p, m, n) in [(3, 2, 2), (5, 1, 1), (5, 1, 2), (5, 1, 3)] {
        let rs = reports("somnibus", p, m, Some(n), Some(Tier::Exhaustive), Some(SKind::Sn(n)));
        checks += rs.len();
        let before = errs.len();
        // uniqueness of V as a maximal abelian subgroup needs n >= 2
        let need = if n >= 2 { &need[..] } else { &[need[0], need[1], need[2], need[4]][..] };
        audit(&rs, need, &mut errs);
        for e in &mut errs[before..] {
            *e = format!("(p,m,n)=({p},{m},{n}): {e}");
        }
    }
    finish(errs, format!("{checks} checks"))
}

fn gamma_quotient() -> Outcome {
    let mut errs = Vec::new();
    for (p, m, n) in [(3, 2, 2), (5, 1, 3)] {
        let rs = reports("gamma-iso", p, m, Some(n), Some(Tier::Exhaustive), Some(SKind::Sn(n)));
        audit(&rs, &["gamma-iso", "gamma-iso.iterated"], &mut errs);
        let f = Field::new(p, m).unwrap();
        let q = f.q();
        if let Some(r) = rs.iter().find(|r| r.check == "gamma-iso") {
            if count(r, "kernel_order") != Some(q) || count(r, "image_order") != Some(q.pow(n as u32 + 1)) {
                errs.push(format!("gamma-iso counts at n={n}, q={q}: {:?}", r.counts));
            }
        }
        // the kernel, enumerated directly, is the line of x^n
        let g = PGroup::sn(&f, n).unwrap();
        let dst = PGroup::sn(&f, n - 1).unwrap();
        let mut kernel = 0u64;
        for idx in 0..g.order() as u64 {
            let x = g.decode(idx);
            if dst.is_identity(&gamma(&g, &x)) {
                kernel += 1;
                if !x.c.is_zero() || x.v[1..].iter().any(|a| !a.is_zero()) {
                    errs.push(format!("kernel element outside Z(S) at q={q}"));
                    break;
                }
            }
        }
        if kernel != q {
            errs.push(format!("|ker gamma| = {kernel} at q={q}, n={n}"));
        }
    }
    finish(errs, "kernel Z(S) at (9,2) and (5,3)".into())
}

fn s_lambda_9() -> Outcome {
    let mut errs = Vec::new();
    let need = [
        "cups-lambda.centre",
        "cups-lambda.upper",
        "cups-lambda.vs",
        "cups-lambda.cw",
        "cups-lambda.exponent",
        "cups-lambda.unique",
    ];
    let rs = reports("cups-lambda", 3, 2, None, Some(Tier::Exhaustive), Some(SKind::SLambda));
    audit(&rs, &need, &mut errs);
    let want = [
        ("cups-lambda.centre", "centre_order", 81),
        ("cups-lambda.upper", "z2_order", 729),
        ("cups-lambda.vs", "v_mod_vs", 9),
        ("cups-lambda.exponent", "exponent", 9),
    ];
    for (id, key, v) in want {
        let got = rs.iter().find(|r| r.check == id).and_then(|r| count(r, key));
        if got != Some(v) {
            errs.push(format!("{id}: {key} = {got:?}, expected {v}"));
        }
    }
    let g = PGroup::s_lambda(&Field::new(3, 2).unwrap()).unwrap();
    let upper: Vec<u64> = upper_central_brute(&g).unwrap().iter().map(|s| s.len()).collect();
    if upper.get(..2) != Some(&[81, 729][..]) {
        errs.push(format!("enumerated upper central series {upper:?}"));
    }
    let e = exponent(&g, &shape_set(&g, &Shape::Whole).unwrap());
    if e != 9 {
        errs.push(format!("enumerated exponent {e}"));
    }
    finish(errs, "|Z|=81 |Z_2|=729 |V/[V,S]|=9 exp 9".into())
}

fn psi() -> Outcome {
    let mut errs = Vec::new();
    let rs = reports("cvs-p", 3, 2, None, Some(Tier::Exhaustive), Some(SKind::Sn(3)));
    audit(&rs, &["cvs-p.psi"], &mut errs);
    if let Some(r) = rs.iter().find(|r| r.check == "cvs-p.psi") {
        if count(r, "kernel_rank") != Some(2) || count(r, "image_rank") != Some(2) || count(r, "equivariance_failures") != Some(0) {
            errs.push(format!("cvs-p.psi counts {:?}", r.counts));
        }
    }
    finish(errs, "kernel rank 2, image rank 2".into())
}

fn psi_star() -> Outcome {
    let mut errs = Vec::new();
    let need = ["psi-star.hom", "psi-star.torus", "psi-star.radical", "psi-star.kernel", "psi-star.domain"];
    let rs = reports("psi-star", 3, 2, None, Some(Tier::Exhaustive), None);
    audit(&rs, &need, &mut errs);
    let get = |id: &str, key: &str| rs.iter().find(|r| r.check == id).and_then(|r| count(r, key));
    if get("psi-star.hom", "pairs") != Some(2000) || get("psi-star.hom", "failures") != Some(0) {
        errs.push("homomorphism identity not certified on 2000 pairs".into());
    }
    if get("psi-star.kernel", "kernel_order") != Some(1) {
        errs.push(format!("kernel order {:?}", get("psi-star.kernel", "kernel_order")));
    }
    let domain = get("psi-star.kernel", "domain_order").unwrap_or(0);
    finish(errs, format!("injective on {domain} elements"))
}

fn conjugacy() -> Outcome {
    let mut errs = Vec::new();
    let mut verified = 0;
    for suite in ["intersec", "s-conj", "r-cap"] {
        let rs = reports(suite, 3, 2, None, Some(Tier::Exhaustive), None);
        audit(&rs, &[suite], &mut errs);
        verified += rs.iter().filter(|r| r.status == Status::Verified).count();
        if suite == "r-cap" {
            for r in rs.iter().filter(|r| r.check == "r-cap" && r.status == Status::Verified) {
                if count(r, "conjugators") != Some(10_000) || count(r, "failures") != Some(0) {
                    errs.push(format!("r-cap at {}: {:?}", target_of(r), r.counts));
                }
            }
        }
    }
    finish(errs, format!("{verified} checks verified"))
}

fn centraliser_arithmetic() -> Outcome {
    let mut errs = Vec::new();
    for (p, m) in [(3, 1), (5, 1), (3, 2)] {
        for n in [1usize, 2] {
            let q = (p as u64).pow(m);
            let rs = reports("centslem", p, m, Some(n), Some(Tier::Exhaustive), Some(SKind::Sn(n)));
            audit(&rs, &["centslem", "centslem.gammacentraliser"], &mut errs);
            let want = q * gcd(n as u64, q - 1);
            for r in &rs {
                let (key, v) = match r.check.as_str() {
                    "centslem" => ("centralising", want),
                    _ => ("order", q - 1),
                };
                if r.status == Status::Verified && count(r, key) != Some(v) {
                    errs.push(format!("{} at (q,n)=({q},{n}): {key} = {:?}, expected {v}", r.check, count(r, key)));
                }
            }
        }
    }
    finish(errs, "six (q,n) pairs".into())
}

/// `|Out^0|` for an essential set, written out independently of the library.
fn out0_expected(kind: SKind, q: u64, label: &str) -> Option<u64> {
    let q1 = q - 1;
    match (kind, label) {
        (SKind::Sn(n), "V,Q") => Some(q1 * q1 / gcd(n as u64, q1)),
        (SKind::Sn(n), "V,R") => Some(q1 * q1 / gcd(n as u64 + 2, q1)),
        (SKind::Sn(_), "R") => Some(q1),
        (SKind::SLambda, "V,R") => Some(q1 * q1),
        (SKind::SLambda, "R") => Some(q1),
        _ => None,
    }
}

fn out0() -> Outcome {
    let mut errs = Vec::new();
    let mut seen = 0;
    let grid = [(3, 2, SKind::Sn(1)), (3, 2, SKind::Sn(2)), (5, 2, SKind::Sn(1)), (5, 2, SKind::Sn(2)), (3, 2, SKind::SLambda)];
    for (p, m, kind) in grid {
        let q = (p as u64).pow(m);
        let n = match kind {
            SKind::Sn(n) => Some(n),
            SKind::SLambda => None,
        };
        let rs = reports("out0", p, m, n, None, Some(kind));
        audit(&rs, &["out0.te"], &mut errs);
        for r in rs.iter().filter(|r| r.check != "out0.te") {
            let label = r.check.trim_start_matches("out0.");
            let want = out0_expected(kind, q, label);
            seen += 1;
            if r.status != Status::Verified || want.is_none() || count(r, "out0_order") != want {
                errs.push(format!("{} at {}({q}): {:?} {:?}, expected {want:?}", r.check, kind.name(), r.status, r.counts));
            }
        }
    }
    if seen == 0 {
        errs.push("no Out^0 checks ran".into());
    }
    finish(errs, format!("{seen} essential sets"))
}

fn exclusion() -> Outcome {
    let mut errs = Vec::new();
    let mut cases = 0;
    for p in [3u64, 5, 7] {
        for m in [2u32, 3] {
            let modulus = p.pow(m) - 1;
            for n in 1..p {
                cases += 1;
                // p^k mod (p^m - 1) has period m
                for k in 0..m {
                    let pk = p.pow(k);
                    if (n * pk + pk + 1) % modulus == 0 {
                        errs.push(format!("p={p} m={m} n={n} k={k} divides"));
                    }
                }
            }
            let rs = reports("essential-exclusion", p as u32, m, None, None, None);
            audit(&rs, &["essential-exclusion"], &mut errs);
        }
    }
    finish(errs, format!("{cases} (p,m,n) cases"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_polyfus"))
            .args(["verify", "all", "--json", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    let mut errs = Vec::new();
    if !a.status.success() || !b.status.success() {
        errs.push(format!("exit codes {:?} and {:?}", a.status.code(), b.status.code()));
    }
    if a.stdout != b.stdout {
        errs.push("outputs differ".into());
    }
    let lines = a.stdout.iter().filter(|&&c| c == b'\n').count();
    finish(errs, format!("{lines} lines, {} bytes", a.stdout.len()))
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "group orders", budget: None, run: orders },
    Criterion { id: 2, name: "somnibus", budget: Some(Duration::from_secs(60)), run: somnibus },
    Criterion { id: 3, name: "gamma quotient", budget: Some(Duration::from_secs(30)), run: gamma_quotient },
    Criterion { id: 4, name: "S_Lambda(9)", budget: Some(Duration::from_secs(300)), run: s_lambda_9 },
    Criterion { id: 5, name: "psi over GF(9)", budget: Some(Duration::from_secs(5)), run: psi },
    Criterion { id: 6, name: "psi*", budget: Some(Duration::from_secs(60)), run: psi_star },
    Criterion { id: 7, name: "conjugacy lemmas at q=9", budget: Some(Duration::from_secs(300)), run: conjugacy },
    Criterion { id: 8, name: "centraliser arithmetic", budget: None, run: centraliser_arithmetic },
    Criterion { id: 9, name: "Out^0 orders", budget: None, run: out0 },
    Criterion { id: 10, name: "essential exclusion", budget: None, run: exclusion },
    Criterion { id: 11, name: "determinism", budget: None, run: determinism },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let t = Instant::now();
        let res = (c.run)();
        let dt = t.elapsed();
        let over = c.budget.filter(|&b| dt > b);
        let ok = res.is_ok() && over.is_none();
        let detail = match &res {
            Ok(d) => d.clone(),
            Err(errs) => errs.first().cloned().unwrap_or_default(),
        };
        println!("{} {:>2} {:<26} {:>8.2} s  {detail}", if ok { "PASS" } else { "FAIL" }, c.id, c.name, dt.as_secs_f64());
        if let Some(b) = over {
            println!("        over the {} s budget", b.as_secs());
        }
        if let Err(errs) = &res {
            for e in errs.iter().skip(1).take(5) {
                println!("        {e}");
            }
        }
        if !ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
