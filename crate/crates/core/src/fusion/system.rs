//! Names and descriptors of the polynomial fusion systems.
//!
//! Accepted names: `F*(n,q,R)`, `F*(n,q,Q)`, `F*(n,q,R)_P`, `F*_Lambda(q)` and
//! `F*_Lambda(q)_P` (also spelled with `_Λ` or `_L`), each with or without the star. The
//! letters `n` and `q` may stand in for numbers supplied separately.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::{out0_closed_form, Essential};
use crate::field::{prime_factors, MAX_FIELD_ORDER};
use crate::parabolic::split_p_part;
use crate::sgroup::SKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("cannot parse system name {0:?}")]
    Syntax(String),
    #[error("parameter {0} is not given")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Lit(u64),
    Var,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Poly { n: Param, q: Param, essential: Essential, pruned: bool },
    Lambda { q: Param, pruned: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemName {
    pub starred: bool,
    pub family: Family,
}

fn parse_param(s: &str, var: &str) -> Option<Param> {
    let s = s.trim();
    if s == var {
        return Some(Param::Var);
    }
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().map(Param::Lit)
}

pub fn parse_system_name(s: &str) -> Result<SystemName, SystemError> {
    let err = || SystemError::Syntax(s.to_string());
    let t = s.trim();
    let rest = t.strip_prefix('F').ok_or_else(err)?;
    let (starred, rest) = match rest.strip_prefix('*') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    for tag in ["_Lambda", "_Λ", "_L"] {
        if let Some(r) = rest.strip_prefix(tag) {
            let (r, pruned) = match r.strip_suffix("_P") {
                Some(r) => (r, true),
                None => (r, false),
            };
            let inner = r.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(err)?;
            let q = parse_param(inner, "q").ok_or_else(err)?;
            return Ok(SystemName { starred, family: Family::Lambda { q, pruned } });
        }
    }
    let rest = rest.strip_prefix('(').ok_or_else(err)?;
    let (inner, tail) = rest.split_once(')').ok_or_else(err)?;
    let pruned = match tail {
        "" => false,
        "_P" => true,
        _ => return Err(err()),
    };
    let parts: Vec<&str> = inner.split(',').collect();
    let [n, q, e] = parts.as_slice() else {
        return Err(err());
    };
    let n = parse_param(n, "n").ok_or_else(err)?;
    let q = parse_param(q, "q").ok_or_else(err)?;
    let essential = match e.trim() {
        "R" => Essential::R,
        "Q" => Essential::Q,
        _ => return Err(err()),
    };
    if pruned && essential != Essential::R {
        return Err(err());
    }
    Ok(SystemName { starred, family: Family::Poly { n, q, essential, pruned } })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseGroup {
    pub group: String,
    pub p: u32,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub order: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemDescriptor {
    pub name: String,
    pub base: BaseGroup,
    pub essentials: Vec<Essential>,
    pub automizers: BTreeMap<&'static str, String>,
    pub out0_order: u64,
    /// order of the field-automorphism part of `Out_F(S)`
    pub field_aut_part: u64,
    pub out_order: u64,
}

impl SystemDescriptor {
    pub fn kind(&self) -> SKind {
        match self.base.n {
            Some(n) => SKind::Sn(n),
            None => SKind::SLambda,
        }
    }
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    let fs = prime_factors(q);
    let [p] = fs.as_slice() else {
        return None;
    };
    let mut m = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        m += 1;
    }
    Some((*p as u32, m))
}

fn resolve_q(q: Param, p: Option<u32>, m: Option<u32>) -> Result<(u32, u32), SystemError> {
    match q {
        Param::Lit(q) => {
            if q > MAX_FIELD_ORDER {
                return Err(SystemError::Invalid(format!("q = {q} exceeds the largest supported field order")));
            }
            let (qp, qm) = prime_power(q).ok_or_else(|| SystemError::Invalid(format!("{q} is not a prime power")))?;
            if p.is_some_and(|p| p != qp) || m.is_some_and(|m| m != qm) {
                return Err(SystemError::Invalid(format!("q = {q} disagrees with the given p and m")));
            }
            Ok((qp, qm))
        }
        Param::Var => Ok((p.ok_or(SystemError::Missing("p"))?, m.ok_or(SystemError::Missing("m"))?)),
    }
}

/// Resolves a system name against optional `-p`, `-m`, `-n` values.
pub fn describe_system(
    name: &str,
    p: Option<u32>,
    m: Option<u32>,
    n: Option<usize>,
) -> Result<SystemDescriptor, SystemError> {
    let parsed = parse_system_name(name)?;
    let (q_param, n_param) = match parsed.family {
        Family::Poly { n, q, .. } => (q, Some(n)),
        Family::Lambda { q, .. } => (q, None),
    };
    let (p, m) = resolve_q(q_param, p, m)?;
    if p < 3 {
        return Err(SystemError::Invalid("the characteristic must be odd".into()));
    }
    if m < 2 {
        return Err(SystemError::Invalid("the polynomial systems need q > p".into()));
    }
    let q = crate::field::Field::new(p, m).map_err(|e| SystemError::Invalid(e.to_string()))?.q();
    let star = if parsed.starred { "*" } else { "" };
    let mut automizers = BTreeMap::new();
    let (kind, essentials, canonical) = match parsed.family {
        Family::Poly { essential, pruned, .. } => {
            let n = match n_param.expect("poly family has n") {
                Param::Lit(x) => x as usize,
                Param::Var => n.ok_or(SystemError::Missing("n"))?,
            };
            if n == 0 || n >= p as usize {
                return Err(SystemError::Invalid(format!("n = {n} must satisfy 1 <= n <= p-1")));
            }
            if essential == Essential::Q && n < 2 {
                return Err(SystemError::Invalid("Q needs n >= 2".into()));
            }
            let es = if pruned { vec![essential] } else { vec![Essential::V, essential] };
            if !pruned {
                automizers.insert("V", format!("SL_2({q}) acting on V_{n}({q})"));
            }
            let what = if essential == Essential::R { "R" } else { "Q" };
            automizers.insert(what, format!("SL_2({q}), with Aut_S({what}) as Sylow {p}-subgroup"));
            let suffix = if pruned { "_P" } else { "" };
            (SKind::Sn(n), es, format!("F{star}({n},{q},{what}){suffix}"))
        }
        Family::Lambda { pruned, .. } => {
            if !pruned {
                automizers.insert("V", format!("SL_2({q}) acting on Lambda({q})"));
            }
            automizers.insert("R", format!("SL_2({q}), with Aut_S(R) as Sylow {p}-subgroup"));
            let (es, suffix) = if pruned { (vec![Essential::R], "_P") } else { (vec![Essential::V, Essential::R], "") };
            (SKind::SLambda, es, format!("F{star}_Lambda({q}){suffix}"))
        }
    };
    let out0_order = out0_closed_form(kind, q, &essentials).expect("closed form exists for named systems");
    let field_aut_part = if parsed.starred { split_p_part(m, p).1 as u64 } else { 1 };
    let dim = match kind {
        SKind::Sn(n) => n + 1,
        SKind::SLambda => p as usize + 1,
    };
    let base = BaseGroup {
        group: match kind {
            SKind::Sn(n) => format!("S_{n}({q})"),
            SKind::SLambda => format!("S_Lambda({q})"),
        },
        p,
        m,
        n: match kind {
            SKind::Sn(n) => Some(n),
            SKind::SLambda => None,
        },
        order: (q as u128)
            .checked_pow(dim as u32 + 1)
            .ok_or_else(|| SystemError::Invalid(format!("|S| = {q}^{} does not fit in 128 bits", dim + 1)))?,
    };
    Ok(SystemDescriptor {
        name: canonical,
        base,
        essentials,
        automizers,
        out0_order,
        field_aut_part,
        out_order: out0_order * field_aut_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_systems() {
        let d = describe_system("F*(2,9,R)_P", None, None, None).unwrap();
        assert_eq!(d.essentials, vec![Essential::R]);
        assert_eq!(d.out0_order, 8);
        let d = describe_system("F*(n,q,Q)", Some(3), Some(2), Some(2)).unwrap();
        assert_eq!(d.essentials, vec![Essential::V, Essential::Q]);
        assert_eq!(d.out0_order, 32);
        let d = describe_system("F*_Λ(9)", None, None, None).unwrap();
        assert_eq!(d.out0_order, 64);
        assert_eq!(d.field_aut_part, 2);
        let d = describe_system("F_Lambda(q)", Some(3), Some(2), None).unwrap();
        assert_eq!(d.field_aut_part, 1);
        let d = describe_system("F*_Lambda(25)_P", None, None, None).unwrap();
        assert_eq!(d.essentials, vec![Essential::R]);
        assert_eq!(d.name, "F*_Lambda(25)_P");
        assert_eq!(d.out0_order, 24);
    }

    #[test]
    fn rejects_invalid_names() {
        for bad in ["F*(1,9,Q)", "F*(3,9,R)", "F*(2,3,R)", "F*(2,12,R)", "G(2,9,R)", "F*(2,9,Q)_P", "F*(2,9,R", "F*_Λ(9"] {
            assert!(describe_system(bad, None, None, None).is_err(), "{bad}");
        }
        assert_eq!(describe_system("F*(n,q,R)", None, None, Some(1)).unwrap_err(), SystemError::Missing("p"));
    }
}
