//! JSON encodings and the parsers for untrusted input.
//!
//! A field element is the array of its coefficients, constant term first.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError, FieldSpec};
use crate::parabolic::{GroupError, Parabolic, ParabolicElement};
use crate::poly::{DTriple, Mat2, ModuleKind, ModuleVector, PolyError};
use crate::sgroup::{PGroup, SElement, SKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid target {0:?}; expected Sn:<n> or SLambda")]
    Target(String),
}

impl From<serde_json::Error> for CodecError {
    fn from(e: serde_json::Error) -> Self {
        CodecError::Json(e.to_string())
    }
}

pub fn element_to_json(f: &Field, a: FieldElement) -> Value {
    json!(f.coeffs(a))
}

pub fn element_from_json(f: &Field, v: &[u32]) -> Result<FieldElement, CodecError> {
    Ok(f.from_coeffs(v)?)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleVectorDto {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    coeffs: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ParabolicDto {
    aut_exp: u32,
    scalar: Vec<u32>,
    mat: [[Vec<u32>; 2]; 2],
    vec: ModuleVectorDto,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SElementDto {
    c: Vec<u32>,
    vec: Vec<Vec<u32>>,
}

fn module_dto(f: &Field, v: &ModuleVector) -> ModuleVectorDto {
    let (kind, n) = match v.kind {
        ModuleKind::Vn(n) => ("Vn".to_string(), Some(n)),
        ModuleKind::Lambda => ("Lambda".to_string(), None),
    };
    ModuleVectorDto { kind, n, coeffs: v.coeffs.iter().map(|&c| f.coeffs(c)).collect() }
}

fn module_from_dto(f: &Field, d: ModuleVectorDto) -> Result<ModuleVector, CodecError> {
    let kind = match (d.kind.as_str(), d.n) {
        ("Vn", Some(n)) => {
            if n == 0 || n > f.p() as usize {
                return Err(PolyError::Degree { n, max: f.p() as usize }.into());
            }
            ModuleKind::Vn(n)
        }
        ("Lambda", None) => ModuleKind::Lambda,
        _ => return Err(CodecError::Json(format!("unknown module kind {:?}", d.kind))),
    };
    let coeffs = d.coeffs.iter().map(|c| element_from_json(f, c)).collect::<Result<Vec<_>, _>>()?;
    Ok(ModuleVector::new(f, kind, coeffs)?)
}

pub fn field_spec_to_json(spec: &FieldSpec) -> Value {
    serde_json::to_value(spec).expect("field specs serialize")
}

/// Parses and validates a field description.
pub fn decode_field_spec(s: &str) -> Result<Field, CodecError> {
    let spec: FieldSpec = serde_json::from_str(s)?;
    Ok(Field::from_spec(spec)?)
}

pub fn module_vector_to_json(f: &Field, v: &ModuleVector) -> Value {
    serde_json::to_value(module_dto(f, v)).expect("vectors serialize")
}

pub fn decode_module_vector(f: &Field, s: &str) -> Result<ModuleVector, CodecError> {
    let d: ModuleVectorDto = serde_json::from_str(s)?;
    module_from_dto(f, d)
}

pub fn parabolic_to_json(par: &Parabolic, g: &ParabolicElement) -> Value {
    let f = par.field();
    let m = &g.d.mat;
    let dto = ParabolicDto {
        aut_exp: g.d.aut_exp,
        scalar: f.coeffs(g.d.scalar),
        mat: [[f.coeffs(m.a), f.coeffs(m.b)], [f.coeffs(m.c), f.coeffs(m.d)]],
        vec: module_dto(f, &g.vec),
    };
    serde_json::to_value(dto).expect("elements serialize")
}

pub fn decode_parabolic(par: &Parabolic, s: &str) -> Result<ParabolicElement, CodecError> {
    let d: ParabolicDto = serde_json::from_str(s)?;
    let f = par.field();
    let e = |c: &Vec<u32>| element_from_json(f, c);
    let [[a, b], [c, dd]] = &d.mat;
    let triple = DTriple { aut_exp: d.aut_exp, scalar: e(&d.scalar)?, mat: Mat2::new(e(a)?, e(b)?, e(c)?, e(dd)?) };
    let vec = module_from_dto(f, d.vec)?;
    Ok(par.element(triple, vec)?)
}

pub fn s_element_to_json(g: &PGroup, a: &SElement) -> Value {
    let f = g.field();
    serde_json::to_value(SElementDto { c: f.coeffs(a.c), vec: a.v.iter().map(|&x| f.coeffs(x)).collect() })
        .expect("elements serialize")
}

pub fn decode_s_element(g: &PGroup, s: &str) -> Result<SElement, CodecError> {
    let d: SElementDto = serde_json::from_str(s)?;
    let f = g.field();
    let c = element_from_json(f, &d.c)?;
    let v = d.vec.iter().map(|x| element_from_json(f, x)).collect::<Result<Vec<_>, _>>()?;
    if v.len() != g.dim() {
        return Err(PolyError::Length { expected: g.dim(), got: v.len() }.into());
    }
    Ok(SElement { c, v })
}

/// Parses `Sn:<n>` or `SLambda`.
pub fn parse_target(s: &str) -> Result<SKind, CodecError> {
    let t = s.trim();
    if t == "SLambda" {
        return Ok(SKind::SLambda);
    }
    let n = t
        .strip_prefix("Sn:")
        .and_then(|r| if r.chars().all(|c| c.is_ascii_digit()) && !r.is_empty() { r.parse::<usize>().ok() } else { None })
        .ok_or_else(|| CodecError::Target(s.to_string()))?;
    if n == 0 {
        return Err(CodecError::Target(s.to_string()));
    }
    Ok(SKind::Sn(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrips() {
        let f = Field::new(3, 2).unwrap();
        let spec = serde_json::to_string(f.spec()).unwrap();
        assert_eq!(decode_field_spec(&spec).unwrap(), f);
        let par = Parabolic::new(f.clone(), crate::parabolic::Ambient::PLambda).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..20 {
            let g = par.random_p_star(&mut rng);
            let s = parabolic_to_json(&par, &g).to_string();
            assert_eq!(decode_parabolic(&par, &s).unwrap(), g);
        }
        let g = PGroup::sn(&f, 2).unwrap();
        let a = g.random(&mut rng);
        assert_eq!(decode_s_element(&g, &s_element_to_json(&g, &a).to_string()).unwrap(), a);
    }

    #[test]
    fn rejects_bad_input() {
        let f = Field::new(3, 2).unwrap();
        assert!(decode_module_vector(&f, r#"{"kind":"Vn","n":2,"coeffs":[[0,0],[3,0],[0,0]]}"#).is_err());
        assert!(decode_module_vector(&f, r#"{"kind":"Vn","n":2,"coeffs":[[0,0]]}"#).is_err());
        assert!(decode_module_vector(&f, r#"{"kind":"Vn","n":2,"coeffs":[[0],[0],[0]]}"#).is_err());
        assert!(decode_field_spec(r#"{"p":4,"m":1,"modulus":[0,1]}"#).is_err());
        assert!(decode_field_spec(r#"{"p":3,"m":2,"modulus":[2,0,1]}"#).is_err());
        assert!(decode_field_spec("[").is_err());
    }

    #[test]
    fn targets() {
        assert_eq!(parse_target("Sn:2").unwrap(), SKind::Sn(2));
        assert_eq!(parse_target("SLambda").unwrap(), SKind::SLambda);
        for bad in ["Sn:", "Sn:0", "Sn:+3", "S2", "SLambda2", "Sn:99999999999999999999999"] {
            assert!(parse_target(bad).is_err(), "{bad}");
        }
    }
}
