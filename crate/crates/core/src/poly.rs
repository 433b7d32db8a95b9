//! The modules `V_n(q)` of homogeneous polynomials of degree `n` in `x, y` and
//! the dual module `Lambda(q)` of `V_p(q)`, together with the semilinear group
//! `D` acting on them.
//!
//! Coordinates: entry `i` of a `V_n` vector is the coefficient of
//! `x^{n-i} y^i`; entry `i` of a `Lambda` vector is the coefficient of the dual
//! basis element for `x^{p-i} y^i`. Actions are on the right.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};
use crate::linalg::{vec_mul, Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degree {n} is outside 1..={max}")]
    Degree { n: usize, max: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("operation expects a {expected} vector")]
    WrongKind { expected: &'static str },
    #[error("matrix is singular")]
    Singular,
    #[error("Frobenius exponent {0} is not below the extension degree")]
    AutExp(u32),
    #[error("characteristic {0} is too small for this module")]
    Characteristic(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleKind {
    /// `V_n(q)`
    Vn(usize),
    /// `Lambda(q)`, dual of `V_p(q)`
    Lambda,
}

impl ModuleKind {
    pub fn degree(self, p: u32) -> usize {
        match self {
            ModuleKind::Vn(n) => n,
            ModuleKind::Lambda => p as usize,
        }
    }

    pub fn dim(self, p: u32) -> usize {
        self.degree(p) + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    pub kind: ModuleKind,
    pub coeffs: Vec<FieldElement>,
}

impl ModuleVector {
    pub fn zero(f: &Field, kind: ModuleKind) -> ModuleVector {
        ModuleVector { kind, coeffs: vec![FieldElement::ZERO; kind.dim(f.p())] }
    }

    /// `s` times the `i`-th basis vector.
    pub fn monomial(f: &Field, kind: ModuleKind, i: usize, s: FieldElement) -> ModuleVector {
        let mut v = ModuleVector::zero(f, kind);
        v.coeffs[i] = s;
        v
    }

    pub fn new(f: &Field, kind: ModuleKind, coeffs: Vec<FieldElement>) -> Result<ModuleVector, PolyError> {
        let expected = kind.dim(f.p());
        if coeffs.len() != expected {
            return Err(PolyError::Length { expected, got: coeffs.len() });
        }
        for &c in &coeffs {
            f.check(c)?;
        }
        Ok(ModuleVector { kind, coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, f: &Field, other: &ModuleVector) -> ModuleVector {
        debug_assert_eq!(self.kind, other.kind);
        ModuleVector { kind: self.kind, coeffs: crate::linalg::vec_add(f, &self.coeffs, &other.coeffs) }
    }

    pub fn neg(&self, f: &Field) -> ModuleVector {
        ModuleVector { kind: self.kind, coeffs: crate::linalg::vec_neg(f, &self.coeffs) }
    }

    pub fn sub(&self, f: &Field, other: &ModuleVector) -> ModuleVector {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> ModuleVector {
        ModuleVector { kind: self.kind, coeffs: crate::linalg::vec_scale(f, &self.coeffs, s) }
    }

    pub fn frobenius(&self, f: &Field, k: i64) -> ModuleVector {
        ModuleVector { kind: self.kind, coeffs: self.coeffs.iter().map(|&c| f.frobenius(c, k)).collect() }
    }

    /// Human-readable polynomial, e.g. `x^2+(t+1)xy`.
    pub fn format(&self, f: &Field) -> String {
        let n = self.kind.degree(f.p());
        let bar = matches!(self.kind, ModuleKind::Lambda);
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (ex, ey) = (n - i, i);
            let mut mono = String::new();
            let xs = if bar { "X" } else { "x" };
            let ys = if bar { "Y" } else { "y" };
            match ex {
                0 => {}
                1 => mono.push_str(xs),
                e => mono.push_str(&format!("{xs}^{e}")),
            }
            match ey {
                0 => {}
                1 => mono.push_str(ys),
                e => mono.push_str(&format!("{ys}^{e}")),
            }
            let cs = f.format(c);
            let coef = if c == FieldElement::ONE && !mono.is_empty() {
                String::new()
            } else if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            terms.push(format!("{coef}{mono}"));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// A 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2 {
        Mat2::new(FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE)
    }

    pub fn diag(a: FieldElement, d: FieldElement) -> Mat2 {
        Mat2::new(a, FieldElement::ZERO, FieldElement::ZERO, d)
    }

    /// `[[1, 0], [c, 1]]`
    pub fn lower_unipotent(c: FieldElement) -> Mat2 {
        Mat2::new(FieldElement::ONE, FieldElement::ZERO, c, FieldElement::ONE)
    }

    pub fn mul(&self, f: &Field, o: &Mat2) -> Mat2 {
        Mat2 {
            a: f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            c: f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            d: f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        }
    }

    pub fn det(&self, f: &Field) -> FieldElement {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn inv(&self, f: &Field) -> Result<Mat2, PolyError> {
        let di = f.inv(self.det(f)).map_err(|_| PolyError::Singular)?;
        Ok(Mat2 {
            a: f.mul(self.d, di),
            b: f.neg(f.mul(self.b, di)),
            c: f.neg(f.mul(self.c, di)),
            d: f.mul(self.a, di),
        })
    }

    pub fn frobenius(&self, f: &Field, k: i64) -> Mat2 {
        Mat2 {
            a: f.frobenius(self.a, k),
            b: f.frobenius(self.b, k),
            c: f.frobenius(self.c, k),
            d: f.frobenius(self.d, k),
        }
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }
}

/// Element `(phi, theta, A)` of the group `D = Aut(K) (K^* x GL_2(K))`;
/// `aut_exp = e` stands for the field automorphism `a -> a^{p^e}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DTriple {
    pub aut_exp: u32,
    pub scalar: FieldElement,
    pub mat: Mat2,
}

impl DTriple {
    pub fn identity() -> DTriple {
        DTriple { aut_exp: 0, scalar: FieldElement::ONE, mat: Mat2::identity() }
    }

    pub fn linear(scalar: FieldElement, mat: Mat2) -> DTriple {
        DTriple { aut_exp: 0, scalar, mat }
    }

    pub fn validate(&self, f: &Field) -> Result<(), PolyError> {
        if self.aut_exp >= f.m() {
            return Err(PolyError::AutExp(self.aut_exp));
        }
        f.check(self.scalar)?;
        if self.scalar.is_zero() {
            return Err(PolyError::Singular);
        }
        for x in [self.mat.a, self.mat.b, self.mat.c, self.mat.d] {
            f.check(x)?;
        }
        if self.mat.det(f).is_zero() {
            return Err(PolyError::Singular);
        }
        Ok(())
    }

    /// `(phi, theta, A)(Phi, Pi, B) = (phi Phi, theta^Phi Pi, A^Phi B)`
    pub fn mul(&self, f: &Field, o: &DTriple) -> DTriple {
        let e = o.aut_exp as i64;
        DTriple {
            aut_exp: (self.aut_exp + o.aut_exp) % f.m(),
            scalar: f.mul(f.frobenius(self.scalar, e), o.scalar),
            mat: self.mat.frobenius(f, e).mul(f, &o.mat),
        }
    }

    pub fn inv(&self, f: &Field) -> DTriple {
        let m = f.m();
        let e = ((m - self.aut_exp) % m) as i64;
        DTriple {
            aut_exp: e as u32,
            scalar: f.frobenius(f.inv(self.scalar).expect("scalar is a unit"), e),
            mat: self.mat.frobenius(f, e).inv(f).expect("matrix is invertible"),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == DTriple::identity()
    }
}

/// Binomial coefficients `C(i, j)` mod `p` for `0 <= j <= i <= n`.
pub fn binomials(f: &Field, n: usize) -> Vec<Vec<FieldElement>> {
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![FieldElement::ONE; i + 1];
        for j in 1..i {
            row[j] = f.add(rows[i - 1][j - 1], rows[i - 1][j]);
        }
        rows.push(row);
    }
    rows
}

/// Coefficients of `(a x + b y)^k` in the basis `x^{k-j} y^j`.
fn linear_power(f: &Field, a: FieldElement, b: FieldElement, k: usize, binom: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    (0..=k)
        .map(|j| {
            let aj = f.pow(a, (k - j) as i64).unwrap_or(FieldElement::ZERO);
            let bj = f.pow(b, j as i64).unwrap_or(FieldElement::ZERO);
            f.mul(binom[k][j], f.mul(aj, bj))
        })
        .collect()
}

fn poly_mul(f: &Field, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; u.len() + v.len() - 1];
    for (i, &x) in u.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in v.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Matrix of `v -> theta * v(a x + b y, c x + d y)` on `V_n`; row `i` is the
/// image of `x^{n-i} y^i`.
pub fn rho_v(f: &Field, n: usize, scalar: FieldElement, mat: &Mat2) -> Matrix {
    let binom = binomials(f, n);
    let mut m = Matrix::zero(n + 1, n + 1);
    let xs: Vec<Vec<FieldElement>> = (0..=n).map(|k| linear_power(f, mat.a, mat.b, k, &binom)).collect();
    let ys: Vec<Vec<FieldElement>> = (0..=n).map(|k| linear_power(f, mat.c, mat.d, k, &binom)).collect();
    for i in 0..=n {
        let row = poly_mul(f, &xs[n - i], &ys[i]);
        for (j, &c) in row.iter().enumerate() {
            m.set(i, j, f.mul(scalar, c));
        }
    }
    m
}

/// Matrix of the contragredient action on `Lambda`.
pub fn rho_lambda(f: &Field, scalar: FieldElement, mat: &Mat2) -> Matrix {
    rho_v(f, f.p() as usize, scalar, mat)
        .inverse(f)
        .expect("an invertible D-element acts invertibly")
        .transpose()
}

/// Linear part of the action of `g` on a module of the given kind.
pub fn rho(f: &Field, kind: ModuleKind, g: &DTriple) -> Matrix {
    match kind {
        ModuleKind::Vn(n) => rho_v(f, n, g.scalar, &g.mat),
        ModuleKind::Lambda => rho_lambda(f, g.scalar, &g.mat),
    }
}

fn check_vector(f: &Field, v: &ModuleVector) -> Result<(), PolyError> {
    let expected = v.kind.dim(f.p());
    if v.coeffs.len() != expected {
        return Err(PolyError::Length { expected, got: v.coeffs.len() });
    }
    if let ModuleKind::Vn(n) = v.kind {
        if n == 0 || n > f.p() as usize {
            return Err(PolyError::Degree { n, max: f.p() as usize });
        }
    }
    for &c in &v.coeffs {
        f.check(c)?;
    }
    Ok(())
}

/// `v . (phi, theta, A) = theta * v^phi(a x + b y, c x + d y)`.
pub fn act_vn(f: &Field, v: &ModuleVector, g: &DTriple) -> Result<ModuleVector, PolyError> {
    let ModuleKind::Vn(n) = v.kind else {
        return Err(PolyError::WrongKind { expected: "V_n" });
    };
    check_vector(f, v)?;
    g.validate(f)?;
    let vf = v.frobenius(f, g.aut_exp as i64);
    let m = rho_v(f, n, g.scalar, &g.mat);
    Ok(ModuleVector { kind: v.kind, coeffs: vec_mul(f, &vf.coeffs, &m) })
}

/// Contragredient action: `<v . g, eta . g> = <v, eta>^phi`.
pub fn act_lambda(f: &Field, eta: &ModuleVector, g: &DTriple) -> Result<ModuleVector, PolyError> {
    if eta.kind != ModuleKind::Lambda {
        return Err(PolyError::WrongKind { expected: "Lambda" });
    }
    check_vector(f, eta)?;
    g.validate(f)?;
    let ef = eta.frobenius(f, g.aut_exp as i64);
    let m = rho_lambda(f, g.scalar, &g.mat);
    Ok(ModuleVector { kind: eta.kind, coeffs: vec_mul(f, &ef.coeffs, &m) })
}

pub fn act(f: &Field, v: &ModuleVector, g: &DTriple) -> Result<ModuleVector, PolyError> {
    match v.kind {
        ModuleKind::Vn(_) => act_vn(f, v, g),
        ModuleKind::Lambda => act_lambda(f, v, g),
    }
}

/// `<v, eta> = sum v_i eta_i` between `V_p` and `Lambda`.
pub fn pairing(f: &Field, v: &ModuleVector, eta: &ModuleVector) -> Result<FieldElement, PolyError> {
    if v.kind != ModuleKind::Vn(f.p() as usize) || eta.kind != ModuleKind::Lambda {
        return Err(PolyError::WrongKind { expected: "V_p and Lambda" });
    }
    Ok(f.dot(&v.coeffs, &eta.coeffs))
}

/// The map `V_p -> V_{p-2}`, `x^i y^j -> i x^{i-1} y^{j-1}`.
pub fn psi_derivation(f: &Field, v: &ModuleVector) -> Result<ModuleVector, PolyError> {
    let p = f.p() as usize;
    if p < 3 {
        return Err(PolyError::Characteristic(f.p()));
    }
    if v.kind != ModuleKind::Vn(p) {
        return Err(PolyError::WrongKind { expected: "V_p" });
    }
    check_vector(f, v)?;
    let mut out = ModuleVector::zero(f, ModuleKind::Vn(p - 2));
    for k in 1..p {
        // x^{p-k} y^k -> (p-k) x^{p-k-1} y^{k-1}
        out.coeffs[k - 1] = f.mul(f.from_int((p - k) as i64), v.coeffs[k]);
    }
    Ok(out)
}

/// Largest `i` with a nonzero coefficient of `x^{n-i} y^i`; `None` for zero.
pub fn weight(v: &ModuleVector) -> Option<usize> {
    v.coeffs.iter().rposition(|c| !c.is_zero())
}

/// Membership in `C_i = <x^n, x^{n-1} y, ..., x^{n-i} y^i>`.
pub fn filtration_member(v: &ModuleVector, i: usize) -> bool {
    weight(v).map_or(true, |w| w <= i)
}

/// The submodule `W` of `Lambda` annihilating `<x^p, y^p>`.
pub fn lambda_w(f: &Field) -> Subspace {
    let p = f.p() as usize;
    Subspace::coordinate(f, p + 1, 1..p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::new(3, 2).unwrap()
    }

    #[test]
    fn unipotent_on_v2() {
        let f = gf9();
        let v = ModuleVector::monomial(&f, ModuleKind::Vn(2), 2, f.one());
        let g = DTriple::linear(f.one(), Mat2::lower_unipotent(f.one()));
        let w = act_vn(&f, &v, &g).unwrap();
        assert_eq!(w.coeffs, vec![f.one(), f.from_int(2), f.one()]);
    }

    #[test]
    fn frobenius_acts_on_coefficients_first() {
        let f = gf9();
        let t = f.generator();
        let v = ModuleVector::monomial(&f, ModuleKind::Vn(1), 0, t);
        let g = DTriple { aut_exp: 1, scalar: f.one(), mat: Mat2::identity() };
        let w = act_vn(&f, &v, &g).unwrap();
        assert_eq!(w.coeffs[0], f.frobenius(t, 1));
    }

    #[test]
    fn psi_examples() {
        let f = Field::new(3, 1).unwrap();
        let x2y = ModuleVector::monomial(&f, ModuleKind::Vn(3), 1, f.one());
        assert_eq!(psi_derivation(&f, &x2y).unwrap().coeffs, vec![f.from_int(2), f.zero()]);
        let xy2 = ModuleVector::monomial(&f, ModuleKind::Vn(3), 2, f.one());
        assert_eq!(psi_derivation(&f, &xy2).unwrap().coeffs, vec![f.zero(), f.one()]);
        let x3 = ModuleVector::monomial(&f, ModuleKind::Vn(3), 0, f.one());
        assert!(psi_derivation(&f, &x3).unwrap().is_zero());
    }

    #[test]
    fn weights() {
        let f = gf9();
        let v = ModuleVector::new(&f, ModuleKind::Vn(3), vec![f.one(), f.one(), f.zero(), f.zero()]).unwrap();
        assert_eq!(weight(&v), Some(1));
        assert!(filtration_member(&v, 1));
        assert!(!filtration_member(&v, 0));
        assert_eq!(weight(&ModuleVector::zero(&f, ModuleKind::Vn(3))), None);
    }

    #[test]
    fn kind_errors() {
        let f = gf9();
        let v = ModuleVector::zero(&f, ModuleKind::Vn(2));
        let g = DTriple::identity();
        assert!(matches!(act_lambda(&f, &v, &g), Err(PolyError::WrongKind { .. })));
        let bad = ModuleVector { kind: ModuleKind::Vn(2), coeffs: vec![f.one()] };
        assert!(matches!(act_vn(&f, &bad, &g), Err(PolyError::Length { .. })));
        let sing = DTriple::linear(f.one(), Mat2::diag(f.one(), f.zero()));
        assert!(matches!(act_vn(&f, &v, &sing), Err(PolyError::Singular)));
    }

    #[test]
    fn lambda_diagonal_block() {
        // On the top three dual coordinates a lower-triangular element acts by
        // an explicit triangular block.
        let f = Field::new(5, 2).unwrap();
        let p = 5usize;
        let th = f.element(7).unwrap();
        let (a, c, b) = (f.element(3).unwrap(), f.element(11).unwrap(), f.element(18).unwrap());
        let g = DTriple::linear(th, Mat2::new(a, f.zero(), c, b));
        let m = rho_lambda(&f, th, &g.mat);
        let pw = |x, e: i64| f.pow(x, e).unwrap();
        let ti = f.inv(th).unwrap();
        let pe = p as i64;
        let expect = [
            [f.mul(ti, f.mul(pw(a, -2), pw(b, 2 - pe))), f.mul(ti, f.mul(c, f.mul(pw(a, -2), pw(b, 1 - pe)))), f.zero()],
            [f.zero(), f.mul(ti, f.mul(pw(a, -1), pw(b, 1 - pe))), f.zero()],
            [f.zero(), f.zero(), f.mul(ti, pw(b, -pe))],
        ];
        for (r, row) in expect.iter().enumerate() {
            for (s, &e) in row.iter().enumerate() {
                assert_eq!(m.get(p - 2 + r, p - 2 + s), e, "entry {r},{s}");
            }
        }
    }
}
