//! The semidirect products `P_n(q) = V_n(q) D` and `P_Lambda(q) = Lambda(q) D`,
//! their subgroups `P^*` and Sylow `p`-subgroups `S`.

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};
use crate::poly::{self, DTriple, Mat2, ModuleKind, ModuleVector, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("characteristic 2 is not supported by the group constructors")]
    CharacteristicTwo,
    #[error("degree n = {n} must satisfy 1 <= n <= {max}")]
    Degree { n: usize, max: usize },
    #[error("vector lives in {got:?}, the group acts on {expected:?}")]
    Module { expected: ModuleKind, got: ModuleKind },
    #[error("element is not in the subgroup {0}")]
    NotInSubgroup(&'static str),
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: u128, cap: u64 },
    #[error("{0}")]
    Unsupported(String),
}

/// Which module the unipotent radical is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Pn(usize),
    PLambda,
}

impl Ambient {
    pub fn module(self) -> ModuleKind {
        match self {
            Ambient::Pn(n) => ModuleKind::Vn(n),
            Ambient::PLambda => ModuleKind::Lambda,
        }
    }
}

/// `(phi, theta, A, v)`; `d` holds `(phi, theta, A)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicElement {
    pub d: DTriple,
    pub vec: ModuleVector,
}

/// `p`-part and `p'`-part of `n`.
pub fn split_p_part(n: u32, p: u32) -> (u32, u32) {
    let mut pp = 1;
    let mut r = n;
    while r % p == 0 {
        r /= p;
        pp *= p;
    }
    (pp, r)
}

/// Context for arithmetic in `P_n(q)` or `P_Lambda(q)`.
#[derive(Debug, Clone)]
pub struct Parabolic {
    field: Field,
    ambient: Ambient,
}

impl Parabolic {
    pub fn new(field: Field, ambient: Ambient) -> Result<Parabolic, GroupError> {
        if field.p() == 2 {
            return Err(GroupError::CharacteristicTwo);
        }
        if let Ambient::Pn(n) = ambient {
            let max = field.p() as usize;
            if n == 0 || n > max {
                return Err(GroupError::Degree { n, max });
            }
        }
        Ok(Parabolic { field, ambient })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn module(&self) -> ModuleKind {
        self.ambient.module()
    }

    pub fn dim(&self) -> usize {
        self.module().dim(self.field.p())
    }

    /// Frobenius exponents of `O^p(Aut K)`: multiples of the `p`-part of `m`.
    pub fn m_p(&self) -> u32 {
        split_p_part(self.field.m(), self.field.p()).0
    }

    pub fn m_pprime(&self) -> u32 {
        split_p_part(self.field.m(), self.field.p()).1
    }

    pub fn identity(&self) -> ParabolicElement {
        ParabolicElement { d: DTriple::identity(), vec: ModuleVector::zero(&self.field, self.module()) }
    }

    pub fn element(&self, d: DTriple, vec: ModuleVector) -> Result<ParabolicElement, GroupError> {
        let g = ParabolicElement { d, vec };
        self.validate(&g)?;
        Ok(g)
    }

    pub fn from_d(&self, d: DTriple) -> ParabolicElement {
        ParabolicElement { d, vec: ModuleVector::zero(&self.field, self.module()) }
    }

    pub fn from_vec(&self, vec: ModuleVector) -> ParabolicElement {
        ParabolicElement { d: DTriple::identity(), vec }
    }

    /// `(0, 1, [[1, 0], [c, 1]], 0)`
    pub fn u(&self, c: FieldElement) -> ParabolicElement {
        self.from_d(DTriple::linear(FieldElement::ONE, Mat2::lower_unipotent(c)))
    }

    pub fn validate(&self, g: &ParabolicElement) -> Result<(), GroupError> {
        g.d.validate(&self.field)?;
        if g.vec.kind != self.module() {
            return Err(GroupError::Module { expected: self.module(), got: g.vec.kind });
        }
        ModuleVector::new(&self.field, g.vec.kind, g.vec.coeffs.clone())?;
        Ok(())
    }

    /// Membership in `P^* = V O^p(D)`.
    pub fn in_p_star(&self, g: &ParabolicElement) -> bool {
        g.d.aut_exp % self.m_p() == 0
    }

    /// Membership in `S = V U`.
    pub fn in_s(&self, g: &ParabolicElement) -> bool {
        let d = &g.d;
        d.aut_exp == 0
            && d.scalar == FieldElement::ONE
            && d.mat.a == FieldElement::ONE
            && d.mat.b.is_zero()
            && d.mat.d == FieldElement::ONE
    }

    /// Membership in `N_{P^*}(S)`: lower triangular matrix part.
    pub fn normalizes_s(&self, g: &ParabolicElement) -> bool {
        self.in_p_star(g) && g.d.mat.is_lower_triangular()
    }

    pub fn act(&self, v: &ModuleVector, d: &DTriple) -> ModuleVector {
        let f = &self.field;
        let vf = v.frobenius(f, d.aut_exp as i64);
        let m = poly::rho(f, v.kind, d);
        ModuleVector { kind: v.kind, coeffs: crate::linalg::vec_mul(f, &vf.coeffs, &m) }
    }

    /// `(d, v)(e, w) = (d e, v.e + w)`
    pub fn mul(&self, g: &ParabolicElement, h: &ParabolicElement) -> ParabolicElement {
        let f = &self.field;
        ParabolicElement { d: g.d.mul(f, &h.d), vec: self.act(&g.vec, &h.d).add(f, &h.vec) }
    }

    pub fn inv(&self, g: &ParabolicElement) -> ParabolicElement {
        let f = &self.field;
        let di = g.d.inv(f);
        ParabolicElement { d: di, vec: self.act(&g.vec, &di).neg(f) }
    }

    pub fn pow(&self, g: &ParabolicElement, e: i64) -> ParabolicElement {
        let mut base = if e < 0 { self.inv(g) } else { g.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `h^{-1} g h`
    pub fn conj(&self, g: &ParabolicElement, h: &ParabolicElement) -> ParabolicElement {
        self.mul(&self.mul(&self.inv(h), g), h)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`
    pub fn comm(&self, a: &ParabolicElement, b: &ParabolicElement) -> ParabolicElement {
        self.mul(&self.mul(&self.inv(a), &self.inv(b)), &self.mul(a, b))
    }

    pub fn is_identity(&self, g: &ParabolicElement) -> bool {
        g.d.is_identity() && g.vec.is_zero()
    }

    /// Order of `g`: brute force on the `D`-part, then at most one extra
    /// factor `p` from the unipotent radical.
    pub fn order(&self, g: &ParabolicElement) -> u64 {
        let f = &self.field;
        let mut k = 1u64;
        let mut x = g.d;
        while !x.is_identity() {
            x = x.mul(f, &g.d);
            k += 1;
        }
        let h = self.pow(g, k as i64);
        if h.vec.is_zero() {
            k
        } else {
            k * f.p() as u64
        }
    }

    /// Uniform random element of `P^*`.
    pub fn random_p_star<R: Rng>(&self, rng: &mut R) -> ParabolicElement {
        let f = &self.field;
        let q = f.q();
        let steps = f.m() / self.m_p();
        let aut_exp = rng.gen_range(0..steps) * self.m_p();
        let scalar = FieldElement(rng.gen_range(1..q) as u32);
        let mat = loop {
            let m = Mat2::new(
                FieldElement(rng.gen_range(0..q) as u32),
                FieldElement(rng.gen_range(0..q) as u32),
                FieldElement(rng.gen_range(0..q) as u32),
                FieldElement(rng.gen_range(0..q) as u32),
            );
            if !m.det(f).is_zero() {
                break m;
            }
        };
        let coeffs = (0..self.dim()).map(|_| FieldElement(rng.gen_range(0..q) as u32)).collect();
        ParabolicElement { d: DTriple { aut_exp, scalar, mat }, vec: ModuleVector { kind: self.module(), coeffs } }
    }

    /// Uniform random element of `N_{P^*}(S)`.
    pub fn random_borel<R: Rng>(&self, rng: &mut R) -> ParabolicElement {
        let f = &self.field;
        let q = f.q();
        let mut g = self.random_p_star(rng);
        g.d.mat = Mat2::new(
            FieldElement(rng.gen_range(1..q) as u32),
            FieldElement::ZERO,
            FieldElement(rng.gen_range(0..q) as u32),
            FieldElement(rng.gen_range(1..q) as u32),
        );
        g
    }

    pub fn random_s<R: Rng>(&self, rng: &mut R) -> ParabolicElement {
        let q = self.field.q();
        let c = FieldElement(rng.gen_range(0..q) as u32);
        let coeffs = (0..self.dim()).map(|_| FieldElement(rng.gen_range(0..q) as u32)).collect();
        ParabolicElement { d: self.u(c).d, vec: ModuleVector { kind: self.module(), coeffs } }
    }

    /// Torus element `(phi, lambda, diag(mu, nu))`.
    pub fn torus(&self, aut_exp: u32, lambda: FieldElement, mu: FieldElement, nu: FieldElement) -> ParabolicElement {
        self.from_d(DTriple { aut_exp, scalar: lambda, mat: Mat2::diag(mu, nu) })
    }

    /// Generators of `Sigma cap P^*`, the diagonal subgroup with field automorphisms.
    pub fn sigma_generators(&self) -> Vec<ParabolicElement> {
        let f = &self.field;
        let w = f.primitive_element();
        let one = f.one();
        let mut gens = vec![self.torus(0, w, one, one), self.torus(0, one, w, one), self.torus(0, one, one, w)];
        if self.m_pprime() > 1 {
            gens.push(self.torus(self.m_p() % f.m(), one, one, one));
        }
        gens
    }

    /// Generators of `B cap P^* = N_{P^*}(S)`.
    pub fn borel_generators(&self) -> Vec<ParabolicElement> {
        let mut gens = self.sigma_generators();
        gens.extend(self.field.prime_basis().into_iter().map(|b| self.u(b)));
        gens.extend(self.v_generators());
        gens
    }

    /// `F_p`-basis of the unipotent radical.
    pub fn v_generators(&self) -> Vec<ParabolicElement> {
        let f = &self.field;
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for &b in &f.prime_basis() {
                out.push(self.from_vec(ModuleVector::monomial(f, self.module(), i, b)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_characteristic_two() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(Parabolic::new(f, Ambient::Pn(1)).unwrap_err(), GroupError::CharacteristicTwo);
        let f = Field::new(3, 1).unwrap();
        assert!(matches!(Parabolic::new(f, Ambient::Pn(4)), Err(GroupError::Degree { .. })));
    }

    #[test]
    fn inverse_and_associativity() {
        let f = Field::new(3, 2).unwrap();
        for amb in [Ambient::Pn(2), Ambient::PLambda] {
            let g = Parabolic::new(f.clone(), amb).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..50 {
                let a = g.random_p_star(&mut rng);
                let b = g.random_p_star(&mut rng);
                let c = g.random_p_star(&mut rng);
                assert!(g.is_identity(&g.mul(&a, &g.inv(&a))));
                assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
            }
        }
    }

    #[test]
    fn orders() {
        let f = Field::new(3, 2).unwrap();
        let g = Parabolic::new(f.clone(), Ambient::Pn(2)).unwrap();
        let u = g.u(f.one());
        assert_eq!(g.order(&u), 3);
        let w = f.primitive_element();
        assert_eq!(g.order(&g.torus(0, w, f.one(), f.one())), 8);
        assert_eq!(g.order(&g.torus(1, f.one(), f.one(), f.one())), 2);
    }
}
