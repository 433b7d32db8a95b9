//! The embedding of `N_{P^*_Lambda}(R)` into `Gamma L_4(q)`.

use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::parabolic::{Ambient, GroupError, Parabolic, ParabolicElement};

/// `(phi, M)` with product `(phi, M)(Phi, N) = (phi Phi, M^Phi N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gamma4 {
    pub aut_exp: u32,
    pub mat: Matrix,
}

impl Gamma4 {
    pub fn identity() -> Gamma4 {
        Gamma4 { aut_exp: 0, mat: Matrix::identity(4) }
    }

    pub fn mul(&self, f: &Field, o: &Gamma4) -> Gamma4 {
        Gamma4 {
            aut_exp: (self.aut_exp + o.aut_exp) % f.m(),
            mat: self.mat.frobenius(f, o.aut_exp as i64).mul(f, &o.mat),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.aut_exp == 0 && self.mat.is_identity()
    }
}

/// Whether `g` has the shape `(phi, theta, [[a, 0], [c, b]], lambda Y^p + mu X Y^{p-1} + nu X^2 Y^{p-2})`.
pub fn in_domain(par: &Parabolic, g: &ParabolicElement) -> bool {
    let p = par.field().p() as usize;
    par.ambient() == Ambient::PLambda
        && par.in_p_star(g)
        && g.d.mat.is_lower_triangular()
        && g.vec.coeffs[..p - 2].iter().all(|x| x.is_zero())
}

/// Image of a domain element under the raw entries
/// `theta, a, b, c, lambda, mu, nu`.
pub fn psi_star_entries(
    f: &Field,
    aut_exp: u32,
    theta: FieldElement,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    lambda: FieldElement,
    mu: FieldElement,
    nu: FieldElement,
) -> Gamma4 {
    let p = f.p() as i64;
    let z = f.zero();
    let bp = f.pow(b, p).expect("nonnegative exponent");
    let bp1 = f.pow(b, p - 1).expect("nonnegative exponent");
    let k1 = f.mul(theta, f.mul(a, bp));
    let k2 = f.mul(theta, f.mul(f.mul(a, a), bp1));
    let rows = vec![
        vec![k1, z, z, f.mul(k1, lambda)],
        vec![z, k2, f.mul(k2, nu), f.mul(k2, mu)],
        vec![z, z, b, c],
        vec![z, z, z, a],
    ];
    Gamma4 { aut_exp, mat: Matrix::from_rows(&rows) }
}

pub fn psi_star(par: &Parabolic, g: &ParabolicElement) -> Result<Gamma4, GroupError> {
    par.validate(g)?;
    if !in_domain(par, g) {
        return Err(GroupError::NotInSubgroup("N_{P*}(R)"));
    }
    let f = par.field();
    let p = f.p() as usize;
    let m = &g.d.mat;
    let v = &g.vec.coeffs;
    Ok(psi_star_entries(f, g.d.aut_exp, g.d.scalar, m.a, m.d, m.c, v[p], v[p - 1], v[p - 2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_domain(par: &Parabolic, rng: &mut ChaCha8Rng) -> ParabolicElement {
        let p = par.field().p() as usize;
        let mut g = par.random_borel(rng);
        for x in &mut g.vec.coeffs[..p - 2] {
            *x = FieldElement::ZERO;
        }
        g
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        for (p, m) in [(3, 2), (5, 2), (3, 4)] {
            let f = Field::new(p, m).unwrap();
            let par = Parabolic::new(f.clone(), Ambient::PLambda).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..200 {
                let a = random_domain(&par, &mut rng);
                let b = random_domain(&par, &mut rng);
                let lhs = psi_star(&par, &par.mul(&a, &b)).unwrap();
                let rhs = psi_star(&par, &a).unwrap().mul(&f, &psi_star(&par, &b).unwrap());
                assert_eq!(lhs, rhs, "p={p} m={m}");
            }
        }
    }
}
