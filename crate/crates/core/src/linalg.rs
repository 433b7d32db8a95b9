//! Dense matrices over a [`Field`]. Vectors are rows; matrices act on the right.

use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Entrywise Frobenius `a -> a^{p^k}`.
    pub fn frobenius(&self, f: &Field, k: i64) -> Matrix {
        let data = self.data.iter().map(|&a| f.frobenius(a, k)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { FieldElement::ONE } else { FieldElement::ZERO })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let s = f.inv(a.get(col, col)).ok()?;
            a.scale_row(f, col, s);
            inv.scale_row(f, col, s);
            for r in 0..n {
                if r != col {
                    let c = a.get(r, col);
                    if !c.is_zero() {
                        a.add_row_multiple(f, r, col, f.neg(c));
                        inv.add_row_multiple(f, r, col, f.neg(c));
                    }
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    fn scale_row(&mut self, f: &Field, i: usize, s: FieldElement) {
        for k in 0..self.cols {
            let v = self.get(i, k);
            self.set(i, k, f.mul(v, s));
        }
    }

    /// row_i += s * row_j
    fn add_row_multiple(&mut self, f: &Field, i: usize, j: usize, s: FieldElement) {
        for k in 0..self.cols {
            let v = f.add(self.get(i, k), f.mul(s, self.get(j, k)));
            self.set(i, k, v);
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            let s = f.inv(a.get(r, col)).expect("pivot is nonzero");
            a.scale_row(f, r, s);
            for i in 0..a.rows {
                if i != r {
                    let c = a.get(i, col);
                    if !c.is_zero() {
                        a.add_row_multiple(f, i, r, f.neg(c));
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of `{v : v * self = 0}`.
    pub fn left_kernel(&self, f: &Field) -> Vec<Vec<FieldElement>> {
        self.transpose().right_kernel(f)
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn right_kernel(&self, f: &Field) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[fc] = FieldElement::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }
}

/// `v * m` for a row vector `v`.
pub fn vec_mul(f: &Field, v: &[FieldElement], m: &Matrix) -> Vec<FieldElement> {
    assert_eq!(v.len(), m.rows);
    let mut out = vec![FieldElement::ZERO; m.cols];
    for (i, &a) in v.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let row = m.row(i);
        for (o, &b) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(a, b));
        }
    }
    out
}

pub fn vec_add(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vec_neg(f: &Field, a: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().map(|&x| f.neg(x)).collect()
}

pub fn vec_scale(f: &Field, a: &[FieldElement], s: FieldElement) -> Vec<FieldElement> {
    a.iter().map(|&x| f.mul(x, s)).collect()
}

/// A `K`-subspace of `K^dim` in canonical (reduced echelon) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub dim: usize,
    pub basis: Vec<Vec<FieldElement>>,
}

impl Subspace {
    pub fn span(f: &Field, dim: usize, vectors: &[Vec<FieldElement>]) -> Subspace {
        if vectors.is_empty() {
            return Subspace { dim, basis: Vec::new() };
        }
        let (r, piv) = Matrix::from_rows(vectors).rref(f);
        let basis = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { dim, basis }
    }

    /// Span of the coordinate vectors `e_i`, `i` in `coords`.
    pub fn coordinate(f: &Field, dim: usize, coords: impl IntoIterator<Item = usize>) -> Subspace {
        let vs: Vec<Vec<FieldElement>> = coords
            .into_iter()
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; dim];
                v[i] = FieldElement::ONE;
                v
            })
            .collect();
        Subspace::span(f, dim, &vs)
    }

    pub fn whole(f: &Field, dim: usize) -> Subspace {
        Subspace::coordinate(f, dim, 0..dim)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, f: &Field, v: &[FieldElement]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(&rows).rank(f) == self.basis.len()
    }

    /// Image under `v -> v * m`.
    pub fn image(&self, f: &Field, m: &Matrix) -> Subspace {
        let vs: Vec<_> = self.basis.iter().map(|b| vec_mul(f, b, m)).collect();
        Subspace::span(f, m.cols, &vs)
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(f, self.dim, &vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_kernel() {
        let f = Field::new(5, 1).unwrap();
        let e = |n| f.from_int(n);
        let m = Matrix::from_rows(&[vec![e(1), e(2)], vec![e(3), e(4)]]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        let s = Matrix::from_rows(&[vec![e(1), e(2)], vec![e(2), e(4)]]);
        assert!(s.inverse(&f).is_none());
        let k = s.left_kernel(&f);
        assert_eq!(k.len(), 1);
        assert!(vec_mul(&f, &k[0], &s).iter().all(|a| a.is_zero()));
    }

    #[test]
    fn subspace_canonical_form() {
        let f = Field::new(3, 2).unwrap();
        let a = f.primitive_element();
        let u = Subspace::span(&f, 2, &[vec![a, a]]);
        let w = Subspace::span(&f, 2, &[vec![f.one(), f.one()]]);
        assert_eq!(u, w);
        assert!(u.contains(&f, &[f.from_int(2), f.from_int(2)]));
    }
}
