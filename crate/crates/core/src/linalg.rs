//! Dense matrices over exact fields.

use crate::num::poly::PolyQ;
use crate::num::rational::{parse_rational, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// An exact field element. Constants are built relative to an existing
/// element so that elements of a specific number field can carry their field.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn is_zero_s(&self) -> bool;
    fn add_s(&self, o: &Self) -> Self;
    fn sub_s(&self, o: &Self) -> Self;
    fn mul_s(&self, o: &Self) -> Self;
    fn neg_s(&self) -> Self;
    /// Multiplicative inverse; callers guarantee nonzero.
    fn inv_s(&self) -> Self;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_s(&self) -> Self {
        -self
    }
    fn inv_s(&self) -> Self {
        self.recip()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RationalMatrix = Mat<Rational>;

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, proto: &T) -> Self {
        Mat { rows, cols, data: vec![proto.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let mut m = Mat::zeros(n, n, proto);
        for i in 0..n {
            m[(i, i)] = proto.one_like();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_cols(cols: &[Vec<T>], proto: &T) -> Self {
        let r = cols.first().map_or(0, |c| c.len());
        let mut m = Mat::zeros(r, cols.len(), proto);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>], proto: &T) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        let mut m = Mat::zeros(rows.len(), c, proto);
        for (i, r) in rows.iter().enumerate() {
            for j in 0..c {
                m[(i, j)] = r[j].clone();
            }
        }
        m
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_s(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_s(b)).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|a| a.mul_s(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let proto = self.data.first().or(o.data.first()).expect("empty matrix product");
        let mut out = Mat::zeros(self.rows, o.cols, proto);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero_s() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero_s() {
                        out[(i, j)] = out[(i, j)].add_s(&a.mul_s(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero_s() && !b.is_zero_s() {
                        acc = acc.add_s(&a.mul_s(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut n: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows, &self.data[0]);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero_s())
    }

    pub fn trace(&self) -> T {
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add_s(&self[(i, i)]);
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero_s()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv_s();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul_s(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero_s() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = m[(r, j)].mul_s(&f);
                        m[(i, j)] = m[(i, j)].sub_s(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one column vector per element.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let proto = &self.data[0];
        let (m, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![proto.zero_like(); self.cols];
                v[f] = proto.one_like();
                for (r, &p) in piv.iter().enumerate() {
                    v[p] = m[(r, f)].neg_s();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let proto = &self.data[0];
        let mut aug = Mat::zeros(n, 2 * n, proto);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = proto.one_like();
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Mat::zeros(n, n, proto);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.cols;
        let proto = &self.data[0];
        let mut aug = Mat::zeros(self.rows, n + 1, proto);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&n) {
            return None;
        }
        let mut x = vec![proto.zero_like(); n];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r[(i, n)].clone();
        }
        Some(x)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl Mat<Rational> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r: Vec<Vec<Rational>> =
            rows.iter().map(|row| row.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()).collect();
        Mat::from_rows(&r, &Rational::zero())
    }

    /// Parse rows of `"p/q"` strings.
    pub fn parse(rows: &[Vec<String>]) -> Option<Self> {
        let c = rows.first()?.len();
        let mut out = Vec::new();
        for r in rows {
            if r.len() != c {
                return None;
            }
            out.push(r.iter().map(|s| parse_rational(s)).collect::<Option<Vec<_>>>()?);
        }
        Some(Mat::from_rows(&out, &Rational::zero()))
    }

    pub fn zero_matrix(r: usize, c: usize) -> Self {
        Mat::zeros(r, c, &Rational::zero())
    }

    pub fn eye(n: usize) -> Self {
        Mat::identity(n, &Rational::zero())
    }

    /// Characteristic polynomial `det(xI - M)` (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> PolyQ {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let id = Mat::eye(n);
        let mut mk = Mat::zero_matrix(n, n);
        for k in 1..=n {
            let next = self.mul(&mk).add(&id.scale(&coeffs[n - k + 1]));
            mk = next;
            let am = self.mul(&mk);
            coeffs[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
        }
        PolyQ::new(coeffs)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|a| !a.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|a| a.is_positive())
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// Integer matrix `N` and positive integer `D` with `self = N / D`.
    pub fn integer_scaled(&self) -> (Mat<BigInt>, BigInt) {
        let d = crate::num::rational::denom_lcm(self.data.iter());
        let data = self.data.iter().map(|a| (a * Rational::from_integer(d.clone())).to_integer()).collect();
        (Mat { rows: self.rows, cols: self.cols, data }, d)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|a| a.to_string()).collect()).collect()
    }

    /// Permutation similarity `P M P^T` with `(P M P^T)[p(i)][p(j)] = M[i][j]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Mat::zero_matrix(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(perm[i], perm[j])] = self[(i, j)].clone();
            }
        }
        out
    }
}

impl Mat<BigInt> {
    pub fn int_mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut data = vec![BigInt::zero(); self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    data[i * o.cols + j] += a * &o.data[k * o.cols + j];
                }
            }
        }
        Mat { rows: self.rows, cols: o.cols, data }
    }

    pub fn int_identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        Mat { rows: n, cols: n, data }
    }

    pub fn int_get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn int_rows(&self) -> usize {
        self.rows
    }

    pub fn int_cols(&self) -> usize {
        self.cols
    }

    pub fn int_data(&self) -> &[BigInt] {
        &self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat;

    #[test]
    fn charpoly_small() {
        let m = RationalMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.charpoly(), PolyQ::from_ints(&[-1, 0, 1]));
        let r = Mat::from_rows(&[vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]], &rat(0, 1));
        assert_eq!(r.charpoly(), PolyQ::new(vec![rat(1, 1), rat(-6, 5), rat(1, 1)]));
    }

    #[test]
    fn kernel_and_inverse() {
        let m = RationalMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        assert!(m.inverse().is_none());
        let a = RationalMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::eye(2));
        assert_eq!(a.solve(&[rat(3, 1), rat(2, 1)]), Some(vec![rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn powers() {
        let m = RationalMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.pow(5), RationalMatrix::from_ints(&[&[1, 5], &[0, 1]]));
        assert_eq!(m.pow(0), RationalMatrix::eye(2));
    }
}
