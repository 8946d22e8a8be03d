//! Simple algebraic number fields `Q[x]/(g)` with `g` irreducible.
//!
//! One symbolic computation in such a field stands for all `deg g` complex
//! embeddings at once; numerical values are only produced when an embedding
//! is chosen.

use super::algebraic::{AlgebraicNumber, Sign};
use super::dyadic::{ComplexInterval, Interval};
use super::poly::PolyQ;
use super::rational::Rational;
use crate::linalg::{RationalMatrix, Scalar};
use num_traits::One;
use std::fmt;
use std::sync::Arc;

pub struct NumberField {
    modulus: PolyQ,
    embeddings: Vec<AlgebraicNumber>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "Q[x]/({})", self.modulus)
    }
}

impl NumberField {
    /// The field defined by an irreducible polynomial (not re-checked).
    pub fn new(g: &PolyQ) -> Arc<NumberField> {
        let modulus = g.monic();
        let embeddings = AlgebraicNumber::roots_of_irreducible(&modulus);
        Arc::new(NumberField { modulus, embeddings })
    }

    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(&PolyQ::x())
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    pub fn modulus(&self) -> &PolyQ {
        &self.modulus
    }

    /// Images of the generator, one per embedding.
    pub fn embeddings(&self) -> &[AlgebraicNumber] {
        &self.embeddings
    }

    pub fn is_real_embedding(&self, k: usize) -> bool {
        self.embeddings[k].is_real()
    }
}

#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    poly: PolyQ,
}

impl PartialEq for FieldElem {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &o.field) || self.field.modulus == o.field.modulus) && self.poly == o.poly
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl FieldElem {
    pub fn new(field: &Arc<NumberField>, poly: PolyQ) -> Self {
        let poly = poly.rem(&field.modulus);
        FieldElem { field: field.clone(), poly }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        FieldElem { field: field.clone(), poly: PolyQ::constant(q) }
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        FieldElem::new(field, PolyQ::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn poly(&self) -> &PolyQ {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.poly.degree() == 0 {
            Some(self.poly.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        FieldElem { field: self.field.clone(), poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldElem { field: self.field.clone(), poly: self.poly.sub(&o.poly) }
    }

    pub fn neg(&self) -> Self {
        FieldElem { field: self.field.clone(), poly: self.poly.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        FieldElem::new(&self.field, self.poly.mul(&o.poly))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElem { field: self.field.clone(), poly: self.poly.scale(q) }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero field element");
        let (g, s, _) = self.poly.xgcd(&self.field.modulus);
        debug_assert!(g == PolyQ::one());
        FieldElem::new(&self.field, s)
    }

    pub fn pow(&self, n: i64) -> Self {
        if n < 0 {
            return self.inv().pow(-n);
        }
        let mut acc = FieldElem::from_rational(&self.field, Rational::one());
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `self` on the power basis.
    pub fn mult_matrix(&self) -> RationalMatrix {
        let n = self.field.degree();
        let mut m = RationalMatrix::zero_matrix(n, n);
        let mut cur = self.clone();
        let x = FieldElem::generator(&self.field);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = cur.poly.coeff(i);
            }
            cur = cur.mul(&x);
        }
        m
    }

    /// Sum of all embeddings.
    pub fn trace(&self) -> Rational {
        self.mult_matrix().trace()
    }

    /// Minimal polynomial over the rationals.
    pub fn minpoly(&self) -> PolyQ {
        if let Some(q) = self.as_rational() {
            return PolyQ::linear_root(&q);
        }
        self.mult_matrix().charpoly().squarefree_part()
    }

    /// Enclosure of the value under embedding `k`, of width at most `2^-bits`.
    pub fn eval(&self, k: usize, bits: u32) -> ComplexInterval {
        if let Some(q) = self.as_rational() {
            return ComplexInterval::from_rational(&q, bits + 8);
        }
        let root = &self.field.embeddings[k];
        let mut w = bits + 16;
        loop {
            let z = root.approx(w);
            let v = self.poly.eval_complex(&z, w + 16);
            let v = if root.is_real() { ComplexInterval::real(v.re) } else { v };
            if v.width().magnitude() <= -(bits as i64) {
                return v;
            }
            w = w * 2;
        }
    }

    /// Enclosure of the real value under a real embedding.
    pub fn eval_real(&self, k: usize, bits: u32) -> Interval {
        self.eval(k, bits).re
    }

    /// Exact sign under a real embedding.
    pub fn sign_at(&self, k: usize) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        let mut bits = 16;
        loop {
            let v = self.eval(k, bits);
            if v.re.is_positive() {
                return Sign::Positive;
            }
            if v.re.is_negative() {
                return Sign::Negative;
            }
            bits *= 2;
        }
    }

    /// Whether the value under embedding `k` is a positive real number.
    pub fn is_positive_real_at(&self, k: usize) -> bool {
        if self.is_zero() {
            return false;
        }
        if !self.field.is_real_embedding(k) {
            let a = self.to_algebraic(k);
            return a.is_real() && a.sign() == Some(Sign::Positive);
        }
        self.sign_at(k) == Sign::Positive
    }

    /// The value under embedding `k` as an algebraic number.
    pub fn to_algebraic(&self, k: usize) -> AlgebraicNumber {
        if let Some(q) = self.as_rational() {
            return AlgebraicNumber::from_rational(q);
        }
        let f = self.minpoly();
        let me = self.clone();
        AlgebraicNumber::identify(&f, move |b| me.eval(k, b))
    }
}

impl Scalar for FieldElem {
    fn zero_like(&self) -> Self {
        FieldElem { field: self.field.clone(), poly: PolyQ::zero() }
    }
    fn one_like(&self) -> Self {
        FieldElem { field: self.field.clone(), poly: PolyQ::one() }
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        FieldElem::from_rational(&self.field, q.clone())
    }
    fn is_zero_s(&self) -> bool {
        self.poly.is_zero()
    }
    fn add_s(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_s(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_s(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn inv_s(&self) -> Self {
        self.inv()
    }
}

/// Lift a rational matrix into a field.
pub fn lift_matrix(m: &RationalMatrix, field: &Arc<NumberField>) -> crate::linalg::Mat<FieldElem> {
    m.map(|q| FieldElem::from_rational(field, q.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat;

    #[test]
    fn arithmetic_in_q_sqrt2() {
        let k = NumberField::new(&PolyQ::from_ints(&[-2, 0, 1]));
        let a = FieldElem::generator(&k);
        assert_eq!(a.mul(&a).as_rational(), Some(rat(2, 1)));
        let b = a.add(&FieldElem::from_rational(&k, rat(1, 1)));
        let bi = b.inv();
        assert_eq!(b.mul(&bi).as_rational(), Some(rat(1, 1)));
        assert_eq!(b.trace(), rat(2, 1));
        assert_eq!(b.minpoly(), PolyQ::from_ints(&[-1, -2, 1]));
        assert_eq!(a.sign_at(0), Sign::Negative);
        assert_eq!(a.sign_at(1), Sign::Positive);
    }

    #[test]
    fn embedding_to_algebraic() {
        // zeta_8 = (1+i)/sqrt2; zeta^2 = i
        let k = NumberField::new(&PolyQ::cyclotomic(8));
        let z = FieldElem::generator(&k);
        let i = z.pow(2);
        assert_eq!(i.minpoly(), PolyQ::from_ints(&[1, 0, 1]));
        let ia = i.to_algebraic(0);
        assert_eq!(ia.is_root_of_unity(), Some(4));
        let s = z.add(&z.pow(7));
        assert_eq!(s.minpoly(), PolyQ::from_ints(&[-2, 0, 1]));
        assert!(z.pow(8).as_rational() == Some(rat(1, 1)));
    }
}
