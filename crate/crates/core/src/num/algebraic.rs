//! Algebraic numbers: an irreducible minimal polynomial plus an isolating box.
//!
//! Exact comparisons between numbers from unrelated fields go through
//! [`AlgExpr::is_zero`], which combines interval evaluation with a Liouville
//! lower bound: a nonzero algebraic number of degree at most `D` and absolute
//! logarithmic height at most `h` has modulus at least `exp(-D h)`.

use super::dyadic::{pi, ComplexInterval, Dyadic, Interval, Round};
use super::poly::{totient, PolyQ};
use super::rational::Rational;
use super::roots::{factor, isolate, refine_box, RootBox};
use crate::linalg::RationalMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

/// Exact sign, with the conditionality flag of the zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignResult {
    pub sign: Sign,
    /// Set when `Zero` rests on the formal-independence rule.
    pub conditional: bool,
}

impl SignResult {
    pub fn exact(sign: Sign) -> Self {
        SignResult { sign, conditional: false }
    }

    pub fn from_ordering(o: Ordering) -> Self {
        SignResult::exact(match o {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        })
    }
}

struct Inner {
    minpoly: PolyQ,
    prim: Vec<BigInt>,
    index: usize,
    rational: Option<Rational>,
    real: bool,
    initial: RootBox,
    cache: Mutex<RootBox>,
    height: f64,
}

/// A complex algebraic number. Cheap to clone; immutable apart from an
/// internal refinement cache that never changes the identified root.
#[derive(Clone)]
pub struct AlgebraicNumber(Arc<Inner>);

impl AlgebraicNumber {
    pub fn from_rational(q: Rational) -> Self {
        let minpoly = PolyQ::linear_root(&q);
        let prim = minpoly.primitive();
        let b = isolate(&minpoly).remove(0);
        let height = rational_height(&q);
        AlgebraicNumber(Arc::new(Inner {
            minpoly,
            prim,
            index: 0,
            rational: Some(q),
            real: true,
            initial: b.clone(),
            cache: Mutex::new(b),
            height,
        }))
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// All roots of an irreducible polynomial, in canonical order.
    pub fn roots_of_irreducible(f: &PolyQ) -> Vec<AlgebraicNumber> {
        let f = f.monic();
        if f.degree() == 1 {
            return vec![AlgebraicNumber::from_rational(-f.coeff(0))];
        }
        let prim = f.primitive();
        let height = f.log_height_bound();
        isolate(&f)
            .into_iter()
            .enumerate()
            .map(|(index, b)| {
                AlgebraicNumber(Arc::new(Inner {
                    minpoly: f.clone(),
                    prim: prim.clone(),
                    index,
                    rational: None,
                    real: b.real,
                    initial: b.clone(),
                    cache: Mutex::new(b),
                    height,
                }))
            })
            .collect()
    }

    /// The root of the irreducible `f` identified by successively better
    /// enclosures `approx(bits)` of the target value.
    pub fn identify<F: FnMut(u32) -> ComplexInterval>(f: &PolyQ, mut approx: F) -> AlgebraicNumber {
        let cands = AlgebraicNumber::roots_of_irreducible(f);
        if cands.len() == 1 {
            return cands.into_iter().next().unwrap();
        }
        let mut bits = 32;
        loop {
            let a = approx(bits);
            let hits: Vec<&AlgebraicNumber> = cands.iter().filter(|c| c.approx(bits).intersects(&a)).collect();
            if hits.len() == 1 {
                return hits[0].clone();
            }
            assert!(bits < 1 << 22, "failed to identify algebraic number");
            bits *= 2;
        }
    }

    pub fn minpoly(&self) -> &PolyQ {
        &self.0.minpoly
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.degree()
    }

    /// Canonical position among the roots of the minimal polynomial.
    pub fn root_index(&self) -> usize {
        self.0.index
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.0.rational.as_ref()
    }

    pub fn is_real(&self) -> bool {
        self.0.real
    }

    pub fn is_zero(&self) -> bool {
        self.0.rational.as_ref().is_some_and(|q| q.is_zero())
    }

    /// Upper bound on the absolute logarithmic Weil height.
    pub fn height(&self) -> f64 {
        self.0.height
    }

    /// The original isolating box.
    pub fn isolating_box(&self) -> ComplexInterval {
        self.0.initial.to_interval()
    }

    /// Enclosure of width at most `2^-bits` (nested in every earlier one).
    pub fn approx(&self, bits: u32) -> ComplexInterval {
        if let Some(q) = &self.0.rational {
            return ComplexInterval::from_rational(q, bits + 8);
        }
        let mut c = self.0.cache.lock().unwrap();
        if c.radius.magnitude() > -(bits as i64) - 1 {
            *c = refine_box(&self.0.prim, &c, bits as i64 + 1);
        }
        c.to_interval()
    }

    /// Rational rectangle of side at most `eps` containing the number.
    pub fn refine(&self, eps: &Rational) -> ComplexInterval {
        assert!(eps.is_positive());
        let e = Dyadic::from_rational(eps, 64, Round::Down);
        let bits = (-e.magnitude() + 2).max(1) as u32;
        self.approx(bits)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let a = self.approx(60);
        (a.re.mid().to_f64(), a.im.mid().to_f64())
    }

    /// Complex conjugate.
    pub fn conj(&self) -> AlgebraicNumber {
        if self.is_real() {
            return self.clone();
        }
        let n = self.degree();
        let roots = AlgebraicNumber::roots_of_irreducible(&self.0.minpoly);
        let nreal = roots.iter().filter(|r| r.is_real()).count();
        let nc = (n - nreal) / 2;
        let i = self.0.index;
        let j = if i < nreal + nc { i + nc } else { i - nc };
        roots[j].clone()
    }

    /// `-a`
    pub fn neg(&self) -> AlgebraicNumber {
        if let Some(q) = &self.0.rational {
            return AlgebraicNumber::from_rational(-q);
        }
        let f = self.0.minpoly.compose(&PolyQ::from_ints(&[0, -1])).monic();
        let me = self.clone();
        AlgebraicNumber::identify(&f, move |b| me.approx(b).neg())
    }

    /// `1/a`, for nonzero `a`.
    pub fn inv(&self) -> AlgebraicNumber {
        assert!(!self.is_zero(), "inverse of zero");
        if let Some(q) = &self.0.rational {
            return AlgebraicNumber::from_rational(q.recip());
        }
        let mut c: Vec<Rational> = self.0.minpoly.coeffs().to_vec();
        c.reverse();
        let f = PolyQ::new(c).monic();
        let me = self.clone();
        AlgebraicNumber::identify(&f, move |b| me.approx(b + 8).recip(b + 8))
    }

    /// `a^n` for `n >= 0` (and `n < 0` when `a != 0`).
    pub fn pow(&self, n: i64) -> AlgebraicNumber {
        if n < 0 {
            return self.inv().pow(-n);
        }
        if let Some(q) = &self.0.rational {
            return AlgebraicNumber::from_rational(pow_rat(q, n as u64));
        }
        if n == 0 {
            return AlgebraicNumber::from_int(1);
        }
        // charpoly of C^n is a power of the minimal polynomial of a^n
        let c = companion(&self.0.minpoly).pow(n as u64);
        let f = c.charpoly().squarefree_part();
        let me = self.clone();
        let extra = (n.unsigned_abs() as f64 * (1.0 + self.height())).log2().max(0.0) as u32 + 8;
        AlgebraicNumber::identify(&f, move |b| {
            let w = b + extra + (n as u32).ilog2() * 2 + 16;
            me.approx(w).pow(n, w)
        })
    }

    /// Multiplicative order if the number is a root of unity.
    ///
    /// A root of unity of order `n` has the cyclotomic polynomial `Phi_n` as
    /// minimal polynomial, and `phi(n) = deg` bounds the candidates.
    pub fn is_root_of_unity(&self) -> Option<u64> {
        if let Some(q) = &self.0.rational {
            if q.is_one() {
                return Some(1);
            }
            if (-q).is_one() {
                return Some(2);
            }
            return None;
        }
        let d = self.degree() as u64;
        for n in 3..=(2 * d * d + 2) {
            if totient(n) == d && PolyQ::cyclotomic(n) == self.0.minpoly {
                return Some(n);
            }
        }
        None
    }

    /// Exact sign of a real algebraic number.
    pub fn sign(&self) -> Option<Sign> {
        if !self.is_real() {
            return None;
        }
        if let Some(q) = &self.0.rational {
            return Some(sign_of_rational(q));
        }
        let mut bits = 16;
        loop {
            let a = self.approx(bits);
            if a.re.is_positive() {
                return Some(Sign::Positive);
            }
            if a.re.is_negative() {
                return Some(Sign::Negative);
            }
            bits *= 2;
        }
    }

    /// Enclosure of `ln |a|`, `a != 0`.
    pub fn ln_abs(&self, bits: u32) -> Interval {
        if let Some(q) = &self.0.rational {
            return Interval::from_rational(&q.abs(), bits + 8).ln(bits);
        }
        let mut w = bits + 8;
        loop {
            let a = self.approx(w);
            if !a.contains_zero() {
                return a.ln_abs(bits);
            }
            w *= 2;
        }
    }

    /// Enclosure of the principal argument in `(-pi, pi]`.
    pub fn arg(&self, bits: u32) -> Interval {
        if self.is_real() {
            return match self.sign() {
                Some(Sign::Negative) => pi(bits),
                _ => Interval::zero(),
            };
        }
        let mut w = bits + 8;
        loop {
            if let Some(a) = self.approx(w).arg(bits) {
                return a;
            }
            w *= 2;
        }
    }

    pub fn leaf(&self) -> AlgExpr {
        AlgExpr::Num(self.clone())
    }
}

fn sign_of_rational(q: &Rational) -> Sign {
    if q.is_positive() {
        Sign::Positive
    } else if q.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

pub fn pow_rat(q: &Rational, n: u64) -> Rational {
    num_traits::pow::pow(q.clone(), n as usize)
}

fn rational_height(q: &Rational) -> f64 {
    let m = q.numer().abs().max(q.denom().clone());
    ln_int_upper(&m)
}

/// Upper bound for `ln n`, `n >= 1`.
pub fn ln_int_upper(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        (n.to_f64().unwrap_or(1.0)).ln() * (1.0 + 1e-12) + 1e-12
    } else {
        bits as f64 * std::f64::consts::LN_2
    }
}

/// Companion matrix of a monic polynomial.
pub fn companion(f: &PolyQ) -> RationalMatrix {
    let f = f.monic();
    let n = f.degree();
    let mut m = RationalMatrix::zero_matrix(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Rational::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -f.coeff(i);
    }
    m
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.index == o.0.index && self.0.minpoly == o.0.minpoly)
    }
}

impl Eq for AlgebraicNumber {}

impl Hash for AlgebraicNumber {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.minpoly.hash(h);
        self.0.index.hash(h);
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if let Some(q) = &self.0.rational {
            return write!(f, "{}", q);
        }
        let (re, im) = self.to_f64();
        if self.is_real() {
            write!(f, "{:.6} (root of {})", re, self.0.minpoly)
        } else {
            write!(f, "{:.6}{:+.6}i (root of {})", re, im, self.0.minpoly)
        }
    }
}

/// All complex roots of `p`, grouped by irreducible factor, each with the
/// multiplicity of that factor.
pub fn roots(p: &PolyQ) -> Vec<(AlgebraicNumber, u32)> {
    let mut out = Vec::new();
    for (g, m) in factor(p) {
        for r in AlgebraicNumber::roots_of_irreducible(&g) {
            out.push((r, m));
        }
    }
    out
}

/// Exact sign of a real algebraic number.
pub fn alg_sign(a: &AlgebraicNumber) -> Result<SignResult, crate::Error> {
    a.sign()
        .map(SignResult::exact)
        .ok_or_else(|| crate::Error::InvalidInput("sign of a non-real algebraic number".into()))
}

/// Arithmetic expression over algebraic numbers with an exact zero test.
#[derive(Clone, Debug)]
pub enum AlgExpr {
    Num(AlgebraicNumber),
    Rat(Rational),
    Conj(Box<AlgExpr>),
    Neg(Box<AlgExpr>),
    Add(Box<AlgExpr>, Box<AlgExpr>),
    Sub(Box<AlgExpr>, Box<AlgExpr>),
    Mul(Box<AlgExpr>, Box<AlgExpr>),
    Div(Box<AlgExpr>, Box<AlgExpr>),
    Pow(Box<AlgExpr>, i64),
}

impl AlgExpr {
    pub fn rat(q: Rational) -> AlgExpr {
        AlgExpr::Rat(q)
    }
    pub fn conj(self) -> AlgExpr {
        AlgExpr::Conj(Box::new(self))
    }
    pub fn add(self, o: AlgExpr) -> AlgExpr {
        AlgExpr::Add(Box::new(self), Box::new(o))
    }
    pub fn sub(self, o: AlgExpr) -> AlgExpr {
        AlgExpr::Sub(Box::new(self), Box::new(o))
    }
    pub fn mul(self, o: AlgExpr) -> AlgExpr {
        AlgExpr::Mul(Box::new(self), Box::new(o))
    }
    pub fn div(self, o: AlgExpr) -> AlgExpr {
        AlgExpr::Div(Box::new(self), Box::new(o))
    }
    pub fn pow(self, n: i64) -> AlgExpr {
        AlgExpr::Pow(Box::new(self), n)
    }
    pub fn neg(self) -> AlgExpr {
        AlgExpr::Neg(Box::new(self))
    }
    /// `|e|^2` as `e * conj(e)`.
    pub fn norm_sqr(self) -> AlgExpr {
        self.clone().mul(self.conj())
    }

    /// Product of the distinct leaf values, raised to exponents.
    pub fn product(terms: &[(AlgebraicNumber, i64)]) -> AlgExpr {
        let mut e = AlgExpr::Rat(Rational::one());
        for (a, k) in terms {
            if *k != 0 {
                e = e.mul(a.leaf().pow(*k));
            }
        }
        e
    }

    fn leaves(&self, out: &mut Vec<(AlgebraicNumber, bool)>, conj: bool) {
        match self {
            AlgExpr::Num(a) => {
                if a.degree() > 1 {
                    let c = conj && !a.is_real();
                    if !out.iter().any(|(b, cc)| b == a && *cc == c) {
                        out.push((a.clone(), c));
                    }
                }
            }
            AlgExpr::Rat(_) => {}
            AlgExpr::Conj(e) => e.leaves(out, !conj),
            AlgExpr::Neg(e) | AlgExpr::Pow(e, _) => e.leaves(out, conj),
            AlgExpr::Add(a, b) | AlgExpr::Sub(a, b) | AlgExpr::Mul(a, b) | AlgExpr::Div(a, b) => {
                a.leaves(out, conj);
                b.leaves(out, conj);
            }
        }
    }

    /// Bound on the degree of the value over the rationals: the smaller of
    /// the product of leaf degrees and the product of the splitting-field
    /// degree bounds `deg!` over distinct minimal polynomials.
    pub fn degree_bound(&self) -> f64 {
        let mut l = Vec::new();
        self.leaves(&mut l, false);
        let direct: f64 = l.iter().map(|(a, _)| a.degree() as f64).product();
        let mut polys: Vec<&PolyQ> = Vec::new();
        for (a, _) in &l {
            if !polys.contains(&a.minpoly()) {
                polys.push(a.minpoly());
            }
        }
        let split: f64 = polys.iter().map(|p| (1..=p.degree()).map(|k| k as f64).product::<f64>()).product();
        direct.min(split)
    }

    /// Bound on the absolute logarithmic height of the value.
    pub fn height_bound(&self) -> f64 {
        match self {
            AlgExpr::Num(a) => a.height(),
            AlgExpr::Rat(q) => rational_height(q),
            AlgExpr::Conj(e) | AlgExpr::Neg(e) => e.height_bound(),
            AlgExpr::Pow(e, k) => k.unsigned_abs() as f64 * e.height_bound(),
            AlgExpr::Mul(a, b) | AlgExpr::Div(a, b) => a.height_bound() + b.height_bound(),
            AlgExpr::Add(a, b) | AlgExpr::Sub(a, b) => a.height_bound() + b.height_bound() + std::f64::consts::LN_2,
        }
    }

    /// Interval enclosure computed with leaf precision `bits`; `None` when a
    /// division by an enclosure containing zero was attempted.
    pub fn eval(&self, bits: u32) -> Option<ComplexInterval> {
        let p = bits + 16;
        Some(match self {
            AlgExpr::Num(a) => a.approx(bits),
            AlgExpr::Rat(q) => ComplexInterval::from_rational(q, p),
            AlgExpr::Conj(e) => e.eval(bits)?.conj(),
            AlgExpr::Neg(e) => e.eval(bits)?.neg(),
            AlgExpr::Add(a, b) => a.eval(bits)?.add(&b.eval(bits)?, p),
            AlgExpr::Sub(a, b) => a.eval(bits)?.sub(&b.eval(bits)?, p),
            AlgExpr::Mul(a, b) => a.eval(bits)?.mul(&b.eval(bits)?, p),
            AlgExpr::Div(a, b) => {
                let d = b.eval(bits)?;
                if d.contains_zero() {
                    return None;
                }
                a.eval(bits)?.div(&d, p)
            }
            AlgExpr::Pow(e, k) => {
                let v = e.eval(bits)?;
                if *k < 0 && v.contains_zero() {
                    return None;
                }
                v.pow(*k, p)
            }
        })
    }

    /// Bits below which a nonzero value cannot lie.
    fn zero_threshold_bits(&self) -> i64 {
        let d = self.degree_bound();
        let h = self.height_bound();
        (((d * h) / std::f64::consts::LN_2).ceil() as i64).saturating_add(2)
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        let t = self.zero_threshold_bits();
        let mut bits: u32 = 64;
        loop {
            if let Some(v) = self.eval(bits) {
                if !v.contains_zero() {
                    return false;
                }
                if v.mag().magnitude() < -t {
                    return true;
                }
            }
            bits = next_bits(bits, t);
        }
    }

    /// Exact sign of a real-valued expression.
    pub fn sign(&self) -> Sign {
        let t = self.zero_threshold_bits();
        let mut bits: u32 = 64;
        loop {
            if let Some(v) = self.eval(bits) {
                if v.re.is_positive() {
                    return Sign::Positive;
                }
                if v.re.is_negative() {
                    return Sign::Negative;
                }
                if v.mag().magnitude() < -t {
                    return Sign::Zero;
                }
            }
            bits = next_bits(bits, t);
        }
    }
}

fn next_bits(bits: u32, t: i64) -> u32 {
    // jump towards the threshold quickly, then keep doubling
    let target = (t + 64).clamp(0, u32::MAX as i64 / 2) as u32;
    (bits * 2).max(target.min(bits * 4))
}

/// Exact comparison of `|a|` and `|b|`.
pub fn cmp_modulus(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    let e = a.leaf().norm_sqr().sub(b.leaf().norm_sqr());
    match e.sign() {
        Sign::Negative => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Positive => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    #[test]
    fn roots_of_examples() {
        let r = roots(&p(&[-2, 0, 1]));
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].0.sign(), Some(Sign::Negative));
        assert_eq!(r[1].0.sign(), Some(Sign::Positive));
        let r = roots(&PolyQ::linear_root(&rat(3, 2)));
        assert_eq!(r[0].0.as_rational(), Some(&rat(3, 2)));
        let r = roots(&p(&[1, 0, 1]));
        assert!(r[0].0.isolating_box().im.is_positive());
        assert!(r[1].0.isolating_box().im.is_negative());
    }

    #[test]
    fn refine_is_nested_and_small() {
        let s2 = roots(&p(&[-2, 0, 1]))[1].0.clone();
        let b0 = s2.isolating_box();
        let b1 = s2.refine(&rat(1, 100));
        let b2 = s2.refine(&rat(1, 10000));
        assert!(b1.is_subset_of(&b0) && b2.is_subset_of(&b1));
        assert!(b1.width().to_rational() <= rat(1, 100));
        let (lo, hi) = (b1.re.lo.to_rational(), b1.re.hi.to_rational());
        assert!(&lo * &lo < rat(2, 1) && &hi * &hi > rat(2, 1));
    }

    #[test]
    fn roots_of_unity() {
        let i = roots(&p(&[1, 0, 1]))[0].0.clone();
        assert_eq!(i.is_root_of_unity(), Some(4));
        assert_eq!(AlgebraicNumber::from_int(2).is_root_of_unity(), None);
        assert_eq!(AlgebraicNumber::from_int(-1).is_root_of_unity(), Some(2));
        let z = roots(&PolyQ::new(vec![rat(1, 1), rat(-6, 5), rat(1, 1)]))[0].0.clone();
        assert_eq!(z.is_root_of_unity(), None);
        // i^4 = 1 verified through the zero test as well
        assert!(i.leaf().pow(4).sub(AlgExpr::rat(rat(1, 1))).is_zero());
    }

    #[test]
    fn powers_and_inverses() {
        let s2 = roots(&p(&[-2, 0, 1]))[1].0.clone();
        assert_eq!(s2.pow(2).as_rational(), Some(&rat(2, 1)));
        let inv = s2.inv();
        assert_eq!(inv.minpoly(), &PolyQ::new(vec![rat(-1, 2), rat(0, 1), rat(1, 1)]));
        assert_eq!(inv.sign(), Some(Sign::Positive));
        let i = roots(&p(&[1, 0, 1]))[0].0.clone();
        assert_eq!(i.pow(2).as_rational(), Some(&rat(-1, 1)));
        assert_eq!(i.conj(), roots(&p(&[1, 0, 1]))[1].0);
        assert_eq!(s2.neg(), roots(&p(&[-2, 0, 1]))[0].0);
    }

    #[test]
    fn zero_test_and_modulus() {
        let s2 = roots(&p(&[-2, 0, 1]))[1].0.clone();
        let s8 = roots(&p(&[-8, 0, 1]))[1].0.clone();
        // sqrt8 - 2 sqrt2 = 0
        let e = s8.leaf().sub(AlgExpr::rat(rat(2, 1)).mul(s2.leaf()));
        assert!(e.is_zero());
        let e = s8.leaf().sub(AlgExpr::rat(rat(3, 1)).mul(s2.leaf()));
        assert!(!e.is_zero());
        let z = roots(&PolyQ::new(vec![rat(1, 1), rat(-6, 5), rat(1, 1)]))[0].0.clone();
        let i = roots(&p(&[1, 0, 1]))[0].0.clone();
        assert_eq!(cmp_modulus(&z, &i), Ordering::Equal);
        assert_eq!(cmp_modulus(&z, &s2), Ordering::Less);
    }
}
