//! Dense univariate polynomials with rational coefficients.

use super::dyadic::{ComplexInterval, Dyadic, Interval};
use super::rational::{rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficients lowest degree first; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        PolyQ::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyQ::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        PolyQ::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        PolyQ::from_ints(&[0, 1])
    }

    /// `x - c`
    pub fn linear_root(c: &Rational) -> Self {
        PolyQ::new(vec![-c.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn monic(&self) -> PolyQ {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        PolyQ::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, s: &Rational) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &PolyQ) -> PolyQ {
        if self.is_zero() || o.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }

    pub fn pow(&self, n: u32) -> PolyQ {
        let mut acc = PolyQ::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &PolyQ) -> (PolyQ, PolyQ) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dl = d.lc();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (PolyQ::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        (PolyQ::new(q), PolyQ::new(r))
    }

    pub fn rem(&self, d: &PolyQ) -> PolyQ {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &PolyQ) -> PolyQ {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &PolyQ) -> (PolyQ, PolyQ, PolyQ) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (PolyQ::one(), PolyQ::zero());
        let (mut t0, mut t1) = (PolyQ::zero(), PolyQ::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let l = r0.lc();
        if l.is_zero() {
            return (r0, s0, t0);
        }
        let inv = l.recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> PolyQ {
        PolyQ::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &PolyQ) -> PolyQ {
        let mut acc = PolyQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&PolyQ::constant(c.clone()));
        }
        acc
    }


    pub fn eval_interval(&self, x: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, prec).add(&Interval::from_rational(c, prec), prec);
        }
        acc
    }

    pub fn eval_complex(&self, z: &ComplexInterval, prec: u32) -> ComplexInterval {
        let mut acc = ComplexInterval::from_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z, prec).add(&ComplexInterval::from_rational(c, prec), prec);
        }
        acc
    }

    /// Integer coefficients of `den * self` with `den > 0` minimal, primitive up to sign.
    pub fn integer_form(&self) -> (Vec<BigInt>, BigInt) {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let v: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        (v, l)
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn primitive(&self) -> Vec<BigInt> {
        let (v, _) = self.integer_form();
        let mut g = BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return v;
        }
        let sgn = if v.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        v.into_iter().map(|c| c / &g * &sgn).collect()
    }

    pub fn from_integers(v: &[BigInt]) -> PolyQ {
        PolyQ::new(v.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// Square-free decomposition (Yun): returns `(a_i, i)` with `self = c * prod a_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(PolyQ, u32)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree() > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_rem(&g).0;
            if b.degree() == 0 {
                break;
            }
            c = d.div_rem(&g).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Monic square-free part.
    pub fn squarefree_part(&self) -> PolyQ {
        let f = self.monic();
        f.div_rem(&f.gcd(&f.derivative())).0.monic()
    }

    /// `log(M(f)) / deg(f)` upper bound (absolute logarithmic height), via the
    /// 2-norm of the primitive integer form.
    pub fn log_height_bound(&self) -> f64 {
        let v = self.primitive();
        let mut s = 0f64;
        for c in &v {
            let x = Dyadic::from_int(c.clone()).to_f64();
            s += x * x;
        }
        let d = self.degree().max(1) as f64;
        (0.5 * s.ln()).max(0.0) / d + 1e-9
    }

    /// Cauchy bound: every complex root has modulus below the returned value.
    pub fn root_bound(&self) -> Rational {
        let l = self.lc().abs();
        let m = self.coeffs[..self.coeffs.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
        Rational::one() + m / l
    }

    /// Cyclotomic polynomial `Phi_n`.
    pub fn cyclotomic(n: u64) -> PolyQ {
        let mut p = PolyQ::new({
            let mut v = vec![Rational::zero(); n as usize + 1];
            v[0] = -Rational::one();
            v[n as usize] = Rational::one();
            v
        });
        for d in 1..n {
            if n % d == 0 {
                p = p.div_rem(&PolyQ::cyclotomic(d)).0;
            }
        }
        p
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})x", c)?,
                _ => write!(f, "({})x^{}", c, i)?,
            }
        }
        Ok(())
    }
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Exact value of an integer polynomial at a complex dyadic point.
pub fn eval_int_complex(coeffs: &[BigInt], re: &Dyadic, im: &Dyadic) -> (Dyadic, Dyadic) {
    let mut ar = Dyadic::zero();
    let mut ai = Dyadic::zero();
    for c in coeffs.iter().rev() {
        let nr = ar.mul(re).sub(&ai.mul(im)).add(&Dyadic::from_int(c.clone()));
        let ni = ar.mul(im).add(&ai.mul(re));
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}
