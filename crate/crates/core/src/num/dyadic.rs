//! Dyadic rationals and outward-rounded interval arithmetic.
//!
//! Every real quantity that is not a rational (logarithms, arguments,
//! algebraic numbers) is handled through enclosures built from these types.
//! All interval operations round their endpoints outward, so an enclosure
//! always contains the true value regardless of the working precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Rounding direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => num.div_floor(den),
        Round::Up => {
            let (q, r) = num.div_mod_floor(den);
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1i64 << 52), e - 1075) };
        Dyadic::new(BigInt::from(sign * m), ex)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mant.is_zero() {
            0
        } else if self.mant.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Position of the leading bit: `2^(mag-1) <= |x| < 2^mag`.
    pub fn magnitude(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN / 4
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &o.mant << (o.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &o.mant, self.exp + o.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let den = BigInt::one() << s;
        Dyadic::new(div_round(&self.mant, &den, dir), self.exp + s as i64)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        if q.numer().is_zero() {
            return Dyadic::zero();
        }
        if q.denom().is_one() {
            return Dyadic::from_int(q.numer().clone()).round(prec, dir);
        }
        let nb = q.numer().bits() as i64;
        let db = q.denom().bits() as i64;
        // choose shift so that the quotient carries about prec + 2 bits
        let shift = prec as i64 + 2 - (nb - db);
        let (num, den) = if shift >= 0 {
            (q.numer() << shift as usize, q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() << (-shift) as usize)
        };
        Dyadic::new(div_round(&num, &den, dir), -shift).round(prec, dir)
    }

    /// `a / b` rounded to `prec` bits.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + 2 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0);
        let num = &a.mant << shift as usize;
        let (num, den) = if b.mant.is_negative() {
            (-num, -b.mant.clone())
        } else {
            (num, b.mant.clone())
        };
        Dyadic::new(div_round(&num, &den, dir), a.exp - b.exp - shift).round(prec, dir)
    }

    /// Square root of a non-negative dyadic.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(self.signum() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let r = m.sqrt();
        let r = if dir == Round::Up && &r * &r != m { r + 1 } else { r };
        Dyadic::new(r, (self.exp - shift) / 2).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Dyadic) -> Ordering {
        let s = self.signum().cmp(&o.signum());
        if s != Ordering::Equal || self.is_zero() {
            return s;
        }
        self.sub(o).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Closed real interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
        }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: Dyadic) -> Self {
        let r = r.abs();
        Interval { lo: r.neg(), hi: r }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// Sign if the interval excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else if self.lo.signum() > 0 {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_subset_of(&self, o: &Interval) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo < o.lo { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() },
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: self.lo.add(&o.lo).round(prec, Round::Down),
            hi: self.hi.add(&o.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round(prec, Round::Down);
        let hi = c.iter().max().unwrap().round(prec, Round::Up);
        Interval { lo, hi }
    }

    pub fn sqr(&self, prec: u32) -> Interval {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let hi = if a > b { a.clone() } else { b.clone() };
        let lo = if self.contains_zero() {
            Dyadic::zero()
        } else if a < b {
            a
        } else {
            b
        };
        Interval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up) }
    }

    pub fn scale_pow2(&self, k: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k) }
    }

    pub fn recip(&self, prec: u32) -> Interval {
        assert!(!self.contains_zero(), "reciprocal of interval containing zero");
        let one = Dyadic::one();
        Interval {
            lo: Dyadic::div(&one, &self.hi, prec, Round::Down),
            hi: Dyadic::div(&one, &self.lo, prec, Round::Up),
        }
    }

    pub fn div(&self, o: &Interval, prec: u32) -> Interval {
        self.mul(&o.recip(prec + 8), prec)
    }

    pub fn powi(&self, mut n: u64, prec: u32) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::from_int(1);
        let mut first = true;
        while n > 0 {
            if n & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base, prec) };
                first = false;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    pub fn sqrt(&self, prec: u32) -> Interval {
        let lo = if self.lo.signum() <= 0 { Dyadic::zero() } else { self.lo.sqrt(prec, Round::Down) };
        assert!(self.hi.signum() >= 0, "sqrt of negative interval");
        Interval { lo, hi: self.hi.sqrt(prec, Round::Up) }
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self, prec: u32) -> Interval {
        assert!(self.is_positive(), "ln of non-positive interval");
        Interval { lo: ln_point(&self.lo, prec).lo, hi: ln_point(&self.hi, prec).hi }
    }

    pub fn atan(&self, prec: u32) -> Interval {
        Interval { lo: atan_point(&self.lo, prec).lo, hi: atan_point(&self.hi, prec).hi }
    }
}

fn series_terms(ratio_mag: i64, prec: u32) -> usize {
    // ratio_mag: log2 of an upper bound on the per-term ratio (negative)
    let per = (-ratio_mag).max(1) as usize;
    prec as usize / per + 2
}

/// `atanh(z) = sum z^(2j+1)/(2j+1)` for `|z| <= 1/2`.
fn atanh_series(z: &Interval, prec: u32) -> Interval {
    let w = prec + 16;
    let zmag = z.mag();
    let z2 = z.sqr(w);
    let terms = series_terms(2 * zmag.magnitude(), prec);
    let mut pow = z.clone();
    let mut sum = z.clone();
    for j in 1..terms {
        pow = pow.mul(&z2, w);
        let t = pow.div(&Interval::from_int(2 * j as i64 + 1), w);
        sum = sum.add(&t, w);
    }
    // tail <= |z|^(2K+1) / (1 - z^2) <= 2 |z|^(2K+1)
    let k = 2 * terms as u64 + 1;
    let tail = Interval::point(zmag).powi(k, w).hi.mul_pow2(1);
    sum.add(&Interval::symmetric(tail), w)
}

/// `atan(t) = sum (-1)^j t^(2j+1)/(2j+1)` for `|t| <= 1/2`.
fn atan_series(t: &Interval, prec: u32) -> Interval {
    let w = prec + 16;
    let tmag = t.mag();
    let t2 = t.sqr(w);
    let terms = series_terms(2 * tmag.magnitude(), prec);
    let mut pow = t.clone();
    let mut sum = t.clone();
    for j in 1..terms {
        pow = pow.mul(&t2, w);
        let term = pow.div(&Interval::from_int(2 * j as i64 + 1), w);
        sum = if j % 2 == 1 { sum.sub(&term, w) } else { sum.add(&term, w) };
    }
    let k = 2 * terms as u64 + 1;
    let tail = Interval::point(tmag).powi(k, w).hi;
    sum.add(&Interval::symmetric(tail), w)
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    let third = Interval::from_int(1).div(&Interval::from_int(3), prec + 16);
    atanh_series(&third, prec + 8).scale_pow2(1)
}

/// Enclosure of pi via Machin's formula.
pub fn pi(prec: u32) -> Interval {
    let w = prec + 16;
    let a = atan_series(&Interval::from_int(1).div(&Interval::from_int(5), w), w);
    let b = atan_series(&Interval::from_int(1).div(&Interval::from_int(239), w), w);
    a.scale_pow2(2).sub(&b, w).scale_pow2(2)
}

fn ln_point(x: &Dyadic, prec: u32) -> Interval {
    assert!(x.signum() > 0);
    let w = prec + 16;
    // x = 2^k * y with y in [2/3, 4/3)
    let mut k = x.magnitude() - 1;
    let mut y = x.mul_pow2(-k);
    if y.mul(&Dyadic::from_int(3)) > Dyadic::from_int(4) {
        k += 1;
        y = x.mul_pow2(-k);
    }
    let yi = Interval::point(y);
    let one = Interval::from_int(1);
    let z = yi.sub(&one, w).div(&yi.add(&one, w), w);
    let lny = atanh_series(&z, w).scale_pow2(1);
    let kl = ln2(w).mul(&Interval::from_int(k), w);
    let r = kl.add(&lny, w);
    Interval { lo: r.lo.round(prec, Round::Down), hi: r.hi.round(prec, Round::Up) }
}

fn atan_point(x: &Dyadic, prec: u32) -> Interval {
    let w = prec + 16;
    if x.is_zero() {
        return Interval::zero();
    }
    if x.abs() > Dyadic::from_int(2) {
        // atan(x) = sign(x) pi/2 - atan(1/x)
        let inv = Interval::point(x.clone()).recip(w);
        let a = Interval { lo: atan_point(&inv.lo, w).lo, hi: atan_point(&inv.hi, w).hi };
        let half_pi = pi(w).scale_pow2(-1);
        let base = if x.signum() > 0 { half_pi } else { half_pi.neg() };
        return base.sub(&a, prec);
    }
    let one = Interval::from_int(1);
    let mut t = Interval::point(x.clone());
    for _ in 0..2 {
        let s = one.add(&t.sqr(w), w).sqrt(w);
        t = t.div(&one.add(&s, w), w);
    }
    let r = atan_series(&t, w).scale_pow2(2);
    Interval { lo: r.lo.round(prec, Round::Down), hi: r.hi.round(prec, Round::Up) }
}

/// Axis-aligned complex rectangle.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl fmt::Debug for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        ComplexInterval { re, im: Interval::zero() }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        ComplexInterval::real(Interval::from_rational(q, prec))
    }

    pub fn from_int(n: i64) -> Self {
        ComplexInterval::real(Interval::from_int(n))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn neg(&self) -> Self {
        ComplexInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        ComplexInterval { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        ComplexInterval { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        ComplexInterval { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let w = prec + 4;
        let re = self.re.mul(&o.re, w).sub(&self.im.mul(&o.im, w), prec);
        let im = self.re.mul(&o.im, w).add(&self.im.mul(&o.re, w), prec);
        ComplexInterval { re, im }
    }

    pub fn scale(&self, r: &Interval, prec: u32) -> Self {
        ComplexInterval { re: self.re.mul(r, prec), im: self.im.mul(r, prec) }
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let w = prec + 4;
        let re = self.re.sqr(w).sub(&self.im.sqr(w), prec);
        let im = self.re.mul(&self.im, w).scale_pow2(1);
        ComplexInterval { re, im }
    }

    /// Enclosure of `|z|^2`.
    pub fn norm_sqr(&self, prec: u32) -> Interval {
        self.re.sqr(prec + 2).add(&self.im.sqr(prec + 2), prec)
    }

    pub fn recip(&self, prec: u32) -> Self {
        let w = prec + 8;
        let n = self.norm_sqr(w);
        assert!(n.is_positive(), "reciprocal of complex interval containing zero");
        let inv = n.recip(w);
        ComplexInterval { re: self.re.mul(&inv, prec), im: self.im.neg().mul(&inv, prec) }
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        self.mul(&o.recip(prec + 8), prec)
    }

    pub fn powi(&self, mut n: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexInterval::from_int(1);
        let mut first = true;
        while n > 0 {
            if n & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base, prec) };
                first = false;
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the reciprocal.
    pub fn pow(&self, n: i64, prec: u32) -> Self {
        if n >= 0 {
            self.powi(n as u64, prec)
        } else {
            self.recip(prec + 8).powi(n.unsigned_abs(), prec)
        }
    }

    /// Upper bound on the modulus (via the L1 norm of the corner).
    pub fn mag(&self) -> Dyadic {
        self.re.mag().add(&self.im.mag())
    }

    /// `ln |z|`.
    pub fn ln_abs(&self, prec: u32) -> Interval {
        self.norm_sqr(prec + 8).ln(prec + 4).scale_pow2(-1)
    }

    /// Principal argument in `(-pi, pi]`; `None` when the rectangle meets the
    /// non-positive real axis, where the argument is discontinuous or undefined.
    pub fn arg(&self, prec: u32) -> Option<Interval> {
        let w = prec + 8;
        if self.re.is_positive() {
            return Some(self.im.div(&self.re, w).atan(prec));
        }
        if self.im.is_positive() {
            let a = self.re.div(&self.im, w).atan(w);
            return Some(pi(w).scale_pow2(-1).sub(&a, prec));
        }
        if self.im.is_negative() {
            let a = self.re.div(&self.im, w).atan(w);
            return Some(pi(w).scale_pow2(-1).neg().sub(&a, prec));
        }
        None
    }

    pub fn width(&self) -> Dyadic {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    pub fn is_subset_of(&self, o: &Self) -> bool {
        self.re.is_subset_of(&o.re) && self.im.is_subset_of(&o.im)
    }
}

/// Convert a rational to `f64` for diagnostics only.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    Dyadic::from_rational(q, 64, Round::Down).to_f64()
}
