//! Exact rationals (backed by `num-rational`) and small helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn from_int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Least common multiple of the denominators.
pub fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()))
}

/// Simplest rational strictly inside `(lo, hi)`, `lo < hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi);
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !lo.is_negative() {
        simplest_pos(lo, hi)
    } else {
        -simplest_pos(&-hi, &-lo)
    }
}

// lo >= 0, open interval
fn simplest_pos(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    let cand = &fl + Rational::one();
    if &cand < hi {
        return cand;
    }
    // lo and hi share the integer part (or hi is exactly fl + 1)
    let a = fl.clone();
    let lo2 = lo - &a;
    let hi2 = hi - &a;
    if lo2.is_zero() {
        // (a, a + hi2): pick a + 1/k with 1/k < hi2
        let k = (hi2.recip()).floor() + Rational::one();
        return a + k.recip();
    }
    // reciprocal flips the interval
    let r = simplest_pos(&hi2.recip(), &lo2.recip());
    a + r.recip()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-4"), Some(rat(-4, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&rat(-1, 3), &rat(1, 2)), rat(0, 1));
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(3, 2), &rat(7, 2)), rat(2, 1));
        assert_eq!(simplest_between(&rat(-7, 2), &rat(-3, 2)), rat(-2, 1));
        assert_eq!(simplest_between(&rat(2, 1), &rat(5, 2)), rat(7, 3));
        assert_eq!(simplest_between(&rat(0, 1), &rat(1, 3)), rat(1, 4));
    }
}
