//! Lattices of multiplicative relations among algebraic numbers.
//!
//! Candidates come from LLL on high-precision logarithms; each is then
//! verified exactly. Torsion (relations holding only up to a root of unity)
//! is handled by saturating the candidate lattice and cutting it down with
//! the exact angles of the resulting roots of unity.

use crate::lattice::{gram_schmidt, integer_kernel, lll, reduce_basis, row_basis, saturate, IVec};
use crate::num::algebraic::{AlgExpr, AlgebraicNumber};
use crate::num::dyadic::{pi, Dyadic, Interval};
use crate::num::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// A lattice of integer exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    pub dim: usize,
    pub basis: Vec<IVec>,
    /// True when every relation with entries bounded by `bound` provably lies
    /// in the lattice spanned by `basis`.
    pub certified_exhaustive: bool,
    pub bound: u64,
}

impl RelationLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &IVec) -> bool {
        crate::lattice::contains(&self.basis, v)
    }

    /// Basis as `i64` rows (panics on overflow, which the bounds preclude).
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis.iter().map(|v| v.iter().map(|x| x.to_i64().expect("relation entry overflow")).collect()).collect()
    }

    /// Full lattice `Z^dim`.
    pub fn full(dim: usize) -> Self {
        RelationLattice { dim, basis: crate::lattice::identity(dim), certified_exhaustive: true, bound: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// `prod a_i^v_i = 1`
    Full,
    /// `prod |a_i|^v_i = 1`
    Modulus,
    /// `prod (a_i/|a_i|)^v_i = 1`
    Argument,
}

/// Conservative default search bound from degrees and heights.
pub fn default_bound(nums: &[AlgebraicNumber]) -> u64 {
    let m = nums.len() as u64;
    let d = nums.iter().map(|a| a.degree() as u64).max().unwrap_or(1);
    let h = nums.iter().map(|a| a.height()).fold(0.0, f64::max);
    (8 + 2 * m * d + (4.0 * h) as u64).min(64)
}

pub fn multiplicative_lattice(nums: &[AlgebraicNumber], bound: u64) -> RelationLattice {
    find(nums, bound, Kind::Full)
}

/// Relations among the moduli `|a_i|`.
pub fn modulus_lattice(nums: &[AlgebraicNumber], bound: u64) -> RelationLattice {
    find(nums, bound, Kind::Modulus)
}

/// Solutions of `sum m_r Arg(a_r) = 0 mod 2pi`.
pub fn arg_congruence_lattice(nums: &[AlgebraicNumber], bound: u64) -> RelationLattice {
    find(nums, bound, Kind::Argument)
}

fn product_expr(nums: &[AlgebraicNumber], v: &[BigInt], kind: Kind) -> AlgExpr {
    let mut e = AlgExpr::rat(Rational::one());
    for (a, k) in nums.iter().zip(v) {
        let k = k.to_i64().expect("exponent overflow");
        if k == 0 || a.as_rational().is_some_and(|q| q.is_one()) {
            continue;
        }
        let base = match kind {
            Kind::Full => a.leaf(),
            Kind::Modulus => a.leaf().norm_sqr(),
            Kind::Argument => a.leaf().div(a.leaf().conj()),
        };
        e = e.mul(base.pow(k));
    }
    e
}

/// Exact check of a single relation.
fn verify(nums: &[AlgebraicNumber], v: &[BigInt], kind: Kind) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let e = product_expr(nums, v, kind).sub(AlgExpr::rat(Rational::one()));
    if !e.is_zero() {
        return false;
    }
    match kind {
        // |a|^2 and (a/conj a) relations hold up to a sign for the Argument kind
        Kind::Argument => arg_turns(nums, v, 64).map_or(false, |t| nearest_int(&t, 1).is_some()),
        _ => true,
    }
}

/// `sum v_i Arg(a_i) / (2 pi)` as an interval.
fn arg_turns(nums: &[AlgebraicNumber], v: &[BigInt], bits: u32) -> Option<Interval> {
    let w = bits + 32;
    let mut acc = Interval::zero();
    for (a, k) in nums.iter().zip(v) {
        if k.is_zero() {
            continue;
        }
        let t = a.arg(w);
        acc = acc.add(&t.mul(&Interval::point(Dyadic::from_int(k.clone())), w), w);
    }
    let two_pi = pi(w).scale_pow2(1);
    Some(acc.div(&two_pi, bits))
}

/// The unique integer multiple of `1/den` inside the interval, if the
/// interval is narrow enough to contain at most one.
fn nearest_int(t: &Interval, den: u64) -> Option<BigInt> {
    let d = Dyadic::from_int(den);
    let lo = t.lo.mul(&d).ceil();
    let hi = t.hi.mul(&d).floor();
    if lo == hi {
        Some(lo)
    } else {
        None
    }
}

/// Whether the log combination of `v` encloses zero (mod `2 pi` where
/// appropriate) at precision `bits`.
fn numerically_zero(nums: &[AlgebraicNumber], v: &[BigInt], kind: Kind, bits: u32) -> bool {
    if kind != Kind::Argument {
        let w = bits + 32;
        let mut acc = Interval::zero();
        for (a, k) in nums.iter().zip(v) {
            if !k.is_zero() {
                acc = acc.add(&a.ln_abs(w).mul(&Interval::point(Dyadic::from_int(k.clone())), w), w);
            }
        }
        if !acc.contains_zero() {
            return false;
        }
    }
    if kind == Kind::Modulus {
        return true;
    }
    let t = arg_turns(nums, v, bits).unwrap();
    t.lo.ceil() <= t.hi.floor()
}

fn log_columns(a: &AlgebraicNumber, kind: Kind, bits: u32) -> Vec<Interval> {
    match kind {
        Kind::Full => vec![a.ln_abs(bits), a.arg(bits)],
        Kind::Modulus => vec![a.ln_abs(bits)],
        Kind::Argument => vec![a.arg(bits)],
    }
}

fn round_scaled(x: &Interval, p: u32) -> BigInt {
    let m = x.mid().mul_pow2(p as i64);
    m.add(&Dyadic::one().mul_pow2(-1)).floor()
}

fn norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

fn find(nums: &[AlgebraicNumber], bound: u64, kind: Kind) -> RelationLattice {
    let m = nums.len();
    assert!(nums.iter().all(|a| !a.is_zero()), "relations among zero are undefined");
    if m == 0 {
        return RelationLattice { dim: 0, basis: vec![], certified_exhaustive: true, bound };
    }
    let with_2pi = kind != Kind::Modulus;
    let ncols = match kind {
        Kind::Full => 2,
        _ => 1,
    };
    let b = BigInt::from(bound.max(1));
    let mb = BigInt::from(m as u64) * &b;
    // squared norm of any lattice vector of a bounded relation
    let relation_norm = BigInt::from(m as u64) * &b * &b + (&mb + 4u32) * (&mb + 4u32) * ncols as u32;
    let mut p: u32 = 128;
    let cap: u32 = 4096;
    let mut cands: Vec<IVec> = Vec::new();
    let mut exhaustive = false;
    loop {
        let mut rows: Vec<IVec> = Vec::new();
        for (i, a) in nums.iter().enumerate() {
            let mut r: IVec = (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            for c in log_columns(a, kind, p + 16) {
                r.push(round_scaled(&c, p));
            }
            rows.push(r);
        }
        if with_2pi {
            let mut r: IVec = vec![BigInt::zero(); m + ncols];
            r[m + ncols - 1] = round_scaled(&pi(p + 16).scale_pow2(1), p);
            rows.push(r);
        }
        let red = lll(&rows);
        let thresh = BigInt::one() << (p as usize);
        let is_cand = |r: &IVec| {
            r[..m].iter().any(|x| !x.is_zero())
                && norm_sq(&r[m..]) <= thresh
                && r[..m].iter().all(|x| x.bits() <= 24)
                && numerically_zero(nums, &r[..m], kind, 2 * p)
        };
        let j = red.iter().take_while(|r| is_cand(r)).count();
        let prefix_ok = red[j..].iter().all(|r| !is_cand(r));
        let found: Vec<IVec> = red[..j].iter().map(|r| r[..m].to_vec()).collect();
        let verified = prefix_ok && found.iter().all(|v| verify(nums, v, kind));
        if verified {
            let (_, gs) = gram_schmidt(&red);
            let rn = Rational::from_integer(relation_norm.clone());
            exhaustive = gs[j..].iter().all(|g| *g > rn);
            cands = found;
            if exhaustive {
                break;
            }
        }
        if p >= cap {
            break;
        }
        p *= 2;
    }
    let basis = remove_torsion(nums, &cands, kind);
    debug_assert!(basis.iter().all(|v| verify(nums, v, kind)));
    RelationLattice { dim: m, basis, certified_exhaustive: exhaustive, bound }
}

/// From verified relations `cands`, compute the full relation lattice inside
/// their rational span.
fn remove_torsion(nums: &[AlgebraicNumber], cands: &[IVec], kind: Kind) -> Vec<IVec> {
    let m = nums.len();
    if cands.is_empty() {
        return vec![];
    }
    let cands = row_basis(cands);
    let sat = saturate(&cands, m);
    if kind == Kind::Modulus {
        // moduli are positive reals: no torsion
        return reduce_basis(&sat);
    }
    // index of the candidate lattice in its saturation
    let idx = sublattice_index(&sat, &cands);
    if idx.is_one() {
        return reduce_basis(&sat);
    }
    let idx_u = idx.to_u64().expect("torsion index overflow");
    // each saturated vector maps to an idx-th root of unity exp(2 pi i a/idx)
    let mut angles: Vec<BigInt> = Vec::new();
    for s in &sat {
        let mut bits = 64;
        let a = loop {
            let t = arg_turns(nums, s, bits).unwrap();
            if let Some(a) = nearest_int(&t, idx_u) {
                break a;
            }
            bits *= 2;
        };
        angles.push(a.mod_floor(&idx));
    }
    let mut row = angles.clone();
    row.push(idx.clone());
    let ker = integer_kernel(&[row], sat.len() + 1);
    let gens: Vec<IVec> = ker
        .iter()
        .map(|k| (0..m).map(|c| sat.iter().zip(k).map(|(s, y)| &s[c] * y).sum()).collect())
        .collect();
    reduce_basis(&row_basis(&gens))
}

/// `[sat : sub]` for two lattices of equal rank with `sub ⊂ sat`.
fn sublattice_index(sat: &[IVec], sub: &[IVec]) -> BigInt {
    let vol = |b: &[IVec]| -> Rational { gram_schmidt(b).1.iter().product() };
    let r = vol(sub) / vol(sat);
    // r is the squared index
    let i = r.to_integer().sqrt();
    assert!(Rational::from_integer(&i * &i) == r, "non-square lattice index");
    i
}

/// For `v` in the argument lattice: the integer `k` with
/// `sum v_i Arg(a_i) = 2 pi k`.
pub fn arg_winding(nums: &[AlgebraicNumber], v: &[BigInt]) -> BigInt {
    let mut bits = 32;
    loop {
        let t = arg_turns(nums, v, bits).unwrap();
        if let Some(k) = nearest_int(&t, 1) {
            if t.width().magnitude() < -2 {
                return k;
            }
        }
        bits *= 2;
    }
}

/// Exact check that `prod a_i^v_i = 1`.
pub fn verify_relation(nums: &[AlgebraicNumber], v: &[i64]) -> bool {
    let v: IVec = v.iter().map(|&x| BigInt::from(x)).collect();
    verify(nums, &v, Kind::Full)
}

/// Exact check that `prod (a_i/|a_i|)^v_i = 1`.
pub fn verify_arg_relation(nums: &[AlgebraicNumber], v: &[i64]) -> bool {
    let v: IVec = v.iter().map(|&x| BigInt::from(x)).collect();
    verify(nums, &v, Kind::Argument)
}

/// Exact check that `prod |a_i|^v_i = 1`.
pub fn verify_modulus_relation(nums: &[AlgebraicNumber], v: &[i64]) -> bool {
    let v: IVec = v.iter().map(|&x| BigInt::from(x)).collect();
    verify(nums, &v, Kind::Modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_ivec;
    use crate::num::algebraic::roots;
    use crate::num::poly::PolyQ;

    fn int(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_int(n)
    }

    #[test]
    fn two_and_four() {
        let l = multiplicative_lattice(&[int(2), int(4)], 10);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&to_ivec(&[2, -1])));
        assert!(l.certified_exhaustive);
    }

    #[test]
    fn two_and_three() {
        let l = multiplicative_lattice(&[int(2), int(3)], 10);
        assert_eq!(l.rank(), 0);
        assert!(l.certified_exhaustive);
    }

    #[test]
    fn omega_pair() {
        let w = roots(&PolyQ::from_ints(&[1, 1, 1]))[0].0.clone();
        let w2 = w.pow(2);
        let l = multiplicative_lattice(&[w.clone(), w2.clone()], 10);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&to_ivec(&[1, 1])) && l.contains(&to_ivec(&[0, 3])));
        assert!(!l.contains(&to_ivec(&[1, 0])));
        assert_eq!(crate::lattice::index_full(&l.basis), BigInt::from(3));
        let a = arg_congruence_lattice(&[w, w2], 10);
        assert!(a.contains(&to_ivec(&[3, 3])) && a.contains(&to_ivec(&[2, -1])));
    }

    #[test]
    fn arg_lattice_trivial_cases() {
        let a = arg_congruence_lattice(&[int(2), int(3)], 10);
        assert_eq!(a.rank(), 2);
        let a = arg_congruence_lattice(&[int(-1)], 10);
        assert_eq!(a.basis, vec![to_ivec(&[2])]);
    }

    #[test]
    fn modulus_relations() {
        // |3+4i| = 5
        let z = roots(&PolyQ::from_ints(&[25, -6, 1]))[0].0.clone();
        let l = modulus_lattice(&[z, int(5)], 10);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&to_ivec(&[1, -1])));
    }
}
