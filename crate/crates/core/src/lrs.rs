//! Entry sequences of matrix powers: closed forms, dominance, and the
//! ultimately periodic set of non-negative powers.

use crate::linalg::{Mat, RationalMatrix};
use crate::num::algebraic::{cmp_modulus, AlgebraicNumber, Sign};
use crate::num::dyadic::{pi, Dyadic, Interval};
use crate::num::field::{lift_matrix, FieldElem};
use crate::num::poly::{totient, PolyQ};
use crate::num::rational::Rational;
use crate::spectral::{eigen, positive_vector, SpectralData};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Contribution of one class of conjugate eigenvalues: `Tr(lambda^n P(n))`.
#[derive(Clone, Debug)]
struct ClassTerm {
    class: usize,
    lambda: FieldElem,
    /// Monomial coefficients of `P` in `n`.
    coeffs: Vec<FieldElem>,
}

/// `n -> sum_i P_i(n) lambda_i^n`, plus finitely many corrections from the
/// eigenvalue zero.
#[derive(Clone, Debug)]
pub struct ExpPolyForm {
    spectral: std::sync::Arc<SpectralData>,
    terms: Vec<ClassTerm>,
    /// Added to the value at `n = 0, 1, ...`.
    pub initial: Vec<Rational>,
}

/// One base with its coefficient polynomial (monomial basis in `n`).
#[derive(Clone, Debug)]
pub struct ExpPolyTerm {
    pub base: AlgebraicNumber,
    pub coefficients: Vec<AlgebraicNumber>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dominance {
    IdenticallyZero,
    /// Unique base of maximal modulus, by block index.
    Dominated { block: usize },
    NotDominated,
}

impl ExpPolyForm {
    /// Exact value at `n`.
    pub fn eval(&self, n: u64) -> Rational {
        let mut acc = self.initial.get(n as usize).cloned().unwrap_or_else(Rational::zero);
        let nq = Rational::from_integer(BigInt::from(n));
        for t in &self.terms {
            let mut p = FieldElem::from_rational(t.lambda.field(), Rational::zero());
            for c in t.coeffs.iter().rev() {
                p = p.scale(&nq).add(c);
            }
            acc += t.lambda.pow(n as i64).mul(&p).trace();
        }
        acc
    }

    /// Bases and coefficients, one entry per nonzero eigenvalue.
    pub fn terms(&self) -> Vec<ExpPolyTerm> {
        let mut out = Vec::new();
        for t in &self.terms {
            for b in self.spectral.blocks.iter().filter(|b| b.class == t.class) {
                out.push(ExpPolyTerm {
                    base: b.eigenvalues[0].clone(),
                    coefficients: t.coeffs.iter().map(|c| c.to_algebraic(b.embedding)).collect(),
                });
            }
        }
        out
    }

    pub fn is_identically_zero(&self) -> bool {
        self.terms.is_empty() && self.initial.iter().all(|x| x.is_zero())
    }

    /// Zero for all `n` beyond the finite corrections.
    pub fn is_ultimately_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn term_of_block(&self, block: usize) -> Option<&ClassTerm> {
        let c = self.spectral.blocks[block].class;
        self.terms.iter().find(|t| t.class == c)
    }

    pub fn dominance(&self) -> Dominance {
        if self.terms.is_empty() {
            return Dominance::IdenticallyZero;
        }
        let cands: Vec<usize> = (0..self.spectral.blocks.len()).filter(|&b| self.term_of_block(b).is_some()).collect();
        let mut best = vec![cands[0]];
        for &b in &cands[1..] {
            let x = &self.spectral.blocks[b].eigenvalues[0];
            let y = &self.spectral.blocks[best[0]].eigenvalues[0];
            match cmp_modulus(x, y) {
                Ordering::Greater => best = vec![b],
                Ordering::Equal => best.push(b),
                Ordering::Less => {}
            }
        }
        if best.len() == 1 {
            Dominance::Dominated { block: best[0] }
        } else {
            Dominance::NotDominated
        }
    }
}

impl fmt::Display for ExpPolyForm {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let cs: Vec<String> = t.coefficients.iter().map(|c| c.to_string()).collect();
            write!(f, "({})*({})^n", cs.join(", "), t.base)?;
        }
        Ok(())
    }
}

pub fn is_dominated(f: &ExpPolyForm) -> Dominance {
    f.dominance()
}

/// `C(n, s)` as a polynomial in `n`.
fn binomial_poly(s: usize) -> PolyQ {
    let mut p = PolyQ::one();
    let mut fact = BigInt::one();
    for t in 0..s {
        p = p.mul(&PolyQ::new(vec![Rational::from_integer(-BigInt::from(t)), Rational::one()]));
        fact *= t + 1;
    }
    p.scale(&Rational::new(BigInt::one(), fact))
}

/// Closed form of `n -> (M'^n w)_{ij}` where `data` describes `M'`.
fn entry_form(data: &std::sync::Arc<SpectralData>, w: &RationalMatrix, i: usize, j: usize) -> ExpPolyForm {
    let mut terms = Vec::new();
    let mut initial: Vec<Rational> = Vec::new();
    for (ci, c) in data.classes.iter().enumerate() {
        let e = c.size;
        let wl = lift_matrix(w, &c.field);
        let row_i: Mat<FieldElem> = Mat::from_rows(&[c.right.row(i).to_vec()], &c.eigenvalues[0]);
        let left_w = c.left.mul(&wl);
        let col_j: Vec<FieldElem> = left_w.col(j);
        // c_s = (V N^s W w)_{ij}
        let mut cs = Vec::with_capacity(e);
        let mut cur = row_i;
        for _ in 0..e {
            let v = cur.mul_vec(&col_j)[0].clone();
            cs.push(v);
            cur = cur.mul(&c.nilpotent[0]);
        }
        let lambda = c.eigenvalues[0].clone();
        if lambda.is_zero() {
            // (0 I + N)^n = N^n: nonzero only for n < e
            for (s, v) in cs.iter().enumerate() {
                if initial.len() <= s {
                    initial.resize(s + 1, Rational::zero());
                }
                initial[s] += v.trace();
            }
            continue;
        }
        if cs.iter().all(|x| x.is_zero()) {
            continue;
        }
        let zero = lambda.scale(&Rational::zero());
        let mut coeffs = vec![zero; e];
        let inv = lambda.inv();
        for (s, v) in cs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let scaled = v.mul(&inv.pow(s as i64));
            for (k, b) in binomial_poly(s).coeffs().iter().enumerate() {
                coeffs[k] = coeffs[k].add(&scaled.scale(b));
            }
        }
        while coeffs.last().is_some_and(|x| x.is_zero()) {
            coeffs.pop();
        }
        terms.push(ClassTerm { class: ci, lambda, coeffs });
    }
    ExpPolyForm { spectral: data.clone(), terms, initial }
}

/// Closed form of `n -> (M^n)_{ij}` (0-based indices).
pub fn closed_form(m: &RationalMatrix, i: usize, j: usize) -> Result<ExpPolyForm> {
    let data = std::sync::Arc::new(eigen(m)?);
    if i >= m.rows() || j >= m.cols() {
        return Err(Error::InvalidInput(format!("entry ({i},{j}) out of range")));
    }
    Ok(entry_form(&data, &RationalMatrix::eye(m.rows()), i, j))
}

/// Least `L` such that no quotient of distinct eigenvalues of `M^L` is a
/// root of unity.
pub fn nondegeneracy_period(m: &RationalMatrix) -> Result<u64> {
    Ok(period_of(&eigen(m)?))
}

fn period_of(data: &SpectralData) -> u64 {
    let ev: Vec<AlgebraicNumber> =
        data.eigenvalues[0].iter().map(|(x, _)| x.clone()).filter(|x| !x.is_zero()).collect();
    let mut l: u64 = 1;
    for a in 0..ev.len() {
        for b in a + 1..ev.len() {
            if let Some(n) = quotient_order(&ev[a], &ev[b]) {
                l = l.lcm(&n);
            }
        }
    }
    l
}

/// Order of `x/y` as a root of unity, if it is one.
pub fn quotient_order(x: &AlgebraicNumber, y: &AlgebraicNumber) -> Option<u64> {
    if cmp_modulus(x, y) != Ordering::Equal {
        return None;
    }
    let d = (x.degree() * y.degree()) as u64;
    let bits = 64;
    let two_pi = pi(bits + 16).scale_pow2(1);
    let turns = x.arg(bits + 16).sub(&y.arg(bits + 16), bits + 16).div(&two_pi, bits);
    let nmax = 2 * d * d + 2;
    for n in 1..=nmax {
        if totient(n) > d {
            continue;
        }
        // n * turns must be near an integer
        let t = turns.mul(&Interval::from_int(n as i64), bits);
        if t.lo.ceil() > t.hi.floor() {
            continue;
        }
        let e = x.leaf().pow(n as i64).sub(y.leaf().pow(n as i64));
        if e.is_zero() {
            return Some(n);
        }
    }
    None
}

/// `{n >= threshold : n mod period in residues}` plus `exceptions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UltimatelyPeriodicSet {
    pub threshold: u64,
    pub period: u64,
    pub residues: Vec<u64>,
    pub exceptions: Vec<u64>,
}

impl UltimatelyPeriodicSet {
    pub fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            self.exceptions.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.exceptions.is_empty()
    }

    /// Contains every `n >= threshold`.
    pub fn is_cofinite(&self) -> bool {
        self.residues.len() as u64 == self.period
    }

    pub fn min(&self) -> Option<u64> {
        if let Some(e) = self.exceptions.iter().min() {
            return Some(*e);
        }
        (self.threshold..self.threshold + self.period).find(|n| self.residues.contains(&(n % self.period)))
    }
}

/// Integer numerator powers `N^n` with `M = N / D`.
struct ExactPowers {
    n: Mat<BigInt>,
    cur: Mat<BigInt>,
    exp: u64,
}

impl ExactPowers {
    fn new(m: &RationalMatrix) -> Self {
        let (n, _) = m.integer_scaled();
        ExactPowers { cur: n.clone(), n, exp: 1 }
    }

    /// Sign pattern of `M^exp`, then advance.
    fn next(&mut self) -> (u64, bool, bool) {
        let nonneg = self.cur.int_data().iter().all(|x| !x.is_negative());
        let pos = self.cur.int_data().iter().all(|x| x.is_positive());
        let e = self.exp;
        self.cur = self.cur.int_mul(&self.n);
        self.exp += 1;
        (e, nonneg, pos)
    }
}

/// Eventual behaviour of one residue class of `n` modulo `L`.
struct ClassVerdict {
    /// Eventual non-negativity for even and odd `n'` in `n = L n' + l`.
    parity_ok: [bool; 2],
    /// `n'` from which the verdict holds.
    start: u64,
}

/// `{n >= 1 : M^n >= 0}`.
pub fn sign_set(m: &RationalMatrix) -> Result<UltimatelyPeriodicSet> {
    let data = eigen(m)?;
    let d = m.rows();
    let l = period_of(&data);
    let ml = m.pow(l);
    let data_l = std::sync::Arc::new(eigen(&ml)?);
    let mut verdicts = Vec::new();
    let mut w = RationalMatrix::eye(d);
    for _ in 0..l {
        verdicts.push(class_verdict(&data_l, &w, d));
        w = w.mul(m);
    }
    let period = 2 * l;
    let mut residues = Vec::new();
    let mut threshold: u64 = 1;
    for r in 0..period {
        let cl = (r % l) as usize;
        let v = &verdicts[cl];
        if v.parity_ok[((r / l) % 2) as usize] {
            residues.push(r);
        }
        threshold = threshold.max(l * v.start + cl as u64);
    }
    // exact prefix
    let mut pw = ExactPowers::new(m);
    let mut member = vec![false];
    while (member.len() as u64) < threshold {
        member.push(pw.next().1);
    }
    Ok(minimize(threshold, period, residues, &member))
}

fn minimize(mut threshold: u64, period: u64, residues: Vec<u64>, member: &[bool]) -> UltimatelyPeriodicSet {
    let in_res = |r: u64| residues.contains(&(r % period));
    let mut t = period;
    for cand in 1..=period {
        if period % cand == 0 && (0..period).all(|r| in_res(r) == in_res(r + cand)) {
            t = cand;
            break;
        }
    }
    let mut res: Vec<u64> = residues.iter().map(|r| r % t).collect();
    res.sort();
    res.dedup();
    while threshold > 1 && member[(threshold - 1) as usize] == res.contains(&((threshold - 1) % t)) {
        threshold -= 1;
    }
    let exceptions = (1..threshold).filter(|&n| member[n as usize]).collect();
    UltimatelyPeriodicSet { threshold: threshold.max(1), period: t, residues: res, exceptions }
}

fn class_verdict(data: &std::sync::Arc<SpectralData>, w: &RationalMatrix, d: usize) -> ClassVerdict {
    let mut ok = [true, true];
    let mut start: u64 = 1;
    for i in 0..d {
        for j in 0..d {
            let f = entry_form(data, w, i, j);
            start = start.max(f.initial.len() as u64);
            match f.dominance() {
                Dominance::IdenticallyZero => {}
                Dominance::NotDominated => {
                    return ClassVerdict { parity_ok: [false, false], start: 1 };
                }
                Dominance::Dominated { block } => {
                    let (signs, t) = dominated_tail(&f, block, d as u64);
                    start = start.max(t);
                    for p in 0..2 {
                        if signs[p] == Sign::Negative {
                            ok[p] = false;
                        }
                    }
                }
            }
        }
    }
    ClassVerdict { parity_ok: ok, start }
}

fn modulus(a: &AlgebraicNumber, bits: u32) -> Interval {
    a.approx(bits).norm_sqr(bits + 16).sqrt(bits)
}

/// `t^k` for integer `k`.
fn pow_t(k: i64, t: u64, prec: u32) -> Interval {
    let tt = Interval::point(Dyadic::from_int(t)).powi(k.unsigned_abs(), prec);
    if k >= 0 {
        tt
    } else {
        tt.recip(prec)
    }
}

/// Signs of the dominated sequence for even and odd `n` once
/// `n >= start`, and `start`.
fn dominated_tail(f: &ExpPolyForm, block: usize, floor: u64) -> ([Sign; 2], u64) {
    let b = &f.spectral.blocks[block];
    let term = f.term_of_block(block).unwrap();
    let lam = &b.eigenvalues[0];
    let k = term.coeffs.len() - 1;
    let lead_sign = term.coeffs[k].sign_at_real(b.embedding);
    let lam_sign = lam.sign().expect("dominant eigenvalue is real");
    let signs = [lead_sign, if lam_sign == Sign::Negative { lead_sign.flip() } else { lead_sign }];
    let mut bits = 64;
    loop {
        if let Some(t) = tail_start(f, block, k, bits, floor) {
            return (signs, t);
        }
        bits *= 2;
    }
}

fn tail_start(f: &ExpPolyForm, block: usize, k: usize, bits: u32, floor: u64) -> Option<u64> {
    let prec = bits + 64;
    let b = &f.spectral.blocks[block];
    let term = f.term_of_block(block).unwrap();
    let lam_abs = modulus(&b.eigenvalues[0], bits);
    let a_lo = term.coeffs[k].eval(b.embedding, bits).re.mig();
    if a_lo.is_zero() {
        return None;
    }
    let b_hi: Vec<Dyadic> = term.coeffs[..k].iter().map(|c| c.eval(b.embedding, bits).mag()).collect();
    let mut c_hi = Dyadic::zero();
    let mut big_k = 0usize;
    let mut r_hi = Dyadic::zero();
    for (bi, ob) in f.spectral.blocks.iter().enumerate() {
        if bi == block {
            continue;
        }
        let Some(t) = f.term_of_block(bi) else { continue };
        for c in &t.coeffs {
            c_hi = c_hi.add(&c.eval(ob.embedding, bits).mag());
        }
        big_k = big_k.max(t.coeffs.len() - 1);
        let r = modulus(&ob.eigenvalues[0], bits).div(&lam_abs, prec);
        if r.hi > r_hi {
            r_hi = r.hi;
        }
    }
    if c_hi.is_zero() {
        return Some(floor);
    }
    if r_hi >= Dyadic::one() {
        return None;
    }
    let dk = big_k as i64 - k as i64;
    let mut t_min = floor.max(1);
    if dk > 0 {
        let ln_inv = -r_hi.to_f64().ln();
        let g = (dk as f64 / ln_inv * 1.01).ceil() + 1.0;
        t_min = t_min.max(g as u64);
    }
    let r_i = Interval::point(r_hi);
    let cond = |t: u64| -> bool {
        let mut lhs = Interval::point(a_lo.clone());
        for (j, bj) in b_hi.iter().enumerate() {
            let term = pow_t(j as i64 - k as i64, t, prec).mul(&Interval::point(bj.clone()), prec);
            lhs = lhs.sub(&term, prec);
        }
        let rhs = pow_t(dk, t, prec)
            .mul(&Interval::point(c_hi.clone()), prec)
            .mul(&r_i.powi(t, prec), prec);
        lhs.lo > rhs.hi
    };
    let mut hi = t_min;
    let mut guard = 0;
    while !cond(hi) {
        hi *= 2;
        guard += 1;
        if guard > 40 {
            return None;
        }
    }
    let mut lo = t_min;
    if lo == hi {
        return Some(hi);
    }
    // cond(hi) holds; shrink towards the least passing value
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if cond(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualVerdict {
    pub answer: Answer,
    pub onset: Option<u64>,
    pub certificate: String,
}

pub fn eventually_nonnegative(m: &RationalMatrix) -> Result<EventualVerdict> {
    let s = sign_set(m)?;
    Ok(verdict_from_set(&s))
}

fn verdict_from_set(s: &UltimatelyPeriodicSet) -> EventualVerdict {
    if s.is_cofinite() {
        EventualVerdict {
            answer: Answer::Yes,
            onset: Some(s.threshold),
            certificate: format!("M^n >= 0 for all n >= {}", s.threshold),
        }
    } else {
        let r = (0..s.period).find(|r| !s.residues.contains(r)).unwrap();
        EventualVerdict {
            answer: Answer::No,
            onset: None,
            certificate: format!("M^n has a negative entry for all n >= {} with n = {} mod {}", s.threshold, r, s.period),
        }
    }
}

pub fn has_nonnegative_power(m: &RationalMatrix) -> Result<Option<u64>> {
    Ok(sign_set(m)?.min())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfCondition {
    StrictlyDominant,
    RealPositive,
    Simple,
    PositiveEigenvector,
}

impl fmt::Display for PfCondition {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            PfCondition::StrictlyDominant => "no strictly dominant eigenvalue",
            PfCondition::RealPositive => "dominant eigenvalue is not real and positive",
            PfCondition::Simple => "dominant eigenvalue is not simple",
            PfCondition::PositiveEigenvector => "dominant eigenvector is not positive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct StrongPf {
    pub holds: bool,
    pub failed: Option<PfCondition>,
    pub eigenvalue: Option<AlgebraicNumber>,
}

pub fn strong_pf(m: &RationalMatrix) -> Result<StrongPf> {
    let data = eigen(m)?;
    let fail = |c, e| Ok(StrongPf { holds: false, failed: Some(c), eigenvalue: e });
    let ev = &data.eigenvalues[0];
    let mut best = vec![0usize];
    for i in 1..ev.len() {
        match cmp_modulus(&ev[i].0, &ev[best[0]].0) {
            Ordering::Greater => best = vec![i],
            Ordering::Equal => best.push(i),
            Ordering::Less => {}
        }
    }
    if best.len() != 1 {
        return fail(PfCondition::StrictlyDominant, None);
    }
    let (lam, mult) = ev[best[0]].clone();
    if lam.sign() != Some(Sign::Positive) {
        return fail(PfCondition::RealPositive, Some(lam));
    }
    if mult != 1 {
        return fail(PfCondition::Simple, Some(lam));
    }
    let b = data.blocks.iter().find(|b| b.eigenvalues[0] == lam).unwrap();
    if !positive_vector(&data.classes[b.class].right.col(0), b.embedding) {
        return fail(PfCondition::PositiveEigenvector, Some(lam));
    }
    Ok(StrongPf { holds: true, failed: None, eigenvalue: Some(lam) })
}

pub fn eventually_positive(m: &RationalMatrix) -> Result<EventualVerdict> {
    let a = strong_pf(m)?;
    if !a.holds {
        return Ok(EventualVerdict {
            answer: Answer::No,
            onset: None,
            certificate: format!("M fails the strong Perron-Frobenius property: {}", a.failed.unwrap()),
        });
    }
    let at = strong_pf(&m.transpose())?;
    if !at.holds {
        return Ok(EventualVerdict {
            answer: Answer::No,
            onset: None,
            certificate: format!("M^T fails the strong Perron-Frobenius property: {}", at.failed.unwrap()),
        });
    }
    // least n0 with M^m > 0 on [n0, 2 n0); products then cover every m >= n0
    let mut pw = ExactPowers::new(m);
    let mut pos = vec![false];
    let mut n0: u64 = 1;
    loop {
        while (pos.len() as u64) < 2 * n0 {
            pos.push(pw.next().2);
        }
        if (n0..2 * n0).all(|k| pos[k as usize]) {
            break;
        }
        n0 += 1;
    }
    Ok(EventualVerdict {
        answer: Answer::Yes,
        onset: Some(n0),
        certificate: format!("M and M^T have the strong Perron-Frobenius property; M^n > 0 for all n >= {n0}"),
    })
}

trait SignExt {
    fn flip(self) -> Sign;
}

impl SignExt for Sign {
    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

trait RealSign {
    fn sign_at_real(&self, k: usize) -> Sign;
}

impl RealSign for FieldElem {
    fn sign_at_real(&self, k: usize) -> Sign {
        if self.field().is_real_embedding(k) {
            return self.sign_at(k);
        }
        // a real value at a non-real embedding of its field
        let a = self.to_algebraic(k);
        a.sign().expect("coefficient of a real dominant term is real")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows)
    }

    fn rot() -> RationalMatrix {
        RationalMatrix::parse(&[vec!["3/5".into(), "-4/5".into()], vec!["4/5".into(), "3/5".into()]]).unwrap()
    }

    #[test]
    fn periods() {
        assert_eq!(nondegeneracy_period(&m(&[&[2, 0], &[0, 3]])).unwrap(), 1);
        assert_eq!(nondegeneracy_period(&m(&[&[0, 1], &[1, 0]])).unwrap(), 2);
        assert_eq!(nondegeneracy_period(&m(&[&[0, -1], &[1, 0]])).unwrap(), 2);
        assert_eq!(nondegeneracy_period(&rot()).unwrap(), 1);
    }

    #[test]
    fn closed_forms() {
        let f = closed_form(&m(&[&[2]]), 0, 0).unwrap();
        assert_eq!(f.terms().len(), 1);
        let f = closed_form(&m(&[&[1, 1], &[0, 1]]), 0, 1).unwrap();
        let t = f.terms();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coefficients.len(), 2);
        let a = m(&[&[2, -1], &[0, 1]]);
        let f = closed_form(&a, 0, 1).unwrap();
        for n in 0..6u64 {
            assert_eq!(f.eval(n), a.pow(n)[(0, 1)]);
        }
    }

    #[test]
    fn nilpotent_part() {
        let a = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        let f = closed_form(&a, 0, 1).unwrap();
        assert!(f.is_ultimately_zero() && !f.is_identically_zero());
        for n in 0..5u64 {
            assert_eq!(f.eval(n), a.pow(n)[(0, 1)]);
        }
    }

    #[test]
    fn dominance_cases() {
        let f = closed_form(&m(&[&[2, 0], &[0, 1]]), 0, 0).unwrap();
        assert!(matches!(f.dominance(), Dominance::Dominated { .. }));
        let f = closed_form(&m(&[&[0, 1], &[1, 0]]), 0, 0).unwrap();
        assert_eq!(f.dominance(), Dominance::NotDominated);
        let f = closed_form(&rot(), 0, 0).unwrap();
        assert_eq!(f.dominance(), Dominance::NotDominated);
        let f = closed_form(&m(&[&[2, 0], &[0, 1]]), 0, 1).unwrap();
        assert_eq!(f.dominance(), Dominance::IdenticallyZero);
    }

    #[test]
    fn sign_sets() {
        let s = sign_set(&m(&[&[-1]])).unwrap();
        assert_eq!((s.period, s.residues.clone()), (2, vec![0]));
        let s = sign_set(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!((s.threshold, s.period, s.residues.clone()), (1, 1, vec![0]));
        let s = sign_set(&m(&[&[2, -1], &[0, 1]])).unwrap();
        assert!(s.is_empty());
        assert!(sign_set(&rot()).unwrap().is_empty());
    }

    #[test]
    fn eventual_verdicts() {
        assert_eq!(eventually_nonnegative(&m(&[&[0, 1], &[1, 0]])).unwrap().onset, Some(1));
        assert_eq!(eventually_nonnegative(&m(&[&[-1]])).unwrap().answer, Answer::No);
        assert_eq!(eventually_nonnegative(&rot()).unwrap().answer, Answer::No);
        assert_eq!(has_nonnegative_power(&m(&[&[-1]])).unwrap(), Some(2));
        assert_eq!(has_nonnegative_power(&rot()).unwrap(), None);
        assert_eq!(has_nonnegative_power(&m(&[&[0, -1], &[-1, 0]])).unwrap(), Some(2));
    }

    #[test]
    fn perron_frobenius() {
        assert!(strong_pf(&m(&[&[1, 1], &[1, 1]])).unwrap().holds);
        assert_eq!(strong_pf(&RationalMatrix::eye(2)).unwrap().failed, Some(PfCondition::Simple));
        assert_eq!(strong_pf(&m(&[&[0, 1], &[1, 0]])).unwrap().failed, Some(PfCondition::StrictlyDominant));
        let v = eventually_positive(&m(&[&[3, 2], &[2, -1]])).unwrap();
        assert_eq!((v.answer, v.onset), (Answer::Yes, Some(2)));
        assert_eq!(eventually_positive(&m(&[&[0, 1], &[1, 0]])).unwrap().answer, Answer::No);
        assert_eq!(eventually_positive(&m(&[&[1, 1], &[1, 1]])).unwrap().onset, Some(1));
    }
}
