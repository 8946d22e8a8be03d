//! Reduction from the threshold problem for probabilistic automata to
//! non-negative membership for non-commuting families.
//!
//! Given stochastic `A_1..A_k` and vectors `u`, `v`, the generators `U`,
//! `A'_i`, `V` of dimension `d + 2` generate a non-negative matrix iff some
//! product `A = A_{i_1} .. A_{i_s}` has `u^T A v >= 1/2`.

use crate::linalg::RationalMatrix;
use crate::num::rational::Rational;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaInstance {
    u: Vec<Rational>,
    v: Vec<Rational>,
    generators: Vec<RationalMatrix>,
}

impl PfaInstance {
    pub fn new(u: Vec<Rational>, v: Vec<Rational>, generators: Vec<RationalMatrix>) -> Result<Self> {
        let d = u.len();
        if d == 0 || v.len() != d {
            return Err(Error::Dimension(format!("u has length {d}, v has length {}", v.len())));
        }
        for (i, a) in generators.iter().enumerate() {
            if a.rows() != d || a.cols() != d {
                return Err(Error::Dimension(format!("generator {i} is {}x{}, expected {d}x{d}", a.rows(), a.cols())));
            }
            let stochastic = (0..d).all(|r| {
                let row = a.row(r);
                row.iter().all(|x| !x.is_negative()) && row.iter().sum::<Rational>() == Rational::one()
            });
            if !stochastic {
                return Err(Error::StochasticityViolation(i));
            }
        }
        Ok(PfaInstance { u, v, generators })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn generators(&self) -> &[RationalMatrix] {
        &self.generators
    }

    /// `u^T A_{i_1} .. A_{i_s} v`.
    pub fn acceptance(&self, word: &[usize]) -> Rational {
        let mut row = self.u.clone();
        for &i in word {
            row = (0..self.dim())
                .map(|c| row.iter().enumerate().map(|(r, x)| x * &self.generators[i][(r, c)]).sum())
                .collect();
        }
        row.iter().zip(&self.v).map(|(a, b)| a * b).sum()
    }
}

/// `1, -1/2` in the first row, zeros in the second.
fn frame(d: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zero_matrix(d + 2, d + 2);
    m[(0, 0)] = Rational::one();
    m[(0, 1)] = Rational::new((-1).into(), 2.into());
    m
}

/// `[U, A'_1, .., A'_k, V]`.
pub fn build_reduction(inst: &PfaInstance) -> Vec<RationalMatrix> {
    let d = inst.dim();
    let mut u = frame(d);
    for (j, x) in inst.u.iter().enumerate() {
        u[(0, j + 2)] = x.clone();
    }
    let mut out = vec![u];
    for a in &inst.generators {
        let mut m = frame(d);
        for r in 0..d {
            for c in 0..d {
                m[(r + 2, c + 2)] = a[(r, c)].clone();
            }
        }
        out.push(m);
    }
    let mut v = frame(d);
    for (j, x) in inst.v.iter().enumerate() {
        v[(j + 2, 1)] = x.clone();
    }
    out.push(v);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Letter {
    U,
    A(usize),
    V,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Letter::U => write!(f, "U"),
            Letter::A(i) => write!(f, "A{}", i + 1),
            Letter::V => write!(f, "V"),
        }
    }
}

pub fn word_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Indices of `A` letters if `w` ends with `U A'.. V`.
pub fn suffix_form(w: &[Letter]) -> Option<Vec<usize>> {
    let (Letter::V, rest) = w.split_last()? else { return None };
    let mut inner = Vec::new();
    for l in rest.iter().rev() {
        match l {
            Letter::A(i) => inner.push(*i),
            Letter::U => {
                inner.reverse();
                return Some(inner);
            }
            Letter::V => return None,
        }
    }
    None
}

#[derive(Clone, Debug, Default)]
pub struct CorrespondenceReport {
    pub words_checked: u64,
    pub violations: Vec<String>,
    /// Words whose product is non-negative, shortest first.
    pub nonnegative: Vec<Vec<Letter>>,
}

impl CorrespondenceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the entry identities on every product of length `1..=maxlen`.
pub fn verify_correspondence(inst: &PfaInstance, maxlen: usize) -> CorrespondenceReport {
    let gens = build_reduction(inst);
    let k = inst.generators.len();
    let letters: Vec<Letter> =
        std::iter::once(Letter::U).chain((0..k).map(Letter::A)).chain(std::iter::once(Letter::V)).collect();
    let mut report = CorrespondenceReport::default();
    let mut stack: Vec<(Vec<Letter>, RationalMatrix)> =
        letters.iter().zip(&gens).rev().map(|(l, g)| (vec![*l], g.clone())).collect();
    while let Some((w, b)) = stack.pop() {
        check(inst, &w, &b, &mut report);
        if w.len() < maxlen {
            for (l, g) in letters.iter().zip(&gens).rev() {
                let mut w2 = w.clone();
                w2.push(*l);
                stack.push((w2, b.mul(g)));
            }
        }
    }
    report.nonnegative.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    report
}

fn check(inst: &PfaInstance, w: &[Letter], b: &RationalMatrix, report: &mut CorrespondenceReport) {
    report.words_checked += 1;
    let half = Rational::new((-1).into(), 2.into());
    match suffix_form(w) {
        None => {
            if b[(0, 1)] != half {
                report.violations.push(format!("{}: entry (1,2) is {}, expected -1/2", word_string(w), b[(0, 1)]));
            }
        }
        Some(inner) => {
            let expect = inst.acceptance(&inner) + &half;
            if b[(0, 1)] != expect {
                report.violations.push(format!("{}: entry (1,2) is {}, expected {expect}", word_string(w), b[(0, 1)]));
            }
            let n = b.rows();
            let rest_ok = (0..n).all(|r| {
                (0..n).all(|c| match (r, c) {
                    (0, 0) => b[(r, c)].is_one(),
                    (0, 1) => true,
                    _ => b[(r, c)].is_zero(),
                })
            });
            if !rest_ok {
                report.violations.push(format!("{}: entries outside (1,1), (1,2) are not 1, 0", word_string(w)));
            }
        }
    }
    if b.is_nonnegative() {
        report.nonnegative.push(w.to_vec());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat;

    fn inst(u: i64, v: i64) -> PfaInstance {
        PfaInstance::new(vec![rat(u, 1)], vec![rat(v, 1)], vec![RationalMatrix::from_ints(&[&[1]])]).unwrap()
    }

    #[test]
    fn one_dimensional() {
        let g = build_reduction(&inst(1, 1));
        assert_eq!(g.len(), 3);
        let uv = g[0].mul(&g[2]);
        assert_eq!(uv[(0, 1)], rat(1, 2));
        assert!(uv.is_nonnegative());
        let r = verify_correspondence(&inst(1, 1), 3);
        assert!(r.ok(), "{:?}", r.violations);
        assert_eq!(r.words_checked, 3 + 9 + 27);
        assert!(r.nonnegative.contains(&vec![Letter::U, Letter::V]));
    }

    #[test]
    fn rejecting_instance() {
        let r = verify_correspondence(&inst(1, 0), 4);
        assert!(r.ok());
        assert!(r.nonnegative.is_empty());
    }

    #[test]
    fn single_letters_are_never_nonnegative() {
        let r = verify_correspondence(&inst(1, 1), 1);
        assert!(r.ok());
        assert!(r.nonnegative.is_empty());
    }

    #[test]
    fn empty_alphabet() {
        let i = PfaInstance::new(vec![rat(1, 1)], vec![rat(1, 2)], vec![]).unwrap();
        assert_eq!(build_reduction(&i).len(), 2);
        let r = verify_correspondence(&i, 2);
        assert!(r.nonnegative.contains(&vec![Letter::U, Letter::V]));
    }

    #[test]
    fn rejects_non_stochastic() {
        let e = PfaInstance::new(vec![rat(1, 1)], vec![rat(1, 1)], vec![RationalMatrix::from_ints(&[&[2]])]);
        assert_eq!(e, Err(Error::StochasticityViolation(0)));
    }
}
