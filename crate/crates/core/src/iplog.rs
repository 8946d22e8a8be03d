//! Strict homogeneous integer programs whose coefficients are logarithms of
//! algebraic numbers: `exists x in Z^n` with `Im(c) . x = 0 mod 2 pi` and
//! `A x < 0`.

use crate::lattice::{integer_kernel, reduce_basis, row_basis, IVec};
use crate::num::algebraic::{AlgebraicNumber, Sign};
use crate::num::elementary::{elem_sign, ElementaryExpr, LogLinExpr, Precision};
use crate::num::rational::{denom_lcm, simplest_between, Rational};
use crate::relations::{arg_congruence_lattice, arg_winding, default_bound};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// `rows[i] . x < 0` for all `i`, and `sum_r Im(c_r) x_r = 0 mod 2 pi` for
/// every `c` in `congruences`.
#[derive(Clone, Debug)]
pub struct ConeSystem {
    pub unknowns: usize,
    pub rows: Vec<Vec<ElementaryExpr>>,
    pub congruences: Vec<Vec<LogLinExpr>>,
}

impl ConeSystem {
    pub fn new(unknowns: usize) -> Self {
        ConeSystem { unknowns, rows: vec![], congruences: vec![] }
    }

    /// Rows whose coefficients are real parts of log-linear expressions.
    pub fn from_logs(rows: &[Vec<LogLinExpr>], congruence: Option<Vec<LogLinExpr>>, unknowns: usize) -> Result<Self> {
        let mut s = ConeSystem::new(unknowns);
        for r in rows {
            s.push_row(r.iter().map(|e| e.re()).collect())?;
        }
        if let Some(c) = congruence {
            s.push_congruence(c)?;
        }
        Ok(s)
    }

    pub fn push_congruence(&mut self, c: Vec<LogLinExpr>) -> Result<()> {
        if c.len() != self.unknowns {
            return Err(Error::Dimension(format!("congruence has {} entries, expected {}", c.len(), self.unknowns)));
        }
        self.congruences.push(c);
        Ok(())
    }

    pub fn push_row(&mut self, row: Vec<ElementaryExpr>) -> Result<()> {
        if row.len() != self.unknowns {
            return Err(Error::Dimension(format!("row has {} entries, expected {}", row.len(), self.unknowns)));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Append `-x_i < 0` for every unknown.
    pub fn add_positivity(&mut self) {
        for i in 0..self.unknowns {
            let row = (0..self.unknowns)
                .map(|j| ElementaryExpr::rational(if i == j { -Rational::one() } else { Rational::zero() }))
                .collect();
            self.rows.push(row);
        }
    }
}

/// A system without congruence over `y`, with `x = B y`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub system: ConeSystem,
    /// `n x l`, columns span the solutions of the congruence.
    pub basis: Vec<IVec>,
}

impl Reduced {
    pub fn lift(&self, y: &[BigInt]) -> IVec {
        self.basis.iter().map(|row| row.iter().zip(y).map(|(b, v)| b * v).sum()).collect()
    }
}

/// Replace the congruence by a change of variables `x = B y`.
pub fn eliminate_congruence(sys: &ConeSystem) -> Result<Reduced> {
    let n = sys.unknowns;
    let identity = |n: usize| -> Vec<IVec> {
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    };
    if sys.congruences.is_empty() {
        return Ok(Reduced { system: sys.clone(), basis: identity(n) });
    }
    let mut cols = identity(n);
    for c in &sys.congruences {
        cols = intersect(&cols, &congruence_lattice(c)?, n);
    }
    let mut out = substitute(&ConeSystem { congruences: vec![], ..sys.clone() }, &cols);
    out.system.congruences.clear();
    Ok(out)
}

/// Change of variables `x = B y`, where the columns of `B` are `cols`.
/// Rows and congruences are rewritten over `y`.
pub fn substitute(sys: &ConeSystem, cols: &[IVec]) -> Reduced {
    let n = sys.unknowns;
    let l = cols.len();
    let basis: Vec<IVec> = (0..n).map(|i| cols.iter().map(|v| v[i].clone()).collect()).collect();
    let mut out = ConeSystem::new(l);
    for row in &sys.rows {
        let new_row = (0..l)
            .map(|j| {
                let mut acc = ElementaryExpr::rational(Rational::zero());
                for (r, a) in row.iter().enumerate() {
                    let b = &basis[r][j];
                    if !b.is_zero() {
                        acc = acc.add(&a.mul(&ElementaryExpr::rational(Rational::from_integer(b.clone()))));
                    }
                }
                acc
            })
            .collect();
        out.rows.push(new_row);
    }
    for c in &sys.congruences {
        let new_c = (0..l)
            .map(|j| {
                let mut acc = LogLinExpr::zero();
                for (r, a) in c.iter().enumerate() {
                    let b = &basis[r][j];
                    if !b.is_zero() {
                        acc = acc.add(&a.scale(&Rational::from_integer(b.clone())));
                    }
                }
                acc
            })
            .collect();
        out.congruences.push(new_c);
    }
    Reduced { system: out, basis }
}

/// Intersection of two sublattices of `Z^n` given by bases.
pub fn intersect(a: &[IVec], b: &[IVec], n: usize) -> Vec<IVec> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let width = a.len() + b.len();
    let rows: Vec<IVec> = (0..n)
        .map(|t| a.iter().map(|v| v[t].clone()).chain(b.iter().map(|v| -v[t].clone())).collect())
        .collect();
    let ker = integer_kernel(&rows, width);
    let gens: Vec<IVec> = ker
        .iter()
        .map(|k| (0..n).map(|t| a.iter().zip(k).map(|(v, y)| &v[t] * y).sum()).collect())
        .collect();
    reduce_basis(&row_basis(&gens))
}

/// Lattice basis (as vectors of length `n`) of `{x : sum x_r Im(c_r) in 2 pi Z}`.
pub fn congruence_lattice(c: &[LogLinExpr]) -> Result<Vec<IVec>> {
    let n = c.len();
    // atoms: all arguments plus -1 for the multiples of pi
    let mut atoms: Vec<AlgebraicNumber> = Vec::new();
    for e in c {
        for (_, a) in e.terms() {
            if !atoms.contains(a) {
                atoms.push(a.clone());
            }
        }
    }
    let minus_one = AlgebraicNumber::from_int(-1);
    if !atoms.contains(&minus_one) {
        atoms.push(minus_one.clone());
    }
    let t = atoms.len();
    let pi_idx = atoms.iter().position(|a| *a == minus_one).unwrap();
    let dd = denom_lcm(c.iter().flat_map(|e| e.terms().iter().map(|(q, _)| q).chain(std::iter::once(e.pi_multiple()))));
    // m = D (Q; P) x as integer rows over x
    let mut qp: Vec<IVec> = vec![vec![BigInt::zero(); n]; t];
    for (r, e) in c.iter().enumerate() {
        for (q, a) in e.terms() {
            let i = atoms.iter().position(|b| b == a).unwrap();
            qp[i][r] += (q * Rational::from_integer(dd.clone())).to_integer();
        }
        qp[pi_idx][r] += (e.pi_multiple() * Rational::from_integer(dd.clone())).to_integer();
    }
    let lat = arg_congruence_lattice(&atoms, default_bound(&atoms));
    if !lat.certified_exhaustive {
        return Err(Error::BudgetExhausted);
    }
    let s = lat.basis.len();
    let wind: Vec<BigInt> = lat.basis.iter().map(|v| arg_winding(&atoms, v)).collect();
    // unknowns (x, y, z): D(Q;P) x - B y = 0 and w . y - D z = 0
    let width = n + s + 1;
    let mut rows: Vec<IVec> = Vec::new();
    for i in 0..t {
        let mut r = vec![BigInt::zero(); width];
        r[..n].clone_from_slice(&qp[i]);
        for (j, v) in lat.basis.iter().enumerate() {
            r[n + j] = -v[i].clone();
        }
        rows.push(r);
    }
    let mut r = vec![BigInt::zero(); width];
    r[n..n + s].clone_from_slice(&wind);
    r[n + s] = -dd.clone();
    rows.push(r);
    let ker = integer_kernel(&rows, width);
    let proj: Vec<IVec> = ker.iter().map(|k| k[..n].to_vec()).collect();
    Ok(reduce_basis(&row_basis(&proj)))
}

/// Outcome of real feasibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FmResult {
    Feasible(Vec<Rational>),
    Infeasible,
}

struct Level {
    rows: Vec<Vec<ElementaryExpr>>,
    /// Sign of the coefficient of the eliminated (last) variable per row.
    signs: Vec<Sign>,
}

/// Real feasibility of `A x < 0` by Fourier-Motzkin elimination, with an
/// exact rational interior point on success.
pub fn fourier_motzkin(sys: &ConeSystem, budget: &Precision) -> Result<(FmResult, bool)> {
    let mut conditional = false;
    let mut rows: Vec<Vec<ElementaryExpr>> = dedup(sys.rows.clone());
    let mut levels: Vec<Level> = Vec::new();
    for k in (0..sys.unknowns).rev() {
        let mut signs = Vec::with_capacity(rows.len());
        for r in rows.iter_mut() {
            let s = elem_sign(&r[k], budget)?;
            conditional |= s.conditional;
            if s.sign == Sign::Zero {
                r[k] = ElementaryExpr::rational(Rational::zero());
            }
            signs.push(s.sign);
        }
        let mut next: Vec<Vec<ElementaryExpr>> = Vec::new();
        for (r, s) in rows.iter().zip(&signs) {
            if *s == Sign::Zero {
                next.push(r[..k].to_vec());
            }
        }
        for (p, sp) in rows.iter().zip(&signs) {
            if *sp != Sign::Positive {
                continue;
            }
            for (q, sq) in rows.iter().zip(&signs) {
                if *sq != Sign::Negative {
                    continue;
                }
                // (-q_k) p + p_k q: both multipliers positive
                let neg_qk = q[k].neg();
                next.push((0..k).map(|j| p[j].mul(&neg_qk).add(&q[j].mul(&p[k]))).collect());
            }
        }
        levels.push(Level { rows: rows.clone(), signs });
        rows = dedup(next);
    }
    if !rows.is_empty() {
        return Ok((FmResult::Infeasible, conditional));
    }
    // back substitution, first variable first
    let mut point: Vec<Rational> = Vec::new();
    for level in levels.iter().rev() {
        let k = point.len();
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        for (r, s) in level.rows.iter().zip(&level.signs) {
            if *s == Sign::Zero {
                continue;
            }
            let mut acc = ElementaryExpr::rational(Rational::zero());
            for (a, x) in r[..k].iter().zip(&point) {
                if !x.is_zero() {
                    acc = acc.add(&a.mul(&ElementaryExpr::rational(x.clone())));
                }
            }
            let bound = acc.neg().div(&r[k]);
            if *s == Sign::Positive {
                uppers.push(bound);
            } else {
                lowers.push(bound);
            }
        }
        point.push(choose_between(&lowers, &uppers, budget)?);
    }
    Ok((FmResult::Feasible(point), conditional))
}

fn dedup(rows: Vec<Vec<ElementaryExpr>>) -> Vec<Vec<ElementaryExpr>> {
    let mut out: Vec<Vec<ElementaryExpr>> = Vec::new();
    for r in rows {
        let r: Vec<ElementaryExpr> = r.into_iter().map(|e| e.normal_form()).collect();
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// A simple rational strictly above every lower and below every upper bound.
fn choose_between(lowers: &[ElementaryExpr], uppers: &[ElementaryExpr], budget: &Precision) -> Result<Rational> {
    let mut bits = budget.start_bits.max(16);
    while bits <= budget.max_bits {
        let lo: Option<Vec<_>> = lowers.iter().map(|e| e.interval(bits)).collect();
        let hi: Option<Vec<_>> = uppers.iter().map(|e| e.interval(bits)).collect();
        if let (Some(lo), Some(hi)) = (lo, hi) {
            let l = lo.iter().map(|i| i.hi.to_rational()).max();
            let u = hi.iter().map(|i| i.lo.to_rational()).min();
            match (l, u) {
                (None, None) => return Ok(Rational::zero()),
                (Some(l), None) => return Ok(l.floor() + Rational::one()),
                (None, Some(u)) => return Ok(u.ceil() - Rational::one()),
                (Some(l), Some(u)) if l < u => return Ok(simplest_between(&l, &u)),
                _ => {}
            }
        }
        bits *= 2;
    }
    Err(Error::BudgetExhausted)
}

/// Scale a rational interior point of the cone to an integer one.
pub fn cone_integer_point(p: &[Rational]) -> IVec {
    let l = denom_lcm(p.iter());
    p.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IplogAnswer {
    Yes(IVec),
    No,
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IplogVerdict {
    pub answer: IplogAnswer,
    pub conditional: bool,
}

impl fmt::Display for IplogAnswer {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            IplogAnswer::Yes(w) => {
                let s: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "YES ({})", s.join(", "))
            }
            IplogAnswer::No => write!(f, "NO"),
            IplogAnswer::Unknown(r) => write!(f, "UNKNOWN ({r})"),
        }
    }
}

pub fn solve_iplog(sys: &ConeSystem) -> IplogVerdict {
    solve_iplog_with(sys, &Precision::default())
}

pub fn solve_iplog_with(sys: &ConeSystem, budget: &Precision) -> IplogVerdict {
    match solve_inner(sys, budget) {
        Ok(v) => v,
        Err(e) => IplogVerdict { answer: IplogAnswer::Unknown(e.to_string()), conditional: false },
    }
}

fn solve_inner(sys: &ConeSystem, budget: &Precision) -> Result<IplogVerdict> {
    let red = eliminate_congruence(sys)?;
    let (res, conditional) = fourier_motzkin(&red.system, budget)?;
    let FmResult::Feasible(p) = res else {
        return Ok(IplogVerdict { answer: IplogAnswer::No, conditional });
    };
    let y = cone_integer_point(&p);
    let x = red.lift(&y);
    for scale in [1i64, 2] {
        let xs: IVec = x.iter().map(|v| v * scale).collect();
        if !verify_witness(sys, &xs, budget)? {
            return Err(Error::InvalidInput("witness failed re-verification".into()));
        }
    }
    Ok(IplogVerdict { answer: IplogAnswer::Yes(x), conditional })
}

/// Exact check of a witness: the congruence by lattice membership and every
/// row by interval separation.
pub fn verify_witness(sys: &ConeSystem, x: &[BigInt], budget: &Precision) -> Result<bool> {
    if x.len() != sys.unknowns {
        return Ok(false);
    }
    for c in &sys.congruences {
        let lat = congruence_lattice(c)?;
        if !crate::lattice::contains(&lat, &x.to_vec()) {
            return Ok(false);
        }
    }
    for row in &sys.rows {
        let mut acc = ElementaryExpr::rational(Rational::zero());
        for (a, v) in row.iter().zip(x) {
            if !v.is_zero() {
                acc = acc.add(&a.mul(&ElementaryExpr::rational(Rational::from_integer(v.clone()))));
            }
        }
        if elem_sign(&acc, budget)?.sign != Sign::Negative {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_ivec;
    use crate::num::algebraic::roots;
    use crate::num::rational::rat;
    use crate::num::PolyQ;

    fn lg(n: i64, d: i64) -> LogLinExpr {
        LogLinExpr::log(&AlgebraicNumber::from_rational(rat(n, d)))
    }

    fn omega_system() -> ConeSystem {
        let w = roots(&PolyQ::from_ints(&[1, 1, 1]))[0].0.clone();
        let c = vec![LogLinExpr::log(&w), LogLinExpr::log(&w.pow(2))];
        ConeSystem::from_logs(&[vec![lg(2, 1), lg(1, 1)], vec![lg(1, 2), lg(1, 3)]], Some(c), 2).unwrap()
    }

    #[test]
    fn single_rows() {
        let s = ConeSystem::from_logs(&[vec![lg(2, 1)]], None, 1).unwrap();
        let (r, _) = fourier_motzkin(&s, &Precision::default()).unwrap();
        assert_eq!(r, FmResult::Feasible(vec![rat(-1, 1)]));
        let s = ConeSystem::from_logs(&[vec![lg(2, 1)], vec![lg(1, 2)]], None, 1).unwrap();
        assert_eq!(solve_iplog(&s).answer, IplogAnswer::No);
        assert_eq!(solve_iplog(&ConeSystem::new(2)).answer, IplogAnswer::Yes(to_ivec(&[0, 0])));
    }

    #[test]
    fn integer_points() {
        assert_eq!(cone_integer_point(&[rat(-1, 2)]), to_ivec(&[-1]));
        assert_eq!(cone_integer_point(&[rat(1, 3), rat(-2, 5)]), to_ivec(&[5, -6]));
        assert_eq!(cone_integer_point(&[rat(4, 1)]), to_ivec(&[4]));
    }

    #[test]
    fn omega_example() {
        let s = omega_system();
        let red = eliminate_congruence(&s).unwrap();
        let lat: Vec<IVec> = (0..red.basis[0].len()).map(|j| red.basis.iter().map(|r| r[j].clone()).collect()).collect();
        assert!(crate::lattice::contains(&lat, &to_ivec(&[3, 3])));
        assert!(crate::lattice::contains(&lat, &to_ivec(&[2, -1])));
        let v = solve_iplog(&s);
        let IplogAnswer::Yes(x) = v.answer else { panic!("expected a witness") };
        assert!(verify_witness(&s, &x, &Precision::default()).unwrap());
        assert!(verify_witness(&s, &to_ivec(&[-3, 6]), &Precision::default()).unwrap());
        assert!(!v.conditional);
    }

    #[test]
    fn minus_one_congruence() {
        let s = ConeSystem { unknowns: 1, rows: vec![], congruences: vec![vec![lg(-1, 1)]] };
        let red = eliminate_congruence(&s).unwrap();
        assert_eq!(red.basis, vec![to_ivec(&[2])]);
    }

    #[test]
    fn positivity() {
        // x log 2 - y log 3 < 0 with x, y > 0
        let mut s = ConeSystem::from_logs(&[vec![lg(2, 1), lg(1, 3)]], None, 2).unwrap();
        s.add_positivity();
        let IplogAnswer::Yes(x) = solve_iplog(&s).answer else { panic!() };
        assert!(x.iter().all(|v| *v >= BigInt::one()));
    }
}
