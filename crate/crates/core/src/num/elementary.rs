//! Elementary numbers: rational functions in `ln|a|`, `Arg a` and `pi` for
//! algebraic `a`, with sign determination.

use super::algebraic::{AlgebraicNumber, Sign, SignResult};
use super::dyadic::{pi, Interval};
use super::rational::Rational;
use crate::linalg::RationalMatrix;
use crate::relations::{arg_congruence_lattice, arg_winding, default_bound, modulus_lattice};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// `sum q_i log(a_i) + i pi p` with principal logarithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogLinExpr {
    terms: Vec<(Rational, AlgebraicNumber)>,
    pi_multiple: Rational,
}

impl LogLinExpr {
    pub fn zero() -> Self {
        LogLinExpr { terms: vec![], pi_multiple: Rational::zero() }
    }

    pub fn log(a: &AlgebraicNumber) -> Self {
        LogLinExpr::new(vec![(Rational::one(), a.clone())], Rational::zero())
    }

    pub fn new(terms: Vec<(Rational, AlgebraicNumber)>, pi_multiple: Rational) -> Self {
        assert!(terms.iter().all(|(_, a)| !a.is_zero()), "log of zero");
        let mut out: Vec<(Rational, AlgebraicNumber)> = Vec::new();
        for (q, a) in terms {
            match out.iter_mut().find(|(_, b)| *b == a) {
                Some((p, _)) => *p += q,
                None => out.push((q, a)),
            }
        }
        out.retain(|(q, _)| !q.is_zero());
        out.sort_by(|x, y| atom_key(&x.1).cmp(&atom_key(&y.1)));
        LogLinExpr { terms: out, pi_multiple }
    }

    pub fn terms(&self) -> &[(Rational, AlgebraicNumber)] {
        &self.terms
    }

    pub fn pi_multiple(&self) -> &Rational {
        &self.pi_multiple
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        LogLinExpr::new(t, &self.pi_multiple + &o.pi_multiple)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        LogLinExpr::new(self.terms.iter().map(|(c, a)| (c * q, a.clone())).collect(), &self.pi_multiple * q)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    /// Real part `sum q_i ln|a_i|`.
    pub fn re(&self) -> ElementaryExpr {
        let mut p = MPoly::zero();
        for (q, a) in &self.terms {
            p = p.add(&MPoly::atom(Atom::LnAbs(a.clone())).scale(q));
        }
        ElementaryExpr::from_poly(p)
    }

    /// Imaginary part `sum q_i Arg a_i + p pi`.
    pub fn im(&self) -> ElementaryExpr {
        let mut p = MPoly::atom(Atom::Pi).scale(&self.pi_multiple);
        for (q, a) in &self.terms {
            p = p.add(&MPoly::atom(Atom::Arg(a.clone())).scale(q));
        }
        ElementaryExpr::from_poly(p)
    }
}

/// Building blocks: logarithmic atoms, `pi`, and real algebraic constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    LnAbs(AlgebraicNumber),
    Arg(AlgebraicNumber),
    Pi,
    /// A real algebraic number, treated as an opaque constant.
    Alg(AlgebraicNumber),
}

fn atom_key(a: &AlgebraicNumber) -> (usize, Vec<Rational>, usize) {
    (a.degree(), a.minpoly().coeffs().to_vec(), a.root_index())
}

impl Atom {
    fn key(&self) -> (u8, (usize, Vec<Rational>, usize)) {
        match self {
            Atom::LnAbs(a) => (0, atom_key(a)),
            Atom::Arg(a) => (1, atom_key(a)),
            Atom::Pi => (2, (0, vec![], 0)),
            Atom::Alg(a) => (3, atom_key(a)),
        }
    }

    fn eval(&self, bits: u32) -> Interval {
        match self {
            Atom::LnAbs(a) => a.ln_abs(bits),
            Atom::Arg(a) => a.arg(bits),
            Atom::Pi => pi(bits),
            Atom::Alg(a) => a.approx(bits).re,
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Atom {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Atom::LnAbs(a) => write!(f, "ln|{a}|"),
            Atom::Arg(a) => write!(f, "Arg({a})"),
            Atom::Pi => write!(f, "pi"),
            Atom::Alg(a) => write!(f, "{a}"),
        }
    }
}

type Monomial = Vec<(Atom, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<Atom, u32> = a.iter().cloned().collect();
    for (x, e) in b {
        *m.entry(x.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

/// Polynomial with rational coefficients in atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(vec![], q);
        }
        MPoly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(a, 1)], Rational::one());
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![]).cloned(),
            _ => None,
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self.terms.keys().flat_map(|m| m.iter().map(|(a, _)| a.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (m, c) in &o.terms {
            let e = t.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                t.remove(m);
            }
        }
        MPoly { terms: t }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = MPoly::zero();
        for (m1, c1) in &self.terms {
            let mut part = BTreeMap::new();
            for (m2, c2) in &o.terms {
                part.insert(mono_mul(m1, m2), c1 * c2);
            }
            acc = acc.add(&MPoly { terms: part });
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(MPoly::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// Replace atoms by polynomials.
    pub fn subst(&self, map: &BTreeMap<Atom, MPoly>) -> Self {
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (a, e) in m {
                let base = map.get(a).cloned().unwrap_or_else(|| MPoly::atom(a.clone()));
                t = t.mul(&base.pow(*e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Coefficient of the linear monomial `a` and the remainder, if `self` is
    /// affine in `a`.
    pub fn linear_in(&self, a: &Atom) -> Option<(MPoly, MPoly)> {
        let mut coef = MPoly::zero();
        let mut rest = MPoly::zero();
        for (m, c) in &self.terms {
            match m.iter().find(|(x, _)| x == a) {
                None => rest = rest.add(&MPoly { terms: BTreeMap::from([(m.clone(), c.clone())]) }),
                Some((_, 1)) => {
                    let m2: Monomial = m.iter().filter(|(x, _)| x != a).cloned().collect();
                    coef = coef.add(&MPoly { terms: BTreeMap::from([(m2, c.clone())]) });
                }
                Some(_) => return None,
            }
        }
        Some((coef, rest))
    }

    pub fn eval(&self, vals: &BTreeMap<Atom, Interval>, prec: u32) -> Interval {
        let mut acc = Interval::zero();
        for (m, c) in &self.terms {
            let mut t = Interval::from_rational(c, prec);
            for (a, e) in m {
                t = t.mul(&vals[a].powi(*e as u64, prec), prec);
            }
            acc = acc.add(&t, prec);
        }
        acc
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (a, e) in m {
                if *e == 1 {
                    write!(f, "*{a}")?;
                } else {
                    write!(f, "*{a}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Quotient of two atom polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryExpr {
    pub num: MPoly,
    pub den: MPoly,
}

impl ElementaryExpr {
    pub fn from_poly(p: MPoly) -> Self {
        ElementaryExpr { num: p, den: MPoly::constant(Rational::one()) }
    }

    pub fn rational(q: Rational) -> Self {
        ElementaryExpr::from_poly(MPoly::constant(q))
    }

    /// A real algebraic constant.
    pub fn algebraic(a: &AlgebraicNumber) -> Self {
        assert!(a.is_real(), "algebraic atoms must be real");
        match a.as_rational() {
            Some(q) => ElementaryExpr::rational(q.clone()),
            None => ElementaryExpr::from_poly(MPoly::atom(Atom::Alg(a.clone()))),
        }
    }

    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "formally zero denominator");
        ElementaryExpr { num, den }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return ElementaryExpr { num: self.num.add(&o.num), den: self.den.clone() };
        }
        ElementaryExpr { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn neg(&self) -> Self {
        ElementaryExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        ElementaryExpr { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn div(&self, o: &Self) -> Self {
        ElementaryExpr::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut v = self.num.atoms();
        v.extend(self.den.atoms());
        v.sort();
        v.dedup();
        v
    }

    /// Enclosures of numerator and denominator with all atoms evaluated to
    /// `bits` bits.
    pub fn enclose(&self, bits: u32) -> (Interval, Interval) {
        let vals: BTreeMap<Atom, Interval> = self.atoms().into_iter().map(|a| (a.clone(), a.eval(bits))).collect();
        (self.num.eval(&vals, bits + 16), self.den.eval(&vals, bits + 16))
    }

    /// Enclosure of the value (`None` if the denominator is not yet
    /// separated from zero).
    pub fn interval(&self, bits: u32) -> Option<Interval> {
        let (n, d) = self.enclose(bits);
        if d.contains_zero() {
            return None;
        }
        Some(n.div(&d, bits + 16))
    }

    /// Rewrite over a multiplicatively independent basis so that formal
    /// vanishing coincides with actual vanishing.
    pub fn normal_form(&self) -> ElementaryExpr {
        let map = rewrite_map(&self.atoms());
        ElementaryExpr { num: self.num.subst(&map), den: self.den.subst(&map) }
    }
}

impl fmt::Display for ElementaryExpr {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.den.as_constant() == Some(Rational::one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Substitution expressing dependent atoms through independent ones.
pub fn rewrite_map(atoms: &[Atom]) -> BTreeMap<Atom, MPoly> {
    let mut map = BTreeMap::new();
    let mods: Vec<AlgebraicNumber> =
        atoms.iter().filter_map(|a| if let Atom::LnAbs(x) = a { Some(x.clone()) } else { None }).collect();
    let args: Vec<AlgebraicNumber> =
        atoms.iter().filter_map(|a| if let Atom::Arg(x) = a { Some(x.clone()) } else { None }).collect();
    if !mods.is_empty() {
        let lat = modulus_lattice(&mods, default_bound(&mods));
        let rows: Vec<Vec<Rational>> = lat
            .basis
            .iter()
            .map(|v| v.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        let cols: Vec<Atom> = mods.iter().map(|x| Atom::LnAbs(x.clone())).collect();
        solve_relations(&rows, &cols, &mut map);
    }
    if !args.is_empty() {
        let lat = arg_congruence_lattice(&args, default_bound(&args));
        let rows: Vec<Vec<Rational>> = lat
            .basis
            .iter()
            .map(|v| {
                let k = arg_winding(&args, v);
                let mut r: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
                r.push(Rational::from_integer(-k * 2));
                r
            })
            .collect();
        let mut cols: Vec<Atom> = args.iter().map(|x| Atom::Arg(x.clone())).collect();
        cols.push(Atom::Pi);
        solve_relations(&rows, &cols, &mut map);
    }
    map
}

/// For linear relations `rows . cols = 0`, map each pivot atom to a linear
/// combination of the free ones.
fn solve_relations(rows: &[Vec<Rational>], cols: &[Atom], map: &mut BTreeMap<Atom, MPoly>) {
    if rows.is_empty() {
        return;
    }
    let m = RationalMatrix::from_rows(rows, &Rational::zero());
    let (r, pivots) = m.rref();
    for (i, &p) in pivots.iter().enumerate() {
        let mut e = MPoly::zero();
        for (j, a) in cols.iter().enumerate() {
            if j != p && !r[(i, j)].is_zero() {
                e = e.sub(&MPoly::atom(a.clone()).scale(&(&r[(i, j)] / &r[(i, p)])));
            }
        }
        map.insert(cols[p].clone(), e);
    }
}

/// Bits schedule for interval refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start_bits: 64, max_bits: 8192 }
    }
}

/// A sign verdict together with its certificate: for a nonzero sign, a
/// rational interval excluding zero that contains the value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCertificate {
    pub result: SignResult,
    pub enclosure: Option<(Rational, Rational)>,
}

/// Sign of an elementary number.
pub fn elem_sign(e: &ElementaryExpr, budget: &Precision) -> crate::Result<SignResult> {
    elem_sign_certified(e, budget).map(|c| c.result)
}

pub fn elem_sign_certified(e: &ElementaryExpr, budget: &Precision) -> crate::Result<SignCertificate> {
    if e.num.is_zero() {
        return Ok(SignCertificate { result: SignResult::exact(Sign::Zero), enclosure: None });
    }
    if let Some(c) = separate(e, budget.start_bits) {
        return Ok(c);
    }
    let nf = e.normal_form();
    if nf.den.is_zero() {
        return Err(crate::Error::InvalidInput("denominator vanishes identically".into()));
    }
    if nf.num.is_zero() {
        // the rewriting uses only verified exact relations
        return Ok(SignCertificate { result: SignResult::exact(Sign::Zero), enclosure: None });
    }
    let mut bits = budget.start_bits.max(16);
    while bits <= budget.max_bits {
        if let Some(c) = separate(&nf, bits) {
            return Ok(c);
        }
        bits *= 2;
    }
    Err(crate::Error::BudgetExhausted)
}

fn separate(e: &ElementaryExpr, bits: u32) -> Option<SignCertificate> {
    let v = e.interval(bits)?;
    let o = v.sign()?;
    Some(SignCertificate {
        result: SignResult::from_ordering(o),
        enclosure: Some((v.lo.to_rational(), v.hi.to_rational())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat;

    fn lg(n: i64) -> LogLinExpr {
        LogLinExpr::log(&AlgebraicNumber::from_int(n))
    }

    #[test]
    fn syntactic_cancellation() {
        let e = lg(2).sub(&lg(2)).re();
        let s = elem_sign(&e, &Precision::default()).unwrap();
        assert_eq!(s, SignResult { sign: Sign::Zero, conditional: false });
    }

    #[test]
    fn relation_cancellation() {
        let e = lg(4).sub(&lg(2).scale(&rat(2, 1))).re();
        assert!(!e.num.is_zero());
        let s = elem_sign(&e, &Precision::default()).unwrap();
        assert_eq!(s.sign, Sign::Zero);
        assert!(!s.conditional);
    }

    #[test]
    fn quotient_of_logs() {
        let q = lg(2).re().div(&lg(8).re());
        let e = q.sub(&ElementaryExpr::rational(rat(2, 3)));
        let c = elem_sign_certified(&e, &Precision::default()).unwrap();
        assert_eq!(c.result.sign, Sign::Negative);
        let (lo, hi) = c.enclosure.unwrap();
        let third = rat(-1, 3);
        assert!(lo <= third && third <= hi && hi < Rational::zero());
    }

    #[test]
    fn arguments_and_pi() {
        // Arg(-1) = pi; Arg(i) = pi/2
        let m1 = LogLinExpr::log(&AlgebraicNumber::from_int(-1)).im();
        let pi_e = ElementaryExpr::from_poly(MPoly::atom(Atom::Pi));
        assert_eq!(elem_sign(&m1.sub(&pi_e), &Precision::default()).unwrap().sign, Sign::Zero);
        let i = crate::num::algebraic::roots(&crate::num::PolyQ::from_ints(&[1, 0, 1]))[0].0.clone();
        let e = LogLinExpr::log(&i).im().scale2().sub(&pi_e);
        assert_eq!(elem_sign(&e, &Precision::default()).unwrap().sign, Sign::Zero);
    }

    impl ElementaryExpr {
        fn scale2(&self) -> Self {
            self.mul(&ElementaryExpr::rational(rat(2, 1)))
        }
    }
}
