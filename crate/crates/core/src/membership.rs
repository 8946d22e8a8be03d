//! Positive and non-negative membership for commuting families: does the
//! semigroup generated by `A_1..A_k` contain a positive (non-negative) matrix?
//!
//! Both problems reduce, per subset of generators, to an integer program over
//! logarithms of eigenvalues (see [`crate::iplog`]). Every Yes comes with a
//! product `(prod A_r^{m_r})^n` that is re-checked by exact multiplication.

use crate::iplog::{
    cone_integer_point, eliminate_congruence, fourier_motzkin, intersect, solve_iplog_with, substitute,
    verify_witness, ConeSystem, FmResult, IplogAnswer, Reduced,
};
use crate::lattice::{contains, identity, integer_kernel, reduce_basis, row_basis, IVec};
use crate::linalg::{Mat, RationalMatrix};
use crate::lrs::{eventually_positive, sign_set, Answer};
use crate::num::algebraic::{AlgExpr, AlgebraicNumber, Sign};
use crate::num::elementary::{ElementaryExpr, LogLinExpr, Precision};
use crate::num::field::FieldElem;
use crate::num::rational::Rational;
use crate::relations::{default_bound, multiplicative_lattice};
use crate::spectral::{positive_eigenspace, simultaneous_block_diagonalize, SpectralData};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipAnswer {
    /// `(prod_{r in subset} A_r^{exponents_r})^power` has the target sign.
    Yes { subset: Vec<usize>, exponents: Vec<u64>, power: u64 },
    No,
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub answer: MembershipAnswer,
    pub conditional: bool,
}

impl MembershipVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self.answer, MembershipAnswer::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        self.answer == MembershipAnswer::No
    }

    /// The witness matrix, if any.
    pub fn witness(&self, mats: &[RationalMatrix]) -> Option<RationalMatrix> {
        match &self.answer {
            MembershipAnswer::Yes { subset, exponents, power } => {
                let sub: Vec<RationalMatrix> = subset.iter().map(|&r| mats[r].clone()).collect();
                Some(product(&sub, exponents).pow(*power))
            }
            _ => None,
        }
    }
}

impl fmt::Display for MembershipAnswer {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            MembershipAnswer::Yes { subset, exponents, power } => {
                let s: Vec<String> = subset.iter().zip(exponents).map(|(r, m)| format!("A{}^{m}", r + 1)).collect();
                write!(f, "YES ({})^{power}", s.join(" "))
            }
            MembershipAnswer::No => write!(f, "NO"),
            MembershipAnswer::Unknown(r) => write!(f, "UNKNOWN ({r})"),
        }
    }
}

/// Dominating block chosen for each entry `(i, j)`.
pub type ChoiceFunction = BTreeMap<(usize, usize), usize>;

/// Top homogeneous part `h(m) = sum_s c_s m^s` of the polynomial coefficient
/// of block `block` in entry `(i, j)` of `(prod A_r^{m_r})^n`, as a function of
/// `m` after extracting `n^degree`.
#[derive(Clone, Debug)]
pub struct HomogeneousTop {
    pub block: usize,
    pub embedding: usize,
    pub degree: u32,
    /// Exponent vector and coefficient in the field of the block's class.
    pub terms: Vec<(Vec<u32>, FieldElem)>,
}

impl HomogeneousTop {
    pub fn is_homogeneous(&self) -> bool {
        self.terms.iter().all(|(s, _)| s.iter().sum::<u32>() == self.degree)
    }

    pub fn eval(&self, m: &[BigInt]) -> FieldElem {
        let mut acc = self.terms[0].1.scale(&Rational::zero());
        for (s, c) in &self.terms {
            let mut q = Rational::one();
            for (e, x) in s.iter().zip(m) {
                q *= Rational::from_integer(x.pow(*e));
            }
            acc = acc.add(&c.scale(&q));
        }
        acc
    }

    pub fn coefficients(&self) -> Vec<(Vec<u32>, AlgebraicNumber)> {
        self.terms.iter().map(|(s, c)| (s.clone(), c.to_algebraic(self.embedding))).collect()
    }

    /// Value at `m` is a positive real number.
    pub fn positive_at(&self, m: &[BigInt]) -> bool {
        self.eval(m).is_positive_real_at(self.embedding)
    }

    /// Real coefficients of a linear form.
    fn real_linear(&self, k: usize) -> Option<Vec<AlgebraicNumber>> {
        if self.degree != 1 {
            return None;
        }
        let mut out = vec![AlgebraicNumber::from_int(0); k];
        for (s, c) in &self.terms {
            let a = c.to_algebraic(self.embedding);
            if !a.is_real() {
                return None;
            }
            out[s.iter().position(|&e| e == 1).unwrap()] = a;
        }
        Some(out)
    }
}

/// `h^{ij}_l`, or `None` when block `l` contributes nothing to entry `(i, j)`
/// for large `n` (zero coefficient polynomial, or a zero eigenvalue).
pub fn homogeneous_top(data: &SpectralData, i: usize, j: usize, l: usize) -> Option<HomogeneousTop> {
    let poly = block_poly(data, i, j, l);
    let degree = poly.iter().map(|(s, _)| s.iter().sum::<u32>()).max()?;
    let terms = poly.into_iter().filter(|(s, _)| s.iter().sum::<u32>() == degree).collect();
    Some(HomogeneousTop { block: l, embedding: data.blocks[l].embedding, degree, terms })
}

/// Nonzero coefficients `c_s = V (N/lambda)^s W / s!` of the polynomial
/// coefficient of block `l` in entry `(i, j)`, all degrees.
fn block_poly(data: &SpectralData, i: usize, j: usize, l: usize) -> Vec<(Vec<u32>, FieldElem)> {
    let b = &data.blocks[l];
    let c = &data.classes[b.class];
    if c.eigenvalues.iter().any(|x| x.is_zero()) {
        return vec![];
    }
    let k = data.generators;
    let e = c.size;
    let one = FieldElem::from_rational(&c.field, Rational::one());
    let scaled: Vec<Mat<FieldElem>> =
        (0..k).map(|r| c.nilpotent[r].scale(&c.eigenvalues[r].inv())).collect();
    let row = c.right.row(i).to_vec();
    let col = c.left.col(j);
    let mut terms = Vec::new();
    // products of e strictly upper triangular matrices vanish
    for deg in (0..e as u32).rev() {
        for s in compositions(deg, k) {
            let mut x = Mat::identity(e, &one);
            let mut fact = BigInt::one();
            for (r, &sr) in s.iter().enumerate() {
                if sr > 0 {
                    x = x.mul(&scaled[r].pow(sr as u64));
                    fact *= (1..=sr).map(BigInt::from).product::<BigInt>();
                }
            }
            let xv = x.mul_vec(&col);
            let mut v = one.scale(&Rational::zero());
            for (a, w) in row.iter().zip(&xv) {
                v = v.add(&a.mul(w));
            }
            if !v.is_zero() {
                terms.push((s, v.scale(&Rational::new(BigInt::one(), fact))));
            }
        }
    }
    terms
}

/// Vectors of `k` non-negative integers summing to `n`.
fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Configuration for the general non-negative search.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Radius of the integer grid around multiples of the cone interior point.
    pub radius: i64,
    /// Largest multiple of the interior point tried.
    pub depth: i64,
    pub precision: Precision,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { radius: 2, depth: 4, precision: Precision::default() }
    }
}

enum Outcome {
    Yes(IVec),
    No,
    Unknown(String),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Positive,
    Nonnegative,
}

fn product(mats: &[RationalMatrix], m: &[u64]) -> RationalMatrix {
    let d = mats[0].rows();
    mats.iter().zip(m).fold(RationalMatrix::eye(d), |acc, (a, &e)| acc.mul(&a.pow(e)))
}

/// Nonempty subsets, largest first, then lexicographic.
fn subsets(k: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> =
        (1u64..1 << k).map(|mask| (0..k).filter(|r| mask >> r & 1 == 1).collect()).collect();
    all.sort_by(|a: &Vec<usize>, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    all
}

fn validate(mats: &[RationalMatrix]) -> Result<SpectralData> {
    if mats.len() > 16 {
        return Err(Error::InvalidInput("at most 16 generators are supported".into()));
    }
    simultaneous_block_diagonalize(mats)
}

fn run<F>(mats: &[RationalMatrix], target: Target, decide: F) -> Result<MembershipVerdict>
where
    F: Fn(&[RationalMatrix]) -> Result<Outcome>,
{
    let mut unknown: Option<String> = None;
    for subset in subsets(mats.len()) {
        let sub: Vec<RationalMatrix> = subset.iter().map(|&r| mats[r].clone()).collect();
        match decide(&sub)? {
            Outcome::Yes(x) => match certify(&sub, &x, target)? {
                Some((exponents, power)) => {
                    return Ok(MembershipVerdict {
                        answer: MembershipAnswer::Yes { subset, exponents, power },
                        conditional: false,
                    })
                }
                None => unknown = unknown.or(Some("witness failed exact verification".into())),
            },
            Outcome::No => {}
            Outcome::Unknown(r) => unknown = unknown.or(Some(r)),
        }
    }
    let answer = match unknown {
        Some(r) => MembershipAnswer::Unknown(r),
        None => MembershipAnswer::No,
    };
    Ok(MembershipVerdict { answer, conditional: false })
}

/// Turn exponents `m` into `(m / g, n g)` with a verified power `n`.
fn certify(mats: &[RationalMatrix], x: &[BigInt], target: Target) -> Result<Option<(Vec<u64>, u64)>> {
    let Some(m) = x.iter().map(|v| v.to_u64().filter(|&e| e > 0)).collect::<Option<Vec<u64>>>() else {
        return Ok(None);
    };
    let p = product(mats, &m);
    let n = match target {
        Target::Positive => {
            let v = eventually_positive(&p)?;
            if v.answer != Answer::Yes {
                return Ok(None);
            }
            let onset = v.onset.unwrap();
            let mut pw = p.clone();
            let mut n = 1;
            while n < onset && !pw.is_positive() {
                pw = pw.mul(&p);
                n += 1;
            }
            n
        }
        Target::Nonnegative => match sign_set(&p)?.min() {
            Some(n) => n,
            None => return Ok(None),
        },
    };
    let g = m.iter().fold(0u64, |g, &e| g.gcd(&e));
    let m: Vec<u64> = m.iter().map(|e| e / g).collect();
    let n = n * g;
    let w = product(mats, &m).pow(n);
    let ok = match target {
        Target::Positive => w.is_positive(),
        Target::Nonnegative => w.is_nonnegative(),
    };
    Ok(ok.then_some((m, n)))
}

/// `Re(log a_r - log b_r)` for every generator.
fn ratio_row(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Vec<ElementaryExpr> {
    a.iter().zip(b).map(|(x, y)| LogLinExpr::log(x).sub(&LogLinExpr::log(y)).re()).collect()
}

fn arg_congruence(b: &[AlgebraicNumber]) -> Vec<LogLinExpr> {
    b.iter().map(LogLinExpr::log).collect()
}

fn has_zero(t: &[AlgebraicNumber]) -> bool {
    t.iter().any(|x| x.is_zero())
}

fn iplog_outcome(sys: &ConeSystem, prec: &Precision) -> Outcome {
    match solve_iplog_with(sys, prec).answer {
        IplogAnswer::Yes(x) => Outcome::Yes(x),
        IplogAnswer::No => Outcome::No,
        IplogAnswer::Unknown(r) => Outcome::Unknown(r),
    }
}

/// Is some product of the generators strictly positive?
pub fn positive_membership(mats: &[RationalMatrix]) -> Result<MembershipVerdict> {
    positive_membership_with(mats, &Precision::default())
}

pub fn positive_membership_with(mats: &[RationalMatrix], prec: &Precision) -> Result<MembershipVerdict> {
    validate(mats)?;
    run(mats, Target::Positive, |sub| positive_subset(sub, prec))
}

fn positive_subset(mats: &[RationalMatrix], prec: &Precision) -> Result<Outcome> {
    let data = simultaneous_block_diagonalize(mats)?;
    let tr: Vec<RationalMatrix> = mats.iter().map(|a| a.transpose()).collect();
    let data_t = simultaneous_block_diagonalize(&tr)?;
    let (Some(p), Some(pt)) = (positive_eigenspace(&data), positive_eigenspace(&data_t)) else {
        return Ok(Outcome::No);
    };
    let lp = &data.blocks[p].eigenvalues;
    if *lp != data_t.blocks[pt].eigenvalues || has_zero(lp) {
        return Ok(Outcome::No);
    }
    let k = mats.len();
    let mut sys = ConeSystem::new(k);
    sys.push_congruence(arg_congruence(lp))?;
    for (l, b) in data.blocks.iter().enumerate() {
        // a zero eigenvalue makes the product eigenvalue zero
        if l != p && !has_zero(&b.eigenvalues) {
            sys.push_row(ratio_row(&b.eigenvalues, lp))?;
        }
    }
    sys.add_positivity();
    Ok(iplog_outcome(&sys, prec))
}

/// Non-negative membership for simultaneously diagonalizable families.
pub fn nonnegative_membership_diag(mats: &[RationalMatrix]) -> Result<MembershipVerdict> {
    let data = validate(mats)?;
    if data.blocks.iter().any(|b| b.size != 1) {
        return Err(Error::NotDiagonalizable);
    }
    let budget = SearchBudget::default();
    run(mats, Target::Nonnegative, |sub| enn_subset(sub, &budget))
}

/// Non-negative membership for arbitrary commuting families. A semi-decision:
/// the polynomial side conditions are searched for within `budget`.
pub fn nonnegative_membership_general(mats: &[RationalMatrix], budget: &SearchBudget) -> Result<MembershipVerdict> {
    validate(mats)?;
    run(mats, Target::Nonnegative, |sub| enn_subset(sub, budget))
}

/// Top part of the summed polynomial coefficients of a class of blocks whose
/// product eigenvalues coincide on the lattice under consideration.
#[derive(Clone)]
struct Top {
    class: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, AlgExpr)>,
    single: Option<HomogeneousTop>,
}

impl Top {
    fn value(&self, m: &[BigInt]) -> AlgExpr {
        let terms: Vec<(Vec<u32>, AlgExpr)> = match &self.single {
            Some(h) => h.coefficients().into_iter().map(|(s, c)| (s, c.leaf())).collect(),
            None => self.terms.clone(),
        };
        let mut v = AlgExpr::rat(Rational::zero());
        for (s, c) in terms {
            let mut q = Rational::one();
            for (e, x) in s.iter().zip(m) {
                q *= Rational::from_integer(x.pow(*e));
            }
            v = v.add(c.mul(AlgExpr::rat(q)));
        }
        v
    }

    fn positive_at(&self, m: &[BigInt]) -> bool {
        if let Some(h) = &self.single {
            return h.positive_at(m);
        }
        let v = self.value(m);
        v.clone().sub(v.clone().conj()).is_zero() && v.sign() == Sign::Positive
    }

    fn real_linear(&self, k: usize) -> Option<Vec<AlgebraicNumber>> {
        self.single.as_ref()?.real_linear(k)
    }
}

fn class_top(data: &SpectralData, i: usize, j: usize, class: usize, blocks: &[usize]) -> Option<Top> {
    if let [l] = blocks {
        let h = homogeneous_top(data, i, j, *l)?;
        return Some(Top { class, degree: h.degree, terms: vec![], single: Some(h) });
    }
    let mut sums: BTreeMap<Vec<u32>, AlgExpr> = BTreeMap::new();
    for &l in blocks {
        let emb = data.blocks[l].embedding;
        for (s, c) in block_poly(data, i, j, l) {
            let a = c.to_algebraic(emb).leaf();
            let e = match sums.remove(&s) {
                Some(x) => x.add(a),
                None => a,
            };
            sums.insert(s, e);
        }
    }
    let top = sums.keys().map(|s| s.iter().sum::<u32>()).max()?;
    for degree in (0..=top).rev() {
        let terms: Vec<(Vec<u32>, AlgExpr)> = sums
            .iter()
            .filter(|(s, c)| s.iter().sum::<u32>() == degree && !c.is_zero())
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect();
        if !terms.is_empty() {
            return Some(Top { class, degree, terms, single: None });
        }
    }
    None
}

/// `{m : prod_r (a_r / b_r)^{m_r} = 1}` and whether the relation search was
/// exhaustive.
fn ratio_lattice(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> (Vec<IVec>, bool) {
    let k = a.len();
    let mut nums: Vec<AlgebraicNumber> = Vec::new();
    let mut phi: Vec<IVec> = Vec::new();
    for r in 0..k {
        for (x, sgn) in [(&a[r], 1), (&b[r], -1)] {
            let t = match nums.iter().position(|y| y == x) {
                Some(t) => t,
                None => {
                    nums.push(x.clone());
                    phi.push(vec![BigInt::zero(); k]);
                    nums.len() - 1
                }
            };
            phi[t][r] += sgn;
        }
    }
    let rel = multiplicative_lattice(&nums, default_bound(&nums));
    // m with phi m in the relation lattice
    let rows: Vec<IVec> = (0..nums.len())
        .map(|t| phi[t].iter().cloned().chain(rel.basis.iter().map(|v| -v[t].clone())).collect())
        .collect();
    let ker = integer_kernel(&rows, k + rel.basis.len());
    let gens: Vec<IVec> = ker.iter().map(|v| v[..k].to_vec()).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    if gens.is_empty() {
        return (vec![], rel.certified_exhaustive);
    }
    (reduce_basis(&row_basis(&gens)), rel.certified_exhaustive)
}

fn same_lattice(a: &[IVec], b: &[IVec]) -> bool {
    a.len() == b.len() && a.iter().all(|v| contains(b, v)) && b.iter().all(|v| contains(a, v))
}

/// Blocks whose product eigenvalues agree on all of `lattice`.
fn merge_classes(live: &[usize], pairs: &[((usize, usize), Vec<IVec>)], lattice: &[IVec]) -> Vec<Vec<usize>> {
    let mut parent: BTreeMap<usize, usize> = live.iter().map(|&l| (l, l)).collect();
    fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let y = p[&x];
        if y == x {
            return x;
        }
        let r = find(p, y);
        p.insert(x, r);
        r
    }
    for ((a, b), lat) in pairs {
        if lattice.iter().all(|v| contains(lat, v)) {
            let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
            parent.insert(ra.max(rb), ra.min(rb));
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &l in live {
        let r = find(&mut parent, l);
        classes.entry(r).or_default().push(l);
    }
    classes.into_values().collect()
}

const MAX_LATTICES: usize = 256;

/// Entries sharing a support set must share the dominating class.
struct Group {
    support: Vec<usize>,
    candidates: Vec<usize>,
    entries: Vec<(usize, usize)>,
}

/// The dominance conditions restricted to exponents in one lattice.
struct Enn<'a> {
    data: &'a SpectralData,
    /// Columns spanning the exponents `m` under consideration.
    lattice: Vec<IVec>,
    full: bool,
    /// Representative block of each class.
    reps: Vec<usize>,
    tops: BTreeMap<(usize, usize), Vec<Top>>,
    groups: Vec<Group>,
    budget: &'a SearchBudget,
    unknown: Option<String>,
}

fn enn_subset(mats: &[RationalMatrix], budget: &SearchBudget) -> Result<Outcome> {
    let data = simultaneous_block_diagonalize(mats)?;
    let k = data.generators;
    // blocks with a zero eigenvalue vanish for n >= 1
    let live: Vec<usize> = (0..data.blocks.len()).filter(|&l| !has_zero(&data.blocks[l].eigenvalues)).collect();
    let mut exhaustive = true;
    let mut pairs = Vec::new();
    for (x, &a) in live.iter().enumerate() {
        for &b in &live[x + 1..] {
            let (lat, cert) = ratio_lattice(&data.blocks[a].eigenvalues, &data.blocks[b].eigenvalues);
            exhaustive &= cert;
            if !lat.is_empty() {
                pairs.push(((a, b), lat));
            }
        }
    }
    // exponents where some product eigenvalues coincide
    let mut lattices = vec![identity(k)];
    let mut next = 0;
    while next < lattices.len() {
        for (_, p) in &pairs {
            let x = intersect(&lattices[next], p, k);
            if !x.is_empty() && !lattices.iter().any(|y| same_lattice(y, &x)) {
                if lattices.len() == MAX_LATTICES {
                    return Ok(Outcome::Unknown("too many eigenvalue coincidences".into()));
                }
                lattices.push(x);
            }
        }
        next += 1;
    }
    let mut unknown = None;
    for (t, lattice) in lattices.into_iter().enumerate() {
        let classes = merge_classes(&live, &pairs, &lattice);
        if let Some(mut enn) = Enn::new(&data, lattice, t == 0, classes, budget) {
            if let Some(x) = enn.search(&mut Vec::new())? {
                return Ok(Outcome::Yes(x));
            }
            unknown = unknown.or(enn.unknown);
        }
    }
    if !exhaustive {
        unknown = unknown.or(Some("eigenvalue relation search was not exhaustive".into()));
    }
    Ok(unknown.map_or(Outcome::No, Outcome::Unknown))
}

impl<'a> Enn<'a> {
    /// `None` when some entry has no admissible dominating class.
    fn new(
        data: &'a SpectralData,
        lattice: Vec<IVec>,
        full: bool,
        classes: Vec<Vec<usize>>,
        budget: &'a SearchBudget,
    ) -> Option<Self> {
        let d = data.dim;
        let zeros = vec![BigInt::zero(); data.generators];
        let mut tops = BTreeMap::new();
        let mut by_support: BTreeMap<Vec<usize>, Group> = BTreeMap::new();
        for i in 0..d {
            for j in 0..d {
                let hs: Vec<Top> =
                    classes.iter().enumerate().filter_map(|(c, bl)| class_top(data, i, j, c, bl)).collect();
                if hs.is_empty() {
                    continue;
                }
                let support: Vec<usize> = hs.iter().map(|h| h.class).collect();
                // constant tops must be positive; others are checked later
                let cands: BTreeSet<usize> =
                    hs.iter().filter(|h| h.degree > 0 || h.positive_at(&zeros)).map(|h| h.class).collect();
                let g = by_support.entry(support.clone()).or_insert_with(|| Group {
                    support,
                    candidates: cands.iter().copied().collect(),
                    entries: vec![],
                });
                g.candidates.retain(|p| cands.contains(p));
                g.entries.push((i, j));
                tops.insert((i, j), hs);
            }
        }
        let groups: Vec<Group> = by_support.into_values().collect();
        if groups.iter().any(|g| g.candidates.is_empty()) {
            return None;
        }
        let reps = classes.iter().map(|c| c[0]).collect();
        Some(Enn { data, lattice, full, reps, tops, groups, budget, unknown: None })
    }

    fn k(&self) -> usize {
        self.data.generators
    }

    fn eigenvalues(&self, class: usize) -> &[AlgebraicNumber] {
        &self.data.blocks[self.reps[class]].eigenvalues
    }

    fn top(&self, e: (usize, usize), p: usize) -> &Top {
        self.tops[&e].iter().find(|h| h.class == p).unwrap()
    }

    fn search(&mut self, choice: &mut Vec<usize>) -> Result<Option<IVec>> {
        let g = choice.len();
        if g == self.groups.len() {
            return self.solve(choice);
        }
        for p in self.groups[g].candidates.clone() {
            // two strict maxima over overlapping supports must agree
            let clash = choice.iter().enumerate().any(|(h, &q)| {
                q != p && self.groups[h].support.contains(&p) && self.groups[g].support.contains(&q)
            });
            if clash {
                continue;
            }
            choice.push(p);
            let (red, _) = self.system(choice, false)?;
            let prune =
                matches!(fourier_motzkin(&red.system, &self.budget.precision), Ok((FmResult::Infeasible, _)));
            if !prune {
                if let Some(x) = self.search(choice)? {
                    return Ok(Some(x));
                }
            }
            choice.pop();
        }
        Ok(None)
    }

    /// Conditions for a (partial) choice over lattice coordinates `y`, with
    /// `m = B y`, and the remaining polynomial conditions on `m`.
    fn system(&self, choice: &[usize], congruences: bool) -> Result<(Reduced, Vec<Top>)> {
        let k = self.k();
        let mut sys = ConeSystem::new(k);
        let mut pairs = BTreeSet::new();
        let mut nonlinear = Vec::new();
        for (g, &p) in self.groups.iter().zip(choice) {
            for &l in &g.support {
                if l != p && pairs.insert((l, p)) {
                    sys.push_row(ratio_row(self.eigenvalues(l), self.eigenvalues(p)))?;
                }
            }
            for &e in &g.entries {
                let h = self.top(e, p);
                if h.degree == 0 {
                    continue;
                }
                match h.real_linear(k) {
                    // a form vanishing on the lattice says nothing about lower terms
                    Some(c) if self.full || !self.lattice.iter().all(|v| h.value(v).is_zero()) => {
                        sys.push_row(c.iter().map(|a| ElementaryExpr::algebraic(&a.neg())).collect())?
                    }
                    _ => nonlinear.push(h.clone()),
                }
            }
        }
        sys.add_positivity();
        if congruences {
            let ps: BTreeSet<usize> = choice.iter().copied().collect();
            for p in ps {
                sys.push_congruence(arg_congruence(self.eigenvalues(p)))?;
            }
        }
        Ok((substitute(&sys, &self.lattice), nonlinear))
    }

    fn solve(&mut self, choice: &[usize]) -> Result<Option<IVec>> {
        let (red, nonlinear) = self.system(choice, true)?;
        let prec = &self.budget.precision;
        if nonlinear.is_empty() {
            return Ok(match iplog_outcome(&red.system, prec) {
                Outcome::Yes(y) => Some(red.lift(&y)),
                Outcome::No => None,
                Outcome::Unknown(r) => {
                    self.unknown.get_or_insert(r);
                    None
                }
            });
        }
        let inner = match eliminate_congruence(&red.system) {
            Ok(r) => r,
            Err(e) => {
                self.unknown.get_or_insert(e.to_string());
                return Ok(None);
            }
        };
        let point = match fourier_motzkin(&inner.system, prec) {
            Ok((FmResult::Feasible(p), _)) => p,
            Ok((FmResult::Infeasible, _)) => return Ok(None),
            Err(e) => {
                self.unknown.get_or_insert(e.to_string());
                return Ok(None);
            }
        };
        match self.grid(&red, &inner, &point, &nonlinear)? {
            Some(x) => Ok(Some(x)),
            None => {
                self.unknown.get_or_insert(format!(
                    "search exhausted (radius {}, depth {})",
                    self.budget.radius, self.budget.depth
                ));
                Ok(None)
            }
        }
    }

    /// Integer points `t z0 + e` near rays of the cone, checked exactly.
    fn grid(&self, red: &Reduced, inner: &Reduced, point: &[Rational], nonlinear: &[Top]) -> Result<Option<IVec>> {
        let z0 = cone_integer_point(point);
        let l = z0.len();
        let r = self.budget.radius;
        let offsets: Vec<IVec> = {
            let mut v: Vec<IVec> = vec![vec![]];
            for _ in 0..l {
                v = v.into_iter().flat_map(|p| (-r..=r).map(move |c| [p.clone(), vec![BigInt::from(c)]].concat())).collect();
            }
            v.sort_by_key(|p| p.iter().map(|x| x.abs()).sum::<BigInt>());
            v
        };
        for t in 1..=self.budget.depth {
            for e in &offsets {
                let z: IVec = z0.iter().zip(e).map(|(a, b)| a * t + b).collect();
                let x = red.lift(&inner.lift(&z));
                if x.iter().any(|v| !v.is_positive()) || !nonlinear.iter().all(|h| h.positive_at(&x)) {
                    continue;
                }
                if verify_witness(&inner.system, &z, &self.budget.precision)? {
                    return Ok(Some(x));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_ints(rows)
    }

    fn yes(v: &MembershipVerdict) -> (Vec<usize>, Vec<u64>, u64) {
        match &v.answer {
            MembershipAnswer::Yes { subset, exponents, power } => (subset.clone(), exponents.clone(), *power),
            a => panic!("expected Yes, got {a}"),
        }
    }

    #[test]
    fn positive_examples() {
        let a = [m(&[&[1, 2], &[2, 1]])];
        assert_eq!(yes(&positive_membership(&a).unwrap()), (vec![0], vec![1], 1));
        let b = [m(&[&[0, 2], &[2, 0]]), m(&[&[1, 1], &[1, 1]])];
        let v = positive_membership(&b).unwrap();
        assert_eq!(yes(&v), (vec![0, 1], vec![1, 1], 1));
        assert!(v.witness(&b).unwrap().is_positive());
        assert!(positive_membership(&[m(&[&[2, 0], &[0, 3]])]).unwrap().is_no());
    }

    #[test]
    fn nonnegative_diag_examples() {
        let (_, e, n) = yes(&nonnegative_membership_diag(&[m(&[&[-1]])]).unwrap());
        assert_eq!((e, n), (vec![1], 2));
        let rot = RationalMatrix::parse(&[
            vec!["3/5".into(), "-4/5".into()],
            vec!["4/5".into(), "3/5".into()],
        ])
        .unwrap();
        assert!(nonnegative_membership_diag(&[rot]).unwrap().is_no());
        let f = [m(&[&[1, 0], &[0, -1]]), m(&[&[-1, 0], &[0, 1]])];
        let v = nonnegative_membership_diag(&f).unwrap();
        assert_eq!(yes(&v), (vec![0, 1], vec![1, 1], 2));
        assert!(v.witness(&f).unwrap().is_nonnegative());
    }

    #[test]
    fn diag_rejects_jordan() {
        assert_eq!(nonnegative_membership_diag(&[m(&[&[1, 1], &[0, 1]])]), Err(Error::NotDiagonalizable));
    }

    #[test]
    fn general_examples() {
        let b = SearchBudget::default();
        let (_, e, n) = yes(&nonnegative_membership_general(&[m(&[&[1, 1], &[0, 1]])], &b).unwrap());
        assert_eq!((e, n), (vec![1], 1));
        assert!(nonnegative_membership_general(&[m(&[&[1, -1], &[0, 1]])], &b).unwrap().is_no());
        assert!(nonnegative_membership_general(&[m(&[&[-1]])], &b).unwrap().is_yes());
    }

    #[test]
    fn tops() {
        let d = simultaneous_block_diagonalize(&[m(&[&[1, 0], &[0, 3]])]).unwrap();
        for l in 0..2 {
            let h = homogeneous_top(&d, 0, 0, l);
            assert_eq!(h.is_some(), d.blocks[l].eigenvalues[0] == AlgebraicNumber::from_int(1));
        }
        let j = simultaneous_block_diagonalize(&[m(&[&[2, 1], &[0, 2]])]).unwrap();
        let h = homogeneous_top(&j, 0, 1, 0).unwrap();
        assert_eq!(h.degree, 1);
        assert!(h.is_homogeneous());
        assert_eq!(h.coefficients()[0].1, AlgebraicNumber::from_rational(Rational::new(1.into(), 2.into())));
        let two = simultaneous_block_diagonalize(&[m(&[&[2, 1], &[0, 2]]), m(&[&[2, 1], &[0, 2]])]).unwrap();
        let h = homogeneous_top(&two, 0, 1, 0).unwrap();
        let c = h.coefficients();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, c[1].1);
    }

    #[test]
    fn coinciding_product_eigenvalues() {
        // eigenvalues -2, 2 collide in even powers: A_1^2 = 4I
        let a = [m(&[&[-2, -2], &[0, 2]]), m(&[&[6, -4], &[0, 14]])];
        let v = nonnegative_membership_diag(&a).unwrap();
        assert!(v.is_yes(), "{}", v.answer);
        assert!(v.witness(&a).unwrap().is_nonnegative());
        let r = nonnegative_membership_diag(&[m(&[&[-1, 1], &[0, 1]])]).unwrap();
        assert!(r.is_yes(), "{}", r.answer);
    }
}
