//! Eigenstructure of rational matrices and simultaneous block
//! triangularization of commuting families.
//!
//! A generic combination `B = sum t_r A_r` separates the compatible tuples.
//! Each irreducible factor `g` of the characteristic polynomial of `B` gives a
//! class of blocks, computed once over `K = Q[x]/g`; the blocks of the class
//! are its `deg g` embeddings.

use crate::linalg::{Mat, RationalMatrix};
use crate::num::algebraic::AlgebraicNumber;
use crate::num::field::{lift_matrix, FieldElem, NumberField};
use crate::num::rational::Rational;
use crate::num::roots::factor;
use crate::{Error, Result};
use num_traits::One;
use std::sync::Arc;

type FMat = Mat<FieldElem>;

/// Data shared by the conjugate blocks of one irreducible factor.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub field: Arc<NumberField>,
    /// Size `e` of each block in the class.
    pub size: usize,
    /// `d x e`, columns span the generalized eigenspace.
    pub right: FMat,
    /// `e x d`, with `left * right = I`.
    pub left: FMat,
    /// Per generator: the eigenvalue and the strictly upper triangular part.
    pub eigenvalues: Vec<FieldElem>,
    pub nilpotent: Vec<FMat>,
}

impl ClassData {
    /// Block of generator `r` over `K`: `lambda I + N`.
    pub fn block(&self, r: usize) -> FMat {
        let id = FMat::identity(self.size, &self.eigenvalues[r]);
        id.scale(&self.eigenvalues[r]).add(&self.nilpotent[r])
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    pub class: usize,
    pub embedding: usize,
    /// One eigenvalue per generator.
    pub eigenvalues: Vec<AlgebraicNumber>,
    pub size: usize,
    /// First row/column of the block in the transformed coordinates.
    pub offset: usize,
}

/// `S A_r S^-1 = diag(lambda_rl I + N_rl)` for every generator.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub dim: usize,
    pub generators: usize,
    /// Per generator: distinct eigenvalues with algebraic multiplicity.
    pub eigenvalues: Vec<Vec<(AlgebraicNumber, usize)>>,
    pub classes: Vec<ClassData>,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleTuple {
    pub eigenvalues: Vec<AlgebraicNumber>,
    pub space_dimension: usize,
}

impl SpectralData {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// `S` with algebraic entries.
    pub fn transform(&self) -> Vec<Vec<AlgebraicNumber>> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let c = &self.classes[b.class];
            for i in 0..b.size {
                out.push(c.left.row(i).iter().map(|x| x.to_algebraic(b.embedding)).collect());
            }
        }
        out
    }

    /// `S^-1` with algebraic entries.
    pub fn inverse_transform(&self) -> Vec<Vec<AlgebraicNumber>> {
        let mut cols: Vec<Vec<AlgebraicNumber>> = Vec::new();
        for b in &self.blocks {
            let c = &self.classes[b.class];
            for j in 0..b.size {
                cols.push(c.right.col(j).iter().map(|x| x.to_algebraic(b.embedding)).collect());
            }
        }
        (0..self.dim).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// Exact check that the decomposition reproduces the inputs and that
    /// `S S^-1 = I`.
    pub fn verify(&self, mats: &[RationalMatrix]) -> bool {
        let d = self.dim;
        let mut id = RationalMatrix::zero_matrix(d, d);
        let mut recon: Vec<RationalMatrix> = mats.iter().map(|_| RationalMatrix::zero_matrix(d, d)).collect();
        for c in &self.classes {
            let one = FMat::identity(c.size, &FieldElem::from_rational(&c.field, Rational::one()));
            if c.left.mul(&c.right) != one {
                return false;
            }
            id = id.add(&trace_mat(&c.right.mul(&c.left)));
            for (r, acc) in recon.iter_mut().enumerate() {
                if c.nilpotent[r].pow(c.size as u64) != FMat::zeros(c.size, c.size, &one[(0, 0)]) {
                    return false;
                }
                for i in 0..c.size {
                    for j in 0..=i {
                        if !c.nilpotent[r][(i, j)].is_zero() {
                            return false;
                        }
                    }
                }
                *acc = acc.add(&trace_mat(&c.right.mul(&c.block(r)).mul(&c.left)));
            }
        }
        id == RationalMatrix::eye(d) && recon.iter().zip(mats).all(|(a, b)| a == b)
    }
}

/// Entrywise field trace.
fn trace_mat(m: &FMat) -> RationalMatrix {
    m.map(|x| x.trace())
}

fn check_family(mats: &[RationalMatrix]) -> Result<usize> {
    let Some(first) = mats.first() else { return Err(Error::InvalidInput("empty family".into())) };
    let d = first.rows();
    if d == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    for (i, m) in mats.iter().enumerate() {
        if !m.is_square() || m.rows() != d {
            return Err(Error::Dimension(format!("generator {i} is {}x{}, expected {d}x{d}", m.rows(), m.cols())));
        }
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if !mats[i].commutes_with(&mats[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    Ok(d)
}

pub fn eigen(m: &RationalMatrix) -> Result<SpectralData> {
    simultaneous_block_diagonalize(std::slice::from_ref(m))
}

pub fn simultaneous_block_diagonalize(mats: &[RationalMatrix]) -> Result<SpectralData> {
    let d = check_family(mats)?;
    for attempt in 0..64u64 {
        let t: Vec<Rational> =
            (0..mats.len()).map(|r| Rational::from_integer((attempt + 2).pow(r as u32).into())).collect();
        let mut b = RationalMatrix::zero_matrix(d, d);
        for (m, tr) in mats.iter().zip(&t) {
            b = b.add(&m.scale(tr));
        }
        if let Some(classes) = decompose(&b, mats) {
            return Ok(assemble(d, mats.len(), classes));
        }
    }
    Err(Error::NotDiagonalizable)
}

fn decompose(b: &RationalMatrix, mats: &[RationalMatrix]) -> Option<Vec<ClassData>> {
    let d = b.rows();
    let mut classes = Vec::new();
    for (g, e) in factor(&b.charpoly()) {
        let e = e as usize;
        let field = NumberField::new(&g);
        let mu = FieldElem::generator(&field);
        let one = FieldElem::from_rational(&field, Rational::one());
        let shifted = lift_matrix(b, &field).sub(&FMat::identity(d, &one).scale(&mu)).pow(e as u64);
        let right_cols = shifted.kernel();
        let left_rows = shifted.transpose().kernel();
        if right_cols.len() != e || left_rows.len() != e {
            return None;
        }
        let v = FMat::from_cols(&right_cols, &one);
        let u = FMat::from_rows(&left_rows, &one);
        let w = u.mul(&v).inverse()?.mul(&u);
        let mut lambdas = Vec::new();
        let mut nils = Vec::new();
        let inv_e = Rational::new(1.into(), (e as i64).into());
        for a in mats {
            let r = w.mul(&lift_matrix(a, &field)).mul(&v);
            let lam = r.trace().scale(&inv_e);
            let n = r.sub(&FMat::identity(e, &one).scale(&lam));
            if !n.pow(e as u64).is_zero() {
                return None;
            }
            lambdas.push(lam);
            nils.push(n);
        }
        let c = flag_basis(&nils, e, &one);
        let ci = c.inverse().expect("flag basis is invertible");
        let nils = nils.iter().map(|n| ci.mul(n).mul(&c)).collect();
        classes.push(ClassData {
            field: field.clone(),
            size: e,
            right: v.mul(&c),
            left: ci.mul(&w),
            eigenvalues: lambdas,
            nilpotent: nils,
        });
    }
    Some(classes)
}

/// Basis (as columns) in which every matrix of a commuting nilpotent family
/// is strictly upper triangular.
fn flag_basis(nils: &[FMat], e: usize, one: &FieldElem) -> FMat {
    let mut flag: Vec<Vec<FieldElem>> = Vec::new();
    while flag.len() < e {
        // rows whose common kernel is span(flag)
        let q = if flag.is_empty() {
            FMat::identity(e, one)
        } else {
            let ann = FMat::from_rows(&flag, one).kernel();
            FMat::from_rows(&ann, one)
        };
        let mut stacked: Vec<Vec<FieldElem>> = Vec::new();
        for n in nils {
            let qn = q.mul(n);
            stacked.extend((0..qn.rows()).map(|i| qn.row(i).to_vec()));
        }
        let next = if stacked.is_empty() {
            let id = FMat::identity(e, one);
            (0..e).map(|j| id.col(j)).collect()
        } else {
            FMat::from_rows(&stacked, one).kernel()
        };
        let before = flag.len();
        for v in next {
            let mut trial = flag.clone();
            trial.push(v.clone());
            if FMat::from_rows(&trial, one).rank() == trial.len() {
                flag = trial;
            }
        }
        assert!(flag.len() > before, "family is not nilpotent");
    }
    FMat::from_cols(&flag, one)
}

fn assemble(d: usize, k: usize, classes: Vec<ClassData>) -> SpectralData {
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (ci, c) in classes.iter().enumerate() {
        for emb in 0..c.field.degree() {
            let eig = c.eigenvalues.iter().map(|l| l.to_algebraic(emb)).collect();
            blocks.push(Block { class: ci, embedding: emb, eigenvalues: eig, size: c.size, offset });
            offset += c.size;
        }
    }
    debug_assert_eq!(offset, d);
    let mut eigenvalues: Vec<Vec<(AlgebraicNumber, usize)>> = vec![Vec::new(); k];
    for b in &blocks {
        for (r, l) in b.eigenvalues.iter().enumerate() {
            match eigenvalues[r].iter_mut().find(|(x, _)| x == l) {
                Some((_, m)) => *m += b.size,
                None => eigenvalues[r].push((l.clone(), b.size)),
            }
        }
    }
    SpectralData { dim: d, generators: k, eigenvalues, classes, blocks }
}

pub fn compatible_tuples(mats: &[RationalMatrix]) -> Result<Vec<CompatibleTuple>> {
    Ok(tuples_of(&simultaneous_block_diagonalize(mats)?))
}

pub fn tuples_of(data: &SpectralData) -> Vec<CompatibleTuple> {
    data.blocks
        .iter()
        .map(|b| CompatibleTuple { eigenvalues: b.eigenvalues.clone(), space_dimension: b.size })
        .collect()
}

/// Index of the unique one-dimensional block whose eigenvector can be scaled
/// to have all entries positive.
pub fn positive_eigenspace(data: &SpectralData) -> Option<usize> {
    let mut found = None;
    for (i, b) in data.blocks.iter().enumerate() {
        if b.size != 1 || !positive_vector(&data.classes[b.class].right.col(0), b.embedding) {
            continue;
        }
        if found.is_some() {
            return None;
        }
        found = Some(i);
    }
    found
}

/// Whether `v` under embedding `k` is a nonzero complex multiple of an
/// entrywise positive vector.
pub fn positive_vector(v: &[FieldElem], k: usize) -> bool {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else { return false };
    let inv = first.inv();
    v.iter().all(|x| x.mul(&inv).is_positive_real_at(k))
}
