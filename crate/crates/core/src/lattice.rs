//! Integer lattices: LLL reduction, integer kernels, saturation.

use crate::num::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IVec = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram-Schmidt data: `mu` coefficients and squared norms of `b*_i`.
pub fn gram_schmidt(b: &[IVec]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = b.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut bstar: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Rational> = b[i].iter().map(|x| Rational::from_integer(x.clone())).collect();
        for j in 0..i {
            if norms[j] == Rational::zero() {
                continue;
            }
            let num: Rational = b[i].iter().zip(&bstar[j]).map(|(x, y)| Rational::from_integer(x.clone()) * y).sum();
            let m = num / &norms[j];
            for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                *vk -= &m * bk;
            }
            mu[i][j] = m;
        }
        let nn: Rational = v.iter().map(|x| x * x).sum();
        norms.push(nn);
        bstar.push(v);
    }
    (mu, norms)
}

/// LLL reduction (`delta = 3/4`) of linearly independent integer vectors.
pub fn lll(basis: &[IVec]) -> Vec<IVec> {
    let mut b: Vec<IVec> = basis.to_vec();
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        assert!(guard < 1_000_000, "LLL failed to terminate");
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = mu[k][j].round().to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = Rational::from_integer(q);
                for l in 0..=j {
                    let t = if l == j { Rational::one() } else { mu[j][l].clone() };
                    mu[k][l] = &mu[k][l] - &qr * t;
                }
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (m2, n2) = gram_schmidt(&b);
            mu = m2;
            norms = n2;
            k = (k - 1).max(1);
        }
    }
    b
}

/// Lattice basis of the integer row span of `gens` (any dimension), in
/// Hermite-like echelon form.
pub fn row_basis(gens: &[IVec]) -> Vec<IVec> {
    let mut rows: Vec<IVec> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let Some(n) = rows.first().map(|r| r.len()) else { return vec![] };
    let mut out = Vec::new();
    for c in 0..n {
        // gcd-reduce column c among the remaining rows
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pr = rows[p].clone();
            for &i in &nz {
                if i != p {
                    let q = rows[i][c].div_floor(&pr[c]);
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            let mut r = rows.remove(p);
            if r[c].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let c = out[i].iter().position(|x| !x.is_zero()).unwrap();
        for k in 0..i {
            let q = out[k][c].div_floor(&out[i][c]);
            if !q.is_zero() {
                let r = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(&r) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// Basis of `{x in Z^n : A x = 0}` for an integer matrix given by rows.
pub fn integer_kernel(rows: &[IVec], n: usize) -> Vec<IVec> {
    // row-reduce [A^T | I] over the integers; rows with zero left part span the kernel
    let m = rows.len();
    let mut aug: Vec<IVec> = (0..n)
        .map(|j| {
            let mut v: IVec = rows.iter().map(|r| r[j].clone()).collect();
            v.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let mut done = 0;
    for c in 0..m {
        loop {
            let nz: Vec<usize> = (done..n).filter(|&i| !aug[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| aug[i][c].abs()).unwrap();
            let pr = aug[p].clone();
            for &i in &nz {
                if i != p {
                    let q = aug[i][c].div_floor(&pr[c]);
                    for (x, y) in aug[i].iter_mut().zip(&pr) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(p) = (done..n).find(|&i| !aug[i][c].is_zero()) {
            aug.swap(done, p);
            done += 1;
        }
    }
    let ker: Vec<IVec> = aug[done..].iter().map(|r| r[m..].to_vec()).collect();
    reduce_basis(&ker)
}

/// LLL-reduce a basis (no-op on empty input).
pub fn reduce_basis(b: &[IVec]) -> Vec<IVec> {
    if b.is_empty() {
        return vec![];
    }
    lll(b)
}

/// Basis of the saturation `span_Q(vectors) ∩ Z^n`.
pub fn saturate(vectors: &[IVec], n: usize) -> Vec<IVec> {
    if vectors.is_empty() {
        return vec![];
    }
    let perp = integer_kernel(vectors, n);
    if perp.is_empty() {
        return identity(n);
    }
    integer_kernel(&perp, n)
}

pub fn identity(n: usize) -> Vec<IVec> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Rank of the lattice generated by `b`.
pub fn rank(b: &[IVec]) -> usize {
    row_basis(b).len()
}

/// Coordinates of `v` in the lattice basis `b`, if `v` lies in the lattice.
pub fn coordinates(b: &[IVec], v: &IVec) -> Option<IVec> {
    if b.is_empty() {
        return if v.iter().all(|x| x.is_zero()) { Some(vec![]) } else { None };
    }
    use crate::linalg::Mat;
    let n = v.len();
    let cols: Vec<Vec<Rational>> =
        b.iter().map(|bi| bi.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let m = Mat::from_cols(&cols, &Rational::zero());
    let rhs: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
    let x = m.solve(&rhs)?;
    if !x.iter().all(|c| c.is_integer()) {
        return None;
    }
    let xi: IVec = x.iter().map(|c| c.to_integer()).collect();
    // check (solve returns a particular solution; basis independent so it is unique)
    let back: IVec = (0..n).map(|k| b.iter().zip(&xi).map(|(bi, c)| &bi[k] * c).sum()).collect();
    if &back == v {
        Some(xi)
    } else {
        None
    }
}

pub fn contains(b: &[IVec], v: &IVec) -> bool {
    coordinates(b, v).is_some()
}

/// Covolume `sqrt(det Gram)` of an integer basis whose Gram determinant is a
/// perfect square (for a full-rank square basis: the index in `Z^n`).
pub fn index_full(b: &[IVec]) -> BigInt {
    let n = b.len();
    if n == 0 {
        return BigInt::one();
    }
    let (_, norms) = gram_schmidt(b);
    let g: Rational = norms.iter().product();
    // g = det^2
    let d = g.to_integer().sqrt();
    d.abs()
}

pub fn to_ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    dot(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_reduces() {
        let b = vec![to_ivec(&[1, 1, 1]), to_ivec(&[-1, 0, 2]), to_ivec(&[3, 5, 6])];
        let r = lll(&b);
        assert_eq!(index_full(&r), index_full(&b));
        let (_, norms) = gram_schmidt(&r);
        assert!(norms[0] <= Rational::from_integer(BigInt::from(3)));
    }

    #[test]
    fn kernel_and_saturation() {
        // x + 2y + 3z = 0
        let k = integer_kernel(&[to_ivec(&[1, 2, 3])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot(v, &to_ivec(&[1, 2, 3])).is_zero());
        }
        // saturation of 3*(1,1) is (1,1)
        let s = saturate(&[to_ivec(&[3, 3])], 2);
        assert_eq!(s.len(), 1);
        assert!(contains(&s, &to_ivec(&[1, 1])));
        // {(1,1),(0,3)} has index 3
        assert_eq!(index_full(&[to_ivec(&[1, 1]), to_ivec(&[0, 3])]), BigInt::from(3));
    }

    #[test]
    fn row_basis_of_generators() {
        let g = vec![to_ivec(&[2, 0]), to_ivec(&[0, 2]), to_ivec(&[1, 1])];
        let b = row_basis(&g);
        assert_eq!(b.len(), 2);
        assert_eq!(index_full(&b), BigInt::from(2));
        assert!(contains(&b, &to_ivec(&[1, 1])));
        assert!(!contains(&b, &to_ivec(&[1, 0])));
    }
}
