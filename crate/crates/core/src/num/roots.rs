//! Certified complex root isolation and factorization over the rationals.
//!
//! Roots are first approximated with the Aberth iteration at a working
//! precision, then certified: a disc of radius `n |f(z)| / |f'(z)|` around any
//! point `z` contains a root, so pairwise disjoint discs around all `n`
//! approximations isolate the roots one by one.

use super::dyadic::{ComplexInterval, Dyadic, Interval, Round};
use super::poly::{eval_int_complex, PolyQ};
use super::rational::Rational;
use num_bigint::BigInt;

/// A certified isolating square `center ± radius` (both axes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBox {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
    pub real: bool,
}

impl RootBox {
    pub fn to_interval(&self) -> ComplexInterval {
        let r = &self.radius;
        let im = if self.real {
            Interval::zero()
        } else {
            Interval::new(self.im.sub(r), self.im.add(r))
        };
        ComplexInterval::new(Interval::new(self.re.sub(r), self.re.add(r)), im)
    }

    /// Square used for exclusion arguments (for real roots the full square,
    /// not the degenerate segment).
    fn square(&self) -> ComplexInterval {
        let r = &self.radius;
        ComplexInterval::new(
            Interval::new(self.re.sub(r), self.re.add(r)),
            Interval::new(self.im.sub(r), self.im.add(r)),
        )
    }

    pub fn conj(&self) -> RootBox {
        RootBox { re: self.re.clone(), im: self.im.neg(), radius: self.radius.clone(), real: self.real }
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn new(re: Dyadic, im: Dyadic) -> Self {
        Cx { re, im }
    }
    fn round(&self, p: u32) -> Cx {
        Cx::new(self.re.round(p, Round::Down), self.im.round(p, Round::Down))
    }
    fn add(&self, o: &Cx, p: u32) -> Cx {
        Cx::new(self.re.add(&o.re), self.im.add(&o.im)).round(p)
    }
    fn sub(&self, o: &Cx, p: u32) -> Cx {
        Cx::new(self.re.sub(&o.re), self.im.sub(&o.im)).round(p)
    }
    fn mul(&self, o: &Cx, p: u32) -> Cx {
        Cx::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
        .round(p)
    }
    fn norm(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn div(&self, o: &Cx, p: u32) -> Cx {
        let n = o.norm();
        let num = self.mul(&Cx::new(o.re.clone(), o.im.neg()), p + 8);
        Cx::new(Dyadic::div(&num.re, &n, p, Round::Down), Dyadic::div(&num.im, &n, p, Round::Down))
    }
    fn mag_exp(&self) -> i64 {
        self.re.magnitude().max(self.im.magnitude())
    }
}

fn horner(c: &[BigInt], z: &Cx, p: u32) -> (Cx, Cx) {
    // value and derivative
    let mut v = Cx::new(Dyadic::zero(), Dyadic::zero());
    let mut d = v.clone();
    for a in c.iter().rev() {
        d = d.mul(z, p).add(&v, p);
        v = v.mul(z, p).add(&Cx::new(Dyadic::from_int(a.clone()), Dyadic::zero()), p);
    }
    (v, d)
}

fn derivative_int(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

fn modulus_up(re: &Dyadic, im: &Dyadic, p: u32) -> Dyadic {
    re.mul(re).add(&im.mul(im)).sqrt(p, Round::Up)
}

fn modulus_down(re: &Dyadic, im: &Dyadic, p: u32) -> Dyadic {
    re.mul(re).add(&im.mul(im)).sqrt(p, Round::Down)
}

/// Certified radius around `z`: a disc of this radius contains a root.
fn cert_radius(c: &[BigInt], dc: &[BigInt], re: &Dyadic, im: &Dyadic) -> Option<Dyadic> {
    let n = (c.len() - 1) as i64;
    let (fr, fi) = eval_int_complex(c, re, im);
    let (dr, di) = eval_int_complex(dc, re, im);
    let fd = modulus_down(&dr, &di, 40);
    if fd.is_zero() {
        return None;
    }
    let fu = modulus_up(&fr, &fi, 40);
    Some(Dyadic::div(&fu.mul(&Dyadic::from_int(n)), &fd, 40, Round::Up))
}

fn initial_guesses(c: &[BigInt]) -> Vec<Cx> {
    let n = c.len() - 1;
    let lc = Dyadic::from_int(c[n].clone()).to_f64().abs();
    let mut r: f64 = 0.0;
    for (i, a) in c[..n].iter().enumerate() {
        let v = (Dyadic::from_int(a.clone()).to_f64().abs() / lc).powf(1.0 / (n - i) as f64);
        r = r.max(v);
    }
    let r = (2.0 * r).clamp(1e-3, 1e300);
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Cx::new(Dyadic::from_f64(r * t.cos()), Dyadic::from_f64(r * t.sin()))
        })
        .collect()
}

fn aberth(c: &[BigInt], z: &mut [Cx], p: u32) {
    let n = z.len();
    let goal = -(p as i64) + 8;
    let max_iter = 100 + 20 * n + p as usize / 2;
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..n {
            let (v, d) = horner(c, &z[i], p);
            if v.is_zero() {
                continue;
            }
            if d.is_zero() {
                // nudge off a critical point
                z[i] = z[i].add(&Cx::new(Dyadic::one().mul_pow2(-(p as i64) / 2), Dyadic::one().mul_pow2(-(p as i64) / 3)), p);
                done = false;
                continue;
            }
            let ratio = v.div(&d, p);
            let mut s = Cx::new(Dyadic::zero(), Dyadic::zero());
            for j in 0..n {
                if j != i {
                    let diff = z[i].sub(&z[j], p);
                    if diff.is_zero() {
                        continue;
                    }
                    s = s.add(&Cx::new(Dyadic::one(), Dyadic::zero()).div(&diff, p), p);
                }
            }
            let denom = Cx::new(Dyadic::one(), Dyadic::zero()).sub(&ratio.mul(&s, p), p);
            let w = if denom.is_zero() { ratio } else { ratio.div(&denom, p) };
            let scale = z[i].mag_exp().max(0);
            if w.mag_exp() > goal + scale {
                done = false;
            }
            z[i] = z[i].sub(&w, p);
        }
        if done {
            return;
        }
    }
}

fn dist_exceeds(a: &RootBox, b: &RootBox, factor: i64) -> bool {
    let dx = a.re.sub(&b.re);
    let dy = a.im.sub(&b.im);
    let d2 = dx.mul(&dx).add(&dy.mul(&dy));
    let s = a.radius.add(&b.radius).mul(&Dyadic::from_int(factor));
    d2 > s.mul(&s)
}

fn certify(c: &[BigInt], dc: &[BigInt], z: &[Cx]) -> Option<Vec<RootBox>> {
    let mut boxes = Vec::with_capacity(z.len());
    for zi in z {
        let r = cert_radius(c, dc, &zi.re, &zi.im)?;
        boxes.push(RootBox { re: zi.re.clone(), im: zi.im.clone(), radius: r, real: false });
    }
    let ok = |bs: &Vec<RootBox>, i: usize| (0..bs.len()).all(|j| j == i || dist_exceeds(&bs[i], &bs[j], 2));
    for i in 0..boxes.len() {
        if !ok(&boxes, i) {
            return None;
        }
    }
    // decide reality: a symmetric disc isolating one root forces it real
    for i in 0..boxes.len() {
        let b = boxes[i].clone();
        if b.im.abs() > b.radius.mul_pow2(1) {
            continue;
        }
        let r = cert_radius(c, dc, &b.re, &Dyadic::zero())?;
        let cand = RootBox { re: b.re.clone(), im: Dyadic::zero(), radius: r, real: true };
        let saved = std::mem::replace(&mut boxes[i], cand);
        if !ok(&boxes, i) {
            boxes[i] = saved;
        }
    }
    // non-real boxes must avoid the real axis so conjugate pairing is exact
    for b in &boxes {
        if !b.real && b.im.abs() <= b.radius {
            return None;
        }
    }
    Some(boxes)
}

fn cmp_boxes(a: &RootBox, b: &RootBox) -> std::cmp::Ordering {
    a.re.cmp(&b.re).then(a.im.cmp(&b.im))
}

/// Isolate all complex roots of a square-free polynomial.
///
/// The result lists the real roots in increasing order, then the roots in
/// the upper half-plane, then their conjugates in the same order.
pub fn isolate(f: &PolyQ) -> Vec<RootBox> {
    assert!(!f.is_zero(), "cannot isolate roots of the zero polynomial");
    let c = f.primitive();
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        // exact rational root; a point box
        let q = Rational::new(-c[0].clone(), c[1].clone());
        return vec![rational_box(&q)];
    }
    let dc = derivative_int(&c);
    let mut p: u32 = 64;
    let mut z = initial_guesses(&c);
    loop {
        aberth(&c, &mut z, p);
        if let Some(boxes) = certify(&c, &dc, &z) {
            let mut reals: Vec<RootBox> = boxes.iter().filter(|b| b.real).cloned().collect();
            let mut upper: Vec<RootBox> = boxes.iter().filter(|b| !b.real && b.im.signum() > 0).cloned().collect();
            let lower = boxes.iter().filter(|b| !b.real && b.im.signum() < 0).count();
            if upper.len() == lower && reals.len() + 2 * upper.len() == n {
                reals.sort_by(cmp_boxes);
                upper.sort_by(cmp_boxes);
                let conj: Vec<RootBox> = upper.iter().map(|b| b.conj()).collect();
                reals.extend(upper);
                reals.extend(conj);
                return reals;
            }
        }
        p *= 2;
        assert!(p <= 1 << 20, "root isolation failed to converge");
        z = z.iter().map(|w| w.round(p)).collect();
    }
}

fn rational_box(q: &Rational) -> RootBox {
    // exact when q is dyadic, else a tiny certified interval around it
    let lo = Dyadic::from_rational(q, 200, Round::Down);
    let hi = Dyadic::from_rational(q, 200, Round::Up);
    let mid = lo.add(&hi).mul_pow2(-1);
    let rad = hi.sub(&lo);
    RootBox { re: mid, im: Dyadic::zero(), radius: rad, real: true }
}

/// Shrink an isolating box of a root of the square-free integer polynomial
/// `c` until its radius is at most `2^-bits`. The result is contained in the
/// input box. `siblings` are the isolating boxes of all roots of `c`
/// (used for the fallback re-isolation).
pub fn refine_box(c: &[BigInt], b: &RootBox, bits: i64) -> RootBox {
    let n = c.len() - 1;
    if n == 1 || b.radius.is_zero() {
        return b.clone();
    }
    let dc = derivative_int(c);
    let old = b.square();
    let mut cur = b.clone();
    let mut p = ((bits.max(0) as u32) + 32).max(64);
    let mut attempts = 0;
    while cur.radius.magnitude() > -bits {
        let mut z = Cx::new(cur.re.clone(), if cur.real { Dyadic::zero() } else { cur.im.clone() });
        let mut ok = false;
        for _ in 0..(8 + 2 * (p as usize).ilog2() as usize) {
            let (v, d) = horner(c, &z, p + 16);
            if v.is_zero() || d.is_zero() {
                break;
            }
            let w = v.div(&d, p + 16);
            z = z.sub(&w, p);
            if cur.real {
                z.im = Dyadic::zero();
            }
            if w.mag_exp() < -(bits + 8) - 2 * n as i64 {
                break;
            }
        }
        if let Some(r) = cert_radius(c, &dc, &z.re, &z.im) {
            let nb = RootBox { re: z.re.clone(), im: z.im.clone(), radius: r, real: cur.real };
            if nb.square().is_subset_of(&old) && nb.radius < cur.radius {
                cur = nb;
                ok = true;
            }
        }
        if !ok {
            attempts += 1;
            p *= 2;
            if attempts > 3 {
                return refine_by_isolation(c, b, bits);
            }
        }
    }
    cur
}

fn refine_by_isolation(c: &[BigInt], b: &RootBox, bits: i64) -> RootBox {
    let old = b.square();
    let f = PolyQ::from_integers(c);
    let dc = derivative_int(c);
    let mut p: u32 = 128;
    let mut z = initial_guesses(c);
    loop {
        aberth(c, &mut z, p);
        if let Some(bs) = certify(c, &dc, &z) {
            let hits: Vec<&RootBox> = bs.iter().filter(|x| x.square().intersects(&old)).collect();
            if hits.len() == 1 && hits[0].radius.magnitude() <= -bits {
                let mut h = hits[0].clone();
                h.real = b.real;
                if b.real {
                    h.im = Dyadic::zero();
                }
                return h;
            }
        }
        p *= 2;
        assert!(p <= 1 << 22, "root refinement failed for {}", f);
        z = z.iter().map(|w| w.round(p)).collect();
    }
}

/// Partial product `lc * prod (x - r)` with interval coefficients.
fn interval_product(lc: &BigInt, roots: &[ComplexInterval], prec: u32) -> Vec<ComplexInterval> {
    let mut acc = vec![ComplexInterval::real(Interval::point(Dyadic::from_int(lc.clone())))];
    for r in roots {
        let mut next = vec![ComplexInterval::from_int(0); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a, prec);
            next[i] = next[i].sub(&a.mul(r, prec), prec);
        }
        acc = next;
    }
    acc
}

enum Probe {
    Reject,
    Refine,
    Candidate(Vec<BigInt>),
}

fn probe(lc: &BigInt, roots: &[ComplexInterval], prec: u32) -> Probe {
    let coeffs = interval_product(lc, roots, prec);
    let mut out = Vec::with_capacity(coeffs.len());
    let mut refine = false;
    for c in &coeffs {
        let lo = c.re.lo.ceil();
        let hi = c.re.hi.floor();
        if lo > hi {
            return Probe::Reject;
        }
        if lo != hi {
            refine = true;
        }
        out.push(lo);
    }
    if refine {
        Probe::Refine
    } else {
        Probe::Candidate(out)
    }
}

fn int_divides(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let (q, r) = PolyQ::from_integers(num).div_rem(&PolyQ::from_integers(den));
    if !r.is_zero() {
        return None;
    }
    if q.coeffs().iter().all(|c| c.is_integer()) {
        Some(q.coeffs().iter().map(|c| c.to_integer()).collect())
    } else {
        None
    }
}

fn subsets_of_size(units: &[usize], k: usize, sizes: &[usize], out: &mut Vec<Vec<usize>>) {
    fn rec(units: &[usize], sizes: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..units.len() {
            let s = sizes[units[i]];
            if s <= k {
                cur.push(units[i]);
                rec(units, sizes, k - s, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(units, sizes, k, 0, &mut Vec::new(), out);
}

/// Factor a square-free polynomial into monic irreducible factors.
pub fn factor_squarefree(f: &PolyQ) -> Vec<PolyQ> {
    let n = f.degree();
    if n <= 1 {
        return vec![f.monic()];
    }
    let c = f.primitive();
    let boxes = isolate(f);
    // units: a real root alone, or a conjugate pair
    let nr = boxes.iter().filter(|b| b.real).count();
    let nc = (n - nr) / 2;
    let mut units: Vec<Vec<usize>> = (0..nr).map(|i| vec![i]).collect();
    for j in 0..nc {
        units.push(vec![nr + j, nr + nc + j]);
    }
    let sizes: Vec<usize> = units.iter().map(|u| u.len()).collect();
    let mut boxes = boxes;
    let mut bits: i64 = 64;
    let mut remaining: Vec<usize> = (0..units.len()).collect();
    let mut cur = c.clone();
    let mut factors = Vec::new();
    let mut k = 1;
    while 2 * k <= cur.len() - 1 {
        let mut subsets = Vec::new();
        subsets_of_size(&remaining, k, &sizes, &mut subsets);
        let mut found = None;
        'sub: for s in &subsets {
            loop {
                let lc = cur.last().unwrap().clone();
                let rs: Vec<ComplexInterval> =
                    s.iter().flat_map(|&u| units[u].iter().map(|&i| boxes[i].to_interval())).collect();
                match probe(&lc, &rs, (bits as u32) * 2 + 64) {
                    Probe::Reject => continue 'sub,
                    Probe::Refine => {
                        bits *= 2;
                        boxes = refine_all(&c, &boxes, bits);
                    }
                    Probe::Candidate(h) => {
                        let h = primitive_int(&h);
                        if let Some(q) = int_divides(&cur, &h) {
                            found = Some((s.clone(), h, q));
                            break 'sub;
                        }
                        continue 'sub;
                    }
                }
            }
        }
        match found {
            Some((s, h, q)) => {
                factors.push(PolyQ::from_integers(&h).monic());
                remaining.retain(|u| !s.contains(u));
                cur = primitive_int(&q);
            }
            None => k += 1,
        }
    }
    if cur.len() > 1 {
        factors.push(PolyQ::from_integers(&cur).monic());
    }
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| format!("{}", a).cmp(&format!("{}", b))));
    factors
}

fn refine_all(c: &[BigInt], boxes: &[RootBox], bits: i64) -> Vec<RootBox> {
    let nr = boxes.iter().filter(|b| b.real).count();
    let nc = (boxes.len() - nr) / 2;
    let mut out: Vec<RootBox> = boxes.iter().take(nr + nc).map(|b| refine_box(c, b, bits)).collect();
    let conj: Vec<RootBox> = out[nr..nr + nc].iter().map(|b| b.conj()).collect();
    out.extend(conj);
    out
}

fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    PolyQ::from_integers(v).primitive()
}

/// Factor a nonzero polynomial into monic irreducible factors with
/// multiplicities. The product of `factor^mult` equals `p` up to a constant.
pub fn factor(p: &PolyQ) -> Vec<(PolyQ, u32)> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (g, m) in p.squarefree_decomposition() {
        for h in factor_squarefree(&g) {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rational::rat;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    #[test]
    fn isolates_sqrt2() {
        let b = isolate(&p(&[-2, 0, 1]));
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.real));
        assert!(b[0].re < b[1].re);
        assert!((b[1].re.to_f64() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn isolates_i() {
        let b = isolate(&p(&[1, 0, 1]));
        assert_eq!(b.len(), 2);
        assert!(!b[0].real && b[0].im.signum() > 0 && b[1].im.signum() < 0);
    }

    #[test]
    fn close_roots() {
        // (x - 1)(x - 1 - 2^-40) scaled to integers
        let e = rat(1, 1 << 40);
        let f = PolyQ::linear_root(&rat(1, 1)).mul(&PolyQ::linear_root(&(rat(1, 1) + e)));
        let b = isolate(&f);
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.real));
    }

    #[test]
    fn refine_shrinks_inside() {
        let f = p(&[-2, 0, 1]);
        let c = f.primitive();
        let b = &isolate(&f)[1];
        let r = refine_box(&c, b, 200);
        assert!(r.radius.magnitude() <= -200);
        assert!(r.to_interval().is_subset_of(&b.to_interval()));
    }

    #[test]
    fn factors() {
        assert_eq!(factor(&p(&[-1, 0, 1])), vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        assert_eq!(factor(&p(&[1, 0, 1])), vec![(p(&[1, 0, 1]), 1)]);
        assert_eq!(factor(&p(&[-4, 0, 0, 0, 1])), vec![(p(&[-2, 0, 1]), 1), (p(&[2, 0, 1]), 1)]);
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let f = factor(&p(&[4, 0, 0, 0, 1]));
        assert_eq!(f.len(), 2);
        // (2x - 1)^2 (x^2 + x + 1)
        let g = p(&[-1, 2]).pow(2).mul(&p(&[1, 1, 1]));
        assert_eq!(factor(&g), vec![(PolyQ::linear_root(&rat(1, 2)), 2), (p(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn factor_product_recovers_input() {
        let g = p(&[-3, 1]).mul(&p(&[5, 0, 0, 1])).mul(&p(&[1, 0, 1])).mul(&p(&[-2, 0, 1]));
        let fs = factor(&g);
        let mut prod = PolyQ::one();
        for (h, m) in &fs {
            prod = prod.mul(&h.pow(*m));
        }
        assert_eq!(prod, g.monic());
        assert_eq!(fs.len(), 4);
    }
}
