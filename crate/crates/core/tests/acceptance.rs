//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion (straight to stderr, so the line survives output capture) and
//! then asserts the criterion.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semisign::gadget::{verify_correspondence, PfaInstance};
use semisign::iplog::{solve_iplog, verify_witness, ConeSystem, IplogAnswer};
use semisign::lrs::{closed_form, eventually_nonnegative, eventually_positive, sign_set, Answer, Dominance};
use semisign::membership::{
    nonnegative_membership_diag, nonnegative_membership_general, positive_membership, MembershipAnswer,
    MembershipVerdict, SearchBudget,
};
use semisign::num::algebraic::roots;
use semisign::num::{rat, PolyQ};
use semisign::relations::{multiplicative_lattice, default_bound, verify_relation};
use semisign::{AlgebraicNumber, Error, LogLinExpr, Precision, Rational, RationalMatrix};
use std::io::Write;
use std::time::{Duration, Instant};

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    let line = format!("[{}] criterion {id} ({name}): {detail}\n", if ok { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
}

fn finish(id: u32, name: &str, failures: usize, detail: String, elapsed: Duration, limit: Duration) {
    let ok = failures == 0 && elapsed <= limit;
    let detail = format!("{detail}; {failures} failures; {:.1}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs());
    report(id, name, ok, &detail);
    assert!(ok, "criterion {id}: {detail}");
}

// ---------- oracles ----------

/// Entrywise sign pattern of `M^n` for `n = 1..=count`, by repeated exact
/// multiplication.
fn powers(m: &RationalMatrix, count: u64) -> Vec<RationalMatrix> {
    let mut out = Vec::with_capacity(count as usize);
    let mut p = m.clone();
    for _ in 0..count {
        out.push(p.clone());
        p = p.mul(m);
    }
    out
}

fn nonneg(m: &RationalMatrix) -> bool {
    m.data().iter().all(|x| !x.is_negative())
}

fn positive(m: &RationalMatrix) -> bool {
    m.data().iter().all(|x| x.is_positive())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let q: i64 = rng.gen_range(1..=4);
    let p: i64 = rng.gen_range(-3 * q..=3 * q);
    rat(p, q)
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> RationalMatrix {
    let rows: Vec<Vec<Rational>> = (0..d).map(|_| (0..d).map(|_| random_rational(rng)).collect()).collect();
    RationalMatrix::from_rows(&rows, &Rational::zero())
}

fn suite1_matrices() -> Vec<RationalMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..200)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            random_matrix(&mut rng, d)
        })
        .collect()
}

// ---------- criteria ----------

#[test]
fn criterion_1_sign_set_oracle() {
    let start = Instant::now();
    let mut failures = 0;
    for m in suite1_matrices() {
        let Ok(s) = sign_set(&m) else {
            failures += 1;
            continue;
        };
        let limit = s.threshold + 2 * s.period;
        for (k, p) in powers(&m, limit).iter().enumerate() {
            if nonneg(p) != s.contains(k as u64 + 1) {
                failures += 1;
                break;
            }
        }
    }
    finish(1, "sign-set oracle", failures, "200 matrices, d <= 4".into(), start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_2_eventual_nonnegativity() {
    let start = Instant::now();
    let mut failures = 0;
    let (mut yes, mut no) = (0, 0);
    for m in suite1_matrices() {
        let Ok(v) = eventually_nonnegative(&m) else {
            failures += 1;
            continue;
        };
        let pw = powers(&m, 64);
        match v.answer {
            Answer::Yes => {
                yes += 1;
                let onset = v.onset.unwrap();
                if (onset.max(1)..=64).any(|n| !nonneg(&pw[n as usize - 1])) {
                    failures += 1;
                }
            }
            Answer::No => {
                no += 1;
                let s = sign_set(&m).unwrap();
                // a residue class missing from the set whose powers all have a negative entry
                let lo = s.threshold.max(1);
                let hi = 64.max(s.threshold + 2 * s.period);
                let pw = powers(&m, hi);
                let persistent = (0..s.period).filter(|r| !s.residues.contains(r)).any(|r| {
                    (lo..=hi).filter(|n| n % s.period == r).all(|n| !nonneg(&pw[n as usize - 1]))
                });
                let d = m.rows();
                let non_dominated = (0..d).any(|i| {
                    (0..d).any(|j| closed_form(&m, i, j).map(|f| f.dominance() == Dominance::NotDominated).unwrap_or(false))
                });
                if !persistent && !non_dominated {
                    failures += 1;
                }
            }
        }
    }
    finish(
        2,
        "eventual non-negativity",
        failures,
        format!("{yes} YES checked against powers up to 64, {no} NO explained"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

const PF_REASONS: [&str; 4] = [
    "no strictly dominant eigenvalue",
    "dominant eigenvalue is not real and positive",
    "dominant eigenvalue is not simple",
    "dominant eigenvector is not positive",
];

fn suite3_matrices() -> Vec<RationalMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..50)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            let mut m = random_matrix(&mut rng, d);
            for i in 0..d {
                for j in 0..i {
                    m[(i, j)] = m[(j, i)].clone();
                }
            }
            m
        })
        .collect()
}

/// `Some(onset)` for YES, `None` for NO, after checking the verdict.
fn check_eventually_positive(m: &RationalMatrix) -> Result<Option<u64>, String> {
    let v = eventually_positive(m).map_err(|e| e.to_string())?;
    match v.answer {
        Answer::Yes => {
            let onset = v.onset.unwrap();
            let pw = powers(m, 64);
            if (onset..=64).all(|n| positive(&pw[n as usize - 1])) {
                Ok(Some(onset))
            } else {
                Err(format!("YES with onset {onset} but a power <= 64 is not positive"))
            }
        }
        Answer::No if PF_REASONS.iter().any(|r| v.certificate.contains(r)) => Ok(None),
        Answer::No => Err(format!("NO without a named condition: {}", v.certificate)),
    }
}

#[test]
fn criterion_3_eventual_positivity() {
    let start = Instant::now();
    let mut failures = 0;
    let curated = [
        (RationalMatrix::eye(2), None),
        (RationalMatrix::from_ints(&[&[0, 1], &[1, 0]]), None),
        (RationalMatrix::from_ints(&[&[3, 2], &[2, -1]]), Some(2)),
    ];
    for (m, expect) in &curated {
        if check_eventually_positive(m) != Ok(*expect) {
            failures += 1;
        }
    }
    for m in suite3_matrices() {
        if check_eventually_positive(&m).is_err() {
            failures += 1;
        }
    }
    finish(3, "eventual positivity", failures, "50 symmetric + 3 curated".into(), start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_4_worked_example() {
    let start = Instant::now();
    let w = roots(&PolyQ::from_ints(&[1, 1, 1]))[0].0.clone();
    let lam = |p: i64, q: i64| LogLinExpr::log(&AlgebraicNumber::from_rational(rat(p, q)));
    let sys = ConeSystem::from_logs(
        &[vec![lam(2, 1), lam(1, 1)], vec![lam(1, 2), lam(1, 3)]],
        Some(vec![LogLinExpr::log(&w), LogLinExpr::log(&w.pow(2))]),
        2,
    )
    .unwrap();
    let v = solve_iplog(&sys);
    let mut failures = 0;
    let detail = match &v.answer {
        IplogAnswer::Yes(x) => {
            let (x1, x2) = (x[0].to_f64().unwrap(), x[1].to_f64().unwrap());
            // Arg w = 2 pi / 3, Arg w^2 = -2 pi / 3
            let congruence = (&x[0] - &x[1]) % BigInt::from(3) == BigInt::zero();
            let row1 = x1 * 2f64.ln() < 0.0;
            let row2 = x1 * 0.5f64.ln() + x2 * (1.0f64 / 3.0).ln() < 0.0;
            let exact = verify_witness(&sys, x, &Precision::default()).unwrap_or(false);
            if !(congruence && row1 && row2 && exact && !v.conditional) {
                failures += 1;
            }
            format!("YES with x = ({}, {})", x[0], x[1])
        }
        a => {
            failures += 1;
            format!("expected YES, got {a}")
        }
    };
    finish(4, "worked IP-log example", failures, detail, start.elapsed(), Duration::from_secs(10));
}

fn number_pool() -> Vec<AlgebraicNumber> {
    let q = |p, d| AlgebraicNumber::from_rational(rat(p, d));
    let root = |c: &[i64], k: usize| roots(&PolyQ::from_ints(c))[k].0.clone();
    let gauss = |a: Rational, b: Rational| {
        let p = PolyQ::new(vec![&a * &a + &b * &b, -(&a * rat(2, 1)), rat(1, 1)]);
        roots(&p).into_iter().map(|r| r.0).find(|r| r.to_f64().1 > 0.0).unwrap()
    };
    vec![
        q(2, 1),
        q(4, 1),
        q(8, 1),
        q(1, 2),
        q(3, 1),
        q(6, 1),
        q(-1, 1),
        q(-2, 1),
        q(9, 4),
        gauss(rat(0, 1), rat(1, 1)),
        gauss(rat(1, 1), rat(1, 1)),
        gauss(rat(3, 5), rat(4, 5)),
        gauss(rat(0, 1), rat(2, 1)),
        root(&[1, 1, 1], 0),
        root(&[-2, 0, 1], 1),
        root(&[-1, 2, 1], 1),
        root(&[-2, 0, 0, 0, 1], 1),
        root(&[1, 0, 0, 0, 1], 0),
    ]
}

fn approx_product(nums: &[(f64, f64)], v: &[i64]) -> (f64, f64) {
    // log-polar to avoid overflow
    let mut lr = 0.0;
    let mut th = 0.0;
    for ((r, t), e) in nums.iter().zip(v) {
        lr += *e as f64 * r;
        th += *e as f64 * t;
    }
    (lr, th)
}

#[test]
fn criterion_5_masser_lattice() {
    let start = Instant::now();
    let pool = number_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    let mut total_rank = 0;
    for _ in 0..30 {
        let n = rng.gen_range(2..=3);
        let nums: Vec<AlgebraicNumber> = (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let lat = multiplicative_lattice(&nums, default_bound(&nums));
        total_rank += lat.rank();
        if !lat.certified_exhaustive || !lat.basis_i64().iter().all(|v| verify_relation(&nums, v)) {
            failures += 1;
            continue;
        }
        let polar: Vec<(f64, f64)> = nums
            .iter()
            .map(|a| {
                let (re, im) = a.to_f64();
                (re.hypot(im).ln(), im.atan2(re))
            })
            .collect();
        let mut v = vec![-5i64; n];
        loop {
            let (lr, th) = approx_product(&polar, &v);
            let turns = th / std::f64::consts::TAU;
            let near_one = lr.abs() < 1e-9 && (turns - turns.round()).abs() < 1e-9;
            if near_one && !lat.contains(&v.iter().map(|&x| BigInt::from(x)).collect()) && verify_relation(&nums, &v) {
                failures += 1;
                break;
            }
            let mut i = 0;
            while i < n && v[i] == 5 {
                v[i] = -5;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
    }
    finish(
        5,
        "multiplicative relation lattice",
        failures,
        format!("30 inputs, total rank {total_rank}, brute force |v_i| <= 5"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

/// Commuting family: small polynomials in one random matrix.
fn random_family(rng: &mut ChaCha8Rng) -> Vec<RationalMatrix> {
    let d = rng.gen_range(1..=3);
    let base = RationalMatrix::from_rows(
        &(0..d).map(|_| (0..d).map(|_| rat(rng.gen_range(-2..=3), 1)).collect()).collect::<Vec<_>>(),
        &Rational::zero(),
    );
    let k = rng.gen_range(1..=2);
    (0..k)
        .map(|_| {
            let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
            let mut m = RationalMatrix::eye(d).scale(&rat(c[0], 1));
            m = m.add(&base.scale(&rat(c[1], 1)));
            m = m.add(&base.mul(&base).scale(&rat(c[2], 1)));
            if m.data().iter().all(|x| x.is_zero()) {
                m = base.clone();
            }
            m
        })
        .collect()
}

fn suite6_families() -> Vec<Vec<RationalMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..50).map(|_| random_family(&mut rng)).collect()
}

/// Exhaustive search over `m` with `1 <= sum m <= 6` and `n <= 8`.
fn brute_force(f: &[RationalMatrix], target: fn(&RationalMatrix) -> bool) -> bool {
    let k = f.len();
    let d = f[0].rows();
    let mut m = vec![0u64; k];
    loop {
        // odometer over {0..6}^k
        let mut i = 0;
        while i < k && m[i] == 6 {
            m[i] = 0;
            i += 1;
        }
        if i == k {
            return false;
        }
        m[i] += 1;
        let total: u64 = m.iter().sum();
        if total > 6 {
            continue;
        }
        let p = f.iter().zip(&m).fold(RationalMatrix::eye(d), |acc, (a, &e)| acc.mul(&a.pow(e)));
        if powers(&p, 8).iter().any(target) {
            return true;
        }
    }
}

fn nonneg_membership(f: &[RationalMatrix]) -> Result<MembershipVerdict, Error> {
    match nonnegative_membership_diag(f) {
        Err(Error::NotDiagonalizable) => nonnegative_membership_general(f, &SearchBudget::default()),
        v => v,
    }
}

fn kind(v: &MembershipVerdict) -> &'static str {
    match v.answer {
        MembershipAnswer::Yes { .. } => "YES",
        MembershipAnswer::No => "NO",
        MembershipAnswer::Unknown(_) => "UNKNOWN",
    }
}

/// Soundness and completeness against brute force for one family.
fn check_membership(f: &[RationalMatrix]) -> Result<(&'static str, &'static str), String> {
    let pos = positive_membership(f).map_err(|e| e.to_string())?;
    let nn = nonneg_membership(f).map_err(|e| e.to_string())?;
    for (v, target, name) in [(&pos, positive as fn(&RationalMatrix) -> bool, "positive"), (&nn, nonneg, "non-negative")] {
        if let Some(w) = v.witness(f) {
            if !target(&w) {
                return Err(format!("{name}: witness fails"));
            }
        }
        if !v.is_yes() && brute_force(f, target) {
            return Err(format!("{name}: brute force finds a witness, decider says {}", kind(v)));
        }
        if v.conditional {
            return Err(format!("{name}: conditional verdict"));
        }
    }
    if pos.is_yes() && !nn.is_yes() {
        return Err("positive YES but non-negative not YES".into());
    }
    Ok((kind(&pos), kind(&nn)))
}

#[test]
fn criterion_6_membership_brute_force() {
    let start = Instant::now();
    let mut failures = 0;
    let mut yes = 0;
    let mut errors = Vec::new();
    for f in suite6_families() {
        match check_membership(&f) {
            Ok((p, n)) => yes += (p == "YES") as usize + (n == "YES") as usize,
            Err(e) => {
                failures += 1;
                errors.push(format!("{e} {:?}", f.iter().map(|m| m.to_strings()).collect::<Vec<_>>()));
            }
        }
    }
    let detail = format!("50 families, {yes} YES verdicts verified{}", if errors.is_empty() { String::new() } else { format!(" [{}]", errors.join("; ")) });
    finish(6, "membership vs brute force", failures, detail, start.elapsed(), Duration::from_secs(900));
}

fn permutation_matrix(perm: &[usize]) -> RationalMatrix {
    let d = perm.len();
    let mut p = RationalMatrix::zero_matrix(d, d);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = rat(1, 1);
    }
    p
}

#[test]
fn criterion_7_invariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scales = [rat(1, 2), rat(2, 1), rat(7, 3)];
    let mut failures = 0;
    let mut checks = 0;
    let transform = |f: &[RationalMatrix], rng: &mut ChaCha8Rng| -> Vec<Vec<RationalMatrix>> {
        let d = f[0].rows();
        let mut perm: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let p = permutation_matrix(&perm);
        let pt = p.transpose();
        vec![
            f.iter().map(|a| a.scale(&scales[rng.gen_range(0..3)])).collect(),
            f.iter().map(|a| p.mul(a).mul(&pt)).collect(),
            f.iter().map(|a| a.transpose()).collect(),
        ]
    };
    for m in suite3_matrices() {
        let base = eventually_positive(&m).map(|v| v.answer);
        for g in transform(std::slice::from_ref(&m), &mut rng) {
            checks += 1;
            if eventually_positive(&g[0]).map(|v| v.answer) != base {
                failures += 1;
            }
        }
    }
    for f in suite6_families() {
        let verdicts = |f: &[RationalMatrix]| {
            (positive_membership(f).map(|v| kind(&v)), nonneg_membership(f).map(|v| kind(&v)))
        };
        let base = verdicts(&f);
        for g in transform(&f, &mut rng) {
            checks += 1;
            if verdicts(&g) != base {
                failures += 1;
            }
        }
    }
    finish(7, "invariance", failures, format!("{checks} transformed instances"), start.elapsed(), Duration::from_secs(900));
}

fn random_stochastic(rng: &mut ChaCha8Rng, d: usize) -> RationalMatrix {
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|_| {
            let w: Vec<i64> = (0..d).map(|_| rng.gen_range(0..=4)).collect();
            let s: i64 = w.iter().sum();
            if s == 0 {
                (0..d).map(|j| rat((j == 0) as i64, 1)).collect()
            } else {
                w.iter().map(|&x| rat(x, s)).collect()
            }
        })
        .collect();
    RationalMatrix::from_rows(&rows, &Rational::zero())
}

#[test]
fn criterion_8_reduction_gadget() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    let mut words = 0;
    for _ in 0..20 {
        let d = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=2);
        let u: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(0..=2), rng.gen_range(1..=3))).collect();
        let v: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(0..=2), rng.gen_range(1..=3))).collect();
        let gens = (0..k).map(|_| random_stochastic(&mut rng, d)).collect();
        let inst = PfaInstance::new(u, v, gens).unwrap();
        let r = verify_correspondence(&inst, 6);
        words += r.words_checked;
        if !r.ok() {
            failures += 1;
        }
    }
    finish(8, "reduction gadget", failures, format!("20 instances, {words} products"), start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_9_conditionality() {
    let start = Instant::now();
    // Zero conclusions are drawn only from exact identities, so no verdict may
    // be conditional. Suites 1-3 and 8 have no conditional branch at all.
    let mut conditional = 0;
    let mut verdicts = 0;
    for f in suite6_families().iter().take(20) {
        for v in [positive_membership(f), nonneg_membership(f)].into_iter().flatten() {
            verdicts += 1;
            conditional += v.conditional as usize;
        }
    }
    let w = roots(&PolyQ::from_ints(&[1, 1, 1]))[0].0.clone();
    let sys = ConeSystem::from_logs(
        &[vec![LogLinExpr::log(&AlgebraicNumber::from_int(2)), LogLinExpr::log(&AlgebraicNumber::from_int(3))]],
        Some(vec![LogLinExpr::log(&w), LogLinExpr::log(&w)]),
        2,
    )
    .unwrap();
    verdicts += 1;
    conditional += solve_iplog(&sys).conditional as usize;
    finish(
        9,
        "conditionality accounting",
        conditional,
        format!("{verdicts} verdicts, {conditional} conditional"),
        start.elapsed(),
        Duration::from_secs(600),
    );
}
