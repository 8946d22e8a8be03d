use crate::input;
use crate::{Cli, Command};
use anyhow::{anyhow, bail, Result};
use num_bigint::BigInt;
use semisign::gadget::{build_reduction, suffix_form, verify_correspondence, word_string, Letter};
use semisign::iplog::{solve_iplog_with, verify_witness};
use semisign::lrs::{eventually_nonnegative, eventually_positive, sign_set, Answer, UltimatelyPeriodicSet};
use semisign::membership::{
    nonnegative_membership_diag, nonnegative_membership_general, positive_membership_with, MembershipAnswer,
    MembershipVerdict, SearchBudget,
};
use semisign::relations::{
    arg_congruence_lattice, default_bound, modulus_lattice, multiplicative_lattice, verify_arg_relation,
    verify_modulus_relation, verify_relation,
};
use semisign::{Error, IplogAnswer, Precision, RationalMatrix};
use serde_json::{json, Value};

pub struct Output {
    pub report: Value,
    pub human: Vec<String>,
    pub exit: u8,
}

fn precision(cli: &Cli) -> Precision {
    Precision { start_bits: 64, max_bits: cli.precision_bits }
}

fn budgets(cli: &Cli) -> Value {
    json!({
        "precision_bits": cli.precision_bits,
        "search_budget": cli.search_budget,
        "masser_bound": cli.masser_bound,
    })
}

fn core_error(e: Error) -> anyhow::Error {
    match e {
        Error::NonCommuting(i, j) => anyhow!(
            "generators {i} and {j} do not commute; the deciders only handle commuting families \
             (non-negative membership is undecidable in general, see `semisign reduce-pfa`)"
        ),
        e => anyhow!("{e}"),
    }
}

pub fn run(cli: &Cli, text: &str) -> Result<Output> {
    let doc = input::parse_document(text)?;
    let mut out = match &cli.verify {
        Some(path) => {
            let report = input::parse_document(&std::fs::read_to_string(path)?)?;
            verify(cli, &doc, &report)?
        }
        None => decide(cli, &doc)?,
    };
    if let Value::Object(m) = &mut out.report {
        m.insert("budgets".into(), budgets(cli));
        m.insert("fast".into(), Value::Bool(cli.fast));
        m.insert("command".into(), Value::String(command_name(&cli.command).into()));
    }
    Ok(out)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::AnalyzeMatrix => "analyze-matrix",
        Command::DecidePositive => "decide-positive",
        Command::DecideNonnegative => "decide-nonnegative",
        Command::MasserBasis => "masser-basis",
        Command::Iplog => "iplog",
        Command::ReducePfa { .. } => "reduce-pfa",
    }
}

fn decide(cli: &Cli, doc: &Value) -> Result<Output> {
    match &cli.command {
        Command::AnalyzeMatrix => analyze(doc),
        Command::DecidePositive => {
            let f = input::family(doc)?;
            let v = positive_membership_with(&f, &precision(cli)).map_err(core_error)?;
            Ok(membership_output(&v))
        }
        Command::DecideNonnegative => {
            let f = input::family(doc)?;
            let v = match nonnegative_membership_diag(&f) {
                Err(Error::NotDiagonalizable) => {
                    let b = SearchBudget {
                        radius: cli.search_budget,
                        depth: 2 * cli.search_budget,
                        precision: precision(cli),
                    };
                    nonnegative_membership_general(&f, &b)
                }
                v => v,
            }
            .map_err(core_error)?;
            Ok(membership_output(&v))
        }
        Command::MasserBasis => masser(cli, doc),
        Command::Iplog => {
            let sys = input::cone_system(doc)?;
            let v = solve_iplog_with(&sys, &precision(cli));
            let (verdict, witness, reason) = match &v.answer {
                IplogAnswer::Yes(x) => ("YES", json!(ints(x)), None),
                IplogAnswer::No => ("NO", Value::Null, None),
                IplogAnswer::Unknown(r) => ("UNKNOWN", Value::Null, Some(r.clone())),
            };
            Ok(Output {
                report: json!({"verdict": verdict, "witness": witness, "conditional": v.conditional, "reason": reason}),
                human: vec![format!("verdict: {}", v.answer), format!("conditional: {}", v.conditional)],
                exit: exit_for(verdict),
            })
        }
        Command::ReducePfa { max_len } => reduce(doc, *max_len),
    }
}

fn exit_for(verdict: &str) -> u8 {
    if verdict == "UNKNOWN" {
        2
    } else {
        0
    }
}

fn ints(x: &[BigInt]) -> Vec<String> {
    x.iter().map(|v| v.to_string()).collect()
}

fn set_json(s: &UltimatelyPeriodicSet) -> Value {
    json!({
        "threshold": s.threshold,
        "period": s.period,
        "residues": s.residues,
        "exceptions": s.exceptions,
    })
}

fn analyze(doc: &Value) -> Result<Output> {
    let m = input::single_matrix(doc)?;
    let set = sign_set(&m).map_err(core_error)?;
    let nn = eventually_nonnegative(&m).map_err(core_error)?;
    let pos = eventually_positive(&m).map_err(core_error)?;
    let yes_no = |a: Answer| if a == Answer::Yes { "YES" } else { "NO" };
    let report = json!({
        "verdict": yes_no(nn.answer),
        "onset": nn.onset,
        "certificate": nn.certificate,
        "set": set_json(&set),
        "first_nonnegative_power": set.min(),
        "eventually_positive": {"verdict": yes_no(pos.answer), "onset": pos.onset, "certificate": pos.certificate},
        "conditional": false,
    });
    let human = vec![
        format!("eventually non-negative: {} ({})", yes_no(nn.answer), nn.certificate),
        format!("eventually positive: {} ({})", yes_no(pos.answer), pos.certificate),
        format!(
            "M^n >= 0 for n >= {} with n mod {} in {:?}, and for n in {:?}",
            set.threshold, set.period, set.residues, set.exceptions
        ),
    ];
    Ok(Output { report, human, exit: 0 })
}

fn membership_output(v: &MembershipVerdict) -> Output {
    let (verdict, witness, reason) = match &v.answer {
        MembershipAnswer::Yes { subset, exponents, power } => {
            ("YES", json!({"subset": subset, "exponents": exponents, "power": power}), None)
        }
        MembershipAnswer::No => ("NO", Value::Null, None),
        MembershipAnswer::Unknown(r) => ("UNKNOWN", Value::Null, Some(r.clone())),
    };
    Output {
        report: json!({"verdict": verdict, "witness": witness, "conditional": v.conditional, "reason": reason}),
        human: vec![format!("verdict: {}", v.answer), format!("conditional: {}", v.conditional)],
        exit: exit_for(verdict),
    }
}

fn masser(cli: &Cli, doc: &Value) -> Result<Output> {
    let nums = input::numbers(doc)?;
    if nums.iter().any(|a| a.is_zero()) {
        bail!("numbers: zero has no multiplicative relations");
    }
    let bound = cli.masser_bound.unwrap_or_else(|| default_bound(&nums));
    let kind = doc.get("kind").and_then(Value::as_str).unwrap_or("multiplicative");
    let lat = match kind {
        "multiplicative" => multiplicative_lattice(&nums, bound),
        "modulus" => modulus_lattice(&nums, bound),
        "argument" => arg_congruence_lattice(&nums, bound),
        k => bail!("kind: unknown lattice kind \"{k}\""),
    };
    let basis: Vec<Vec<String>> = lat.basis.iter().map(|v| ints(v)).collect();
    let verdict = if lat.certified_exhaustive { "COMPLETE" } else { "UNKNOWN" };
    let mut human = vec![format!("{kind} relations: rank {} (bound {bound}, {verdict})", lat.rank())];
    human.extend(basis.iter().map(|v| format!("  ({})", v.join(", "))));
    Ok(Output {
        report: json!({
            "verdict": verdict,
            "kind": kind,
            "basis": basis,
            "rank": lat.rank(),
            "bound": bound,
            "certified_exhaustive": lat.certified_exhaustive,
            "conditional": false,
        }),
        human,
        exit: exit_for(verdict),
    })
}

fn reduce(doc: &Value, max_len: usize) -> Result<Output> {
    if max_len == 0 {
        bail!("--max-len must be at least 1");
    }
    let inst = input::pfa(doc)?;
    let gens = build_reduction(&inst);
    let rep = verify_correspondence(&inst, max_len);
    if !rep.ok() {
        bail!("correspondence check failed: {}", rep.violations.join("; "));
    }
    let words: Vec<String> = rep.nonnegative.iter().map(|w| word_string(w)).collect();
    let verdict = if words.is_empty() { "UNKNOWN" } else { "YES" };
    let mut human = vec![
        format!("reduced family: {} generators of dimension {}", gens.len(), inst.dim() + 2),
        format!("checked {} products of length <= {max_len}: correspondence holds", rep.words_checked),
    ];
    match words.first() {
        Some(w) => human.push(format!("non-negative product: {w}")),
        None => human.push("no non-negative product within the length bound".into()),
    }
    Ok(Output {
        report: json!({
            "verdict": verdict,
            "generators": gens.iter().map(input::matrix_json).collect::<Vec<_>>(),
            "words_checked": rep.words_checked,
            "nonnegative_words": words,
            "max_len": max_len,
            "conditional": false,
        }),
        human,
        exit: exit_for(verdict),
    })
}

fn u64_list(v: &Value, path: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| anyhow!("{path}: expected an array"))?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| anyhow!("{path}: expected non-negative integers")))
        .collect()
}

fn bigint_list(v: &Value, path: &str) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| anyhow!("{path}: expected an array"))?
        .iter()
        .map(|x| {
            let s = x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
            s.parse::<BigInt>().map_err(|_| anyhow!("{path}: invalid integer {s}"))
        })
        .collect()
}

/// Re-check a report against the input. Exit 0 when verified, 1 otherwise.
fn verify(cli: &Cli, doc: &Value, report: &Value) -> Result<Output> {
    let checked: Result<(bool, String)> = match &cli.command {
        Command::DecidePositive | Command::DecideNonnegative => {
            let f = input::family(doc)?;
            let w = report.get("witness").filter(|w| !w.is_null()).ok_or_else(|| anyhow!("report has no witness"))?;
            let subset = u64_list(&w["subset"], "witness.subset")?;
            let exps = u64_list(&w["exponents"], "witness.exponents")?;
            let power = w["power"].as_u64().ok_or_else(|| anyhow!("witness.power: expected an integer"))?;
            if subset.len() != exps.len() || subset.iter().any(|&r| r as usize >= f.len()) || power == 0 {
                bail!("witness does not match the input family");
            }
            let d = f[0].rows();
            let p = subset
                .iter()
                .zip(&exps)
                .fold(RationalMatrix::eye(d), |acc, (&r, &e)| acc.mul(&f[r as usize].pow(e)))
                .pow(power);
            let positive = matches!(cli.command, Command::DecidePositive);
            let ok = exps.iter().all(|&e| e > 0) && if positive { p.is_positive() } else { p.is_nonnegative() };
            Ok((ok, format!("product is {}", if ok { "verified" } else { "not of the required sign" })))
        }
        Command::AnalyzeMatrix => {
            let m = input::single_matrix(doc)?;
            let s = &report["set"];
            let set = UltimatelyPeriodicSet {
                threshold: s["threshold"].as_u64().ok_or_else(|| anyhow!("set.threshold missing"))?,
                period: s["period"].as_u64().filter(|&p| p > 0).ok_or_else(|| anyhow!("set.period missing"))?,
                residues: u64_list(&s["residues"], "set.residues")?,
                exceptions: u64_list(&s["exceptions"], "set.exceptions")?,
            };
            let limit = set.threshold + 2 * set.period;
            let mut pw = m.clone();
            let mut bad = None;
            for n in 1..=limit {
                if pw.is_nonnegative() != set.contains(n) {
                    bad = Some(n);
                    break;
                }
                pw = pw.mul(&m);
            }
            Ok(match bad {
                None => (true, format!("sign pattern agrees for n <= {limit}")),
                Some(n) => (false, format!("sign pattern disagrees at n = {n}")),
            })
        }
        Command::MasserBasis => {
            let nums = input::numbers(doc)?;
            let kind = report["kind"].as_str().unwrap_or("multiplicative");
            let basis = report["basis"].as_array().ok_or_else(|| anyhow!("report has no basis"))?;
            let mut ok = true;
            for (i, v) in basis.iter().enumerate() {
                let v: Vec<i64> = bigint_list(v, &format!("basis[{i}]"))?
                    .iter()
                    .map(|x| i64::try_from(x).map_err(|_| anyhow!("basis[{i}]: entry too large")))
                    .collect::<Result<_>>()?;
                if v.len() != nums.len() {
                    bail!("basis[{i}]: wrong length");
                }
                ok &= match kind {
                    "modulus" => verify_modulus_relation(&nums, &v),
                    "argument" => verify_arg_relation(&nums, &v),
                    _ => verify_relation(&nums, &v),
                };
            }
            Ok((ok, format!("{} basis relations {}", basis.len(), if ok { "hold" } else { "fail" })))
        }
        Command::Iplog => {
            let sys = input::cone_system(doc)?;
            let x = bigint_list(&report["witness"], "witness")?;
            let ok = verify_witness(&sys, &x, &precision(cli)).map_err(core_error)?;
            Ok((ok, format!("witness {}", if ok { "satisfies the system" } else { "fails" })))
        }
        Command::ReducePfa { .. } => {
            let inst = input::pfa(doc)?;
            let gens = build_reduction(&inst);
            let k = inst.generators().len();
            let words = report["nonnegative_words"].as_array().ok_or_else(|| anyhow!("report has no words"))?;
            let mut ok = true;
            for w in words {
                let w = w.as_str().ok_or_else(|| anyhow!("nonnegative_words: expected strings"))?;
                let letters = parse_word(w, k)?;
                let d = inst.dim() + 2;
                let p = letters.iter().fold(RationalMatrix::eye(d), |acc, l| {
                    acc.mul(&gens[match l {
                        Letter::U => 0,
                        Letter::A(i) => i + 1,
                        Letter::V => k + 1,
                    }])
                });
                ok &= p.is_nonnegative()
                    && suffix_form(&letters).is_some_and(|inner| inst.acceptance(&inner) * BigInt::from(2) >= BigInt::from(1).into());
            }
            Ok((ok, format!("{} non-negative products {}", words.len(), if ok { "verified" } else { "fail" })))
        }
    };
    let (ok, detail) = checked?;
    Ok(Output {
        report: json!({"verified": ok, "detail": detail}),
        human: vec![format!("verified: {ok} ({detail})")],
        exit: if ok { 0 } else { 1 },
    })
}

fn parse_word(w: &str, k: usize) -> Result<Vec<Letter>> {
    w.split_whitespace()
        .map(|t| match t {
            "U" => Ok(Letter::U),
            "V" => Ok(Letter::V),
            _ => t
                .strip_prefix('A')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= k)
                .map(|i| Letter::A(i - 1))
                .ok_or_else(|| anyhow!("invalid letter {t}")),
        })
        .collect()
}
