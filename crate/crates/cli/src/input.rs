//! JSON input documents. Rationals are strings `"p/q"` or `"p"`; floating
//! point literals are rejected.

use anyhow::{anyhow, bail, Context, Result};
use semisign::gadget::PfaInstance;
use semisign::iplog::ConeSystem;
use semisign::num::algebraic::roots;
use semisign::num::{parse_rational, PolyQ};
use semisign::{AlgebraicNumber, LogLinExpr, Rational, RationalMatrix};
use serde_json::Value;

pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| anyhow!("parse error: {e}"))
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| anyhow!("missing field \"{key}\""))
}

pub fn rational(v: &Value, path: &str) -> Result<Rational> {
    let s = match v {
        Value::String(s) => s.as_str(),
        Value::Number(n) if n.is_i64() || n.is_u64() => return Ok(parse_rational(&n.to_string()).unwrap()),
        _ => bail!("{path}: expected a rational string such as \"3/4\""),
    };
    parse_rational(s).ok_or_else(|| anyhow!("{path}: invalid rational \"{s}\""))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| anyhow!("{path}: expected an array"))
}

pub fn vector(v: &Value, path: &str) -> Result<Vec<Rational>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| rational(x, &format!("{path}[{i}]"))).collect()
}

pub fn matrix(v: &Value, path: &str) -> Result<RationalMatrix> {
    let rows: Vec<Vec<Rational>> =
        array(v, path)?.iter().enumerate().map(|(i, r)| vector(r, &format!("{path}[{i}]"))).collect::<Result<_>>()?;
    let n = rows.first().map_or(0, |r| r.len());
    if rows.is_empty() || n == 0 {
        bail!("{path}: empty matrix");
    }
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        bail!("{path}[{i}]: row has {} entries, expected {n}", rows[i].len());
    }
    let proto = Rational::from_integer(0.into());
    Ok(RationalMatrix::from_rows(&rows, &proto))
}

pub fn family(doc: &Value) -> Result<Vec<RationalMatrix>> {
    let gens = array(field(doc, "generators")?, "generators")?;
    if gens.is_empty() {
        bail!("generators: empty family");
    }
    gens.iter().enumerate().map(|(i, g)| matrix(g, &format!("generators[{i}]"))).collect()
}

pub fn single_matrix(doc: &Value) -> Result<RationalMatrix> {
    if let Some(m) = doc.get("matrix") {
        return matrix(m, "matrix");
    }
    let mut f = family(doc)?;
    if f.len() != 1 {
        bail!("expected a single matrix under \"matrix\"");
    }
    Ok(f.remove(0))
}

/// `"p/q"`, `{"re": .., "im": ..}`, or `{"poly": [c0, c1, ..], "root": k}`
/// (index into the roots of `poly`, grouped by irreducible factor).
pub fn algebraic(v: &Value, path: &str) -> Result<AlgebraicNumber> {
    if v.is_string() || v.is_number() {
        return Ok(AlgebraicNumber::from_rational(rational(v, path)?));
    }
    if let (Some(re), Some(im)) = (v.get("re"), v.get("im")) {
        let a = rational(re, &format!("{path}.re"))?;
        let b = rational(im, &format!("{path}.im"))?;
        if b == Rational::from_integer(0.into()) {
            return Ok(AlgebraicNumber::from_rational(a));
        }
        let two = Rational::from_integer(2.into());
        let p = PolyQ::new(vec![&a * &a + &b * &b, -(&two * &a), Rational::from_integer(1.into())]);
        let want_pos = b > Rational::from_integer(0.into());
        return roots(&p)
            .into_iter()
            .map(|(r, _)| r)
            .find(|r| (r.to_f64().1 > 0.0) == want_pos)
            .ok_or_else(|| anyhow!("{path}: no matching root"));
    }
    let poly = PolyQ::new(vector(field(v, "poly").with_context(|| path.to_string())?, &format!("{path}.poly"))?);
    if poly.degree() == 0 {
        bail!("{path}.poly: constant polynomial");
    }
    let k = field(v, "root")?.as_u64().ok_or_else(|| anyhow!("{path}.root: expected an index"))? as usize;
    let rs = roots(&poly);
    rs.get(k).map(|(r, _)| r.clone()).ok_or_else(|| anyhow!("{path}.root: index {k} out of range ({} roots)", rs.len()))
}

pub fn numbers(doc: &Value) -> Result<Vec<AlgebraicNumber>> {
    array(field(doc, "numbers")?, "numbers")?
        .iter()
        .enumerate()
        .map(|(i, x)| algebraic(x, &format!("numbers[{i}]")))
        .collect()
}

/// `{"log": a}`, or `{"terms": [[q, a], ..], "pi": p}` for `sum q log a + i pi p`.
pub fn loglin(v: &Value, path: &str) -> Result<LogLinExpr> {
    if let Some(a) = v.get("log") {
        let a = algebraic(a, &format!("{path}.log"))?;
        if a.is_zero() {
            bail!("{path}: logarithm of zero");
        }
        return Ok(LogLinExpr::log(&a));
    }
    let mut terms = Vec::new();
    if let Some(t) = v.get("terms") {
        for (i, pair) in array(t, &format!("{path}.terms"))?.iter().enumerate() {
            let p = format!("{path}.terms[{i}]");
            let pair = array(pair, &p)?;
            if pair.len() != 2 {
                bail!("{p}: expected [coefficient, number]");
            }
            let a = algebraic(&pair[1], &p)?;
            if a.is_zero() {
                bail!("{p}: logarithm of zero");
            }
            terms.push((rational(&pair[0], &p)?, a));
        }
    }
    let pi = match v.get("pi") {
        Some(p) => rational(p, &format!("{path}.pi"))?,
        None => Rational::from_integer(0.into()),
    };
    Ok(LogLinExpr::new(terms, pi))
}

/// Rows are real parts of log-linear expressions.
pub fn cone_system(doc: &Value) -> Result<ConeSystem> {
    let n = field(doc, "unknowns")?.as_u64().ok_or_else(|| anyhow!("unknowns: expected an integer"))? as usize;
    let mut rows = Vec::new();
    for (i, r) in array(field(doc, "rows")?, "rows")?.iter().enumerate() {
        let p = format!("rows[{i}]");
        rows.push(array(r, &p)?.iter().enumerate().map(|(j, e)| loglin(e, &format!("{p}[{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    let congruence = match doc.get("congruence") {
        Some(c) => Some(
            array(c, "congruence")?
                .iter()
                .enumerate()
                .map(|(j, e)| loglin(e, &format!("congruence[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let mut sys = ConeSystem::from_logs(&rows, congruence, n)?;
    if doc.get("positivity").and_then(Value::as_bool).unwrap_or(false) {
        sys.add_positivity();
    }
    Ok(sys)
}

pub fn pfa(doc: &Value) -> Result<PfaInstance> {
    let u = vector(field(doc, "u")?, "u")?;
    let v = vector(field(doc, "v")?, "v")?;
    let gens = match doc.get("generators") {
        Some(g) => array(g, "generators")?
            .iter()
            .enumerate()
            .map(|(i, m)| matrix(m, &format!("generators[{i}]")))
            .collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    Ok(PfaInstance::new(u, v, gens)?)
}

pub fn matrix_json(m: &RationalMatrix) -> Value {
    Value::from(m.to_strings())
}
