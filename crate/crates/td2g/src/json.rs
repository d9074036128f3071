//! JSON encodings for matrices, elements, objects, morphisms and cocycles.
//!
//! Integers are written as JSON numbers of arbitrary size, rationals as
//! `[num, den]`, phases as reduced `[num, den]` with `0 ≤ num < den`.
//! Serialization is canonical: maps are emitted in key order, so equal
//! values produce identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::OnceLock;

use jsonschema::JSONSchema;
use num_traits::Zero;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::groups::PseudoOrthogonal;
use crate::intlinalg::{Int, IntMat, IntVec, Phase, Rat, RatVec};
use crate::tdcorr::{NerveModel, TDCocycle};
use crate::twogroup::{section, Mor, Obj};

/// The cocycle file schema, as shipped in `docs/`.
pub const TDCOCYCLE_SCHEMA: &str = include_str!("../../../docs/tdcocycle.schema.json");

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn int_to_json(x: &Int) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("decimal integers are valid JSON numbers"))
}

pub fn int_from_json(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            Int::from_str(&s).map_err(|_| parse_err(format!("expected an integer, got {s}")))
        }
        _ => Err(parse_err(format!("expected an integer, got {v}"))),
    }
}

fn usize_from_json(v: &Value) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("expected a non-negative integer, got {v}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what}: expected an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what}: expected an object")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

pub fn rat_to_json(q: &Rat) -> Value {
    Value::Array(vec![int_to_json(q.numer()), int_to_json(q.denom())])
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    let a = array(v, "rational")?;
    if a.len() != 2 {
        return Err(parse_err("rational: expected [num, den]"));
    }
    let den = int_from_json(&a[1])?;
    if den.is_zero() {
        return Err(parse_err("rational: zero denominator"));
    }
    Ok(Rat::new(int_from_json(&a[0])?, den))
}

pub fn phase_to_json(p: &Phase) -> Value {
    Value::Array(vec![int_to_json(p.numer()), int_to_json(p.denom())])
}

/// Any rational is accepted and reduced mod 1.
pub fn phase_from_json(v: &Value) -> Result<Phase> {
    Ok(Phase::new(rat_from_json(v)?))
}

pub fn intvec_to_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn intvec_from_json(v: &Value) -> Result<IntVec> {
    array(v, "integer vector")?.iter().map(int_from_json).collect()
}

pub fn ratvec_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn ratvec_from_json(v: &Value) -> Result<RatVec> {
    array(v, "rational vector")?.iter().map(rat_from_json).collect()
}

pub fn mat_to_json(m: &IntMat) -> Value {
    let data = (0..m.rows()).map(|i| intvec_to_json(m.row(i))).collect();
    let mut o = Map::new();
    o.insert("rows".into(), m.rows().into());
    o.insert("cols".into(), m.cols().into());
    o.insert("data".into(), Value::Array(data));
    Value::Object(o)
}

pub fn mat_from_json(v: &Value) -> Result<IntMat> {
    let rows = usize_from_json(field(v, "rows")?)?;
    let cols = usize_from_json(field(v, "cols")?)?;
    let data = array(field(v, "data")?, "data")?;
    if data.len() != rows {
        return Err(parse_err(format!("matrix: {} rows listed, {rows} declared", data.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        let row = intvec_from_json(row)?;
        if row.len() != cols {
            return Err(parse_err(format!("matrix: row {i} has {} entries, {cols} declared", row.len())));
        }
        entries.extend(row);
    }
    IntMat::new(rows, cols, entries)
}

/// Reads either a bare matrix or an object with a `"matrix"` field, without
/// checking membership.
pub fn raw_matrix_from_json(v: &Value) -> Result<IntMat> {
    match v.get("matrix") {
        Some(inner) => mat_from_json(inner),
        None => mat_from_json(v),
    }
}

pub fn element_to_json(a: &PseudoOrthogonal) -> Value {
    let mut o = Map::new();
    o.insert("n".into(), a.n().into());
    o.insert("matrix".into(), mat_to_json(a.matrix()));
    Value::Object(o)
}

pub fn element_from_json(v: &Value) -> Result<PseudoOrthogonal> {
    let a = PseudoOrthogonal::check_membership(&raw_matrix_from_json(v)?)?;
    if let Some(n) = v.get("n") {
        let n = usize_from_json(n)?;
        if n != a.n() {
            return Err(Error::Dimension(format!("declared n = {n}, matrix has n = {}", a.n())));
        }
    }
    Ok(a)
}

pub fn obj_to_json(o: &Obj) -> Value {
    let mut m = Map::new();
    m.insert("matrix".into(), mat_to_json(o.g().matrix()));
    m.insert("eta".into(), mat_to_json(o.x()));
    Value::Object(m)
}

/// An object `{"matrix", "eta"}`; without `"eta"` the section object is used.
pub fn obj_from_json(v: &Value) -> Result<Obj> {
    let a = element_from_json(v)?;
    match v.get("eta") {
        Some(x) => Obj::new(a, mat_from_json(x)?),
        None => Ok(section(&a)),
    }
}

pub fn mor_to_json(m: &Mor) -> Value {
    let mut o = Map::new();
    o.insert("src".into(), obj_to_json(m.src()));
    o.insert("dst".into(), obj_to_json(m.dst()));
    o.insert("H".into(), mat_to_json(m.h()));
    o.insert("lin".into(), intvec_to_json(m.lin()));
    Value::Object(o)
}

pub fn mor_from_json(v: &Value) -> Result<Mor> {
    let src = obj_from_json(field(v, "src")?)?;
    let dst = obj_from_json(field(v, "dst")?)?;
    let lin = intvec_from_json(field(v, "lin")?)?;
    let m = Mor::new(src, dst, lin)?;
    if let Some(h) = v.get("H") {
        if mat_from_json(h)? != *m.h() {
            return Err(Error::InvalidMorphism("H differs from X_src − X_dst".into()));
        }
    }
    Ok(m)
}

fn key(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_key(s: &str, len: usize) -> Result<Vec<usize>> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.parse::<usize>().map_err(|_| parse_err(format!("bad index key \"{s}\""))))
        .collect::<Result<_>>()?;
    if parts.len() != len {
        return Err(parse_err(format!("index key \"{s}\" should have {len} entries")));
    }
    Ok(parts)
}

fn point_field<T>(by_point: &BTreeMap<usize, Vec<(Vec<usize>, T)>>, enc: impl Fn(&T) -> Value) -> Value {
    let mut out = Map::new();
    for (p, entries) in by_point {
        let inner: Map<String, Value> = entries.iter().map(|(k, v)| (key(k), enc(v))).collect();
        out.insert(p.to_string(), Value::Object(inner));
    }
    Value::Object(out)
}

pub fn cocycle_to_json(c: &TDCocycle) -> Value {
    let mut o = Map::new();
    o.insert("n".into(), c.n.into());
    o.insert("points".into(), Value::Array(c.nerve.points().map(Value::from).collect()));
    let cover: Map<String, Value> = c
        .nerve
        .cover_map()
        .iter()
        .map(|(p, s)| (p.to_string(), Value::Array(s.iter().map(|&i| Value::from(i)).collect())))
        .collect();
    o.insert("cover".into(), Value::Object(cover));
    let pairs = |m: &BTreeMap<(usize, usize, usize), RatVec>| {
        let mut by: BTreeMap<usize, Vec<(Vec<usize>, RatVec)>> = BTreeMap::new();
        for (&(p, i, j), v) in m {
            by.entry(p).or_default().push((vec![i, j], v.clone()));
        }
        point_field(&by, |v| ratvec_to_json(v))
    };
    o.insert("a".into(), pairs(&c.a));
    o.insert("ahat".into(), pairs(&c.ahat));
    let triples = |m: &BTreeMap<(usize, usize, usize), IntVec>| {
        Value::Object(m.iter().map(|(&(i, j, k), v)| (key(&[i, j, k]), intvec_to_json(v))).collect())
    };
    o.insert("m".into(), triples(&c.m));
    o.insert("mhat".into(), triples(&c.mhat));
    let mut by: BTreeMap<usize, Vec<(Vec<usize>, Phase)>> = BTreeMap::new();
    for (&(p, i, j, k), v) in &c.t {
        by.entry(p).or_default().push((vec![i, j, k], v.clone()));
    }
    o.insert("t".into(), point_field(&by, phase_to_json));
    Value::Object(o)
}

fn schema() -> &'static JSONSchema {
    static SCHEMA: OnceLock<JSONSchema> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        let v: Value = serde_json::from_str(TDCOCYCLE_SCHEMA).expect("shipped schema is valid JSON");
        JSONSchema::compile(&v).expect("shipped schema compiles")
    })
}

pub fn validate_cocycle_schema(v: &Value) -> Result<()> {
    if let Err(errors) = schema().validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        return Err(parse_err(format!("schema: {}", msgs.join("; "))));
    }
    Ok(())
}

/// Reads a cocycle after schema validation and a shape check. The cocycle
/// conditions themselves are left to [`TDCocycle::validate`].
pub fn cocycle_from_json(v: &Value) -> Result<TDCocycle> {
    validate_cocycle_schema(v)?;
    let n = usize_from_json(field(v, "n")?)?;
    let points: BTreeSet<usize> =
        array(field(v, "points")?, "points")?.iter().map(usize_from_json).collect::<Result<_>>()?;
    let mut cover = BTreeMap::new();
    for (p, s) in object(field(v, "cover")?, "cover")? {
        let p = parse_key(p, 1)?[0];
        let s: BTreeSet<usize> = array(s, "cover")?.iter().map(usize_from_json).collect::<Result<_>>()?;
        cover.insert(p, s);
    }
    if cover.keys().copied().collect::<BTreeSet<_>>() != points {
        return Err(Error::InvalidCocycle("cover keys differ from the point list".into()));
    }
    let nerve = NerveModel::new(cover)?;
    let pairs = |name: &str| -> Result<BTreeMap<(usize, usize, usize), RatVec>> {
        let mut out = BTreeMap::new();
        for (p, inner) in object(field(v, name)?, name)? {
            let p = parse_key(p, 1)?[0];
            for (k, val) in object(inner, name)? {
                let ij = parse_key(k, 2)?;
                if !nerve.covers(p, &ij) {
                    return Err(Error::BadIndices(ij, p));
                }
                out.insert((p, ij[0], ij[1]), ratvec_from_json(val)?);
            }
        }
        Ok(out)
    };
    let a = pairs("a")?;
    let ahat = pairs("ahat")?;
    let covered = nerve.covered_triples();
    let triples = |name: &str| -> Result<BTreeMap<(usize, usize, usize), IntVec>> {
        let mut out = BTreeMap::new();
        for (k, val) in object(field(v, name)?, name)? {
            let ijk = parse_key(k, 3)?;
            let key = (ijk[0], ijk[1], ijk[2]);
            if !covered.contains(&key) {
                return Err(Error::InvalidCocycle(format!("{name}: no point lies over {k}")));
            }
            out.insert(key, intvec_from_json(val)?);
        }
        Ok(out)
    };
    let m = triples("m")?;
    let mhat = triples("mhat")?;
    let mut t = BTreeMap::new();
    for (p, inner) in object(field(v, "t")?, "t")? {
        let p = parse_key(p, 1)?[0];
        for (k, val) in object(inner, "t")? {
            let ijk = parse_key(k, 3)?;
            if !nerve.covers(p, &ijk) {
                return Err(Error::BadIndices(ijk, p));
            }
            t.insert((p, ijk[0], ijk[1], ijk[2]), phase_from_json(val)?);
        }
    }
    let c = TDCocycle { n, nerve, a, ahat, m, mhat, t };
    c.check_shape().map_err(|e| Error::InvalidCocycle(e.detail))?;
    Ok(c)
}

/// Canonical text form: compact, keys in insertion order, trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::tdcorr::random_cocycle;

    #[test]
    fn big_integers_round_trip() {
        let x = Int::from_str("-123456789012345678901234567890").unwrap();
        assert_eq!(int_from_json(&int_to_json(&x)).unwrap(), x);
        assert!(int_from_json(&parse("1.5").unwrap()).is_err());
    }

    #[test]
    fn phases_are_reduced() {
        let p = phase_from_json(&parse("[-7, 3]").unwrap()).unwrap();
        assert_eq!(phase_to_json(&p), parse("[2, 3]").unwrap());
    }

    #[test]
    fn matrix_shape_is_checked() {
        let ok = parse(r#"{"rows":2,"cols":2,"data":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(element_from_json(&ok).unwrap(), PseudoOrthogonal::flip(1));
        let bad = parse(r#"{"rows":2,"cols":2,"data":[[0,1]]}"#).unwrap();
        assert!(mat_from_json(&bad).is_err());
    }

    #[test]
    fn cocycle_round_trip_is_canonical() {
        let mut r = rng::seeded(4);
        let c = random_cocycle(2, 3, 3, &mut r);
        let text = to_canonical_string(&cocycle_to_json(&c));
        let back = cocycle_from_json(&parse(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_canonical_string(&cocycle_to_json(&back)), text);
    }

    #[test]
    fn schema_rejects_malformed_cocycles() {
        let mut r = rng::seeded(4);
        let mut v = cocycle_to_json(&random_cocycle(1, 2, 2, &mut r));
        v["t"]["0"]["0,1,1"] = parse("[1, 0]").unwrap();
        assert!(matches!(cocycle_from_json(&v), Err(Error::Parse(_))));
        let mut v = cocycle_to_json(&random_cocycle(1, 2, 2, &mut r));
        v.as_object_mut().unwrap().remove("mhat");
        assert!(cocycle_from_json(&v).is_err());
    }
}
