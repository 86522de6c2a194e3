//! JSON interchange for symmetric functions, characters, ħ-series and graphs.
//!
//! Integers inside coefficients are decimal strings. Terms are written in a
//! canonical order so equal values serialize to identical bytes. Readers
//! validate the shape and report violations with a JSON path.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactsym::{Partition, SymFunc, VirtualCharacter};
use crate::graphzoo::{RawGraph, StableGraph};
use crate::hlaurent::{HLaurent, HMono, StableCharTable, TruncationSpec};
use crate::moduli::{Aux, QSeries, EXACT};
use crate::rational::{parse_rational, Rational};

fn schema(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), msg: msg.into() }
}

fn rational_fields(c: &Rational) -> (String, String) {
    (c.numer().to_string(), c.denom().to_string())
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn int_field(o: &Map<String, Value>, key: &str, path: &str) -> Result<i64> {
    let p = format!("{path}.{key}");
    field(o, key, path)?.as_i64().ok_or_else(|| schema(&p, "expected an integer"))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn coefficient(o: &Map<String, Value>, path: &str) -> Result<Rational> {
    let num = field(o, "num", path)?.as_str().ok_or_else(|| schema(&format!("{path}.num"), "expected a decimal string"))?;
    let den = field(o, "den", path)?.as_str().ok_or_else(|| schema(&format!("{path}.den"), "expected a decimal string"))?;
    parse_rational(num, den).ok_or_else(|| schema(path, format!("invalid rational {num}/{den}")))
}

fn partition(v: &Value, path: &str) -> Result<Partition> {
    let parts = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &format!("{path}[{i}]")).map(|k| k as u32))
        .collect::<Result<Vec<u32>>>()?;
    Partition::new(parts.clone()).map_err(|_| schema(path, format!("{parts:?} is not a weakly decreasing list of positive parts")))
}

fn parts_json(p: &Partition) -> Value {
    Value::from(p.parts().to_vec())
}

/// Serializes to pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))
}

pub fn symfunc_to_json(f: &SymFunc) -> Value {
    let terms: Vec<Value> = f
        .iter()
        .map(|(p, c)| {
            let (num, den) = rational_fields(c);
            json!({"partition": parts_json(p), "num": num, "den": den})
        })
        .collect();
    json!({"max_weight": f.max_weight(), "terms": terms})
}

pub fn symfunc_from_json(v: &Value) -> Result<SymFunc> {
    let o = object(v, "$")?;
    let w = int_field(o, "max_weight", "$")?;
    if w < 0 {
        return Err(schema("$.max_weight", "must be non-negative"));
    }
    let mut terms = Vec::new();
    for (i, t) in array(field(o, "terms", "$")?, "$.terms")?.iter().enumerate() {
        let path = format!("$.terms[{i}]");
        let to = object(t, &path)?;
        let p = partition(field(to, "partition", &path)?, &format!("{path}.partition"))?;
        if p.weight() as i64 > w {
            return Err(schema(&path, format!("partition weight {} exceeds max_weight {w}", p.weight())));
        }
        terms.push((p, coefficient(to, &path)?));
    }
    Ok(SymFunc::from_terms(w as u32, terms))
}

pub fn character_to_json(chi: &VirtualCharacter) -> Value {
    let values: Vec<Value> = chi
        .values()
        .iter()
        .map(|(p, c)| {
            let (num, den) = rational_fields(c);
            json!({"cycle_type": parts_json(p), "num": num, "den": den})
        })
        .collect();
    json!({"n": chi.n(), "values": values})
}

pub fn character_from_json(v: &Value) -> Result<VirtualCharacter> {
    let o = object(v, "$")?;
    let n = uint(field(o, "n", "$")?, "$.n")? as u32;
    let mut values = BTreeMap::new();
    for (i, t) in array(field(o, "values", "$")?, "$.values")?.iter().enumerate() {
        let path = format!("$.values[{i}]");
        let to = object(t, &path)?;
        let p = partition(field(to, "cycle_type", &path)?, &format!("{path}.cycle_type"))?;
        if p.weight() != n {
            return Err(schema(&format!("{path}.cycle_type"), format!("weight {} differs from n = {n}", p.weight())));
        }
        values.insert(p, coefficient(to, &path)?);
    }
    VirtualCharacter::new(n, values)
}

/// `{"entries": [{"genus": g, "legs": n, "character": {...}}]}`.
pub fn table_to_json(t: &StableCharTable) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .iter()
        .map(|(&(g, n), chi)| json!({"genus": g, "legs": n, "character": character_to_json(chi)}))
        .collect();
    json!({"entries": entries})
}

pub fn table_from_json(v: &Value) -> Result<StableCharTable> {
    let o = object(v, "$")?;
    let mut table = StableCharTable::new();
    for (i, e) in array(field(o, "entries", "$")?, "$.entries")?.iter().enumerate() {
        let path = format!("$.entries[{i}]");
        let eo = object(e, &path)?;
        let g = uint(field(eo, "genus", &path)?, &format!("{path}.genus"))? as u32;
        let n = uint(field(eo, "legs", &path)?, &format!("{path}.legs"))? as u32;
        let chi = character_from_json(field(eo, "character", &path)?).map_err(|e| match e {
            Error::Schema { path: inner, msg } => schema(&format!("{path}.character{}", &inner[1..]), msg),
            other => schema(&path, other.to_string()),
        })?;
        table.insert(g, n, chi).map_err(|e| schema(&path, e.to_string()))?;
    }
    Ok(table)
}

pub fn hlaurent_to_json(f: &HLaurent) -> Value {
    let mut keys: Vec<(&HMono, &Rational)> = f.iter().collect();
    keys.sort_by(|a, b| a.0.weight().cmp(&b.0.weight()).then_with(|| a.0.cmp(b.0)));
    let terms: Vec<Value> = keys
        .into_iter()
        .map(|(k, c)| {
            let (num, den) = rational_fields(c);
            json!({"hexp_x2": k.h2, "p": parts_json(&k.p), "q": parts_json(&k.q), "num": num, "den": den})
        })
        .collect();
    let t = f.trunc();
    let mut trunc = json!({"max_weight": t.max_weight, "hexp_min_x2": t.hexp_min_x2});
    if let Some(q) = t.q_max {
        trunc["q_max"] = Value::from(q);
    }
    json!({"trunc": trunc, "terms": terms})
}

pub fn hlaurent_from_json(v: &Value) -> Result<HLaurent> {
    let o = object(v, "$")?;
    let to = object(field(o, "trunc", "$")?, "$.trunc")?;
    let max_weight = int_field(to, "max_weight", "$.trunc")?;
    let hexp_min_x2 = int_field(to, "hexp_min_x2", "$.trunc")? as i32;
    let q_max = match to.get("q_max") {
        None | Some(Value::Null) => None,
        Some(q) => Some(uint(q, "$.trunc.q_max")? as u32),
    };
    let trunc = TruncationSpec { max_weight, hexp_min_x2, q_max };
    let mut terms = Vec::new();
    for (i, t) in array(field(o, "terms", "$")?, "$.terms")?.iter().enumerate() {
        let path = format!("$.terms[{i}]");
        let tt = object(t, &path)?;
        let h2 = int_field(tt, "hexp_x2", &path)? as i32;
        if h2 < hexp_min_x2 {
            return Err(schema(&format!("{path}.hexp_x2"), format!("{h2} is below hexp_min_x2 {hexp_min_x2}")));
        }
        let p = partition(field(tt, "p", &path)?, &format!("{path}.p"))?;
        let q = match tt.get("q") {
            None => Partition::empty(),
            Some(q) => partition(q, &format!("{path}.q"))?,
        };
        let m = HMono::new(h2, p, q);
        if m.weight() > max_weight {
            return Err(schema(&path, format!("term weight {} exceeds max_weight {max_weight}", m.weight())));
        }
        terms.push((m, coefficient(tt, &path)?));
    }
    Ok(HLaurent::from_terms(trunc, terms))
}

fn aux_name(aux: Aux) -> Option<String> {
    match aux {
        Aux::None => None,
        other => Some(other.name()),
    }
}

fn parse_aux(s: &str, path: &str) -> Result<Aux> {
    match s {
        "x" => Ok(Aux::X),
        "xi" => Ok(Aux::Xi),
        _ => s
            .strip_prefix('q')
            .and_then(|n| n.parse::<u32>().ok())
            .filter(|&n| n > 0)
            .map(Aux::Q)
            .ok_or_else(|| schema(path, format!("unknown auxiliary variable \"{s}\""))),
    }
}

pub fn qseries_to_json(s: &QSeries) -> Value {
    let mut keys: Vec<(&(i32, u32), &Rational)> = s.terms().iter().collect();
    keys.sort_by(|a, b| s.weight(*a.0).cmp(&s.weight(*b.0)).then_with(|| a.0.cmp(b.0)));
    let terms: Vec<Value> = keys
        .into_iter()
        .map(|(&(h2, deg), c)| {
            let (num, den) = rational_fields(c);
            let mut t = json!({"exp_x2": h2, "num": num, "den": den});
            if s.aux() != Aux::None {
                t["deg"] = Value::from(deg);
            }
            t
        })
        .collect();
    let mut out = json!({"var": "hbar", "half_exponents": true, "terms": terms});
    if s.max_weight() < EXACT {
        out["max_weight"] = Value::from(s.max_weight());
    }
    if let Some(a) = aux_name(s.aux()) {
        out["aux"] = Value::from(a);
    }
    out
}

pub fn qseries_from_json(v: &Value) -> Result<QSeries> {
    let o = object(v, "$")?;
    if field(o, "var", "$")?.as_str() != Some("hbar") {
        return Err(schema("$.var", "expected \"hbar\""));
    }
    if field(o, "half_exponents", "$")?.as_bool() != Some(true) {
        return Err(schema("$.half_exponents", "expected true"));
    }
    let aux = match o.get("aux") {
        None | Some(Value::Null) => Aux::None,
        Some(a) => parse_aux(a.as_str().ok_or_else(|| schema("$.aux", "expected a string"))?, "$.aux")?,
    };
    let max_weight = match o.get("max_weight") {
        None | Some(Value::Null) => EXACT,
        Some(_) => int_field(o, "max_weight", "$")?,
    };
    let mut terms = Vec::new();
    for (i, t) in array(field(o, "terms", "$")?, "$.terms")?.iter().enumerate() {
        let path = format!("$.terms[{i}]");
        let tt = object(t, &path)?;
        let h2 = int_field(tt, "exp_x2", &path)? as i32;
        let deg = match tt.get("deg") {
            None => 0,
            Some(d) => uint(d, &format!("{path}.deg"))? as u32,
        };
        if aux == Aux::None && deg != 0 {
            return Err(schema(&format!("{path}.deg"), "degree given without an auxiliary variable"));
        }
        terms.push(((h2, deg), coefficient(tt, &path)?));
    }
    Ok(QSeries::from_terms(aux, max_weight, terms))
}

pub fn graph_to_json(g: &StableGraph) -> Value {
    let legs = match g.leg_labels() {
        Some(map) => Value::Object(map.iter().map(|(f, l)| (f.to_string(), Value::from(*l))).collect()),
        None => Value::Null,
    };
    json!({
        "flags": g.num_flags(),
        "involution": g.involution(),
        "vertex_of": g.vertex_of(),
        "genus": g.vertex_genus(),
        "legs": legs,
    })
}

pub fn graph_from_json(v: &Value) -> Result<StableGraph> {
    let o = object(v, "$")?;
    let flags = uint(field(o, "flags", "$")?, "$.flags")? as usize;
    let list = |key: &str| -> Result<Vec<u64>> {
        let path = format!("$.{key}");
        array(field(o, key, "$")?, &path)?.iter().enumerate().map(|(i, x)| uint(x, &format!("{path}[{i}]"))).collect()
    };
    let involution: Vec<usize> = list("involution")?.into_iter().map(|x| x as usize).collect();
    let vertex_of: Vec<usize> = list("vertex_of")?.into_iter().map(|x| x as usize).collect();
    let genus: Vec<u32> = list("genus")?.into_iter().map(|x| x as u32).collect();
    if involution.len() != flags {
        return Err(schema("$.involution", format!("{} entries for {flags} flags", involution.len())));
    }
    let legs = match o.get("legs") {
        None | Some(Value::Null) => None,
        Some(l) => {
            let lo = object(l, "$.legs")?;
            let mut map = BTreeMap::new();
            for (k, val) in lo {
                let path = format!("$.legs.{k}");
                let flag: usize = k.parse().map_err(|_| schema(&path, "flag keys must be decimal integers"))?;
                map.insert(flag, uint(val, &path)? as u32);
            }
            Some(map)
        }
    };
    StableGraph::build_validate(RawGraph { involution, vertex_of, genus, legs }).map_err(|e| schema("$", e.to_string()))
}
