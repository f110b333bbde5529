//! Reading inputs from JSON and rendering results back.

use crate::JobError;
use polyaut::poly::parse_scalar;
use polyaut::{
    Derivation, ElementaryFactor, Field, FlowLaw, MonomialOrder, MultiPoly, ParametricMap, PolyMap, PolyRing, Ring,
    Scalar, SquareMatrix,
};
use serde_json::{json, Value};

pub type Res<T> = Result<T, JobError>;

pub fn get<'a>(inputs: &'a Value, key: &str) -> Res<&'a Value> {
    inputs.get(key).ok_or_else(|| JobError::input(format!("missing input `{key}`")))
}

pub fn opt<'a>(inputs: &'a Value, key: &str) -> Option<&'a Value> {
    inputs.get(key).filter(|v| !v.is_null())
}

pub fn uint(v: &Value, what: &str) -> Res<u64> {
    v.as_u64().ok_or_else(|| JobError::input(format!("`{what}` must be a nonnegative integer")))
}

pub fn int(v: &Value, what: &str) -> Res<i64> {
    v.as_i64().ok_or_else(|| JobError::input(format!("`{what}` must be an integer")))
}

pub fn text<'a>(v: &'a Value, what: &str) -> Res<&'a str> {
    v.as_str().ok_or_else(|| JobError::input(format!("`{what}` must be a string")))
}

fn array<'a>(v: &'a Value, what: &str) -> Res<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| JobError::input(format!("`{what}` must be an array")))
}

/// The ring from `vars` (and optional `order`) in the inputs.
pub fn ring(field: &Field, inputs: &Value) -> Res<Ring> {
    let vars = array(get(inputs, "vars")?, "vars")?
        .iter()
        .map(|v| text(v, "vars").map(str::to_string))
        .collect::<Res<Vec<_>>>()?;
    let order = match opt(inputs, "order") {
        Some(o) => serde_json::from_value::<MonomialOrder>(o.clone())
            .map_err(|_| JobError::input("`order` must be \"lex\" or \"degrevlex\""))?,
        None => MonomialOrder::Lex,
    };
    Ok(PolyRing::new(field.clone(), &vars, order)?)
}

pub fn scalar(field: &Field, v: &Value) -> Res<Scalar> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(JobError::input(format!("expected a scalar, got {v}"))),
    };
    Ok(parse_scalar(field, &s)?)
}

pub fn poly(r: &Ring, v: &Value) -> Res<MultiPoly> {
    match v {
        Value::String(s) => Ok(MultiPoly::parse(r, s)?),
        Value::Number(n) => Ok(MultiPoly::parse(r, &n.to_string())?),
        _ => Err(JobError::input(format!("expected a polynomial string, got {v}"))),
    }
}

pub fn polys(r: &Ring, v: &Value, what: &str) -> Res<Vec<MultiPoly>> {
    array(v, what)?.iter().map(|p| poly(r, p)).collect()
}

fn factor(r: &Ring, v: &Value) -> Res<ElementaryFactor> {
    let field = r.field();
    if let Some(a) = v.get("affine") {
        let rows = array(get(a, "matrix")?, "matrix")?
            .iter()
            .map(|row| array(row, "matrix row")?.iter().map(|s| scalar(field, s)).collect::<Res<Vec<_>>>())
            .collect::<Res<Vec<_>>>()?;
        let matrix = SquareMatrix::new(field, rows)?;
        let shift = match opt(a, "shift") {
            Some(s) => array(s, "shift")?.iter().map(|s| scalar(field, s)).collect::<Res<Vec<_>>>()?,
            None => vec![field.zero(); r.nvars()],
        };
        return Ok(ElementaryFactor::Affine { matrix, shift });
    }
    if let Some(e) = v.get("elem") {
        let var = text(get(e, "var")?, "var")?;
        let target = r.var_index(var).ok_or_else(|| JobError::input(format!("unknown variable `{var}`")))?;
        let p = poly(r, get(e, "P")?)?;
        return Ok(ElementaryFactor::Elementary { target, p });
    }
    if let Some(p) = v.get("perm") {
        let sigma = array(p, "perm")?.iter().map(|i| uint(i, "perm").map(|i| i as usize)).collect::<Res<Vec<_>>>()?;
        return Ok(ElementaryFactor::Permutation(sigma));
    }
    Err(JobError::input(format!("word factor must be affine, elem or perm: {v}")))
}

/// A map given by `{"coords": [...]}` or `{"word": [...]}`.
pub fn map(r: &Ring, v: &Value) -> Res<PolyMap> {
    if let Some(c) = v.get("coords") {
        return Ok(PolyMap::new(r, polys(r, c, "coords")?)?);
    }
    if let Some(w) = v.get("word") {
        let word = array(w, "word")?.iter().map(|f| factor(r, f)).collect::<Res<Vec<_>>>()?;
        return Ok(PolyMap::from_word(r, word)?);
    }
    Err(JobError::input("a map needs `coords` or `word`"))
}

pub fn derivation(r: &Ring, v: &Value) -> Res<Derivation> {
    Ok(Derivation::new(r, polys(r, v, "derivation")?)?)
}

/// `{"param": "u", "law": "additive", "coords": [...], "denom_power": 0}`.
pub fn flow(r: &Ring, v: &Value) -> Res<ParametricMap> {
    let param = text(get(v, "param")?, "param")?;
    let law: FlowLaw = serde_json::from_value(get(v, "law")?.clone())
        .map_err(|_| JobError::input("`law` must be \"additive\" or \"multiplicative\""))?;
    let coords = array(get(v, "coords")?, "coords")?
        .iter()
        .map(|c| text(c, "coords").map(str::to_string))
        .collect::<Res<Vec<_>>>()?;
    let n = opt(v, "denom_power").map(|d| uint(d, "denom_power")).transpose()?.unwrap_or(0);
    Ok(ParametricMap::parse(r, param, law, &coords, n as u32)?)
}

pub fn point(field: &Field, v: &Value) -> Res<Vec<Scalar>> {
    array(v, "point")?.iter().map(|s| scalar(field, s)).collect()
}

pub fn shown<T: ToString>(items: &[T]) -> Value {
    Value::Array(items.iter().map(|p| Value::String(p.to_string())).collect())
}

pub fn matrix_json(m: &SquareMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| shown(r)).collect())
}

pub fn map_json(f: &PolyMap) -> Value {
    json!({ "coords": shown(f.coords()) })
}
