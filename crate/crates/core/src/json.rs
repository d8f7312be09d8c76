//! JSON encodings of lattices, targets, weights, ring elements, genera and
//! coefficient tables. Rationals are written as `"p/q"` strings (integers
//! as JSON numbers inside Gram matrices); group orders as decimal strings.

use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::cycle_ring::{CycleRingElement, SubspaceSymbol};
use crate::data;
use crate::error::{Error, Result};
use crate::genus::{GenusClass, GenusData, CLOSURE_NOTE};
use crate::isometry::{AutGroupInfo, IsometryMap};
use crate::lattice::{GramTarget, Lattice};
use crate::linalg::int::IntMatrix;
use crate::linalg::{format_rational, parse_rational, Rational, RationalMatrix};
use crate::qseries::CoefficientTable;
use crate::weights::WeightFunction;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(format!("missing field `{key}`")))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        _ => Err(err(format!("expected an integer or \"p/q\", got {v}"))),
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Integers become numbers and fractions `"p/q"` strings.
fn matrix_entry(r: &Rational) -> Value {
    match crate::linalg::rational_to_i64(r) {
        Some(i) => json!(i),
        None => rational_to_json(r),
    }
}

pub fn rational_matrix_from_json(v: &Value) -> Result<RationalMatrix> {
    let rows = v.as_array().ok_or_else(|| err("matrix must be a list of rows"))?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| err("matrix row must be a list"))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(rows)
}

pub fn rational_matrix_to_json(m: &RationalMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(matrix_entry).collect())).collect())
}

pub fn int_matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| err("matrix must be a list of rows"))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| err("matrix row must be a list"))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| err(format!("expected an integer, got {x}"))))
                .collect()
        })
        .collect()
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    json!(m)
}

pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let gram = rational_matrix_from_json(field(v, "gram")?)?;
    if let Some(rank) = v.get("rank") {
        let rank = rank.as_u64().ok_or_else(|| err("`rank` must be a non-negative integer"))?;
        if rank as usize != gram.rows() {
            return Err(Error::DimensionMismatch(format!("rank {rank} but Gram matrix has {} rows", gram.rows())));
        }
    }
    Lattice::new(gram)
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    json!({ "rank": l.rank(), "gram": rational_matrix_to_json(l.gram()) })
}

/// A square matrix, or a single rational for `n = 1`.
pub fn target_from_json(v: &Value) -> Result<GramTarget> {
    match v {
        Value::Array(_) => GramTarget::new(rational_matrix_from_json(v)?),
        _ => GramTarget::scalar(rational_from_json(v)?),
    }
}

pub fn target_to_json(t: &GramTarget) -> Value {
    rational_matrix_to_json(t.matrix())
}

/// Besides the trivial and table forms, `{n, constant: "p/q"}` is accepted,
/// and a table may list `free` components it does not depend on.
/// Table weights are attached to `base`, which must be given for them.
pub fn weight_from_json(v: &Value, base: Option<&Lattice>) -> Result<WeightFunction> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| err("`n` must be a positive integer"))? as usize;
    if v.get("trivial").and_then(Value::as_bool) == Some(true) {
        return Ok(WeightFunction::trivial(n));
    }
    if let Some(c) = v.get("constant") {
        return Ok(WeightFunction::constant(n, rational_from_json(c)?));
    }
    let base = base.ok_or_else(|| err("a weight table needs a base lattice"))?;
    let modulus = field(v, "modulus")?.as_i64().ok_or_else(|| err("`modulus` must be an integer"))?;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| err("`entries` must be a list"))?
        .iter()
        .map(|e| Ok((int_matrix_from_json(field(e, "residue")?)?, rational_from_json(field(e, "value")?)?)))
        .collect::<Result<Vec<_>>>()?;
    let free: Vec<usize> = match v.get("free") {
        Some(f) => f
            .as_array()
            .ok_or_else(|| err("`free` must be a list of component indices"))?
            .iter()
            .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| err("bad component index")))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    WeightFunction::from_partial_entries(base, n, modulus, &free, entries)
}

pub fn weight_to_json(w: &WeightFunction) -> Value {
    if w.is_trivial() {
        return json!({ "trivial": true, "n": w.n() });
    }
    if let Some(c) = w.constant_value() {
        return json!({ "n": w.n(), "constant": rational_to_json(c) });
    }
    let entries: Vec<Value> = w
        .entries()
        .iter()
        .map(|(res, val)| json!({ "residue": res, "value": rational_to_json(val) }))
        .collect();
    let free = w.free_components();
    if free.is_empty() {
        json!({ "n": w.n(), "modulus": w.modulus(), "entries": entries })
    } else {
        json!({ "n": w.n(), "modulus": w.modulus(), "free": free, "entries": entries })
    }
}

fn symbol_from_json(v: &Value, ambient: Option<usize>) -> Result<(SubspaceSymbol, Rational)> {
    let grade = field(v, "grade")?.as_u64().ok_or_else(|| err("`grade` must be a non-negative integer"))? as usize;
    let basis = int_matrix_from_json(field(v, "basis")?)?;
    let ambient = match (basis.first(), ambient) {
        (Some(row), Some(a)) if row.len() != a => {
            return Err(Error::DimensionMismatch(format!("basis vector of length {} in ambient rank {a}", row.len())))
        }
        (Some(row), _) => row.len(),
        (None, Some(a)) => a,
        (None, None) => return Err(err("zero subspace needs an ambient rank")),
    };
    let coeff = match v.get("coeff") {
        Some(c) => rational_from_json(c)?,
        None => Rational::from_integer(BigInt::from(1)),
    };
    Ok((SubspaceSymbol::new(grade, &basis, ambient)?, coeff))
}

/// Either a list of terms (cutoff and, for zero subspaces, ambient rank
/// supplied by the caller) or `{cutoff, ambient, terms}`.
pub fn ring_element_from_json(v: &Value, cutoff: Option<usize>, ambient: Option<usize>) -> Result<CycleRingElement> {
    let (terms, cutoff, ambient) = match v {
        Value::Array(terms) => (terms, cutoff, ambient),
        Value::Object(_) => {
            let terms = field(v, "terms")?.as_array().ok_or_else(|| err("`terms` must be a list"))?;
            let c = v.get("cutoff").and_then(Value::as_u64).map(|c| c as usize).or(cutoff);
            let a = v.get("ambient").and_then(Value::as_u64).map(|a| a as usize).or(ambient);
            (terms, c, a)
        }
        _ => return Err(err("ring element must be a list of terms or an object")),
    };
    let cutoff = cutoff.ok_or_else(|| err("ring element needs a cutoff"))?;
    let mut z = CycleRingElement::zero(cutoff);
    for t in terms {
        let (sym, coeff) = symbol_from_json(t, ambient)?;
        z.add_term(sym, coeff)?;
    }
    Ok(z)
}

/// The list of terms in canonical order.
pub fn ring_element_to_json(z: &CycleRingElement) -> Value {
    Value::Array(
        z.terms()
            .map(|(s, c)| json!({ "grade": s.grade(), "basis": s.basis(), "coeff": rational_to_json(c) }))
            .collect(),
    )
}

pub fn aut_to_json(a: &AutGroupInfo) -> Value {
    json!({
        "order_O": a.order_o.to_string(),
        "order_SO": a.order_so.to_string(),
        "generators": a.generators.iter().map(|g| int_matrix_to_json(g.matrix())).collect::<Vec<_>>(),
    })
}

fn order_from_json(v: &Value) -> Result<u128> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| err(format!("bad group order `{s}`"))),
        Value::Number(n) => n.as_u64().map(u128::from).ok_or_else(|| err(format!("bad group order {n}"))),
        _ => Err(err("group order must be a decimal string")),
    }
}

/// Reads orders and generators; every generator is checked to fix the Gram matrix.
pub fn aut_from_json(v: &Value, l: &Lattice) -> Result<AutGroupInfo> {
    let generators = match v.get("generators") {
        Some(g) => g
            .as_array()
            .ok_or_else(|| err("`generators` must be a list"))?
            .iter()
            .map(|m| int_matrix_from_json(m).map(IsometryMap::new))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    if let Some(bad) = generators.iter().position(|g| g.dim() != l.rank() || !g.is_automorphism_of(l)) {
        return Err(err(format!("generator {bad} is not an automorphism")));
    }
    let info = AutGroupInfo {
        order_o: order_from_json(field(v, "order_O")?)?,
        order_so: order_from_json(field(v, "order_SO")?)?,
        generators,
    };
    if info.order_so == 0 || !info.order_o.is_multiple_of(info.order_so) || info.order_o / info.order_so > 2 {
        return Err(err("|SO| must divide |O| with quotient 1 or 2"));
    }
    Ok(info)
}

pub fn genus_to_json(g: &GenusData) -> Value {
    let classes: Vec<Value> = g
        .classes
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("gram".into(), rational_matrix_to_json(c.lattice.gram()));
            if let Value::Object(a) = aut_to_json(&c.aut) {
                o.extend(a);
            }
            Value::Object(o)
        })
        .collect();
    json!({
        "base": lattice_to_json(&g.base),
        "neighbor_prime": g.neighbor_prime,
        "scale": g.scale,
        "class_count": g.class_count(),
        "classes": classes,
        "mass": rational_to_json(&g.mass),
        "note": g.note,
    })
}

/// Rebuilds genus data written by [`genus_to_json`]; the mass is recomputed.
pub fn genus_from_json(v: &Value) -> Result<GenusData> {
    let base = lattice_from_json(field(v, "base")?)?;
    let classes = field(v, "classes")?
        .as_array()
        .ok_or_else(|| err("`classes` must be a list"))?
        .iter()
        .map(|c| {
            let lattice = Lattice::new(rational_matrix_from_json(field(c, "gram")?)?)?;
            let aut = aut_from_json(c, &lattice)?;
            Ok(GenusClass { lattice, aut })
        })
        .collect::<Result<Vec<_>>>()?;
    if classes.is_empty() {
        return Err(err("genus has no classes"));
    }
    if let Some(c) = classes.iter().find(|c| c.lattice.rank() != base.rank() || c.lattice.determinant() != base.determinant()) {
        return Err(Error::DimensionMismatch(format!(
            "class of rank {} and determinant {} does not match the base",
            c.lattice.rank(),
            c.lattice.determinant()
        )));
    }
    let mass = classes.iter().map(|c| Rational::new(BigInt::from(1), BigInt::from(c.aut.order_so))).sum();
    if let Some(m) = v.get("mass") {
        if rational_from_json(m)? != mass {
            return Err(err("stated mass disagrees with the class list"));
        }
    }
    Ok(GenusData {
        base,
        classes,
        neighbor_prime: v.get("neighbor_prime").and_then(Value::as_u64).unwrap_or(0),
        mass,
        scale: v.get("scale").and_then(Value::as_i64).unwrap_or(1),
        note: v.get("note").and_then(Value::as_str).unwrap_or(CLOSURE_NOTE).to_string(),
    })
}

pub fn coefficient_table_to_json(t: &CoefficientTable) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .map(|e| {
            json!({
                "T": target_to_json(&e.target),
                "certified": e.certified,
                "rep": e.reps.iter().map(rational_to_json).collect::<Vec<_>>(),
                "A": rational_to_json(&e.average),
            })
        })
        .collect();
    json!({ "n": t.n, "bound": rational_to_json(&t.bound), "entries": entries })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed with a trailing newline.
pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// A bundled lattice name (`E8`, `D16+`, `I3`, …) or a path to a lattice file.
pub fn load_lattice(arg: &str) -> Result<Lattice> {
    if let Some(l) = data::by_name(arg) {
        if !Path::new(arg).exists() {
            return Ok(l);
        }
    }
    lattice_from_json(&read_json(Path::new(arg))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::SearchLimits;
    use crate::linalg::{rat, ratio};

    #[test]
    fn lattice_round_trip_with_fractions() {
        let v: Value = serde_json::from_str(r#"{"rank":2,"gram":[[1,"1/2"],["1/2",1]]}"#).unwrap();
        let l = lattice_from_json(&v).unwrap();
        assert_eq!(l.gram().get(0, 1), &ratio(1, 2));
        assert_eq!(lattice_from_json(&lattice_to_json(&l)).unwrap(), l);
        let bad: Value = serde_json::from_str(r#"{"rank":3,"gram":[[1]]}"#).unwrap();
        assert!(lattice_from_json(&bad).is_err());
        let float: Value = serde_json::from_str(r#"{"gram":[[1.5]]}"#).unwrap();
        assert!(lattice_from_json(&float).is_err());
    }

    #[test]
    fn weight_forms() {
        let v: Value = serde_json::from_str(r#"{"trivial":true,"n":2}"#).unwrap();
        assert!(weight_from_json(&v, None).unwrap().is_trivial());
        let base = data::identity(2);
        let v: Value =
            serde_json::from_str(r#"{"n":1,"modulus":2,"entries":[{"residue":[[1,0]],"value":"1/2"}]}"#).unwrap();
        let w = weight_from_json(&v, Some(&base)).unwrap();
        assert_eq!(w.evaluate(&[&[3, 4]]), ratio(1, 2));
        assert_eq!(weight_from_json(&weight_to_json(&w), Some(&base)).unwrap(), w);
        assert!(weight_from_json(&v, None).is_err());
        let padded = w.tensor(&WeightFunction::trivial(2)).unwrap();
        assert_eq!(weight_to_json(&padded)["free"], json!([1, 2]));
        assert_eq!(weight_from_json(&weight_to_json(&padded), Some(&base)).unwrap(), padded);
    }

    #[test]
    fn ring_element_round_trip() {
        let v: Value = serde_json::from_str(
            r#"[{"grade":1,"basis":[[2,0,0]],"coeff":"3/2"},{"grade":0,"basis":[],"coeff":1}]"#,
        )
        .unwrap();
        assert!(ring_element_from_json(&v, Some(2), None).is_err());
        let z = ring_element_from_json(&v, Some(2), Some(3)).unwrap();
        assert_eq!(z.grade_sum(1), ratio(3, 2));
        let back = ring_element_to_json(&z);
        assert_eq!(ring_element_from_json(&back, Some(2), Some(3)).unwrap(), z);
        // the basis is saturated on input
        assert_eq!(back[1]["basis"], json!([[1, 0, 0]]));
    }

    #[test]
    fn genus_round_trip() {
        let g = GenusData::single_class(&data::d4(), SearchLimits::default()).unwrap();
        let v = genus_to_json(&g);
        assert_eq!(v["classes"][0]["order_O"], json!("1152"));
        let back = genus_from_json(&v).unwrap();
        assert_eq!(back.mass, g.mass);
        assert_eq!(back.classes[0].aut, g.classes[0].aut);
        let mut tampered = v.clone();
        tampered["mass"] = json!("1/7");
        assert!(genus_from_json(&tampered).is_err());
    }

    #[test]
    fn targets_accept_scalars() {
        assert_eq!(target_from_json(&json!("3/2")).unwrap(), GramTarget::scalar(ratio(3, 2)).unwrap());
        assert_eq!(target_from_json(&json!([[1, 0], [0, 2]])).unwrap().n(), 2);
        assert_eq!(rational_from_json(&json!(5)).unwrap(), rat(5));
    }
}
