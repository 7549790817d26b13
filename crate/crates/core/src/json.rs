//! JSON file formats.
//!
//! Every document carries its field under `"field"` in the field-spec
//! grammar, and elements are strings in that field's element syntax.
//! Indices are 1-based. Syntax errors keep serde's line and column.

use crate::error::{Error, Result};
use crate::field::{AnyField, Field, Gf};
use crate::flags::Flag1368;
use crate::loci::{cubic_monomials, CubicForm};
use crate::matrix::DenseMatrix;
use crate::trivector::{CurveCoeffs, Trivector, CURVE_KEYS, DIM};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    ijk: [usize; 3],
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrivectorDoc {
    field: String,
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveDoc {
    field: String,
    #[serde(default)]
    c: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Monomial {
    exp: [u32; 9],
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicDoc {
    field: String,
    monomials: Vec<Monomial>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagDoc {
    field: String,
    #[serde(rename = "F1")]
    f1: Vec<Vec<String>>,
    #[serde(rename = "F3")]
    f3: Vec<Vec<String>>,
    #[serde(rename = "F6")]
    f6: Vec<Vec<String>>,
    #[serde(rename = "F8")]
    f8: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    field: String,
    rows: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilDoc {
    field: String,
    matrices: Vec<Vec<Vec<String>>>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// The `"field"` entry of a document.
pub fn field_of(text: &str) -> Result<AnyField> {
    #[derive(Deserialize)]
    struct Head {
        field: String,
    }
    AnyField::parse(&parse::<Head>(text)?.field)
}

fn check_field<F: Field>(field: &F, spec: &str) -> Result<()> {
    if AnyField::parse(spec)?.spec() != field.spec() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

fn rows_out<F: Field>(m: &DenseMatrix<F>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|a| m.field.format_elem(a)).collect())
        .collect()
}

fn rows_in<F: Field>(field: &F, rows: &[Vec<String>]) -> Result<Vec<Vec<F::Elem>>> {
    rows.iter()
        .map(|r| r.iter().map(|s| field.parse_elem(s)).collect())
        .collect()
}

fn matrix_in<F: Field>(field: &F, rows: &[Vec<String>]) -> Result<DenseMatrix<F>> {
    let rows = rows_in(field, rows)?;
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(DenseMatrix::from_rows(field.clone(), &rows))
}

pub fn trivector_to_json<F: Field>(t: &Trivector<F>) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .into_iter()
        .map(|(ijk, c)| json!({"ijk": ijk, "c": t.field.format_elem(&c)}))
        .collect();
    json!({"field": t.field.spec().to_string(), "terms": terms})
}

pub fn trivector_from_json<F: Field>(field: &F, text: &str) -> Result<Trivector<F>> {
    let doc: TrivectorDoc = parse(text)?;
    check_field(field, &doc.field)?;
    let mut t = Trivector::zero(field.clone());
    for term in &doc.terms {
        let [i, j, k] = term.ijk;
        if !(1 <= i && i < j && j < k && k <= DIM) {
            return Err(Error::Parse(format!("index triple {:?} is not increasing in 1..=9", term.ijk)));
        }
        t.add_term(term.ijk, &field.parse_elem(&term.c)?)?;
    }
    Ok(t)
}

pub fn curve_to_json<F: Field>(c: &CurveCoeffs<F>) -> Value {
    let mut map = Map::new();
    for (k, v) in CURVE_KEYS.iter().zip(&c.c) {
        if !c.field.is_zero(v) {
            map.insert(k.to_string(), Value::String(c.field.format_elem(v)));
        }
    }
    json!({"field": c.field.spec().to_string(), "c": map})
}

pub fn curve_from_json<F: Field>(field: &F, text: &str) -> Result<CurveCoeffs<F>> {
    let doc: CurveDoc = parse(text)?;
    check_field(field, &doc.field)?;
    let mut c = CurveCoeffs::zero(field.clone());
    for (k, v) in &doc.c {
        let key: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("invalid coefficient key {k:?}")))?;
        c.set(key, field.parse_elem(v)?)?;
    }
    Ok(c)
}

pub fn cubic_to_json(cubic: &CubicForm) -> Value {
    let f = &cubic.field;
    let monomials: Vec<Value> = cubic_monomials()
        .iter()
        .zip(&cubic.coeffs)
        .filter(|(_, c)| **c != 0)
        .map(|(e, c)| json!({"exp": e, "c": f.format_elem(c)}))
        .collect();
    json!({"field": f.spec().to_string(), "monomials": monomials})
}

pub fn cubic_from_json(field: &Gf, text: &str) -> Result<CubicForm> {
    let doc: CubicDoc = parse(text)?;
    check_field(field, &doc.field)?;
    let mut coeffs = vec![0u64; cubic_monomials().len()];
    for m in &doc.monomials {
        let pos = cubic_monomials()
            .iter()
            .position(|e| *e == m.exp)
            .ok_or_else(|| Error::Parse(format!("{:?} is not a cubic monomial", m.exp)))?;
        coeffs[pos] = field.add(&coeffs[pos], &field.parse_elem(&m.c)?);
    }
    Ok(CubicForm { field: field.clone(), coeffs })
}

pub fn flag_to_json<F: Field>(flag: &Flag1368<F>) -> Value {
    let mut map = Map::new();
    map.insert("field".into(), Value::String(flag.field.spec().to_string()));
    for (i, key) in ["F1", "F3", "F6", "F8"].iter().enumerate() {
        map.insert((*key).into(), json!(rows_out(&flag.spaces[i])));
    }
    Value::Object(map)
}

pub fn flag_from_json<F: Field>(field: &F, text: &str) -> Result<Flag1368<F>> {
    let doc: FlagDoc = parse(text)?;
    check_field(field, &doc.field)?;
    Flag1368::new(
        field.clone(),
        [
            rows_in(field, &doc.f1)?,
            rows_in(field, &doc.f3)?,
            rows_in(field, &doc.f6)?,
            rows_in(field, &doc.f8)?,
        ],
    )
}

pub fn matrix_to_json<F: Field>(m: &DenseMatrix<F>) -> Value {
    json!({"field": m.field.spec().to_string(), "rows": rows_out(m)})
}

pub fn matrix_from_json<F: Field>(field: &F, text: &str) -> Result<DenseMatrix<F>> {
    let doc: MatrixDoc = parse(text)?;
    check_field(field, &doc.field)?;
    matrix_in(field, &doc.rows)
}

/// A pencil is the list of nine 9×9 matrices `W_1, …, W_9`.
pub fn pencil_to_json<F: Field>(w: &[DenseMatrix<F>]) -> Value {
    let field = w.first().map(|m| m.field.spec().to_string()).unwrap_or_default();
    let matrices: Vec<Value> = w.iter().map(|m| json!(rows_out(m))).collect();
    json!({"field": field, "matrices": matrices})
}

pub fn pencil_from_json<F: Field>(field: &F, text: &str) -> Result<Vec<DenseMatrix<F>>> {
    let doc: PencilDoc = parse(text)?;
    check_field(field, &doc.field)?;
    doc.matrices.iter().map(|m| matrix_in(field, m)).collect()
}
