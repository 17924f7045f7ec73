//! Structured documents, schema `ncvar-poly/1`.
//!
//! Coefficients are exact `"num/den"` strings; generator, auxiliary and
//! slot indices are 1-based; `sigma` has one entry per base direction.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{CyclicPoly, DiffPoly, Family, Letter, Mode, MultiIndex, Parity, Word, Q};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::jet::DiffOperator;

pub const SCHEMA: &str = "ncvar-poly/1";

/// A value that can be written as a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Poly(DiffPoly),
    Cyclic(CyclicPoly),
    Vector(Vec<DiffPoly>),
    Operator(DiffOperator),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterDoc {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u16>,
    pub generator: u16,
    pub sigma: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coefficient: String,
    pub letters: Vec<LetterDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema: String,
    pub kind: String,
    pub gens: usize,
    pub base_dim: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<TermDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arg_parity: Option<String>,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Cyclic => "cyclic",
        Mode::Commutative => "commutative",
    }
}

fn letter_doc(ctx: &Context, l: &Letter) -> LetterDoc {
    let (family, index) = match l.family {
        Family::A => ("a", None),
        Family::B => ("b", None),
        Family::Aux(k) => ("aux", Some(k as u16 + 1)),
        Family::Slot(k) => ("slot", Some(k as u16 + 1)),
    };
    LetterDoc {
        family: family.to_string(),
        index,
        generator: l.generator as u16 + 1,
        sigma: l.sigma.entries(ctx.base_dim()).to_vec(),
    }
}

fn coefficient_string(c: &Q) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn terms_doc<'a>(ctx: &Context, terms: impl Iterator<Item = (&'a Word, &'a Q)>) -> Vec<TermDoc> {
    terms
        .map(|(w, c)| TermDoc {
            coefficient: coefficient_string(c),
            letters: w.letters().iter().map(|l| letter_doc(ctx, l)).collect(),
        })
        .collect()
}

pub fn to_document(ctx: &Context, v: &Value) -> Document {
    let mut doc = Document {
        schema: SCHEMA.to_string(),
        kind: String::new(),
        gens: ctx.gens(),
        base_dim: ctx.base_dim(),
        mode: mode_name(ctx.mode()).to_string(),
        terms: None,
        components: None,
        arity: None,
        arg_parity: None,
    };
    match v {
        Value::Poly(p) => {
            doc.kind = "poly".into();
            doc.terms = Some(terms_doc(ctx, p.terms()));
        }
        Value::Cyclic(c) => {
            doc.kind = "cyclic".into();
            doc.terms = Some(terms_doc(ctx, c.terms()));
        }
        Value::Vector(rows) => {
            doc.kind = "vector".into();
            doc.components = Some(rows.iter().map(|p| terms_doc(ctx, p.terms())).collect());
        }
        Value::Operator(op) => {
            doc.kind = "operator".into();
            doc.components = Some(op.rows().iter().map(|p| terms_doc(ctx, p.terms())).collect());
            doc.arity = Some(op.arity());
            doc.arg_parity = Some(if op.arg_parity().is_odd() { "odd" } else { "even" }.into());
        }
    }
    doc
}

pub fn to_json(ctx: &Context, v: &Value) -> String {
    serde_json::to_string(&to_document(ctx, v)).expect("documents serialize")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

fn parse_coefficient(s: &str) -> Result<Q> {
    let (n, d) = s.split_once('/').ok_or_else(|| bad(format!("coefficient '{s}' is not num/den")))?;
    let n: BigInt = n.parse().map_err(|_| bad(format!("bad numerator in '{s}'")))?;
    let d: BigInt = d.parse().map_err(|_| bad(format!("bad denominator in '{s}'")))?;
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Q::new(n, d))
}

fn parse_letter(ctx: &Context, l: &LetterDoc) -> Result<Letter> {
    let index = || -> Result<u8> {
        match l.index {
            Some(k) if (1..=256).contains(&k) => Ok((k - 1) as u8),
            _ => Err(bad(format!("family '{}' needs an index in 1..=256", l.family))),
        }
    };
    let family = match l.family.as_str() {
        "a" => Family::A,
        "b" => Family::B,
        "aux" => Family::Aux(index()?),
        "slot" => Family::Slot(index()?),
        f => return Err(bad(format!("unknown family '{f}'"))),
    };
    if matches!(family, Family::A | Family::B) && l.index.is_some() {
        return Err(bad("index only applies to aux and slot letters"));
    }
    if l.generator == 0 || l.generator as usize > ctx.gens() {
        return Err(Error::GeneratorOutOfRange { index: l.generator as usize, gens: ctx.gens() });
    }
    if l.sigma.len() != ctx.base_dim() {
        return Err(bad(format!("sigma has {} entries, base dimension is {}", l.sigma.len(), ctx.base_dim())));
    }
    let sigma = MultiIndex::from_slice(&l.sigma).ok_or_else(|| bad("sigma too long"))?;
    Ok(Letter::new(family, (l.generator - 1) as u8, sigma))
}

fn parse_terms(ctx: &Context, terms: &[TermDoc]) -> Result<Vec<(Word, Q)>> {
    terms
        .iter()
        .map(|t| {
            let letters = t.letters.iter().map(|l| parse_letter(ctx, l)).collect::<Result<Vec<_>>>()?;
            Ok((Word::new(letters), parse_coefficient(&t.coefficient)?))
        })
        .collect()
}

fn poly_from(ctx: &Context, terms: &[TermDoc]) -> Result<DiffPoly> {
    Ok(ctx.canon(DiffPoly::from_terms(parse_terms(ctx, terms)?)))
}

/// Reads a document, returning the context it declares and its value.
pub fn from_json(src: &str) -> Result<(Context, Value)> {
    let doc: Document = serde_json::from_str(src).map_err(|e| bad(e.to_string()))?;
    from_document(&doc)
}

pub fn from_document(doc: &Document) -> Result<(Context, Value)> {
    if doc.schema != SCHEMA {
        return Err(bad(format!("unsupported schema '{}'", doc.schema)));
    }
    let mode = match doc.mode.as_str() {
        "cyclic" => Mode::Cyclic,
        "commutative" => Mode::Commutative,
        m => return Err(bad(format!("unknown mode '{m}'"))),
    };
    let ctx = Context::new(doc.gens, doc.base_dim, mode)?;
    let need_terms = || doc.terms.as_deref().ok_or_else(|| bad(format!("kind '{}' needs 'terms'", doc.kind)));
    let need_components = || doc.components.as_deref().ok_or_else(|| bad(format!("kind '{}' needs 'components'", doc.kind)));
    let value = match doc.kind.as_str() {
        "poly" => Value::Poly(poly_from(&ctx, need_terms()?)?),
        "cyclic" => {
            let mut c = CyclicPoly::zero();
            for (w, k) in parse_terms(&ctx, need_terms()?)? {
                c.add_closed(mode, &w, k);
            }
            Value::Cyclic(c)
        }
        "vector" => {
            let rows = need_components()?.iter().map(|t| poly_from(&ctx, t)).collect::<Result<Vec<_>>>()?;
            ctx.check_components(rows.len())?;
            Value::Vector(rows)
        }
        "operator" => {
            let rows = need_components()?.iter().map(|t| poly_from(&ctx, t)).collect::<Result<Vec<_>>>()?;
            let arity = doc.arity.ok_or_else(|| bad("operator needs 'arity'"))?;
            let parity = match doc.arg_parity.as_deref() {
                Some("even") | None => Parity::Even,
                Some("odd") => Parity::Odd,
                Some(p) => return Err(bad(format!("unknown parity '{p}'"))),
            };
            Value::Operator(DiffOperator::from_rows(&ctx, arity, parity, rows)?)
        }
        k => return Err(bad(format!("unknown kind '{k}'"))),
    };
    Ok((ctx, value))
}
