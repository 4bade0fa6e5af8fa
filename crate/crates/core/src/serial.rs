//! Canonical JSON for character expressions and module classes.
//!
//! Rationals, monomials and expressions are stored in their printed forms, which
//! parse back exactly. Output is deterministic: maps are emitted in key order.

use serde::{Deserialize, Serialize};

use crate::basering::Mono;
use crate::error::ParseError;
use crate::expr::Expr;
use crate::rational::{parse_rational, Q};
use crate::tautmod::{ScrollIndex, TautClass};
use crate::tensym::TKey;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalDoc {
    pub coef: String,
    pub base: String,
    /// `(block size, twist)` pairs.
    pub blocks: Vec<(u32, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTermDoc {
    pub node: usize,
    pub n: u32,
    pub j: u32,
    pub payload: ClassDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub m: u32,
    pub diagonal: Vec<DiagonalDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scroll: Vec<NodeTermDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub section: Vec<NodeTermDoc>,
}

fn json_error(e: serde_json::Error) -> ParseError {
    ParseError::new(e.line(), e.to_string())
}

pub fn class_doc(c: &TautClass) -> ClassDoc {
    let node_terms = |map: &std::collections::BTreeMap<ScrollIndex, TautClass>| {
        map.iter()
            .map(|(ix, p)| NodeTermDoc { node: ix.node, n: ix.n, j: ix.j, payload: class_doc(p) })
            .collect()
    };
    ClassDoc {
        m: c.m,
        diagonal: c
            .diag
            .iter()
            .map(|(k, v)| DiagonalDoc {
                coef: v.to_string(),
                base: k.base.to_string(),
                blocks: k.blocks.iter().map(|(n, a)| (*n, a.to_string())).collect(),
            })
            .collect(),
        scroll: node_terms(&c.scroll),
        section: node_terms(&c.section),
    }
}

pub fn class_from_doc(d: &ClassDoc) -> Result<TautClass, ParseError> {
    let mut out = TautClass::zero(d.m);
    for t in &d.diagonal {
        let mut blocks = t
            .blocks
            .iter()
            .map(|(n, a)| Mono::parse(a).map(|m| (*n, m)))
            .collect::<Result<Vec<_>, _>>()?;
        blocks.sort();
        let weight: u32 = blocks.iter().map(|b| b.0).sum();
        if weight != d.m {
            return Err(ParseError::new(0, format!("diagonal of weight {weight} in a class of degree {}", d.m)));
        }
        let coef: Q = parse_rational(&t.coef)?;
        out.diag.insert(TKey { base: Mono::parse(&t.base)?, blocks }, coef);
    }
    for (docs, target) in [(&d.scroll, &mut out.scroll), (&d.section, &mut out.section)] {
        for t in docs {
            target.insert(ScrollIndex { node: t.node, n: t.n, j: t.j }, class_from_doc(&t.payload)?);
        }
    }
    Ok(out)
}

pub fn class_to_json(c: &TautClass) -> String {
    serde_json::to_string_pretty(&class_doc(c)).expect("documents serialize")
}

pub fn class_from_json(s: &str) -> Result<TautClass, ParseError> {
    class_from_doc(&serde_json::from_str(s).map_err(json_error)?)
}

pub fn expr_to_json(e: &Expr) -> String {
    serde_json::to_string(&e.to_string()).expect("strings serialize")
}

pub fn expr_from_json(s: &str) -> Result<Expr, ParseError> {
    let text: String = serde_json::from_str(s).map_err(json_error)?;
    Expr::parse(&text)
}
