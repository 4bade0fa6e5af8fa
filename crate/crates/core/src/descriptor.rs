//! The family descriptor file: flat `key = value` lines under `[family]`,
//! `[characters]` and `[node.<id>]` sections. Values are character expressions, so
//! rationals are written `p/q` and unknowns stay symbolic.
//!
//! ```text
//! [family]
//! dim_b = 1
//! genus = 0
//! line_bundles = L
//! symbolic = true      # missing characters evaluate to their own names
//!
//! [characters]
//! d = 6
//! L2 = 0
//!
//! [node.s]
//! weight = 1
//! ```

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::basering::{CharacterTable, FamilyDescriptor, NodeDescriptor};
use crate::error::{ParseError, ValidationError};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

enum Section {
    None,
    Family,
    Characters,
    Node(usize),
}

fn invalid(field: &str, message: impl Into<String>) -> ValidationError {
    ValidationError { field: field.to_string(), message: message.into() }
}

fn parse_bool(v: &str, line: usize) -> Result<bool, ParseError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ParseError::new(line, format!("expected a boolean, got '{v}'"))),
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !s.starts_with(|c: char| c.is_ascii_digit())
}

/// Parse and validate a descriptor; see [`validate`] for the checks.
pub fn parse_descriptor(src: &str) -> Result<FamilyDescriptor, DescriptorError> {
    let mut fam = FamilyDescriptor::smooth(1);
    let mut dim_b: Option<u32> = None;
    let mut section = Section::None;
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(head) = text.strip_prefix('[') {
            let name = head
                .strip_suffix(']')
                .ok_or_else(|| ParseError::new(line, format!("unterminated section header '{text}'")))?
                .trim();
            section = match name {
                "family" => Section::Family,
                "characters" => Section::Characters,
                _ => match name.strip_prefix("node.") {
                    Some(id) if valid_name(id) => {
                        if fam.nodes.iter().any(|n| n.id == id) {
                            return Err(ParseError::new(line, format!("duplicate node '{id}'")).into());
                        }
                        fam.nodes.push(NodeDescriptor {
                            id: id.to_string(),
                            weight: Expr::one(),
                            table: CharacterTable::symbolic(),
                        });
                        Section::Node(fam.nodes.len() - 1)
                    }
                    _ => return Err(ParseError::new(line, format!("unknown section '{name}'")).into()),
                },
            };
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| ParseError::new(line, format!("expected 'key = value', got '{text}'")))?;
        if !valid_name(key) {
            return Err(ParseError::new(line, format!("bad key '{key}'")).into());
        }
        if value.is_empty() {
            return Err(ParseError::new(line, format!("missing value for '{key}'")).into());
        }
        let expr = || Expr::parse(value).map_err(|e| e.at_line(line));
        match section {
            Section::None => return Err(ParseError::new(line, "key outside of any section").into()),
            Section::Family => match key {
                "dim_b" => {
                    dim_b = Some(value.parse().map_err(|_| ParseError::new(line, format!("dim_b must be a non-negative integer, got '{value}'")))?)
                }
                "genus" => fam.genus = expr()?,
                "line_bundles" => {
                    let names: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                    if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
                        return Err(ParseError::new(line, format!("bad line bundle name '{bad}'")).into());
                    }
                    fam.line_bundles = names;
                }
                "symbolic" => fam.characters.symbolic_defaults = parse_bool(value, line)?,
                _ => return Err(ParseError::new(line, format!("unknown family key '{key}'")).into()),
            },
            Section::Characters => fam.characters.set(key, expr()?),
            Section::Node(i) => match key {
                "weight" => fam.nodes[i].weight = expr()?,
                "symbolic" => fam.nodes[i].table.symbolic_defaults = parse_bool(value, line)?,
                _ => fam.nodes[i].table.set(key, expr()?),
            },
        }
    }
    fam.dim_b = dim_b.ok_or_else(|| invalid("dim_b", "missing from [family]"))?;
    validate(&fam)?;
    Ok(fam)
}

/// `dim_b ≥ 1`, a non-negative integral genus when numeric, positive node weights when
/// numeric, at least one line bundle, distinct symbol names.
pub fn validate(fam: &FamilyDescriptor) -> Result<(), ValidationError> {
    if fam.dim_b < 1 {
        return Err(invalid("dim_b", "a family needs a base of dimension at least 1"));
    }
    if let Some(g) = fam.genus.as_constant() {
        if g.is_negative() || !g.is_integer() {
            return Err(invalid("genus", format!("must be a non-negative integer, got {g}")));
        }
    }
    if fam.line_bundles.is_empty() {
        return Err(invalid("line_bundles", "at least one line bundle is required"));
    }
    let mut names = fam.line_bundles.clone();
    names.sort();
    names.dedup();
    if names.len() != fam.line_bundles.len() || names.iter().any(|n| n == crate::basering::CANONICAL) {
        return Err(invalid("line_bundles", "names must be distinct and differ from the canonical class"));
    }
    for n in &fam.nodes {
        if let Some(w) = n.weight.as_constant() {
            if w.is_zero() || w.is_negative() {
                return Err(invalid(&format!("node.{}.weight", n.id), format!("must be positive, got {w}")));
            }
        }
    }
    Ok(())
}

/// Read and parse a descriptor file; I/O failures are reported as line 0.
pub fn load_descriptor(path: &std::path::Path) -> Result<FamilyDescriptor, DescriptorError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| ParseError::new(0, format!("cannot read {}: {e}", path.display())))?;
    parse_descriptor(&src)
}

/// The descriptor in file form; [`parse_descriptor`] reads it back to an equal value.
pub fn write_descriptor(fam: &FamilyDescriptor) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[family]");
    let _ = writeln!(s, "dim_b = {}", fam.dim_b);
    let _ = writeln!(s, "genus = {}", fam.genus);
    let _ = writeln!(s, "line_bundles = {}", fam.line_bundles.join(", "));
    let _ = writeln!(s, "symbolic = {}", fam.characters.symbolic_defaults);
    if !fam.characters.values.is_empty() {
        let _ = writeln!(s, "\n[characters]");
        for (k, v) in &fam.characters.values {
            let _ = writeln!(s, "{k} = {v}");
        }
    }
    for n in &fam.nodes {
        let _ = writeln!(s, "\n[node.{}]", n.id);
        let _ = writeln!(s, "weight = {}", n.weight);
        let _ = writeln!(s, "symbolic = {}", n.table.symbolic_defaults);
        for (k, v) in &n.table.values {
            let _ = writeln!(s, "{k} = {v}");
        }
    }
    s
}
