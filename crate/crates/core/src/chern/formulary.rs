//! Degree-four monomials on `W^3` over a one-dimensional base with their expected values.
//!
//! Values are written in `b = L²`, `d`, `Lomega`, `omega2`, `sigma` and `K = 2g − 2`.
//! Rows marked `needs_engine` contain `(Γ^(3))²`; the multiplication rules do not reach
//! them and only the module engine evaluates them.

use std::collections::BTreeMap;

use super::wexpr::WMono;
use crate::expr::Expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormularyEntry {
    pub monomial: &'static str,
    pub expected: &'static str,
    pub needs_engine: bool,
}

impl FormularyEntry {
    pub fn mono(&self) -> WMono {
        WMono::parse(self.monomial, 3).expect("table monomials parse")
    }

    /// Expected value in the engine's character symbols.
    pub fn expected_value(&self) -> Expr {
        let raw = Expr::parse(self.expected).expect("table values parse");
        let mut subs = BTreeMap::new();
        subs.insert("b".to_string(), Expr::var("L2"));
        subs.insert("K".to_string(), Expr::parse("2*g - 2").expect("constant parses"));
        raw.substitute(&subs)
    }
}

const fn row(monomial: &'static str, expected: &'static str) -> FormularyEntry {
    FormularyEntry { monomial, expected, needs_engine: false }
}

const fn dag(monomial: &'static str, expected: &'static str) -> FormularyEntry {
    FormularyEntry { monomial, expected, needs_engine: true }
}

/// The table, one row per monomial (index ranges written out).
pub fn formulary() -> Vec<FormularyEntry> {
    vec![
        row("L1^2*L2^2", "0"),
        row("L1*L2*G2^2", "0"),
        row("G2^4", "0"),
        row("L2^3*G3", "0"),
        row("L1^2*L2*L3", "b*d^2"),
        row("L1*L2^2*L3", "b*d^2"),
        row("L1*L2*L3^2", "b*d^2"),
        row("L1^2*L3*G2", "b*d"),
        row("L2^2*L3*G2", "b*d"),
        row("L1*L3^2*G2", "b*d"),
        row("L2*L3^2*G2", "b*d"),
        row("L1*L2*L3*G2", "b*d"),
        row("L1*L2*L3*G3", "3*b*d"),
        row("L3^2*G2^2", "-b*K"),
        row("L3^2*G2*G3", "2*b - b*K"),
        row("L1*L3*G2*G3", "-d*Lomega + 2*b"),
        row("L2*L3*G2*G3", "-d*Lomega + 2*b"),
        row("L1^2*G2*G3", "2*b"),
        row("L1*L2*G2*G3", "2*b"),
        row("L2^2*G2*G3", "2*b"),
        row("L1*L3*G2^2", "-d*Lomega"),
        row("L2*L3*G2^2", "-d*Lomega"),
        row("L1*G2^2*G3", "-2*Lomega"),
        row("L2*G2^2*G3", "-2*Lomega"),
        row("L3*G2^2*G3", "d*omega2 - d*sigma - 2*Lomega"),
        dag("L3*G2*G3^2", "-8*Lomega + d*omega2 - d*sigma"),
        row("G2*G3^3", "26*omega2 - 18*sigma"),
        dag("L1*G2*G3^2", "-8*Lomega"),
        dag("L2*G2*G3^2", "-8*Lomega"),
        dag("G2^2*G3^2", "8*omega2 - 6*sigma"),
        row("L3*G2^3", "d*omega2 - d*sigma"),
        row("G2^3*G3", "2*omega2 - 2*sigma"),
        row("L1^2*L2*G3", "2*b*d"),
        row("L1^2*L3*G3", "2*b*d"),
        row("L1*L2^2*G3", "2*b*d"),
        row("L2^2*L3*G3", "2*b*d"),
        row("L1*L3^2*G3", "2*b*d"),
        row("L2*L3^2*G3", "2*b*d"),
        dag("L1^2*G3^2", "6*b - b*K"),
        dag("L2^2*G3^2", "6*b - b*K"),
        dag("L3^2*G3^2", "6*b - b*K"),
        dag("L1*L2*G3^2", "6*b - 2*d*Lomega"),
        dag("L1*L3*G3^2", "6*b - 2*d*Lomega"),
        dag("L2*L3*G3^2", "6*b - 2*d*Lomega"),
        row("L1*G3^3", "-24*Lomega + d*omega2 - d*sigma"),
        row("L2*G3^3", "-24*Lomega + d*omega2 - d*sigma"),
        row("L3*G3^3", "-24*Lomega + d*omega2 - d*sigma"),
        row("G3^4", "78*omega2 - 54*sigma"),
    ]
}
