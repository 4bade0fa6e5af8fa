//! Polynomials over Q in named character symbols (`d`, `g`, `L2`, `sigma`, ...).
//!
//! Every zero-dimensional class evaluates to one of these.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::ParseError;
use crate::rational::{parse_rational, Q};

/// A monomial in character symbols: sorted `(name, exponent)` pairs, exponents positive.
pub type ExprMono = Vec<(String, u32)>;

/// Polynomial in character symbols with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr {
    terms: BTreeMap<ExprMono, Q>,
}

fn mono_mul(a: &ExprMono, b: &ExprMono) -> ExprMono {
    let mut m: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (k, e) in b {
        *m.entry(k.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(Vec::new(), c);
        e
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Q::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        let mut e = Self::zero();
        e.add_term(vec![(name.to_string(), 1)], Q::one());
        e
    }

    /// The fiber degree of the canonical class, `2g - 2`.
    pub fn canonical_degree(genus: &Expr) -> Self {
        genus * &Expr::int(2) - Expr::int(2)
    }

    pub fn add_term(&mut self, m: ExprMono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExprMono, &Q)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// The value if this expression is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Coefficient of an exact monomial given as `(name, exponent)` pairs.
    pub fn coefficient(&self, mono: &[(&str, u32)]) -> Q {
        let mut key: ExprMono = mono.iter().map(|(n, e)| (n.to_string(), *e)).collect();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    /// Substitute each named symbol by an expression; unnamed symbols stay.
    pub fn substitute(&self, subs: &BTreeMap<String, Expr>) -> Self {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut t = Expr::constant(c.clone());
            for (name, e) in m {
                let base = subs.get(name).cloned().unwrap_or_else(|| Expr::var(name));
                for _ in 0..*e {
                    t = &t * &base;
                }
            }
            out += t;
        }
        out
    }

    /// Parse the printed form, e.g. `13*omega2 - 9*sigma` or `1/2*L2*d^2 + 3`.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let src = s.trim();
        if src.is_empty() {
            return Err(ParseError::new(0, "empty expression"));
        }
        let mut out = Expr::zero();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        let mut sign = 1i64;
        let mut expect_term = true;
        let mut cur = String::new();
        let flush = |cur: &mut String, sign: i64, out: &mut Expr| -> Result<(), ParseError> {
            let t = parse_term(cur.trim())?;
            *out += t.scale(&Q::from_integer(sign.into()));
            cur.clear();
            Ok(())
        };
        while i < chars.len() {
            let ch = chars[i];
            if (ch == '+' || ch == '-') && (expect_term || !cur.trim().is_empty()) {
                let prev = cur.trim_end().chars().last();
                let in_exponent_or_ratio = matches!(prev, Some('^') | Some('/') | Some('*'));
                if !in_exponent_or_ratio {
                    if !cur.trim().is_empty() {
                        flush(&mut cur, sign, &mut out)?;
                        sign = 1;
                    }
                    if ch == '-' {
                        sign = -sign;
                    }
                    expect_term = true;
                    i += 1;
                    continue;
                }
            }
            if !ch.is_whitespace() {
                expect_term = false;
            }
            cur.push(ch);
            i += 1;
        }
        if cur.trim().is_empty() {
            return Err(ParseError::new(0, format!("dangling operator in '{src}'")));
        }
        flush(&mut cur, sign, &mut out)?;
        Ok(out)
    }
}

fn parse_term(t: &str) -> Result<Expr, ParseError> {
    if t.is_empty() {
        return Err(ParseError::new(0, "empty term"));
    }
    let mut out = Expr::one();
    for factor in t.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return Err(ParseError::new(0, format!("empty factor in '{t}'")));
        }
        let first = f.chars().next().unwrap_or('0');
        if first.is_ascii_digit() {
            out = out.scale(&parse_rational(f)?);
        } else {
            let (name, exp) = match f.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| ParseError::new(0, format!("bad exponent in '{f}'")))?,
                ),
                None => (f, 1),
            };
            if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || name.starts_with(|c: char| c.is_ascii_digit())
            {
                return Err(ParseError::new(0, format!("bad symbol '{name}'")));
            }
            let v = Expr::var(name);
            for _ in 0..exp {
                out = &out * &v;
            }
        }
    }
    Ok(out)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = m
                .iter()
                .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            if m.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl AddAssign for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += rhs;
        self
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut s = self.clone();
        s += rhs;
        s
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&-Q::one())
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self.clone() + (-rhs.clone())
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}
