//! Polynomials in the flag classes `L_1..L_m`, `Γ^(2)..Γ^(m)` on the full-flag space `W^m`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::basering::add_to;
use crate::error::{ParseError, Result};
use crate::rational::{parse_rational, q, Q};

/// Monomial `Π L_i^{l[i−1]} Γ^(i)^{g[i−1]}`; `g[0]` is always zero since `Γ^(1) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WMono {
    pub l: Vec<u32>,
    pub g: Vec<u32>,
}

impl WMono {
    pub fn one(m: u32) -> Self {
        WMono { l: vec![0; m as usize], g: vec![0; m as usize] }
    }

    pub fn m(&self) -> u32 {
        self.l.len() as u32
    }

    pub fn degree(&self) -> u32 {
        self.l.iter().sum::<u32>() + self.g.iter().sum::<u32>()
    }

    fn mul(&self, o: &WMono) -> WMono {
        WMono {
            l: self.l.iter().zip(&o.l).map(|(a, b)| a + b).collect(),
            g: self.g.iter().zip(&o.g).map(|(a, b)| a + b).collect(),
        }
    }

    /// Parse `L1^2*G2*G3^2` (or `1`) as a monomial on `W^m`.
    pub fn parse(s: &str, m: u32) -> std::result::Result<WMono, ParseError> {
        let mut out = WMono::one(m);
        let t = s.trim();
        if t == "1" {
            return Ok(out);
        }
        for f in t.split('*') {
            let f = f.trim();
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => {
                    (n, e.trim().parse::<u32>().map_err(|_| ParseError::new(0, format!("bad exponent in '{f}'")))?)
                }
                None => (f, 1),
            };
            let (kind, idx) = if let Some(r) = name.strip_prefix("Gamma") {
                ('G', r)
            } else if let Some(r) = name.strip_prefix('G') {
                ('G', r)
            } else if let Some(r) = name.strip_prefix('L') {
                ('L', r)
            } else {
                return Err(ParseError::new(0, format!("unknown flag class '{name}'")));
            };
            let i: u32 = idx.parse().map_err(|_| ParseError::new(0, format!("bad index in '{name}'")))?;
            if i == 0 || i > m || (kind == 'G' && i == 1) {
                return Err(ParseError::new(0, format!("'{name}' is not a class on W^{m}")));
            }
            let slot = if kind == 'L' { &mut out.l } else { &mut out.g };
            slot[i as usize - 1] += e;
        }
        Ok(out)
    }
}

impl fmt::Display for WMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (p, v) in [("L", &self.l), ("G", &self.g)] {
            for (i, e) in v.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{p}{}", i + 1)),
                    _ => parts.push(format!("{p}{}^{e}", i + 1)),
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Polynomial in flag classes, truncated above `cap = dim W^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WExpr {
    pub m: u32,
    pub cap: u32,
    pub terms: BTreeMap<WMono, Q>,
}

impl WExpr {
    pub fn zero(m: u32, cap: u32) -> Self {
        WExpr { m, cap, terms: BTreeMap::new() }
    }

    pub fn one(m: u32, cap: u32) -> Self {
        Self::mono(WMono::one(m), cap)
    }

    pub fn mono(w: WMono, cap: u32) -> Self {
        let m = w.m();
        let mut e = Self::zero(m, cap);
        if w.degree() <= cap {
            e.terms.insert(w, Q::one());
        }
        e
    }

    /// `L_i`.
    pub fn l(m: u32, cap: u32, i: u32) -> Self {
        let mut w = WMono::one(m);
        w.l[i as usize - 1] = 1;
        Self::mono(w, cap)
    }

    /// `Γ^(i)` pulled back to `W^m`; zero for `i = 1`.
    pub fn gamma(m: u32, cap: u32, i: u32) -> Self {
        if i < 2 {
            return Self::zero(m, cap);
        }
        let mut w = WMono::one(m);
        w.g[i as usize - 1] = 1;
        Self::mono(w, cap)
    }

    /// `Δ^(i) = Γ^(i) − Γ^(i−1)`.
    pub fn delta(m: u32, cap: u32, i: u32) -> Self {
        Self::gamma(m, cap, i).sub(&Self::gamma(m, cap, i - 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &WExpr) -> WExpr {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            add_to(&mut out.terms, k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, o: &WExpr) -> WExpr {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> WExpr {
        let mut out = Self::zero(self.m, self.cap);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    pub fn mul(&self, o: &WExpr) -> WExpr {
        let mut out = Self::zero(self.m, self.cap);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let w = a.mul(b);
                if w.degree() <= self.cap {
                    add_to(&mut out.terms, w, x * y);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> WExpr {
        (0..k).fold(Self::one(self.m, self.cap), |acc, _| acc.mul(self))
    }

    /// Homogeneous part of degree `k`.
    pub fn graded(&self, k: u32) -> WExpr {
        let mut out = Self::zero(self.m, self.cap);
        for (w, v) in &self.terms {
            if w.degree() == k {
                out.terms.insert(w.clone(), v.clone());
            }
        }
        out
    }

    /// Parse a sum like `L1*L2 - 1/2*G2^2 + 3*G3`.
    pub fn parse(s: &str, m: u32, cap: u32) -> Result<WExpr> {
        let mut out = Self::zero(m, cap);
        let src = s.replace('-', "+-");
        for raw in src.split('+') {
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            let (neg, body) = match t.strip_prefix('-') {
                Some(r) => (true, r.trim()),
                None => (false, t),
            };
            let mut coef = Q::one();
            let mut factors = Vec::new();
            for f in body.split('*') {
                let f = f.trim();
                if f.starts_with(|c: char| c.is_ascii_digit()) {
                    coef *= parse_rational(f)?;
                } else {
                    factors.push(f);
                }
            }
            let w = if factors.is_empty() { WMono::one(m) } else { WMono::parse(&factors.join("*"), m)? };
            if neg {
                coef = -coef;
            }
            if w.degree() <= cap {
                add_to(&mut out.terms, w, coef);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for WExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(&WMono, &Q)> = self.terms.iter().collect();
        items.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0.cmp(a.0)));
        for (i, (w, c)) in items.into_iter().enumerate() {
            let neg = *c < Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let ws = w.to_string();
            if ws == "1" {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{ws}")?;
            } else {
                write!(f, "{a}*{ws}")?;
            }
        }
        Ok(())
    }
}
