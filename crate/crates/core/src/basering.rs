//! The graded base ring R of named symbols, its relations, family descriptors and
//! the top-degree evaluation map into characters.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{EngineError, ParseError, Result};
use crate::expr::Expr;
use crate::rational::{q, Q};

pub const CANONICAL: &str = "omega";
pub const THETA_X: &str = "theta_x";
pub const THETA_Y: &str = "theta_y";
pub const PSI_X: &str = "psi_x";
pub const PSI_Y: &str = "psi_y";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// The relative dualizing class.
    Canonical,
    LineBundle,
    /// Restriction of a line bundle along a node section; lives on the boundary base.
    SectionPullback,
    /// Cotangent class of a node branch; lives on the boundary base.
    Psi,
    /// A node-branch section on the partial normalization.
    Section,
    Unit,
}

impl SymbolKind {
    /// Whether the symbol is pulled back from the base of its ring.
    pub fn from_base(self) -> bool {
        matches!(self, SymbolKind::SectionPullback | SymbolKind::Psi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSymbol {
    pub name: String,
    pub degree: u32,
    pub kind: SymbolKind,
    /// For sections: the psi symbol in `theta^2 = -psi*theta`.
    pub psi: Option<String>,
}

/// A monomial: symbol name to positive exponent, ordered lexicographically by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(BTreeMap<String, u32>);

impl Mono {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn symbol(name: &str) -> Self {
        Self::power(name, 1)
    }

    pub fn power(name: &str, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(name.to_string(), e);
        }
        Mono(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &u32)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.0.clone();
        for (k, e) in &other.0 {
            *m.entry(k.clone()).or_insert(0) += e;
        }
        Mono(m)
    }

    pub fn set(&mut self, name: &str, e: u32) {
        if e == 0 {
            self.0.remove(name);
        } else {
            self.0.insert(name.to_string(), e);
        }
    }

    /// Compact identifier used for character keys: `L^2*omega` becomes `L2omega`.
    pub fn key_name(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}{e}") })
            .collect()
    }

    pub fn parse(s: &str) -> std::result::Result<Mono, ParseError> {
        let t = s.trim();
        if t == "1" {
            return Ok(Mono::one());
        }
        let mut m = Mono::one();
        for f in t.split('*') {
            let f = f.trim();
            let (n, e) = match f.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| ParseError::new(0, format!("bad exponent in '{f}'")))?,
                ),
                None => (f, 1),
            };
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ParseError::new(0, format!("bad monomial factor '{f}'")));
            }
            let cur = m.exponent(n);
            m.set(n, cur + e);
        }
        Ok(m)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A ring instance: symbols, relations and degree caps.
#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    pub id: String,
    symbols: BTreeMap<String, BaseSymbol>,
    /// Maximal total degree (dimension of the ambient total space).
    pub cap: i64,
    /// Maximal degree of the part pulled back from the base.
    pub base_cap: i64,
    /// Line bundle name to its section-pullback symbol, when sections exist.
    restrictions: BTreeMap<String, String>,
}

impl Ring {
    /// Fiber ring over a base of dimension `dim_b`: canonical class and line bundles.
    pub fn fiber(id: &str, dim_b: u32, line_bundles: &[String]) -> Ring {
        let mut symbols = BTreeMap::new();
        symbols.insert(
            CANONICAL.to_string(),
            BaseSymbol { name: CANONICAL.into(), degree: 1, kind: SymbolKind::Canonical, psi: None },
        );
        for l in line_bundles {
            symbols.insert(
                l.clone(),
                BaseSymbol { name: l.clone(), degree: 1, kind: SymbolKind::LineBundle, psi: None },
            );
        }
        Ring {
            id: id.to_string(),
            symbols,
            cap: dim_b as i64 + 1,
            base_cap: dim_b as i64,
            restrictions: BTreeMap::new(),
        }
    }

    /// Ring on the partial normalization at a node over a boundary base of dimension
    /// `dim_b - 1`: adds both branch sections, their psi classes and section pullbacks.
    pub fn boundary(id: &str, dim_b: u32, line_bundles: &[String]) -> Ring {
        let mut r = Ring::fiber(id, dim_b, line_bundles);
        r.cap = dim_b as i64;
        r.base_cap = dim_b as i64 - 1;
        for (t, p) in [(THETA_X, PSI_X), (THETA_Y, PSI_Y)] {
            r.symbols.insert(
                t.into(),
                BaseSymbol { name: t.into(), degree: 1, kind: SymbolKind::Section, psi: Some(p.into()) },
            );
            r.symbols.insert(
                p.into(),
                BaseSymbol { name: p.into(), degree: 1, kind: SymbolKind::Psi, psi: None },
            );
        }
        for l in line_bundles {
            let name = section_pullback_name(l);
            r.symbols.insert(
                name.clone(),
                BaseSymbol { name: name.clone(), degree: 1, kind: SymbolKind::SectionPullback, psi: None },
            );
            r.restrictions.insert(l.clone(), name);
        }
        r
    }

    pub fn symbol(&self, name: &str) -> Option<&BaseSymbol> {
        self.symbols.get(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &BaseSymbol> {
        self.symbols.values()
    }

    pub fn has_sections(&self) -> bool {
        self.symbols.values().any(|s| s.kind == SymbolKind::Section)
    }

    fn kind(&self, name: &str) -> SymbolKind {
        self.symbols.get(name).map(|s| s.kind).unwrap_or(SymbolKind::Unit)
    }

    pub fn degree(&self, m: &Mono) -> i64 {
        m.iter()
            .map(|(n, e)| self.symbols.get(n).map(|s| s.degree as i64).unwrap_or(0) * *e as i64)
            .sum()
    }

    pub fn base_degree(&self, m: &Mono) -> i64 {
        m.iter()
            .filter(|(n, _)| self.kind(n).from_base())
            .map(|(n, e)| self.symbols[n.as_str()].degree as i64 * *e as i64)
            .sum()
    }

    /// Split a monomial into its fiber part and its base part.
    pub fn split(&self, m: &Mono) -> (Mono, Mono) {
        let mut fib = Mono::one();
        let mut base = Mono::one();
        for (n, e) in m.iter() {
            if self.kind(n).from_base() {
                base.set(n, *e);
            } else {
                fib.set(n, *e);
            }
        }
        (fib, base)
    }

    pub fn check_symbols(&self, m: &Mono) -> Result<()> {
        for (n, _) in m.iter() {
            if !self.symbols.contains_key(n) {
                return Err(EngineError::UnknownSymbol(format!("{n} (ring {})", self.id)));
            }
        }
        Ok(())
    }

    /// Normal form of a monomial under the relations, or `None` if it vanishes.
    pub fn reduce(&self, m: &Mono) -> Option<(Q, Mono)> {
        let mut out = Mono::one();
        let mut sign = Q::one();
        let mut sections = 0;
        for (n, e) in m.iter() {
            match self.kind(n) {
                SymbolKind::Unit => {}
                SymbolKind::Section => {
                    sections += 1;
                    let psi = self.symbols[n.as_str()].psi.clone().unwrap_or_default();
                    // theta^r = (-psi)^(r-1) theta
                    if *e > 1 {
                        if (e - 1) % 2 == 1 {
                            sign = -sign;
                        }
                        let cur = out.exponent(&psi);
                        out.set(&psi, cur + e - 1);
                    }
                    let cur = out.exponent(n);
                    out.set(n, cur + 1);
                }
                _ => {
                    let cur = out.exponent(n);
                    out.set(n, cur + e);
                }
            }
        }
        if sections > 1 {
            return None;
        }
        let has_canonical = out.iter().any(|(n, _)| self.kind(n) == SymbolKind::Canonical);
        if sections == 1 {
            if has_canonical {
                return None;
            }
            for (l, p) in &self.restrictions {
                let e = out.exponent(l);
                if e > 0 {
                    out.set(l, 0);
                    let cur = out.exponent(p);
                    out.set(p, cur + e);
                }
            }
        }
        if has_canonical && out.iter().any(|(n, _)| self.kind(n) == SymbolKind::SectionPullback) {
            return None;
        }
        if self.degree(&out) > self.cap || self.base_degree(&out) > self.base_cap {
            return None;
        }
        Some((sign, out))
    }

    /// Product of two monomials in normal form.
    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> Option<(Q, Mono)> {
        self.reduce(&a.mul(b))
    }
}

pub fn section_pullback_name(line_bundle: &str) -> String {
    format!("th{line_bundle}")
}

/// Element of a ring instance in canonical form.
#[derive(Clone, Debug)]
pub struct BaseClass {
    ring: Arc<Ring>,
    terms: BTreeMap<Mono, Q>,
}

impl PartialEq for BaseClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring.id == other.ring.id && self.terms == other.terms
    }
}

impl Eq for BaseClass {}

impl BaseClass {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        BaseClass { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::from_mono(ring, Mono::one(), Q::one())
    }

    pub fn from_mono(ring: &Arc<Ring>, m: Mono, c: Q) -> Self {
        let mut b = Self::zero(ring);
        b.add_mono(&m, c);
        b
    }

    pub fn symbol(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let m = Mono::symbol(name);
        ring.check_symbols(&m)?;
        Ok(Self::from_mono(ring, m, Q::one()))
    }

    /// Parse a `+`-separated sum of `coef*monomial` terms over the ring.
    pub fn parse(ring: &Arc<Ring>, s: &str) -> Result<Self> {
        let e = Expr::parse(s)?;
        let mut out = Self::zero(ring);
        for (m, c) in e.terms() {
            let mut mono = Mono::one();
            for (n, k) in m {
                mono.set(n, *k);
            }
            ring.check_symbols(&mono)?;
            out.add_mono(&mono, c.clone());
        }
        Ok(out)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c * m`, reducing `m` by the relations first.
    pub fn add_mono(&mut self, m: &Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some((s, r)) = self.ring.reduce(m) {
            add_to(&mut self.terms, r, c * s);
        }
    }

    pub fn normalize(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_mono(m, c.clone());
        }
        out
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring.id != other.ring.id {
            return Err(EngineError::MixedRings(self.ring.id.clone(), other.ring.id.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_to(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, v) in &self.terms {
            add_to(&mut out.terms, m.clone(), v * c);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_mono(&ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..k {
            out = out.multiply(self).expect("same ring");
        }
        out
    }

    /// `theta^r = (-psi)^(r-1) theta`.
    pub fn section_power(ring: &Arc<Ring>, theta: &str, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(EngineError::InvalidArgument(
                "section power exponent must be positive".into(),
            ));
        }
        let sym = ring
            .symbol(theta)
            .ok_or_else(|| EngineError::UnknownSymbol(theta.into()))?;
        let psi = sym.psi.clone().ok_or_else(|| {
            EngineError::InvalidArgument(format!("'{theta}' is not a section symbol"))
        })?;
        let mut m = Mono::power(&psi, r - 1);
        m.set(theta, 1);
        let sign = if (r - 1).is_multiple_of(2) { q(1) } else { q(-1) };
        Ok(Self::from_mono(ring, m, sign))
    }
}

impl fmt::Display for BaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut e = Expr::zero();
        for (m, c) in &self.terms {
            let mono: Vec<(String, u32)> = m.iter().map(|(n, k)| (n.clone(), *k)).collect();
            e.add_term(mono, c.clone());
        }
        write!(f, "{e}")
    }
}

pub(crate) fn add_to<K: Ord>(map: &mut BTreeMap<K, Q>, k: K, c: Q) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
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

/// Character values keyed by compact monomial names (`L2`, `Lomega`, `omega2`, ...).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterTable {
    pub values: BTreeMap<String, Expr>,
    /// Missing keys evaluate to a symbol of the same name instead of failing.
    pub symbolic_defaults: bool,
}

impl CharacterTable {
    pub fn symbolic() -> Self {
        CharacterTable { values: BTreeMap::new(), symbolic_defaults: true }
    }

    pub fn get(&self, key: &str) -> Result<Expr> {
        match self.values.get(key) {
            Some(v) => Ok(v.clone()),
            None if self.symbolic_defaults => Ok(Expr::var(key)),
            None => Err(EngineError::MissingCharacter(key.into())),
        }
    }

    pub fn set(&mut self, key: &str, v: Expr) {
        self.values.insert(key.to_string(), v);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeDescriptor {
    pub id: String,
    /// Inverse degree of the boundary map; positive.
    pub weight: Expr,
    /// Integrals over the boundary base, keyed like the main table (`psi_x`, `thL`, ...).
    pub table: CharacterTable,
}

/// Numerical characters of a family of nodal curves over a base of dimension `dim_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDescriptor {
    pub dim_b: u32,
    pub genus: Expr,
    pub line_bundles: Vec<String>,
    pub characters: CharacterTable,
    pub nodes: Vec<NodeDescriptor>,
}

impl FamilyDescriptor {
    /// Fully symbolic family with no nodes.
    pub fn smooth(dim_b: u32) -> Self {
        FamilyDescriptor {
            dim_b,
            genus: Expr::var("g"),
            line_bundles: vec!["L".into()],
            characters: CharacterTable::symbolic(),
            nodes: Vec::new(),
        }
    }

    /// Fully symbolic family with one generic node of weight `sigma`.
    pub fn generic(dim_b: u32) -> Self {
        let mut f = Self::smooth(dim_b);
        f.nodes.push(NodeDescriptor {
            id: "s".into(),
            weight: Expr::var("sigma"),
            table: CharacterTable::symbolic(),
        });
        f
    }

    /// A single smooth curve of genus `g` with a line bundle of degree `d`.
    pub fn single_curve() -> Self {
        Self::smooth(0)
    }

    /// The projective line over a point with `L = O(1)`.
    pub fn p1() -> Self {
        let mut f = Self::smooth(0);
        f.genus = Expr::zero();
        f.characters.set("d", Expr::one());
        f
    }

    /// Node weights summed.
    pub fn sigma(&self) -> Expr {
        let mut s = Expr::zero();
        for n in &self.nodes {
            s += &n.weight;
        }
        s
    }

    /// Fiber degree of a line bundle.
    pub fn fiber_degree(&self, line_bundle: &str) -> Result<Expr> {
        if line_bundle == self.line_bundles.first().map(String::as_str).unwrap_or("L") {
            self.characters.get("d")
        } else {
            self.characters.get(&format!("d_{line_bundle}"))
        }
    }
}

/// One level of the recursion: a family (or boundary family) with its ring and integrals.
#[derive(Debug)]
pub struct Stratum {
    pub ring: Arc<Ring>,
    pub dim_base: i64,
    /// Fiber degrees of the degree-one fiber symbols.
    fiber_degrees: BTreeMap<String, Expr>,
    table: CharacterTable,
}

impl Stratum {
    pub fn main(fam: &FamilyDescriptor) -> Result<Stratum> {
        let ring = Arc::new(Ring::fiber("R", fam.dim_b, &fam.line_bundles));
        let mut fiber_degrees = BTreeMap::new();
        fiber_degrees.insert(CANONICAL.to_string(), Expr::canonical_degree(&fam.genus));
        for l in &fam.line_bundles {
            fiber_degrees.insert(l.clone(), fam.fiber_degree(l)?);
        }
        Ok(Stratum {
            ring,
            dim_base: fam.dim_b as i64,
            fiber_degrees,
            table: fam.characters.clone(),
        })
    }

    pub fn boundary(fam: &FamilyDescriptor, node: &NodeDescriptor) -> Result<Stratum> {
        let ring = Arc::new(Ring::boundary(&format!("R[{}]", node.id), fam.dim_b, &fam.line_bundles));
        let mut fiber_degrees = BTreeMap::new();
        fiber_degrees.insert(CANONICAL.to_string(), Expr::canonical_degree(&fam.genus));
        for l in &fam.line_bundles {
            fiber_degrees.insert(l.clone(), fam.fiber_degree(l)?);
        }
        fiber_degrees.insert(THETA_X.into(), Expr::one());
        fiber_degrees.insert(THETA_Y.into(), Expr::one());
        Ok(Stratum {
            ring,
            dim_base: fam.dim_b as i64 - 1,
            fiber_degrees,
            table: node.table.clone(),
        })
    }

    /// `∫_{X^ℓ over the base} base * p_1^*f_1 * ... * p_ℓ^*f_ℓ` for fiber monomials `f_i`
    /// and a base monomial, both in normal form.
    ///
    /// Each factor pushes forward to a class of degree `deg f_i - 1` on the base:
    /// degree-one factors give their fiber degree, degree-zero factors give zero,
    /// higher factors are looked up in the character table together with the base part.
    pub fn integrate_product(&self, base: &Mono, factors: &[Mono]) -> Result<Expr> {
        let total: i64 = factors.iter().map(|f| self.ring.degree(f) - 1).sum::<i64>()
            + self.ring.degree(base);
        if total != self.dim_base {
            return Err(EngineError::NotTopDimensional(format!(
                "base {base} with factors [{}] has excess {total}, base dimension {}",
                factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "),
                self.dim_base
            )));
        }
        let mut value = Expr::one();
        let mut excess: Vec<String> = Vec::new();
        for f in factors {
            match self.ring.degree(f) {
                0 => return Ok(Expr::zero()),
                1 => {
                    let (name, _) = f.iter().next().expect("degree one monomial");
                    let fd = self
                        .fiber_degrees
                        .get(name)
                        .ok_or_else(|| EngineError::UnknownSymbol(name.clone()))?;
                    value = &value * fd;
                }
                _ => excess.push(f.key_name()),
            }
        }
        if !base.is_one() {
            excess.push(base.key_name());
        }
        if excess.is_empty() {
            return Ok(value);
        }
        excess.sort();
        Ok(&value * &self.table.get(&excess.join("_"))?)
    }

    /// Integrate a class over `X^ℓ` given as factors, expanding multilinearly.
    pub fn integrate_classes(&self, factors: &[BaseClass]) -> Result<Expr> {
        for f in factors {
            if f.ring().id != self.ring.id {
                return Err(EngineError::MixedRings(f.ring().id.clone(), self.ring.id.clone()));
            }
        }
        let mut out = Expr::zero();
        let mut stack: Vec<(usize, Q, Mono, Vec<Mono>)> = vec![(0, Q::one(), Mono::one(), Vec::new())];
        while let Some((i, c, base, fs)) = stack.pop() {
            if i == factors.len() {
                out += self.integrate_product(&base, &fs)?.scale(&c);
                continue;
            }
            for (m, v) in factors[i].terms() {
                let (fib, b) = self.ring.split(m);
                let Some((s, nb)) = self.ring.mul_mono(&base, &b) else { continue };
                let mut nfs = fs.clone();
                nfs.push(fib);
                stack.push((i + 1, &c * v * s, nb, nfs));
            }
        }
        Ok(out)
    }
}
