//! Tautological classes on the relative Hilbert scheme and multiplication by the
//! discriminant.
//!
//! Normalization. A diagonal term `c * G_μ[α]` stands for `c / a(μ)` times the pushforward
//! from the ordered model of the diagonal twisted by one representative ordering of
//! `α`, where `a(μ) = ∏ μ(n)!`. With this convention `Γ^(m) = ½ G_(2,1^(m−2))[1]`.
//!
//! Node terms. `F^{n,m}_j(s)[β]` is the `j`-th component of the node scroll of length-`n`
//! punctual schemes at node `s`, over the boundary Hilbert scheme of degree `m − n`
//! carrying `β`. The section sector stores `h F[β]` with `h = −Γ^(m)`. On `F^{n,m}_j`,
//! `(h − e_j)(h − e_{j+1}) = 0` with `e_j = D^n_j − Γ^(m−n)`, which closes the module.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::basering::{
    add_to, BaseClass, FamilyDescriptor, Mono, Stratum, SymbolKind, PSI_X, PSI_Y, THETA_X, THETA_Y,
};
use crate::error::{EngineError, Result};
use crate::expr::Expr;
use crate::partitions::Distribution;
use crate::rational::{binom, q, qf, Q};
use crate::tensym::{block_pairs, merge, TKey};

/// Scroll component `F^n_j` at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScrollIndex {
    pub node: usize,
    pub n: u32,
    pub j: u32,
}

/// A formal tautological class of Hilbert degree `m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TautClass {
    pub m: u32,
    pub diag: BTreeMap<TKey, Q>,
    /// `F^n_j(s)[payload]`, payload of degree `m − n` on the boundary family.
    pub scroll: BTreeMap<ScrollIndex, TautClass>,
    /// `(−Γ^(m)) F^n_j(s)[payload]`.
    pub section: BTreeMap<ScrollIndex, TautClass>,
}

impl TautClass {
    pub fn zero(m: u32) -> Self {
        TautClass { m, ..Default::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.diag.is_empty() && self.scroll.is_empty() && self.section.is_empty()
    }

    pub fn add_assign(&mut self, other: &TautClass) {
        debug_assert_eq!(self.m, other.m, "adding classes of different Hilbert degree");
        for (k, c) in &other.diag {
            add_to(&mut self.diag, k.clone(), c.clone());
        }
        for (ix, p) in &other.scroll {
            add_payload(&mut self.scroll, *ix, p);
        }
        for (ix, p) in &other.section {
            add_payload(&mut self.section, *ix, p);
        }
    }

    pub fn sum(&self, other: &TautClass) -> TautClass {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn scale(&self, c: &Q) -> TautClass {
        if c.is_zero() {
            return TautClass::zero(self.m);
        }
        TautClass {
            m: self.m,
            diag: self.diag.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            scroll: self.scroll.iter().map(|(i, p)| (*i, p.scale(c))).collect(),
            section: self.section.iter().map(|(i, p)| (*i, p.scale(c))).collect(),
        }
    }

    pub fn neg(&self) -> TautClass {
        self.scale(&q(-1))
    }

    pub fn diff(&self, other: &TautClass) -> TautClass {
        self.sum(&other.neg())
    }

    /// A single scroll term `F^n_j(node)[payload]`.
    pub fn scroll_term(m: u32, ix: ScrollIndex, payload: TautClass) -> TautClass {
        let mut c = TautClass::zero(m);
        add_payload(&mut c.scroll, ix, &payload);
        c
    }

    /// A single section term `(−Γ) F^n_j(node)[payload]`.
    pub fn section_term(m: u32, ix: ScrollIndex, payload: TautClass) -> TautClass {
        let mut c = TautClass::zero(m);
        add_payload(&mut c.section, ix, &payload);
        c
    }

    /// The constant class on `X^[0]`, i.e. a class pulled back from the base.
    pub fn base_unit() -> TautClass {
        let mut c = TautClass::zero(0);
        c.diag.insert(TKey::default(), Q::one());
        c
    }
}

pub(crate) fn add_payload(map: &mut BTreeMap<ScrollIndex, TautClass>, ix: ScrollIndex, p: &TautClass) {
    if p.is_zero() {
        return;
    }
    let slot = map.entry(ix).or_insert_with(|| TautClass::zero(p.m));
    slot.add_assign(p);
    if slot.is_zero() {
        map.remove(&ix);
    }
}

/// Small-diagonal exceptional multiplicity `ν_{n,j} = j (n − j) n / 2`.
pub fn nu(n: u32, j: u32) -> Q {
    qf((j * (n - j) * n) as i64, 2)
}

/// Which of the two equivalent decompositions of a node section to use in transfer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionForm {
    /// Via `h = Q_j + e_{j+1}`: the new length-`(n+1)` scroll has index `j`.
    J,
    /// Via `h = Q_{j+1} + e_j`: the new length-`(n+1)` scroll has index `j + 1`.
    JPlusOne,
}

/// A family together with its boundary families, one per node.
#[derive(Debug)]
pub struct Family {
    pub stratum: Stratum,
    pub nodes: Vec<NodeCtx>,
    pub dim_b: u32,
}

#[derive(Debug)]
pub struct NodeCtx {
    pub id: String,
    pub weight: Expr,
    /// The partial normalization at the node over the boundary base; carries no further
    /// nodes of its own.
    pub boundary: Family,
}

impl Family {
    pub fn new(desc: &FamilyDescriptor) -> Result<Family> {
        let mut nodes = Vec::new();
        for n in &desc.nodes {
            if desc.dim_b == 0 {
                return Err(EngineError::InvalidArgument(
                    "a family over a point has no node strata".into(),
                ));
            }
            nodes.push(NodeCtx {
                id: n.id.clone(),
                weight: n.weight.clone(),
                boundary: Family {
                    stratum: Stratum::boundary(desc, n)?,
                    nodes: Vec::new(),
                    dim_b: desc.dim_b - 1,
                },
            });
        }
        Ok(Family { stratum: Stratum::main(desc)?, nodes, dim_b: desc.dim_b })
    }

    pub fn ring(&self) -> &std::sync::Arc<crate::basering::Ring> {
        &self.stratum.ring
    }

    /// Base dimension of this level.
    pub fn dim_base(&self) -> i64 {
        self.stratum.dim_base
    }

    /// Add `c * G[blocks]` (base part `base`) to `out` after normalization and pruning.
    fn push_diag(&self, out: &mut TautClass, base: Mono, blocks: Vec<(u32, Mono)>, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some((s, k)) = TKey::normalize(self.ring(), base, blocks) {
            if self.key_dim(&k) >= 0 {
                add_to(&mut out.diag, k, c * s);
            }
        }
    }

    /// Dimension of a diagonal term.
    pub fn key_dim(&self, k: &TKey) -> i64 {
        self.dim_base() + k.blocks.len() as i64
            - k.blocks.iter().map(|(_, a)| self.ring().degree(a)).sum::<i64>()
            - self.ring().degree(&k.base)
    }

    /// Dimensions of all terms of a class (empty classes give nothing).
    pub fn dims(&self, c: &TautClass) -> Vec<i64> {
        let mut v: Vec<i64> = c.diag.keys().map(|k| self.key_dim(k)).collect();
        for (ix, p) in &c.scroll {
            v.extend(self.nodes[ix.node].boundary.dims(p).into_iter().map(|d| d + 1));
        }
        for (ix, p) in &c.section {
            v.extend(self.nodes[ix.node].boundary.dims(p));
        }
        v
    }

    /// Drop terms of negative dimension.
    pub fn prune(&self, c: &TautClass) -> TautClass {
        let mut out = TautClass::zero(c.m);
        for (k, v) in &c.diag {
            if self.key_dim(k) >= 0 {
                add_to(&mut out.diag, k.clone(), v.clone());
            }
        }
        for (ix, p) in &c.scroll {
            let b = &self.nodes[ix.node].boundary;
            add_payload(&mut out.scroll, *ix, &b.prune(p));
        }
        for (ix, p) in &c.section {
            let b = &self.nodes[ix.node].boundary;
            add_payload(&mut out.section, *ix, &b.prune(p));
        }
        out
    }

    /// `Γ^(m) = ½ G_(2,1^(m−2))[1]`; zero for `m < 2`.
    pub fn gamma(&self, m: u32) -> TautClass {
        let mut out = TautClass::zero(m);
        if m >= 2 {
            let mut blocks = vec![(2, Mono::one())];
            blocks.extend(std::iter::repeat_n((1, Mono::one()), m as usize - 2));
            self.push_diag(&mut out, Mono::one(), blocks, qf(1, 2));
        }
        out
    }

    /// The unit class on `X^[m]`.
    pub fn unit(&self, m: u32) -> TautClass {
        let mut out = TautClass::zero(m);
        self.push_diag(&mut out, Mono::one(), vec![(1, Mono::one()); m as usize], q(1));
        out
    }

    /// `G_μ[α]` for explicit blocks.
    pub fn diagonal(&self, blocks: &[(u32, Mono)], c: Q) -> TautClass {
        let m = blocks.iter().map(|b| b.0).sum();
        let mut out = TautClass::zero(m);
        self.push_diag(&mut out, Mono::one(), blocks.to_vec(), c);
        out
    }

    /// Restriction of a monomial of this level to a node's boundary base, `θ*`.
    /// Canonical classes restrict to zero; line bundles to their section pullbacks.
    fn theta_star(&self, node: usize, a: &Mono) -> Option<Mono> {
        let b = &self.nodes[node].boundary;
        let mut out = Mono::one();
        for (name, e) in a.iter() {
            match self.ring().symbol(name).map(|s| s.kind) {
                Some(SymbolKind::Canonical) => return None,
                Some(SymbolKind::LineBundle) => {
                    let p = crate::basering::section_pullback_name(name);
                    b.ring().symbol(&p)?;
                    out = out.mul(&Mono::power(&p, *e));
                }
                _ => return None,
            }
        }
        Some(out)
    }

    /// Multiplication by `Γ^(m)`.
    pub fn gamma_mult(&self, c: &TautClass) -> TautClass {
        let m = c.m;
        let mut out = TautClass::zero(m);
        for (k, v) in &c.diag {
            let mu = k.distribution();
            let a = mu.aut_count();
            for (i, j) in block_pairs(k) {
                let w = (k.blocks[i].0 * k.blocks[j].0) as i64;
                let (base, blocks) = merge(k, i, j);
                let merged = Distribution::from_blocks(&blocks.iter().map(|b| b.0).collect::<Vec<_>>());
                let ratio = Q::new(merged.aut_count(), a.clone());
                self.push_diag(&mut out, base, blocks, v * q(w) * ratio);
            }
            for (i, (n, alpha)) in k.blocks.iter().enumerate() {
                let cn = binom(*n as i64, 2);
                if cn == 0 {
                    continue;
                }
                let mut blocks = k.blocks.clone();
                blocks[i].1 = alpha.mul(&Mono::symbol(crate::basering::CANONICAL));
                self.push_diag(&mut out, k.base.clone(), blocks, -(v * q(cn)));
            }
            for s in 0..self.nodes.len() {
                for (i, (n, alpha)) in k.blocks.iter().enumerate() {
                    if *n < 2 {
                        continue;
                    }
                    let Some(t) = self.theta_star(s, alpha) else { continue };
                    let boundary = &self.nodes[s].boundary;
                    let others: Vec<(u32, Mono)> = k
                        .blocks
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| *p != i)
                        .map(|(_, b)| b.clone())
                        .collect();
                    let mut payload = TautClass::zero(m - n);
                    boundary.push_diag(&mut payload, k.base.mul(&t), others, Q::one());
                    let payload = boundary.prune(&payload);
                    if payload.is_zero() {
                        continue;
                    }
                    let mult = mu.mult(*n) as i64;
                    for j in 1..*n {
                        let coef = v * nu(*n, j) / q(mult);
                        let ix = ScrollIndex { node: s, n: *n, j };
                        add_payload(&mut out.scroll, ix, &payload.scale(&coef));
                    }
                }
            }
        }
        for (ix, p) in &c.scroll {
            add_payload(&mut out.section, *ix, &p.neg());
        }
        for (ix, p) in &c.section {
            let b = &self.nodes[ix.node].boundary;
            let ej = b.e_mult(p, ix.n, ix.j);
            let ej1 = b.e_mult(p, ix.n, ix.j + 1);
            add_payload(&mut out.section, *ix, &ej.sum(&ej1).neg());
            add_payload(&mut out.scroll, *ix, &b.prune(&b.e_mult(&ej1, ix.n, ix.j)));
        }
        self.prune(&out)
    }

    /// `(Γ^(m))^k`.
    pub fn gamma_power(&self, m: u32, k: u32) -> TautClass {
        if k == 0 {
            return self.unit(m);
        }
        let mut c = self.gamma(m);
        for _ in 1..k {
            c = self.gamma_mult(&c);
        }
        c
    }

    /// Multiply by a class pulled back from the base of this level. Only boundary levels
    /// carry base symbols, and those have no node terms.
    pub fn base_mult(&self, c: &TautClass, b: &Mono, coef: &Q) -> TautClass {
        debug_assert!(c.scroll.is_empty() && c.section.is_empty());
        let mut out = TautClass::zero(c.m);
        for (k, v) in &c.diag {
            self.push_diag(&mut out, k.base.mul(b), k.blocks.clone(), v * coef);
        }
        out
    }

    /// Multiplication by the norm `[m]_* D` of a class `D` of this level.
    ///
    /// On a node term of length `n` the norm restricts to `[m − n]_* D + n θ*D`.
    pub fn norm_mult(&self, c: &TautClass, d: &BaseClass) -> TautClass {
        let mut out = TautClass::zero(c.m);
        for (k, v) in &c.diag {
            for (i, (n, alpha)) in k.blocks.iter().enumerate() {
                for (dm, dv) in d.terms() {
                    let mut blocks = k.blocks.clone();
                    blocks[i].1 = alpha.mul(dm);
                    self.push_diag(&mut out, k.base.clone(), blocks, v * dv * q(*n as i64));
                }
            }
        }
        for (sector, target) in [(&c.scroll, 0), (&c.section, 1)] {
            for (ix, p) in sector {
                let b = &self.nodes[ix.node].boundary;
                let mut img = b.norm_mult(p, &self.pull_to_boundary(ix.node, d));
                for (dm, dv) in d.terms() {
                    if let Some(t) = self.theta_star(ix.node, dm) {
                        img.add_assign(&b.base_mult(p, &t, &(dv * q(ix.n as i64))));
                    }
                }
                let img = b.prune(&img);
                if target == 0 {
                    add_payload(&mut out.scroll, *ix, &img);
                } else {
                    add_payload(&mut out.section, *ix, &img);
                }
            }
        }
        out
    }

    /// `φ*`: the same symbols viewed on the partial normalization.
    fn pull_to_boundary(&self, node: usize, d: &BaseClass) -> BaseClass {
        let b = self.nodes[node].boundary.ring();
        let mut out = BaseClass::zero(b);
        for (m, v) in d.terms() {
            out.add_mono(m, v.clone());
        }
        out
    }

    /// `e^n_j β = D^n_j β − Γ^(k) β` on a payload `β` of degree `k`, at this boundary level:
    /// `D^n_j = C(n−j+1,2) ψ_x + C(j,2) ψ_y − (n−j+1) [k]_*θ_x − j [k]_*θ_y`.
    pub fn e_mult(&self, beta: &TautClass, n: u32, j: u32) -> TautClass {
        let r = self.ring();
        let mut out = TautClass::zero(beta.m);
        let a = binom((n - j + 1) as i64, 2);
        let b = binom(j as i64, 2);
        if a != 0 {
            out.add_assign(&self.base_mult(beta, &Mono::symbol(PSI_X), &q(a)));
        }
        if b != 0 {
            out.add_assign(&self.base_mult(beta, &Mono::symbol(PSI_Y), &q(b)));
        }
        let tx = BaseClass::from_mono(r, Mono::symbol(THETA_X), q(-((n - j + 1) as i64)));
        let ty = BaseClass::from_mono(r, Mono::symbol(THETA_Y), q(-(j as i64)));
        out.add_assign(&self.norm_mult(beta, &tx.add(&ty).expect("same ring")));
        out.add_assign(&self.gamma_mult(beta).neg());
        self.prune(&out)
    }

    /// Closed form of `h^ℓ F^n_j[β]` with `h = −Γ^(m)`, `ℓ ≥ 2`, and
    /// `s_k(a,b) = Σ_{i<k} a^i b^(k−1−i)`: `h F[s_ℓ(e_j,e_{j+1}) β] − F[e_j e_{j+1} s_{ℓ−1}(e_j,e_{j+1}) β]`.
    pub fn gamma_power_on_scroll(&self, l: u32, m: u32, ix: ScrollIndex, beta: &TautClass) -> Result<TautClass> {
        if l < 2 {
            return Err(EngineError::InvalidArgument("scroll power exponent must be at least 2".into()));
        }
        let b = &self.nodes[ix.node].boundary;
        let s = |k: u32| -> TautClass {
            let mut total = TautClass::zero(beta.m);
            for i in 0..k {
                let mut t = beta.clone();
                for _ in 0..i {
                    t = b.e_mult(&t, ix.n, ix.j);
                }
                for _ in 0..(k - 1 - i) {
                    t = b.e_mult(&t, ix.n, ix.j + 1);
                }
                total.add_assign(&t);
            }
            total
        };
        let mut out = TautClass::zero(m);
        add_payload(&mut out.section, ix, &b.prune(&s(l)));
        let sl1 = s(l - 1);
        let ee = b.e_mult(&b.e_mult(&sl1, ix.n, ix.j + 1), ix.n, ix.j);
        add_payload(&mut out.scroll, ix, &b.prune(&ee.neg()));
        Ok(self.prune(&out))
    }

    /// Transfer `τ(c · β)` from degree `m − 1` to `m`.
    pub fn transfer(&self, c: &TautClass, beta: &BaseClass, form: SectionForm) -> TautClass {
        let m = c.m + 1;
        let mut out = TautClass::zero(m);
        for (k, v) in &c.diag {
            let ratio = q(k.distribution().mult(1) as i64 + 1);
            for (bm, bv) in beta.terms() {
                let mut blocks = k.blocks.clone();
                blocks.push((1, bm.clone()));
                self.push_diag(&mut out, k.base.clone(), blocks, v * bv * &ratio);
            }
        }
        for (ix, p) in &c.scroll {
            let b = &self.nodes[ix.node].boundary;
            let img = b.transfer(p, &self.pull_to_boundary(ix.node, beta), form);
            add_payload(&mut out.scroll, *ix, &b.prune(&img));
        }
        for (ix, p) in &c.section {
            let b = &self.nodes[ix.node].boundary;
            let bb = self.pull_to_boundary(ix.node, beta);
            let new_j = match form {
                SectionForm::J => ix.j,
                SectionForm::JPlusOne => ix.j + 1,
            };
            let other_j = match form {
                SectionForm::J => ix.j + 1,
                SectionForm::JPlusOne => ix.j,
            };
            let mut first = TautClass::zero(p.m);
            for (bm, bv) in beta.terms() {
                if let Some(t) = self.theta_star(ix.node, bm) {
                    first.add_assign(&b.base_mult(p, &t, bv));
                }
            }
            let up = ScrollIndex { node: ix.node, n: ix.n + 1, j: new_j };
            add_payload(&mut out.scroll, up, &b.prune(&first));
            let moved = b.transfer(p, &bb, form);
            add_payload(&mut out.section, *ix, &b.prune(&moved));
            // correction from the e-class changing with the Hilbert degree
            let before = b.transfer(&b.e_mult(p, ix.n, other_j), &bb, form);
            let after = b.e_mult(&moved, ix.n, other_j);
            add_payload(&mut out.scroll, *ix, &b.prune(&before.diff(&after)));
        }
        self.prune(&out)
    }

    /// Degree of a zero-dimensional class.
    pub fn integrate(&self, c: &TautClass) -> Result<Expr> {
        let mut total = Expr::zero();
        for (k, v) in &c.diag {
            let d = self.key_dim(k);
            if d != 0 {
                return Err(EngineError::NotTopDimensional(format!("{k} has dimension {d}")));
            }
            let factors: Vec<Mono> = k.blocks.iter().map(|b| b.1.clone()).collect();
            let val = self.stratum.integrate_product(&k.base, &factors)?;
            let a: BigInt = k.distribution().aut_count();
            total += val.scale(&(v / Q::from_integer(a)));
        }
        for (ix, p) in &c.scroll {
            if !p.is_zero() {
                return Err(EngineError::NotTopDimensional(format!(
                    "node scroll F^{{{},{}}}_{} has positive dimension",
                    ix.n, c.m, ix.j
                )));
            }
        }
        for (ix, p) in &c.section {
            let node = &self.nodes[ix.node];
            total += &node.weight * &node.boundary.integrate(p)?;
        }
        Ok(total)
    }

    /// Pretty form with the node names of this family.
    pub fn display<'a>(&'a self, c: &'a TautClass) -> Display<'a> {
        Display { fam: self, c }
    }
}

pub struct Display<'a> {
    fam: &'a Family,
    c: &'a TautClass,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, v) in &self.c.diag {
            parts.push(format!("{v}*{k}"));
        }
        for (label, sector) in [("", &self.c.scroll), ("(-Gamma)*", &self.c.section)] {
            for (ix, p) in sector {
                let node = &self.fam.nodes[ix.node];
                let inner = node.boundary.display(p).to_string();
                parts.push(format!(
                    "{label}F^{{{},{}}}_{}({})[{}]",
                    ix.n, self.c.m, ix.j, node.id, inner
                ));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basering::NodeDescriptor;
    use crate::rational::qf;

    fn generic() -> Family {
        Family::new(&FamilyDescriptor::generic(1)).unwrap()
    }

    fn scroll_unit(f: &Family, m: u32, n: u32, j: u32) -> TautClass {
        let b = &f.nodes[0].boundary;
        TautClass::scroll_term(m, ScrollIndex { node: 0, n, j }, b.unit(m - n))
    }

    #[test]
    fn small_diagonal_multiplicities() {
        let rows: Vec<Vec<Q>> = (2..=5).map(|m| (1..m).map(|i| nu(m, i)).collect()).collect();
        let ints = |v: &[i64]| v.iter().map(|x| q(*x)).collect::<Vec<_>>();
        assert_eq!(rows, vec![ints(&[1]), ints(&[3, 3]), ints(&[6, 8, 6]), ints(&[10, 15, 15, 10])]);
        for m in 2..=12u32 {
            let s: Q = (1..m).map(|i| nu(m, i)).sum();
            let mi = m as i64;
            assert_eq!(s, qf(mi * mi * (mi * mi - 1), 12));
        }
    }

    #[test]
    fn discriminant_square_on_second_hilbert_scheme() {
        let f = generic();
        assert_eq!(f.display(&f.gamma_power(2, 2)).to_string(), "-1/2*G_(2)[omega] + F^{2,2}_1(s)[1/2*1]");
    }

    #[test]
    fn discriminant_top_powers() {
        let f = generic();
        assert_eq!(f.integrate(&f.gamma_power(2, 3)).unwrap().to_string(), "1/2*omega2 - 1/2*sigma");
        assert_eq!(f.integrate(&f.gamma_power(3, 4)).unwrap().to_string(), "13*omega2 - 9*sigma");
    }

    #[test]
    fn node_scroll_polarization() {
        let mut d = FamilyDescriptor::generic(1);
        d.nodes[0].weight = Expr::one();
        let f = Family::new(&d).unwrap();
        let c = scroll_unit(&f, 3, 2, 1);
        let h2 = f.gamma_mult(&f.gamma_mult(&c));
        assert_eq!(f.integrate(&h2).unwrap(), Expr::int(-6));
    }

    #[test]
    fn scroll_power_closed_form_matches_iteration() {
        let d = FamilyDescriptor::generic(2);
        let f = Family::new(&d).unwrap();
        for (m, n, j) in [(2, 2, 1), (3, 2, 1), (3, 3, 1), (3, 3, 2), (4, 2, 1), (4, 3, 2)] {
            let ix = ScrollIndex { node: 0, n, j };
            let beta = f.nodes[0].boundary.unit(m - n);
            let mut it = scroll_unit(&f, m, n, j);
            it = f.gamma_mult(&it);
            for l in 2..=3 {
                it = f.gamma_mult(&it);
                // h^l = (−Γ)^l
                let sign = if l % 2 == 0 { q(1) } else { q(-1) };
                let closed = f.gamma_power_on_scroll(l, m, ix, &beta).unwrap();
                assert_eq!(it.scale(&sign), closed, "m={m} n={n} j={j} l={l}");
            }
        }
    }

    #[test]
    fn node_weights_are_linear() {
        let mut d = FamilyDescriptor::generic(1);
        let t = d.nodes[0].table.clone();
        d.nodes[0].weight = Expr::int(2);
        d.nodes.push(NodeDescriptor { id: "t".into(), weight: Expr::int(3), table: t });
        let f = Family::new(&d).unwrap();
        assert_eq!(f.integrate(&f.gamma_power(3, 4)).unwrap().to_string(), "-45 + 13*omega2");
    }

    #[test]
    fn smooth_families_have_no_node_terms() {
        let f = Family::new(&FamilyDescriptor::smooth(1)).unwrap();
        let c = f.gamma_power(3, 3);
        assert!(c.scroll.is_empty() && c.section.is_empty());
        assert_eq!(f.integrate(&f.gamma_power(3, 4)).unwrap().to_string(), "13*omega2");
    }

    #[test]
    fn transfer_of_discriminant() {
        let f = generic();
        let one = BaseClass::one(f.ring());
        for form in [SectionForm::J, SectionForm::JPlusOne] {
            let t = f.transfer(&f.gamma(2), &one, form);
            // one flag over a generic point of the discriminant
            assert_eq!(t, f.gamma(3));
        }
    }

    #[test]
    fn transfer_of_unit_is_unit_times_degree() {
        let f = generic();
        let one = BaseClass::one(f.ring());
        let t = f.transfer(&f.unit(2), &one, SectionForm::J);
        assert_eq!(t, f.unit(3).scale(&q(3)));
    }

    #[test]
    fn section_forms_agree_numerically() {
        let f = Family::new(&FamilyDescriptor::generic(1)).unwrap();
        let one = BaseClass::one(f.ring());
        let l = BaseClass::symbol(f.ring(), "L").unwrap();
        for m in 2..=4 {
            for k in 1..=m {
                let c = f.gamma_power(m, k);
                let dim = m as i64 + 1 - k as i64;
                for beta in [&one, &l] {
                    let a = f.transfer(&c, beta, SectionForm::J);
                    let b = f.transfer(&c, beta, SectionForm::JPlusOne);
                    let extra = dim + 1 - if beta == &one { 0 } else { 1 };
                    // cap with Γ^(m+1) to reach dimension zero
                    let pa = (0..extra).fold(a, |x, _| f.gamma_mult(&x));
                    let pb = (0..extra).fold(b, |x, _| f.gamma_mult(&x));
                    assert_eq!(f.integrate(&pa).unwrap(), f.integrate(&pb).unwrap(), "m={m} k={k}");
                }
            }
        }
    }
}
