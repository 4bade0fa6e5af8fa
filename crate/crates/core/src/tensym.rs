//! The tensymmetric algebra over R and the formal diagonal and discriminant operators.
//!
//! A simple tensor is a list of blocks `(n, α)`: a block of size `n` twisted by a
//! monomial `α` of R. Blocks are kept sorted, so a key represents the symmetric
//! tensor and coefficients carry no hidden symmetry factors. Keys additionally carry
//! a monomial pulled back from the base, used on boundary strata.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::basering::{add_to, BaseClass, Mono, Ring, CANONICAL};
use crate::error::{EngineError, Result};
use crate::partitions::Distribution;
use crate::rational::{binom, q, qf, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TKey {
    /// Monomial in base symbols multiplying the whole tensor.
    pub base: Mono,
    /// Sorted `(size, twist)` blocks.
    pub blocks: Vec<(u32, Mono)>,
}

impl TKey {
    pub fn distribution(&self) -> Distribution {
        Distribution::from_blocks(&self.blocks.iter().map(|b| b.0).collect::<Vec<_>>())
    }

    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(|b| b.0).sum()
    }

    /// Canonical form: reduce every twist, move base symbols into the base part,
    /// sort blocks. `None` if some factor vanishes.
    pub fn normalize(ring: &Ring, base: Mono, blocks: Vec<(u32, Mono)>) -> Option<(Q, TKey)> {
        let mut sign = Q::one();
        let mut base = base;
        let mut out = Vec::with_capacity(blocks.len());
        for (n, a) in blocks {
            let (s, r) = ring.reduce(&a)?;
            let (fib, b) = ring.split(&r);
            sign *= s;
            base = base.mul(&b);
            out.push((n, fib));
        }
        let (s, base) = ring.reduce(&base)?;
        sign *= s;
        out.sort();
        let key = TKey { base, blocks: out };
        // the base part and the twists must survive together
        if ring.base_degree(&key.base) > ring.base_cap {
            return None;
        }
        Some((sign, key))
    }

    /// Codimension of the twisted diagonal on the Hilbert scheme.
    pub fn codimension(&self, ring: &Ring) -> i64 {
        self.blocks
            .iter()
            .map(|(n, a)| *n as i64 - 1 + ring.degree(a))
            .sum::<i64>()
            + ring.degree(&self.base)
    }
}

impl fmt::Display for TKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "{}", self.base);
        }
        if !self.base.is_one() {
            write!(f, "{}*", self.base)?;
        }
        let sizes: Vec<String> = self.blocks.iter().rev().map(|b| b.0.to_string()).collect();
        let tw: Vec<String> = self.blocks.iter().rev().map(|b| b.1.to_string()).collect();
        write!(f, "G_({})[{}]", sizes.join(","), tw.join(" x "))
    }
}

/// Element of the tensymmetric algebra over a ring instance.
#[derive(Clone, Debug)]
pub struct TensorClass {
    pub ring: Arc<Ring>,
    pub terms: BTreeMap<TKey, Q>,
}

impl PartialEq for TensorClass {
    fn eq(&self, other: &Self) -> bool {
        self.ring.id == other.ring.id && self.terms == other.terms
    }
}

impl TensorClass {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        TensorClass { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single simple tensor with the given blocks.
    pub fn simple(ring: &Arc<Ring>, blocks: Vec<(u32, Mono)>, c: Q) -> Self {
        let mut t = Self::zero(ring);
        t.add_raw(Mono::one(), blocks, c);
        t
    }

    /// Add `c` times the (unnormalized) tensor.
    pub fn add_raw(&mut self, base: Mono, blocks: Vec<(u32, Mono)>, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some((s, k)) = TKey::normalize(&self.ring, base, blocks) {
            add_to(&mut self.terms, k, c * s);
        }
    }

    pub fn add_key(&mut self, k: TKey, c: Q) {
        add_to(&mut self.terms, k, c);
    }

    pub fn add(&mut self, other: &TensorClass) {
        for (k, c) in &other.terms {
            add_to(&mut self.terms, k.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            out.add_key(k.clone(), v * c);
        }
        out
    }

    /// `u_{n1,n2}`: sum over pairs of blocks of sizes `n1`, `n2` (unordered pairs when
    /// equal) of the tensor with the two blocks merged and their twists multiplied.
    pub fn union_op(&self, n1: u32, n2: u32) -> TensorClass {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            for (i, j) in block_pairs(k) {
                let (a, b) = (k.blocks[i].0, k.blocks[j].0);
                if (a, b) == (n1, n2) || (a, b) == (n2, n1) {
                    let (base, blocks) = merge(k, i, j);
                    out.add_raw(base, blocks, c.clone());
                }
            }
        }
        out
    }

    /// `u_{n,g}`: apply `g` to each size-`n` twist in turn and sum.
    pub fn interior_mult(&self, n: u32, g: &dyn Fn(&Mono) -> Vec<(Mono, Q)>) -> TensorClass {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            for (i, (size, a)) in k.blocks.iter().enumerate() {
                if *size != n {
                    continue;
                }
                for (img, v) in g(a) {
                    let mut blocks = k.blocks.clone();
                    blocks[i].1 = img;
                    out.add_raw(k.base.clone(), blocks, c * v);
                }
            }
        }
        out
    }

    /// `Σ_{n1 ≥ n2} n1 n2 u_{n1,n2}`: every unordered pair of blocks merged with
    /// weight the product of their sizes.
    pub fn discriminant_op(&self) -> TensorClass {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            for (i, j) in block_pairs(k) {
                let w = q((k.blocks[i].0 * k.blocks[j].0) as i64);
                let (base, blocks) = merge(k, i, j);
                out.add_raw(base, blocks, c * w);
            }
        }
        out
    }

    /// `U_ω = Σ_n C(n,2) u_{n,ω}`.
    pub fn u_omega_total(&self) -> TensorClass {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            for (i, (n, a)) in k.blocks.iter().enumerate() {
                let w = binom(*n as i64, 2);
                if w == 0 {
                    continue;
                }
                let mut blocks = k.blocks.clone();
                blocks[i].1 = a.mul(&Mono::symbol(CANONICAL));
                out.add_raw(k.base.clone(), blocks, c * q(w));
            }
        }
        out
    }

    /// `[m]^s_*(D)`: the elementary symmetric class `Σ_{|I|=s} Π_{i∈I} p_i^*D` on `TS_{(1^m)}`,
    /// built from the unit by Newton's identities so it shares the normalization of
    /// [`TensorClass::norm_mult`].
    pub fn norm_elem(m: u32, d: &BaseClass, s: u32) -> Result<TensorClass> {
        if s > m {
            return Err(EngineError::InvalidArgument(format!("norm power {s} exceeds weight {m}")));
        }
        let ring = d.ring().clone();
        let mut e = vec![Self::simple(&ring, vec![(1, Mono::one()); m as usize], Q::one())];
        for k in 1..=s {
            let mut acc = Self::zero(&ring);
            for j in 1..=k {
                let sign = if j % 2 == 1 { q(1) } else { q(-1) };
                let term = e[(k - j) as usize].norm_mult(&d.pow(j));
                acc.add(&term.scale(&sign));
            }
            e.push(acc.scale(&qf(1, k as i64)));
        }
        Ok(e.pop().expect("e_0 present"))
    }

    /// `([k]_* θ)^t = Σ_{s=1}^{min(k,t)} surj(t, s) (-ψ)^(t-s) [k]^s_*(θ)`, where
    /// `surj(t, s) = Σ_j (-1)^j C(s, j) (s - j)^t` counts ways to use exactly `s` of the
    /// `k` factors.
    pub fn norm_power_expand(ring: &Arc<Ring>, k: u32, theta: &str, t: u32) -> Result<TensorClass> {
        if t == 0 {
            return Err(EngineError::InvalidArgument("norm power exponent must be positive".into()));
        }
        let psi = ring
            .symbol(theta)
            .and_then(|s| s.psi.clone())
            .ok_or_else(|| EngineError::InvalidArgument(format!("'{theta}' is not a section")))?;
        let th = BaseClass::symbol(ring, theta)?;
        let mut out = Self::zero(ring);
        for s in 1..=k.min(t) {
            let c = q(surjections(t, s));
            let sign = if (t - s).is_multiple_of(2) { q(1) } else { q(-1) };
            let e = Self::norm_elem(k, &th, s)?;
            for (key, v) in e.terms {
                out.add_raw(key.base.mul(&Mono::power(&psi, t - s)), key.blocks, v * &c * &sign);
            }
        }
        Ok(out)
    }

    /// Multiplication by the pullback of a norm: `[m]_*D · α = Σ_b n_b (D α_b)`.
    pub fn norm_mult(&self, d: &BaseClass) -> TensorClass {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            for (i, (n, a)) in k.blocks.iter().enumerate() {
                for (dm, dv) in d.terms() {
                    let mut blocks = k.blocks.clone();
                    blocks[i].1 = a.mul(dm);
                    out.add_raw(k.base.clone(), blocks, c * dv * q(*n as i64));
                }
            }
        }
        out
    }

    /// Multiply by a base monomial.
    pub fn base_mult(&self, m: &Mono, c: &Q) -> TensorClass {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            out.add_raw(k.base.mul(m), k.blocks.clone(), v * c);
        }
        out
    }
}

/// Number of surjections from a `t`-set onto an `s`-set.
pub fn surjections(t: u32, s: u32) -> i64 {
    (0..=s)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * binom(s as i64, j as i64) * ((s - j) as i64).pow(t)
        })
        .sum()
}

/// Unordered pairs of block positions.
pub fn block_pairs(k: &TKey) -> Vec<(usize, usize)> {
    let n = k.blocks.len();
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Merge blocks `i < j` into one block carrying the product twist.
pub fn merge(k: &TKey, i: usize, j: usize) -> (Mono, Vec<(u32, Mono)>) {
    let mut blocks = Vec::with_capacity(k.blocks.len() - 1);
    for (p, b) in k.blocks.iter().enumerate() {
        if p != i && p != j {
            blocks.push(b.clone());
        }
    }
    let (ni, ai) = &k.blocks[i];
    let (nj, aj) = &k.blocks[j];
    blocks.push((ni + nj, ai.mul(aj)));
    (k.base.clone(), blocks)
}

/// An element of `Sym(R)`: sorted lists of factors with coefficients.
pub type SymClass = BTreeMap<Vec<Mono>, Q>;

/// `D†_μ`: every way of grouping the factors into blocks of the sizes of `μ`,
/// multiplying the factors inside each block.
pub fn d_dagger(ring: &Arc<Ring>, mu: &Distribution, factors: &[BaseClass]) -> Result<TensorClass> {
    if mu.weight() as usize != factors.len() {
        return Err(EngineError::WeightMismatch { expected: mu.weight(), found: factors.len() });
    }
    for f in factors {
        if f.ring().id != ring.id {
            return Err(EngineError::MixedRings(f.ring().id.clone(), ring.id.clone()));
        }
    }
    let mut out = TensorClass::zero(ring);
    let groupings = set_partitions_with_sizes(factors.len(), &mu.blocks());
    let mut tuples: Vec<(Vec<Mono>, Q)> = vec![(Vec::new(), Q::one())];
    for f in factors {
        let mut next = Vec::new();
        for (ms, c) in &tuples {
            for (m, v) in f.terms() {
                let mut t = ms.clone();
                t.push(m.clone());
                next.push((t, c * v));
            }
        }
        tuples = next;
    }
    for (ms, c) in &tuples {
        for g in &groupings {
            let blocks = g
                .iter()
                .map(|b| (b.len() as u32, b.iter().fold(Mono::one(), |a, &i| a.mul(&ms[i]))))
                .collect();
            out.add_raw(Mono::one(), blocks, c.clone());
        }
    }
    Ok(out)
}

/// `D_μ`: pad each size-`n` twist with `n - 1` unit factors. Base parts must be trivial.
pub fn d_forget(alpha: &TensorClass) -> SymClass {
    let mut out = SymClass::new();
    for (k, c) in &alpha.terms {
        let mut fs = Vec::new();
        for (n, a) in &k.blocks {
            fs.push(a.clone());
            fs.extend(std::iter::repeat_n(Mono::one(), *n as usize - 1));
        }
        fs.sort();
        add_to(&mut out, fs, c.clone());
    }
    out
}

/// Unordered set partitions of `{0..m}` whose block sizes form the given multiset.
pub fn set_partitions_with_sizes(m: usize, sizes: &[u32]) -> Vec<Vec<Vec<usize>>> {
    let mut target: Vec<u32> = sizes.to_vec();
    target.sort();
    let mut all: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 0..m {
        let mut next = Vec::new();
        for p in &all {
            for j in 0..p.len() {
                let mut q = p.clone();
                q[j].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        all = next;
    }
    all.into_iter()
        .filter(|p| {
            let mut s: Vec<u32> = p.iter().map(|b| b.len() as u32).collect();
            s.sort();
            s == target
        })
        .collect()
}
