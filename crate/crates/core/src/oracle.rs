//! Independent checkers: the ordered model on `X^m` for smooth families and projective
//! degrees of diagonal loci in `Sym^m P^1`.
//!
//! The ordered model keeps labelled diagonals: a set partition of `{1..m}` with a twist
//! on each block. The pullback of `Γ` to `X^m` is `Σ_{i<j} Δ_{ij}`; `Δ_{ij}` merges the
//! blocks of `i` and `j` when they differ and restricts to `−ω` on a block containing
//! both. This module shares no operator code with the unordered engine; all results
//! are compared through [`Canonical`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::basering::{BaseClass, Mono, CANONICAL};
use crate::error::{EngineError, Result};
use crate::expr::Expr;
use crate::rational::Q;
use crate::tautmod::{Family, TautClass};
use crate::tensym::TensorClass;

/// Twist monomial: symbol name to exponent, exponents positive. All symbols have degree one.
pub type Twist = BTreeMap<String, u32>;

/// Unordered classes in the `P`-normalization: sorted `(block size, twist)` lists to
/// coefficients. `P_μ[α]` is the image of `α` on `X^{ℓ(μ)}`, so `G_μ = P_μ / a(μ)`.
pub type Canonical = BTreeMap<Vec<(u32, Vec<(String, u32)>)>, Q>;

fn twist_mul(a: &Twist, b: &Twist) -> Twist {
    let mut out = a.clone();
    for (k, e) in b {
        *out.entry(k.clone()).or_insert(0) += e;
    }
    out
}

fn twist_degree(a: &Twist) -> u32 {
    a.values().sum()
}

pub fn twist(parts: &[(&str, u32)]) -> Twist {
    parts.iter().filter(|(_, e)| *e > 0).map(|(n, e)| (n.to_string(), *e)).collect()
}

fn bump(map: &mut BTreeMap<Vec<(Vec<u32>, Twist)>, Q>, k: Vec<(Vec<u32>, Twist)>, c: Q) {
    let e = map.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&k);
    }
}

fn canonical_blocks(mut blocks: Vec<(Vec<u32>, Twist)>) -> Vec<(Vec<u32>, Twist)> {
    for b in &mut blocks {
        b.0.sort_unstable();
    }
    blocks.sort_by(|a, b| a.0[0].cmp(&b.0[0]));
    blocks
}

/// Labelled diagonal classes on `X^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedTensor {
    pub m: u32,
    pub terms: BTreeMap<Vec<(Vec<u32>, Twist)>, Q>,
}

impl OrderedTensor {
    pub fn zero(m: u32) -> Self {
        OrderedTensor { m, terms: BTreeMap::new() }
    }

    /// `α_1 ⊗ … ⊗ α_m` on `X^m`.
    pub fn pure(factors: Vec<Twist>, c: Q) -> Self {
        let blocks = factors.into_iter().enumerate().map(|(i, a)| (vec![i as u32 + 1], a)).collect();
        Self::labelled(blocks, c).expect("singletons partition {1..m}")
    }

    /// `c Δ_P[α]` for blocks of a set partition of `{1..m}`.
    pub fn labelled(blocks: Vec<(Vec<u32>, Twist)>, c: Q) -> Result<Self> {
        let m: usize = blocks.iter().map(|b| b.0.len()).sum();
        let mut seen = vec![false; m + 1];
        for (b, _) in &blocks {
            for &i in b {
                if i == 0 || i as usize > m || seen[i as usize] {
                    return Err(EngineError::InvalidArgument("blocks must partition {1..m}".into()));
                }
                seen[i as usize] = true;
            }
        }
        let mut out = Self::zero(m as u32);
        if !c.is_zero() {
            out.terms.insert(canonical_blocks(blocks), c);
        }
        Ok(out)
    }

    pub fn add(&self, o: &OrderedTensor) -> OrderedTensor {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            bump(&mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> OrderedTensor {
        let mut out = Self::zero(self.m);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    /// `ODsc − OU_ω`: every pair `i < j` in turn.
    pub fn ordered_disc(&self) -> OrderedTensor {
        let mut out = Self::zero(self.m);
        let omega = twist(&[(CANONICAL, 1)]);
        for (k, c) in &self.terms {
            let block_of = |x: u32| k.iter().position(|(b, _)| b.contains(&x)).expect("index covered");
            for i in 1..=self.m {
                for j in i + 1..=self.m {
                    let (bi, bj) = (block_of(i), block_of(j));
                    let mut blocks = k.clone();
                    if bi == bj {
                        blocks[bi].1 = twist_mul(&blocks[bi].1, &omega);
                        bump(&mut out.terms, blocks, -c.clone());
                    } else {
                        let (lo, hi) = (bi.min(bj), bi.max(bj));
                        let (idx, tw) = blocks.remove(hi);
                        blocks[lo].0.extend(idx);
                        blocks[lo].1 = twist_mul(&blocks[lo].1, &tw);
                        bump(&mut out.terms, canonical_blocks(blocks), c.clone());
                    }
                }
            }
        }
        out
    }

    /// Drop terms vanishing over a base of dimension `dim_b`: a twist above the fiber
    /// dimension or a locus of negative dimension.
    pub fn truncate(&self, dim_b: u32) -> OrderedTensor {
        let mut out = Self::zero(self.m);
        for (k, c) in &self.terms {
            if k.iter().all(|(_, a)| twist_degree(a) <= dim_b + 1) && locus_dim(dim_b, k.iter().map(|b| &b.1)) >= 0 {
                out.terms.insert(k.clone(), c.clone());
            }
        }
        out
    }

    /// Pushforward to the symmetric product: forget the labels.
    pub fn symmetrize(&self) -> Canonical {
        let mut out = Canonical::new();
        for (k, c) in &self.terms {
            let mut key: Vec<(u32, Vec<(String, u32)>)> =
                k.iter().map(|(b, a)| (b.len() as u32, a.iter().map(|(n, e)| (n.clone(), *e)).collect())).collect();
            key.sort();
            add_canon(&mut out, key, c.clone());
        }
        out
    }
}

fn locus_dim<'a>(dim_b: u32, twists: impl Iterator<Item = &'a Twist>) -> i64 {
    let mut d = dim_b as i64;
    for a in twists {
        d += 1 - twist_degree(a) as i64;
    }
    d
}

fn add_canon(map: &mut Canonical, k: Vec<(u32, Vec<(String, u32)>)>, c: Q) {
    let e = map.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&k);
    }
}

/// Keep the terms that survive over a base of dimension `dim_b`.
pub fn restrict(c: &Canonical, dim_b: u32) -> Canonical {
    c.iter()
        .filter(|(k, _)| {
            let tw: Vec<Twist> = k.iter().map(|(_, a)| a.iter().cloned().collect()).collect();
            tw.iter().all(|a| twist_degree(a) <= dim_b + 1) && locus_dim(dim_b, tw.iter()) >= 0
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn mono_parts(m: &Mono) -> Vec<(String, u32)> {
    m.iter().map(|(n, e)| (n.clone(), *e)).collect()
}

/// A tensymmetric class in the common form; keys carry no base part on a smooth family.
pub fn canonical_tensor(t: &TensorClass) -> Result<Canonical> {
    let mut out = Canonical::new();
    for (k, c) in &t.terms {
        if !k.base.is_one() {
            return Err(EngineError::Unsupported("tensors with a base part".into()));
        }
        let mut key: Vec<_> = k.blocks.iter().map(|(n, a)| (*n, mono_parts(a))).collect();
        key.sort();
        add_canon(&mut out, key, c.clone());
    }
    Ok(out)
}

fn aut(key: &[(u32, Vec<(String, u32)>)]) -> BigInt {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for (n, _) in key {
        *counts.entry(*n).or_insert(0) += 1;
    }
    counts.values().map(|c| (1..=*c).fold(BigInt::one(), |a, i| a * BigInt::from(i))).product()
}

/// A class of the module in the common form: `v G_μ[α] = v/a(μ) P_μ[α]`.
pub fn canonical_taut(c: &TautClass) -> Result<Canonical> {
    if !c.scroll.is_empty() || !c.section.is_empty() {
        return Err(EngineError::Unsupported("the ordered model has no node terms".into()));
    }
    let mut out = Canonical::new();
    for (k, v) in &c.diag {
        if !k.base.is_one() {
            return Err(EngineError::Unsupported("classes with a base part".into()));
        }
        let mut key: Vec<_> = k.blocks.iter().map(|(n, a)| (*n, mono_parts(a))).collect();
        key.sort();
        let a = aut(&key);
        add_canon(&mut out, key, v / Q::from_integer(a));
    }
    Ok(out)
}

/// Difference report between two canonical classes, empty when they agree.
pub fn compare(a: &Canonical, b: &Canonical) -> Vec<String> {
    let mut keys: Vec<_> = a.keys().chain(b.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let zero = Q::zero();
    keys.into_iter()
        .filter_map(|k| {
            let (x, y) = (a.get(&k).unwrap_or(&zero), b.get(&k).unwrap_or(&zero));
            (x != y).then(|| format!("{k:?}: {x} vs {y}"))
        })
        .collect()
}

fn to_mono(a: &[(String, u32)]) -> Mono {
    let mut m = Mono::one();
    for (n, e) in a {
        m.set(n, *e);
    }
    m
}

fn to_tensor(fam: &Family, c: &Canonical) -> TensorClass {
    let mut t = TensorClass::zero(fam.ring());
    for (k, v) in c {
        t.add_raw(Mono::one(), k.iter().map(|(n, a)| (*n, to_mono(a))).collect(), v.clone());
    }
    t
}

fn require_smooth(fam: &Family) -> Result<()> {
    if !fam.nodes.is_empty() {
        return Err(EngineError::Unsupported("the ordered model needs a family without nodes".into()));
    }
    Ok(())
}

/// `sym((ODsc − OU_ω) t)` against `(Dsc − U_ω)(sym t)`; returns the differences.
pub fn check_symmetrization(fam: &Family, t: &OrderedTensor) -> Result<Vec<String>> {
    require_smooth(fam)?;
    let lhs = restrict(&t.ordered_disc().truncate(fam.dim_b).symmetrize(), fam.dim_b);
    let s = to_tensor(fam, &t.truncate(fam.dim_b).symmetrize());
    let mut rhs = s.discriminant_op();
    rhs.add(&s.u_omega_total().scale(&-Q::one()));
    Ok(compare(&lhs, &restrict(&canonical_tensor(&rhs)?, fam.dim_b)))
}

/// `Γ^k · G_μ[α]` three ways: the module engine, iterated `Dsc − U_ω` on tensors, and
/// the ordered model applied to one labelled lift. Returns the differences.
pub fn check_gamma_power(fam: &Family, blocks: &[(u32, Twist)], k: u32) -> Result<Vec<String>> {
    require_smooth(fam)?;
    let mono_blocks: Vec<(u32, Mono)> =
        blocks.iter().map(|(n, a)| (*n, to_mono(&a.iter().map(|(s, e)| (s.clone(), *e)).collect::<Vec<_>>()))).collect();
    let mut engine = fam.diagonal(&mono_blocks, Q::one());
    for _ in 0..k {
        engine = fam.gamma_mult(&engine);
    }
    let engine = restrict(&canonical_taut(&engine)?, fam.dim_b);

    let start = canonical_taut(&fam.diagonal(&mono_blocks, Q::one()))?;
    let mut t = to_tensor(fam, &start);
    for _ in 0..k {
        let mut next = t.discriminant_op();
        next.add(&t.u_omega_total().scale(&-Q::one()));
        t = next;
    }
    let tensor = restrict(&canonical_tensor(&t)?, fam.dim_b);

    let mut next_index = 1u32;
    let mut labelled = Vec::new();
    let mut key: Vec<(u32, Vec<(String, u32)>)> = Vec::new();
    for (n, a) in blocks {
        labelled.push(((next_index..next_index + n).collect::<Vec<_>>(), a.clone()));
        key.push((*n, a.iter().map(|(s, e)| (s.clone(), *e)).collect()));
        next_index += n;
    }
    key.sort();
    let mut o = OrderedTensor::labelled(labelled, Q::one() / Q::from_integer(aut(&key)))?.truncate(fam.dim_b);
    for _ in 0..k {
        o = o.ordered_disc().truncate(fam.dim_b);
    }
    let ordered = restrict(&o.symmetrize(), fam.dim_b);

    let mut diffs: Vec<String> = compare(&engine, &tensor).into_iter().map(|d| format!("engine/tensor {d}")).collect();
    diffs.extend(compare(&engine, &ordered).into_iter().map(|d| format!("engine/ordered {d}")));
    Ok(diffs)
}

/// Set partitions of `{1..m}` with blocks sorted by least element.
pub fn set_partitions(m: u32) -> Vec<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for i in 1..=m {
        let mut next = Vec::new();
        for p in &out {
            for j in 0..p.len() {
                let mut q = p.clone();
                q[j].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Outcome of an exhaustive run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

/// Twists used by the exhaustive run: `1, L, ω, L², Lω`.
pub fn sample_twists(line: &str) -> Vec<Twist> {
    vec![
        Twist::new(),
        twist(&[(line, 1)]),
        twist(&[(CANONICAL, 1)]),
        twist(&[(line, 2)]),
        twist(&[(line, 1), (CANONICAL, 1)]),
    ]
}

/// Every set partition of weight `2..=max_weight`, twisted by rotations of
/// [`sample_twists`], through both checks with `k ≤ max_k`.
pub fn exhaustive_check(fam: &Family, max_weight: u32, max_k: u32) -> Result<OracleReport> {
    require_smooth(fam)?;
    let line = fam
        .ring()
        .symbols()
        .find(|s| s.kind == crate::basering::SymbolKind::LineBundle)
        .map(|s| s.name.clone())
        .ok_or_else(|| EngineError::InvalidArgument("family has no line bundle".into()))?;
    let tw = sample_twists(&line);
    let mut rep = OracleReport::default();
    for m in 2..=max_weight {
        for p in set_partitions(m) {
            for r in 0..tw.len() {
                let blocks: Vec<(Vec<u32>, Twist)> =
                    p.iter().enumerate().map(|(i, b)| (b.clone(), tw[(i + r) % tw.len()].clone())).collect();
                let t = OrderedTensor::labelled(blocks.clone(), Q::one())?;
                rep.cases += 1;
                rep.failures.extend(check_symmetrization(fam, &t)?);
                let sized: Vec<(u32, Twist)> = blocks.iter().map(|(b, a)| (b.len() as u32, a.clone())).collect();
                for k in 1..=max_k {
                    rep.cases += 1;
                    rep.failures.extend(check_gamma_power(fam, &sized, k)?);
                }
            }
        }
    }
    Ok(rep)
}

/// Degree in `P^m = Sym^m P^1` of the locus of divisors with an `n`-fold point,
/// from its parametrization `P^1 × P^{m−n} → P^m`, `(x, D) ↦ n x + D`.
/// The hyperplane pulls back to `n a + b`, and the map has degree `m` for `n = 1`,
/// degree one otherwise.
pub fn p1_diagonal_degree(m: u32, n: u32) -> Result<BigInt> {
    if n == 0 || n > m {
        return Err(EngineError::InvalidArgument(format!("need 1 <= n <= m, got n={n}, m={m}")));
    }
    let top = m - n + 1;
    // ∫ (n a + b)^top on P^1 × P^{m−n}: only a · b^{m−n} survives
    let mut integral = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=top {
        if j == 1 {
            integral += &binom * BigInt::from(n);
        }
        binom = binom * BigInt::from(top - j) / BigInt::from(j + 1);
    }
    let map_degree = if n == 1 { BigInt::from(m) } else { BigInt::one() };
    Ok(integral / map_degree)
}

/// The same degree through the engine: `∫_{X^[m]} G_{(n,1^{m−n})} H^{m−n+1}` on `P^1`
/// over a point, with `H` the norm of `O(1)`.
pub fn p1_engine_degree(m: u32, n: u32) -> Result<Expr> {
    if n == 0 || n > m {
        return Err(EngineError::InvalidArgument(format!("need 1 <= n <= m, got n={n}, m={m}")));
    }
    let fam = Family::new(&crate::basering::FamilyDescriptor::p1())?;
    let l = BaseClass::symbol(fam.ring(), "L")?;
    let mut blocks = vec![(n, Mono::one())];
    blocks.extend(std::iter::repeat_n((1, Mono::one()), (m - n) as usize));
    let mut c = fam.diagonal(&blocks, Q::one());
    for _ in 0..=m - n {
        c = fam.norm_mult(&c, &l);
    }
    fam.integrate(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basering::FamilyDescriptor;
    use crate::rational::q;
    use proptest::prelude::*;

    fn smooth(dim_b: u32) -> Family {
        Family::new(&FamilyDescriptor::smooth(dim_b)).unwrap()
    }

    #[test]
    fn two_points_merge_once() {
        let t = OrderedTensor::pure(vec![twist(&[("L", 1)]), Twist::new()], q(1));
        let d = t.ordered_disc();
        assert_eq!(d.terms.len(), 1);
        let (k, c) = d.terms.iter().next().unwrap();
        assert_eq!(k, &vec![(vec![1, 2], twist(&[("L", 1)]))]);
        assert_eq!(c, &q(1));
    }

    #[test]
    fn discriminant_square_on_two_points() {
        let f = smooth(1);
        let want: Canonical = [(vec![(2, vec![(CANONICAL.to_string(), 1)])], q(-1) / q(2))].into_iter().collect();
        assert_eq!(restrict(&canonical_taut(&f.gamma_power(2, 2)).unwrap(), 1), want);
        let mut o = OrderedTensor::pure(vec![Twist::new(); 2], q(1) / q(2));
        o = o.ordered_disc().ordered_disc().truncate(1);
        assert_eq!(o.symmetrize(), want);
    }

    #[test]
    fn three_points_have_three_union_terms() {
        let t = OrderedTensor::pure(vec![Twist::new(); 3], q(1));
        assert_eq!(t.ordered_disc().terms.len(), 3);
        // on a triple diagonal all three pairs restrict to −ω
        let small = OrderedTensor::labelled(vec![(vec![1, 2, 3], Twist::new())], q(1)).unwrap();
        let d = small.ordered_disc();
        assert_eq!(d.terms.values().cloned().collect::<Vec<_>>(), vec![q(-3)]);
    }

    #[test]
    fn symmetrization_degree_counts_labellings() {
        // labelled partitions of type μ number m! / (Π n_b! Π mult(p)!)
        for m in 1..=5u32 {
            let mut by_type: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            for p in set_partitions(m) {
                let mut sizes: Vec<u32> = p.iter().map(|b| b.len() as u32).collect();
                sizes.sort();
                *by_type.entry(sizes).or_insert(0) += 1;
            }
            for (sizes, count) in by_type {
                let f = |n: u32| (1..=n as u64).product::<u64>();
                let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
                for s in &sizes {
                    *mult.entry(*s).or_insert(0) += 1;
                }
                let denom: u64 = sizes.iter().map(|s| f(*s)).product::<u64>() * mult.values().map(|c| f(*c)).product::<u64>();
                assert_eq!(count, f(m) / denom, "{sizes:?}");
            }
        }
        assert_eq!(set_partitions(5).len(), 52);
    }

    #[test]
    fn exhaustive_small_weights() {
        for dim_b in [1, 2] {
            let rep = exhaustive_check(&smooth(dim_b), 4, 3).unwrap();
            assert!(rep.failures.is_empty(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
            assert!(rep.cases > 100);
        }
    }

    #[test]
    fn nodal_families_are_rejected() {
        let f = Family::new(&FamilyDescriptor::generic(1)).unwrap();
        assert!(check_gamma_power(&f, &[(2, Twist::new())], 1).is_err());
    }

    #[test]
    fn projective_line_degrees() {
        assert_eq!(p1_diagonal_degree(3, 2).unwrap(), BigInt::from(4));
        assert_eq!(p1_diagonal_degree(3, 3).unwrap(), BigInt::from(3));
        for m in 1..=6 {
            assert_eq!(p1_diagonal_degree(m, 1).unwrap(), BigInt::one());
            for n in 2..=m {
                assert_eq!(p1_diagonal_degree(m, n).unwrap(), BigInt::from(n * (m - n + 1)));
            }
        }
        for m in 1..=5 {
            for n in 1..=m {
                let want = Expr::constant(Q::from_integer(p1_diagonal_degree(m, n).unwrap()));
                assert_eq!(p1_engine_degree(m, n).unwrap(), want, "m={m} n={n}");
            }
        }
        assert!(p1_diagonal_degree(2, 3).is_err());
    }

    fn twist_strategy() -> impl Strategy<Value = Twist> {
        prop::sample::select(sample_twists("L"))
    }

    fn labelled_strategy() -> impl Strategy<Value = Vec<(Vec<u32>, Twist)>> {
        (2u32..=5)
            .prop_flat_map(|m| (Just(m), prop::collection::vec(0..m, m as usize), prop::collection::vec(twist_strategy(), m as usize)))
            .prop_map(|(m, labels, tw)| {
                let mut blocks: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
                for i in 1..=m {
                    blocks.entry(labels[i as usize - 1]).or_default().push(i);
                }
                blocks.into_values().zip(tw).collect()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn discriminant_commutes_with_symmetrization(blocks in labelled_strategy(), dim_b in 1u32..=2, c in -5i64..=5) {
            let t = OrderedTensor::labelled(blocks, q(c)).unwrap();
            let diffs = check_symmetrization(&smooth(dim_b), &t).unwrap();
            prop_assert!(diffs.is_empty(), "{:?}", diffs);
        }

        #[test]
        fn gamma_powers_agree_three_ways(blocks in labelled_strategy(), dim_b in 1u32..=2, k in 1u32..=4) {
            let sized: Vec<(u32, Twist)> = blocks.iter().map(|(b, a)| (b.len() as u32, a.clone())).collect();
            let diffs = check_gamma_power(&smooth(dim_b), &sized, k).unwrap();
            prop_assert!(diffs.is_empty(), "{:?}", diffs);
        }

        #[test]
        fn ordered_action_is_linear(a in labelled_strategy(), b in labelled_strategy(), x in -4i64..=4, y in -4i64..=4) {
            prop_assume!(a.iter().map(|p| p.0.len()).sum::<usize>() == b.iter().map(|p| p.0.len()).sum::<usize>());
            let ta = OrderedTensor::labelled(a, q(1)).unwrap();
            let tb = OrderedTensor::labelled(b, q(1)).unwrap();
            let lhs = ta.scale(&q(x)).add(&tb.scale(&q(y))).ordered_disc();
            let rhs = ta.ordered_disc().scale(&q(x)).add(&tb.ordered_disc().scale(&q(y)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
