//! Distributions (partitions as block-size multiplicities) and block partitions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::factorial;

/// A partition recorded as `n -> μ(n)`, all stored multiplicities positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution {
    mult: BTreeMap<u32, u32>,
}

impl Distribution {
    pub fn empty() -> Self {
        Self::default()
    }

    /// From a list of block sizes in any order; zero sizes are ignored.
    pub fn from_blocks(blocks: &[u32]) -> Self {
        let mut mult = BTreeMap::new();
        for &b in blocks.iter().filter(|&&b| b > 0) {
            *mult.entry(b).or_insert(0) += 1;
        }
        Distribution { mult }
    }

    /// `(1^m)`.
    pub fn singletons(m: u32) -> Self {
        Self::from_blocks(&vec![1; m as usize])
    }

    pub fn mult(&self, n: u32) -> u32 {
        self.mult.get(&n).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, u32)> + '_ {
        self.mult.iter().map(|(n, k)| (*n, *k))
    }

    /// Sum of block sizes.
    pub fn weight(&self) -> u32 {
        self.iter().map(|(n, k)| n * k).sum()
    }

    /// Codimension of the diagonal: `Σ (n-1) μ(n)`.
    pub fn degree(&self) -> u32 {
        self.iter().map(|(n, k)| (n - 1) * k).sum()
    }

    /// Number of blocks.
    pub fn length(&self) -> u32 {
        self.iter().map(|(_, k)| k).sum()
    }

    /// Block sizes in nonincreasing order.
    pub fn blocks(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .iter()
            .flat_map(|(n, k)| std::iter::repeat_n(n, k as usize))
            .collect();
        v.reverse();
        v
    }

    pub fn add_block(&self, n: u32) -> Self {
        let mut d = self.clone();
        *d.mult.entry(n).or_insert(0) += 1;
        d
    }

    pub fn remove_block(&self, n: u32) -> Option<Self> {
        let mut d = self.clone();
        let k = d.mult.get_mut(&n)?;
        *k -= 1;
        if *k == 0 {
            d.mult.remove(&n);
        }
        Some(d)
    }

    /// `a(μ) = ∏ μ(n)!`, the number of block permutations preserving sizes.
    pub fn aut_count(&self) -> BigInt {
        self.iter().fold(BigInt::one(), |a, (_, k)| a * factorial(k))
    }

    /// `χ(μ) = ∏ ((n-1)!)^μ(n)`.
    pub fn chi(&self) -> BigInt {
        self.iter().fold(BigInt::one(), |a, (n, k)| a * factorial(n - 1).pow(k))
    }

    /// `u_{a,b}(μ) = μ - 1_a - 1_b + 1_{a+b}`, or `None` when the blocks are missing.
    pub fn union_blocks(&self, a: u32, b: u32) -> Option<Self> {
        let d = self.remove_block(a)?.remove_block(b)?;
        Some(d.add_block(a + b))
    }

    /// All distributions of weight at most `m`, ordered by weight and then
    /// lexicographically on the nonincreasing block sequence.
    pub fn enumerate(m: u32) -> Vec<Distribution> {
        let mut out = Vec::new();
        for w in 0..=m {
            let mut parts = Vec::new();
            partitions_of(w, w, &mut Vec::new(), &mut parts);
            parts.sort();
            out.extend(parts.iter().map(|p| Distribution::from_blocks(p)));
        }
        out
    }
}

fn partitions_of(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for k in (1..=n.min(max)).rev() {
        cur.push(k);
        partitions_of(n - k, k, cur, out);
        cur.pop();
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .rev()
            .map(|(n, k)| if k == 1 { n.to_string() } else { format!("{n}^{k}") })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An ordered list of disjoint nonempty blocks covering `{1..m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BPartition {
    blocks: Vec<Vec<u32>>,
}

impl BPartition {
    pub fn new(blocks: Vec<Vec<u32>>) -> Option<Self> {
        let m: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; m + 1];
        for b in &blocks {
            if b.is_empty() {
                return None;
            }
            for &i in b {
                let i = i as usize;
                if i == 0 || i > m || seen[i] {
                    return None;
                }
                seen[i] = true;
            }
        }
        Some(BPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::from_blocks(&self.blocks.iter().map(|b| b.len() as u32).collect::<Vec<_>>())
    }

    /// Every ordered block partition of `{1..m}` (blocks as sorted index sets).
    pub fn enumerate(m: u32) -> Vec<BPartition> {
        let mut set_parts: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
        for i in 1..=m {
            let mut next = Vec::new();
            for p in &set_parts {
                for j in 0..p.len() {
                    let mut q = p.clone();
                    q[j].push(i);
                    next.push(q);
                }
                let mut q = p.clone();
                q.push(vec![i]);
                next.push(q);
            }
            set_parts = next;
        }
        let mut out = Vec::new();
        for p in set_parts {
            permute(&p, &mut Vec::new(), &mut vec![false; p.len()], &mut out);
        }
        out
    }
}

fn permute(p: &[Vec<u32>], cur: &mut Vec<Vec<u32>>, used: &mut Vec<bool>, out: &mut Vec<BPartition>) {
    if cur.len() == p.len() {
        out.push(BPartition { blocks: cur.clone() });
        return;
    }
    for i in 0..p.len() {
        if !used[i] {
            used[i] = true;
            cur.push(p[i].clone());
            permute(p, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn d(b: &[u32]) -> Distribution {
        Distribution::from_blocks(b)
    }

    /// Independent partition counter by the standard recurrence.
    fn partition_count(n: u32) -> usize {
        let mut p = vec![0usize; n as usize + 1];
        p[0] = 1;
        for k in 1..=n as usize {
            for i in k..=n as usize {
                p[i] += p[i - k];
            }
        }
        p[n as usize]
    }

    /// Brute force: ordered block partitions of {1..m} with distribution μ that map onto
    /// one fixed unordered set partition, i.e. the block permutations fixing sizes.
    fn brute_aut(mu: &Distribution) -> usize {
        let m = mu.weight();
        let all = BPartition::enumerate(m);
        let first = all.iter().find(|p| p.distribution() == *mu).expect("exists");
        let as_set: BTreeSet<Vec<u32>> = first.blocks().iter().cloned().collect();
        all.iter()
            .filter(|p| {
                p.blocks().iter().cloned().collect::<BTreeSet<_>>() == as_set
                    && p.blocks().iter().map(Vec::len).eq(first.blocks().iter().map(Vec::len))
            })
            .count()
    }

    #[test]
    fn aut_count_examples() {
        assert_eq!(d(&[1, 1, 1, 1]).aut_count(), 24.into());
        assert_eq!(d(&[2, 1, 1]).aut_count(), 2.into());
        assert_eq!(d(&[2, 2]).aut_count(), 2.into());
        assert_eq!(brute_aut(&d(&[2, 1, 1])), 2);
        assert_eq!(brute_aut(&d(&[2, 2])), 2);
    }

    #[test]
    fn aut_count_matches_brute_force() {
        for mu in Distribution::enumerate(6).into_iter().filter(|m| m.weight() > 0) {
            assert_eq!(mu.aut_count(), brute_aut(&mu).into(), "{mu}");
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(d(&[1, 1, 1]).chi(), 1.into());
        assert_eq!(d(&[3]).chi(), 2.into());
        assert_eq!(d(&[3, 2]).chi(), 2.into());
    }

    #[test]
    fn union_examples() {
        assert_eq!(d(&[1, 1, 1, 1]).union_blocks(1, 1), Some(d(&[2, 1, 1])));
        assert_eq!(d(&[2, 1, 1]).union_blocks(2, 1), Some(d(&[3, 1])));
        assert_eq!(d(&[3, 1]).union_blocks(3, 3), None);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Distribution::enumerate(0), vec![Distribution::empty()]);
        for m in 0..=8 {
            let exact = Distribution::enumerate(m).iter().filter(|x| x.weight() == m).count();
            assert_eq!(exact, partition_count(m), "m = {m}");
        }
        let w3: Vec<String> = Distribution::enumerate(3)
            .iter()
            .filter(|x| x.weight() == 3)
            .map(|x| x.to_string())
            .collect();
        assert_eq!(w3, ["(1^3)", "(2,1)", "(3)"]);
    }

    #[test]
    fn degree_plus_length_is_weight() {
        for mu in Distribution::enumerate(7) {
            assert_eq!(mu.degree() + mu.length(), mu.weight());
            for a in 1..=4 {
                for b in 1..=4 {
                    if let Some(u) = mu.union_blocks(a, b) {
                        assert_eq!(u.weight(), mu.weight());
                    }
                }
            }
        }
    }

    #[test]
    fn bpartition_validation() {
        assert!(BPartition::new(vec![vec![1, 2], vec![3]]).is_some());
        assert!(BPartition::new(vec![vec![1, 1], vec![3]]).is_none());
        assert!(BPartition::new(vec![vec![], vec![1]]).is_none());
        // ordered set partitions of {1,2,3}: Fubini number 13
        assert_eq!(BPartition::enumerate(3).len(), 13);
    }
}
