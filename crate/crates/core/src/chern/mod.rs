//! Chern classes of tautological bundles through the splitting on the full-flag space,
//! their pushforward to the Hilbert scheme, and the enumerative numbers built on them.

mod enumerative;
mod formulary;
mod rules;
mod wexpr;

pub use enumerative::{
    chern_numbers_w3, double_point_class, double_point_class_by_flags, double_point_count, kappa_check,
    porteous, trisecant_count, trisecant_grand_total, trisecant_scroll_degree, trisecant_scroll_formula,
    ChernNumbers,
};
pub use formulary::{formulary, FormularyEntry};
pub use rules::rules_w3;
pub use wexpr::{WExpr, WMono};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::basering::{BaseClass, Mono};
use crate::error::{EngineError, Result};
use crate::expr::Expr;
use crate::partitions::Distribution;
use crate::rational::{factorial, q, Q};
use crate::tautmod::{Family, TautClass};
use crate::transfer::transfer;

/// Dimension of `W^m` over a base of dimension `dim_b`.
pub fn w_dim(m: u32, dim_b: u32) -> u32 {
    m + dim_b
}

/// `c(Λ_m(L)) = Π_i (1 + L_i − Δ^(i))` on `W^m`, truncated at `dim W^m`.
pub fn chern_splitting(m: u32, dim_b: u32) -> WExpr {
    let cap = w_dim(m, dim_b);
    let mut c = WExpr::one(m, cap);
    for i in 1..=m {
        let f = WExpr::one(m, cap).add(&WExpr::l(m, cap, i)).sub(&WExpr::delta(m, cap, i));
        c = c.mul(&f);
    }
    c
}

/// Both sides of `c(Λ_m) = c(Λ_{m−1}) · (1 + L_m − Δ^(m))` on `W^m`.
pub fn chern_flaglet(m: u32, dim_b: u32) -> Result<(WExpr, WExpr)> {
    if m == 0 {
        return Err(EngineError::InvalidArgument("flaglet identity needs m >= 1".into()));
    }
    let cap = w_dim(m, dim_b);
    let lhs = chern_splitting(m, dim_b);
    let mut prev = WExpr::zero(m, cap);
    for (w, v) in &chern_splitting(m - 1, dim_b).terms {
        let mut lifted = WMono::one(m);
        lifted.l[..w.l.len()].copy_from_slice(&w.l);
        lifted.g[..w.g.len()].copy_from_slice(&w.g);
        prev = prev.add(&WExpr::mono(lifted, cap).scale(v));
    }
    let last = WExpr::one(m, cap).add(&WExpr::l(m, cap, m)).sub(&WExpr::delta(m, cap, m));
    Ok((lhs, prev.mul(&last)))
}

fn line(fam: &Family) -> Result<String> {
    fam.ring()
        .symbols()
        .find(|s| s.kind == crate::basering::SymbolKind::LineBundle)
        .map(|s| s.name.clone())
        .ok_or_else(|| EngineError::InvalidArgument("family has no line bundle".into()))
}

/// `w_*` of a flag monomial to `X^[m]`: start from `L^{a_1}` on `X^[1]`, then at each step
/// transfer with the new point carrying `L^{a_i}` and multiply by `(Γ^(i))^{k_i}`.
pub fn flag_push(fam: &Family, w: &WMono) -> Result<TautClass> {
    let m = w.m();
    if m == 0 {
        return Ok(TautClass::base_unit());
    }
    if w.g[0] != 0 {
        return Ok(TautClass::zero(m));
    }
    let l = line(fam)?;
    let r = fam.ring();
    let pw = |a: u32| BaseClass::from_mono(r, Mono::power(&l, a), Q::one()).normalize();
    let mut c = fam.diagonal(&[(1, Mono::power(&l, w.l[0]))], Q::one());
    for i in 2..=m {
        c = transfer(fam, &c, Some(&pw(w.l[i as usize - 1])));
        for _ in 0..w.g[i as usize - 1] {
            c = fam.gamma_mult(&c);
        }
    }
    Ok(c)
}

/// `w_*` of a flag polynomial.
pub fn push_w(fam: &Family, e: &WExpr) -> Result<TautClass> {
    let mut out = TautClass::zero(e.m);
    for (w, v) in &e.terms {
        out.add_assign(&flag_push(fam, w)?.scale(v));
    }
    Ok(fam.prune(&out))
}

/// `∫_{W^m}` of the top-degree part of a flag polynomial.
pub fn integrate_w(fam: &Family, e: &WExpr) -> Result<Expr> {
    let top = w_dim(e.m, fam.dim_b);
    let mut cache: BTreeMap<WMono, Expr> = BTreeMap::new();
    let mut total = Expr::zero();
    for (w, v) in &e.terms {
        if w.degree() != top {
            continue;
        }
        if !cache.contains_key(w) {
            let val = fam.integrate(&flag_push(fam, w)?)?;
            cache.insert(w.clone(), val);
        }
        total += cache[w].scale(v);
    }
    Ok(total)
}

/// `∫_{W^m}` of one monomial, which must have top degree.
pub fn integrate_w_mono(fam: &Family, w: &WMono) -> Result<Expr> {
    let top = w_dim(w.m(), fam.dim_b);
    if w.degree() != top {
        return Err(EngineError::NotTopDimensional(format!("{w} has degree {}, W^{} has dimension {top}", w.degree(), w.m())));
    }
    fam.integrate(&flag_push(fam, w)?)
}

/// A degree-4 monomial on `W^3` over a one-dimensional base, through the engine.
pub fn w3_monomial(fam: &Family, w: &WMono) -> Result<Expr> {
    if fam.dim_b != 1 || w.m() != 3 {
        return Err(EngineError::InvalidArgument("W^3 monomials are evaluated over one-dimensional bases".into()));
    }
    integrate_w_mono(fam, w)
}

/// Total Chern class of `Λ_m(L)` on `X^[m]`, from the splitting pushed down and divided by `m!`.
pub fn chern_pushed(fam: &Family, m: u32) -> Result<TautClass> {
    let c = chern_splitting(m, fam.dim_b);
    let pushed = push_w(fam, &c)?;
    Ok(pushed.scale(&Q::new(BigInt::one(), factorial(m))))
}

/// Closed form of `c(Λ_m(L))`: a sum over distributions `μ` without singleton blocks,
/// `|μ| ≤ m`, of `Π_b (−1)^{n_b−1} / n_b = (−1)^{|μ|−ℓ(μ)} χ(μ) / Π_b n_b!` times the
/// diagonal `G_{μ ∪ 1^{m−|μ|}}` with every block twisted by `1 + L`.
pub fn chern_closed_form(fam: &Family, m: u32) -> Result<TautClass> {
    let l = line(fam)?;
    let mut out = TautClass::zero(m);
    for mu in Distribution::enumerate(m) {
        if mu.mult(1) > 0 {
            continue;
        }
        let w = mu.weight();
        let sign = if (w - mu.length()) % 2 == 0 { q(1) } else { q(-1) };
        let denom: BigInt = mu.blocks().iter().map(|n| factorial(*n)).product();
        let coef = sign * Q::new(mu.chi(), denom);
        let mut sizes = mu.blocks();
        sizes.extend(std::iter::repeat_n(1, (m - w) as usize));
        // expand Π_b (1 + L) over the blocks
        let mut terms: Vec<Vec<(u32, Mono)>> = vec![Vec::new()];
        for n in &sizes {
            let mut next = Vec::new();
            for t in &terms {
                for a in [Mono::one(), Mono::symbol(&l)] {
                    let mut t2 = t.clone();
                    t2.push((*n, a));
                    next.push(t2);
                }
            }
            terms = next;
        }
        for t in terms {
            out.add_assign(&fam.diagonal(&t, coef.clone()));
        }
    }
    Ok(fam.prune(&out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basering::FamilyDescriptor;

    #[test]
    fn splitting_low_cases() {
        assert_eq!(chern_splitting(1, 1).to_string(), "1 + L1");
        let c2 = chern_splitting(2, 1);
        let want = WExpr::parse("1 + L1 + L2 - G2 + L1*L2 - L1*G2", 2, 3).unwrap();
        assert_eq!(c2, want);
        assert_eq!(chern_splitting(3, 1).graded(1), WExpr::parse("L1 + L2 + L3 - G3", 3, 4).unwrap());
    }

    #[test]
    fn splitting_matches_displayed_expansion_on_w3() {
        let shown = "1 + L1 + L2 + L3 - G3 + L1*L2 + L1*L3 + L2*L3 - G2^2 + G2*G3 + G2*L2 - G2*L3 - G3*L1 - G3*L2 \
                     + L1*L2*L3 - G2*L1*L3 - G3*L1*L2 + G2*L1*L2 + G2*G3*L1 - G2^2*L1";
        let want = WExpr::parse(shown, 3, 4).unwrap();
        let got = chern_splitting(3, 1);
        for k in 0..=3 {
            assert_eq!(got.graded(k), want.graded(k), "degree {k}");
        }
    }

    #[test]
    fn flaglet_identity() {
        for m in 1..=4 {
            let (a, b) = chern_flaglet(m, 1).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn pushing_the_unit_counts_orderings() {
        let f = Family::new(&FamilyDescriptor::generic(1)).unwrap();
        for m in 1..=4u32 {
            let c = flag_push(&f, &WMono::one(m)).unwrap();
            let want = f.unit(m).scale(&Q::from_integer(factorial(m)));
            assert_eq!(c, want);
        }
    }

    #[test]
    fn first_chern_class_is_norm_minus_discriminant() {
        let f = Family::new(&FamilyDescriptor::generic(1)).unwrap();
        let l = BaseClass::symbol(f.ring(), "L").unwrap();
        for m in 1..=4 {
            let c1 = push_w(&f, &chern_splitting(m, 1).graded(1)).unwrap().scale(&Q::new(BigInt::one(), factorial(m)));
            let want = f.norm_mult(&f.unit(m), &l).diff(&f.gamma(m));
            assert_eq!(c1, want, "m={m}");
        }
    }

    #[test]
    fn discriminant_pushed_from_flags_doubles() {
        let f = Family::new(&FamilyDescriptor::generic(1)).unwrap();
        let g2 = flag_push(&f, &WMono::parse("G2", 3).unwrap()).unwrap();
        assert_eq!(g2, f.gamma(3).scale(&q(2)));
    }

    #[test]
    fn closed_form_on_nodal_families() {
        let f = Family::new(&FamilyDescriptor::generic(1)).unwrap();
        for m in 1..=4 {
            // node contributions of the splitting cancel in total
            assert_eq!(chern_closed_form(&f, m).unwrap(), chern_pushed(&f, m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn closed_form_matches_splitting_on_smooth_families() {
        for dim_b in [1, 2] {
            let f = Family::new(&FamilyDescriptor::smooth(dim_b)).unwrap();
            for m in 1..=5 {
                assert_eq!(chern_closed_form(&f, m).unwrap(), chern_pushed(&f, m).unwrap(), "m={m} dim_b={dim_b}");
            }
        }
    }
}
