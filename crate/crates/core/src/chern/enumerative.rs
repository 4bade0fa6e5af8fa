//! Chern numbers of `Λ_3(L)`, trisecant counts and double points.

use super::wexpr::WExpr;
use super::{chern_splitting, integrate_w, line, push_w, w_dim};
use crate::basering::{FamilyDescriptor, Mono};
use crate::error::{EngineError, Result};
use crate::expr::Expr;
use num_traits::One;

use crate::rational::{binom, q, qf, Q};
use crate::tautmod::{Family, TautClass};

/// Chern numbers of `Λ_3(L)` on `W^3`; six times the numbers on `X^[3]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernNumbers {
    pub c1_4: Expr,
    pub c1_2_c2: Expr,
    pub c1_c3: Expr,
    pub c2_2: Expr,
}

fn need_dim(fam: &Family, d: u32, what: &str) -> Result<()> {
    if fam.dim_b != d {
        return Err(EngineError::InvalidArgument(format!("{what} needs a base of dimension {d}")));
    }
    Ok(())
}

pub fn chern_numbers_w3(fam: &Family) -> Result<ChernNumbers> {
    need_dim(fam, 1, "Chern numbers of triples")?;
    let c = chern_splitting(3, 1);
    let (c1, c2, c3) = (c.graded(1), c.graded(2), c.graded(3));
    Ok(ChernNumbers {
        c1_4: integrate_w(fam, &c1.pow(4))?,
        c1_2_c2: integrate_w(fam, &c1.pow(2).mul(&c2))?,
        c1_c3: integrate_w(fam, &c1.mul(&c3))?,
        c2_2: integrate_w(fam, &c2.pow(2))?,
    })
}

/// `Δ^4_1 = c_1⁴ − 3 c_1² c_2 + 2 c_1 c_3 + c_2²`.
pub fn porteous(n: &ChernNumbers) -> Expr {
    n.c1_4.clone() - n.c1_2_c2.scale(&q(3)) + n.c1_c3.scale(&q(2)) + n.c2_2.clone()
}

/// Ordered trisecant lines to the fibers of a family mapped to `P^5`, by the Porteous formula.
pub fn trisecant_count(fam: &Family) -> Result<Expr> {
    Ok(porteous(&chern_numbers_w3(fam)?))
}

fn chars(fam: &FamilyDescriptor) -> Result<(Expr, Expr, Expr, Expr, Expr, Expr)> {
    let l = fam.line_bundles.first().cloned().unwrap_or_else(|| "L".into());
    Ok((
        fam.characters.get(&format!("{l}2"))?,
        fam.fiber_degree(&l)?,
        fam.characters.get(&format!("{l}omega"))?,
        fam.characters.get("omega2")?,
        Expr::canonical_degree(&fam.genus),
        fam.sigma(),
    ))
}

/// `(3d² − 27d + 60) b + (72 − 12d) Lω + (28 − 3d) ω² − 3 b (2g−2) + (3d − 20) σ`.
pub fn trisecant_grand_total(fam: &FamilyDescriptor) -> Result<Expr> {
    let (b, d, lw, w2, k, s) = chars(fam)?;
    let c = |n: i64| Expr::int(n);
    let poly = |a: i64, bb: i64, cc: i64| &(&(&d * &d).scale(&q(a)) + &d.scale(&q(bb))) + &c(cc);
    Ok(&b * &poly(3, -27, 60) + &lw * &poly(0, -12, 72) + &w2 * &poly(0, -3, 28) - (&b * &k).scale(&q(3))
        + &s * &poly(0, 3, -20))
}

/// Virtual degree of the trisecant scroll of one curve: `∫_{X^[3]} c_3(∧² Λ_3(L))`,
/// from `Π_{i<j} (x_i + x_j)` with `x_i = L_i − Δ^(i)` on `W^3`.
pub fn trisecant_scroll_degree(fam: &Family) -> Result<Expr> {
    need_dim(fam, 0, "the trisecant scroll of a single curve")?;
    let cap = w_dim(3, 0);
    let x: Vec<WExpr> = (1..=3).map(|i| WExpr::l(3, cap, i).sub(&WExpr::delta(3, cap, i))).collect();
    let mut c = WExpr::one(3, cap);
    for i in 0..3 {
        for j in i + 1..3 {
            c = c.mul(&x[i].add(&x[j]));
        }
    }
    Ok(integrate_w(fam, &c)?.scale(&qf(1, 6)))
}

/// `(2d³ − 12d² + 16d − 3d(2g−2) + 6(2g−2)) / 6`.
pub fn trisecant_scroll_formula(fam: &FamilyDescriptor) -> Result<Expr> {
    let l = fam.line_bundles.first().cloned().unwrap_or_else(|| "L".into());
    let d = fam.fiber_degree(&l)?;
    let k = Expr::canonical_degree(&fam.genus);
    let d2 = &d * &d;
    let total = (&d2 * &d).scale(&q(2)) - d2.scale(&q(12)) + d.scale(&q(16)) - (&d * &k).scale(&q(3)) + k.scale(&q(6));
    Ok(total.scale(&qf(1, 6)))
}

/// Double-point class on `X^[2]` of a map to `P^n` with `L` the pulled-back hyperplane:
/// `G_{11}[Σ_i L^i ⊗ L^{n−i}] − Σ_{i≥1} C(n+1, i+1) (−Γ)^{i−1} Γ^(2)[L^{n−i}]`.
/// The first term pulls back to `(f × f)^* Δ`; the sum removes the excess along the diagonal.
pub fn double_point_class(fam: &Family, n: u32) -> Result<TautClass> {
    if n == 0 {
        return Err(EngineError::InvalidArgument("target dimension must be positive".into()));
    }
    let l = line(fam)?;
    let mut out = TautClass::zero(2);
    for i in 0..=n {
        out.add_assign(&fam.diagonal(&[(1, Mono::power(&l, i)), (1, Mono::power(&l, n - i))], Q::one()));
    }
    for i in 1..=n {
        let mut t = fam.diagonal(&[(2, Mono::power(&l, n - i))], -qf(1, 2) * q(binom(n as i64 + 1, i as i64 + 1)));
        for _ in 1..i {
            t = fam.gamma_mult(&t).neg();
        }
        out.add_assign(&t);
    }
    Ok(fam.prune(&out))
}

/// The same class from the flags: `½ w_*(Σ_{i=0}^{n} L_1^{n−i} (L_2 − Γ^(2))^i)`.
pub fn double_point_class_by_flags(fam: &Family, n: u32) -> Result<TautClass> {
    let cap = w_dim(2, fam.dim_b);
    let x = WExpr::l(2, cap, 2).sub(&WExpr::gamma(2, cap, 2));
    let mut e = WExpr::zero(2, cap);
    for i in 0..=n {
        e = e.add(&WExpr::l(2, cap, 1).pow(n - i).mul(&x.pow(i)));
    }
    Ok(push_w(fam, &e.graded(n))?.scale(&qf(1, 2)))
}

/// Number of double points when `dim X^[2] = n`.
pub fn double_point_count(fam: &Family, n: u32) -> Result<Expr> {
    fam.integrate(&double_point_class(fam, n)?)
}

/// `(∫_{W²} (−Γ^(2))^k, −κ_{k−2})` over a node-free base of dimension `k − 2`, where
/// `κ_j` is the character of `ω^{j+1}`.
pub fn kappa_check(k: u32) -> Result<(Expr, Expr)> {
    if k < 2 {
        return Err(EngineError::InvalidArgument("kappa check needs k >= 2".into()));
    }
    let desc = FamilyDescriptor::smooth(k - 2);
    let fam = Family::new(&desc)?;
    let mut c = fam.gamma(2);
    for _ in 1..k {
        c = fam.gamma_mult(&c);
    }
    let sign = if k.is_multiple_of(2) { Q::one() } else { q(-1) };
    // w_* of 1 on W^2 is twice the unit
    let got = fam.integrate(&c)?.scale(&(sign * q(2)));
    let kappa = if k == 2 { Expr::canonical_degree(&desc.genus) } else { desc.characters.get(&format!("omega{}", k - 1))? };
    Ok((got, -kappa))
}
