//! An independent evaluator for degree-four monomials on `W^3` over a one-dimensional base,
//! built from multiplication rules instead of the module engine.
//!
//! Write a monomial as `z · L_3^a · (Γ^(3))^k` with `z` on `W^2`. The rules used:
//! `∫ z L_3 = d ∫_{W²} z`, `∫ z Γ^(3) = 2 ∫_{W²} z`,
//! `∫ z L_3 Γ^(3) = d ∫_{W²} z Γ^(2) + ∫_{W²} z (L_1 + L_2)`,
//! `∫ z L_3² = b ∫_{C×C} z` and `∫ z L_3² Γ^(3) = b ∫_{C×C} z (Δ + P_1 + P_2)` on a fiber `C`.
//! Integrals on `W^2` use `G_{11}[α, β] · Γ = 2 Γ^(2)[αβ]`,
//! `Γ^(2)[α] · Γ = −Γ^(2)[αω] + ½ θ*(α) F` and `∫ Γ^(2) · F = −1` per node.
//! Monomials with `(Γ^(3))^3` or `(Γ^(3))^4` use the closed values on `X^[3]`:
//! `∫ (Γ^(3))^4 = 13ω² − 9σ` and `∫ [3]_*L · (Γ^(3))^3 = ½ d ω² − 12 Lω − ½ d σ`.
//! Monomials with exactly `(Γ^(3))^2` are outside the rules and give `None`.

use super::wexpr::WMono;
use crate::basering::FamilyDescriptor;
use crate::error::{EngineError, Result};
use crate::expr::Expr;
use crate::rational::{q, qf};

struct Chars {
    b: Expr,
    d: Expr,
    lw: Expr,
    w2: Expr,
    sigma: Expr,
    k: Expr,
}

impl Chars {
    fn new(fam: &FamilyDescriptor) -> Result<Chars> {
        let line = fam.line_bundles.first().cloned().unwrap_or_else(|| "L".into());
        Ok(Chars {
            b: fam.characters.get(&format!("{line}2"))?,
            d: fam.fiber_degree(&line)?,
            lw: fam.characters.get(&format!("{line}omega"))?,
            w2: fam.characters.get("omega2")?,
            sigma: fam.sigma(),
            k: Expr::canonical_degree(&fam.genus),
        })
    }

    /// `∫_{W²} L_1^a L_2^b (Γ^(2))^c` with `a + b + c = 3`.
    fn w2(&self, a: u32, b: u32, c: u32) -> Expr {
        match c {
            0 if (a, b) == (2, 1) || (a, b) == (1, 2) => &self.b * &self.d,
            0 => Expr::zero(),
            1 => self.b.clone(),
            2 => -self.lw.clone(),
            _ => &self.w2 - &self.sigma,
        }
    }

    /// `∫_{C×C} (d P_1)^a (d P_2)^b Δ^c` with `a + b + c = 2`.
    fn fiber_square(&self, a: u32, b: u32, c: u32) -> Expr {
        let d2 = &self.d * &self.d;
        match (a, b, c) {
            (1, 1, 0) => d2,
            (2, 0, 0) | (0, 2, 0) => Expr::zero(),
            (1, 0, 1) | (0, 1, 1) => self.d.clone(),
            _ => -self.k.clone(),
        }
    }
}

/// Value of a degree-four monomial on `W^3` by the multiplication rules, or `None` when
/// the monomial contains exactly `(Γ^(3))²`.
pub fn rules_w3(fam: &FamilyDescriptor, w: &WMono) -> Result<Option<Expr>> {
    if fam.dim_b != 1 || w.m() != 3 || w.degree() != 4 {
        return Err(EngineError::InvalidArgument(format!("{w} is not a top-degree monomial on W^3 over a curve")));
    }
    let ch = Chars::new(fam)?;
    let (l1, l2, g2) = (w.l[0], w.l[1], w.g[1]);
    let (a, k) = (w.l[2], w.g[2]);
    if l1 >= 3 || l2 >= 3 || a >= 3 {
        return Ok(Some(Expr::zero()));
    }
    let fourth = ch.w2.scale(&q(13)) - ch.sigma.scale(&q(9));
    let cube = (&ch.d * &ch.w2).scale(&qf(1, 2)) - ch.lw.scale(&q(12)) - (&ch.d * &ch.sigma).scale(&qf(1, 2));
    let v = match (a, k) {
        (0, 0) => Expr::zero(),
        (1, 0) => &ch.d * &ch.w2(l1, l2, g2),
        (2, 0) => ch.b.clone() * ch.fiber_square(l1, l2, g2),
        (0, 1) => ch.w2(l1, l2, g2).scale(&q(2)),
        (1, 1) => &(&ch.d * &ch.w2(l1, l2, g2 + 1)) + &(ch.w2(l1 + 1, l2, g2) + ch.w2(l1, l2 + 1, g2)),
        (2, 1) => &ch.b * &s_adjust(&ch, l1, l2, g2),
        (_, 2) => return Ok(None),
        (0, 3) | (1, 3) if g2 == 1 => fourth.scale(&q(2)),
        (0, 3) | (1, 3) => cube.scale(&q(2)),
        (0, 4) => fourth.scale(&q(6)),
        _ => Expr::zero(),
    };
    Ok(Some(v))
}

/// `∫_{C×C} z (Δ + P_1 + P_2)` for `z ∈ {d P_1, d P_2, Δ}`.
fn s_adjust(ch: &Chars, l1: u32, l2: u32, g2: u32) -> Expr {
    let pd = |x: u32, y: u32, z: u32| -> Expr {
        // P_1^x P_2^y Δ^z, x + y + z = 2
        match (x, y, z) {
            (1, 1, 0) => Expr::one(),
            (2, 0, 0) | (0, 2, 0) => Expr::zero(),
            (1, 0, 1) | (0, 1, 1) => Expr::one(),
            _ => -ch.k.clone(),
        }
    };
    let scale = if g2 == 1 { Expr::one() } else { ch.d.clone() };
    let total = pd(l1, l2, g2 + 1) + pd(l1 + 1, l2, g2) + pd(l1, l2 + 1, g2);
    &scale * &total
}
