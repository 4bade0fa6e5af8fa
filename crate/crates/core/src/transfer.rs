//! The flag transfer `τ_m` and the punctual calculus on the small diagonal `Γ_(m)`.
//!
//! The punctual part works over a one-dimensional base, where the small diagonal is a
//! surface: at each node it contains the chain `C^m_1, …, C^m_{m−1}` of exceptional
//! curves, and points `S^m_i = (−Γ^(m)) C^m_i` of degree one.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::basering::{section_pullback_name, BaseClass, FamilyDescriptor, Mono, Ring, Stratum, CANONICAL, PSI_X, PSI_Y};
use crate::error::{EngineError, Result};
use crate::expr::Expr;
use crate::rational::{binom, q, qf, Q};
use crate::tautmod::{nu, Family, SectionForm, TautClass};

/// `τ_m(c · β)` with the canonical decomposition of node sections.
pub fn transfer(fam: &Family, c: &TautClass, beta: Option<&BaseClass>) -> TautClass {
    transfer_with_form(fam, c, beta, SectionForm::J)
}

pub fn transfer_with_form(fam: &Family, c: &TautClass, beta: Option<&BaseClass>, form: SectionForm) -> TautClass {
    let one = BaseClass::one(fam.ring());
    fam.transfer(c, beta.unwrap_or(&one), form)
}

/// `ν⁻_{m,i} = i (m − i − 1)(m + 1) / 2`, multiplicity of `C^{m−1}_i` in `Γ^(m)` on the small flag.
pub fn nu_minus(m: u32, i: u32) -> Q {
    qf((i * (m - i - 1) * (m + 1)) as i64, 2)
}

/// `ν⁺_{m−1,i} = i (m − i)(m − 2) / 2`, multiplicity of `C^m_i` in `Γ^(m−1)` on the small flag.
pub fn nu_plus(m: u32, i: u32) -> Q {
    qf((i * (m - i) * (m - 2)) as i64, 2)
}

/// `ψ^m_i = C(m−i+1, 2) ψ_x + C(i, 2) ψ_y` written multiplicatively as a monomial.
pub fn psi_monomial(m: u32, i: u32) -> Mono {
    let mut p = Mono::power(PSI_X, binom((m - i + 1) as i64, 2) as u32);
    p.set(PSI_Y, binom(i as i64, 2) as u32);
    p
}

/// A term `coef · C^m_i[twist]` (or `coef · (−Γ) C^m_i[twist]` when `section`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctualTerm {
    pub section: bool,
    pub i: u32,
    pub coef: Q,
    pub twist: Mono,
}

fn check_index(i: u32, m: u32) -> Result<()> {
    if m < 3 || i < 1 || i > m - 2 {
        return Err(EngineError::InvalidArgument(format!(
            "punctual index {i} out of range 1..={} for m = {m}",
            m.saturating_sub(2)
        )));
    }
    Ok(())
}

/// `τ⁰_m(C^{m−1}_i) = ((m−i) C^m_i + (i+1) C^m_{i+1}) / (m−1)`.
pub fn punctual_transfer_scroll(i: u32, m: u32) -> Result<Vec<PunctualTerm>> {
    check_index(i, m)?;
    Ok(vec![
        PunctualTerm { section: false, i, coef: qf((m - i) as i64, (m - 1) as i64), twist: Mono::one() },
        PunctualTerm { section: false, i: i + 1, coef: qf((i + 1) as i64, (m - 1) as i64), twist: Mono::one() },
    ])
}

/// The section rule in its stated form,
/// `τ⁰_m((−Γ^(m−1)) C^{m−1}_i) = ((m−i) C^m_i[ψ^{m−1}_i] + (i+1) C^m_{i+1}[ψ^{m−1}_{i+1}]) / (m−1)`.
///
/// Over a one-dimensional base its right side has degree zero while the left side is a
/// point, so [`punctual_chern`] does not use it; see [`PunctualClass`].
pub fn punctual_transfer_section(i: u32, m: u32) -> Result<Vec<PunctualTerm>> {
    check_index(i, m)?;
    Ok(vec![
        PunctualTerm { section: false, i, coef: qf((m - i) as i64, (m - 1) as i64), twist: psi_monomial(m - 1, i) },
        PunctualTerm {
            section: false,
            i: i + 1,
            coef: qf((i + 1) as i64, (m - 1) as i64),
            twist: psi_monomial(m - 1, i + 1),
        },
    ])
}

/// Divisor `a ω + Σ b_i C^m_i + Σ c_i C^{m−1}_i` on the small flag `Γ̃_(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagDivisor {
    pub omega: Q,
    /// Coefficients of `C^m_1..C^m_{m−1}`.
    pub top: Vec<Q>,
    /// Coefficients of `C^{m−1}_1..C^{m−1}_{m−2}`.
    pub lower: Vec<Q>,
}

/// Restrictions of `Γ^(m)` and of `Γ^(m−1)` to the small flag.
pub fn small_flag_gamma(m: u32) -> Result<(FlagDivisor, FlagDivisor)> {
    if m < 2 {
        return Err(EngineError::InvalidArgument("small flag needs m >= 2".into()));
    }
    let gm = FlagDivisor {
        omega: -q(binom(m as i64, 2)),
        top: (1..m).map(|i| nu(m, i)).collect(),
        lower: (1..m - 1).map(|i| nu_minus(m, i)).collect(),
    };
    let gm1 = FlagDivisor {
        omega: -q(binom(m as i64 - 1, 2)),
        top: (1..m).map(|i| nu_plus(m, i)).collect(),
        lower: (1..m - 1).map(|i| nu(m - 1, i)).collect(),
    };
    Ok((gm, gm1))
}

/// A class on the small diagonal: an interior part from R plus, per node, scroll
/// coefficients `β^i` of `C^m_i` and point coefficients `γ^i` of `(−Γ^(m)) C^m_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctualClass {
    pub m: u32,
    pub interior: BaseClass,
    /// `nodes[s].0[i − 1] = β^i`, `nodes[s].1[i − 1] = γ^i`, classes on the node base.
    pub nodes: Vec<(Vec<BaseClass>, Vec<BaseClass>)>,
}

struct PunctualCtx {
    stratum: Stratum,
    node_ring: Arc<Ring>,
    weights: Vec<Expr>,
    line: String,
}

impl PunctualCtx {
    fn new(fam: &FamilyDescriptor) -> Result<Self> {
        if fam.dim_b != 1 {
            return Err(EngineError::Unsupported(
                "the punctual calculus is implemented over one-dimensional bases".into(),
            ));
        }
        let stratum = Stratum::main(fam)?;
        let node_ring = Arc::new(Ring::boundary("R[pt]", 1, &fam.line_bundles));
        Ok(PunctualCtx { stratum, node_ring, weights: fam.nodes.iter().map(|n| n.weight.clone()).collect(),
            line: first_line(fam)?,
        })
    }

    /// `θ*` of an interior class: over a point base only the constant survives.
    fn theta_star(&self, a: &BaseClass) -> BaseClass {
        let mut out = BaseClass::zero(&self.node_ring);
        for (m, c) in a.terms() {
            if m.is_one() {
                out.add_mono(m, c.clone());
            }
        }
        out
    }

    fn integrate(&self, c: &PunctualClass) -> Result<Expr> {
        let mut total = Expr::zero();
        for (m, v) in c.interior.terms() {
            if self.stratum.ring.degree(m) == 2 {
                total += self.stratum.integrate_product(&Mono::one(), std::slice::from_ref(m))?.scale(v);
            }
        }
        for (s, (_, gamma)) in c.nodes.iter().enumerate() {
            let mut pts = Q::zero();
            for g in gamma {
                for (m, v) in g.terms() {
                    if m.is_one() {
                        pts += v;
                    }
                }
            }
            total += self.weights[s].scale(&pts);
        }
        Ok(total)
    }

    /// Degree-one part of the scroll coefficients, i.e. the `C`-part of a divisor.
    fn constants(v: &[BaseClass]) -> Vec<Q> {
        v.iter()
            .map(|b| b.terms().find(|(m, _)| m.is_one()).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero))
            .collect()
    }
}

/// Total Chern class of the tautological bundle of `L` restricted to `Γ_(m)`, by the
/// recursion `c_m = τ⁰(c_{m−1} (1 + L + Γ^(m−1))) + (−Γ^(m)) τ⁰(c_{m−1})` from the
/// splitting on the small flag.
///
/// Products on `Γ_(m−1)`: `Γ·α = −C(m−1,2) α ω + Σ ν_{m−1,i} C_i[θ*α]`,
/// `Γ·C_i[β] = −S_i[β]`, and `L·C = ω·C = 0`, `Γ·S = L·S = 0` by dimension.
/// `τ⁰` fixes interior classes, moves `C^{m−1}_i` by the scroll rule, and sends a point
/// to a point; the points `S^m_i` are numerically equal, so `S^{m−1}_i` goes to
/// `((m−i) S^m_i + (i+1) S^m_{i+1}) / (m+1)`.
pub fn punctual_chern(m: u32, fam: &FamilyDescriptor) -> Result<PunctualClass> {
    let ctx = PunctualCtx::new(fam)?;
    punctual_chern_ctx(m, &ctx)
}

fn punctual_chern_ctx(m: u32, ctx: &PunctualCtx) -> Result<PunctualClass> {
    if m == 0 {
        return Err(EngineError::InvalidArgument("punctual Chern class needs m >= 1".into()));
    }
    let r = ctx.stratum.ring.clone();
    let nr = ctx.node_ring.clone();
    let lbundle = BaseClass::symbol(&r, &ctx.line)?;
    let omega = BaseClass::symbol(&r, CANONICAL)?;
    let one = BaseClass::one(&r);
    let zero_n = BaseClass::zero(&nr);
    let nn = ctx.weights.len();
    let mut c = PunctualClass { m: 1, interior: one.add(&lbundle)?, nodes: vec![(Vec::new(), Vec::new()); nn] };
    for k in 2..=m {
        // A = c_{k−1} (1 + L + Γ^(k−1)) on Γ_(k−1)
        let gk1 = q(binom(k as i64 - 1, 2));
        let factor = one.add(&lbundle)?.add(&omega.scale(&-gk1.clone()))?;
        let alpha_a = c.interior.multiply(&factor)?;
        let th = ctx.theta_star(&c.interior);
        let mut nodes_a = Vec::new();
        for (beta, gamma) in &c.nodes {
            let mut b = Vec::new();
            let mut g = Vec::new();
            for i in 1..k - 1 {
                let bi = beta.get(i as usize - 1).cloned().unwrap_or_else(|| zero_n.clone());
                let gi = gamma.get(i as usize - 1).cloned().unwrap_or_else(|| zero_n.clone());
                b.push(bi.add(&th.scale(&nu(k - 1, i)))?);
                g.push(gi.add(&bi.scale(&q(-1)))?);
            }
            nodes_a.push((b, g));
        }
        // τ⁰(A) + (−Γ^(k)) τ⁰(c_{k−1})
        let gk = q(binom(k as i64, 2));
        let interior = alpha_a.add(&c.interior.multiply(&omega.scale(&gk))?)?;
        let th_prev = ctx.theta_star(&c.interior);
        let mut nodes = Vec::new();
        for (s, (b_a, g_a)) in nodes_a.iter().enumerate() {
            let (beta_prev, _) = &c.nodes[s];
            let mut b = vec![zero_n.clone(); k as usize - 1];
            let mut g = vec![zero_n.clone(); k as usize - 1];
            for j in 1..k - 1 {
                let lo = qf((k - j) as i64, (k - 1) as i64);
                let hi = qf((j + 1) as i64, (k - 1) as i64);
                let ju = j as usize;
                b[ju - 1] = b[ju - 1].add(&b_a[ju - 1].scale(&lo))?;
                b[ju] = b[ju].add(&b_a[ju - 1].scale(&hi))?;
                let plo = qf((k - j) as i64, (k + 1) as i64);
                let phi = qf((j + 1) as i64, (k + 1) as i64);
                g[ju - 1] = g[ju - 1].add(&g_a[ju - 1].scale(&plo))?;
                g[ju] = g[ju].add(&g_a[ju - 1].scale(&phi))?;
                // (−Γ^(k)) τ⁰(C^{k−1}_j[β]) = τ⁰ coefficients on the points S^k
                let bp = beta_prev.get(ju - 1).cloned().unwrap_or_else(|| zero_n.clone());
                g[ju - 1] = g[ju - 1].add(&bp.scale(&lo))?;
                g[ju] = g[ju].add(&bp.scale(&hi))?;
            }
            for i in 1..k {
                b[i as usize - 1] = b[i as usize - 1].add(&th_prev.scale(&-nu(k, i)))?;
            }
            nodes.push((b, g));
        }
        c = PunctualClass { m: k, interior, nodes };
    }
    Ok(c)
}

/// Integral of the degree-two part of a punctual class over `Γ_(m)` (base dimension one).
pub fn integrate_punctual(c: &PunctualClass, fam: &FamilyDescriptor) -> Result<Expr> {
    PunctualCtx::new(fam)?.integrate(c)
}

fn first_line(fam: &FamilyDescriptor) -> Result<String> {
    fam.line_bundles
        .first()
        .cloned()
        .ok_or_else(|| EngineError::InvalidArgument("family has no line bundle".into()))
}

fn chars(fam: &FamilyDescriptor) -> Result<(Expr, Expr, Expr, Expr)> {
    let t = &fam.characters;
    Ok((t.get("L2")?, t.get("Lomega")?, t.get("omega2")?, fam.sigma()))
}

fn combo(fam: &FamilyDescriptor, l2: Q, lw: Q, w2: Q, s: Q) -> Result<Expr> {
    let (b, lo, o2, sig) = chars(fam)?;
    Ok(b.scale(&l2) + lo.scale(&lw) + o2.scale(&w2) + sig.scale(&s))
}

/// Which closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// The form this engine derives and checks against both recursions.
    Derived,
    /// The coefficients as originally published, kept for comparison.
    Published,
}

/// `s_{2,m}` in closed form over a one-dimensional base.
pub fn pluecker_s2_closed(m: u32, fam: &FamilyDescriptor, form: ClosedForm) -> Result<Expr> {
    let mm = m as i64;
    let base = mm * (mm * mm - 1);
    let lw = match form {
        ClosedForm::Derived => qf(base, 2),
        ClosedForm::Published => qf(base, 3),
    };
    combo(fam, q(binom(mm + 1, 2)), lw, qf(base * (3 * mm - 2), 24), -qf(base * (mm + 2), 24))
}

/// `c_{2,m}` in closed form over a one-dimensional base.
pub fn pluecker_c2_closed(m: u32, fam: &FamilyDescriptor, form: ClosedForm) -> Result<Expr> {
    let mm = m as i64;
    let sigma = match form {
        ClosedForm::Derived => -q(binom(mm + 1, 4)),
        ClosedForm::Published => -q(2 * binom(mm + 2, 5)),
    };
    combo(
        fam,
        q(binom(mm, 2)),
        q(3 * binom(mm + 1, 3) - 2 * binom(mm, 2)),
        q(3 * binom(mm + 1, 4) - binom(mm, 3)),
        sigma,
    )
}

/// Quadratic intersection numbers on the small flag over a one-dimensional base, in
/// the basis `L, ω, Γ^(m), Γ^(m−1)` restricted to `Γ̃_(m)`.
struct FlagSurface {
    m: u32,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FlagGen {
    L,
    G,
    GPrev,
}

impl FlagSurface {
    /// `x·y` as `(L², Lω, ω², σ)` coefficients.
    fn pair(&self, x: FlagGen, y: FlagGen) -> [Q; 4] {
        use FlagGen::*;
        let (gm, gm1) = small_flag_gamma(self.m).expect("m >= 2");
        let interior = |g: FlagGen| -> (Q, Q) {
            // (L-coefficient, ω-coefficient) of the interior part
            match g {
                L => (q(1), q(0)),
                G => (q(0), gm.omega.clone()),
                GPrev => (q(0), gm1.omega.clone()),
            }
        };
        let (xl, xw) = interior(x);
        let (yl, yw) = interior(y);
        let mut out = [&xl * &yl, &xl * &yw + &xw * &yl, &xw * &yw, Q::zero()];
        // node part: only Γ·C-type products survive; Γ·C^m = −1, Γ'·C^{m−1} = −1
        let exc = |g: FlagGen| -> Option<&FlagDivisor> {
            match g {
                G => Some(&gm),
                GPrev => Some(&gm1),
                _ => None,
            }
        };
        let hit = |g: FlagGen, d: &FlagDivisor| -> Q {
            match g {
                G => -d.top.iter().fold(Q::zero(), |a, b| a + b),
                GPrev => -d.lower.iter().fold(Q::zero(), |a, b| a + b),
                _ => Q::zero(),
            }
        };
        if let Some(dx) = exc(x) {
            out[3] = hit(y, dx);
        } else if let Some(dy) = exc(y) {
            out[3] = hit(x, dy);
        }
        out
    }
}

/// Step `s_{2,m} − τ⁰(s_{2,m−1}) = x (mL − Γ^(m))` with `x = L + Γ^(m−1) − Γ^(m)`, as
/// `(L², Lω, ω², σ)` coefficients over a one-dimensional base.
fn segre_step(m: u32) -> [Q; 4] {
    use FlagGen::*;
    if m == 1 {
        return [q(1), q(0), q(0), q(0)];
    }
    let f = FlagSurface { m };
    let x = [(L, q(1)), (GPrev, q(1)), (G, q(-1))];
    let y = [(L, q(m as i64)), (G, q(-1))];
    bilinear(&f, &x, &y)
}

/// Step `c_{2,m} − τ⁰(c_{2,m−1}) = c_1(Λ_{m−1}) x` with `c_1(Λ_{m−1}) = (m−1)L − Γ^(m−1)`.
fn chern_step(m: u32) -> [Q; 4] {
    use FlagGen::*;
    if m == 1 {
        return [q(0), q(0), q(0), q(0)];
    }
    let f = FlagSurface { m };
    let x = [(L, q(1)), (GPrev, q(1)), (G, q(-1))];
    let y = [(L, q(m as i64 - 1)), (GPrev, q(-1))];
    bilinear(&f, &x, &y)
}

fn bilinear(f: &FlagSurface, x: &[(FlagGen, Q)], y: &[(FlagGen, Q)]) -> [Q; 4] {
    let mut out = [Q::zero(), Q::zero(), Q::zero(), Q::zero()];
    for (gx, cx) in x {
        for (gy, cy) in y {
            let p = f.pair(*gx, *gy);
            for i in 0..4 {
                out[i] += &p[i] * cx * cy;
            }
        }
    }
    out
}

/// The class `s_{2,m} − τ⁰(s_{2,m−1})` on `Γ_(m)`:
/// `m L² + (3m(m−1)/2) L ω + (m−1) C(m,2) ω²` in the interior,
/// `−3 i (m−i) m / 2 · θ*L` on `C^m_i`, and `−i (m−i)` on the points `S^m_i`.
pub fn mcontact_segre(m: u32, fam: &FamilyDescriptor) -> Result<PunctualClass> {
    if m < 2 {
        return Err(EngineError::InvalidArgument("the m-contact step needs m >= 2".into()));
    }
    let r = Arc::new(Ring::fiber("R", fam.dim_b.max(1), &fam.line_bundles));
    let nr = Arc::new(Ring::boundary("R[s]", fam.dim_b.max(1), &fam.line_bundles));
    let mm = m as i64;
    let l = first_line(fam)?;
    let interior = BaseClass::parse(
        &r,
        &format!(
            "{}*{l}^2 + {}*{l}*omega + {}*omega^2",
            mm,
            qf(3 * mm * (mm - 1), 2),
            (mm - 1) * binom(mm, 2)
        ),
    )?;
    let thl = BaseClass::symbol(&nr, &section_pullback_name(&l))?;
    let one = BaseClass::one(&nr);
    let nodes = fam
        .nodes
        .iter()
        .map(|_| {
            let b = (1..m).map(|i| thl.scale(&-qf(3 * (i * (m - i) * m) as i64, 2))).collect();
            let g = (1..m).map(|i| one.scale(&q(-((i * (m - i)) as i64)))).collect();
            (b, g)
        })
        .collect();
    Ok(PunctualClass { m, interior, nodes })
}

fn sum_steps(m: u32, fam: &FamilyDescriptor, step: fn(u32) -> [Q; 4]) -> Result<Expr> {
    let mut acc = [Q::zero(), Q::zero(), Q::zero(), Q::zero()];
    for k in 1..=m {
        let s = step(k);
        for i in 0..4 {
            acc[i] += &s[i];
        }
    }
    let [a, b, c, d] = acc;
    combo(fam, a, b, c, d)
}

/// Both Plücker-type numbers by the two recursions and the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlueckerValues {
    pub small_flag: Expr,
    pub punctual: Expr,
    pub closed: Expr,
}

fn check_dim1(fam: &FamilyDescriptor) -> Result<()> {
    if fam.dim_b != 1 {
        return Err(EngineError::Unsupported("Plücker numbers are evaluated over one-dimensional bases".into()));
    }
    Ok(())
}

/// `(c_1², c_2)` of the punctual Chern class, using `(Σ ν_i C_i)·C_j = −1`.
fn punctual_c1sq_c2(m: u32, fam: &FamilyDescriptor) -> Result<(Expr, Expr)> {
    let ctx = PunctualCtx::new(fam)?;
    let c = punctual_chern_ctx(m, &ctx)?;
    let r = &ctx.stratum.ring;
    let mut deg1 = BaseClass::zero(r);
    let mut deg2 = BaseClass::zero(r);
    for (mono, v) in c.interior.terms() {
        match r.degree(mono) {
            1 => deg1.add_mono(mono, v.clone()),
            2 => deg2.add_mono(mono, v.clone()),
            _ => {}
        }
    }
    let c2 = ctx.integrate(&PunctualClass { m, interior: deg2, nodes: c.nodes.clone() })?;
    let sq = deg1.multiply(&deg1)?;
    let mut c1sq = ctx.integrate(&PunctualClass { m, interior: sq, nodes: Vec::new() })?;
    for (s, (beta, _)) in c.nodes.iter().enumerate() {
        let b = PunctualCtx::constants(beta);
        // the C-part of c_1 is a multiple λ of −Σ ν_i C_i
        let lambda = if m >= 2 { -(&b[0] / nu(m, 1)) } else { Q::zero() };
        for (i, bi) in b.iter().enumerate() {
            if *bi != -(&lambda * nu(m, i as u32 + 1)) {
                return Err(EngineError::Inconsistent("first Chern class off the exceptional divisor".into()));
            }
        }
        let total_nu: Q = (1..m).map(|i| nu(m, i)).fold(Q::zero(), |a, b| a + b);
        c1sq += ctx.weights[s].scale(&(-(&lambda * &lambda) * total_nu));
    }
    Ok((c1sq, c2))
}

/// Second Segre class of the tautological bundle on `Γ_(m)` over a one-dimensional base,
/// by every route; errors if they disagree.
pub fn pluecker_s2(m: u32, fam: &FamilyDescriptor) -> Result<PlueckerValues> {
    check_dim1(fam)?;
    let small_flag = sum_steps(m, fam, segre_step)?;
    let (c1sq, c2) = punctual_c1sq_c2(m, fam)?;
    let v = PlueckerValues { small_flag, punctual: c1sq - c2, closed: pluecker_s2_closed(m, fam, ClosedForm::Derived)? };
    agree(v, "s2", m)
}

/// Second Chern class of the tautological bundle on `Γ_(m)`, by every route.
pub fn pluecker_c2(m: u32, fam: &FamilyDescriptor) -> Result<PlueckerValues> {
    check_dim1(fam)?;
    let small_flag = sum_steps(m, fam, chern_step)?;
    let (_, c2) = punctual_c1sq_c2(m, fam)?;
    let v = PlueckerValues { small_flag, punctual: c2, closed: pluecker_c2_closed(m, fam, ClosedForm::Derived)? };
    agree(v, "c2", m)
}

fn agree(v: PlueckerValues, what: &str, m: u32) -> Result<PlueckerValues> {
    if v.small_flag != v.closed || v.punctual != v.closed {
        return Err(EngineError::Inconsistent(format!(
            "{what} at m = {m}: small flag {}, punctual {}, closed form {}",
            v.small_flag, v.punctual, v.closed
        )));
    }
    Ok(v)
}

/// Small-flag step of `s_2` or `c_2` as a character expression.
pub fn pluecker_step(which: &str, m: u32, fam: &FamilyDescriptor) -> Result<Expr> {
    check_dim1(fam)?;
    let s = match which {
        "s2" => segre_step(m),
        "c2" => chern_step(m),
        _ => return Err(EngineError::InvalidArgument(format!("unknown class '{which}'"))),
    };
    let [a, b, c, d] = s;
    combo(fam, a, b, c, d)
}

/// Keep only the listed symbol degrees, used to cut total classes to a codimension.
pub fn graded_part(c: &BaseClass, degree: i64) -> BaseClass {
    let r = c.ring().clone();
    let mut out = BaseClass::zero(&r);
    for (m, v) in c.terms() {
        if r.degree(m) == degree {
            out.add_mono(m, v.clone());
        }
    }
    out
}

/// Map of `(node, i)` to a coefficient, for display.
pub fn punctual_terms(c: &PunctualClass) -> BTreeMap<(usize, u32, bool), String> {
    let mut out = BTreeMap::new();
    for (s, (b, g)) in c.nodes.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            if !x.is_zero() {
                out.insert((s, i as u32 + 1, false), x.to_string());
            }
        }
        for (i, x) in g.iter().enumerate() {
            if !x.is_zero() {
                out.insert((s, i as u32 + 1, true), x.to_string());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam() -> FamilyDescriptor {
        FamilyDescriptor::generic(1)
    }

    #[test]
    fn scroll_rule_examples() {
        let t = punctual_transfer_scroll(1, 3).unwrap();
        assert_eq!((t[0].i, t[0].coef.clone(), t[1].i, t[1].coef.clone()), (1, q(1), 2, q(1)));
        let t = punctual_transfer_scroll(1, 4).unwrap();
        assert_eq!((t[0].coef.clone(), t[1].coef.clone()), (q(1), qf(2, 3)));
        assert!(punctual_transfer_scroll(2, 3).is_err());
        for m in 3..=8 {
            for i in 1..=m - 2 {
                let t = punctual_transfer_scroll(i, m).unwrap();
                assert_eq!(&t[0].coef + &t[1].coef, qf((m + 1) as i64, (m - 1) as i64));
            }
        }
    }

    #[test]
    fn psi_monomials() {
        assert_eq!(psi_monomial(2, 1).to_string(), "psi_x");
        assert_eq!(psi_monomial(3, 2).to_string(), "psi_x*psi_y");
        let t = punctual_transfer_section(1, 3).unwrap();
        assert_eq!(t[0].twist, psi_monomial(2, 1));
        assert_eq!(t[1].twist, psi_monomial(2, 2));
    }

    #[test]
    fn flag_multiplicities() {
        assert_eq!(nu_minus(3, 1), q(2));
        assert_eq!(nu_plus(3, 1), q(1));
        for m in 2..=8u32 {
            let (gm, gm1) = small_flag_gamma(m).unwrap();
            let mi = m as i64;
            let sum = |v: &[Q]| v.iter().fold(Q::zero(), |a, b| a + b);
            assert_eq!(sum(&gm.top), qf(mi * mi * (mi * mi - 1), 12));
            assert_eq!(sum(&gm.lower), qf(mi * (mi - 2) * (mi * mi - 1), 12));
            assert_eq!(sum(&gm1.top), sum(&gm.lower));
        }
    }

    #[test]
    fn punctual_chern_low_degree() {
        let c = punctual_chern(2, &fam()).unwrap();
        let r = c.interior.ring().clone();
        let expect = BaseClass::parse(&r, "1 + L").unwrap().multiply(&BaseClass::parse(&r, "1 + L + omega").unwrap()).unwrap();
        assert_eq!(c.interior, expect);
        // C-part of c_1 is −ν C
        assert_eq!(c.nodes[0].0[0].to_string(), "-1");
        for m in 2..=6 {
            let c = punctual_chern(m, &fam()).unwrap();
            for i in 1..m {
                assert_eq!(PunctualCtx::constants(&c.nodes[0].0)[i as usize - 1], -nu(m, i));
            }
        }
    }

    #[test]
    fn routes_agree() {
        for m in 1..=8 {
            pluecker_s2(m, &fam()).unwrap();
            pluecker_c2(m, &fam()).unwrap();
        }
    }

    #[test]
    fn low_values() {
        let f = fam();
        assert_eq!(pluecker_s2(1, &f).unwrap().closed.to_string(), "L2");
        assert_eq!(pluecker_s2(2, &f).unwrap().closed.to_string(), "3*L2 + 3*Lomega + omega2 - sigma");
        assert_eq!(pluecker_s2(3, &f).unwrap().closed.to_string(), "6*L2 + 12*Lomega + 7*omega2 - 5*sigma");
        assert_eq!(pluecker_c2(1, &f).unwrap().closed.to_string(), "0");
        assert_eq!(pluecker_c2(2, &f).unwrap().closed.to_string(), "L2 + Lomega");
        assert_eq!(pluecker_c2(3, &f).unwrap().closed.to_string(), "3*L2 + 6*Lomega + 2*omega2 - sigma");
    }

    #[test]
    fn segre_vanishes_on_plane_curve_pencils() {
        // Pencil of plane curves of degree n: X is P² blown up in n² points, L the
        // hyperplane class. Every fiber is embedded, so s_{2,2} counts nothing.
        for n in 1..=6i64 {
            let mut f = FamilyDescriptor::generic(1);
            f.characters.set("L2", Expr::int(1));
            f.characters.set("Lomega", Expr::int(2 * n - 3));
            f.characters.set("omega2", Expr::int((2 * n - 3).pow(2) - n * n));
            f.nodes[0].weight = Expr::int(3 * (n - 1).pow(2));
            assert_eq!(pluecker_s2(2, &f).unwrap().closed, Expr::zero(), "n = {n}");
        }
    }

    #[test]
    fn mcontact_step_integrates_to_small_flag_step() {
        let f = fam();
        for m in 2..=7 {
            let mi = m as i64;
            let over_surface = mcontact_segre(m, &FamilyDescriptor::generic(2)).unwrap();
            assert_eq!(over_surface.nodes[0].0[0].to_string(), format!("{}*thL", -qf(3 * (mi - 1) * mi, 2)));
            let c = mcontact_segre(m, &f).unwrap();
            assert!(c.nodes[0].0.iter().all(BaseClass::is_zero));
            let ctx = PunctualCtx::new(&f).unwrap();
            let r = ctx.stratum.ring.clone();
            let moved = PunctualClass {
                m,
                interior: BaseClass::parse(&r, &c.interior.to_string()).unwrap(),
                nodes: c.nodes.iter().map(|(_, g)| (Vec::new(), g.iter().map(|x| BaseClass::parse(&ctx.node_ring, &x.to_string()).unwrap()).collect())).collect(),
            };
            assert_eq!(ctx.integrate(&moved).unwrap(), pluecker_step("s2", m, &f).unwrap());
        }
    }
}
