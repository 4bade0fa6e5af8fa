//! Acceptance criteria 1 to 10, one line each.
//!
//! A criterion is PASS, FAIL, or FAIL (documented) when it fails only on a recorded
//! deviation from a listed reference value. The process exits non-zero on any
//! undocumented failure.

use std::process::ExitCode;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use nodal_hilb::chern::{
    chern_numbers_w3, flag_push, formulary, porteous, trisecant_grand_total, trisecant_scroll_degree,
    trisecant_scroll_formula, w3_monomial, WMono,
};
use nodal_hilb::oracle::{
    check_gamma_power, check_symmetrization, exhaustive_check, p1_diagonal_degree, p1_engine_degree, sample_twists,
    OrderedTensor, Twist,
};
use nodal_hilb::tautmod::{nu, SectionForm};
use nodal_hilb::transfer::{pluecker_c2, pluecker_s2};
use nodal_hilb::{BaseClass, Expr, Family, FamilyDescriptor, ScrollIndex, TautClass, Q};

enum Verdict {
    Pass(String),
    Fail(String),
    Documented(String),
}

type Check = Result<Verdict, String>;
type Criterion = (&'static str, fn() -> Check);

fn e(s: &str) -> Expr {
    Expr::parse(s).expect("expression parses")
}

/// `b` stands for L² and `K` for the canonical degree 2g − 2.
fn with_table_symbols(s: &str) -> Expr {
    let mut subs = std::collections::BTreeMap::new();
    subs.insert("b".to_string(), Expr::var("L2"));
    subs.insert("K".to_string(), e("2*g - 2"));
    e(s).substitute(&subs)
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn generic(dim_b: u32) -> Result<Family, String> {
    Family::new(&FamilyDescriptor::generic(dim_b)).map_err(|x| x.to_string())
}

fn small_diagonal() -> Check {
    let want: [&[i64]; 4] = [&[1], &[3, 3], &[6, 8, 6], &[10, 15, 15, 10]];
    for (row, m) in want.iter().zip(2u32..) {
        let got: Vec<Q> = (1..m).map(|i| nu(m, i)).collect();
        if got != row.iter().map(|x| q(*x)).collect::<Vec<_>>() {
            return Ok(Verdict::Fail(format!("m={m}: {got:?}")));
        }
        let mi = m as i64;
        let sum: Q = got.iter().cloned().sum();
        if sum != Q::new((mi * mi * (mi * mi - 1)).into(), 12.into()) {
            return Ok(Verdict::Fail(format!("sum at m={m} is {sum}")));
        }
    }
    Ok(Verdict::Pass("rows for m = 2..5 and their sums m²(m²−1)/12".into()))
}

fn discriminant_powers() -> Check {
    let f = generic(1)?;
    let a = f.integrate(&f.gamma_power(2, 3)).map_err(|x| x.to_string())?;
    let b = f.integrate(&f.gamma_power(3, 4)).map_err(|x| x.to_string())?;
    if a == e("1/2*omega2 - 1/2*sigma") && b == e("13*omega2 - 9*sigma") {
        Ok(Verdict::Pass(format!("cube on X^[2] = {a}; fourth power on X^[3] = {b}")))
    } else {
        Ok(Verdict::Fail(format!("got {a} and {b}")))
    }
}

fn scroll_polarization() -> Check {
    let mut d = FamilyDescriptor::generic(1);
    d.nodes[0].weight = Expr::one();
    let f = Family::new(&d).map_err(|x| x.to_string())?;
    let b = &f.nodes[0].boundary;
    let c = TautClass::scroll_term(3, ScrollIndex { node: 0, n: 2, j: 1 }, b.unit(1));
    let v = f.integrate(&f.gamma_mult(&f.gamma_mult(&c))).map_err(|x| x.to_string())?;
    if v == Expr::int(-6) {
        Ok(Verdict::Pass("(−Γ^(3))² on the length-2 scroll with one weight-1 node = −6".into()))
    } else {
        Ok(Verdict::Fail(format!("got {v}")))
    }
}

fn w3_formulary() -> Check {
    let f = generic(1)?;
    let table = formulary();
    let daggers = table.iter().filter(|x| x.needs_engine).count();
    let mut bad = Vec::new();
    for row in &table {
        let got = w3_monomial(&f, &row.mono()).map_err(|x| x.to_string())?;
        if got != row.expected_value() {
            bad.push(format!("{}: {got}", row.monomial));
        }
    }
    if bad.is_empty() && table.len() >= 25 {
        Ok(Verdict::Pass(format!("{} monomials through the engine, {daggers} beyond the multiplication rules", table.len())))
    } else {
        Ok(Verdict::Fail(bad.join("; ")))
    }
}

fn chern_numbers() -> Check {
    let f = generic(1)?;
    let n = chern_numbers_w3(&f).map_err(|x| x.to_string())?;
    let want = [
        (&n.c1_4, "36*b*d^2 - 216*b*d - 18*b*K - 72*d*Lomega - 12*d*omega2 + 12*d*sigma + 324*b + 288*Lomega + 78*omega2 - 54*sigma"),
        (&n.c1_2_c2, "15*b*d^2 - 81*b*d - 6*b*K - 24*d*Lomega - 3*d*omega2 + 3*d*sigma + 108*b + 84*Lomega + 18*omega2 - 12*sigma"),
        (&n.c1_c3, "3*b*d^2 - 12*b*d - 3*d*Lomega + 12*b + 6*Lomega"),
        (&n.c2_2, "6*b*d^2 - 30*b*d - 3*b*K - 6*d*Lomega + 36*b + 24*Lomega + 4*omega2 - 2*sigma"),
    ];
    for (got, s) in want {
        if *got != with_table_symbols(s) {
            return Ok(Verdict::Fail(format!("{got} differs from {s}")));
        }
    }
    let total = trisecant_grand_total(&FamilyDescriptor::generic(1)).map_err(|x| x.to_string())?;
    if porteous(&n) != total {
        return Ok(Verdict::Fail(format!("Porteous {} differs from the grand total {total}", porteous(&n))));
    }
    Ok(Verdict::Pass("c1⁴, c1²c2, c1c3, c2² and the Porteous count equal the grand total".into()))
}

fn pluecker() -> Check {
    let fam = FamilyDescriptor::generic(1);
    for m in 1..=8 {
        pluecker_s2(m, &fam).map_err(|x| x.to_string())?;
        pluecker_c2(m, &fam).map_err(|x| x.to_string())?;
    }
    let listed = [
        ("s2", 1, "L2"),
        ("s2", 2, "2*L2 + 2*Lomega + omega2 - sigma"),
        ("s2", 3, "6*L2 + 8*Lomega + 7*omega2 - 5*sigma"),
        ("c2", 1, "0"),
        ("c2", 2, "L2 + Lomega"),
    ];
    let mut off = Vec::new();
    for (which, m, s) in listed {
        let v = if which == "s2" { pluecker_s2(m, &fam) } else { pluecker_c2(m, &fam) }.map_err(|x| x.to_string())?.closed;
        if v != e(s) {
            off.push(format!("{which} at m={m}: listed {s}, computed {v}"));
        }
    }
    let documented = [
        "s2 at m=2: listed 2*L2 + 2*Lomega + omega2 - sigma, computed 3*L2 + 3*Lomega + omega2 - sigma",
        "s2 at m=3: listed 6*L2 + 8*Lomega + 7*omega2 - 5*sigma, computed 6*L2 + 12*Lomega + 7*omega2 - 5*sigma",
    ];
    let head = "closed forms equal both recursions for m = 1..8";
    if off.is_empty() {
        Ok(Verdict::Pass(format!("{head}; listed values match")))
    } else if off.iter().all(|x| documented.contains(&x.as_str())) {
        Ok(Verdict::Documented(format!("{head}; listed values differ: {}", off.join("; "))))
    } else {
        Ok(Verdict::Fail(off.join("; ")))
    }
}

fn transfer_identities() -> Check {
    let f = generic(1)?;
    let g2 = flag_push(&f, &WMono::parse("G2", 3).map_err(|x| x.message)?).map_err(|x| x.to_string())?;
    if g2 != f.gamma(3).scale(&q(2)) {
        return Ok(Verdict::Fail("flag pushforward of Γ^(2) on W³ is not 2Γ^(3)".into()));
    }
    let one = BaseClass::one(f.ring());
    let l = BaseClass::symbol(f.ring(), "L").map_err(|x| x.to_string())?;
    let mut compared = 0;
    let mut with_sections = 0;
    for m in 2..=4 {
        for k in 1..=m {
            let c = f.gamma_power(m, k);
            if !c.section.is_empty() {
                with_sections += 1;
            }
            for beta in [&one, &l] {
                let a = f.transfer(&c, beta, SectionForm::J);
                let b = f.transfer(&c, beta, SectionForm::JPlusOne);
                let extra = m as i64 + 2 - k as i64 - if beta == &one { 0 } else { 1 };
                let pa = (0..extra).fold(a, |x, _| f.gamma_mult(&x));
                let pb = (0..extra).fold(b, |x, _| f.gamma_mult(&x));
                let (va, vb) = (f.integrate(&pa).map_err(|x| x.to_string())?, f.integrate(&pb).map_err(|x| x.to_string())?);
                if va != vb {
                    return Ok(Verdict::Fail(format!("forms differ at m={m} k={k}: {va} vs {vb}")));
                }
                compared += 1;
            }
        }
    }
    Ok(Verdict::Pass(format!(
        "pushforward of Γ^(2) from W³ is 2Γ^(3); both section forms agree on {compared} transfers into X^[m], m ≤ 5 ({with_sections} sources with section terms)"
    )))
}

fn oracle_equivalence() -> Check {
    let smooth: Vec<Family> = [1, 2].iter().map(|d| Family::new(&FamilyDescriptor::smooth(*d)).unwrap()).collect();
    let twists = prop::sample::select(sample_twists("L"));
    let labelled = (2u32..=5)
        .prop_flat_map(move |m| (Just(m), prop::collection::vec(0..m, m as usize), prop::collection::vec(twists.clone(), m as usize)))
        .prop_map(|(m, labels, tw)| {
            let mut blocks: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
            for i in 1..=m {
                blocks.entry(labels[i as usize - 1]).or_default().push(i);
            }
            blocks.into_values().zip(tw).collect::<Vec<(Vec<u32>, Twist)>>()
        });
    let mut runner = TestRunner::new(Config { cases: 256, failure_persistence: None, ..Config::default() });
    let cases = std::cell::Cell::new(0usize);
    runner
        .run(&(labelled, 0usize..2, 1u32..=4, -3i64..=3), |(blocks, fi, k, c)| {
            let f = &smooth[fi];
            let t = OrderedTensor::labelled(blocks.clone(), q(c)).unwrap();
            let d1 = check_symmetrization(f, &t).unwrap();
            prop_assert!(d1.is_empty(), "{:?}", d1);
            let sized: Vec<(u32, Twist)> = blocks.iter().map(|(b, a)| (b.len() as u32, a.clone())).collect();
            let d2 = check_gamma_power(f, &sized, k).unwrap();
            prop_assert!(d2.is_empty(), "{:?}", d2);
            cases.set(cases.get() + 2);
            Ok(())
        })
        .map_err(|x| x.to_string())?;
    let mut exhaustive = 0;
    for f in &smooth {
        let rep = exhaustive_check(f, 5, 4).map_err(|x| x.to_string())?;
        if !rep.failures.is_empty() {
            return Ok(Verdict::Fail(rep.failures[0].clone()));
        }
        exhaustive += rep.cases;
    }
    Ok(Verdict::Pass(format!(
        "{} randomized and {exhaustive} exhaustive cases, weight ≤ 5, powers ≤ 4, engine = tensors = ordered model",
        cases.get()
    )))
}

fn p1_degrees() -> Check {
    for m in 2..=5u32 {
        for n in 2..=m {
            let want = BigInt::from(n * (m - n + 1));
            let jet = p1_diagonal_degree(m, n).map_err(|x| x.to_string())?;
            let engine = p1_engine_degree(m, n).map_err(|x| x.to_string())?;
            if jet != want || engine != Expr::constant(Q::from_integer(want.clone())) {
                return Ok(Verdict::Fail(format!("m={m} n={n}: parametrization {jet}, engine {engine}, expected {want}")));
            }
        }
    }
    Ok(Verdict::Pass("n(m−n+1) for 2 ≤ n ≤ m ≤ 5 by parametrization and by the engine".into()))
}

fn trisecant_scroll() -> Check {
    let d = FamilyDescriptor::single_curve();
    let f = Family::new(&d).map_err(|x| x.to_string())?;
    let v = trisecant_scroll_degree(&f).map_err(|x| x.to_string())?;
    let want = trisecant_scroll_formula(&d).map_err(|x| x.to_string())?;
    let literal = with_table_symbols("1/3*d^3 - 2*d^2 + 8/3*d - 1/2*d*K + K");
    if v == want && v == literal {
        Ok(Verdict::Pass(format!("degree {v}")))
    } else {
        Ok(Verdict::Fail(format!("{v} vs {want}")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("small-diagonal multiplicities", small_diagonal),
        ("discriminant powers", discriminant_powers),
        ("node-scroll polarization", scroll_polarization),
        ("W³ formulary", w3_formulary),
        ("Chern numbers and Porteous", chern_numbers),
        ("Plücker closed forms", pluecker),
        ("transfer identities", transfer_identities),
        ("oracle equivalence", oracle_equivalence),
        ("P¹ degrees", p1_degrees),
        ("trisecant scroll", trisecant_scroll),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (tag, detail) = match check() {
            Ok(Verdict::Pass(d)) => ("PASS", d),
            Ok(Verdict::Documented(d)) => ("FAIL (documented)", d),
            Ok(Verdict::Fail(d)) => {
                unexpected += 1;
                ("FAIL", d)
            }
            Err(err) => {
                unexpected += 1;
                ("FAIL", format!("error: {err}"))
            }
        };
        println!("criterion {:>2} {name}: {tag}: {detail}", i + 1);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} undocumented failures");
        ExitCode::FAILURE
    }
}
