//! Command-line front end: reads a family descriptor, runs one query, prints text or JSON.
//!
//! Exit codes: 0 on success, 1 on an invalid request or descriptor, 2 on an engine error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nodal_hilb::chern::{
    chern_closed_form, chern_numbers_w3, chern_pushed, double_point_count, formulary, porteous, trisecant_grand_total,
    trisecant_scroll_degree, trisecant_scroll_formula, w3_monomial,
};
use nodal_hilb::descriptor::{load_descriptor, DescriptorError};
use nodal_hilb::oracle::{exhaustive_check, p1_diagonal_degree, p1_engine_degree};
use nodal_hilb::serial::class_doc;
use nodal_hilb::tautmod::SectionForm;
use nodal_hilb::transfer::{
    integrate_punctual, pluecker_c2, pluecker_c2_closed, pluecker_s2, pluecker_s2_closed, punctual_chern,
    punctual_terms, transfer_with_form, ClosedForm,
};
use nodal_hilb::{BaseClass, EngineError, Expr, Family, FamilyDescriptor, NodeDescriptor, ParseError, TautClass};

#[derive(Parser, Debug)]
#[command(name = "nodal-hilb", version, about = "Intersection numbers on relative Hilbert schemes of nodal curve families")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputMode::Text, global = true)]
    output: OutputMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    #[value(name = "json-like")]
    Json,
}

/// Family selection shared by all queries: a descriptor file plus character overrides.
/// Without a file the family is symbolic over a curve with one node of weight `sigma`.
#[derive(Args, Debug, Clone, Default)]
struct FamilyArgs {
    /// Family descriptor file.
    descriptor: Option<PathBuf>,
    /// Fiber degree of the line bundle.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Genus of the fibers.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// `∫ L²`.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// `∫ L·ω`.
    #[arg(long, allow_hyphen_values = true)]
    lomega: Option<String>,
    /// `∫ ω²`.
    #[arg(long, allow_hyphen_values = true)]
    omega2: Option<String>,
    /// Replace the node list by one node of this weight; `0` removes all nodes.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// `(Γ^(m))^k` on `X^[m]`, or its degree.
    GammaPower {
        /// Number of points
        #[arg(long)]
        m: u32,
        /// Exponent of the discriminant class
        #[arg(long)]
        k: u32,
        /// Print the degree instead of the class.
        #[arg(long)]
        integrate: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Total Chern class of the tautological bundle on `X^[m]`.
    Chern {
        /// Number of points
        #[arg(long)]
        m: u32,
        /// Evaluate the closed form over distributions and check it against the splitting.
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Chern numbers of the tautological bundle on the triple flag space and their
    /// Porteous combination.
    ChernNumbers {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Degree-four monomials on the triple flag space through the engine, beside the table.
    Formulary {
        /// Only this monomial, e.g. `G2^2*G3^2`.
        #[arg(long)]
        monomial: Option<String>,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// `τ` of `(Γ^(m))^k` twisted by the new point's class, on `X^[m+1]`.
    Transfer {
        /// Number of points
        #[arg(long)]
        m: u32,
        /// Exponent of the discriminant class
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Class carried by the new point, e.g. `L`.
        #[arg(long)]
        twist: Option<String>,
        /// Decomposition of node sections.
        #[arg(long, value_enum, default_value_t = FormArg::J)]
        form: FormArg,
        #[arg(long)]
        integrate: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Total Chern class of the tautological bundle on the small diagonal `Γ_(m)`.
    PunctualChern {
        /// Number of points
        #[arg(long)]
        m: u32,
        /// Print the degree of the codimension-two part.
        #[arg(long)]
        integrate: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// `s_2` or `c_2` of the tautological bundle on `Γ_(m)`, checked across routes.
    Pluecker {
        #[arg(long, value_enum)]
        which: WhichArg,
        /// Number of points
        #[arg(long)]
        m: u32,
        /// Evaluate the coefficients as originally published instead.
        #[arg(long)]
        published: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Trisecant lines: the Porteous count over a curve, or the scroll of one curve.
    Trisecants {
        /// Degree of the trisecant scroll of a single curve, from `--d` and `--g`.
        #[arg(long)]
        scroll: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Double points of the map to `P^n` given by `L`.
    DoublePoints {
        /// Target dimension; defaults to `dim X^[2]` so the count is a number.
        #[arg(long)]
        n: Option<u32>,
        /// A single curve mapped to the plane, from `--d` and `--g`.
        #[arg(long)]
        curve: bool,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Run the independent checkers.
    OracleCheck {
        /// Largest partition weight to check (at most 6)
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
        /// Largest discriminant power to check (at most 6)
        #[arg(long, default_value_t = 4)]
        max_k: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    J,
    #[value(name = "j+1")]
    JPlusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WhichArg {
    S2,
    C2,
}

/// A request rejected before reaching the engine.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Invalid(String);

fn expr_arg(name: &str, v: &str) -> anyhow::Result<Expr> {
    Expr::parse(v).map_err(|e| Invalid(format!("--{name}: {}", e.message)).into())
}

impl FamilyArgs {
    fn descriptor(&self, dim_b: Option<u32>) -> anyhow::Result<FamilyDescriptor> {
        let mut fam = match (&self.descriptor, dim_b) {
            (Some(_), Some(0)) => return Err(Invalid("single-curve queries take --d and --g, not a descriptor".into()).into()),
            (Some(p), _) => load_descriptor(p)?,
            (None, Some(0)) => FamilyDescriptor::single_curve(),
            (None, _) => FamilyDescriptor::generic(1),
        };
        let line = fam.line_bundles.first().cloned().unwrap_or_else(|| "L".into());
        if let Some(v) = &self.d {
            fam.characters.set("d", expr_arg("d", v)?);
        }
        if let Some(v) = &self.g {
            fam.genus = expr_arg("g", v)?;
        }
        for (flag, key, val) in [
            ("b", format!("{line}2"), &self.b),
            ("lomega", format!("{line}omega"), &self.lomega),
            ("omega2", "omega2".to_string(), &self.omega2),
        ] {
            if let Some(v) = val {
                fam.characters.set(&key, expr_arg(flag, v)?);
            }
        }
        if let Some(v) = &self.sigma {
            let w = expr_arg("sigma", v)?;
            let table = fam.nodes.first().map(|n| n.table.clone()).unwrap_or_else(nodal_hilb::CharacterTable::symbolic);
            fam.nodes.clear();
            if !w.is_zero() {
                fam.nodes.push(NodeDescriptor { id: "s".into(), weight: w, table });
            }
        }
        if fam.dim_b >= 1 {
            nodal_hilb::descriptor::validate(&fam).map_err(DescriptorError::from)?;
        } else if let Some(g) = fam.genus.as_constant() {
            if g < nodal_hilb::Q::from_integer(0.into()) || !g.is_integer() {
                return Err(Invalid(format!("--g must be a non-negative integer, got {g}")).into());
            }
        }
        Ok(fam)
    }
}

struct Out {
    text: String,
    json: Value,
}

fn class_out(fam: &Family, c: &TautClass, extra: Value) -> Out {
    let mut json = extra;
    json["class"] = serde_json::to_value(class_doc(c)).expect("class documents serialize");
    Out { text: fam.display(c).to_string(), json }
}

fn value_out(label: &str, v: &Expr, mut extra: Value) -> Out {
    extra["value"] = json!(v.to_string());
    Out { text: if label.is_empty() { v.to_string() } else { format!("{label} = {v}") }, json: extra }
}

fn run(cli: &Cli) -> anyhow::Result<Out> {
    match &cli.command {
        Command::GammaPower { m, k, integrate, fam } => {
            let f = Family::new(&fam.descriptor(None)?)?;
            let c = f.gamma_power(*m, *k);
            let meta = json!({"command": "gamma-power", "m": m, "k": k});
            if *integrate {
                Ok(value_out("", &f.integrate(&c)?, meta))
            } else {
                Ok(class_out(&f, &c, meta))
            }
        }
        Command::Chern { m, closed, fam } => {
            let f = Family::new(&fam.descriptor(None)?)?;
            let c = chern_pushed(&f, *m)?;
            if *closed && chern_closed_form(&f, *m)? != c {
                return Err(EngineError::Inconsistent(format!("closed form differs from the splitting at m = {m}")).into());
            }
            Ok(class_out(&f, &c, json!({"command": "chern", "m": m, "closed_form_checked": closed})))
        }
        Command::ChernNumbers { fam } => {
            let f = Family::new(&fam.descriptor(None)?)?;
            let n = chern_numbers_w3(&f)?;
            let p = porteous(&n);
            let rows = [("c1^4", &n.c1_4), ("c1^2*c2", &n.c1_2_c2), ("c1*c3", &n.c1_c3), ("c2^2", &n.c2_2), ("porteous", &p)];
            let text = rows.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join("\n");
            let mut json = json!({"command": "chern-numbers"});
            for (k, v) in rows {
                json[k] = json!(v.to_string());
            }
            Ok(Out { text, json })
        }
        Command::Formulary { monomial, fam } => {
            let desc = fam.descriptor(None)?;
            let f = Family::new(&desc)?;
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            let mut mismatches = 0;
            let entries: Vec<_> = formulary().into_iter().filter(|e| monomial.as_deref().is_none_or(|m| m == e.monomial)).collect();
            if entries.is_empty() {
                if let Some(m) = monomial {
                    let w = nodal_hilb::chern::WMono::parse(m, 3).map_err(|e| Invalid(e.message))?;
                    let v = w3_monomial(&f, &w)?;
                    return Ok(value_out(m, &v, json!({"command": "formulary", "monomial": m})));
                }
            }
            for e in entries {
                let got = w3_monomial(&f, &e.mono())?;
                // the table is written for symbolic characters
                let listed = if desc == FamilyDescriptor::generic(1) { Some(e.expected_value()) } else { None };
                let ok = listed.as_ref().is_none_or(|l| *l == got);
                mismatches += usize::from(!ok);
                lines.push(format!("{}{} = {got}", e.monomial, if e.needs_engine { " †" } else { "" }));
                rows.push(json!({"monomial": e.monomial, "value": got.to_string(), "needs_engine": e.needs_engine, "matches_table": listed.map(|_| ok)}));
            }
            if mismatches > 0 {
                return Err(EngineError::Inconsistent(format!("{mismatches} entries differ from the table")).into());
            }
            Ok(Out { text: lines.join("\n"), json: json!({"command": "formulary", "entries": rows}) })
        }
        Command::Transfer { m, k, twist, form, integrate, fam } => {
            let f = Family::new(&fam.descriptor(None)?)?;
            let c = f.gamma_power(*m, *k);
            let beta = twist.as_deref().map(|t| BaseClass::parse(f.ring(), t)).transpose()?;
            let form = match form {
                FormArg::J => SectionForm::J,
                FormArg::JPlusOne => SectionForm::JPlusOne,
            };
            let t = transfer_with_form(&f, &c, beta.as_ref(), form);
            let meta = json!({"command": "transfer", "m": m, "k": k});
            if *integrate {
                Ok(value_out("", &f.integrate(&t)?, meta))
            } else {
                Ok(class_out(&f, &t, meta))
            }
        }
        Command::PunctualChern { m, integrate, fam } => {
            let desc = fam.descriptor(None)?;
            let c = punctual_chern(*m, &desc)?;
            let meta = json!({"command": "punctual-chern", "m": m});
            if *integrate {
                return Ok(value_out("", &integrate_punctual(&c, &desc)?, meta));
            }
            let mut lines = vec![format!("interior = {}", c.interior)];
            let mut nodes = Vec::new();
            for ((s, i, point), v) in punctual_terms(&c) {
                let name = &desc.nodes[s].id;
                let label = if point { format!("S^{m}_{i}({name})") } else { format!("C^{m}_{i}({name})") };
                lines.push(format!("{label} = {v}"));
                nodes.push(json!({"node": name, "i": i, "kind": if point { "point" } else { "curve" }, "coef": v}));
            }
            let mut json = meta;
            json["interior"] = json!(c.interior.to_string());
            json["nodes"] = Value::Array(nodes);
            Ok(Out { text: lines.join("\n"), json })
        }
        Command::Pluecker { which, m, published, fam } => {
            let desc = fam.descriptor(None)?;
            let name = match which {
                WhichArg::S2 => "s2",
                WhichArg::C2 => "c2",
            };
            let v = if *published {
                match which {
                    WhichArg::S2 => pluecker_s2_closed(*m, &desc, ClosedForm::Published)?,
                    WhichArg::C2 => pluecker_c2_closed(*m, &desc, ClosedForm::Published)?,
                }
            } else {
                match which {
                    WhichArg::S2 => pluecker_s2(*m, &desc)?.closed,
                    WhichArg::C2 => pluecker_c2(*m, &desc)?.closed,
                }
            };
            Ok(value_out("", &v, json!({"command": "pluecker", "which": name, "m": m, "published": published})))
        }
        Command::Trisecants { scroll, fam } => {
            if *scroll {
                let desc = fam.descriptor(Some(0))?;
                let v = trisecant_scroll_degree(&Family::new(&desc)?)?;
                if v != trisecant_scroll_formula(&desc)? {
                    return Err(EngineError::Inconsistent("scroll degree differs from its closed formula".into()).into());
                }
                return Ok(value_out("", &v, json!({"command": "trisecants", "scroll": true})));
            }
            let desc = fam.descriptor(None)?;
            let v = porteous(&chern_numbers_w3(&Family::new(&desc)?)?);
            if v != trisecant_grand_total(&desc)? {
                return Err(EngineError::Inconsistent("Porteous count differs from the grand total".into()).into());
            }
            Ok(value_out("", &v, json!({"command": "trisecants", "scroll": false})))
        }
        Command::DoublePoints { n, curve, fam } => {
            let desc = fam.descriptor(if *curve { Some(0) } else { None })?;
            let n = n.unwrap_or(desc.dim_b + 2);
            let f = Family::new(&desc)?;
            let v = double_point_count(&f, n)?;
            Ok(value_out("", &v, json!({"command": "double-points", "n": n})))
        }
        Command::OracleCheck { max_weight, max_k } => {
            if *max_weight > 6 || *max_k > 6 {
                return Err(Invalid("--max-weight and --max-k are limited to 6".into()).into());
            }
            let mut lines = Vec::new();
            let mut cases = 0;
            let mut failures = Vec::new();
            for dim_b in [1, 2] {
                let f = Family::new(&FamilyDescriptor::smooth(dim_b))?;
                let rep = exhaustive_check(&f, *max_weight, *max_k)?;
                lines.push(format!("ordered model, base dimension {dim_b}: {} cases, {} failures", rep.cases, rep.failures.len()));
                cases += rep.cases;
                failures.extend(rep.failures);
            }
            for m in 1..=(*max_weight).min(6) {
                for n in 1..=m {
                    let want = p1_diagonal_degree(m, n)?;
                    let got = p1_engine_degree(m, n)?;
                    cases += 1;
                    if got != Expr::constant(nodal_hilb::Q::from_integer(want.clone())) {
                        failures.push(format!("P1 degree m={m} n={n}: engine {got}, parametrization {want}"));
                    }
                }
            }
            lines.push(format!("projective line degrees: m <= {}", (*max_weight).min(6)));
            if !failures.is_empty() {
                return Err(EngineError::Inconsistent(format!("{} oracle failures; first: {}", failures.len(), failures[0])).into());
            }
            Ok(Out { text: lines.join("\n"), json: json!({"command": "oracle-check", "cases": cases, "failures": 0}) })
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Invalid>() || cause.is::<DescriptorError>() || cause.is::<ParseError>() {
            return 1;
        }
        if let Some(err) = cause.downcast_ref::<EngineError>() {
            return match err {
                EngineError::InvalidArgument(_) | EngineError::Parse(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.output {
                OutputMode::Text => println!("{}", out.text),
                OutputMode::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize")),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = exit_code(&e);
            ExitCode::from(code)
        }
    }
}
