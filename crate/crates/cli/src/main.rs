use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use cobord_core::bmodel::{
    hypersurface_class, pushforward_to_point, BordismClass, CellSpace, OrientedTheory, RingMatrix, SpaceRecipe,
    SplitBundle,
};
use cobord_core::exactalg::{parse_polynomial, Domain, GradedPolynomial, PolynomialJson};
use cobord_core::fgl::{law_by_name, validate, FormalGroupLaw};
use cobord_core::lazard::LazardRing;
use cobord_core::selftest;
use cobord_core::series::{SeriesJson, TruncatedSeries};
use cobord_core::snc::{pushforward_to_ambient, snc_class, support_decomposition, DivisorJson, SncDivisor};

#[derive(Parser)]
#[command(name = "cobord", version, about = "Formal group laws, the Lazard ring and cellular bordism models")]
struct Cli {
    /// Run the acceptance suite and report one line per criterion.
    #[arg(long)]
    selftest: bool,

    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone)]
struct Common {
    /// additive, multiplicative (the default), multiplicative:B or universal[:N].
    #[arg(long, global = true)]
    law: Option<String>,

    /// Truncation order of the formal group law.
    #[arg(long, global = true)]
    order: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// JSON input file (series, polynomial, space or divisor, depending on the command).
    #[arg(long, global = true)]
    input: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = RingArg::Z)]
    ring: RingArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// Formal group law calculus.
    #[command(subcommand)]
    Fgl(FglCmd),
    /// Lazard ring presentation and classifying maps.
    #[command(subcommand)]
    Lazard(LazardCmd),
    /// Cellular bordism models.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Strict normal crossing divisors.
    #[command(subcommand)]
    Snc(SncCmd),
}

#[derive(Subcommand)]
enum FglCmd {
    /// The series F(u, v).
    Show,
    /// Check the axioms on the named law, or on a series read from --input.
    Validate,
    /// Formal inverse chi(u).
    Chi,
    /// Difference law F(u, chi(v)).
    Diff,
    /// The n-series [n](u).
    Nseries {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// F^{n1,...,nm}(u1, ..., um).
    Multisum {
        /// Comma-separated multipliers, e.g. 1,2,-1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        ns: Vec<i64>,
    },
    /// Logarithm (needs --ring Q).
    Log,
    /// Exponential (needs --ring Q).
    Exp,
    /// F-(F(u,v), F(0,v)) = u.
    CheckC1l,
    /// F-(F(u1,v1), F(u2,v2)) = F(F-(u1,u2), F-(v1,v2)).
    CheckFgl,
}

#[derive(Subcommand)]
enum LazardCmd {
    /// Rank table by degree.
    Ranks {
        #[arg(long)]
        max_degree: u32,
    },
    /// Normal form of a polynomial in the generators a_ij.
    Normalform {
        #[arg(long)]
        max_degree: u32,
        /// Polynomial text such as "a11*a12 - 2*a13"; otherwise --input.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Images of the generators under the map classifying --law.
    Classify {
        #[arg(long)]
        max_degree: u32,
    },
}

#[derive(Args, Clone)]
struct SpaceArg {
    /// P^n; ignored when --input gives a space.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Cells of P^n.
    Pn {
        #[arg(long)]
        n: u32,
    },
    /// Cells of P^n x P^m.
    Product {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Cells of P(L1 + ... + Lr) over P^n.
    Pbundle {
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        bundles: Vec<String>,
    },
    /// First Chern class operator of a line bundle.
    C1 {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, default_value = "O(1)")]
        bundle: String,
    },
    /// Chern classes of a split bundle, applied to the fundamental class.
    Chern {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_delimiter = ',', required = true)]
        bundles: Vec<String>,
    },
    /// Euler class of a split bundle, compared with the top Chern class.
    Euler {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long, value_delimiter = ',', required = true)]
        bundles: Vec<String>,
    },
    /// Intersection product of two classes given as JSON maps cell -> coefficient.
    Intersect {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Class of a degree-d hypersurface in P^n.
    Hypersurface {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
    },
    /// Push-forward of 1 on P^n to a point (needs --ring Q).
    Genus {
        #[arg(long)]
        n: u32,
    },
    /// Universal hypersurface class moved to the law given by --to.
    Specialize {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        to: String,
    },
}

#[derive(Subcommand)]
enum SncCmd {
    /// The series G_J with F^{n1..nm} = sum over J of prod(u_i, i in J) G_J.
    Decompose {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<i64>,
    },
    /// Class of the divisor read from --input.
    Class {
        /// Also push the class forward to the ambient space.
        #[arg(long)]
        push: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(cobord_core::Error),
    Input(String),
}

impl From<cobord_core::Error> for Failure {
    fn from(e: cobord_core::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(Value, String), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.selftest {
        let ok = selftest::run_and_print(&mut std::io::stdout()).is_ok_and(|ok| ok);
        return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand or --selftest is required (see --help)");
        return ExitCode::from(2);
    };
    let format = cli.common.format;
    match run(command, &cli.common) {
        Ok((json, text)) => {
            match format {
                Format::Json => emit(&serde_json::to_string_pretty(&json).expect("serializable")),
                Format::Text => emit(text.trim_end()),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(f) => {
            let (kind, message) = match f {
                Failure::Domain(e) => (e.kind().to_string(), e.to_string()),
                Failure::Input(m) => ("input".to_string(), m),
                Failure::Usage(_) => unreachable!(),
            };
            match format {
                Format::Json => {
                    let err = json!({ "error": { "kind": kind, "message": message } });
                    emit(&serde_json::to_string_pretty(&err).expect("serializable"));
                }
                Format::Text => eprintln!("error ({kind}): {message}"),
            }
            ExitCode::from(1)
        }
    }
}

// A closed pipe on stdout is not an error worth reporting.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(command: &Command, c: &Common) -> Outcome {
    match command {
        Command::Fgl(cmd) => fgl(cmd, c),
        Command::Lazard(cmd) => lazard(cmd, c),
        Command::Model(cmd) => model(cmd, c),
        Command::Snc(cmd) => snc(cmd, c),
    }
}

fn domain(c: &Common) -> Domain {
    match c.ring {
        RingArg::Z => Domain::Z,
        RingArg::Q => Domain::Q,
    }
}

fn read_input<T: serde::de::DeserializeOwned>(c: &Common, what: &str) -> Result<T, Failure> {
    let path = c.input.as_ref().ok_or_else(|| Failure::Usage(format!("--input with {what} is required")))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn law_name(c: &Common) -> &str {
    c.law.as_deref().unwrap_or("multiplicative")
}

fn law(c: &Common, default_order: usize) -> Result<FormalGroupLaw, Failure> {
    Ok(law_by_name(law_name(c), c.order.unwrap_or(default_order), domain(c))?)
}

fn theory(c: &Common, dim: u32) -> Result<Arc<OrientedTheory>, Failure> {
    let order = c.order.unwrap_or((dim as usize).max(2));
    Ok(OrientedTheory::new(law_by_name(law_name(c), order, domain(c))?)?)
}

fn series_out(name: &str, s: &TruncatedSeries) -> (Value, String) {
    let json: SeriesJson = s.to_json();
    (json!({ "law": name, "series": json, "display": s.to_string() }), s.to_string())
}

fn fgl(cmd: &FglCmd, c: &Common) -> Outcome {
    if let FglCmd::Validate = cmd {
        if c.input.is_some() {
            let json: SeriesJson = read_input(c, "a series")?;
            // with --law, coefficients are read in that law's ring (for the
            // universal law this imposes the Lazard relations)
            let s = match &c.law {
                Some(name) => {
                    let ring = law_by_name(name, json.order.max(2), domain(c))?.ring().clone();
                    TruncatedSeries::from_json_with_ring(&ring, &json)?
                }
                None => TruncatedSeries::from_json(&json)?,
            };
            let report = validate(&s);
            let text = format!("{report}{}", if report.passed() { "valid" } else { "not a formal group law" });
            return Ok((json!({ "passed": report.passed(), "report": report }), text));
        }
    }
    let g = law(c, 6)?;
    let name = g.name().to_string();
    Ok(match cmd {
        FglCmd::Show => series_out(&name, g.series()),
        FglCmd::Validate => {
            let report = validate(g.series());
            let text = format!("{report}{}", if report.passed() { "valid" } else { "not a formal group law" });
            (json!({ "law": name, "passed": report.passed(), "report": report }), text)
        }
        FglCmd::Chi => series_out(&name, &g.formal_inverse()?),
        FglCmd::Diff => series_out(&name, &g.difference_law()?),
        FglCmd::Nseries { n } => series_out(&name, &g.n_series(*n)?),
        FglCmd::Multisum { ns } => series_out(&name, &g.multi_sum(ns)?),
        FglCmd::Log => series_out(&name, &g.logarithm()?),
        FglCmd::Exp => series_out(&name, &g.exponential()?),
        FglCmd::CheckC1l => identity_out(&name, "F-(F(u,v), F(0,v)) = u", g.check_identity_c1l()?),
        FglCmd::CheckFgl => {
            identity_out(&name, "F-(F(u1,v1), F(u2,v2)) = F(F-(u1,u2), F-(v1,v2))", g.check_identity_fgl()?)
        }
    })
}

fn identity_out(name: &str, identity: &str, holds: bool) -> (Value, String) {
    (
        json!({ "law": name, "identity": identity, "holds": holds }),
        format!("{identity}: {}", if holds { "holds" } else { "fails" }),
    )
}

fn lazard_ring(max_degree: u32) -> Result<Arc<LazardRing>, Failure> {
    if max_degree == 0 {
        return Err(Failure::Usage("--max-degree must be at least 1".into()));
    }
    Ok(LazardRing::cached(max_degree))
}

fn poly_out(p: &GradedPolynomial) -> Value {
    let json: PolynomialJson = p.to_json();
    json!({ "polynomial": json, "display": p.to_string() })
}

fn lazard(cmd: &LazardCmd, c: &Common) -> Outcome {
    match cmd {
        LazardCmd::Ranks { max_degree } => {
            let ring = lazard_ring(*max_degree)?;
            let table = ring.rank_table();
            let mut text = format!("{:>6} {:>9} {:>13} {:>13}  torsion\n", "degree", "monomials", "relation rank", "quotient rank");
            for row in &table {
                let torsion = if row.torsion.is_empty() { "none".to_string() } else { row.torsion.join(", ") };
                text += &format!(
                    "{:>6} {:>9} {:>13} {:>13}  {torsion}\n",
                    row.degree, row.monomials, row.relation_rank, row.quotient_rank
                );
            }
            Ok((json!({ "ranks": table }), text))
        }
        LazardCmd::Normalform { max_degree, poly } => {
            let ring = lazard_ring(*max_degree)?;
            let p = match poly {
                Some(text) => parse_polynomial(ring.free_ring().base(), text)?,
                None => {
                    let json: PolynomialJson = read_input(c, "a polynomial")?;
                    GradedPolynomial::from_json(&json)?
                }
            };
            let nf = ring.normal_form(&p)?;
            Ok((poly_out(&nf), nf.to_string()))
        }
        LazardCmd::Classify { max_degree } => {
            let ring = lazard_ring(*max_degree)?;
            let g = law(c, *max_degree as usize + 1)?;
            let theta = ring.classifying_map(&g)?;
            let mut images = Map::new();
            let mut text = String::new();
            for &(i, j) in ring.generators() {
                let img = theta.image_of(i, j).cloned().unwrap_or_else(|| g.ring().zero());
                let name = cobord_core::lazard::generator_name(i, j);
                text += &format!("{name} -> {img}\n");
                images.insert(name, Value::String(img.to_string()));
            }
            let reproduces = theta.reproduces(&g)?;
            text += &format!("pushes the universal law onto {}: {reproduces}", g.name());
            Ok((json!({ "law": g.name(), "images": images, "reproduces": reproduces }), text))
        }
    }
}

fn space_from(arg: &SpaceArg, c: &Common) -> Result<(SpaceRecipe, u32), Failure> {
    if c.input.is_some() {
        let recipe: SpaceRecipe = read_input(c, "a space")?;
        let dim = recipe_dim(&recipe);
        return Ok((recipe, dim));
    }
    let n = arg.n.ok_or_else(|| Failure::Usage("--n or --input is required".into()))?;
    Ok((SpaceRecipe::Projective { n }, n))
}

fn recipe_dim(r: &SpaceRecipe) -> u32 {
    match r {
        SpaceRecipe::Projective { n } => *n,
        SpaceRecipe::Product { left, right } => recipe_dim(left) + recipe_dim(right),
        SpaceRecipe::ProjectiveBundle { base, bundles } => recipe_dim(base) + bundles.len().saturating_sub(1) as u32,
    }
}

fn build(recipe: &SpaceRecipe, dim: u32, c: &Common) -> Result<Arc<CellSpace>, Failure> {
    let t = theory(c, dim)?;
    Ok(CellSpace::from_recipe(recipe, &t)?)
}

fn space_out(x: &Arc<CellSpace>) -> (Value, String) {
    let cells: Vec<Value> = x.cells().iter().map(|cell| json!({ "id": cell.id, "dim": cell.dim })).collect();
    let primitives: Vec<&str> = x.primitives().iter().map(|p| p.name.as_str()).collect();
    let mut text = format!("{} over {} (dimension {})\n", x.name(), x.theory().name(), x.dim());
    for cell in x.cells() {
        text += &format!("  {} (dim {})\n", cell.id, cell.dim);
    }
    (
        json!({
            "space": x.name(),
            "law": x.theory().name(),
            "dim": x.dim(),
            "recipe": x.recipe(),
            "primitives": primitives,
            "cells": cells,
        }),
        text,
    )
}

fn matrix_json(x: &CellSpace, m: &RingMatrix) -> Value {
    let rows: Vec<Vec<String>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect();
    let ids: Vec<&str> = x.cells().iter().map(|c| c.id.as_str()).collect();
    json!({ "cells": ids, "rows": rows })
}

fn class_json(a: &BordismClass) -> Value {
    serde_json::to_value(a.to_map()).expect("string map")
}

fn parse_class(x: &Arc<CellSpace>, text: &str) -> Result<BordismClass, Failure> {
    let map: std::collections::BTreeMap<String, String> =
        serde_json::from_str(text).map_err(|e| Failure::Input(format!("class `{text}`: {e}")))?;
    let mut entries = Vec::new();
    for (id, coeff) in &map {
        entries.push((id.as_str(), parse_polynomial(x.ring().base(), coeff)?));
    }
    Ok(BordismClass::from_cells(x, entries)?)
}

fn model(cmd: &ModelCmd, c: &Common) -> Outcome {
    match cmd {
        ModelCmd::Pn { n } => Ok(space_out(&build(&SpaceRecipe::Projective { n: *n }, *n, c)?)),
        ModelCmd::Product { n, m } => {
            let r = SpaceRecipe::Product {
                left: Box::new(SpaceRecipe::Projective { n: *n }),
                right: Box::new(SpaceRecipe::Projective { n: *m }),
            };
            Ok(space_out(&build(&r, n + m, c)?))
        }
        ModelCmd::Pbundle { n, bundles } => {
            if bundles.is_empty() {
                return Err(Failure::Usage("--bundles needs at least one line bundle".into()));
            }
            let r = SpaceRecipe::ProjectiveBundle {
                base: Box::new(SpaceRecipe::Projective { n: *n }),
                bundles: bundles.clone(),
            };
            Ok(space_out(&build(&r, n + bundles.len() as u32 - 1, c)?))
        }
        ModelCmd::C1 { space, bundle } => {
            let (r, dim) = space_from(space, c)?;
            let x = build(&r, dim, c)?;
            let m = x.c1_symbol(bundle)?;
            let applied = BordismClass::unit(&x).apply(&m);
            Ok((
                json!({ "space": x.name(), "bundle": bundle, "operator": matrix_json(&x, &m), "applied_to_unit": class_json(&applied) }),
                format!("c1({bundle})(1) = {applied}"),
            ))
        }
        ModelCmd::Chern { space, bundles } => {
            let (r, dim) = space_from(space, c)?;
            let x = build(&r, dim, c)?;
            let symbols: Vec<&str> = bundles.iter().map(String::as_str).collect();
            let e = SplitBundle::new(&x, &symbols)?;
            let unit = BordismClass::unit(&x);
            let mut classes = Vec::new();
            let mut text = String::new();
            for (i, m) in e.chern_classes()?.iter().enumerate() {
                let applied = unit.apply(m);
                text += &format!("c{i}(1) = {applied}\n");
                classes.push(class_json(&applied));
            }
            Ok((json!({ "space": x.name(), "bundles": bundles, "chern_classes": classes }), text))
        }
        ModelCmd::Euler { space, bundles } => {
            let (r, dim) = space_from(space, c)?;
            let x = build(&r, dim, c)?;
            let symbols: Vec<&str> = bundles.iter().map(String::as_str).collect();
            let e = SplitBundle::new(&x, &symbols)?;
            let euler = e.euler_class()?;
            let top = e.chern_class(e.rank())?;
            let applied = BordismClass::unit(&x).apply(&euler);
            let equal = euler == top;
            Ok((
                json!({ "space": x.name(), "bundles": bundles, "euler": class_json(&applied), "equals_top_chern": equal }),
                format!("e(1) = {applied}\nequals the top Chern class: {equal}"),
            ))
        }
        ModelCmd::Intersect { space, a, b } => {
            let (r, dim) = space_from(space, c)?;
            let x = build(&r, dim, c)?;
            let (a, b) = (parse_class(&x, a)?, parse_class(&x, b)?);
            let p = a.intersection_product(&b)?;
            Ok((json!({ "space": x.name(), "product": class_json(&p) }), p.to_string()))
        }
        ModelCmd::Hypersurface { n, d } => {
            let x = build(&SpaceRecipe::Projective { n: *n }, *n, c)?;
            let h = hypersurface_class(&x, *d)?;
            Ok((class_json(&h), h.to_string()))
        }
        ModelCmd::Genus { n } => {
            let order = c.order.unwrap_or(*n as usize + 1);
            let t = OrientedTheory::new(law_by_name(law_name(c), order, domain(c))?)?;
            let x = CellSpace::projective_space(*n, &t)?;
            let g = pushforward_to_point(&BordismClass::unit(&x))?;
            Ok((json!({ "space": x.name(), "law": t.name(), "genus": g.to_string() }), g.to_string()))
        }
        ModelCmd::Specialize { n, d, to } => {
            let order = c.order.unwrap_or((*n as usize).max(2));
            let ring = LazardRing::cached(order as u32 - 1);
            let universal = OrientedTheory::new(ring.universal_law().clone())?;
            let target_law = law_by_name(to, order, Domain::Z)?;
            let theta = ring.classifying_map(&target_law)?;
            let target = OrientedTheory::new(target_law)?;
            let x = CellSpace::projective_space(*n, &universal)?;
            let h = hypersurface_class(&x, *d)?;
            let s = h.specialize(&theta, &target)?;
            let direct = hypersurface_class(s.space(), *d)?;
            Ok((
                json!({ "universal": class_json(&h), "specialized": class_json(&s), "law": target.name(), "matches_direct": s == direct }),
                format!("{h}\n-> {s}\nmatches the class computed over {}: {}", target.name(), s == direct),
            ))
        }
    }
}

fn snc(cmd: &SncCmd, c: &Common) -> Outcome {
    match cmd {
        SncCmd::Decompose { ns } => {
            let g = law(c, 6)?;
            let parts = support_decomposition(&g, ns)?;
            let mut out = Vec::new();
            let mut text = String::new();
            for (j, s) in &parts {
                let members: Vec<usize> = j.iter().map(|i| i + 1).collect();
                text += &format!("J = {members:?}: {s}\n");
                out.push(json!({ "members": members, "series": s.to_json(), "display": s.to_string() }));
            }
            Ok((json!({ "law": g.name(), "ns": ns, "parts": out }), text))
        }
        SncCmd::Class { push } => {
            let json: DivisorJson = read_input(c, "a divisor")?;
            let t = theory(c, recipe_dim(&json.ambient))?;
            let e = SncDivisor::from_json(&json, &t)?;
            let class = snc_class(&e)?;
            let mut out = json!({ "ambient": e.ambient().name(), "law": t.name(), "faces": class.to_json(), "display": class.to_string() });
            let mut text = class.to_string();
            if *push {
                let p = pushforward_to_ambient(&e)?;
                out["pushforward"] = class_json(&p);
                text += &format!("\npush-forward: {p}");
            }
            Ok((out, text))
        }
    }
}
