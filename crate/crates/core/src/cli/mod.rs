//! The `toric-roots` command line: analyze, roots, verify, figure,
//! classify and explore.
//!
//! Exit codes: 0 success, 1 property violation, 2 input error,
//! 3 certification shortfall.

pub mod figure;
pub mod fixtures;
pub mod random;
pub mod verify;
pub mod wire;

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Map, Value};

use crate::classify::{classify, emit_sl_family, explore_same_roots, Case, Classification, ClassifyError, ExploreBudget, ExploreResult};
use crate::cone::IntBox;
use crate::roots::{root_set, roots_in_box, Exceptions, RootSet};
use crate::semigroup::{AffineSemigroup, HoleStructure, Representation};
use figure::{FigureSpec, Format};
use wire::{integer, vector, vectors, SemigroupSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SHORTFALL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Render {
    Ascii,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "toric-roots", version, about = "Affine semigroups, saturations and Demazure roots")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual rays, Hilbert basis, saturation, pointedness and holes.
    Analyze {
        /// Spec file, `-` for stdin, or `@name` for a bundled fixture.
        spec: String,
        #[arg(long = "box")]
        bx: Option<String>,
        /// Grading bound for the irreducible search.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Roots in a box and the per-ray description.
    Roots {
        spec: String,
        #[arg(long = "box")]
        bx: Option<String>,
        /// Also re-check each root against members up to this grading.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Run a property suite.
    Verify {
        suite: verify::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long, hide = true)]
        corrupt_derivation: bool,
    },
    /// Lattice-dot diagram of a rank-2 semigroup.
    Figure {
        spec: String,
        #[arg(long = "box")]
        bx: String,
        #[arg(long, value_enum, default_value = "ascii")]
        render: Render,
    },
    /// Torus / affine line factor / general, optionally with the `S_l` family.
    Classify {
        spec: String,
        #[arg(long = "emit-sl")]
        emit_sl: Option<usize>,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
    /// Bounded search for hole sets with the same roots.
    Explore {
        spec: String,
        /// Largest candidate grading, or `default`.
        #[arg(long, default_value = "default")]
        budget: String,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        max_results: Option<usize>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    extra: Option<Value>,
}

impl Failure {
    fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, kind, message: message.into(), extra: None }
    }
}

impl From<wire::SpecError> for Failure {
    fn from(e: wire::SpecError) -> Self {
        Failure::input(e.kind(), e.to_string())
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_VIOLATION, kind: "internal", message: e.to_string(), extra: None }
}

/// Parse arguments and run; never exits the process.
pub fn execute<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Output { code, stdout: e.to_string() };
        }
    };
    let format = cli.format;
    match dispatch(cli) {
        Ok((value, code)) => Output { code, stdout: emit(&value, format) },
        Err(f) => {
            let mut err = json!({ "kind": f.kind, "message": f.message });
            if let Some(x) = f.extra {
                err["details"] = x;
            }
            Output { code: f.code, stdout: emit_value(json!({ "error": err }), format) }
        }
    }
}

/// Figures are written raw; everything else is a JSON or text report.
enum Payload {
    Report(Value),
    Raw(String),
}

fn dispatch(cli: Cli) -> Result<(Payload, i32), Failure> {
    let (v, code) = match cli.command {
        Command::Analyze { spec, bx, bound } => cmd_analyze(&load(&spec)?, bx.as_deref(), bound)?,
        Command::Roots { spec, bx, bound } => cmd_roots(&load(&spec)?, bx.as_deref(), bound)?,
        Command::Verify { suite, seed, instances, corrupt_derivation } => {
            let n = instances.unwrap_or(if suite == verify::Suite::Prop36 { 200 } else { 100 });
            let opts = verify::Options { seed, instances: n, corrupt_derivation };
            let r = verify::run(suite, &opts);
            let code = if r.passed() { EXIT_OK } else { EXIT_VIOLATION };
            (r.to_json(), code)
        }
        Command::Figure { spec, bx, render } => {
            let s = load(&spec)?;
            let bx = parse_box(&bx, s.dim())?;
            let format = match render {
                Render::Ascii => Format::Ascii,
                Render::Svg => Format::Svg,
            };
            let out = figure::render(&s, &FigureSpec { bx, format }).map_err(|e| Failure::input("bad_figure", e.to_string()))?;
            return Ok((Payload::Raw(out), EXIT_OK));
        }
        Command::Classify { spec, emit_sl, k } => cmd_classify(&load(&spec)?, emit_sl, k)?,
        Command::Explore { spec, budget, max_nodes, max_results } => {
            let mut b = ExploreBudget::default();
            if budget != "default" {
                let g: i64 = budget.parse().map_err(|_| Failure::input("bad_budget", format!("not a grading: {budget:?}")))?;
                b.max_grading = BigInt::from(g);
            }
            if let Some(n) = max_nodes {
                b.max_nodes = n;
            }
            if let Some(n) = max_results {
                b.max_results = n;
            }
            cmd_explore(&load(&spec)?, &b)?
        }
    };
    Ok((Payload::Report(v), code))
}

fn emit(p: &Payload, format: OutputFormat) -> String {
    match p {
        Payload::Raw(s) => s.clone(),
        Payload::Report(v) => match format {
            OutputFormat::Json => {
                let mut out = String::new();
                pretty(v, 0, &mut out);
                out.push('\n');
                out
            }
            OutputFormat::Text => {
                let mut out = String::new();
                text(v, 0, &mut out);
                out
            }
        },
    }
}

fn emit_value(v: Value, format: OutputFormat) -> String {
    emit(&Payload::Report(v), format)
}

/// Indented JSON with vectors of scalars kept on one line.
fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(xs) if is_scalar(v) => {
            out.push('[');
            out.push_str(&xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
            out.push(']');
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                pretty(x, indent + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                pretty(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        x => out.push_str(&x.to_string()),
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(x, indent + 1, out);
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text(x, indent + 1, out);
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", inline(x))),
    }
}

/// Scalars and vectors of scalars print on one line.
fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("({})", xs.iter().map(inline).collect::<Vec<_>>().join(",")),
        x => x.to_string(),
    }
}

fn load(path: &str) -> Result<AffineSemigroup, Failure> {
    let t = if let Some(name) = path.strip_prefix('@') {
        fixtures::text(name).ok_or_else(|| Failure::input("unknown_fixture", format!("no fixture {name:?}")))?.to_string()
    } else if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::input("io", e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::input("io", format!("{path}: {e}")))?
    };
    Ok(SemigroupSpec::parse(&t)?.build()?)
}

/// `x0..x1,y0..y1[,...]`.
fn parse_box(text: &str, dim: usize) -> Result<IntBox, Failure> {
    let bad = || Failure::input("bad_box", format!("expected x0..x1,y0..y1, got {text:?}"));
    let bounds: Vec<(i64, i64)> = text
        .split(',')
        .map(|part| {
            let (a, b) = part.trim().split_once("..").ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect::<Result<_, Failure>>()?;
    if bounds.len() != dim {
        return Err(Failure::input("bad_box", format!("box has {} ranges, semigroup has rank {dim}", bounds.len())));
    }
    IntBox::from_bounds(&bounds).map_err(|e| Failure::input("bad_box", e.to_string()))
}

fn default_box(dim: usize) -> IntBox {
    IntBox::cube(dim, if dim <= 2 { 6 } else if dim == 3 { 3 } else { 2 })
}

fn kind_name(s: &AffineSemigroup) -> &'static str {
    match s.representation() {
        Representation::Generated { .. } => "generated",
        Representation::Saturated { .. } => "saturated",
        Representation::HolePatched { .. } => "hole_patched",
    }
}

fn cmd_analyze(s: &AffineSemigroup, bx: Option<&str>, bound: Option<i64>) -> Result<(Value, i32), Failure> {
    let bx = match bx {
        Some(t) => parse_box(t, s.dim())?,
        None => default_box(s.dim()),
    };
    let bound = bound.map(BigInt::from);
    let irr = s.irreducibles(bound.as_ref()).map_err(internal)?;
    let hole_structure = if s.is_pointed() && matches!(s.representation(), Representation::Generated { .. }) {
        match s.hole_structure().map_err(internal)? {
            HoleStructure::Finite(h) => json!({ "kind": "finite", "holes": vectors(&h) }),
            HoleStructure::Infinite { witness, direction } => {
                json!({ "kind": "infinite", "witness": vector(&witness), "direction": vector(&direction) })
            }
        }
    } else {
        Value::Null
    };
    let families: Vec<Value> =
        s.hole_families().iter().map(|f| json!({ "base": vector(&f.base), "step": vector(&f.step) })).collect();
    let cert = s.closure_certificate().map(|c| json!({ "exact": c.exact, "bound": c.bound.as_ref().map(integer) }));
    let report = json!({
        "rank": s.dim(),
        "kind": kind_name(s),
        "spec": SemigroupSpec::of(s).to_value(),
        "pointed": s.is_pointed(),
        "saturated": s.is_saturated(),
        "unit_rank": s.cone().lineality().len(),
        "cone_rays": vectors(s.cone().rays()),
        "lineality": vectors(s.cone().lineality()),
        "dual_rays": vectors(&s.dual_rays()),
        "grading": vector(s.grading()),
        "saturation_hilbert_basis": vectors(s.saturation_hilbert_basis()),
        "irreducibles": {
            "elements": vectors(&irr.elements),
            "complete": irr.complete,
            "grading_bound": irr.grading_bound.as_ref().map(integer),
        },
        "finite_holes": vectors(s.finite_holes()),
        "hole_rays": families,
        "closure_certificate": cert,
        "hole_structure": hole_structure,
        "holes_in_box": { "box": bx.to_string(), "points": vectors(&s.holes_within(&bx)) },
    });
    Ok((report, EXIT_OK))
}

fn describe(rs: &RootSet) -> (Vec<Value>, bool) {
    let mut exact = true;
    let per_ray = rs
        .per_ray
        .iter()
        .map(|r| {
            let exceptions = match &r.exceptions {
                Exceptions::None => json!({ "kind": "none" }),
                Exceptions::Finite(e) => json!({ "kind": "finite", "points": vectors(e) }),
                Exceptions::All => json!({ "kind": "all" }),
                Exceptions::Symbolic => {
                    exact = false;
                    json!({ "kind": "symbolic" })
                }
            };
            json!({
                "ray": vector(&r.ray),
                "slice": {
                    "level": integer(&r.slice.level),
                    "inequality_normals": vectors(&r.slice.inequality_normals),
                },
                "exceptions": exceptions,
            })
        })
        .collect();
    (per_ray, exact)
}

fn cmd_roots(s: &AffineSemigroup, bx: Option<&str>, bound: Option<i64>) -> Result<(Value, i32), Failure> {
    let bx = match bx {
        Some(t) => parse_box(t, s.dim())?,
        None => default_box(s.dim()),
    };
    let ws = roots_in_box(s, &bx).map_err(internal)?;
    let rs = root_set(s).map_err(internal)?;
    let (per_ray, exact) = describe(&rs);
    let roots: Vec<Value> = ws
        .iter()
        .map(|w| json!({ "alpha": vector(&w.alpha), "ray": vector(&w.ray), "qualifying_rays": vectors(&w.qualifying_rays) }))
        .collect();
    let mut report = Map::new();
    report.insert("box".into(), json!(bx.to_string()));
    report.insert("roots".into(), Value::Array(roots));
    report.insert("per_ray".into(), Value::Array(per_ray));
    report.insert("certification".into(), json!(if exact { "exact" } else { "partial" }));
    if s.dual_rays().is_empty() {
        report.insert("note".into(), json!("S^* = {0}"));
    }
    let mut code = if exact { EXIT_OK } else { EXIT_SHORTFALL };
    if let Some(b) = bound {
        let members = s.points_up_to(&BigInt::from(b)).map_err(internal)?;
        let mut pairs = 0usize;
        let mut violations = Vec::new();
        for w in &ws {
            for m in members.iter().filter(|m| m.dot(&w.ray).is_positive()) {
                pairs += 1;
                let sum = m + &w.alpha;
                if !s.member(&sum) {
                    violations.push(json!({ "alpha": vector(&w.alpha), "m": vector(m), "sum": vector(&sum) }));
                }
            }
        }
        if !violations.is_empty() {
            code = EXIT_VIOLATION;
        }
        report.insert("bounded_check".into(), json!({ "bound": b, "pairs": pairs, "violations": violations }));
    }
    Ok((Value::Object(report), code))
}

fn classification_json(c: &Classification) -> Value {
    let mut v = json!({
        "unit_rank": c.unit_rank,
        "hilbert_basis_size": c.hilbert_basis_size,
        "smooth": c.smooth,
    });
    match &c.case {
        Case::Torus { rank } => {
            v["case"] = json!(c.case.name());
            v["rank"] = json!(rank);
        }
        Case::SplitsOffAffineLine { split_vector, split_ray, complement } => {
            v["case"] = json!(c.case.name());
            v["split_vector"] = vector(split_vector);
            v["split_ray"] = vector(split_ray);
            v["complement"] = SemigroupSpec::of(complement).to_value();
        }
        Case::General { is_degenerate, .. } => {
            v["case"] = json!(c.case.name());
            v["is_degenerate"] = json!(is_degenerate);
        }
    }
    v
}

fn classify_failure(e: ClassifyError) -> Failure {
    match e {
        ClassifyError::NotSaturated => Failure::input("not_saturated", e.to_string()),
        ClassifyError::Hypothesis(c) => Failure {
            code: EXIT_INPUT,
            kind: "hypothesis",
            message: format!("the family needs the general non-degenerate case; got {}", classification_json(&c)["case"]),
            extra: Some(json!({ "classification": classification_json(&c) })),
        },
        ClassifyError::ExplorerInput => Failure::input("explorer_input", e.to_string()),
        other => internal(other),
    }
}

fn cmd_classify(s: &AffineSemigroup, emit_sl: Option<usize>, k: usize) -> Result<(Value, i32), Failure> {
    let c = classify(s).map_err(classify_failure)?;
    let mut report = json!({ "classification": classification_json(&c) });
    if let Some(l) = emit_sl {
        let f = emit_sl_family(s, k, l).map_err(classify_failure)?;
        let members: Vec<Value> = f
            .members
            .iter()
            .map(|m| json!({ "l": m.l, "spec": SemigroupSpec::of(&m.semigroup).to_value(), "witness": vector(&m.witness) }))
            .collect();
        report["family"] = json!({ "k": f.k, "base": SemigroupSpec::of(&f.base).to_value(), "members": members });
    }
    Ok((report, EXIT_OK))
}

pub fn explore_json(r: &ExploreResult, b: &ExploreBudget) -> Value {
    json!({
        "label": ExploreResult::LABEL,
        "candidate_space": "lattice points of grading at most the budget, interior points included; no infinite families",
        "budget": { "max_grading": integer(&b.max_grading), "max_nodes": b.max_nodes, "max_results": b.max_results },
        "exhausted": r.exhausted,
        "nodes": r.nodes,
        "hole_sets": r.hole_sets.iter().map(|h| vectors(h)).collect::<Vec<_>>(),
        "semigroups": r.semigroups.iter().map(|s| SemigroupSpec::of(s).to_value()).collect::<Vec<_>>(),
    })
}

fn cmd_explore(s: &AffineSemigroup, b: &ExploreBudget) -> Result<(Value, i32), Failure> {
    let r = explore_same_roots(s, b).map_err(classify_failure)?;
    Ok((explore_json(&r, b), EXIT_OK))
}
