use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use ortholattice::construct::{
    dual_copy, glued_union, horizontal_sum, horizontal_sum_ortho, ortho_construction, power_witness, product,
    product_ortho,
};
use ortholattice::dot::{lattice_dot, ortho_dot, DotOptions};
use ortholattice::gen;
use ortholattice::interp::{
    extend_pipeline, interpolate, nary_reduce, polynomial_clone, ClosureError, ClosureOptions, ExtensionSource,
    FunctionTable, Interpolation, Mode, NaryError, NaryOptions, PipelineError, PipelineStatus, SearchParams,
    DEFAULT_CLONE_BUDGET,
};
use ortholattice::io::{
    format_table, parse_table, to_json, DocError, EmbeddingDoc, InterpolationJson, LatticeDoc, LatticeRef, NaryReport,
    PipelineReport, TermJson, WorkspaceDocument,
};
use ortholattice::morphism::{check_convex, check_sub01, check_subortholattice, check_triangle, check_triangle_dual};
use ortholattice::zoo::{self, ZooEntry};
use ortholattice::{
    check_de_morgan, ConstructError, ConstructionResult, ElementId, Embedding, FiniteLattice, Ortholattice, Relation,
    Strategy, DEFAULT_SIZE_CAP,
};
use serde::Serialize;
use serde_json::json;

use crate::{Cli, Command, Kind, ModeArg};

pub const OK: u8 = 0;
pub const USAGE: u8 = 1;
pub const BUDGET: u8 = 2;
pub const NEGATIVE: u8 = 3;
pub const INVALID: u8 = 4;

#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Fail {
    Fail { code, message: message.into() }
}

impl From<DocError> for Fail {
    fn from(e: DocError) -> Self {
        let code = match e {
            DocError::Index { .. } | DocError::Lattice(_) | DocError::Ortho(_) | DocError::Morphism(_) => INVALID,
            _ => USAGE,
        };
        fail(code, e.to_string())
    }
}

impl From<ConstructError> for Fail {
    fn from(e: ConstructError) -> Self {
        let code = match e {
            ConstructError::SizeLimitExceeded { .. } => BUDGET,
            ConstructError::ZeroArity | ConstructError::Degenerate => USAGE,
            _ => INVALID,
        };
        fail(code, e.to_string())
    }
}

impl From<ClosureError> for Fail {
    fn from(e: ClosureError) -> Self {
        fail(USAGE, e.to_string())
    }
}

impl From<PipelineError> for Fail {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::Construct(ConstructError::SizeLimitExceeded { .. }) => BUDGET,
            PipelineError::NotTotal | PipelineError::Table(_) | PipelineError::WrongBase => USAGE,
            _ => INVALID,
        };
        fail(code, e.to_string())
    }
}

impl From<NaryError> for Fail {
    fn from(e: NaryError) -> Self {
        let code = match e {
            NaryError::GenerationTooLarge { .. } => BUDGET,
            NaryError::Construct(ConstructError::SizeLimitExceeded { .. }) => BUDGET,
            NaryError::VerificationFailed(_) => INVALID,
            _ => USAGE,
        };
        fail(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))
}

/// A file holding a lattice document, or a zoo name.
fn load_entry(arg: &str) -> Result<ZooEntry, Fail> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(LatticeDoc::from_json(&read(path)?)?.load()?);
    }
    zoo::by_name(arg).ok_or_else(|| fail(USAGE, format!("{arg:?} is neither a file nor a zoo lattice")))
}

fn load_ref(r: &LatticeRef) -> Result<ZooEntry, Fail> {
    match r {
        LatticeRef::Name(n) => load_entry(n),
        LatticeRef::Inline(d) => Ok(d.load()?),
    }
}

fn require_ortho(e: ZooEntry, what: &str) -> Result<Ortholattice, Fail> {
    match e {
        ZooEntry::Ortho(o) => Ok(o),
        ZooEntry::Lattice(_) => Err(fail(USAGE, format!("{what} must carry an orthocomplement"))),
    }
}

struct LoadedEmbedding {
    embedding: Embedding,
    source: ZooEntry,
    target: ZooEntry,
}

fn load_embedding(path: &Path) -> Result<LoadedEmbedding, Fail> {
    let doc: EmbeddingDoc = serde_json::from_str(&read(path)?).map_err(DocError::from)?;
    let (source, target) = (load_ref(&doc.source)?, load_ref(&doc.target)?);
    let arc = |e: &ZooEntry| match e {
        ZooEntry::Ortho(o) => o.lattice_arc().clone(),
        ZooEntry::Lattice(l) => Arc::new(l.clone()),
    };
    let n = target.lattice().len();
    if let Some(&index) = doc.map.iter().find(|&&i| i >= n) {
        return Err(DocError::Index { index, len: n }.into());
    }
    let map = doc.map.iter().map(|&i| ElementId::from(i)).collect();
    let embedding = Embedding::new(arc(&source), arc(&target), map).map_err(DocError::from)?;
    Ok(LoadedEmbedding { embedding, source, target })
}

fn function_arg(cli: &Cli, l: &FiniteLattice, text: &str, arity: usize) -> Result<FunctionTable, Fail> {
    if text == "random" {
        Ok(gen::random_function(&mut gen::rng(cli.seed), l, arity))
    } else {
        Ok(parse_table(l, text)?)
    }
}

fn strategy(cli: &Cli) -> Strategy {
    if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Fail> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| fail(USAGE, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<(), Fail> {
    emit(cli, &to_json(value))
}

fn dot_of(e: &ZooEntry, name: &str, perp: bool) -> String {
    match e {
        ZooEntry::Ortho(o) => ortho_dot(o, name, DotOptions { perp }),
        ZooEntry::Lattice(l) => lattice_dot(l, name),
    }
}

pub fn run(cli: &Cli) -> Result<u8, Fail> {
    match &cli.command {
        Command::Validate { input } => validate(cli, input),
        Command::Relate { embedding } => relate(cli, embedding),
        Command::Construct { kind, inputs, subset, n, dot } => {
            construct(cli, *kind, inputs, subset.as_deref(), *n, dot.as_deref())
        }
        Command::Closure { input, mode } => closure(cli, input, *mode),
        Command::Interpolate { input, function, mode } => interpolate_cmd(cli, input, function, *mode),
        Command::ExtendPipeline { l0, function } => pipeline(cli, l0, function),
        Command::NaryReduce { input, function, ortho } => nary(cli, input, function, *ortho),
        Command::Zoo { name, export_dot, perp } => zoo_cmd(cli, name.as_deref(), *export_dot, *perp),
        Command::ExportDot { input, perp } => {
            let e = load_entry(input)?;
            emit(cli, &dot_of(&e, input, *perp))?;
            Ok(OK)
        }
    }
}

fn validate(cli: &Cli, input: &str) -> Result<u8, Fail> {
    let path = Path::new(input);
    let loaded = if path.is_file() {
        let text = read(path)?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(DocError::from)?;
        if value.get("version").is_some() {
            let ws = WorkspaceDocument::from_json(&text)?;
            return match ws.load() {
                Ok(w) => {
                    emit_json(
                        cli,
                        &json!({
                            "valid": true,
                            "lattices": w.lattices.len(),
                            "embeddings": w.embeddings.len(),
                            "functions": w.functions.len(),
                            "terms": w.terms.len(),
                        }),
                    )?;
                    eprintln!("workspace ok");
                    Ok(OK)
                }
                Err(e) => {
                    let f = Fail::from(e);
                    emit_json(cli, &json!({ "valid": false, "error": f.message }))?;
                    Err(f)
                }
            };
        }
        LatticeDoc::from_json(&text)?.load()
    } else {
        Ok(load_entry(input)?)
    };
    let entry = match loaded {
        Ok(e) => e,
        Err(e) => {
            let f = Fail::from(e);
            emit_json(cli, &json!({ "valid": false, "error": f.message }))?;
            return Err(f);
        }
    };
    let l = entry.lattice();
    let heights = l.heights();
    let mut report = json!({
        "valid": true,
        "size": l.len(),
        "covers": l.covers().len(),
        "height": heights[l.top().index()],
        "bottom": l.name(l.bottom()),
        "top": l.name(l.top()),
        "ortholattice": false,
    });
    if let ZooEntry::Ortho(o) = &entry {
        let dm = check_de_morgan(o);
        report["ortholattice"] = json!(true);
        report["axioms"] = json!({
            "involution": true,
            "order_reversing": true,
            "complement": true,
        });
        report["de_morgan"] = json!({ "pairs_checked": dm.pairs_checked, "failures": dm.failures.len() });
    }
    emit_json(cli, &report)?;
    eprintln!(
        "{input}: lattice with {} elements{}",
        l.len(),
        if matches!(entry, ZooEntry::Ortho(_)) { ", orthocomplemented" } else { "" }
    );
    Ok(OK)
}

#[derive(Serialize)]
struct RelationRow {
    relation: Relation,
    holds: Option<bool>,
    detail: Option<String>,
}

fn relate(cli: &Cli, path: &Path) -> Result<u8, Fail> {
    let LoadedEmbedding { embedding, source, target } = load_embedding(path)?;
    let mut rows = Vec::new();
    let row = |r, res: Result<(), String>| RelationRow { relation: r, holds: Some(res.is_ok()), detail: res.err() };
    let sub = check_sub01(&embedding);
    rows.push(row(Relation::Sub01, sub.as_ref().map(|_| ()).map_err(|e| e.to_string())));
    let mut projection = None;
    match &sub {
        Ok(e) => {
            let tri = check_triangle(e);
            if let Ok((_, pi)) = &tri {
                let (s, t) = (embedding.source(), embedding.target());
                projection = Some(
                    t.elements()
                        .map(|x| (t.name(x).to_string(), s.name(pi.project(x)).to_string()))
                        .collect::<BTreeMap<_, _>>(),
                );
            }
            rows.push(row(Relation::Triangle, tri.map(|_| ()).map_err(|e| e.to_string())));
            rows.push(row(Relation::TriangleDual, check_triangle_dual(e).map(|_| ()).map_err(|e| e.to_string())));
            rows.push(row(Relation::Convex, check_convex(e).map(|_| ()).map_err(|e| e.to_string())));
            match (&source, &target) {
                (ZooEntry::Ortho(so), ZooEntry::Ortho(to)) => {
                    let r = check_subortholattice(e, so, to).map(|_| ()).map_err(|e| e.to_string());
                    rows.push(row(Relation::SubOrtho, r));
                }
                _ => rows.push(RelationRow { relation: Relation::SubOrtho, holds: None, detail: None }),
            }
        }
        Err(_) => {
            for r in [Relation::Triangle, Relation::TriangleDual, Relation::Convex, Relation::SubOrtho] {
                rows.push(RelationRow { relation: r, holds: None, detail: Some("requires sub01".into()) });
            }
        }
    }
    emit_json(
        cli,
        &json!({
            "source_size": embedding.source().len(),
            "target_size": embedding.target().len(),
            "relations": rows,
            "projection": projection,
        }),
    )?;
    for r in &rows {
        let mark = match r.holds {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        eprintln!("{:<14} {mark}", format!("{:?}", r.relation));
    }
    Ok(if sub.is_ok() { OK } else { NEGATIVE })
}

#[derive(Serialize)]
struct EmbeddingOut {
    source: LatticeDoc,
    map: Vec<usize>,
    certified: Vec<Relation>,
}

fn construction_json(kind: &str, r: &ConstructionResult) -> serde_json::Value {
    let lattice = match &r.ortho {
        Some(o) => LatticeDoc::from_ortho(o),
        None => LatticeDoc::from_lattice(&r.lattice),
    };
    let embeddings: BTreeMap<&str, EmbeddingOut> = r
        .embeddings
        .iter()
        .map(|(name, e)| {
            let out = EmbeddingOut {
                source: LatticeDoc::from_lattice(e.source()),
                map: e.map().iter().map(|x| x.index()).collect(),
                certified: e.certificates().iter().copied().collect(),
            };
            (name.as_str(), out)
        })
        .collect();
    let maps: BTreeMap<&str, Vec<usize>> =
        r.maps.iter().map(|(n, m)| (n.as_str(), m.iter().map(|x| x.index()).collect())).collect();
    json!({ "kind": kind, "lattice": lattice, "embeddings": embeddings, "maps": maps })
}

fn construct(
    cli: &Cli,
    kind: Kind,
    inputs: &[String],
    subset: Option<&str>,
    n: usize,
    dot: Option<&Path>,
) -> Result<u8, Fail> {
    let cap = cli.size_cap.unwrap_or(DEFAULT_SIZE_CAP);
    let want = match kind {
        Kind::Product | Kind::Hsum | Kind::Glued => 2,
        Kind::DualCopy | Kind::Ortho | Kind::Power => 1,
    };
    if inputs.len() != want {
        return Err(fail(USAGE, format!("{kind:?} takes {want} input(s), got {}", inputs.len())));
    }
    let (name, result) = match kind {
        Kind::Product | Kind::Hsum => {
            let (a, b) = (load_entry(&inputs[0])?, load_entry(&inputs[1])?);
            let r = match (kind, &a, &b) {
                (Kind::Product, ZooEntry::Ortho(x), ZooEntry::Ortho(y)) => product_ortho(x, y, cap)?,
                (Kind::Product, _, _) => product(a.lattice(), b.lattice(), cap)?,
                (_, ZooEntry::Ortho(x), ZooEntry::Ortho(y)) => horizontal_sum_ortho(x, y, cap)?,
                _ => horizontal_sum(a.lattice(), b.lattice(), cap)?,
            };
            (if kind == Kind::Product { "product" } else { "hsum" }, r)
        }
        Kind::Glued => {
            let e1 = load_embedding(Path::new(&inputs[0]))?.embedding;
            let e2 = load_embedding(Path::new(&inputs[1]))?.embedding;
            let e1 = check_triangle(&check_sub01(&e1).map_err(DocError::from)?).map_err(DocError::from)?.0;
            let e2 = check_triangle_dual(&check_sub01(&e2).map_err(DocError::from)?).map_err(DocError::from)?.0;
            ("glued", glued_union(&e1, &e2, cap)?)
        }
        Kind::DualCopy | Kind::Ortho => {
            let loaded = load_embedding(Path::new(&inputs[0]))?;
            let o0 = require_ortho(loaded.source, "the embedding's source")?;
            let e = Embedding::new(
                o0.lattice_arc().clone(),
                loaded.embedding.target().clone(),
                loaded.embedding.map().to_vec(),
            )
            .map_err(DocError::from)?;
            let e = check_triangle(&check_sub01(&e).map_err(DocError::from)?).map_err(DocError::from)?.0;
            if kind == Kind::Ortho {
                ("ortho", ortho_construction(&e, &o0, cap)?)
            } else {
                ("dual-copy", dual_copy(&e, &o0)?)
            }
        }
        Kind::Power => {
            let entry = load_entry(&inputs[0])?;
            let l = Arc::new(entry.lattice().clone());
            let names = subset.ok_or_else(|| fail(USAGE, "power needs --subset"))?;
            let s = names
                .split(',')
                .map(|x| l.id_of(x.trim()).ok_or_else(|| fail(USAGE, format!("no element named {x:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let perp = match &entry {
                ZooEntry::Ortho(o) => Some(o),
                ZooEntry::Lattice(_) => None,
            };
            let pw = match perp {
                Some(o) => power_witness(o.lattice_arc(), Some(o), &s, n, cap)?,
                None => power_witness(&l, None, &s, n, cap)?,
            };
            let mut r = pw.ambient.clone();
            r.maps.insert("iota".into(), pw.iota.map().to_vec());
            ("power", r)
        }
    };
    let entry = match &result.ortho {
        Some(o) => ZooEntry::Ortho(o.clone()),
        None => ZooEntry::Lattice((*result.lattice).clone()),
    };
    if let Some(p) = dot {
        fs::write(p, dot_of(&entry, name, true)).map_err(|e| fail(USAGE, format!("{}: {e}", p.display())))?;
    }
    emit_json(cli, &construction_json(name, &result))?;
    eprintln!("{name}: {} elements", result.lattice.len());
    Ok(OK)
}

fn closure_options(cli: &Cli, mode: ModeArg) -> ClosureOptions {
    let mode = match mode {
        ModeArg::Lattice => Mode::LatticeOnly,
        ModeArg::Ortho => Mode::Ortho,
    };
    ClosureOptions::new(mode).budget(cli.budget.unwrap_or(DEFAULT_CLONE_BUDGET)).strategy(strategy(cli))
}

fn closure(cli: &Cli, input: &str, mode: ModeArg) -> Result<u8, Fail> {
    let entry = load_entry(input)?;
    let opts = closure_options(cli, mode);
    let clone = match (&entry, mode) {
        (ZooEntry::Ortho(o), ModeArg::Ortho) => polynomial_clone(o, &opts)?,
        (ZooEntry::Lattice(_), ModeArg::Ortho) => return Err(fail(USAGE, "ortho mode needs an ortholattice")),
        (e, ModeArg::Lattice) => polynomial_clone(e.lattice(), &opts)?,
    };
    let l = entry.lattice();
    let members: Vec<_> = clone
        .members()
        .map(|(values, t)| {
            json!({
                "table": format_table(l, &FunctionTable::unary(&values).expect("member table")),
                "witness": TermJson::from(t),
            })
        })
        .collect();
    emit_json(
        cli,
        &json!({ "mode": opts.mode, "size": clone.len(), "complete": clone.is_complete(), "members": members }),
    )?;
    eprintln!("{} polynomial functions{}", clone.len(), if clone.is_complete() { "" } else { " (budget reached)" });
    Ok(if clone.is_complete() { OK } else { BUDGET })
}

fn verdict_code(r: &Interpolation) -> u8 {
    match r {
        Interpolation::Found(_) => OK,
        Interpolation::Unknown => BUDGET,
        Interpolation::NotRepresentable => NEGATIVE,
    }
}

fn interpolate_cmd(cli: &Cli, input: &str, function: &str, mode: ModeArg) -> Result<u8, Fail> {
    let entry = load_entry(input)?;
    let l = entry.lattice();
    let f = function_arg(cli, l, function, 1)?;
    let opts = closure_options(cli, mode);
    let r = match (&entry, mode) {
        (ZooEntry::Ortho(o), ModeArg::Ortho) => interpolate(o, &f, &opts)?,
        (ZooEntry::Lattice(_), ModeArg::Ortho) => return Err(fail(USAGE, "ortho mode needs an ortholattice")),
        (e, ModeArg::Lattice) => interpolate(e.lattice(), &f, &opts)?,
    };
    emit_json(
        cli,
        &json!({ "mode": opts.mode, "function": format_table(l, &f), "result": InterpolationJson::from(&r) }),
    )?;
    match &r {
        Interpolation::Found(t) => eprintln!("found {t}"),
        Interpolation::NotRepresentable => eprintln!("not a polynomial function"),
        Interpolation::Unknown => eprintln!("budget reached"),
    }
    Ok(verdict_code(&r))
}

fn pipeline(cli: &Cli, l0: &str, function: &str) -> Result<u8, Fail> {
    let o0 = require_ortho(load_entry(l0)?, "--l0")?;
    let f = function_arg(cli, o0.lattice(), function, 1)?;
    let mut params = SearchParams { strategy: strategy(cli), ..SearchParams::default() };
    if let Some(b) = cli.budget {
        params.budget = b;
    }
    if let Some(c) = cli.size_cap {
        params.size_cap = c;
    }
    let cap = params.size_cap;
    let trace = extend_pipeline(&o0, &f, &ExtensionSource::BoundedSearch(params), cap)?;
    let report = PipelineReport::from(&trace);
    emit_json(cli, &report)?;
    match &trace.status {
        PipelineStatus::Success => {
            eprintln!("h = {}", trace.h.as_ref().expect("success carries h"));
            Ok(OK)
        }
        PipelineStatus::ToldStepFailed { reason } | PipelineStatus::StageFailed { reason, .. } => {
            eprintln!("{reason}");
            Ok(if trace.budget_exhausted { BUDGET } else { NEGATIVE })
        }
    }
}

fn nary(cli: &Cli, input: &str, function: &str, ortho: bool) -> Result<u8, Fail> {
    let entry = load_entry(input)?;
    let o = if ortho { Some(require_ortho(entry.clone(), "the input")?) } else { None };
    let base = match &o {
        Some(o) => o.lattice_arc().clone(),
        None => Arc::new(entry.lattice().clone()),
    };
    let g = function_arg(cli, &base, function, 2)?;
    let mut opts = NaryOptions { strategy: strategy(cli), ..NaryOptions::default() };
    if let Some(b) = cli.budget {
        opts.budget = b;
    }
    if let Some(c) = cli.size_cap {
        opts.size_cap = c;
    }
    let r = nary_reduce(&base, o.as_ref(), &g, &opts)?;
    emit_json(cli, &NaryReport::from(&r))?;
    match &r.result {
        Interpolation::Found(t) => eprintln!("found {t}"),
        Interpolation::NotRepresentable => eprintln!("not a polynomial function"),
        Interpolation::Unknown => eprintln!("budget reached"),
    }
    Ok(verdict_code(&r.result))
}

fn zoo_cmd(cli: &Cli, name: Option<&str>, export_dot: bool, perp: bool) -> Result<u8, Fail> {
    let Some(name) = name else {
        let list: Vec<_> = zoo::NAMES
            .iter()
            .map(|n| {
                let e = zoo::by_name(n).expect("listed");
                json!({ "name": n, "size": e.lattice().len(), "ortholattice": matches!(e, ZooEntry::Ortho(_)) })
            })
            .collect();
        emit_json(cli, &list)?;
        return Ok(OK);
    };
    let e = zoo::by_name(name).ok_or_else(|| fail(USAGE, format!("no zoo lattice named {name:?}")))?;
    if export_dot {
        emit(cli, &dot_of(&e, name, perp))?;
    } else {
        emit(cli, &LatticeDoc::from_entry(&e).to_json())?;
    }
    Ok(OK)
}
