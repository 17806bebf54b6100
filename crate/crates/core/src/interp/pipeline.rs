//! Realizing `f: L0 → L0` as the restriction of an orthopolynomial over
//! `ortho(L1, L0)`.
//!
//! `L0' = hsum(L0, L0 × L0)` carries the antichain `{⟨x, x⊥⟩}`; on it
//! `f̄(⟨x, x⊥⟩) = f(x)` is trivially monotone, as are `g1(x) = ⟨x, 0⟩` and
//! `g2(x) = ⟨0, x⟩`. Lattice polynomials `p`, `q1`, `q2` interpolating them
//! over a strong extension `L1` of `L0'` give
//! `h(x) = p(q1(x) ∨ q2(x⊥))` with `h = f` on `L0`.
//!
//! Lattice polynomials for `f̄`, `g1`, `g2` are searched for by clone
//! closure, either over a supplied `L1` or over a bounded family of
//! horizontal-sum extensions of `L0'`. The search is sound but not complete.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::closure::{interpolate_or_synthesize, ClosureError, ClosureOptions, Interpolation};
use super::{monotone_check, FunctionTable, Mode, TableError};
use crate::construct::{
    horizontal_sum, ortho_construction, product, ConstructError, ConstructionResult, DEFAULT_SIZE_CAP,
};
use crate::lattice::{chain, ElementId, FiniteLattice};
use crate::morphism::{check_sub01, check_triangle, same_lattice, Embedding, MorphismError, Relation};
use crate::ortho::Ortholattice;
use crate::par::Strategy;
use crate::terms::{eval, Term};
use crate::zoo;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("f must be a total unary function on L0")]
    NotTotal,
    #[error("supplied extension does not start at L0'")]
    WrongBase,
    #[error("supplied extension is not certified ⊴")]
    NotCertified,
    #[error("{0:?} and {1:?} are comparable in L0 × L0")]
    NotAntichain(ElementId, ElementId),
    #[error("lifted table {0} is not monotone")]
    NotMonotone(&'static str),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

/// `L0' = hsum(L0, L0 × L0)` with the lifted partial tables.
#[derive(Clone, Debug)]
pub struct AntichainLift {
    pub l0_prime: ConstructionResult,
    /// `L0 → L0'`, certified ⊴.
    pub into: Embedding,
    /// `⟨x, x⊥⟩` for each `x ∈ L0`, indexed by `x`.
    pub antichain: Vec<ElementId>,
    pub f_bar: FunctionTable,
    pub g1: FunctionTable,
    pub g2: FunctionTable,
}

impl AntichainLift {
    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.l0_prime.lattice
    }
}

/// The lattice `hsum(L0, L0 × L0)` alone, with its embeddings `left`
/// (`L0`, ⊴) and `right` (the product).
pub fn lift_lattice(o0: &Ortholattice, cap: usize) -> Result<ConstructionResult, PipelineError> {
    let l0 = o0.lattice();
    let square = product(l0, l0, cap)?;
    Ok(horizontal_sum(l0, &square.lattice, cap)?)
}

pub fn antichain_lift(o0: &Ortholattice, f: &FunctionTable, cap: usize) -> Result<AntichainLift, PipelineError> {
    let l0 = o0.lattice();
    if f.arity() != 1 || f.size() != l0.len() || !f.is_total() {
        return Err(PipelineError::NotTotal);
    }
    let sum = lift_lattice(o0, cap)?;
    let n = l0.len();
    let into = sum.embedding("left").clone();
    let right = sum.embedding("right").clone();
    let pair = |x: ElementId, y: ElementId| right.apply(ElementId::from(x.index() * n + y.index()));
    let lp = sum.lattice.clone();

    let antichain: Vec<ElementId> = l0.elements().map(|x| pair(x, o0.perp(x))).collect();
    for (i, &u) in antichain.iter().enumerate() {
        for &v in &antichain[i + 1..] {
            if lp.comparable(u, v) {
                return Err(PipelineError::NotAntichain(u, v));
            }
        }
    }
    let mut f_bar = FunctionTable::new(1, lp.len());
    let mut g1 = FunctionTable::new(1, lp.len());
    let mut g2 = FunctionTable::new(1, lp.len());
    for x in l0.elements() {
        f_bar.insert(vec![antichain[x.index()]], into.apply(f.get1(x).unwrap()))?;
        g1.insert(vec![into.apply(x)], pair(x, l0.bottom()))?;
        g2.insert(vec![into.apply(x)], pair(l0.bottom(), x))?;
    }
    for (name, t) in [("f_bar", &f_bar), ("g1", &g1), ("g2", &g2)] {
        if !monotone_check(t, &lp).monotone {
            return Err(PipelineError::NotMonotone(name));
        }
    }
    Ok(AntichainLift { l0_prime: sum, into, antichain, f_bar, g1, g2 })
}

/// Clone budget per candidate extension. Lower than a full clone run since
/// most candidates fail and the synthesis fallback rarely needs deep levels.
pub const DEFAULT_SEARCH_BUDGET: usize = 5_000;

/// Bounded family of strong extensions of a base lattice `B`: `B` itself,
/// then `hsum(B, X)` and `hsum(hsum(B, X), Y)` for factors `X ≤ Y` in list
/// order, up to `depth` sums and `size_cap` elements.
#[derive(Clone, Debug)]
pub struct SearchParams {
    pub factors: Vec<(String, FiniteLattice)>,
    pub depth: usize,
    pub size_cap: usize,
    /// Clone budget per interpolation.
    pub budget: usize,
    pub strategy: Strategy,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            factors: vec![
                ("3-chain".into(), chain(3)),
                ("4-chain".into(), chain(4)),
                ("B2".into(), zoo::b2().lattice().clone()),
                ("M3".into(), zoo::m3()),
                ("N5".into(), zoo::n5()),
            ],
            depth: 2,
            size_cap: DEFAULT_SIZE_CAP,
            budget: DEFAULT_SEARCH_BUDGET,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExtensionSource {
    /// `L0' → L1`, certified ⊴.
    Supplied(Embedding),
    BoundedSearch(SearchParams),
}

/// A strong extension found by [`find_interpolants`], with the lattice
/// polynomials over it.
#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub label: String,
    pub embedding: Embedding,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub(crate) struct SearchOutcome {
    pub found: Option<Found>,
    pub tried: usize,
    /// Some candidate ran out of budget.
    pub truncated: bool,
}

fn extend_by(e: &Embedding, x: &FiniteLattice, cap: usize) -> Result<Embedding, PipelineError> {
    let sum = horizontal_sum(e.target(), x, cap)?;
    let composed = e.then(sum.embedding("left"))?;
    Ok(check_triangle(&check_sub01(&composed)?)?.0)
}

fn candidates(base_label: &str, params: &SearchParams) -> Vec<(String, Vec<usize>)> {
    let mut out = vec![(String::new(), vec![])];
    let k = params.factors.len();
    if params.depth >= 1 {
        out.extend((0..k).map(|i| (String::new(), vec![i])));
    }
    if params.depth >= 2 {
        for i in 0..k {
            for j in i..k {
                out.push((String::new(), vec![i, j]));
            }
        }
    }
    for (label, path) in &mut out {
        *label = path.iter().fold(base_label.to_string(), |acc, &i| format!("hsum({acc}, {})", params.factors[i].0));
    }
    out
}

fn try_extension(
    e: &Embedding,
    label: String,
    tables: &[&FunctionTable],
    opts: &ClosureOptions,
) -> Result<(Option<Found>, bool), PipelineError> {
    let target = e.target();
    let moved: Vec<FunctionTable> = tables.iter().map(|t| t.transport(e.map(), target.len())).collect();
    let refs: Vec<&FunctionTable> = moved.iter().collect();
    let results = interpolate_or_synthesize(&**target, &refs, opts)?;
    let truncated = results.contains(&Interpolation::Unknown);
    if results.iter().all(|r| matches!(r, Interpolation::Found(_))) {
        let terms = results.into_iter().map(|r| r.term().unwrap().clone()).collect();
        Ok((Some(Found { label, embedding: e.clone(), terms }), truncated))
    } else {
        Ok((None, truncated))
    }
}

/// Searches the bounded family over `base` for an extension where every
/// table (given on `base`) is a lattice polynomial function.
pub(crate) fn find_interpolants(
    base: &Arc<FiniteLattice>,
    base_label: &str,
    tables: &[&FunctionTable],
    params: &SearchParams,
) -> Result<SearchOutcome, PipelineError> {
    let opts = ClosureOptions::new(Mode::LatticeOnly).budget(params.budget).strategy(params.strategy);
    let mut outcome = SearchOutcome { found: None, tried: 0, truncated: false };
    let start = Embedding::identity(base.clone());
    for (label, path) in candidates(base_label, params) {
        let mut e = start.clone();
        let mut fits = true;
        for &i in &path {
            match extend_by(&e, &params.factors[i].1, params.size_cap) {
                Ok(next) => e = next,
                Err(PipelineError::Construct(ConstructError::SizeLimitExceeded { .. })) => {
                    fits = false;
                    break;
                }
                Err(err) => return Err(err),
            }
        }
        if !fits {
            continue;
        }
        outcome.tried += 1;
        let (found, truncated) = try_extension(&e, label, tables, &opts)?;
        outcome.truncated |= truncated;
        if found.is_some() {
            outcome.found = found;
            return Ok(outcome);
        }
    }
    Ok(outcome)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Success,
    Failed,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub status: StageStatus,
    pub size: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PipelineStatus {
    Success,
    /// No interpolating `p`, `q1`, `q2` in the extensions tried.
    ToldStepFailed {
        reason: String,
    },
    StageFailed {
        stage: String,
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub status: PipelineStatus,
    pub stages: Vec<StageRecord>,
    pub lift: AntichainLift,
    /// `L0' → L1`.
    pub l1: Option<Embedding>,
    pub l1_label: Option<String>,
    /// `ortho(L1, L0)`.
    pub result: Option<ConstructionResult>,
    pub p: Option<Term>,
    pub q1: Option<Term>,
    pub q2: Option<Term>,
    pub h: Option<Term>,
    /// `(x, h(x), f(x))` with all three as elements of `L`.
    pub verification: Vec<(ElementId, ElementId, ElementId)>,
    pub candidates_tried: usize,
    /// Some closure in the search stopped at its budget.
    pub budget_exhausted: bool,
}

impl PipelineTrace {
    pub fn is_success(&self) -> bool {
        self.status == PipelineStatus::Success
    }

    pub fn ortholattice(&self) -> Option<&Ortholattice> {
        self.result.as_ref().and_then(|r| r.ortho.as_ref())
    }
}

fn record(stage: &str, status: StageStatus, size: Option<usize>, detail: impl Into<String>) -> StageRecord {
    StageRecord { stage: stage.into(), status, size, detail: detail.into() }
}

/// `p(q1(x) ∨ q2(x⊥))`.
pub fn assemble(p: &Term, q1: &Term, q2: &Term) -> Term {
    let inner = Term::join(q1.clone(), q2.substitute(&[Term::perp(Term::var(0))]));
    p.substitute(&[inner])
}

/// Renames coefficients along an embedding.
pub fn transport_term(t: &Term, e: &Embedding) -> Term {
    let (src, tgt) = (e.source(), e.target());
    t.map_consts(&|c| match src.id_of(c) {
        Some(x) => tgt.name(e.apply(x)).to_string(),
        None => c.to_string(),
    })
}

pub fn extend_pipeline(
    o0: &Ortholattice,
    f: &FunctionTable,
    source: &ExtensionSource,
    cap: usize,
) -> Result<PipelineTrace, PipelineError> {
    let lift = antichain_lift(o0, f, cap)?;
    let lp = lift.lattice().clone();
    let mut stages = vec![
        record("L0", StageStatus::Success, Some(o0.len()), "input ortholattice"),
        record("L0'", StageStatus::Success, Some(lp.len()), "hsum(L0, L0 x L0); antichain and monotonicity checked"),
    ];
    let mut trace = PipelineTrace {
        status: PipelineStatus::Success,
        stages: Vec::new(),
        lift: lift.clone(),
        l1: None,
        l1_label: None,
        result: None,
        p: None,
        q1: None,
        q2: None,
        h: None,
        verification: Vec::new(),
        candidates_tried: 0,
        budget_exhausted: false,
    };
    let tables = [&lift.f_bar, &lift.g1, &lift.g2];
    let outcome = match source {
        ExtensionSource::Supplied(e) => {
            if !same_lattice(e.source(), &lp) {
                return Err(PipelineError::WrongBase);
            }
            if !e.is_certified(Relation::Triangle) {
                return Err(PipelineError::NotCertified);
            }
            let opts = ClosureOptions::new(Mode::LatticeOnly);
            let (found, truncated) = try_extension(e, "supplied".into(), &tables, &opts)?;
            SearchOutcome { found, tried: 1, truncated }
        }
        ExtensionSource::BoundedSearch(params) => find_interpolants(&lp, "L0'", &tables, params)?,
    };
    trace.candidates_tried = outcome.tried;
    trace.budget_exhausted = outcome.truncated;
    let Some(found) = outcome.found else {
        let reason = format!(
            "no lattice polynomials for f_bar, g1, g2 in {} extension(s){}",
            outcome.tried,
            if outcome.truncated { " (some closures hit the budget)" } else { "" }
        );
        stages.push(record("L1", StageStatus::Failed, None, reason.clone()));
        stages.push(record("L", StageStatus::Skipped, None, ""));
        stages.push(record("verify", StageStatus::Skipped, None, ""));
        trace.stages = stages;
        trace.status = PipelineStatus::ToldStepFailed { reason };
        return Ok(trace);
    };
    let l1 = found.embedding.target().clone();
    stages.push(record("L1", StageStatus::Success, Some(l1.len()), found.label.clone()));
    let (p, q1, q2) = (found.terms[0].clone(), found.terms[1].clone(), found.terms[2].clone());
    trace.l1 = Some(found.embedding.clone());
    trace.l1_label = Some(found.label.clone());

    let l0_to_l1 = check_triangle(&check_sub01(&lift.into.then(&found.embedding)?)?)?.0;
    let l = match ortho_construction(&l0_to_l1, o0, cap) {
        Ok(l) => l,
        Err(err) => {
            let reason = err.to_string();
            stages.push(record("L", StageStatus::Failed, None, reason.clone()));
            trace.stages = stages;
            trace.status = PipelineStatus::StageFailed { stage: "L".into(), reason };
            return Ok(trace);
        }
    };
    stages.push(record("L", StageStatus::Success, Some(l.lattice.len()), "ortho(L1, L0)"));
    let h = transport_term(&assemble(&p, &q1, &q2), l.embedding("L1"));

    let ortho = l.ortho.as_ref().unwrap();
    let into_l = l.embedding("L0");
    let mut ok = true;
    for x in o0.lattice().elements() {
        let (xl, fl) = (into_l.apply(x), into_l.apply(f.get1(x).unwrap()));
        let hx = eval(&h, ortho, &[xl]).expect("coefficients live in L");
        ok &= hx == fl;
        trace.verification.push((xl, hx, fl));
    }
    trace.p = Some(p);
    trace.q1 = Some(q1);
    trace.q2 = Some(q2);
    trace.h = Some(h);
    trace.result = Some(l);
    if ok {
        stages.push(record("verify", StageStatus::Success, None, format!("h(x) = f(x) for all {} x in L0", o0.len())));
    } else {
        let reason = "h disagrees with f".to_string();
        stages.push(record("verify", StageStatus::Failed, None, reason.clone()));
        trace.status = PipelineStatus::StageFailed { stage: "verify".into(), reason };
    }
    trace.stages = stages;
    Ok(trace)
}
