//! JSON documents, function-table literals and report shapes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interp::{
    FunctionTable, Interpolation, NaryReduction, PipelineStatus, PipelineTrace, StageRecord, TableError,
};
use crate::lattice::{validate_lattice, ElementId, FiniteLattice, LatticeError, Poset};
use crate::morphism::{Embedding, MorphismError};
use crate::ortho::{validate_ortho, OrthoError, Ortholattice};
use crate::terms::{parse, SyntaxError, Term};
use crate::zoo::{self, ZooEntry};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("index {index} out of range for {len} elements")]
    Index { index: usize, len: usize },
    #[error("unknown reference {0:?}")]
    UnknownReference(String),
    #[error("{0:?} is not an ortholattice")]
    NotOrtho(String),
    #[error("function literal: {0}")]
    Literal(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("term {0:?}: {1}")]
    Term(String, SyntaxError),
}

/// `{"elements": [...], "covers": [[i, j], ...], "bottom": i, "top": j}`,
/// with an optional `"perp": [...]` for an ortholattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    pub bottom: usize,
    pub top: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perp: Option<Vec<usize>>,
}

impl LatticeDoc {
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        LatticeDoc {
            elements: l.names().to_vec(),
            covers: l.covers().into_iter().map(|(x, y)| (x.index(), y.index())).collect(),
            bottom: l.bottom().index(),
            top: l.top().index(),
            perp: None,
        }
    }

    pub fn from_ortho(o: &Ortholattice) -> Self {
        let mut d = Self::from_lattice(o.lattice());
        d.perp = Some(o.perp_table().iter().map(|p| p.index()).collect());
        d
    }

    pub fn from_entry(e: &ZooEntry) -> Self {
        match e {
            ZooEntry::Lattice(l) => Self::from_lattice(l),
            ZooEntry::Ortho(o) => Self::from_ortho(o),
        }
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice, DocError> {
        let n = self.elements.len();
        for &index in [self.bottom, self.top].iter() {
            if index >= n {
                return Err(DocError::Index { index, len: n });
            }
        }
        let poset = Poset::from_covers(self.elements.clone(), &self.covers)?
            .with_bounds(Some(ElementId::from(self.bottom)), Some(ElementId::from(self.top)));
        Ok(validate_lattice(&poset)?)
    }

    /// Validates the lattice and, when present, the orthocomplement.
    pub fn load(&self) -> Result<ZooEntry, DocError> {
        let l = self.to_lattice()?;
        let Some(perp) = &self.perp else { return Ok(ZooEntry::Lattice(l)) };
        let n = l.len();
        if let Some(&index) = perp.iter().find(|&&i| i >= n) {
            return Err(DocError::Index { index, len: n });
        }
        let perp = perp.iter().map(|&i| ElementId::from(i)).collect();
        Ok(ZooEntry::Ortho(validate_ortho(Arc::new(l), perp)?))
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// A lattice given by name (workspace entry or zoo) or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeRef {
    Name(String),
    Inline(LatticeDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingDoc {
    pub source: LatticeRef,
    pub target: LatticeRef,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub lattice: String,
    /// `x:y,...` or `(a,b):c,...` literal.
    pub table: String,
}

/// Named lattices, embeddings, function tables and terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDocument {
    pub version: u32,
    #[serde(default)]
    pub lattices: BTreeMap<String, LatticeDoc>,
    #[serde(default)]
    pub embeddings: BTreeMap<String, EmbeddingDoc>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionDoc>,
    #[serde(default)]
    pub terms: BTreeMap<String, String>,
}

impl Default for WorkspaceDocument {
    fn default() -> Self {
        WorkspaceDocument {
            version: FORMAT_VERSION,
            lattices: BTreeMap::new(),
            embeddings: BTreeMap::new(),
            functions: BTreeMap::new(),
            terms: BTreeMap::new(),
        }
    }
}

/// A workspace with every reference resolved and validated.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub lattices: BTreeMap<String, ZooEntry>,
    pub embeddings: BTreeMap<String, Embedding>,
    pub functions: BTreeMap<String, FunctionTable>,
    pub terms: BTreeMap<String, Term>,
}

impl WorkspaceDocument {
    pub fn from_json(text: &str) -> Result<Self, DocError> {
        let doc: WorkspaceDocument = serde_json::from_str(text)?;
        if doc.version != FORMAT_VERSION {
            return Err(DocError::Version(doc.version));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    fn named(&self, name: &str) -> Result<ZooEntry, DocError> {
        match self.lattices.get(name) {
            Some(d) => d.load(),
            None => zoo::by_name(name).ok_or_else(|| DocError::UnknownReference(name.to_string())),
        }
    }

    pub fn resolve(&self, r: &LatticeRef) -> Result<ZooEntry, DocError> {
        match r {
            LatticeRef::Name(n) => self.named(n),
            LatticeRef::Inline(d) => d.load(),
        }
    }

    pub fn load(&self) -> Result<Workspace, DocError> {
        let mut lattices = BTreeMap::new();
        for (name, d) in &self.lattices {
            lattices.insert(name.clone(), d.load()?);
        }
        let arc = |e: &ZooEntry| Arc::new(e.lattice().clone());
        let mut embeddings = BTreeMap::new();
        for (name, d) in &self.embeddings {
            let (s, t) = (self.resolve(&d.source)?, self.resolve(&d.target)?);
            let map = d
                .map
                .iter()
                .map(|&i| {
                    if i < t.lattice().len() {
                        Ok(ElementId::from(i))
                    } else {
                        Err(DocError::Index { index: i, len: t.lattice().len() })
                    }
                })
                .collect::<Result<_, _>>()?;
            embeddings.insert(name.clone(), Embedding::new(arc(&s), arc(&t), map)?);
        }
        let mut functions = BTreeMap::new();
        for (name, d) in &self.functions {
            let l = self.named(&d.lattice)?;
            functions.insert(name.clone(), parse_table(l.lattice(), &d.table)?);
        }
        let mut terms = BTreeMap::new();
        for (name, text) in &self.terms {
            terms.insert(name.clone(), parse(text).map_err(|e| DocError::Term(name.clone(), e))?);
        }
        Ok(Workspace { lattices, embeddings, functions, terms })
    }

    /// Loads, then rewrites every entry in normal form: lattice documents
    /// rebuilt from the validated lattice, tables and terms reprinted.
    pub fn canonicalize(&self) -> Result<WorkspaceDocument, DocError> {
        let ws = self.load()?;
        let mut out = WorkspaceDocument {
            lattices: ws.lattices.iter().map(|(n, e)| (n.clone(), LatticeDoc::from_entry(e))).collect(),
            ..Default::default()
        };
        for (name, d) in &self.embeddings {
            let canon = |r: &LatticeRef| -> Result<LatticeRef, DocError> {
                Ok(match r {
                    LatticeRef::Name(n) => LatticeRef::Name(n.clone()),
                    LatticeRef::Inline(d) => LatticeRef::Inline(LatticeDoc::from_entry(&d.load()?)),
                })
            };
            out.embeddings.insert(
                name.clone(),
                EmbeddingDoc { source: canon(&d.source)?, target: canon(&d.target)?, map: d.map.clone() },
            );
        }
        for (name, d) in &self.functions {
            let l = self.named(&d.lattice)?;
            let table = format_table(l.lattice(), &ws.functions[name]);
            out.functions.insert(name.clone(), FunctionDoc { lattice: d.lattice.clone(), table });
        }
        out.terms = ws.terms.iter().map(|(n, t)| (n.clone(), t.to_string())).collect();
        Ok(out)
    }
}

/// Splits at commas outside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Last `:` outside brackets.
fn split_colon(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut at = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ':' if depth == 0 => at = Some(i),
            _ => {}
        }
    }
    at.map(|i| (&s[..i], &s[i + 1..]))
}

fn element(l: &FiniteLattice, name: &str) -> Result<ElementId, DocError> {
    let name = name.trim();
    l.id_of(name).ok_or_else(|| DocError::Literal(format!("no element named {name:?}")))
}

/// Parses `x:y,...` (unary) or `(a,b):c,...` (n-ary) using element names.
/// An argument that names an element is read as that element even when it
/// is parenthesized, so constructed names like `(a,0)` work in unary tables.
pub fn parse_table(l: &FiniteLattice, text: &str) -> Result<FunctionTable, DocError> {
    let mut rows = Vec::new();
    for entry in split_top(text.trim()) {
        let entry = entry.trim();
        let (lhs, rhs) = split_colon(entry).ok_or_else(|| DocError::Literal(format!("entry {entry:?} has no ':'")))?;
        let lhs = lhs.trim();
        let args = match l.id_of(lhs) {
            Some(x) => vec![x],
            None => match lhs.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                Some(inner) => split_top(inner).into_iter().map(|a| element(l, a)).collect::<Result<_, _>>()?,
                None => vec![element(l, lhs)?],
            },
        };
        rows.push((args, element(l, rhs)?));
    }
    let arity = rows[0].0.len();
    let mut t = FunctionTable::new(arity, l.len());
    for (args, y) in rows {
        t.insert(args, y)?;
    }
    Ok(t)
}

pub fn format_table(l: &FiniteLattice, t: &FunctionTable) -> String {
    let entries: Vec<String> = t
        .entries()
        .map(|(args, y)| {
            let names: Vec<&str> = args.iter().map(|&a| l.name(a)).collect();
            if t.arity() == 1 {
                format!("{}:{}", names[0], l.name(y))
            } else {
                format!("({}):{}", names.join(","), l.name(y))
            }
        })
        .collect();
    entries.join(",")
}

/// A term as printed text and as an AST.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub text: String,
    pub ast: Term,
}

impl From<&Term> for TermJson {
    fn from(t: &Term) -> Self {
        TermJson { text: t.to_string(), ast: t.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InterpolationJson {
    Found { term: TermJson },
    NotRepresentable,
    Unknown,
}

impl From<&Interpolation> for InterpolationJson {
    fn from(r: &Interpolation) -> Self {
        match r {
            Interpolation::Found(t) => InterpolationJson::Found { term: t.into() },
            Interpolation::NotRepresentable => InterpolationJson::NotRepresentable,
            Interpolation::Unknown => InterpolationJson::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub x: String,
    pub h: String,
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageLattice {
    pub label: String,
    pub size: usize,
}

/// Serializable pipeline trace. Intermediate lattices appear by label and
/// size; the resulting ortholattice is included in full.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    #[serde(flatten)]
    pub status: PipelineStatus,
    pub stages: Vec<StageRecord>,
    pub candidates_tried: usize,
    pub budget_exhausted: bool,
    pub antichain: Vec<String>,
    pub l1: Option<StageLattice>,
    pub p: Option<TermJson>,
    pub q1: Option<TermJson>,
    pub q2: Option<TermJson>,
    pub h: Option<TermJson>,
    pub lattice: Option<LatticeDoc>,
    pub verification: Vec<VerificationRow>,
    pub verified: bool,
}

impl From<&PipelineTrace> for PipelineReport {
    fn from(t: &PipelineTrace) -> Self {
        let lp = t.lift.lattice();
        let verification = match t.result.as_ref() {
            Some(r) => {
                let l = &r.lattice;
                t.verification
                    .iter()
                    .map(|&(x, h, f)| VerificationRow { x: l.name(x).into(), h: l.name(h).into(), f: l.name(f).into() })
                    .collect()
            }
            None => Vec::new(),
        };
        PipelineReport {
            status: t.status.clone(),
            stages: t.stages.clone(),
            candidates_tried: t.candidates_tried,
            budget_exhausted: t.budget_exhausted,
            antichain: t.lift.antichain.iter().map(|&a| lp.name(a).to_string()).collect(),
            l1: t
                .l1
                .as_ref()
                .map(|e| StageLattice { label: t.l1_label.clone().unwrap_or_default(), size: e.target().len() }),
            p: t.p.as_ref().map(Into::into),
            q1: t.q1.as_ref().map(Into::into),
            q2: t.q2.as_ref().map(Into::into),
            h: t.h.as_ref().map(Into::into),
            lattice: t.ortholattice().map(LatticeDoc::from_ortho),
            verified: t.is_success() && verification.iter().all(|r: &VerificationRow| r.h == r.f),
            verification,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaryReport {
    pub result: InterpolationJson,
    pub ambient_size: Option<usize>,
    pub f: Option<String>,
    pub p: Option<TermJson>,
    pub coordinates: Vec<TermJson>,
    pub identity_holds: bool,
}

impl From<&NaryReduction> for NaryReport {
    fn from(r: &NaryReduction) -> Self {
        NaryReport {
            result: (&r.result).into(),
            ambient_size: r.ambient().map(|l| l.len()),
            f: match (r.ambient(), &r.f) {
                (Some(l), Some(f)) => Some(format_table(l, f)),
                _ => None,
            },
            p: r.p.as_ref().map(Into::into),
            coordinates: r.coordinates.iter().map(Into::into).collect(),
            identity_holds: r.identity_holds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_doc_round_trip() {
        for (_, o) in zoo::ortholattices() {
            let d = LatticeDoc::from_ortho(&o);
            let back = LatticeDoc::from_json(&d.to_json()).unwrap();
            assert_eq!(back, d);
            match back.load().unwrap() {
                ZooEntry::Ortho(o2) => assert_eq!(o2, o),
                ZooEntry::Lattice(_) => panic!("perp lost"),
            }
        }
    }

    #[test]
    fn bad_documents() {
        let d =
            LatticeDoc { elements: vec!["0".into(), "1".into()], covers: vec![(0, 1)], bottom: 0, top: 5, perp: None };
        assert!(matches!(d.to_lattice(), Err(DocError::Index { index: 5, .. })));
        assert!(LatticeDoc::from_json(r#"{"elements":[],"covers":[],"bottom":0,"top":0,"extra":1}"#).is_err());
    }

    #[test]
    fn table_literals() {
        let l = zoo::b2().lattice().clone();
        let t = parse_table(&l, "0:1, a:b,b:a,1:0").unwrap();
        assert_eq!(t.get1(l.id_of("a").unwrap()), l.id_of("b"));
        assert_eq!(format_table(&l, &t), "0:1,a:b,b:a,1:0");
        let m = parse_table(&l, "(a,b):0,(a,a):a").unwrap();
        assert_eq!(m.arity(), 2);
        assert_eq!(format_table(&l, &m), "(a,a):a,(a,b):0");
        assert!(parse_table(&l, "a:b,a:1").is_err());
        assert!(parse_table(&l, "a").is_err());
        assert!(parse_table(&l, "z:0").is_err());
    }

    #[test]
    fn parenthesized_names_stay_unary() {
        let p = crate::construct::product(zoo::b2().lattice(), zoo::two_chain().lattice(), 64).unwrap();
        let t = parse_table(&p.lattice, "(a,0):(b,1)").unwrap();
        assert_eq!(t.arity(), 1);
    }

    #[test]
    fn workspace_canonical_is_stable() {
        let text = r#"{
          "version": 1,
          "lattices": {"L": {"elements": ["0","x","1"], "covers": [[0,1],[1,2],[0,2]], "bottom": 0, "top": 2}},
          "embeddings": {"e": {"source": "2-chain", "target": "L", "map": [0, 2]}},
          "functions": {"f": {"lattice": "B2", "table": "a:a, b:b, 0:0, 1:1"}},
          "terms": {"t": "((x0 & a) | b)"}
        }"#;
        let doc = WorkspaceDocument::from_json(text).unwrap();
        let canon = doc.canonicalize().unwrap();
        assert_eq!(canon.lattices["L"].covers, vec![(0, 1), (1, 2)]);
        assert_eq!(canon.terms["t"], "x0 & a | b");
        let again = WorkspaceDocument::from_json(&canon.to_json()).unwrap().canonicalize().unwrap();
        assert_eq!(again.to_json(), canon.to_json());
    }

    #[test]
    fn unresolved_reference() {
        let text = r#"{"version": 1, "functions": {"f": {"lattice": "nope", "table": "0:0"}}}"#;
        let doc = WorkspaceDocument::from_json(text).unwrap();
        assert!(matches!(doc.load(), Err(DocError::UnknownReference(_))));
        assert!(matches!(WorkspaceDocument::from_json(r#"{"version": 9}"#), Err(DocError::Version(9))));
    }
}
