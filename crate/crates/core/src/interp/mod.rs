//! Polynomial interpolation over finite (ortho)lattices.
//!
//! [`closure`] computes unary polynomial-function clones and term witnesses,
//! [`pipeline`] realizes an arbitrary unary function on an ortholattice as
//! the restriction of an orthopolynomial over `ortho(L1, L0)`, [`nary`]
//! reduces n-ary interpolation to unary interpolation through a copy of
//! `Sⁿ`, and [`cover`] iterates the pipeline over a list of targets.

pub mod closure;
pub mod cover;
pub mod nary;
pub mod pipeline;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{ElementId, FiniteLattice};

pub use closure::{
    closure_on_points, interpolate, interpolate_all, interpolate_or_synthesize, interpolate_unary, polynomial_clone,
    CloneTable, Closure, ClosureError, ClosureOptions, Interpolation, DEFAULT_CLONE_BUDGET,
};
pub use cover::{iterate_cover, CoverOptions, CoverReport};
pub use nary::{nary_reduce, NaryError, NaryOptions, NaryReduction};
pub use pipeline::{
    antichain_lift, assemble, extend_pipeline, lift_lattice, transport_term, AntichainLift, ExtensionSource,
    PipelineError, PipelineStatus, PipelineTrace, SearchParams, StageRecord, StageStatus, DEFAULT_SEARCH_BUDGET,
};

/// Which operations generate the clone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Meet and join only.
    LatticeOnly,
    /// Meet, join and orthocomplement.
    Ortho,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("argument tuple has {got} entries, arity is {arity}")]
    Arity { got: usize, arity: usize },
    #[error("element {0:?} is outside the domain lattice")]
    OutOfRange(ElementId),
    #[error("conflicting values for the same argument")]
    Conflict,
}

/// A partial function `Lⁿ → L` on a lattice with `size` elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    arity: usize,
    size: usize,
    entries: BTreeMap<Vec<ElementId>, ElementId>,
}

impl FunctionTable {
    pub fn new(arity: usize, size: usize) -> Self {
        FunctionTable { arity, size, entries: BTreeMap::new() }
    }

    /// Total unary function with `values[x]` at `x`.
    pub fn unary(values: &[ElementId]) -> Result<Self, TableError> {
        let mut t = FunctionTable::new(1, values.len());
        for (x, &y) in values.iter().enumerate() {
            t.insert(vec![x.into()], y)?;
        }
        Ok(t)
    }

    pub fn from_fn(l: &FiniteLattice, f: impl Fn(ElementId) -> ElementId) -> Self {
        let mut t = FunctionTable::new(1, l.len());
        for x in l.elements() {
            t.entries.insert(vec![x], f(x));
        }
        t
    }

    /// Total table on `L^arity`, arguments in lexicographic order.
    pub fn from_fn_n(l: &FiniteLattice, arity: usize, mut f: impl FnMut(&[ElementId]) -> ElementId) -> Self {
        let mut t = FunctionTable::new(arity, l.len());
        let mut args = vec![ElementId(0); arity];
        loop {
            let y = f(&args);
            t.entries.insert(args.clone(), y);
            let Some(k) = (0..arity).rev().find(|&k| args[k].index() + 1 < l.len()) else { break };
            args[k] = ElementId::from(args[k].index() + 1);
            for a in &mut args[k + 1..] {
                *a = ElementId(0);
            }
        }
        t
    }

    pub fn insert(&mut self, args: Vec<ElementId>, value: ElementId) -> Result<(), TableError> {
        if args.len() != self.arity {
            return Err(TableError::Arity { got: args.len(), arity: self.arity });
        }
        if let Some(&bad) = args.iter().chain([&value]).find(|e| e.index() >= self.size) {
            return Err(TableError::OutOfRange(bad));
        }
        match self.entries.insert(args, value) {
            Some(prev) if prev != value => Err(TableError::Conflict),
            _ => Ok(()),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of elements of the domain lattice.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.entries.len() == self.size.pow(self.arity as u32)
    }

    pub fn get(&self, args: &[ElementId]) -> Option<ElementId> {
        self.entries.get(args).copied()
    }

    pub fn get1(&self, x: ElementId) -> Option<ElementId> {
        self.get(&[x])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[ElementId], ElementId)> {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// The same function on a larger lattice, moved along an element map.
    pub fn transport(&self, map: &[ElementId], size: usize) -> FunctionTable {
        let entries =
            self.entries.iter().map(|(k, v)| (k.iter().map(|x| map[x.index()]).collect(), map[v.index()])).collect();
        FunctionTable { arity: self.arity, size, entries }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// `(u, v)` with `u ≤ v` componentwise but `f(u) ≰ f(v)`.
    pub witness: Option<(Vec<ElementId>, Vec<ElementId>)>,
}

/// Checks `u ≤ v ⇒ f(u) ≤ f(v)` over all pairs in the domain. The witness
/// is the first violation with `u` ascending and `v` descending.
pub fn monotone_check(f: &FunctionTable, l: &FiniteLattice) -> MonotoneReport {
    let leq = |u: &[ElementId], v: &[ElementId]| u.iter().zip(v).all(|(&a, &b)| l.leq(a, b));
    for (u, fu) in f.entries() {
        for (v, fv) in f.entries().collect::<Vec<_>>().into_iter().rev() {
            if leq(u, v) && !l.leq(fu, fv) {
                return MonotoneReport { monotone: false, witness: Some((u.to_vec(), v.to_vec())) };
            }
        }
    }
    MonotoneReport { monotone: true, witness: None }
}
