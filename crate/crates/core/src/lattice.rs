//! Finite bounded lattices stored as a dense order matrix with cached
//! meet and join tables.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitMatrix, BitSet};
use crate::par::{self, Strategy};

/// Positional name of an element; ids of a lattice are exactly `0..len`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ElementId {
    #[inline]
    fn from(i: usize) -> Self {
        ElementId(i as u32)
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bound {
    Bottom,
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrderViolation {
    NotReflexive(ElementId),
    NotAntisymmetric(ElementId, ElementId),
    NotTransitive(ElementId, ElementId, ElementId),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("relation is not a partial order: {0:?}")]
    NotAPartialOrder(OrderViolation),
    #[error("elements {0:?} and {1:?} have no greatest lower bound")]
    NoMeet(ElementId, ElementId),
    #[error("elements {0:?} and {1:?} have no least upper bound")]
    NoJoin(ElementId, ElementId),
    #[error("no {0:?} element")]
    MissingBounds(Bound),
    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("relation matrix has {rows} rows but {names} element names")]
    ShapeMismatch { rows: usize, names: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
}

/// A finite partial order, optionally carrying claimed bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: BitMatrix,
    bottom: Option<ElementId>,
    top: Option<ElementId>,
}

impl Poset {
    /// Takes the full relation; checks reflexivity, antisymmetry and
    /// transitivity and reports the first violation.
    pub fn from_relation(names: Vec<String>, leq: BitMatrix) -> Result<Self, LatticeError> {
        if leq.len() != names.len() {
            return Err(LatticeError::ShapeMismatch { rows: leq.len(), names: names.len() });
        }
        check_partial_order(&leq)?;
        Ok(Poset { names, leq, bottom: None, top: None })
    }

    /// Takes a cover (or any generating) list and closes it transitively.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let n = names.len();
        let mut rel = BitMatrix::new(n);
        for &(i, j) in covers {
            for index in [i, j] {
                if index >= n {
                    return Err(LatticeError::IndexOutOfRange { index, len: n });
                }
            }
            rel.set(i, j);
        }
        let leq = rel.reflexive_transitive_closure();
        Self::from_relation(names, leq)
    }

    pub fn with_bounds(mut self, bottom: Option<ElementId>, top: Option<ElementId>) -> Self {
        self.bottom = bottom;
        self.top = top;
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.leq.get(x.index(), y.index())
    }

    pub fn relation(&self) -> &BitMatrix {
        &self.leq
    }

    /// Greatest lower bound of `x` and `y` if one exists in the poset.
    pub fn meet(&self, x: ElementId, y: ElementId) -> Option<ElementId> {
        let down = self.leq.transpose();
        greatest_of(&down, &down.row(x.index()).intersection(down.row(y.index())))
    }

    /// Least upper bound of `x` and `y` if one exists in the poset.
    pub fn join(&self, x: ElementId, y: ElementId) -> Option<ElementId> {
        greatest_of(&self.leq, &self.leq.row(x.index()).intersection(self.leq.row(y.index())))
    }
}

fn check_partial_order(leq: &BitMatrix) -> Result<(), LatticeError> {
    let n = leq.len();
    let violation = |v| Err(LatticeError::NotAPartialOrder(v));
    for x in 0..n {
        if !leq.get(x, x) {
            return violation(OrderViolation::NotReflexive(x.into()));
        }
    }
    for x in 0..n {
        for y in leq.row(x).iter() {
            if y != x && leq.get(y, x) {
                return violation(OrderViolation::NotAntisymmetric(x.into(), y.into()));
            }
        }
    }
    for x in 0..n {
        for y in leq.row(x).iter() {
            if !leq.row(y).is_subset(leq.row(x)) {
                let z = leq.row(y).iter().find(|&z| !leq.get(x, z)).unwrap();
                return violation(OrderViolation::NotTransitive(x.into(), y.into(), z.into()));
            }
        }
    }
    Ok(())
}

/// Within `cands`, the element whose row (a down- or up-set) equals `cands`
/// exactly. For down-sets that is the greatest element of `cands`.
fn greatest_of(rows: &BitMatrix, cands: &BitSet) -> Option<ElementId> {
    let best = cands.iter().max_by_key(|&z| rows.row(z).count())?;
    (rows.row(best) == cands).then(|| best.into())
}

/// A validated finite bounded lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    index: HashMap<String, ElementId>,
    up: BitMatrix,
    down: BitMatrix,
    bottom: ElementId,
    top: ElementId,
    meet: Vec<ElementId>,
    join: Vec<ElementId>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice").field("names", &self.names).field("covers", &self.covers()).finish()
    }
}

pub fn validate_lattice(candidate: &Poset) -> Result<FiniteLattice, LatticeError> {
    validate_lattice_with(candidate, Strategy::default())
}

/// Checks the lattice axioms and builds the meet/join tables. All meets are
/// checked before any join, pairs in lexicographic order.
pub fn validate_lattice_with(candidate: &Poset, strategy: Strategy) -> Result<FiniteLattice, LatticeError> {
    let n = candidate.len();
    let mut index = HashMap::with_capacity(n);
    for (i, name) in candidate.names.iter().enumerate() {
        if index.insert(name.clone(), ElementId::from(i)).is_some() {
            return Err(LatticeError::DuplicateName(name.clone()));
        }
    }
    let up = candidate.leq.clone();
    let down = up.transpose();
    let bottom = find_bound(&up, candidate.bottom, Bound::Bottom)?;
    let top = find_bound(&down, candidate.top, Bound::Top)?;

    let meet = op_table(&down, strategy).map_err(|(x, y)| LatticeError::NoMeet(x, y))?;
    let join = op_table(&up, strategy).map_err(|(x, y)| LatticeError::NoJoin(x, y))?;
    Ok(FiniteLattice { names: candidate.names.clone(), index, up, down, bottom, top, meet, join })
}

fn find_bound(rows: &BitMatrix, claimed: Option<ElementId>, which: Bound) -> Result<ElementId, LatticeError> {
    let n = rows.len();
    let is_bound = |b: usize| rows.row(b).count() == n;
    match claimed {
        Some(b) if b.index() < n && is_bound(b.index()) => Ok(b),
        Some(_) => Err(LatticeError::MissingBounds(which)),
        None => (0..n).find(|&b| is_bound(b)).map(ElementId::from).ok_or(LatticeError::MissingBounds(which)),
    }
}

/// Builds an n×n table of "greatest element of rows[x] ∩ rows[y]". With down-sets
/// that is the meet table; with up-sets, the join table.
fn op_table(rows: &BitMatrix, strategy: Strategy) -> Result<Vec<ElementId>, (ElementId, ElementId)> {
    let n = rows.len();
    let per_row = par::map_indices(strategy, n, |x| {
        let mut out = Vec::with_capacity(n);
        for y in 0..n {
            let cands = rows.row(x).intersection(rows.row(y));
            match greatest_of(rows, &cands) {
                Some(z) => out.push(z),
                None => return Err((x.into(), y.into())),
            }
        }
        Ok(out)
    });
    let mut table = Vec::with_capacity(n * n);
    for row in per_row {
        table.extend(row?);
    }
    Ok(table)
}

impl FiniteLattice {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.len()).map(ElementId::from)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: ElementId) -> &str {
        &self.names[x.index()]
    }

    pub fn id_of(&self, name: &str) -> Option<ElementId> {
        self.index.get(name).copied()
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn is_bound(&self, x: ElementId) -> bool {
        x == self.bottom || x == self.top
    }

    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.up.get(x.index(), y.index())
    }

    #[inline]
    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: ElementId, y: ElementId) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    #[inline]
    pub fn meet(&self, x: ElementId, y: ElementId) -> ElementId {
        self.meet[x.index() * self.len() + y.index()]
    }

    #[inline]
    pub fn join(&self, x: ElementId, y: ElementId) -> ElementId {
        self.join[x.index() * self.len() + y.index()]
    }

    /// `{y : x ≤ y}`
    pub fn up_set(&self, x: ElementId) -> &BitSet {
        self.up.row(x.index())
    }

    /// `{y : y ≤ x}`
    pub fn down_set(&self, x: ElementId) -> &BitSet {
        self.down.row(x.index())
    }

    pub fn order(&self) -> &BitMatrix {
        &self.up
    }

    /// Least upper bound of `set`; the empty set has supremum `bottom`.
    pub fn subset_sup(&self, set: &[ElementId]) -> ElementId {
        set.iter().fold(self.bottom, |acc, &x| self.join(acc, x))
    }

    /// Greatest lower bound of `set`; the empty set has infimum `top`.
    pub fn subset_inf(&self, set: &[ElementId]) -> ElementId {
        set.iter().fold(self.top, |acc, &x| self.meet(acc, x))
    }

    /// Same elements, reversed order. Bounds and the two tables swap.
    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice {
            names: self.names.clone(),
            index: self.index.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
            bottom: self.top,
            top: self.bottom,
            meet: self.join.clone(),
            join: self.meet.clone(),
        }
    }

    pub fn to_poset(&self) -> Poset {
        Poset { names: self.names.clone(), leq: self.up.clone(), bottom: Some(self.bottom), top: Some(self.top) }
    }

    /// Hasse diagram edges `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.up_set(x).iter().map(ElementId::from) {
                if x == y {
                    continue;
                }
                let between = self.up_set(x).intersection(self.down_set(y));
                if between.count() == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Length of the longest chain from `bottom` to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&x| self.down_set(x).count());
        let mut height = vec![0usize; self.len()];
        for &(lo, hi) in &self.covers_sorted_by(&order) {
            height[hi.index()] = height[hi.index()].max(height[lo.index()] + 1);
        }
        height
    }

    fn covers_sorted_by(&self, order: &[ElementId]) -> Vec<(ElementId, ElementId)> {
        let rank: Vec<usize> = {
            let mut r = vec![0; self.len()];
            for (i, x) in order.iter().enumerate() {
                r[x.index()] = i;
            }
            r
        };
        let mut covers = self.covers();
        covers.sort_by_key(|&(lo, _)| rank[lo.index()]);
        covers
    }

    /// True if `set` contains both bounds and is closed under meet and join.
    pub fn is_01_sublattice(&self, set: &[ElementId]) -> bool {
        let members = BitSet::from_indices(self.len(), set.iter().map(|x| x.index()));
        members.contains(self.bottom.index())
            && members.contains(self.top.index())
            && set.iter().all(|&x| {
                set.iter()
                    .all(|&y| members.contains(self.meet(x, y).index()) && members.contains(self.join(x, y).index()))
            })
    }

    /// The {0,1}-sublattice generated by `seeds` (closure under meet/join plus bounds).
    pub fn generated_sublattice(&self, seeds: &[ElementId]) -> Vec<ElementId> {
        let mut members = BitSet::new(self.len());
        let mut list = Vec::new();
        let push = |x: ElementId, members: &mut BitSet, list: &mut Vec<ElementId>| {
            if !members.contains(x.index()) {
                members.insert(x.index());
                list.push(x);
            }
        };
        push(self.bottom, &mut members, &mut list);
        push(self.top, &mut members, &mut list);
        for &s in seeds {
            push(s, &mut members, &mut list);
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                let (x, y) = (list[i], list[j]);
                push(self.meet(x, y), &mut members, &mut list);
                push(self.join(x, y), &mut members, &mut list);
            }
            i += 1;
        }
        list.sort();
        list
    }

    /// The induced lattice on a {0,1}-sublattice; element `k` of the result is `set[k]`.
    pub fn induced(&self, set: &[ElementId]) -> Result<FiniteLattice, LatticeError> {
        let names = set.iter().map(|&x| self.name(x).to_string()).collect();
        let leq = BitMatrix::from_fn(set.len(), |i, j| self.leq(set[i], set[j]));
        validate_lattice(&Poset::from_relation(names, leq)?)
    }

    /// Brute-force order isomorphism search. Exponential; intended for |L| ≤ 8.
    pub fn isomorphism_to(&self, other: &FiniteLattice) -> Option<Vec<ElementId>> {
        if self.len() != other.len() {
            return None;
        }
        let sig = |l: &FiniteLattice, x: ElementId| (l.down_set(x).count(), l.up_set(x).count());
        let mut mapping: Vec<Option<ElementId>> = vec![None; self.len()];
        let mut used = vec![false; self.len()];
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&x| self.down_set(x).count());

        fn extend(
            a: &FiniteLattice,
            b: &FiniteLattice,
            order: &[ElementId],
            k: usize,
            mapping: &mut Vec<Option<ElementId>>,
            used: &mut Vec<bool>,
            sig: &dyn Fn(&FiniteLattice, ElementId) -> (usize, usize),
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in b.elements() {
                if used[y.index()] || sig(a, x) != sig(b, y) {
                    continue;
                }
                let consistent = order[..k].iter().all(|&w| {
                    let v = mapping[w.index()].unwrap();
                    a.leq(w, x) == b.leq(v, y) && a.leq(x, w) == b.leq(y, v)
                });
                if !consistent {
                    continue;
                }
                mapping[x.index()] = Some(y);
                used[y.index()] = true;
                if extend(a, b, order, k + 1, mapping, used, sig) {
                    return true;
                }
                mapping[x.index()] = None;
                used[y.index()] = false;
            }
            false
        }

        extend(self, other, &order, 0, &mut mapping, &mut used, &sig)
            .then(|| mapping.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

/// Hands out display names, priming a base name until it is unused.
#[derive(Default)]
pub(crate) struct NameAllocator {
    used: HashSet<String>,
}

impl NameAllocator {
    pub(crate) fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        while self.used.contains(&name) {
            name.push('\'');
        }
        self.used.insert(name.clone());
        name
    }
}

/// Builds and validates a lattice from element names and an order predicate.
pub(crate) fn lattice_from_order(
    names: Vec<String>,
    leq: impl Fn(usize, usize) -> bool,
) -> Result<FiniteLattice, LatticeError> {
    let n = names.len();
    let rel = BitMatrix::from_fn(n, leq);
    validate_lattice(&Poset::from_relation(names, rel)?)
}

/// The chain `0 < 1 < … < n-1`, named by position (`"0"`, `"1"`, …), except
/// that the 3-chain's middle is `"m"` and the bounds of a longer chain are `0`
/// and `1`.
pub fn chain(n: usize) -> FiniteLattice {
    assert!(n >= 1);
    let names = (0..n)
        .map(|i| match (i, n) {
            (0, _) => "0".to_string(),
            (i, n) if i == n - 1 => "1".to_string(),
            (1, 3) => "m".to_string(),
            (i, _) => format!("c{i}"),
        })
        .collect();
    lattice_from_order(names, |i, j| i <= j).expect("chains are lattices")
}
