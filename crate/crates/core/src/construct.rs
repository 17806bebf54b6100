//! Lattice constructions: products, horizontal sums, the glued union of a
//! strong extension and a dual strong extension, the dual copy
//! `dual(L1, L0)`, the ortholattice `ortho(L1, L0)`, power witnesses and
//! unions of finite towers.
//!
//! Every result is re-validated from its order matrix; nothing is trusted
//! incrementally.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitMatrix;
use crate::lattice::{lattice_from_order, ElementId, FiniteLattice, LatticeError, NameAllocator};
use crate::morphism::{
    check_sub01, check_subortholattice, check_triangle, check_triangle_dual, same_lattice, Embedding, MorphismError,
    Relation,
};
use crate::ortho::{validate_ortho, OrthoError, Ortholattice};

pub const DEFAULT_SIZE_CAP: usize = 4096;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("result would have {size} elements, cap is {cap}")]
    SizeLimitExceeded { size: usize, cap: usize },
    #[error("{what} is not certified {relation:?}")]
    PreconditionNotCertified { what: String, relation: Relation },
    #[error("embeddings do not share their source lattice")]
    SourceMismatch,
    #[error("horizontal sums need lattices with 0 ≠ 1")]
    Degenerate,
    #[error("characterized order and transitive closure differ at ({0:?}, {1:?})")]
    OrderMismatch(ElementId, ElementId),
    #[error("meet formula disagrees with the lattice at ({0:?}, {1:?})")]
    MeetMismatch(ElementId, ElementId),
    #[error("join formula disagrees with the lattice at ({0:?}, {1:?})")]
    JoinMismatch(ElementId, ElementId),
    #[error("element set is not a {{0,1}}-sublattice")]
    NotASublattice,
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ortho(#[from] OrthoError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Where an element of a constructed lattice came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ElementOrigin {
    /// An element of the common sublattice `L0`.
    Shared(ElementId),
    /// An element of the left (first) input.
    Left(ElementId),
    /// An element of the right (second) input. In `dual_copy` and `ortho`
    /// results, `Right(k)` is the copy `ι(k)` of the `L1` element `k`.
    Right(ElementId),
    Pair(ElementId, ElementId),
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub lattice: Arc<FiniteLattice>,
    pub ortho: Option<Ortholattice>,
    pub origins: Vec<ElementOrigin>,
    /// Named, certified embeddings of the inputs into `lattice` (or, for
    /// `dual_copy`, of `L0` into the copy).
    pub embeddings: BTreeMap<String, Embedding>,
    /// Other element maps, e.g. `iota` or the product projections.
    pub maps: BTreeMap<String, Vec<ElementId>>,
    /// Transitive closure of the union of the input orders, when the
    /// construction has one.
    pub oracle_order: Option<BitMatrix>,
}

impl ConstructionResult {
    fn new(lattice: FiniteLattice, origins: Vec<ElementOrigin>) -> Self {
        ConstructionResult {
            lattice: Arc::new(lattice),
            ortho: None,
            origins,
            embeddings: BTreeMap::new(),
            maps: BTreeMap::new(),
            oracle_order: None,
        }
    }

    pub fn embedding(&self, name: &str) -> &Embedding {
        self.embeddings.get(name).unwrap_or_else(|| panic!("no embedding named {name}"))
    }

    pub fn map(&self, name: &str) -> &[ElementId] {
        self.maps.get(name).unwrap_or_else(|| panic!("no map named {name}"))
    }

    fn embed(&mut self, name: &str, e: Embedding) {
        self.embeddings.insert(name.to_string(), e);
    }
}

fn check_cap(size: usize, cap: usize) -> Result<(), ConstructError> {
    if size > cap {
        Err(ConstructError::SizeLimitExceeded { size, cap })
    } else {
        Ok(())
    }
}

fn require(e: &Embedding, what: &str, relation: Relation) -> Result<(), ConstructError> {
    if e.is_certified(relation) {
        Ok(())
    } else {
        Err(ConstructError::PreconditionNotCertified { what: what.to_string(), relation })
    }
}

/// Componentwise product. Element `(i, j)` has index `i * |b| + j` and name `(a_i,b_j)`.
pub fn product(a: &FiniteLattice, b: &FiniteLattice, cap: usize) -> Result<ConstructionResult, ConstructError> {
    let (na, nb) = (a.len(), b.len());
    check_cap(na * nb, cap)?;
    let mut alloc = NameAllocator::default();
    let mut names = Vec::with_capacity(na * nb);
    let mut origins = Vec::with_capacity(na * nb);
    for x in a.elements() {
        for y in b.elements() {
            names.push(alloc.fresh(&format!("({},{})", a.name(x), b.name(y))));
            origins.push(ElementOrigin::Pair(x, y));
        }
    }
    let lattice = lattice_from_order(names, |u, v| {
        a.leq((u / nb).into(), (v / nb).into()) && b.leq((u % nb).into(), (v % nb).into())
    })?;
    let mut out = ConstructionResult::new(lattice, origins);
    out.maps.insert("pi1".into(), (0..na * nb).map(|u| ElementId::from(u / nb)).collect());
    out.maps.insert("pi2".into(), (0..na * nb).map(|u| ElementId::from(u % nb)).collect());
    Ok(out)
}

/// Product of ortholattices with the componentwise orthocomplement.
pub fn product_ortho(a: &Ortholattice, b: &Ortholattice, cap: usize) -> Result<ConstructionResult, ConstructError> {
    let mut out = product(a.lattice(), b.lattice(), cap)?;
    let nb = b.len();
    let perp = out
        .origins
        .iter()
        .map(|o| match *o {
            ElementOrigin::Pair(x, y) => ElementId::from(a.perp(x).index() * nb + b.perp(y).index()),
            _ => unreachable!(),
        })
        .collect();
    out.ortho = Some(validate_ortho(out.lattice.clone(), perp)?);
    Ok(out)
}

/// Glue `a` and `b` at their bounds, interiors pairwise incomparable.
/// Elements of `a` keep their ids; the interior of `b` follows. Emits the
/// embeddings `left` (certified ⊴) and `right` (certified {0,1}).
pub fn horizontal_sum(a: &FiniteLattice, b: &FiniteLattice, cap: usize) -> Result<ConstructionResult, ConstructError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(ConstructError::Degenerate);
    }
    let size = a.len() + b.len() - 2;
    check_cap(size, cap)?;
    let b_interior: Vec<ElementId> = b.elements().filter(|&y| !b.is_bound(y)).collect();
    // b element -> position in the sum
    let mut b_pos = vec![ElementId(0); b.len()];
    b_pos[b.bottom().index()] = a.bottom();
    b_pos[b.top().index()] = a.top();
    for (k, &y) in b_interior.iter().enumerate() {
        b_pos[y.index()] = ElementId::from(a.len() + k);
    }

    let mut alloc = NameAllocator::default();
    let mut names: Vec<String> = a.names().iter().map(|n| alloc.fresh(n)).collect();
    names.extend(b_interior.iter().map(|&y| alloc.fresh(b.name(y))));
    let mut origins: Vec<ElementOrigin> = a.elements().map(ElementOrigin::Left).collect();
    origins.extend(b_interior.iter().map(|&y| ElementOrigin::Right(y)));

    let na = a.len();
    let b_of = |u: usize| -> Option<ElementId> {
        if u >= na {
            Some(b_interior[u - na])
        } else if u == a.bottom().index() {
            Some(b.bottom())
        } else if u == a.top().index() {
            Some(b.top())
        } else {
            None
        }
    };
    let lattice = lattice_from_order(names, |u, v| {
        if u < na && v < na {
            return a.leq(u.into(), v.into());
        }
        match (b_of(u), b_of(v)) {
            (Some(x), Some(y)) => b.leq(x, y),
            _ => false,
        }
    })?;
    let mut out = ConstructionResult::new(lattice, origins);
    let left = Embedding::new(Arc::new(a.clone()), out.lattice.clone(), a.elements().collect())?;
    let (left, _) = check_triangle(&check_sub01(&left)?)?;
    let right = check_sub01(&Embedding::new(Arc::new(b.clone()), out.lattice.clone(), b_pos)?)?;
    out.embed("left", left);
    out.embed("right", right);
    Ok(out)
}

/// Horizontal sum of ortholattices; each block keeps its own orthocomplement.
pub fn horizontal_sum_ortho(
    a: &Ortholattice,
    b: &Ortholattice,
    cap: usize,
) -> Result<ConstructionResult, ConstructError> {
    let mut out = horizontal_sum(a.lattice(), b.lattice(), cap)?;
    let right = out.embedding("right").clone();
    let left_ortho = Embedding::new(a.lattice_arc().clone(), out.lattice.clone(), a.lattice().elements().collect())?;
    let mut perp = vec![ElementId(0); out.lattice.len()];
    for x in a.lattice().elements() {
        perp[x.index()] = a.perp(x);
    }
    for y in b.lattice().elements() {
        perp[right.apply(y).index()] = right.apply(b.perp(y));
    }
    let o = validate_ortho(out.lattice.clone(), perp)?;
    let right = check_subortholattice(&right, b, &o)?;
    let left = check_subortholattice(&check_sub01(&left_ortho)?, a, &o)?;
    let (left, _) = check_triangle(&left)?;
    out.embed("left", left);
    out.embed("right", right);
    out.ortho = Some(o);
    Ok(out)
}

/// The glued union `L1 ∪ L2` for `L0 ⊴ L1` (via `e1`) and `L0 ⊴dual L2`
/// (via `e2`), with `L1 ∩ L2 = L0` realized by identifying `e1(z)` with
/// `e2(z)`.
///
/// Elements of `L1` keep their ids, the rest of `L2` follows. The order is
/// built from the three-case characterization (`x ≤₁ y`, `x ≤₂ y`, or
/// `x ≤₂ z ≤₁ y` for some `z ∈ L0`) and must coincide with the transitive
/// closure of `≤₁ ∪ ≤₂`, computed independently; the meet and join formulas
/// (`π(x) ∧₂ y` across the halves, dually for joins) are checked against the
/// validated tables.
pub fn glued_union(e1: &Embedding, e2: &Embedding, cap: usize) -> Result<ConstructionResult, ConstructError> {
    require(e1, "L0 → L1", Relation::Triangle)?;
    require(e2, "L0 → L2", Relation::TriangleDual)?;
    if !same_lattice(e1.source(), e2.source()) {
        return Err(ConstructError::SourceMismatch);
    }
    let (l0, l1, l2) = (e1.source().clone(), e1.target().clone(), e2.target().clone());
    let size = l1.len() + l2.len() - l0.len();
    check_cap(size, cap)?;
    let (_, pi1) = check_triangle(e1)?;
    let (_, rho2) = check_triangle_dual(e2)?;

    let n1 = l1.len();
    // position of each L2 element in the union, and the inverse maps
    let mut pos2 = vec![ElementId(0); l2.len()];
    let mut shared_of2: Vec<Option<ElementId>> = vec![None; l2.len()];
    for z in l0.elements() {
        shared_of2[e2.apply(z).index()] = Some(z);
    }
    let mut l2_only = Vec::new();
    for y in l2.elements() {
        pos2[y.index()] = match shared_of2[y.index()] {
            Some(z) => e1.apply(z),
            None => {
                l2_only.push(y);
                ElementId::from(n1 + l2_only.len() - 1)
            }
        };
    }
    let mut in_l2: Vec<Option<ElementId>> = vec![None; size];
    for y in l2.elements() {
        in_l2[pos2[y.index()].index()] = Some(y);
    }
    let in_l1 = |u: usize| (u < n1).then(|| ElementId::from(u));

    let mut shared_of1: Vec<Option<ElementId>> = vec![None; n1];
    for z in l0.elements() {
        shared_of1[e1.apply(z).index()] = Some(z);
    }
    let mut origins = Vec::with_capacity(size);
    for x in l1.elements() {
        origins.push(match shared_of1[x.index()] {
            Some(z) => ElementOrigin::Shared(z),
            None => ElementOrigin::Left(x),
        });
    }
    origins.extend(l2_only.iter().map(|&y| ElementOrigin::Right(y)));

    let mut alloc = NameAllocator::default();
    let mut names = vec![String::new(); size];
    for (u, o) in origins.iter().enumerate() {
        if let ElementOrigin::Shared(z) = o {
            names[u] = alloc.fresh(l0.name(*z));
        }
    }
    for (u, o) in origins.iter().enumerate() {
        match o {
            ElementOrigin::Left(x) => names[u] = alloc.fresh(l1.name(*x)),
            ElementOrigin::Right(y) => names[u] = alloc.fresh(l2.name(*y)),
            _ => {}
        }
    }

    let characterized = BitMatrix::from_fn(size, |u, v| {
        if let (Some(x), Some(y)) = (in_l1(u), in_l1(v)) {
            if l1.leq(x, y) {
                return true;
            }
        }
        if let (Some(x), Some(y)) = (in_l2[u], in_l2[v]) {
            if l2.leq(x, y) {
                return true;
            }
        }
        match (in_l2[u], in_l1(v)) {
            (Some(x), Some(y)) => l0.elements().any(|z| l2.leq(x, e2.apply(z)) && l1.leq(e1.apply(z), y)),
            _ => false,
        }
    });

    let mut generating = BitMatrix::new(size);
    for x in l1.elements() {
        for y in l1.up_set(x).iter() {
            generating.set(x.index(), y);
        }
    }
    for x in l2.elements() {
        for y in l2.up_set(x).iter() {
            generating.set(pos2[x.index()].index(), pos2[y].index());
        }
    }
    let oracle = generating.reflexive_transitive_closure();
    if let Some((u, v)) = characterized.first_difference(&oracle) {
        return Err(ConstructError::OrderMismatch(u.into(), v.into()));
    }

    let lattice = lattice_from_order(names, |u, v| characterized.get(u, v))?;

    let p1 = |x: ElementId| x;
    let p2 = |y: ElementId| pos2[y.index()];
    let meet_formula = |u: usize, v: usize| -> ElementId {
        match (in_l1(u), in_l1(v), in_l2[u], in_l2[v]) {
            (Some(x), Some(y), _, _) => p1(l1.meet(x, y)),
            (_, _, Some(x), Some(y)) => p2(l2.meet(x, y)),
            (Some(x), None, _, Some(y)) => p2(l2.meet(e2.apply(pi1.project(x)), y)),
            (None, Some(y), Some(x), _) => p2(l2.meet(x, e2.apply(pi1.project(y)))),
            _ => unreachable!("every element lies in L1 or L2"),
        }
    };
    let join_formula = |u: usize, v: usize| -> ElementId {
        match (in_l1(u), in_l1(v), in_l2[u], in_l2[v]) {
            (Some(x), Some(y), _, _) => p1(l1.join(x, y)),
            (_, _, Some(x), Some(y)) => p2(l2.join(x, y)),
            (Some(x), None, _, Some(y)) => p1(l1.join(x, e1.apply(rho2.project(y)))),
            (None, Some(y), Some(x), _) => p1(l1.join(e1.apply(rho2.project(x)), y)),
            _ => unreachable!("every element lies in L1 or L2"),
        }
    };
    for u in lattice.elements() {
        for v in lattice.elements() {
            if meet_formula(u.index(), v.index()) != lattice.meet(u, v) {
                return Err(ConstructError::MeetMismatch(u, v));
            }
            if join_formula(u.index(), v.index()) != lattice.join(u, v) {
                return Err(ConstructError::JoinMismatch(u, v));
            }
        }
    }

    let mut out = ConstructionResult::new(lattice, origins);
    out.oracle_order = Some(oracle);
    let target = out.lattice.clone();
    let into_l1 = check_sub01(&Embedding::new(l1.clone(), target.clone(), l1.elements().collect())?)?;
    let into_l2 = check_sub01(&Embedding::new(l2.clone(), target.clone(), pos2)?)?;
    let into_l0 = check_sub01(&Embedding::new(l0.clone(), target, l0.elements().map(|z| e1.apply(z)).collect())?)?;
    out.embed("L1", into_l1);
    out.embed("L2", into_l2);
    out.embed("L0", into_l0);
    Ok(out)
}

fn require_ortho_base(e: &Embedding, o0: &Ortholattice) -> Result<(), ConstructError> {
    require(e, "L0 → L1", Relation::Triangle)?;
    if !same_lattice(o0.lattice_arc(), e.source()) {
        return Err(ConstructError::SourceMismatch);
    }
    Ok(())
}

/// `dual(L1, L0)`: element `k` of the result is `ι(k)` for the `L1` element
/// `k`, ordered by `ι(x) ≤ ι(y) ⇔ y ≤₁ x`, with `ι(z) = z⊥` on `L0`. Emits
/// the embedding `L0` (certified ⊴dual) and the map `iota`.
pub fn dual_copy(e: &Embedding, o0: &Ortholattice) -> Result<ConstructionResult, ConstructError> {
    require_ortho_base(e, o0)?;
    let (l0, l1) = (e.source(), e.target());
    let mut shared: Vec<Option<ElementId>> = vec![None; l1.len()];
    for z in l0.elements() {
        // ι(e(z)) is the L0 element z⊥
        shared[e.apply(z).index()] = Some(o0.perp(z));
    }
    let mut alloc = NameAllocator::default();
    let mut names = vec![String::new(); l1.len()];
    for k in l1.elements() {
        if let Some(z) = shared[k.index()] {
            names[k.index()] = alloc.fresh(l0.name(z));
        }
    }
    for k in l1.elements() {
        if shared[k.index()].is_none() {
            names[k.index()] = alloc.fresh(&format!("{}'", l1.name(k)));
        }
    }
    let origins = l1
        .elements()
        .map(|k| match shared[k.index()] {
            Some(z) => ElementOrigin::Shared(z),
            None => ElementOrigin::Right(k),
        })
        .collect();
    let lattice = lattice_from_order(names, |u, v| l1.leq(v.into(), u.into()))?;
    let mut out = ConstructionResult::new(lattice, origins);
    let map = l0.elements().map(|z| e.apply(o0.perp(z))).collect();
    let into = check_sub01(&Embedding::new(l0.clone(), out.lattice.clone(), map)?)?;
    let (into, _) = check_triangle_dual(&into)?;
    out.embed("L0", into);
    out.maps.insert("iota".into(), l1.elements().collect());
    Ok(out)
}

/// `ortho(L1, L0)`: the glued union of `L1` and `dual(L1, L0)`, with
/// orthocomplement `ι` on `L1` and `ι⁻¹` on the copy. `L1` elements keep
/// their ids. Emits embeddings `L0` (certified SubOrtho), `L1`, `L2` and the
/// map `iota: L1 → L`.
pub fn ortho_construction(e: &Embedding, o0: &Ortholattice, cap: usize) -> Result<ConstructionResult, ConstructError> {
    require_ortho_base(e, o0)?;
    let copy = dual_copy(e, o0)?;
    let glued = glued_union(e, copy.embedding("L0"), cap)?;
    let l1 = e.target();
    let into_l2 = glued.embedding("L2").clone();
    let n = glued.lattice.len();
    let mut perp = vec![ElementId(0); n];
    for k in l1.elements() {
        let image = into_l2.apply(k);
        perp[k.index()] = image;
        perp[image.index()] = k;
    }
    let o = validate_ortho(glued.lattice.clone(), perp)?;
    let into_l0 = check_subortholattice(glued.embedding("L0"), o0, &o)?;

    // L2 ids coincide with L1 ids (element k of the copy is ι(k)), so the
    // glued union's Right(k) origins already name ι(k).
    let origins = glued.origins.clone();
    let iota = l1.elements().map(|k| into_l2.apply(k)).collect();
    let mut out = ConstructionResult {
        lattice: glued.lattice.clone(),
        ortho: Some(o),
        origins,
        embeddings: BTreeMap::new(),
        maps: BTreeMap::new(),
        oracle_order: glued.oracle_order.clone(),
    };
    out.embed("L0", into_l0);
    out.embed("L1", glued.embedding("L1").clone());
    out.embed("L2", into_l2);
    out.maps.insert("iota".into(), iota);
    Ok(out)
}

/// A copy of `Sⁿ` inside an extension of the ambient structure.
#[derive(Clone, Debug)]
pub struct PowerWitness {
    pub arity: usize,
    /// `S` as a list of ambient elements; coordinates index into this list.
    pub subset: Vec<ElementId>,
    /// `Sⁿ` as n-tuples, index = mixed radix over `|S|`, first coordinate most significant.
    pub power: Arc<FiniteLattice>,
    /// The extension `hsum(L, S^(2^k))` and its embeddings.
    pub ambient: ConstructionResult,
    /// `L → ambient`, certified ⊴.
    pub base: Embedding,
    /// `Sⁿ → ambient`, certified {0,1}.
    pub iota: Embedding,
}

impl PowerWitness {
    /// `ι(s₁, …, sₙ)` for coordinates given as indices into `subset`.
    pub fn iota_of(&self, coords: &[usize]) -> ElementId {
        let s = self.subset.len();
        let idx = coords.iter().fold(0, |acc, &c| acc * s + c);
        self.iota.apply(idx.into())
    }

    /// `ι_ℓ(s) = ι(0, …, s, …, 0)` with `s` in coordinate `ell`.
    pub fn coordinate(&self, ell: usize, s: usize) -> ElementId {
        let bottom = self.subset.iter().position(|&x| x == self.base.source().bottom()).unwrap();
        let mut coords = vec![bottom; self.arity];
        coords[ell] = s;
        self.iota_of(&coords)
    }

    pub fn ambient_ortho(&self) -> Option<&Ortholattice> {
        self.ambient.ortho.as_ref()
    }
}

/// n-fold componentwise power of a lattice, elements named `(s1,…,sn)`.
pub fn power_lattice(s: &FiniteLattice, n: usize, cap: usize) -> Result<FiniteLattice, ConstructError> {
    if n == 0 {
        return Err(ConstructError::ZeroArity);
    }
    let size = s.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    check_cap(size, cap)?;
    let k = s.len();
    let digits = |mut u: usize| {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = u % k;
            u /= k;
        }
        d
    };
    let names = (0..size)
        .map(|u| {
            let parts: Vec<&str> = digits(u).into_iter().map(|c| s.name(c.into())).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(lattice_from_order(names, |u, v| digits(u).into_iter().zip(digits(v)).all(|(a, b)| s.leq(a.into(), b.into())))?)
}

/// Builds `hsum(L, S^(2^k))` with `2^k ≥ n` by iterated squaring and embeds
/// `Sⁿ` into it, padding tuples by repeating the last coordinate. When `o`
/// carries an orthocomplement, `S` must be closed under it and the ambient is
/// an ortholattice.
pub fn power_witness(
    base: &Arc<FiniteLattice>,
    perp: Option<&Ortholattice>,
    subset: &[ElementId],
    n: usize,
    cap: usize,
) -> Result<PowerWitness, ConstructError> {
    if n == 0 {
        return Err(ConstructError::ZeroArity);
    }
    let mut subset = subset.to_vec();
    subset.sort();
    subset.dedup();
    if !base.is_01_sublattice(&subset) {
        return Err(ConstructError::NotASublattice);
    }
    if let Some(o) = perp {
        if subset.iter().any(|&x| subset.binary_search(&o.perp(x)).is_err()) {
            return Err(ConstructError::NotASublattice);
        }
    }
    let s_lattice = base.induced(&subset)?;
    let s_ortho = match perp {
        Some(o) => {
            let table = subset.iter().map(|&x| ElementId::from(subset.binary_search(&o.perp(x)).unwrap())).collect();
            Some(validate_ortho(Arc::new(s_lattice.clone()), table)?)
        }
        None => None,
    };
    let mut width = 1usize;
    while width < n {
        width *= 2;
    }
    let total = s_lattice.len().checked_pow(width as u32).unwrap_or(usize::MAX);
    check_cap(total, cap)?;
    // iterated squaring; index of a width-tuple is mixed radix over |S|
    let mut current_l = s_lattice.clone();
    let mut current_o = s_ortho.clone();
    let mut w = 1;
    while w < width {
        let square = match &current_o {
            Some(o) => product_ortho(o, o, cap)?,
            None => product(&current_l, &current_l, cap)?,
        };
        current_l = (*square.lattice).clone();
        current_o = square.ortho.clone();
        w *= 2;
    }
    let ambient = match (perp, &current_o) {
        (Some(o), Some(p)) => horizontal_sum_ortho(o, p, cap)?,
        _ => horizontal_sum(base, &current_l, cap)?,
    };
    let into_block = ambient.embedding("right").clone();
    let base_emb = ambient.embedding("left").clone();

    let power = Arc::new(power_lattice(&s_lattice, n, cap)?);
    let k = s_lattice.len();
    let map = power
        .elements()
        .map(|u| {
            let mut coords = vec![0usize; n];
            let mut rest = u.index();
            for slot in coords.iter_mut().rev() {
                *slot = rest % k;
                rest /= k;
            }
            let last = coords[n - 1];
            coords.resize(width, last);
            let idx = coords.iter().fold(0, |acc, &c| acc * k + c);
            into_block.apply(idx.into())
        })
        .collect();
    let iota = check_sub01(&Embedding::new(power.clone(), ambient.lattice.clone(), map)?)?;
    Ok(PowerWitness { arity: n, subset, power, ambient, base: base_emb, iota })
}

/// Union of a finite tower `L_0 → L_1 → … → L_m`: the last lattice, with
/// the composed embeddings `stage{i}: L_i → L_m` certified {0,1}, and ⊴ as
/// well when every step is.
pub fn chain_union(base: &Arc<FiniteLattice>, steps: &[Embedding]) -> Result<ConstructionResult, ConstructError> {
    let mut current = Embedding::identity(base.clone());
    let all_triangle = steps.iter().all(|s| s.is_certified(Relation::Triangle));
    for (i, step) in steps.iter().enumerate() {
        require(step, &format!("step {i}"), Relation::Sub01)?;
        current = current.then(step)?;
    }
    let top = current.target().clone();
    let mut out = ConstructionResult::new((*top).clone(), top.elements().map(ElementOrigin::Left).collect());
    out.lattice = top;
    // stage i → last, composed from step i onwards
    for i in 0..=steps.len() {
        let mut e = Embedding::identity(if i == 0 { base.clone() } else { steps[i - 1].target().clone() });
        for step in &steps[i..] {
            e = e.then(step)?;
        }
        let mut e = check_sub01(&e)?;
        if all_triangle {
            e = check_triangle(&e)?.0;
        }
        out.embed(&format!("stage{i}"), e);
    }
    Ok(out)
}

/// `ortho(L_i, L0)` for every stage of a ⊴-tower over `L0`, with the
/// induced maps into `ortho(L_m, L0)`.
#[derive(Clone, Debug)]
pub struct OrthoTower {
    pub stages: Vec<ConstructionResult>,
    /// `ortho(L_i, L0) → ortho(L_m, L0)`, certified {0,1} and SubOrtho.
    pub induced: Vec<Embedding>,
    /// Induced maps compose: `i → m` equals `i+1 → m` after `i → i+1`.
    pub compatible: bool,
}

/// Applies `ortho(·, L0)` along a tower and checks it commutes with taking
/// the union: each stage maps into the last one as a subortholattice via
/// `x ↦ x` on `L_i` and `ι_i(x) ↦ ι_m(x)` on the copy.
pub fn ortho_tower(
    o0: &Ortholattice,
    anchor: &Embedding,
    steps: &[Embedding],
    cap: usize,
) -> Result<OrthoTower, ConstructError> {
    let union = chain_union(anchor.target(), steps)?;
    let mut stages = Vec::new();
    let mut to_last = Vec::new();
    for i in 0..=steps.len() {
        let stage_to_last = union.embedding(&format!("stage{i}")).clone();
        let l0_to_stage = {
            let mut e = anchor.clone();
            for step in &steps[..i] {
                e = e.then(step)?;
            }
            check_triangle(&check_sub01(&e)?)?.0
        };
        stages.push(ortho_construction(&l0_to_stage, o0, cap)?);
        to_last.push(stage_to_last);
    }
    let last = stages.last().unwrap();
    let last_o = last.ortho.as_ref().unwrap();
    let mut induced = Vec::new();
    for (stage, into) in stages.iter().zip(&to_last) {
        let n_li = into.source().len();
        let map = stage
            .origins
            .iter()
            .enumerate()
            .map(|(u, o)| match *o {
                ElementOrigin::Right(k) => last_o.perp(into.apply(k)),
                _ => {
                    debug_assert!(u < n_li);
                    into.apply(u.into())
                }
            })
            .collect();
        let e = Embedding::new(stage.lattice.clone(), last.lattice.clone(), map)?;
        let e = check_subortholattice(&check_sub01(&e)?, stage.ortho.as_ref().unwrap(), last_o)?;
        induced.push(e);
    }
    let mut compatible = true;
    for i in 0..steps.len() {
        let step = &steps[i];
        let next_o = stages[i + 1].ortho.as_ref().unwrap();
        let map: Vec<ElementId> = stages[i]
            .origins
            .iter()
            .enumerate()
            .map(|(u, o)| match *o {
                ElementOrigin::Right(k) => next_o.perp(step.apply(k)),
                _ => step.apply(u.into()),
            })
            .collect();
        let via: Vec<ElementId> = map.iter().map(|&y| induced[i + 1].apply(y)).collect();
        compatible &= via == induced[i].map();
    }
    Ok(OrthoTower { stages, induced, compatible })
}
