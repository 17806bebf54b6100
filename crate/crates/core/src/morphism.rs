//! Relations between lattices, certified on explicit element maps:
//! {0,1}-sublattice, strong extension (⊴) with its projection, the dual
//! relation, convexity and subortholattice.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;
use crate::lattice::{ElementId, FiniteLattice};
use crate::ortho::Ortholattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Sub01,
    Triangle,
    TriangleDual,
    Convex,
    SubOrtho,
}

impl Relation {
    pub const ALL: [Relation; 5] =
        [Relation::Sub01, Relation::Triangle, Relation::TriangleDual, Relation::Convex, Relation::SubOrtho];
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map has {got} entries, source has {expected} elements")]
    MapShape { got: usize, expected: usize },
    #[error("{0:?} is mapped outside the target")]
    OutOfRange(ElementId),
    #[error("{0:?} and {1:?} have the same image")]
    NotInjective(ElementId, ElementId),
    #[error("map does not preserve {0:?} ∧ {1:?}")]
    NotMeetPreserving(ElementId, ElementId),
    #[error("map does not preserve {0:?} ∨ {1:?}")]
    NotJoinPreserving(ElementId, ElementId),
    #[error("map does not send bounds to bounds")]
    BoundsNotPreserved,
    #[error("embedding is not certified {0:?}")]
    NotCertified(Relation),
    #[error("embeddings do not compose: target and source differ")]
    NotComposable,
    #[error("no greatest image element below target {x:?}; maximal candidates {maximal:?}")]
    NoGreatestBelow { x: ElementId, maximal: Vec<ElementId> },
    #[error("image is not downward closed: target {x:?} lies below the image of {z:?}")]
    NotDownwardClosed { z: ElementId, x: ElementId },
    #[error("no least image element above target {x:?}; minimal candidates {minimal:?}")]
    NoLeastAbove { x: ElementId, minimal: Vec<ElementId> },
    #[error("image is not upward closed: target {x:?} lies above the image of {z:?}")]
    NotUpwardClosed { z: ElementId, x: ElementId },
    #[error("image is not convex: {a:?} ≤ {x:?} ≤ {a2:?} with {x:?} outside")]
    NotConvex { a: ElementId, x: ElementId, a2: ElementId },
    #[error("map does not commute with perp at {0:?}")]
    PerpNotPreserved(ElementId),
    #[error("ortholattice does not carry the embedding's lattice")]
    StructureMismatch,
}

/// An injective element map between two lattices, together with the
/// relations it has been certified for. Certificates only accumulate through
/// the `check_*` functions, each of which returns a new value.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    map: Vec<ElementId>,
    certificates: BTreeSet<Relation>,
}

/// For a strong extension: target element ↦ greatest source element whose
/// image lies below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionTable {
    pub pi: Vec<ElementId>,
}

impl ProjectionTable {
    #[inline]
    pub fn project(&self, x: ElementId) -> ElementId {
        self.pi[x.index()]
    }

    /// `self ∘ outer`: for `L1 ⊴ L2 ⊴ L3`, `π¹₂.after(&π²₃) = π¹₃`.
    pub fn after(&self, outer: &ProjectionTable) -> ProjectionTable {
        ProjectionTable { pi: outer.pi.iter().map(|&y| self.project(y)).collect() }
    }
}

pub(crate) fn same_lattice(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Embedding {
    pub fn new(
        source: Arc<FiniteLattice>,
        target: Arc<FiniteLattice>,
        map: Vec<ElementId>,
    ) -> Result<Self, MorphismError> {
        if map.len() != source.len() {
            return Err(MorphismError::MapShape { got: map.len(), expected: source.len() });
        }
        let mut seen: Vec<Option<ElementId>> = vec![None; target.len()];
        for x in source.elements() {
            let y = map[x.index()];
            if y.index() >= target.len() {
                return Err(MorphismError::OutOfRange(x));
            }
            if let Some(prev) = seen[y.index()] {
                return Err(MorphismError::NotInjective(prev, x));
            }
            seen[y.index()] = Some(x);
        }
        Ok(Embedding { source, target, map, certificates: BTreeSet::new() })
    }

    pub fn identity(l: Arc<FiniteLattice>) -> Self {
        let map = l.elements().collect();
        let mut e = Embedding { source: l.clone(), target: l, map, certificates: BTreeSet::new() };
        e.certificates.extend([Relation::Sub01, Relation::Triangle, Relation::TriangleDual, Relation::Convex]);
        e
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x.index()]
    }

    pub fn map(&self) -> &[ElementId] {
        &self.map
    }

    pub fn certificates(&self) -> &BTreeSet<Relation> {
        &self.certificates
    }

    pub fn is_certified(&self, r: Relation) -> bool {
        self.certificates.contains(&r)
    }

    pub fn require(&self, r: Relation) -> Result<(), MorphismError> {
        if self.is_certified(r) {
            Ok(())
        } else {
            Err(MorphismError::NotCertified(r))
        }
    }

    pub fn image(&self) -> BitSet {
        BitSet::from_indices(self.target.len(), self.map.iter().map(|y| y.index()))
    }

    /// Source element mapped to `y`, if any.
    pub fn preimage(&self, y: ElementId) -> Option<ElementId> {
        self.map.iter().position(|&m| m == y).map(ElementId::from)
    }

    /// `next ∘ self`, uncertified.
    pub fn then(&self, next: &Embedding) -> Result<Embedding, MorphismError> {
        if !same_lattice(&self.target, &next.source) {
            return Err(MorphismError::NotComposable);
        }
        let map = self.map.iter().map(|&y| next.apply(y)).collect();
        Embedding::new(self.source.clone(), next.target.clone(), map)
    }

    fn with(&self, r: Relation) -> Embedding {
        let mut e = self.clone();
        e.certificates.insert(r);
        e
    }

    /// Same map between the dual lattices; Sub01 carries over, nothing else.
    fn dualized(&self) -> Embedding {
        let mut certificates = BTreeSet::new();
        if self.is_certified(Relation::Sub01) {
            certificates.insert(Relation::Sub01);
        }
        Embedding {
            source: Arc::new(self.source.dual()),
            target: Arc::new(self.target.dual()),
            map: self.map.clone(),
            certificates,
        }
    }
}

/// Checks that the map preserves bounds, binary meets and binary joins.
pub fn check_sub01(e: &Embedding) -> Result<Embedding, MorphismError> {
    let (s, t) = (&e.source, &e.target);
    if e.apply(s.bottom()) != t.bottom() || e.apply(s.top()) != t.top() {
        return Err(MorphismError::BoundsNotPreserved);
    }
    for x in s.elements() {
        for y in s.elements() {
            if e.apply(s.meet(x, y)) != t.meet(e.apply(x), e.apply(y)) {
                return Err(MorphismError::NotMeetPreserving(x, y));
            }
        }
    }
    for x in s.elements() {
        for y in s.elements() {
            if e.apply(s.join(x, y)) != t.join(e.apply(x), e.apply(y)) {
                return Err(MorphismError::NotJoinPreserving(x, y));
            }
        }
    }
    Ok(e.with(Relation::Sub01))
}

/// Strong extension check: every target element has a greatest image element
/// below it (the projection), and the image minus the top is downward closed
/// in the target.
pub fn check_triangle(e: &Embedding) -> Result<(Embedding, ProjectionTable), MorphismError> {
    e.require(Relation::Sub01)?;
    let (s, t) = (&e.source, &e.target);
    let mut pi = Vec::with_capacity(t.len());
    for x in t.elements() {
        let below: Vec<ElementId> = s.elements().filter(|&z| t.leq(e.apply(z), x)).collect();
        let candidate = s.subset_sup(&below);
        if !t.leq(e.apply(candidate), x) {
            let maximal = below.iter().copied().filter(|&z| !below.iter().any(|&w| s.lt(z, w))).collect();
            return Err(MorphismError::NoGreatestBelow { x, maximal });
        }
        pi.push(candidate);
    }
    let image = e.image();
    for z in s.elements().filter(|&z| z != s.top()) {
        if let Some(x) = t.down_set(e.apply(z)).iter().find(|&x| !image.contains(x)) {
            return Err(MorphismError::NotDownwardClosed { z, x: x.into() });
        }
    }
    Ok((e.with(Relation::Triangle), ProjectionTable { pi }))
}

/// The dual relation: `check_triangle` on the dual lattices. The returned
/// table sends each target element to the least source element above it.
pub fn check_triangle_dual(e: &Embedding) -> Result<(Embedding, ProjectionTable), MorphismError> {
    e.require(Relation::Sub01)?;
    match check_triangle(&e.dualized()) {
        Ok((_, table)) => Ok((e.with(Relation::TriangleDual), table)),
        Err(MorphismError::NoGreatestBelow { x, maximal }) => Err(MorphismError::NoLeastAbove { x, minimal: maximal }),
        Err(MorphismError::NotDownwardClosed { z, x }) => Err(MorphismError::NotUpwardClosed { z, x }),
        Err(other) => Err(other),
    }
}

/// Convexity with the bounds excluded: whenever `0 < a ≤ x ≤ a' < 1` with
/// `a, a'` in the image, `x` is in the image too.
pub fn check_convex(e: &Embedding) -> Result<Embedding, MorphismError> {
    let t = &e.target;
    let image = e.image();
    let interior: Vec<ElementId> = image.iter().map(ElementId::from).filter(|&a| !t.is_bound(a)).collect();
    for &a in &interior {
        for &a2 in &interior {
            if !t.leq(a, a2) {
                continue;
            }
            let between = t.up_set(a).intersection(t.down_set(a2));
            let outside = between.iter().find(|&x| !image.contains(x));
            if let Some(x) = outside {
                return Err(MorphismError::NotConvex { a, x: x.into(), a2 });
            }
        }
    }
    Ok(e.with(Relation::Convex))
}

/// Checks that the map commutes with the two orthocomplements.
pub fn check_subortholattice(
    e: &Embedding,
    source: &Ortholattice,
    target: &Ortholattice,
) -> Result<Embedding, MorphismError> {
    e.require(Relation::Sub01)?;
    if !same_lattice(source.lattice_arc(), &e.source) || !same_lattice(target.lattice_arc(), &e.target) {
        return Err(MorphismError::StructureMismatch);
    }
    if let Some(x) = e.source.elements().find(|&x| e.apply(source.perp(x)) != target.perp(e.apply(x))) {
        return Err(MorphismError::PerpNotPreserved(x));
    }
    Ok(e.with(Relation::SubOrtho))
}

/// Suprema of a source subset computed in the source and in the target.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SupAgreement {
    pub source_sup: ElementId,
    /// Image of `source_sup` in the target.
    pub source_sup_image: ElementId,
    pub target_sup: ElementId,
    /// `target_sup ≤ image(source_sup)`; always expected.
    pub inequality_holds: bool,
    pub image_convex: bool,
    pub source_sup_below_top: bool,
    /// Convex image and `source_sup < 1`: the two suprema must coincide.
    pub equality_required: bool,
    pub equal: bool,
}

impl SupAgreement {
    pub fn violation(&self) -> bool {
        !self.inequality_holds || (self.equality_required && !self.equal)
    }
}

pub fn sup_agreement(e: &Embedding, set: &[ElementId]) -> Result<SupAgreement, MorphismError> {
    e.require(Relation::Sub01)?;
    let (s, t) = (&e.source, &e.target);
    let source_sup = s.subset_sup(set);
    let image: Vec<ElementId> = set.iter().map(|&x| e.apply(x)).collect();
    let target_sup = t.subset_sup(&image);
    let source_sup_image = e.apply(source_sup);
    let image_convex = check_convex(e).is_ok();
    let source_sup_below_top = source_sup != s.top();
    Ok(SupAgreement {
        source_sup,
        source_sup_image,
        target_sup,
        inequality_holds: t.leq(target_sup, source_sup_image),
        image_convex,
        source_sup_below_top,
        equality_required: image_convex && source_sup_below_top,
        equal: target_sup == source_sup_image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;
    use crate::zoo;

    fn emb(s: &FiniteLattice, t: &FiniteLattice, names: &[(&str, &str)]) -> Embedding {
        let map = s
            .elements()
            .map(|x| {
                let (_, to) = names.iter().find(|(from, _)| *from == s.name(x)).unwrap();
                t.id_of(to).unwrap()
            })
            .collect();
        Embedding::new(Arc::new(s.clone()), Arc::new(t.clone()), map).unwrap()
    }

    #[test]
    fn chain_inclusion_is_strong() {
        let e = emb(&chain(2), &chain(3), &[("0", "0"), ("1", "1")]);
        let e = check_sub01(&e).unwrap();
        let (e, pi) = check_triangle(&e).unwrap();
        assert!(e.is_certified(Relation::Triangle));
        assert_eq!(pi.pi, vec![ElementId(0), ElementId(0), ElementId(1)]);
        assert!(check_triangle_dual(&e).is_ok());
    }

    #[test]
    fn bounds_must_be_preserved() {
        let b3 = zoo::b3();
        let e = emb(&chain(3), b3.lattice(), &[("0", "0"), ("m", "a"), ("1", "ab")]);
        assert_eq!(check_sub01(&e).unwrap_err(), MorphismError::BoundsNotPreserved);
    }

    #[test]
    fn triangle_requires_sub01() {
        let e = emb(&chain(2), &chain(3), &[("0", "0"), ("1", "1")]);
        assert_eq!(check_triangle(&e).unwrap_err(), MorphismError::NotCertified(Relation::Sub01));
    }

    #[test]
    fn b2_in_b3_is_not_downward_closed() {
        let (b2, b3) = (zoo::b2(), zoo::b3());
        let e = emb(b2.lattice(), b3.lattice(), &[("0", "0"), ("a", "a"), ("b", "bc"), ("1", "1")]);
        let e = check_sub01(&e).unwrap();
        let l3 = b3.lattice();
        assert_eq!(
            check_triangle(&e).unwrap_err(),
            MorphismError::NotDownwardClosed { z: b2.lattice().id_of("b").unwrap(), x: l3.id_of("b").unwrap() }
        );
        assert!(matches!(check_triangle_dual(&e), Err(MorphismError::NotUpwardClosed { .. })));
    }

    #[test]
    fn convexity_uses_open_interval() {
        let c5 = chain(5);
        let full = Embedding::identity(Arc::new(c5.clone()));
        assert!(check_convex(&full).is_ok());
        let gap = emb(&chain(4), &c5, &[("0", "0"), ("c1", "c1"), ("c2", "c3"), ("1", "1")]);
        assert_eq!(
            check_convex(&gap).unwrap_err(),
            MorphismError::NotConvex { a: ElementId(1), x: ElementId(2), a2: ElementId(3) }
        );
        let ends = emb(&chain(2), &c5, &[("0", "0"), ("1", "1")]);
        assert!(check_convex(&ends).is_ok());
        let top_gap = emb(&chain(3), &chain(4), &[("0", "0"), ("m", "c2"), ("1", "1")]);
        assert!(check_convex(&top_gap).is_ok());
    }

    #[test]
    fn sup_agreement_examples() {
        let c5 = chain(5);
        let e = emb(&chain(3), &c5, &[("0", "0"), ("m", "c1"), ("1", "1")]);
        let e = check_sub01(&e).unwrap();
        let r = sup_agreement(&e, &[ElementId(0), ElementId(1)]).unwrap();
        assert!(r.equality_required && r.equal && !r.violation());

        let b2 = zoo::b2();
        let e = emb(&chain(3), b2.lattice(), &[("0", "0"), ("m", "a"), ("1", "1")]);
        let e = check_sub01(&e).unwrap();
        let r = sup_agreement(&e, &[ElementId(1)]).unwrap();
        assert_eq!(r.target_sup, b2.lattice().id_of("a").unwrap());
        assert!(r.equal);
    }

    #[test]
    fn projections_compose() {
        let a = Arc::new(chain(2));
        let b = Arc::new(chain(3));
        let c = Arc::new(chain(4));
        let ab = check_sub01(&Embedding::new(a.clone(), b.clone(), vec![ElementId(0), ElementId(2)]).unwrap()).unwrap();
        let bc = check_sub01(&Embedding::new(b, c, vec![ElementId(0), ElementId(1), ElementId(3)]).unwrap()).unwrap();
        let (_, p_ab) = check_triangle(&ab).unwrap();
        let (_, p_bc) = check_triangle(&bc).unwrap();
        let ac = check_sub01(&ab.then(&bc).unwrap()).unwrap();
        let (_, p_ac) = check_triangle(&ac).unwrap();
        assert_eq!(p_ab.after(&p_bc), p_ac);
    }

    #[test]
    fn perp_must_commute() {
        let (b2, b3, mo2) = (zoo::b2(), zoo::b3(), zoo::mo2());
        let e = emb(b2.lattice(), b3.lattice(), &[("0", "0"), ("a", "a"), ("b", "bc"), ("1", "1")]);
        let e = check_sub01(&e).unwrap();
        assert!(check_subortholattice(&e, &b2, &b3).is_ok());
        // a and b are complements in MO2 but not orthocomplements
        let e = emb(b2.lattice(), mo2.lattice(), &[("0", "0"), ("a", "a"), ("b", "b"), ("1", "1")]);
        let e = check_sub01(&e).unwrap();
        assert_eq!(check_subortholattice(&e, &b2, &mo2).unwrap_err(), MorphismError::PerpNotPreserved(ElementId(1)));
        assert_eq!(check_subortholattice(&e, &b2, &b3).unwrap_err(), MorphismError::StructureMismatch);
    }
}
