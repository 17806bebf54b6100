//! Orthocomplemented lattices.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ElementId, FiniteLattice};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OrthoError {
    #[error("perp table has {got} entries, lattice has {expected} elements")]
    TableShape { got: usize, expected: usize },
    #[error("perp maps {0:?} outside the lattice")]
    OutOfRange(ElementId),
    #[error("perp is not an involution at {0:?}")]
    NotInvolution(ElementId),
    #[error("perp does not reverse {0:?} ≤ {1:?}")]
    NotOrderReversing(ElementId, ElementId),
    #[error("complement law fails at {0:?}")]
    ComplementLawFails(ElementId),
}

/// A bounded lattice with a validated orthocomplement table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ortholattice {
    lattice: Arc<FiniteLattice>,
    perp: Vec<ElementId>,
}

/// Checks the involution law for every element, then order reversal for every
/// comparable pair, then `x ∨ x⊥ = 1` and `x ∧ x⊥ = 0`.
pub fn validate_ortho(lattice: Arc<FiniteLattice>, perp: Vec<ElementId>) -> Result<Ortholattice, OrthoError> {
    let n = lattice.len();
    if perp.len() != n {
        return Err(OrthoError::TableShape { got: perp.len(), expected: n });
    }
    if let Some(x) = lattice.elements().find(|x| perp[x.index()].index() >= n) {
        return Err(OrthoError::OutOfRange(x));
    }
    let p = |x: ElementId| perp[x.index()];
    if let Some(x) = lattice.elements().find(|&x| p(p(x)) != x) {
        return Err(OrthoError::NotInvolution(x));
    }
    for x in lattice.elements() {
        for y in lattice.up_set(x).iter().map(ElementId::from) {
            if !lattice.leq(p(y), p(x)) {
                return Err(OrthoError::NotOrderReversing(x, y));
            }
        }
    }
    if let Some(x) = lattice
        .elements()
        .find(|&x| lattice.join(x, p(x)) != lattice.top() || lattice.meet(x, p(x)) != lattice.bottom())
    {
        return Err(OrthoError::ComplementLawFails(x));
    }
    Ok(Ortholattice { lattice, perp })
}

impl Ortholattice {
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    #[inline]
    pub fn perp(&self, x: ElementId) -> ElementId {
        self.perp[x.index()]
    }

    pub fn perp_table(&self) -> &[ElementId] {
        &self.perp
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }
}

/// Read access shared by plain lattices and ortholattices.
pub trait Structure {
    fn lattice(&self) -> &FiniteLattice;
    fn perp_of(&self, x: ElementId) -> Option<ElementId>;
}

impl Structure for FiniteLattice {
    fn lattice(&self) -> &FiniteLattice {
        self
    }

    fn perp_of(&self, _: ElementId) -> Option<ElementId> {
        None
    }
}

impl Structure for Ortholattice {
    fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    fn perp_of(&self, x: ElementId) -> Option<ElementId> {
        Some(self.perp(x))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DeMorganReport {
    pub pairs_checked: usize,
    /// Pairs where `(x∨y)⊥ = x⊥∧y⊥` or `(x∧y)⊥ = x⊥∨y⊥` fails.
    pub failures: Vec<(ElementId, ElementId)>,
}

impl DeMorganReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustive De Morgan check. Always passes on a validated ortholattice;
/// a failure means a table was built wrong.
pub fn check_de_morgan(o: &Ortholattice) -> DeMorganReport {
    let l = o.lattice();
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for x in l.elements() {
        for y in l.elements() {
            pairs_checked += 1;
            let join_ok = o.perp(l.join(x, y)) == l.meet(o.perp(x), o.perp(y));
            let meet_ok = o.perp(l.meet(x, y)) == l.join(o.perp(x), o.perp(y));
            if !(join_ok && meet_ok) {
                failures.push((x, y));
            }
        }
    }
    DeMorganReport { pairs_checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;
    use crate::zoo;

    #[test]
    fn two_chain_swap() {
        let o = validate_ortho(Arc::new(chain(2)), vec![ElementId(1), ElementId(0)]).unwrap();
        assert_eq!(o.perp(ElementId(0)), ElementId(1));
    }

    #[test]
    fn diamond_fixed_atom_fails_complement_law() {
        let b2 = zoo::b2();
        let l = b2.lattice_arc().clone();
        let (a, b) = (l.id_of("a").unwrap(), l.id_of("b").unwrap());
        let mut perp = b2.perp_table().to_vec();
        perp[a.index()] = a;
        perp[b.index()] = b;
        assert_eq!(validate_ortho(l, perp), Err(OrthoError::ComplementLawFails(a)));
    }

    #[test]
    fn other_axiom_failures() {
        let l = Arc::new(chain(3));
        let m = l.id_of("m").unwrap();
        // swaps 0 and m, fixes 1
        let perp = vec![m, ElementId(0), l.top()];
        assert_eq!(validate_ortho(l.clone(), perp), Err(OrthoError::NotOrderReversing(ElementId(0), l.top())));
        let perp = vec![l.top(), l.top(), ElementId(0)];
        assert_eq!(validate_ortho(l.clone(), perp), Err(OrthoError::NotInvolution(m)));
        assert!(matches!(validate_ortho(l, vec![]), Err(OrthoError::TableShape { .. })));
    }

    #[test]
    fn de_morgan_on_zoo() {
        for (name, o) in zoo::ortholattices() {
            let r = check_de_morgan(&o);
            assert!(r.passed(), "{name}");
            assert_eq!(r.pairs_checked, o.len() * o.len());
        }
        assert_eq!(check_de_morgan(&zoo::o6()).pairs_checked, 36);
    }

    #[test]
    fn b2_de_morgan_instance() {
        let o = zoo::b2();
        let l = o.lattice();
        let (a, b) = (l.id_of("a").unwrap(), l.id_of("b").unwrap());
        assert_eq!(o.perp(l.join(a, b)), l.bottom());
        assert_eq!(l.meet(o.perp(a), o.perp(b)), l.bottom());
    }

    #[test]
    fn perp_is_a_dual_isomorphism() {
        for (_, o) in zoo::ortholattices() {
            let l = o.lattice();
            assert_eq!(o.perp(l.bottom()), l.top());
            let dual = l.dual();
            for x in l.elements() {
                for y in l.elements() {
                    assert_eq!(l.leq(x, y), dual.leq(o.perp(x), o.perp(y)));
                }
            }
        }
    }
}
