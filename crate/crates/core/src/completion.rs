//! Dedekind–MacNeille completion of a finite poset.

use std::collections::HashSet;

use crate::bits::BitSet;
use crate::lattice::{lattice_from_order, ElementId, FiniteLattice, NameAllocator, Poset};

/// The lattice of cuts together with the order embedding `x ↦ ↓x`.
#[derive(Clone, Debug)]
pub struct Completion {
    pub lattice: FiniteLattice,
    /// Poset element index → lattice element.
    pub map: Vec<ElementId>,
    /// Lower half `A` of each cut, indexed by lattice element.
    pub cuts: Vec<BitSet>,
}

/// Cuts are the closed down-sets `A = L(U(A))`, which are exactly the
/// intersections of principal down-sets (the empty intersection being the
/// whole poset). They are ordered by inclusion.
///
/// Principal cuts `↓x` keep the name of `x`; the others are named
/// `sup{…}` after their maximal elements.
pub fn dm_completion(poset: &Poset) -> Completion {
    let n = poset.len();
    let down = poset.relation().transpose();

    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut family: Vec<BitSet> = Vec::new();
    let mut push = |s: BitSet, family: &mut Vec<BitSet>| {
        if seen.insert(s.clone()) {
            family.push(s);
        }
    };
    push(BitSet::full(n), &mut family);
    for x in 0..n {
        push(down.row(x).clone(), &mut family);
    }
    let mut i = 0;
    while i < family.len() {
        for j in 0..i {
            let s = family[i].intersection(&family[j]);
            push(s, &mut family);
        }
        i += 1;
    }

    family.sort_by(|a, b| {
        a.count().cmp(&b.count()).then_with(|| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()))
    });

    let principal = |cut: &BitSet| (0..n).find(|&x| down.row(x) == cut);
    let mut alloc = NameAllocator::default();
    // principal names first so they are never primed
    let mut names = vec![String::new(); family.len()];
    for (k, cut) in family.iter().enumerate() {
        if let Some(x) = principal(cut) {
            names[k] = alloc.fresh(&poset.names()[x]);
        }
    }
    for (k, cut) in family.iter().enumerate() {
        if names[k].is_empty() {
            let maximal: Vec<&str> = cut
                .iter()
                .filter(|&x| !cut.iter().any(|y| y != x && poset.relation().get(x, y)))
                .map(|x| poset.names()[x].as_str())
                .collect();
            names[k] = alloc.fresh(&format!("sup{{{}}}", maximal.join(",")));
        }
    }

    let lattice = lattice_from_order(names, |a, b| family[a].is_subset(&family[b]))
        .expect("cuts of a finite poset form a lattice");
    let map = (0..n).map(|x| ElementId::from(family.iter().position(|c| c == down.row(x)).unwrap())).collect();
    Completion { lattice, map, cuts: family }
}
