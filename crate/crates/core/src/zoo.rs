//! Named example lattices and ortholattices.

use std::sync::Arc;

use crate::lattice::{chain, lattice_from_order, ElementId, FiniteLattice};
use crate::ortho::{validate_ortho, Ortholattice};

fn ortho_from(names: &[&str], leq: impl Fn(usize, usize) -> bool, perp: &[usize]) -> Ortholattice {
    let l = lattice_from_order(names.iter().map(|s| s.to_string()).collect(), leq).expect("zoo lattice");
    validate_ortho(Arc::new(l), perp.iter().map(|&i| ElementId::from(i)).collect()).expect("zoo ortholattice")
}

/// `0 < 1`, perp swapping the two.
pub fn two_chain() -> Ortholattice {
    validate_ortho(Arc::new(chain(2)), vec![ElementId(1), ElementId(0)]).unwrap()
}

/// Four-element Boolean algebra `{0, a, b, 1}`.
pub fn b2() -> Ortholattice {
    ortho_from(&["0", "a", "b", "1"], |i, j| i == j || i == 0 || j == 3, &[3, 2, 1, 0])
}

/// Boolean cube; elements are the subsets of `{a, b, c}`.
pub fn b3() -> Ortholattice {
    let names = ["0", "a", "b", "ab", "c", "ac", "bc", "1"];
    ortho_from(&names, |i, j| i & j == i, &[7, 6, 5, 4, 3, 2, 1, 0])
}

/// Horizontal sum of `n` copies of B2: atoms `a, a', b, b', …`.
pub fn mo(n: usize) -> Ortholattice {
    let letters = ["a", "b", "c", "d", "e", "f"];
    assert!((1..=letters.len()).contains(&n));
    let mut names = vec!["0".to_string()];
    for l in &letters[..n] {
        names.push(l.to_string());
        names.push(format!("{l}'"));
    }
    names.push("1".to_string());
    let top = names.len() - 1;
    let mut perp: Vec<usize> = vec![top];
    for k in 0..n {
        perp.push(2 * k + 2);
        perp.push(2 * k + 1);
    }
    perp.push(0);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    ortho_from(&names, |i, j| i == j || i == 0 || j == top, &perp)
}

pub fn mo2() -> Ortholattice {
    mo(2)
}

/// The hexagon (benzene ring): `0 < a < b < 1` and `0 < b' < a' < 1`.
pub fn o6() -> Ortholattice {
    let names = ["0", "a", "b", "b'", "a'", "1"];
    let leq = |i: usize, j: usize| i == j || i == 0 || j == 5 || (i, j) == (1, 2) || (i, j) == (3, 4);
    ortho_from(&names, leq, &[5, 4, 3, 2, 1, 0])
}

/// The ortholattices used across the test-suite, by name.
pub fn ortholattices() -> Vec<(&'static str, Ortholattice)> {
    vec![("2-chain", two_chain()), ("B2", b2()), ("B3", b3()), ("MO2", mo2()), ("O6", o6())]
}

/// `M3` (three atoms) and `N5` (the pentagon), which carry no orthocomplement.
pub fn m3() -> FiniteLattice {
    let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
    lattice_from_order(names, |i, j| i == j || i == 0 || j == 4).unwrap()
}

pub fn n5() -> FiniteLattice {
    // 0 < a < b < 1, 0 < c < 1
    let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
    lattice_from_order(names, |i, j| i == j || i == 0 || j == 4 || (i, j) == (1, 2)).unwrap()
}

/// A zoo entry: either a plain lattice or an ortholattice.
#[derive(Clone, Debug)]
pub enum ZooEntry {
    Lattice(FiniteLattice),
    Ortho(Ortholattice),
}

impl ZooEntry {
    pub fn lattice(&self) -> &FiniteLattice {
        match self {
            ZooEntry::Lattice(l) => l,
            ZooEntry::Ortho(o) => o.lattice(),
        }
    }
}

pub const NAMES: &[&str] = &["2-chain", "3-chain", "4-chain", "B2", "B3", "MO2", "MO3", "O6", "M3", "N5"];

pub fn by_name(name: &str) -> Option<ZooEntry> {
    let entry = match name {
        "2-chain" => ZooEntry::Ortho(two_chain()),
        "B2" => ZooEntry::Ortho(b2()),
        "B3" => ZooEntry::Ortho(b3()),
        "MO2" => ZooEntry::Ortho(mo2()),
        "MO3" => ZooEntry::Ortho(mo(3)),
        "O6" => ZooEntry::Ortho(o6()),
        "M3" => ZooEntry::Lattice(m3()),
        "N5" => ZooEntry::Lattice(n5()),
        other => {
            let n: usize = other.strip_suffix("-chain")?.parse().ok()?;
            if n == 0 {
                return None;
            }
            if n == 2 {
                ZooEntry::Ortho(two_chain())
            } else {
                ZooEntry::Lattice(chain(n))
            }
        }
    };
    Some(entry)
}
