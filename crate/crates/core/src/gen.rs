//! Seeded random instances: lattices, strong extensions, terms and tables.
//!
//! Every generator takes an explicit RNG; use [`rng`] for a reproducible
//! stream from a `u64` seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitMatrix;
use crate::completion::dm_completion;
use crate::construct::{horizontal_sum_ortho, product_ortho};
use crate::interp::FunctionTable;
use crate::lattice::{ElementId, FiniteLattice, Poset};
use crate::morphism::{check_sub01, check_triangle, check_triangle_dual, Embedding};
use crate::ortho::Ortholattice;
use crate::terms::Term;
use crate::zoo;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points, each pair `i < j` related with probability `p`, closed
/// transitively.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Poset {
    let mut rel = BitMatrix::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                rel.set(i, j);
            }
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    Poset::from_relation(names, rel.reflexive_transitive_closure()).expect("closed DAG is a partial order")
}

/// Completion of a random poset on `points` elements, redrawn until it has at
/// most `max_size` elements. `None` after 100 tries.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, points: usize, max_size: usize) -> Option<FiniteLattice> {
    for _ in 0..100 {
        let p = rng.gen_range(0.1..0.6);
        let c = dm_completion(&random_poset(rng, points, p));
        if c.lattice.len() <= max_size {
            return Some(c.lattice);
        }
    }
    None
}

/// A zoo ortholattice, or a horizontal sum or product of two, with at most
/// `max_size` elements.
pub fn random_ortholattice<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> Option<Ortholattice> {
    let zoo: Vec<Ortholattice> = zoo::ortholattices().into_iter().map(|(_, o)| o).collect();
    let fits: Vec<&Ortholattice> = zoo.iter().filter(|o| o.len() <= max_size).collect();
    for _ in 0..100 {
        let a = *fits.choose(rng)?;
        match rng.gen_range(0..3) {
            0 => return Some(a.clone()),
            1 => {
                let b = *fits.choose(rng)?;
                if let Ok(r) = horizontal_sum_ortho(a, b, max_size) {
                    return r.ortho;
                }
            }
            _ => {
                let b = *fits.choose(rng)?;
                if let Ok(r) = product_ortho(a, b, max_size) {
                    return r.ortho;
                }
            }
        }
    }
    None
}

/// A certified strong extension `L0 ⊴ L1` with up to `extra` new points
/// before completion.
///
/// Each new point `u` sits above exactly the principal ideal `↓d_u` of `L0`
/// (for a random `d_u ≠ 1`) and below `1`; new points are related to each
/// other only when their ideals are nested. The completion of that poset
/// is `L1`. Candidates that fail certification or exceed `max_size` are
/// redrawn; `None` after 100 tries.
pub fn random_extension<R: Rng + ?Sized>(
    rng: &mut R,
    l0: &Arc<FiniteLattice>,
    extra: usize,
    max_size: usize,
) -> Option<Embedding> {
    let n0 = l0.len();
    let below_top: Vec<ElementId> = l0.elements().filter(|&x| x != l0.top()).collect();
    for _ in 0..100 {
        let k = rng.gen_range(1..=extra.max(1));
        let d: Vec<ElementId> = (0..k).map(|_| *below_top.choose(rng).unwrap()).collect();
        let mut names: Vec<String> = l0.names().to_vec();
        for i in 0..k {
            let mut name = format!("u{i}");
            while l0.id_of(&name).is_some() {
                name.push('\'');
            }
            names.push(name);
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (x, y) in l0.covers() {
            edges.push((x.index(), y.index()));
        }
        for (i, &di) in d.iter().enumerate() {
            edges.push((di.index(), n0 + i));
            edges.push((n0 + i, l0.top().index()));
            for (j, &dj) in d.iter().enumerate().take(i) {
                if l0.leq(dj, di) && rng.gen_bool(0.3) {
                    edges.push((n0 + j, n0 + i));
                }
            }
        }
        let poset = Poset::from_covers(names, &edges).expect("generated order is acyclic");
        let c = dm_completion(&poset);
        if c.lattice.len() > max_size {
            continue;
        }
        let Ok(e) = Embedding::new(l0.clone(), Arc::new(c.lattice), c.map[..n0].to_vec()) else { continue };
        if let Ok((e, _)) = check_sub01(&e).and_then(|e| check_triangle(&e)) {
            return Some(e);
        }
    }
    None
}

/// A certified dual strong extension `L0 ⊴dual L2`: a strong extension of
/// the dual, dualized back.
pub fn random_dual_extension<R: Rng + ?Sized>(
    rng: &mut R,
    l0: &Arc<FiniteLattice>,
    extra: usize,
    max_size: usize,
) -> Option<Embedding> {
    let dual0 = Arc::new(l0.dual());
    for _ in 0..100 {
        let up = random_extension(rng, &dual0, extra, max_size)?;
        let target = Arc::new(up.target().dual());
        let Ok(e) = Embedding::new(l0.clone(), target, up.map().to_vec()) else { continue };
        if let Ok((e, _)) = check_sub01(&e).and_then(|e| check_triangle_dual(&e)) {
            return Some(e);
        }
    }
    None
}

/// Random term of depth at most `depth` over `x0..x{arity-1}` and the given
/// constants; `perp` allows `^'` nodes.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, depth: usize, arity: u32, constants: &[&str], perp: bool) -> Term {
    let leaf = |rng: &mut R| {
        if constants.is_empty() || arity > 0 && rng.gen_bool(0.7) {
            Term::var(rng.gen_range(0..arity.max(1)))
        } else {
            Term::constant(constants.choose(rng).unwrap())
        }
    };
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let ops = if perp { 3 } else { 2 };
    match rng.gen_range(0..ops) {
        0 => Term::meet(
            random_term(rng, depth - 1, arity, constants, perp),
            random_term(rng, depth - 1, arity, constants, perp),
        ),
        1 => Term::join(
            random_term(rng, depth - 1, arity, constants, perp),
            random_term(rng, depth - 1, arity, constants, perp),
        ),
        _ => Term::perp(random_term(rng, depth - 1, arity, constants, perp)),
    }
}

/// Uniformly random total table `L^arity → L`.
pub fn random_function<R: Rng + ?Sized>(rng: &mut R, l: &FiniteLattice, arity: usize) -> FunctionTable {
    FunctionTable::from_fn_n(l, arity, |_| ElementId::from(rng.gen_range(0..l.len())))
}

/// Uniformly random total unary table.
pub fn random_unary<R: Rng + ?Sized>(rng: &mut R, l: &FiniteLattice) -> FunctionTable {
    random_function(rng, l, 1)
}
