//! n-ary interpolation through a copy of `Sⁿ`.
//!
//! With `S` the sub(ortho)lattice generated by the coordinates of the
//! domain `A` of `g`, and `ι: Sⁿ → S'` a {0,1}-embedding into an extension,
//! `ι(s₁, …, sₙ) = ι₁(s₁) ∨ ⋯ ∨ ιₙ(sₙ)` where `ι_ℓ` places `s` in
//! coordinate `ℓ`. The unary `f(ι(s)) = g(s)` and each `ι_ℓ` are
//! interpolated separately and combined as `p(q₁(x₀) ∨ ⋯ ∨ qₙ(xₙ₋₁))`.

use std::sync::Arc;

use thiserror::Error;

use super::closure::{interpolate_or_synthesize, ClosureError, ClosureOptions, Interpolation};
use super::pipeline::DEFAULT_SEARCH_BUDGET;
use super::{FunctionTable, Mode, TableError};
use crate::construct::{power_witness, ConstructError, PowerWitness, DEFAULT_SIZE_CAP};
use crate::lattice::{ElementId, FiniteLattice};
use crate::ortho::{Ortholattice, Structure};
use crate::par::Strategy;
use crate::terms::{eval, Term};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NaryError {
    #[error("generated sublattice has {size} elements, cap is {cap}")]
    GenerationTooLarge { size: usize, cap: usize },
    #[error("table is over a lattice with {got} elements, expected {expected}")]
    WrongLattice { got: usize, expected: usize },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("assembled term disagrees with g at {0:?}")]
    VerificationFailed(Vec<ElementId>),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

#[derive(Clone, Copy, Debug)]
pub struct NaryOptions {
    /// Largest generated `S`.
    pub generation_cap: usize,
    pub size_cap: usize,
    pub budget: usize,
    pub strategy: Strategy,
}

impl Default for NaryOptions {
    fn default() -> Self {
        NaryOptions {
            generation_cap: 64,
            size_cap: DEFAULT_SIZE_CAP,
            budget: DEFAULT_SEARCH_BUDGET,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NaryReduction {
    pub result: Interpolation,
    /// Absent for `n = 1`, which interpolates directly over the base.
    pub power: Option<PowerWitness>,
    /// The unary `f` on the ambient lattice.
    pub f: Option<FunctionTable>,
    pub p: Option<Term>,
    /// Witnesses for `ι₁, …, ιₙ`.
    pub coordinates: Vec<Term>,
    /// `ι(s) = ι₁(s₁) ∨ ⋯ ∨ ιₙ(sₙ)` on all of `Sⁿ`.
    pub identity_holds: bool,
}

impl NaryReduction {
    /// The structure the result term is evaluated in.
    pub fn ambient(&self) -> Option<&Arc<FiniteLattice>> {
        self.power.as_ref().map(|p| &p.ambient.lattice)
    }
}

/// The sub(ortho)lattice generated by `seeds` together with the bounds.
pub fn generated(l: &FiniteLattice, ortho: Option<&Ortholattice>, seeds: &[ElementId]) -> Vec<ElementId> {
    let mut s: Vec<ElementId> = seeds.iter().copied().chain([l.bottom(), l.top()]).collect();
    loop {
        s = l.generated_sublattice(&s);
        let Some(o) = ortho else { return s };
        let before = s.len();
        let perps: Vec<ElementId> = s.iter().map(|&x| o.perp(x)).collect();
        s.extend(perps);
        s.sort();
        s.dedup();
        if s.len() == before {
            return s;
        }
    }
}

fn structure<'a>(l: &'a FiniteLattice, o: Option<&'a Ortholattice>) -> &'a dyn Structure {
    match o {
        Some(o) => o,
        None => l,
    }
}

/// Interpolates the n-ary partial `g` over an extension of `base` carrying a
/// copy of `Sⁿ`. With `ortho` the polynomials may use ⊥.
pub fn nary_reduce(
    base: &Arc<FiniteLattice>,
    ortho: Option<&Ortholattice>,
    g: &FunctionTable,
    opts: &NaryOptions,
) -> Result<NaryReduction, NaryError> {
    if g.size() != base.len() {
        return Err(NaryError::WrongLattice { got: g.size(), expected: base.len() });
    }
    let n = g.arity();
    if n == 0 {
        return Err(NaryError::ZeroArity);
    }
    let mode = if ortho.is_some() { Mode::Ortho } else { Mode::LatticeOnly };
    let copts = ClosureOptions::new(mode).budget(opts.budget).strategy(opts.strategy);
    if n == 1 {
        let result = interpolate_or_synthesize(structure(base, ortho), &[g], &copts)?.pop().unwrap();
        return Ok(NaryReduction {
            p: result.term().cloned(),
            result,
            power: None,
            f: None,
            coordinates: vec![Term::var(0)],
            identity_holds: true,
        });
    }

    let seeds: Vec<ElementId> = g.entries().flat_map(|(k, _)| k.to_vec()).collect();
    let s = generated(base, ortho, &seeds);
    if s.len() > opts.generation_cap {
        return Err(NaryError::GenerationTooLarge { size: s.len(), cap: opts.generation_cap });
    }
    let pw = power_witness(base, ortho, &s, n, opts.size_cap)?;
    let amb = pw.ambient.lattice.clone();
    let amb_o = pw.ambient.ortho.as_ref();
    let pos = |x: ElementId| pw.subset.binary_search(&x).expect("coordinate lies in S");

    let mut f = FunctionTable::new(1, amb.len());
    for (a, v) in g.entries() {
        let coords: Vec<usize> = a.iter().map(|&x| pos(x)).collect();
        f.insert(vec![pw.iota_of(&coords)], pw.base.apply(v))?;
    }
    let mut coordinate_tables = Vec::new();
    for ell in 0..n {
        let mut t = FunctionTable::new(1, amb.len());
        for (a, _) in g.entries() {
            t.insert(vec![pw.base.apply(a[ell])], pw.coordinate(ell, pos(a[ell])))?;
        }
        coordinate_tables.push(t);
    }

    let identity_holds = {
        let k = pw.subset.len();
        (0..k.pow(n as u32)).all(|u| {
            let mut coords = vec![0; n];
            let mut rest = u;
            for slot in coords.iter_mut().rev() {
                *slot = rest % k;
                rest /= k;
            }
            let joined = (0..n).fold(amb.bottom(), |acc, ell| amb.join(acc, pw.coordinate(ell, coords[ell])));
            joined == pw.iota_of(&coords)
        })
    };

    let st = structure(&amb, amb_o);
    let mut tables: Vec<&FunctionTable> = vec![&f];
    tables.extend(coordinate_tables.iter());
    let results = interpolate_or_synthesize(st, &tables, &copts)?;
    let mut out = NaryReduction {
        result: Interpolation::Unknown,
        power: None,
        f: Some(f.clone()),
        p: None,
        coordinates: Vec::new(),
        identity_holds,
    };
    if results.contains(&Interpolation::NotRepresentable) {
        out.result = Interpolation::NotRepresentable;
    } else if results.iter().all(|r| matches!(r, Interpolation::Found(_))) {
        let terms: Vec<Term> = results.iter().map(|r| r.term().unwrap().clone()).collect();
        let joined = (1..=n).map(|ell| terms[ell].substitute(&[Term::var(ell as u32 - 1)])).reduce(Term::join).unwrap();
        let term = terms[0].substitute(&[joined]);
        for (a, v) in g.entries() {
            let args: Vec<ElementId> = a.iter().map(|&x| pw.base.apply(x)).collect();
            let got = eval(&term, st, &args).expect("coefficients live in the ambient lattice");
            if got != pw.base.apply(v) {
                return Err(NaryError::VerificationFailed(a.to_vec()));
            }
        }
        out.p = Some(terms[0].clone());
        out.coordinates = terms[1..].to_vec();
        out.result = Interpolation::Found(term);
    }
    out.power = Some(pw);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn table(
        l: &FiniteLattice,
        points: &[(&str, &str)],
        g: impl Fn(ElementId, ElementId) -> ElementId,
    ) -> FunctionTable {
        let mut t = FunctionTable::new(2, l.len());
        for (x, y) in points {
            let (x, y) = (l.id_of(x).unwrap(), l.id_of(y).unwrap());
            t.insert(vec![x, y], g(x, y)).unwrap();
        }
        t
    }

    #[test]
    fn meet_and_join_on_bits() {
        let b2 = zoo::b2();
        let l = b2.lattice_arc().clone();
        let pts = [("0", "1"), ("1", "0"), ("1", "1"), ("0", "0")];
        for g in [table(&l, &pts, |x, y| l.meet(x, y)), table(&l, &pts, |x, y| l.join(x, y))] {
            let r = nary_reduce(&l, None, &g, &NaryOptions::default()).unwrap();
            assert!(r.identity_holds);
            let t = r.result.term().expect("found");
            let pw = r.power.as_ref().unwrap();
            for (a, v) in g.entries() {
                let args: Vec<ElementId> = a.iter().map(|&x| pw.base.apply(x)).collect();
                assert_eq!(eval(t, &*pw.ambient.lattice, &args).unwrap(), pw.base.apply(v));
            }
        }
    }

    #[test]
    fn unary_degenerates() {
        let b2 = zoo::b2();
        let l = b2.lattice_arc().clone();
        let f = FunctionTable::from_fn(&l, |x| b2.perp(x));
        let r = nary_reduce(&l, Some(&b2), &f, &NaryOptions::default()).unwrap();
        assert!(r.power.is_none());
        assert_eq!(r.result.term().unwrap().to_string(), "x0 ^'");
    }

    #[test]
    fn generation_cap() {
        let b3 = zoo::b3();
        let l = b3.lattice_arc().clone();
        let g = table(&l, &[("a", "b"), ("c", "0")], |x, y| l.meet(x, y));
        let opts = NaryOptions { generation_cap: 4, ..NaryOptions::default() };
        assert!(matches!(nary_reduce(&l, None, &g, &opts), Err(NaryError::GenerationTooLarge { .. })));
    }
}
