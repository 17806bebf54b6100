//! Covering a list of unary functions on `L0` with one extension.
//!
//! A tower `L0 ⊴ L_1 ⊴ ⋯` of lattices is built target by target. Target
//! `f_i` is covered by a binary lattice polynomial `p_i` with
//! `f_i(z) = p_i(z, z⊥)` on `L0`, found over the current stage if possible
//! and otherwise over a strong extension of `hsum(L_i, L0 × L0)`. At the end
//! every `p_i(x, x⊥)` is re-verified over `ortho(L_final, L0)`.

use serde::Serialize;

use super::closure::{interpolate_or_synthesize, ClosureOptions, Interpolation};
use super::pipeline::{find_interpolants, transport_term, PipelineError, SearchParams};
use super::{FunctionTable, Mode};
use crate::construct::{horizontal_sum, ortho_construction, product, ConstructionResult, DEFAULT_SIZE_CAP};
use crate::lattice::ElementId;
use crate::morphism::{check_sub01, check_triangle, Embedding};
use crate::ortho::Ortholattice;
use crate::terms::{eval, Term};

#[derive(Clone, Debug, Default)]
pub struct CoverOptions {
    pub search: SearchParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverEntry {
    pub target: usize,
    /// Stage whose lattice first carries the coefficients of `p_i`.
    pub stage: Option<usize>,
    /// `p_i(x0, x1)` over the final stage.
    pub binary: Option<Term>,
    /// `p_i(x0, x0⊥)` over `ortho(L_final, L0)`.
    pub witness: Option<Term>,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub entries: Vec<CoverEntry>,
    /// `|L_i|` for every stage, starting with `L0`.
    pub stage_sizes: Vec<usize>,
    /// `ortho(L_final, L0)`; absent for an empty target list.
    pub lattice: Option<ConstructionResult>,
    pub final_size: usize,
}

impl CoverReport {
    pub fn covered(&self) -> usize {
        self.entries.iter().filter(|e| e.verified).count()
    }

    pub fn is_complete(&self) -> bool {
        self.covered() == self.entries.len()
    }
}

fn certify(e: &Embedding) -> Result<Embedding, PipelineError> {
    Ok(check_triangle(&check_sub01(e)?)?.0)
}

pub fn iterate_cover(
    o0: &Ortholattice,
    targets: &[FunctionTable],
    opts: &CoverOptions,
) -> Result<CoverReport, PipelineError> {
    let l0 = o0.lattice_arc().clone();
    let cap = opts.search.size_cap;
    if targets.iter().any(|f| f.arity() != 1 || f.size() != l0.len() || !f.is_total()) {
        return Err(PipelineError::NotTotal);
    }
    let mut report =
        CoverReport { entries: Vec::new(), stage_sizes: vec![l0.len()], lattice: None, final_size: l0.len() };
    if targets.is_empty() {
        return Ok(report);
    }
    let copts = ClosureOptions::new(Mode::LatticeOnly).budget(opts.search.budget).strategy(opts.search.strategy);
    // L0 → current stage
    let mut cur = Embedding::identity(l0.clone());
    let mut terms: Vec<Option<Term>> = Vec::new();

    for (i, f) in targets.iter().enumerate() {
        let stage = cur.target().clone();
        let mut direct = FunctionTable::new(2, stage.len());
        for z in l0.elements() {
            direct.insert(vec![cur.apply(z), cur.apply(o0.perp(z))], cur.apply(f.get1(z).unwrap()))?;
        }
        let mut entry = CoverEntry { target: i, stage: None, binary: None, witness: None, verified: false };
        if let Some(Interpolation::Found(t)) = interpolate_or_synthesize(&*stage, &[&direct], &copts)?.pop() {
            entry.stage = Some(report.stage_sizes.len() - 1);
            terms.push(Some(t));
            report.entries.push(entry);
            continue;
        }

        // hsum(L_i, L0 × L0) and the lifted tables on it
        let square = product(&l0, &l0, cap)?;
        let sum = horizontal_sum(&stage, &square.lattice, cap)?;
        let (left, right) = (sum.embedding("left").clone(), sum.embedding("right").clone());
        let n = l0.len();
        let pair = |x: ElementId, y: ElementId| right.apply(ElementId::from(x.index() * n + y.index()));
        let size = sum.lattice.len();
        let (mut f_bar, mut g1, mut g2) =
            (FunctionTable::new(1, size), FunctionTable::new(1, size), FunctionTable::new(1, size));
        for z in l0.elements() {
            let at = left.apply(cur.apply(z));
            f_bar.insert(vec![pair(z, o0.perp(z))], left.apply(cur.apply(f.get1(z).unwrap())))?;
            g1.insert(vec![at], pair(z, l0.bottom()))?;
            g2.insert(vec![at], pair(l0.bottom(), z))?;
        }
        let label = format!("L{}'", report.stage_sizes.len() - 1);
        let outcome = find_interpolants(&sum.lattice, &label, &[&f_bar, &g1, &g2], &opts.search)?;
        let Some(found) = outcome.found else {
            terms.push(None);
            report.entries.push(entry);
            continue;
        };
        let step = certify(&left.then(&found.embedding)?)?;
        for t in terms.iter_mut().flatten() {
            *t = transport_term(t, &step);
        }
        let (p, q1, q2) = (&found.terms[0], &found.terms[1], &found.terms[2]);
        let inner = Term::join(q1.clone(), q2.substitute(&[Term::var(1)]));
        terms.push(Some(p.substitute(&[inner])));
        cur = certify(&cur.then(&step)?)?;
        report.stage_sizes.push(cur.target().len());
        entry.stage = Some(report.stage_sizes.len() - 1);
        report.entries.push(entry);
    }

    let bar = ortho_construction(&cur, o0, cap.max(DEFAULT_SIZE_CAP))?;
    let o = bar.ortho.as_ref().unwrap();
    let (into_l1, into_l0) = (bar.embedding("L1"), bar.embedding("L0"));
    for (entry, (t, f)) in report.entries.iter_mut().zip(terms.iter().zip(targets)) {
        let Some(t) = t else { continue };
        let h = transport_term(&t.substitute(&[Term::var(0), Term::perp(Term::var(0))]), into_l1);
        entry.verified =
            l0.elements().all(|z| eval(&h, o, &[into_l0.apply(z)]).ok() == Some(into_l0.apply(f.get1(z).unwrap())));
        entry.binary = Some(t.clone());
        entry.witness = Some(h);
    }
    report.final_size = bar.lattice.len();
    report.lattice = Some(bar);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn all_functions(n: usize) -> Vec<FunctionTable> {
        let mut out: Vec<Vec<ElementId>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..n).map(move |y| {
                        let mut w = v.clone();
                        w.push(ElementId::from(y));
                        w
                    })
                })
                .collect();
        }
        out.iter().map(|v| FunctionTable::unary(v).unwrap()).collect()
    }

    #[test]
    fn two_chain_all_covered() {
        let o = zoo::two_chain();
        let report = iterate_cover(&o, &all_functions(2), &CoverOptions::default()).unwrap();
        assert!(report.is_complete());
        assert_eq!(report.stage_sizes, vec![2]);
        assert_eq!(report.final_size, 2);
    }

    #[test]
    fn empty_targets() {
        let o = zoo::b2();
        let report = iterate_cover(&o, &[], &CoverOptions::default()).unwrap();
        assert!(report.is_complete());
        assert_eq!(report.final_size, 4);
        assert!(report.lattice.is_none());
    }

    #[test]
    fn mo2_targets_reverify() {
        let o = zoo::mo2();
        let l = o.lattice();
        let a = l.id_of("a").unwrap();
        let b = l.id_of("b").unwrap();
        let swap = FunctionTable::from_fn(l, |x| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        });
        let konst = FunctionTable::from_fn(l, |_| a);
        let report = iterate_cover(&o, &[konst, swap], &CoverOptions::default()).unwrap();
        for e in &report.entries {
            assert_eq!(e.verified, e.witness.is_some());
        }
        assert!(report.entries[0].verified);
    }
}
