//! Orthopolynomial terms: evaluation, De Morgan normal form and the
//! two-variable lattice form `p'(x, x⊥)`.

mod text;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::ElementId;
use crate::ortho::{Ortholattice, Structure};

pub use text::{parse, SyntaxError};

/// Variables, named coefficients, meet, join and orthocomplement.
/// Coefficients are resolved by name against the structure a term is
/// evaluated in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(u32),
    Const(Arc<str>),
    Meet(Arc<Term>, Arc<Term>),
    Join(Arc<Term>, Arc<Term>),
    Perp(Arc<Term>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable x{0} has no value")]
    UnboundVariable(u32),
    #[error("coefficient {0:?} does not name an element")]
    UnresolvedCoefficient(String),
    #[error("term uses ⊥ but the structure has no orthocomplement")]
    NoOrthocomplement,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("term uses variable x{0}; expected a unary term")]
    NotUnary(u32),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl Term {
    pub fn var(i: u32) -> Term {
        Term::Var(i)
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Arc::new(a), Arc::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Arc::new(a), Arc::new(b))
    }

    pub fn perp(a: Term) -> Term {
        Term::Perp(Arc::new(a))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
            Term::Perp(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.depth().max(b.depth()),
            Term::Perp(a) => 1 + a.depth(),
        }
    }

    pub fn perp_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Meet(a, b) | Term::Join(a, b) => a.perp_count() + b.perp_count(),
            Term::Perp(a) => 1 + a.perp_count(),
        }
    }

    /// One more than the largest variable index (0 for ground terms).
    pub fn arity(&self) -> u32 {
        match self {
            Term::Var(i) => i + 1,
            Term::Const(_) => 0,
            Term::Meet(a, b) | Term::Join(a, b) => a.arity().max(b.arity()),
            Term::Perp(a) => a.arity(),
        }
    }

    pub fn has_perp(&self) -> bool {
        self.perp_count() > 0
    }

    /// Every ⊥ sits directly above a variable or a coefficient.
    pub fn is_nnf(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => true,
            Term::Meet(a, b) | Term::Join(a, b) => a.is_nnf() && b.is_nnf(),
            Term::Perp(a) => matches!(**a, Term::Var(_) | Term::Const(_)),
        }
    }

    pub fn constants(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.visit_consts(&mut |c| out.push(c.clone()));
        out.sort();
        out.dedup();
        out
    }

    fn visit_consts(&self, f: &mut dyn FnMut(&Arc<str>)) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => f(c),
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.visit_consts(f);
                b.visit_consts(f);
            }
            Term::Perp(a) => a.visit_consts(f),
        }
    }

    /// Replace `Var(i)` by `values[i]`; variables beyond `values` stay.
    pub fn substitute(&self, values: &[Term]) -> Term {
        match self {
            Term::Var(i) => values.get(*i as usize).cloned().unwrap_or(Term::Var(*i)),
            Term::Const(_) => self.clone(),
            Term::Meet(a, b) => Term::meet(a.substitute(values), b.substitute(values)),
            Term::Join(a, b) => Term::join(a.substitute(values), b.substitute(values)),
            Term::Perp(a) => Term::perp(a.substitute(values)),
        }
    }

    /// Rename every coefficient.
    pub fn map_consts(&self, f: &dyn Fn(&str) -> String) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Const(c) => Term::constant(&f(c)),
            Term::Meet(a, b) => Term::meet(a.map_consts(f), b.map_consts(f)),
            Term::Join(a, b) => Term::join(a.map_consts(f), b.map_consts(f)),
            Term::Perp(a) => Term::perp(a.map_consts(f)),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Evaluate with coefficients resolved by element name in `s`.
pub fn eval<S: Structure + ?Sized>(t: &Term, s: &S, assignment: &[ElementId]) -> Result<ElementId, EvalError> {
    let l = s.lattice();
    eval_with(t, s, assignment, &|name| l.id_of(name))
}

pub fn eval_with<S: Structure + ?Sized>(
    t: &Term,
    s: &S,
    assignment: &[ElementId],
    resolve: &dyn Fn(&str) -> Option<ElementId>,
) -> Result<ElementId, EvalError> {
    let l = s.lattice();
    Ok(match t {
        Term::Var(i) => *assignment.get(*i as usize).ok_or(EvalError::UnboundVariable(*i))?,
        Term::Const(c) => resolve(c).ok_or_else(|| EvalError::UnresolvedCoefficient(c.to_string()))?,
        Term::Meet(a, b) => l.meet(eval_with(a, s, assignment, resolve)?, eval_with(b, s, assignment, resolve)?),
        Term::Join(a, b) => l.join(eval_with(a, s, assignment, resolve)?, eval_with(b, s, assignment, resolve)?),
        Term::Perp(a) => s.perp_of(eval_with(a, s, assignment, resolve)?).ok_or(EvalError::NoOrthocomplement)?,
    })
}

/// A term in De Morgan normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NnfTerm(Term);

impl NnfTerm {
    pub fn new(t: Term) -> Option<NnfTerm> {
        t.is_nnf().then_some(NnfTerm(t))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn into_term(self) -> Term {
        self.0
    }
}

/// Push every ⊥ down to the leaves with De Morgan's laws and `x⊥⊥ = x`.
pub fn nnf(t: &Term) -> NnfTerm {
    fn go(t: &Term, negated: bool) -> Term {
        match (t, negated) {
            (Term::Var(_) | Term::Const(_), false) => t.clone(),
            (Term::Var(_) | Term::Const(_), true) => Term::perp(t.clone()),
            (Term::Perp(a), n) => go(a, !n),
            (Term::Meet(a, b), false) => Term::meet(go(a, false), go(b, false)),
            (Term::Join(a, b), false) => Term::join(go(a, false), go(b, false)),
            (Term::Meet(a, b), true) => Term::join(go(a, true), go(b, true)),
            (Term::Join(a, b), true) => Term::meet(go(a, true), go(b, true)),
        }
    }
    NnfTerm(go(t, false))
}

/// A term without ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeTerm(Term);

impl LatticeTerm {
    pub fn new(t: Term) -> Option<LatticeTerm> {
        (!t.has_perp()).then_some(LatticeTerm(t))
    }

    pub fn term(&self) -> &Term {
        &self.0
    }
}

/// Rewrites a unary NNF term `p(x)` into a lattice term `p'(x, y)` with
/// `p(x) = p'(x, x⊥)`: `x⊥` becomes `x1`, `c⊥` becomes the coefficient
/// naming `c⊥` in `o`.
pub fn as_two_variable_lattice_term(t: &NnfTerm, o: &Ortholattice) -> Result<LatticeTerm, TermError> {
    let arity = t.term().arity();
    if arity > 1 {
        return Err(TermError::NotUnary(arity - 1));
    }
    fn go(t: &Term, o: &Ortholattice) -> Result<Term, TermError> {
        let l = o.lattice();
        Ok(match t {
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::Meet(a, b) => Term::meet(go(a, o)?, go(b, o)?),
            Term::Join(a, b) => Term::join(go(a, o)?, go(b, o)?),
            Term::Perp(a) => match &**a {
                Term::Var(_) => Term::var(1),
                Term::Const(c) => {
                    let x = l.id_of(c).ok_or_else(|| EvalError::UnresolvedCoefficient(c.to_string()))?;
                    Term::constant(l.name(o.perp(x)))
                }
                _ => unreachable!("argument is in normal form"),
            },
        })
    }
    Ok(LatticeTerm(go(t.term(), o)?))
}
