//! Breadth-first closure of polynomial functions restricted to a finite set
//! of points.
//!
//! A member is the value vector of a polynomial on the points. Level `k`
//! holds the members whose shortest witness has `k` nodes; it is built from
//! meets and joins of levels `i` and `j` with `i + j = k - 1` (and the
//! orthocomplement of level `k - 1`). Among candidates for the same new
//! member the one with the lexicographically least printed form wins. Once
//! every level up to `2M + 1` is empty, where `M` is the highest nonempty
//! level, no combination can produce anything new and the closure is
//! complete.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::{monotone_check, FunctionTable, Mode};
use crate::lattice::{ElementId, FiniteLattice};
use crate::ortho::Structure;
use crate::par::{map_slice, Strategy};
use crate::terms::Term;

pub const DEFAULT_CLONE_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug)]
pub struct ClosureOptions {
    pub mode: Mode,
    /// Largest number of members kept; exceeding it truncates the closure.
    pub budget: usize,
    pub strategy: Strategy,
}

impl ClosureOptions {
    pub fn new(mode: Mode) -> Self {
        ClosureOptions { mode, budget: DEFAULT_CLONE_BUDGET, strategy: Strategy::default() }
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("ortho mode needs an orthocomplement")]
    NoOrthocomplement,
    #[error("point has {got} coordinates, expected {arity}")]
    Arity { got: usize, arity: usize },
}

type Values = Box<[u32]>;

#[derive(Clone, Copy, Debug)]
enum Step {
    Meet(usize, usize),
    Join(usize, usize),
    Perp(usize),
}

/// Members of a closure on a fixed list of points.
#[derive(Clone, Debug)]
pub struct Closure {
    mode: Mode,
    arity: usize,
    points: Vec<Vec<ElementId>>,
    values: Vec<Values>,
    terms: Vec<Arc<Term>>,
    sizes: Vec<usize>,
    index: HashMap<Values, usize>,
    complete: bool,
}

impl Closure {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn points(&self) -> &[Vec<ElementId>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// False when the budget cut the closure short or the search stopped
    /// once its targets were found.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Members in discovery order: by witness size, then printed form.
    pub fn members(&self) -> impl Iterator<Item = (Vec<ElementId>, &Term)> + '_ {
        self.values.iter().zip(&self.terms).map(|(v, t)| (v.iter().map(|&e| ElementId(e)).collect(), &**t))
    }

    /// Number of nodes of each member's witness, in discovery order.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn witness(&self, values: &[ElementId]) -> Option<&Term> {
        let key: Values = values.iter().map(|e| e.0).collect();
        self.index.get(&key).map(|&i| &*self.terms[i])
    }

    pub fn contains(&self, values: &[ElementId]) -> bool {
        self.witness(values).is_some()
    }
}

fn precedence(t: &Term) -> u8 {
    match t {
        Term::Join(..) => 1,
        Term::Meet(..) => 2,
        _ => 3,
    }
}

/// Pointwise operations on value vectors in some encoding.
trait Arith: Sync {
    type K: Clone + Eq + Hash + Send + Sync;
    fn encode(&self, v: &[u32]) -> Self::K;
    fn decode(&self, k: &Self::K) -> Values;
    fn meet(&self, a: &Self::K, b: &Self::K) -> Self::K;
    fn join(&self, a: &Self::K, b: &Self::K) -> Self::K;
    fn perp(&self, a: &Self::K) -> Self::K;
}

struct Tables {
    n: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
    perp: Vec<u32>,
}

impl Tables {
    fn new(l: &FiniteLattice, perp: Option<Vec<u32>>) -> Self {
        let n = l.len();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for x in l.elements() {
            for y in l.elements() {
                meet.push(l.meet(x, y).0);
                join.push(l.join(x, y).0);
            }
        }
        Tables { n, meet, join, perp: perp.unwrap_or_default() }
    }
}

/// Value vectors packed into one `u128`, `bits` per point.
struct Packed {
    t: Tables,
    bits: u32,
    points: usize,
}

impl Packed {
    fn fits(n: usize, points: usize) -> Option<u32> {
        let bits = usize::BITS - (n.max(2) - 1).leading_zeros();
        (bits as usize * points <= 128).then_some(bits)
    }

    #[inline]
    fn zip(&self, a: u128, b: u128, table: &[u32]) -> u128 {
        let mask = (1u128 << self.bits) - 1;
        let mut out = 0u128;
        for i in 0..self.points {
            let shift = i as u32 * self.bits;
            let x = ((a >> shift) & mask) as usize;
            let y = ((b >> shift) & mask) as usize;
            out |= (table[x * self.t.n + y] as u128) << shift;
        }
        out
    }
}

impl Arith for Packed {
    type K = u128;

    fn encode(&self, v: &[u32]) -> u128 {
        v.iter().enumerate().fold(0, |acc, (i, &x)| acc | (x as u128) << (i as u32 * self.bits))
    }

    fn decode(&self, k: &u128) -> Values {
        let mask = (1u128 << self.bits) - 1;
        (0..self.points).map(|i| ((k >> (i as u32 * self.bits)) & mask) as u32).collect()
    }

    fn meet(&self, a: &u128, b: &u128) -> u128 {
        self.zip(*a, *b, &self.t.meet)
    }

    fn join(&self, a: &u128, b: &u128) -> u128 {
        self.zip(*a, *b, &self.t.join)
    }

    fn perp(&self, a: &u128) -> u128 {
        let mask = (1u128 << self.bits) - 1;
        let mut out = 0u128;
        for i in 0..self.points {
            let shift = i as u32 * self.bits;
            out |= (self.t.perp[((a >> shift) & mask) as usize] as u128) << shift;
        }
        out
    }
}

/// Plain vectors, for point sets too large to pack.
struct Wide {
    t: Tables,
}

impl Arith for Wide {
    type K = Values;

    fn encode(&self, v: &[u32]) -> Values {
        v.into()
    }

    fn decode(&self, k: &Values) -> Values {
        k.clone()
    }

    fn meet(&self, a: &Values, b: &Values) -> Values {
        a.iter().zip(b.iter()).map(|(&x, &y)| self.t.meet[x as usize * self.t.n + y as usize]).collect()
    }

    fn join(&self, a: &Values, b: &Values) -> Values {
        a.iter().zip(b.iter()).map(|(&x, &y)| self.t.join[x as usize * self.t.n + y as usize]).collect()
    }

    fn perp(&self, a: &Values) -> Values {
        a.iter().map(|&x| self.t.perp[x as usize]).collect()
    }
}

/// Compares two concatenations without building them.
fn cmp_pieces(x: &[&str], y: &[&str]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    let (mut a, mut b): (&[u8], &[u8]) = (&[], &[]);
    loop {
        while a.is_empty() && i < x.len() {
            a = x[i].as_bytes();
            i += 1;
        }
        while b.is_empty() && j < y.len() {
            b = y[j].as_bytes();
            j += 1;
        }
        match (a.is_empty(), b.is_empty()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let n = a.len().min(b.len());
        match a[..n].cmp(&b[..n]) {
            Ordering::Equal => {
                a = &a[n..];
                b = &b[n..];
            }
            other => return other,
        }
    }
}

struct Engine<'a, A: Arith> {
    arith: &'a A,
    keys: Vec<A::K>,
    index: FxHashMap<A::K, usize>,
    terms: Vec<Arc<Term>>,
    texts: Vec<Arc<str>>,
    sizes: Vec<usize>,
}

impl<A: Arith> Engine<'_, A> {
    fn has(&self, k: &A::K) -> bool {
        self.index.contains_key(k)
    }

    fn wrapped(&self, m: usize, min_prec: u8) -> [&str; 3] {
        if precedence(&self.terms[m]) < min_prec {
            ["(", &self.texts[m], ")"]
        } else {
            ["", &self.texts[m], ""]
        }
    }

    /// The printed form of the term built by `step`, in pieces.
    fn pieces(&self, step: Step) -> [&str; 7] {
        let (a, op, b) = match step {
            Step::Meet(a, b) => (self.wrapped(a, 2), " & ", self.wrapped(b, 3)),
            Step::Join(a, b) => (self.wrapped(a, 1), " | ", self.wrapped(b, 2)),
            Step::Perp(a) => (self.wrapped(a, 3), " ^'", ["", "", ""]),
        };
        [a[0], a[1], a[2], op, b[0], b[1], b[2]]
    }

    fn cmp_text(&self, x: Step, y: Step) -> Ordering {
        cmp_pieces(&self.pieces(x), &self.pieces(y))
    }

    fn text_of(&self, step: Step) -> String {
        self.pieces(step).concat()
    }

    fn push(&mut self, key: A::K, term: Term, text: String, size: usize) {
        self.index.insert(key.clone(), self.keys.len());
        self.keys.push(key);
        self.terms.push(Arc::new(term));
        self.texts.push(text.into());
        self.sizes.push(size);
    }

    fn offer(&self, map: &mut FxHashMap<A::K, Step>, key: A::K, step: Step) {
        match map.get_mut(&key) {
            Some(best) if self.cmp_text(*best, step) != Ordering::Greater => {}
            Some(best) => *best = step,
            None => {
                map.insert(key, step);
            }
        }
    }

    fn finish(self, mode: Mode, arity: usize, points: Vec<Vec<ElementId>>, complete: bool) -> Closure {
        let values: Vec<Values> = self.keys.iter().map(|k| self.arith.decode(k)).collect();
        let index = values.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Closure { mode, arity, points, values, terms: self.terms, sizes: self.sizes, index, complete }
    }
}

/// Runs the closure on `points` (each a tuple of `arity` elements) until it
/// is complete, the budget is exceeded, or `watch` (shown every new member's
/// values) asks to stop; stopping happens after the current level.
fn explore<S: Structure + ?Sized>(
    s: &S,
    arity: usize,
    points: Vec<Vec<ElementId>>,
    opts: &ClosureOptions,
    watch: &mut dyn FnMut(&[u32]) -> bool,
) -> Result<Closure, ClosureError> {
    let l = s.lattice();
    if let Some(p) = points.iter().find(|p| p.len() != arity) {
        return Err(ClosureError::Arity { got: p.len(), arity });
    }
    let perp = match opts.mode {
        Mode::LatticeOnly => None,
        Mode::Ortho => Some(
            l.elements()
                .map(|x| s.perp_of(x).map(|y| y.0).ok_or(ClosureError::NoOrthocomplement))
                .collect::<Result<Vec<u32>, _>>()?,
        ),
    };
    let t = Tables::new(l, perp);
    Ok(match Packed::fits(l.len(), points.len()) {
        Some(bits) => {
            let arith = Packed { t, bits, points: points.len() };
            run(&arith, l, arity, points, opts, watch)
        }
        None => run(&Wide { t }, l, arity, points, opts, watch),
    })
}

fn run<A: Arith>(
    arith: &A,
    l: &FiniteLattice,
    arity: usize,
    points: Vec<Vec<ElementId>>,
    opts: &ClosureOptions,
    watch: &mut dyn FnMut(&[u32]) -> bool,
) -> Closure {
    let mut c = Engine {
        arith,
        keys: Vec::new(),
        index: FxHashMap::default(),
        terms: Vec::new(),
        texts: Vec::new(),
        sizes: Vec::new(),
    };
    let mut stop = false;
    let mut shown = 0;
    let mut show = |c: &Engine<A>, stop: &mut bool| {
        for key in &c.keys[shown..] {
            *stop |= watch(&arith.decode(key));
        }
        shown = c.keys.len();
    };

    // level 1: projections and constants
    let mut first: Vec<(A::K, Term, String)> = Vec::new();
    let mut seen: FxHashMap<A::K, usize> = FxHashMap::default();
    let leaves = (0..arity as u32)
        .map(|i| {
            let v: Vec<u32> = points.iter().map(|p| p[i as usize].0).collect();
            (arith.encode(&v), Term::Var(i))
        })
        .chain(l.elements().map(|e| (arith.encode(&vec![e.0; points.len()]), Term::constant(l.name(e)))));
    for (v, t) in leaves {
        let text = t.to_string();
        match seen.get(&v) {
            Some(&i) if first[i].2 <= text => {}
            Some(&i) => first[i] = (v, t, text),
            None => {
                seen.insert(v.clone(), first.len());
                first.push((v, t, text));
            }
        }
    }
    if first.len() > opts.budget {
        return c.finish(opts.mode, arity, points, false);
    }
    first.sort_by(|a, b| a.2.cmp(&b.2));
    for (v, t, text) in first {
        c.push(v, t, text, 1);
    }
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(), (0..c.keys.len()).collect()];
    let mut highest = 1;

    // every function on the points is present
    let saturated = (l.len() as f64).powi(points.len() as i32);
    let mut k = 2;
    loop {
        show(&c, &mut stop);
        if stop {
            return c.finish(opts.mode, arity, points, false);
        }
        if k > 2 * highest + 1 || c.keys.len() as f64 >= saturated {
            return c.finish(opts.mode, arity, points, true);
        }
        // one task per left member, paired with a whole right level
        let mut tasks: Vec<(usize, usize, usize)> = Vec::new();
        for i in 1..k - 1 {
            let j = k - 1 - i;
            if i > j {
                break;
            }
            for (pos, &a) in levels[i].iter().enumerate() {
                tasks.push((a, j, if i == j { pos + 1 } else { 0 }));
            }
        }
        let perp_tasks: &[usize] = match opts.mode {
            Mode::Ortho => &levels[k - 1],
            Mode::LatticeOnly => &[],
        };
        let cref = &c;
        let levels_ref = &levels;
        let partial: Vec<FxHashMap<A::K, Step>> = map_slice(opts.strategy, &tasks, |&(a, j, from)| {
            let mut local = FxHashMap::default();
            let ka = &cref.keys[a];
            for &b in &levels_ref[j][from..] {
                let kb = &cref.keys[b];
                let m = arith.meet(ka, kb);
                if !cref.has(&m) {
                    let (s1, s2) = (Step::Meet(a, b), Step::Meet(b, a));
                    let step = if cref.cmp_text(s1, s2) == Ordering::Greater { s2 } else { s1 };
                    cref.offer(&mut local, m, step);
                }
                let jn = arith.join(ka, kb);
                if !cref.has(&jn) {
                    let (s1, s2) = (Step::Join(a, b), Step::Join(b, a));
                    let step = if cref.cmp_text(s1, s2) == Ordering::Greater { s2 } else { s1 };
                    cref.offer(&mut local, jn, step);
                }
            }
            local
        });
        let perp_partial: Vec<Option<(A::K, Step)>> = map_slice(opts.strategy, perp_tasks, |&a| {
            let v = arith.perp(&cref.keys[a]);
            (!cref.has(&v)).then_some((v, Step::Perp(a)))
        });
        let mut level: FxHashMap<A::K, Step> = FxHashMap::default();
        for local in partial {
            for (v, step) in local {
                c.offer(&mut level, v, step);
            }
        }
        for (v, step) in perp_partial.into_iter().flatten() {
            c.offer(&mut level, v, step);
        }
        if c.keys.len() + level.len() > opts.budget {
            return c.finish(opts.mode, arity, points, false);
        }
        let mut fresh: Vec<(A::K, Step, String)> = level.into_iter().map(|(v, s)| (v, s, c.text_of(s))).collect();
        fresh.sort_by(|a, b| a.2.cmp(&b.2));
        let start = c.keys.len();
        for (v, step, text) in fresh {
            let term = match step {
                Step::Meet(a, b) => Term::Meet(c.terms[a].clone(), c.terms[b].clone()),
                Step::Join(a, b) => Term::Join(c.terms[a].clone(), c.terms[b].clone()),
                Step::Perp(a) => Term::Perp(c.terms[a].clone()),
            };
            c.push(v, term, text, k);
        }
        levels.push((start..c.keys.len()).collect());
        if c.keys.len() > start {
            highest = k;
        }
        k += 1;
    }
}

/// The closure on an explicit point list, run to completion or budget.
pub fn closure_on_points<S: Structure + ?Sized>(
    s: &S,
    arity: usize,
    points: Vec<Vec<ElementId>>,
    opts: &ClosureOptions,
) -> Result<Closure, ClosureError> {
    explore(s, arity, points, opts, &mut |_| false)
}

/// All unary polynomial functions of `s` (with orthocomplement in
/// [`Mode::Ortho`]), each with a shortest witness.
#[derive(Clone, Debug)]
pub struct CloneTable {
    closure: Closure,
}

impl CloneTable {
    pub fn mode(&self) -> Mode {
        self.closure.mode
    }

    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    /// False when the budget truncated the closure.
    pub fn is_complete(&self) -> bool {
        self.closure.complete
    }

    /// `(f(x) for x in L, witness)` in discovery order.
    pub fn members(&self) -> impl Iterator<Item = (Vec<ElementId>, &Term)> + '_ {
        self.closure.members()
    }

    pub fn witness(&self, values: &[ElementId]) -> Option<&Term> {
        self.closure.witness(values)
    }

    pub fn contains(&self, values: &[ElementId]) -> bool {
        self.closure.contains(values)
    }

    pub fn table(&self, values: &[ElementId]) -> FunctionTable {
        FunctionTable::unary(values).expect("member values are elements")
    }
}

pub fn polynomial_clone<S: Structure + ?Sized>(s: &S, opts: &ClosureOptions) -> Result<CloneTable, ClosureError> {
    let points = s.lattice().elements().map(|x| vec![x]).collect();
    Ok(CloneTable { closure: closure_on_points(s, 1, points, opts)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpolation {
    Found(Term),
    /// The closure completed without a match.
    NotRepresentable,
    /// The budget ran out first.
    Unknown,
}

impl Interpolation {
    pub fn term(&self) -> Option<&Term> {
        match self {
            Interpolation::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Shortest polynomial (in `f.arity()` variables) agreeing with `f` on its
/// domain. In [`Mode::LatticeOnly`] a non-monotone `f` is rejected up front.
pub fn interpolate<S: Structure + ?Sized>(
    s: &S,
    f: &FunctionTable,
    opts: &ClosureOptions,
) -> Result<Interpolation, ClosureError> {
    Ok(interpolate_all(s, &[f], opts)?.pop().unwrap())
}

pub fn interpolate_unary<S: Structure + ?Sized>(
    s: &S,
    f: &FunctionTable,
    opts: &ClosureOptions,
) -> Result<Interpolation, ClosureError> {
    if f.arity() != 1 {
        return Err(ClosureError::Arity { got: f.arity(), arity: 1 });
    }
    interpolate(s, f, opts)
}

/// Interpolates several tables sharing one domain with a single closure
/// run. Tables on different domains are handled one domain at a time.
pub fn interpolate_all<S: Structure + ?Sized>(
    s: &S,
    fs: &[&FunctionTable],
    opts: &ClosureOptions,
) -> Result<Vec<Interpolation>, ClosureError> {
    solve(s, fs, opts, false)
}

/// Members explored before a synthesized term is accepted in place of a
/// shortest witness.
const SYNTH_AFTER: usize = 2_000;

/// Per-table progress of [`interpolate_or_synthesize`].
struct Goal {
    dom: Vec<Vec<ElementId>>,
    want: Vec<ElementId>,
    exact: Option<usize>,
    /// `t` with `f(a) ≤ t(a)` and `t(b) ∧ f(a) ≤ f(b)` for all `b`.
    upper: Vec<Option<usize>>,
    /// `s` with `s(a) ≤ f(a)` and `f(b) ≤ s(b) ∨ f(a)` for all `b`.
    lower: Vec<Option<usize>>,
    synth: bool,
}

impl Goal {
    fn done(&self, seen: usize) -> bool {
        self.exact.is_some()
            || self.synth && seen >= SYNTH_AFTER && self.upper.iter().all(Option::is_some)
            || self.lower.iter().all(Option::is_some)
    }

    fn see(&mut self, l: &FiniteLattice, m: usize, v: &[u32]) {
        if self.exact.is_some() {
            return;
        }
        if v.iter().zip(&self.want).all(|(x, y)| *x == y.0) {
            self.exact = Some(m);
            return;
        }
        if !self.synth {
            return;
        }
        let v: Vec<ElementId> = v.iter().map(|&x| ElementId(x)).collect();
        let f = &self.want;
        for a in 0..f.len() {
            if self.upper[a].is_none() && l.leq(f[a], v[a]) && (0..f.len()).all(|b| l.leq(l.meet(v[b], f[a]), f[b])) {
                self.upper[a] = Some(m);
            }
            if self.lower[a].is_none() && l.leq(v[a], f[a]) && (0..f.len()).all(|b| l.leq(f[b], l.join(v[b], f[a]))) {
                self.lower[a] = Some(m);
            }
        }
    }

    fn build(&self, l: &FiniteLattice, terms: &[Arc<Term>]) -> Option<Term> {
        let konst = |x: ElementId| Term::constant(l.name(x));
        if let Some(m) = self.exact {
            return Some((*terms[m]).clone());
        }
        if !self.synth {
            return None;
        }
        let (parts, unit, absorb, joins) = if self.upper.iter().all(Option::is_some) {
            (&self.upper, l.top(), l.bottom(), true)
        } else if self.lower.iter().all(Option::is_some) {
            (&self.lower, l.bottom(), l.top(), false)
        } else {
            return None;
        };
        let mut seen = HashSet::new();
        let mut out: Option<Term> = None;
        for (a, m) in parts.iter().enumerate() {
            let fa = self.want[a];
            if fa == absorb || !seen.insert((m.unwrap(), fa)) {
                continue;
            }
            let t = (*terms[m.unwrap()]).clone();
            let piece = match (fa == unit, joins) {
                (true, _) => t,
                (false, true) => Term::meet(t, konst(fa)),
                (false, false) => Term::join(t, konst(fa)),
            };
            out = Some(match out {
                None => piece,
                Some(acc) if joins => Term::join(acc, piece),
                Some(acc) => Term::meet(acc, piece),
            });
        }
        Some(out.unwrap_or_else(|| konst(absorb)))
    }
}

/// Like [`interpolate_all`], but when no single member matches a table it
/// falls back to combining members with constants: a join of
/// `t_a(x) ∧ f(a)` over the domain, or dually a meet of `s_a(x) ∨ f(a)`.
/// The result is still a polynomial agreeing with `f` on its domain, though
/// not necessarily a shortest one. Every returned term is checked by
/// evaluation.
pub fn interpolate_or_synthesize<S: Structure + ?Sized>(
    s: &S,
    fs: &[&FunctionTable],
    opts: &ClosureOptions,
) -> Result<Vec<Interpolation>, ClosureError> {
    solve(s, fs, opts, true)
}

fn solve<S: Structure + ?Sized>(
    s: &S,
    fs: &[&FunctionTable],
    opts: &ClosureOptions,
    synth: bool,
) -> Result<Vec<Interpolation>, ClosureError> {
    let l = s.lattice();
    let mut out: Vec<Option<Interpolation>> = vec![None; fs.len()];
    for (i, f) in fs.iter().enumerate() {
        if f.is_empty() {
            out[i] = Some(Interpolation::Found(Term::constant(l.name(l.bottom()))));
        } else if opts.mode == Mode::LatticeOnly && !monotone_check(f, l).monotone {
            out[i] = Some(Interpolation::NotRepresentable);
        }
    }
    let mut groups: Vec<(Vec<Vec<ElementId>>, usize, Vec<usize>)> = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        if out[i].is_some() {
            continue;
        }
        let dom: Vec<Vec<ElementId>> = f.entries().map(|(k, _)| k.to_vec()).collect();
        match groups.iter_mut().find(|g| g.0 == dom && g.1 == f.arity()) {
            Some(g) => g.2.push(i),
            None => groups.push((dom, f.arity(), vec![i])),
        }
    }
    for (dom, arity, members) in groups {
        let mut goals: Vec<Goal> = members
            .iter()
            .map(|&i| {
                let want: Vec<ElementId> = fs[i].entries().map(|(_, v)| v).collect();
                let k = want.len();
                Goal { dom: dom.clone(), want, exact: None, upper: vec![None; k], lower: vec![None; k], synth }
            })
            .collect();
        let mut seen = 0;
        let c = explore(s, arity, dom.clone(), opts, &mut |v| {
            for g in goals.iter_mut() {
                g.see(l, seen, v);
            }
            seen += 1;
            goals.iter().all(|g| g.done(seen))
        })?;
        for (&i, g) in members.iter().zip(&goals) {
            let built = g
                .build(l, &c.terms)
                .filter(|t| g.dom.iter().zip(&g.want).all(|(pt, y)| crate::terms::eval(t, s, pt).ok() == Some(*y)));
            out[i] = Some(match built {
                Some(t) => Interpolation::Found(t),
                None if c.complete => Interpolation::NotRepresentable,
                None => Interpolation::Unknown,
            });
        }
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;
    use crate::terms::{eval, parse};
    use crate::zoo;

    fn all_self_maps(n: usize) -> Vec<Vec<ElementId>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<ElementId>| {
                    (0..n).map(move |y| {
                        let mut w = v.clone();
                        w.push(ElementId::from(y));
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn two_chain_clones() {
        let o = zoo::two_chain();
        let l = o.lattice();
        let lat = polynomial_clone(l, &ClosureOptions::new(Mode::LatticeOnly)).unwrap();
        let orth = polynomial_clone(&o, &ClosureOptions::new(Mode::Ortho)).unwrap();
        assert!(lat.is_complete() && orth.is_complete());
        let monotone: Vec<_> = all_self_maps(2)
            .into_iter()
            .filter(|v| monotone_check(&FunctionTable::unary(v).unwrap(), l).monotone)
            .collect();
        assert_eq!(lat.len(), 3);
        assert!(monotone.iter().all(|v| lat.contains(v)));
        assert_eq!(orth.len(), 4);
        assert!(all_self_maps(2).iter().all(|v| orth.contains(v)));
        assert_eq!(orth.witness(&[l.top(), l.bottom()]).unwrap(), &parse("x0 ^'").unwrap());
    }

    #[test]
    fn witnesses_evaluate_to_members() {
        for (_, o) in zoo::ortholattices() {
            for mode in [Mode::LatticeOnly, Mode::Ortho] {
                let clone = polynomial_clone(&o, &ClosureOptions::new(mode).budget(5000)).unwrap();
                for (values, t) in clone.members() {
                    for x in o.lattice().elements() {
                        assert_eq!(eval(t, &o, &[x]).unwrap(), values[x.index()]);
                    }
                }
            }
        }
    }

    #[test]
    fn completed_clone_is_closed() {
        let o = zoo::o6();
        let l = o.lattice();
        let clone = polynomial_clone(&o, &ClosureOptions::new(Mode::Ortho)).unwrap();
        assert!(clone.is_complete());
        let members: Vec<Vec<ElementId>> = clone.members().map(|(v, _)| v).collect();
        for f in &members {
            let p: Vec<ElementId> = f.iter().map(|&y| o.perp(y)).collect();
            assert!(clone.contains(&p));
            for g in &members {
                let m: Vec<ElementId> = f.iter().zip(g).map(|(&a, &b)| l.meet(a, b)).collect();
                let j: Vec<ElementId> = f.iter().zip(g).map(|(&a, &b)| l.join(a, b)).collect();
                assert!(clone.contains(&m) && clone.contains(&j));
            }
        }
    }

    #[test]
    fn strategies_agree() {
        let o = zoo::o6();
        let seq = polynomial_clone(&o, &ClosureOptions::new(Mode::Ortho).strategy(Strategy::Sequential)).unwrap();
        let par = polynomial_clone(&o, &ClosureOptions::new(Mode::Ortho)).unwrap();
        let a: Vec<_> = seq.members().map(|(v, t)| (v, t.to_string())).collect();
        let b: Vec<_> = par.members().map(|(v, t)| (v, t.to_string())).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_truncates() {
        let o = zoo::b3();
        let clone = polynomial_clone(&o, &ClosureOptions::new(Mode::Ortho).budget(12)).unwrap();
        assert!(!clone.is_complete());
        assert!(clone.len() <= 12);
    }

    #[test]
    fn interpolation_examples() {
        let b2 = zoo::b2();
        let perp = FunctionTable::from_fn(b2.lattice(), |x| b2.perp(x));
        let r = interpolate_unary(&b2, &perp, &ClosureOptions::new(Mode::Ortho)).unwrap();
        assert_eq!(r, Interpolation::Found(parse("x0 ^'").unwrap()));

        let c2 = chain(2);
        let swap = FunctionTable::unary(&[c2.top(), c2.bottom()]).unwrap();
        let r = interpolate_unary(&c2, &swap, &ClosureOptions::new(Mode::LatticeOnly)).unwrap();
        assert_eq!(r, Interpolation::NotRepresentable);

        let mo2 = zoo::mo2();
        let a = mo2.lattice().id_of("a").unwrap();
        let konst = FunctionTable::from_fn(mo2.lattice(), |_| a);
        let r = interpolate_unary(&mo2, &konst, &ClosureOptions::new(Mode::Ortho)).unwrap();
        assert_eq!(r, Interpolation::Found(parse("a").unwrap()));

        let empty = FunctionTable::new(1, mo2.len());
        let r = interpolate_unary(&mo2, &empty, &ClosureOptions::new(Mode::Ortho)).unwrap();
        assert_eq!(r, Interpolation::Found(parse("0").unwrap()));
    }

    #[test]
    fn partial_and_binary_interpolation() {
        let b2 = zoo::b2();
        let l = b2.lattice();
        let mut meet = FunctionTable::new(2, l.len());
        for x in l.elements() {
            for y in l.elements() {
                meet.insert(vec![x, y], l.meet(x, y)).unwrap();
            }
        }
        let r = interpolate(l, &meet, &ClosureOptions::new(Mode::LatticeOnly)).unwrap();
        assert_eq!(r, Interpolation::Found(parse("x0 & x1").unwrap()));
    }

    #[test]
    fn synthesis_agrees_with_exhaustive_search() {
        let o = zoo::mo2();
        let l = o.lattice();
        let clone = polynomial_clone(l, &ClosureOptions::new(Mode::LatticeOnly)).unwrap();
        assert!(clone.is_complete());
        let small = ClosureOptions::new(Mode::LatticeOnly).budget(300);
        let (mut exact, mut synthesized) = (0, 0);
        for v in all_self_maps(l.len()).into_iter().step_by(7) {
            let f = FunctionTable::unary(&v).unwrap();
            if !monotone_check(&f, l).monotone {
                continue;
            }
            exact += interpolate(l, &f, &small).unwrap().term().is_some() as usize;
            let quick = interpolate_or_synthesize(l, &[&f], &small).unwrap().pop().unwrap();
            if let Interpolation::Found(t) = &quick {
                assert!(clone.contains(&v));
                synthesized += 1;
                for x in l.elements() {
                    assert_eq!(eval(t, l, &[x]).unwrap(), f.get1(x).unwrap());
                }
            }
        }
        assert!(exact < synthesized);
    }
}
