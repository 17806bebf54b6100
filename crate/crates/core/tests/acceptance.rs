//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits non-zero if any fails. Every verdict is computed against a brute
//! force oracle written here, not against the library's own checks.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use ortholattice::construct::{glued_union, ortho_construction};
use ortholattice::dot::{ortho_dot, DotOptions};
use ortholattice::gen::{
    self, random_dual_extension, random_extension, random_ortholattice, random_term, random_unary,
};
use ortholattice::interp::{
    antichain_lift, extend_pipeline, monotone_check, nary_reduce, polynomial_clone, ClosureOptions, ExtensionSource,
    FunctionTable, Interpolation, Mode, NaryOptions, SearchParams,
};
use ortholattice::io::{to_json, PipelineReport};
use ortholattice::lattice::chain;
use ortholattice::morphism::{check_sub01, check_subortholattice, check_triangle, sup_agreement};
use ortholattice::{nnf, zoo, ElementId, Embedding, FiniteLattice, Ortholattice, Strategy, Term, DEFAULT_SIZE_CAP};

const GLUED_INSTANCES: usize = 200;
const GLUED_MAX_SIZE: usize = 12;
const GLUED_TIME_LIMIT: Duration = Duration::from_secs(60);
const CLONE_TIME_LIMIT: Duration = Duration::from_secs(1);
const ANTICHAIN_FUNCTIONS: usize = 50;
const PIPELINE_RUNS: usize = 1000;
const NNF_TERMS: usize = 500;
const NNF_DEPTH: usize = 6;
const NARY_MAX_POINTS: usize = 4;
const TOWERS: usize = 50;
const SUP_MAX_SIZE: usize = 8;
const SEED: u64 = 20_240_601;

// ---------- oracles ----------

fn leq_closure(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in pairs {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let row = r[k].clone();
                for (cell, &via) in r[i].iter_mut().zip(&row) {
                    *cell |= via;
                }
            }
        }
    }
    r
}

/// Greatest lower bound by scanning the order; `None` if there is none.
fn glb(r: &[Vec<bool>], x: usize, y: usize) -> Option<usize> {
    let lower: Vec<usize> = (0..r.len()).filter(|&z| r[z][x] && r[z][y]).collect();
    lower.iter().copied().find(|&z| lower.iter().all(|&w| r[w][z]))
}

fn lub(r: &[Vec<bool>], x: usize, y: usize) -> Option<usize> {
    let upper: Vec<usize> = (0..r.len()).filter(|&z| r[x][z] && r[y][z]).collect();
    upper.iter().copied().find(|&z| upper.iter().all(|&w| r[z][w]))
}

fn order_of(l: &FiniteLattice) -> Vec<Vec<bool>> {
    let n = l.len();
    (0..n).map(|i| (0..n).map(|j| l.leq(i.into(), j.into())).collect()).collect()
}

fn set_sup(r: &[Vec<bool>], set: &[usize], bottom: usize) -> usize {
    set.iter().fold(bottom, |acc, &x| lub(r, acc, x).expect("lattice"))
}

/// Table-driven evaluator for hot loops.
struct Tables {
    n: usize,
    meet: Vec<usize>,
    join: Vec<usize>,
    perp: Option<Vec<usize>>,
    index: std::collections::HashMap<String, usize>,
}

impl Tables {
    fn new(l: &FiniteLattice, perp: Option<&[ElementId]>) -> Self {
        let r = order_of(l);
        let n = l.len();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                meet[x * n + y] = glb(&r, x, y).expect("meet");
                join[x * n + y] = lub(&r, x, y).expect("join");
            }
        }
        let index = l.names().iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Tables { n, meet, join, perp: perp.map(|p| p.iter().map(|x| x.index()).collect()), index }
    }

    fn ev(&self, t: &Term, args: &[usize]) -> usize {
        match t {
            Term::Var(i) => args[*i as usize],
            Term::Const(c) => self.index[&**c],
            Term::Meet(a, b) => self.meet[self.ev(a, args) * self.n + self.ev(b, args)],
            Term::Join(a, b) => self.join[self.ev(a, args) * self.n + self.ev(b, args)],
            Term::Perp(a) => self.perp.as_ref().expect("ortho")[self.ev(a, args)],
        }
    }
}

fn ortho_axioms_hold(l: &FiniteLattice, perp: &[ElementId]) -> bool {
    let r = order_of(l);
    let n = l.len();
    let p = |x: usize| perp[x].index();
    let (bot, top) = (l.bottom().index(), l.top().index());
    (0..n).all(|x| p(p(x)) == x)
        && (0..n).all(|x| (0..n).all(|y| !r[x][y] || r[p(y)][p(x)]))
        && (0..n).all(|x| lub(&r, x, p(x)) == Some(top) && glb(&r, x, p(x)) == Some(bot))
}

/// Greatest source element whose image lies below `x`.
fn brute_projection(e: &Embedding, x: ElementId) -> Option<ElementId> {
    let (s, t) = (e.source(), e.target());
    let below: Vec<ElementId> = s.elements().filter(|&z| t.leq(e.apply(z), x)).collect();
    below.iter().copied().find(|&z| below.iter().all(|&w| s.leq(w, z)))
}

fn image_convex(e: &Embedding) -> bool {
    let t = e.target();
    let img: BTreeSet<ElementId> = e.map().iter().copied().collect();
    let inner: Vec<ElementId> = img.iter().copied().filter(|&a| a != t.bottom() && a != t.top()).collect();
    inner.iter().all(|&a| {
        inner.iter().all(|&b| !t.leq(a, b) || t.elements().all(|x| !(t.leq(a, x) && t.leq(x, b)) || img.contains(&x)))
    })
}

// ---------- instance family ----------

struct Instance {
    o0: Ortholattice,
    up: Embedding,
    down: Embedding,
}

fn instances(rng: &mut impl Rng, count: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    while out.len() < count {
        let Some(o0) = random_ortholattice(rng, 6) else { continue };
        let l0 = o0.lattice_arc().clone();
        let room = GLUED_MAX_SIZE - l0.len();
        let extra = rng.gen_range(1..=3);
        let Some(up) = random_extension(rng, &l0, extra, l0.len() + room - 1) else { continue };
        let left = GLUED_MAX_SIZE + l0.len() - up.target().len();
        if left <= l0.len() {
            continue;
        }
        let extra = rng.gen_range(1..=3);
        let Some(down) = random_dual_extension(rng, &l0, extra, left) else { continue };
        out.push(Instance { o0, up, down });
    }
    out
}

// ---------- checks ----------

struct Verdict {
    pass: bool,
    detail: String,
}

fn glued_union_oracle(family: &[Instance]) -> Verdict {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut max_size = 0;
    for inst in family {
        let g = match glued_union(&inst.up, &inst.down, DEFAULT_SIZE_CAP) {
            Ok(g) => g,
            Err(_) => {
                mismatches += 1;
                continue;
            }
        };
        let l = &g.lattice;
        max_size = max_size.max(l.len());
        let (i1, i2) = (g.embedding("L1"), g.embedding("L2"));
        let mut pairs = Vec::new();
        for (e, lat) in [(i1, inst.up.target()), (i2, inst.down.target())] {
            for x in lat.elements() {
                for y in lat.elements() {
                    if lat.leq(x, y) {
                        pairs.push((e.apply(x).index(), e.apply(y).index()));
                    }
                }
            }
        }
        let r = leq_closure(l.len(), pairs);
        let order_ok = (0..l.len()).all(|x| (0..l.len()).all(|y| r[x][y] == l.leq(x.into(), y.into())));
        let ops_ok = (0..l.len()).all(|x| {
            (0..l.len()).all(|y| {
                glb(&r, x, y) == Some(l.meet(x.into(), y.into()).index())
                    && lub(&r, x, y) == Some(l.join(x.into(), y.into()).index())
            })
        });
        if !(order_ok && ops_ok) {
            mismatches += 1;
        }
    }
    let took = start.elapsed();
    Verdict {
        pass: family.len() >= GLUED_INSTANCES
            && mismatches == 0
            && max_size <= GLUED_MAX_SIZE
            && took <= GLUED_TIME_LIMIT,
        detail: format!(
            "{} instances, max |L| = {max_size}, {mismatches} mismatches, {:.2}s",
            family.len(),
            took.as_secs_f64()
        ),
    }
}

fn ortho_construction_laws(family: &[Instance]) -> Verdict {
    let mut failures = 0;
    let mut steps = 0;
    for inst in family {
        let ok = (|| {
            let r = ortho_construction(&inst.up, &inst.o0, DEFAULT_SIZE_CAP).ok()?;
            let o = r.ortho.as_ref()?;
            if !ortho_axioms_hold(&r.lattice, o.perp_table()) {
                return None;
            }
            let into = check_sub01(r.embedding("L0")).ok()?;
            check_subortholattice(&into, &inst.o0, o).ok()?;
            let (l1, l) = (inst.up.target(), &r.lattice);
            let img: BTreeSet<ElementId> = inst.up.map().iter().copied().collect();
            let iota = r.map("iota");
            let in_l = r.embedding("L1");
            let ord = order_of(l);
            for x in l1.elements().filter(|x| !img.contains(x)) {
                steps += 1;
                if lub(&ord, in_l.apply(x).index(), iota[x.index()].index()) != Some(l.top().index()) {
                    return None;
                }
            }
            Some(())
        })();
        failures += ok.is_none() as usize;
    }
    Verdict {
        pass: failures == 0,
        detail: format!("{} constructions, {steps} complement steps, {failures} failures", family.len()),
    }
}

fn two_chain_clones() -> Verdict {
    let start = Instant::now();
    let o = zoo::two_chain();
    let l = o.lattice();
    let all: Vec<Vec<ElementId>> =
        (0..4).map(|m: usize| vec![ElementId::from(m & 1), ElementId::from(m >> 1)]).collect();
    let monotone: BTreeSet<Vec<ElementId>> = all.iter().filter(|v| l.leq(v[0], v[1])).cloned().collect();
    let tables = Tables::new(l, Some(o.perp_table()));
    let mut ok = true;
    let mut sizes = Vec::new();
    for (mode, expected) in [(Mode::LatticeOnly, monotone), (Mode::Ortho, all.iter().cloned().collect())] {
        let clone = match mode {
            Mode::LatticeOnly => polynomial_clone(l, &ClosureOptions::new(mode)),
            Mode::Ortho => polynomial_clone(&o, &ClosureOptions::new(mode)),
        }
        .expect("clone");
        let got: BTreeSet<Vec<ElementId>> = clone.members().map(|(v, _)| v).collect();
        sizes.push(got.len());
        ok &= clone.is_complete() && got == expected;
        for (v, t) in clone.members() {
            ok &= l.elements().all(|x| tables.ev(t, &[x.index()]) == v[x.index()].index());
        }
    }
    let took = start.elapsed();
    Verdict {
        pass: ok && sizes == [3, 4] && took < CLONE_TIME_LIMIT,
        detail: format!("lattice-only {}, ortho {}, {:.3}s", sizes[0], sizes[1], took.as_secs_f64()),
    }
}

fn antichain_lifts(rng: &mut impl Rng) -> Verdict {
    let mut failures = 0;
    let mut runs = 0;
    for (name, o) in zoo::ortholattices() {
        if !["2-chain", "B2", "B3", "MO2", "O6"].contains(&name) {
            continue;
        }
        for _ in 0..ANTICHAIN_FUNCTIONS {
            runs += 1;
            let f = random_unary(rng, o.lattice());
            let lift = antichain_lift(&o, &f, DEFAULT_SIZE_CAP).expect("lift");
            let lp = lift.lattice();
            let a = &lift.antichain;
            let antichain = (0..a.len()).all(|i| (0..a.len()).all(|j| i == j || !lp.leq(a[i], a[j])));
            let pairs: Vec<(ElementId, ElementId)> = lift.f_bar.entries().map(|(k, v)| (k[0], v)).collect();
            let brute = pairs.iter().all(|&(u, fu)| pairs.iter().all(|&(v, fv)| !lp.leq(u, v) || lp.leq(fu, fv)));
            if !(antichain && brute && monotone_check(&lift.f_bar, lp).monotone) {
                failures += 1;
            }
        }
    }
    Verdict {
        pass: failures == 0 && runs == 5 * ANTICHAIN_FUNCTIONS,
        detail: format!("{runs} lifts, {failures} failures"),
    }
}

/// Runs the pipeline and checks any claimed success against an independent
/// evaluation of `h`. Returns (success, false success).
fn pipeline_run(o: &Ortholattice, f: &FunctionTable, params: SearchParams) -> (bool, bool) {
    let trace = extend_pipeline(o, f, &ExtensionSource::BoundedSearch(params), DEFAULT_SIZE_CAP).expect("pipeline");
    if !trace.is_success() {
        return (false, false);
    }
    let (Some(r), Some(h)) = (trace.result.as_ref(), trace.h.as_ref()) else { return (true, true) };
    let Some(lo) = r.ortho.as_ref() else { return (true, true) };
    let into = r.embedding("L0");
    let t = Tables::new(&r.lattice, Some(lo.perp_table()));
    let good =
        o.lattice().elements().all(|x| t.ev(h, &[into.apply(x).index()]) == into.apply(f.get1(x).unwrap()).index());
    (true, !good)
}

fn pipeline_soundness(rng: &mut impl Rng) -> Verdict {
    let two = zoo::two_chain();
    let l = two.lattice();
    let concrete = [
        FunctionTable::from_fn(l, |x| two.perp(x)),
        FunctionTable::from_fn(l, |_| l.bottom()),
        FunctionTable::from_fn(l, |_| l.top()),
    ];
    let concrete_ok = concrete.iter().all(|f| pipeline_run(&two, f, SearchParams::default()) == (true, false));

    let quick = SearchParams { depth: 1, budget: 1_000, ..SearchParams::default() };
    let pool: Vec<(Ortholattice, SearchParams, usize)> = vec![
        (zoo::two_chain(), SearchParams::default(), 400),
        (zoo::b2(), SearchParams::default(), 450),
        (zoo::mo2(), quick.clone(), 80),
        (zoo::b3(), quick.clone(), 40),
        (zoo::o6(), SearchParams { depth: 0, ..quick }, 30),
    ];
    let (mut runs, mut successes, mut false_successes) = (0, 0, 0);
    for (o, params, count) in &pool {
        for _ in 0..*count {
            let f = random_unary(rng, o.lattice());
            let (ok, bad) = pipeline_run(o, &f, params.clone());
            runs += 1;
            successes += ok as usize;
            false_successes += bad as usize;
        }
    }
    Verdict {
        pass: concrete_ok && runs >= PIPELINE_RUNS && false_successes == 0,
        detail: format!(
            "2-chain perp/constants {}, {runs} random runs, {successes} verified successes, {false_successes} false",
            if concrete_ok { "succeed" } else { "FAIL" }
        ),
    }
}

fn in_nnf(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::Perp(a) => matches!(**a, Term::Var(_) | Term::Const(_)),
        Term::Meet(a, b) | Term::Join(a, b) => in_nnf(a) && in_nnf(b),
    }
}

fn nnf_equivalence(rng: &mut impl Rng) -> Verdict {
    let mut mismatches = 0;
    let mut shape = 0;
    let mut assignments = 0usize;
    for o in [zoo::mo2(), zoo::o6()] {
        let l = o.lattice();
        let names: Vec<&str> = l.names().iter().map(String::as_str).collect();
        let t = Tables::new(l, Some(o.perp_table()));
        for _ in 0..NNF_TERMS {
            let term = random_term(rng, NNF_DEPTH, 2, &names, true);
            let normal = nnf(&term);
            if !in_nnf(normal.term()) {
                shape += 1;
            }
            for x in 0..l.len() {
                for y in 0..l.len() {
                    assignments += 1;
                    if t.ev(&term, &[x, y]) != t.ev(normal.term(), &[x, y]) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    Verdict {
        pass: mismatches == 0 && shape == 0,
        detail: format!(
            "{} terms, {assignments} assignments, {mismatches} mismatches, {shape} shape violations",
            2 * NNF_TERMS
        ),
    }
}

fn nary_on_b2(rng: &mut impl Rng) -> Verdict {
    let b2 = zoo::b2();
    let l = b2.lattice_arc().clone();
    let pairs: Vec<(ElementId, ElementId)> = l.elements().flat_map(|x| l.elements().map(move |y| (x, y))).collect();
    let (mut runs, mut failures) = (0, 0);
    for k in 1..=NARY_MAX_POINTS {
        for _ in 0..6 {
            let pts: Vec<(ElementId, ElementId)> = pairs.choose_multiple(rng, k).copied().collect();
            for which in 0..2 {
                runs += 1;
                let op = |x, y| if which == 0 { l.meet(x, y) } else { l.join(x, y) };
                let mut g = FunctionTable::new(2, l.len());
                for &(x, y) in &pts {
                    g.insert(vec![x, y], op(x, y)).unwrap();
                }
                let ok = (|| {
                    let r = nary_reduce(&l, None, &g, &NaryOptions::default()).ok()?;
                    let Interpolation::Found(t) = &r.result else { return None };
                    let pw = r.power.as_ref()?;
                    let amb = &pw.ambient.lattice;
                    let tables = Tables::new(amb, None);
                    for &(x, y) in &pts {
                        let got = tables.ev(t, &[pw.base.apply(x).index(), pw.base.apply(y).index()]);
                        if got != pw.base.apply(op(x, y)).index() {
                            return None;
                        }
                    }
                    // ι(s) = ι₁(s₁) ∨ ι₂(s₂) on all of S²
                    let ord = order_of(amb);
                    let s = pw.subset.len();
                    for a in 0..s {
                        for b in 0..s {
                            let joined = lub(&ord, pw.coordinate(0, a).index(), pw.coordinate(1, b).index())?;
                            if joined != pw.iota_of(&[a, b]).index() {
                                return None;
                            }
                        }
                    }
                    Some(())
                })();
                failures += ok.is_none() as usize;
            }
        }
    }
    Verdict {
        pass: failures == 0,
        detail: format!("{runs} reductions (meet and join, |A| <= {NARY_MAX_POINTS}), {failures} failures"),
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<ElementId>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).map(ElementId::from).collect())
}

fn morphism_laws(rng: &mut impl Rng) -> Verdict {
    // towers
    let mut tower_failures = 0;
    let mut built = 0;
    while built < TOWERS {
        let Some(o0) = random_ortholattice(rng, 6) else { continue };
        let l0 = o0.lattice_arc().clone();
        let Some(e1) = random_extension(rng, &l0, 2, 16) else { continue };
        let Some(e2) = random_extension(rng, e1.target(), 2, 24) else { continue };
        let Some(e3) = random_extension(rng, e2.target(), 2, 32) else { continue };
        built += 1;
        let ok = (|| {
            let (_, p1) = check_triangle(&e1).ok()?;
            let (_, p2) = check_triangle(&e2).ok()?;
            let (_, p3) = check_triangle(&e3).ok()?;
            let composite = e1.then(&e2).ok()?.then(&e3).ok()?;
            let (composite, p) = check_triangle(&check_sub01(&composite).ok()?).ok()?;
            let chained = p1.after(&p2).after(&p3);
            composite
                .target()
                .elements()
                .all(|x| {
                    let brute = brute_projection(&composite, x);
                    brute == Some(p.project(x)) && brute == Some(chained.project(x))
                })
                .then_some(())
        })();
        tower_failures += ok.is_none() as usize;
    }

    // sup agreement
    let mut embeddings: Vec<Embedding> = Vec::new();
    let five = Arc::new(chain(5));
    let sub = Arc::new(chain(4));
    // {0 < 1 < 3 < 4} inside the 5-chain skips an element: not convex
    embeddings
        .push(check_sub01(&Embedding::new(sub, five, [0, 1, 3, 4].map(ElementId::from).to_vec()).unwrap()).unwrap());
    while embeddings.len() < 40 {
        let base: Arc<FiniteLattice> = match rng.gen_range(0..3) {
            0 => Arc::new(chain(rng.gen_range(2..5))),
            1 => zoo::b2().lattice_arc().clone(),
            _ => match gen::random_lattice(rng, 3, 5) {
                Some(l) => Arc::new(l),
                None => continue,
            },
        };
        let e = if rng.gen_bool(0.5) {
            random_extension(rng, &base, 3, SUP_MAX_SIZE)
        } else {
            random_dual_extension(rng, &base, 3, SUP_MAX_SIZE)
        };
        if let Some(e) = e {
            embeddings.push(e);
        }
    }
    let (mut checked, mut violations, mut equalities) = (0, 0, 0);
    for e in &embeddings {
        let (s, t) = (e.source(), e.target());
        let (rs, rt) = (order_of(s), order_of(t));
        let convex = image_convex(e);
        for a in subsets(s.len()) {
            checked += 1;
            let idx: Vec<usize> = a.iter().map(|x| x.index()).collect();
            let sup_s = set_sup(&rs, &idx, s.bottom().index());
            let img: Vec<usize> = a.iter().map(|&x| e.apply(x).index()).collect();
            let sup_t = set_sup(&rt, &img, t.bottom().index());
            let image_of_sup = e.apply(sup_s.into()).index();
            let report = sup_agreement(e, &a).expect("sub01");
            let mut bad = !rt[sup_t][image_of_sup] || report.target_sup.index() != sup_t;
            if convex && sup_s != s.top().index() {
                equalities += 1;
                bad |= sup_t != image_of_sup;
            }
            violations += bad as usize;
        }
    }
    Verdict {
        pass: tower_failures == 0 && built == TOWERS && violations == 0,
        detail: format!(
            "{built} towers, {tower_failures} failures; {checked} subsets over {} embeddings, {equalities} equality cases, {violations} violations",
            embeddings.len()
        ),
    }
}

fn determinism() -> Verdict {
    let run = |strategy: Strategy| {
        let mut rng = gen::rng(SEED);
        let mut out = String::new();
        for o in [zoo::two_chain(), zoo::b2()] {
            for _ in 0..3 {
                let f = random_unary(&mut rng, o.lattice());
                let params = SearchParams { strategy, ..SearchParams::default() };
                let trace = extend_pipeline(&o, &f, &ExtensionSource::BoundedSearch(params), DEFAULT_SIZE_CAP).unwrap();
                out.push_str(&to_json(&PipelineReport::from(&trace)));
                if let Some(lo) = trace.ortholattice() {
                    out.push_str(&ortho_dot(lo, "L", DotOptions { perp: true }));
                }
            }
        }
        let o = random_ortholattice(&mut rng, 12).unwrap();
        out.push_str(&ortho_dot(&o, "random", DotOptions { perp: true }));
        out
    };
    let first = run(Strategy::default());
    let second = run(Strategy::default());
    let sequential = run(Strategy::Sequential);
    Verdict {
        pass: first == second && first == sequential,
        detail: format!(
            "{} bytes; repeat {}, sequential {}",
            first.len(),
            if first == second { "identical" } else { "DIFFERS" },
            if first == sequential { "identical" } else { "DIFFERS" }
        ),
    }
}

type Check<'a> = Box<dyn FnOnce(&mut rand_chacha::ChaCha8Rng) -> Verdict + 'a>;

fn main() -> ExitCode {
    let mut rng = gen::rng(SEED);
    let family = instances(&mut rng, GLUED_INSTANCES);
    let checks: Vec<(&str, Check)> = vec![
        ("glued-union oracle", Box::new(|_| glued_union_oracle(&family))),
        ("orthocomplement construction", Box::new(|_| ortho_construction_laws(&family))),
        ("2-chain clones", Box::new(|_| two_chain_clones())),
        ("antichain lift", Box::new(antichain_lifts)),
        ("pipeline soundness", Box::new(pipeline_soundness)),
        ("nnf equivalence", Box::new(nnf_equivalence)),
        ("n-ary reduction on B2", Box::new(nary_on_b2)),
        ("morphism laws", Box::new(morphism_laws)),
        ("determinism", Box::new(|_| determinism())),
    ];
    let mut all = true;
    for (i, (name, check)) in checks.into_iter().enumerate() {
        let v = check(&mut rng);
        all &= v.pass;
        println!("{} {}. {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
