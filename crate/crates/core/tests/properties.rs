use std::sync::Arc;

use proptest::prelude::*;

use ortholattice::construct::horizontal_sum_ortho;
use ortholattice::gen::{self, random_lattice, random_ortholattice};
use ortholattice::{eval, nnf, parse, validate_ortho, zoo, ElementId, FiniteLattice, Term};

fn term(consts: &'static [&'static str], perp: bool) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0u32..3).prop_map(Term::var), proptest::sample::select(consts).prop_map(Term::constant),];
    leaf.prop_recursive(6, 64, 2, move |inner| {
        let bin = prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::meet(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::join(a, b)),
        ];
        if perp {
            prop_oneof![bin, inner.prop_map(Term::perp)].boxed()
        } else {
            bin.boxed()
        }
    })
}

fn lattice_from(seed: u64) -> Option<FiniteLattice> {
    random_lattice(&mut gen::rng(seed), 5, 10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(t in term(&["0", "1", "a", "b'"], true)) {
        let text = t.to_string();
        prop_assert_eq!(parse(&text).unwrap(), t);
    }

    #[test]
    fn nnf_preserves_meaning_on_hexagon(t in term(&["0", "1", "a", "b", "a'", "b'"], true)) {
        let o = zoo::o6();
        let n = nnf(&t);
        prop_assert!(n.term().is_nnf());
        for x in o.lattice().elements() {
            for y in o.lattice().elements() {
                for z in [o.lattice().bottom(), o.lattice().top()] {
                    let args = [x, y, z];
                    prop_assert_eq!(eval(&t, &o, &args).unwrap(), eval(n.term(), &o, &args).unwrap());
                }
            }
        }
    }

    #[test]
    fn lattice_polynomials_are_monotone(t in term(&["0", "1", "a", "b"], false)) {
        let b2 = zoo::b2();
        let l = b2.lattice();
        for x in l.elements() {
            for y in l.elements().filter(|&y| l.leq(x, y)) {
                let args_x = [x, x, x];
                let args_y = [y, y, y];
                prop_assert!(l.leq(eval(&t, l, &args_x).unwrap(), eval(&t, l, &args_y).unwrap()));
            }
        }
    }

    #[test]
    fn lattice_laws(seed in any::<u64>()) {
        let Some(l) = lattice_from(seed) else { return Ok(()) };
        let els: Vec<ElementId> = l.elements().collect();
        for &x in &els {
            prop_assert_eq!(l.meet(x, x), x);
            prop_assert_eq!(l.join(x, l.bottom()), x);
            prop_assert_eq!(l.meet(x, l.top()), x);
            for &y in &els {
                prop_assert_eq!(l.meet(x, y), l.meet(y, x));
                prop_assert_eq!(l.join(x, l.meet(x, y)), x);
                prop_assert_eq!(l.meet(x, l.join(x, y)), x);
                prop_assert_eq!(l.leq(x, y), l.meet(x, y) == x);
                for &z in &els {
                    prop_assert_eq!(l.meet(l.meet(x, y), z), l.meet(x, l.meet(y, z)));
                    prop_assert_eq!(l.join(l.join(x, y), z), l.join(x, l.join(y, z)));
                }
            }
        }
    }

    #[test]
    fn dual_is_an_involution(seed in any::<u64>()) {
        let Some(l) = lattice_from(seed) else { return Ok(()) };
        let d = l.dual();
        prop_assert!(d.dual().is_isomorphic(&l));
        for x in l.elements() {
            for y in l.elements() {
                prop_assert_eq!(l.leq(x, y), d.leq(y, x));
            }
        }
    }

    #[test]
    fn random_ortholattices_validate(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let Some(o) = random_ortholattice(&mut rng, 16) else { return Ok(()) };
        prop_assert!(validate_ortho(Arc::clone(o.lattice_arc()), o.perp_table().to_vec()).is_ok());
        let Some(p) = random_ortholattice(&mut rng, 8) else { return Ok(()) };
        let sum = horizontal_sum_ortho(&o, &p, 64).unwrap();
        prop_assert_eq!(sum.lattice.len(), o.len() + p.len() - 2);
    }
}
