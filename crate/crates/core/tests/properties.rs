//! Structural invariants on random data.

mod common;

use std::collections::BTreeMap;

use common::*;
use hochkit::ainf::{AInfCochain, AInfHochschild};
use hochkit::algebra::{self, Bimodule, Hochschild};
use hochkit::deform::{self, FirstOrderDeformation};
use hochkit::diagram::{self, AlgebraDiagram, GsCochain, Poset};
use hochkit::io::{self, AInfSpec, AlgebraSpec};
use hochkit::linalg::SparseVec;
use hochkit::scalar::{Derivation, Scalar};
use proptest::prelude::*;
use rand::Rng;

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    any::<u64>().prop_map(|s| scalar(&mut rng(s), false))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a.clone());
        // Leibniz rule for d/dq
        prop_assert_eq!((&a * &b).d_dq(), &(&a.d_dq() * &b) + &(&a * &b.d_dq()));
    }

    #[test]
    fn hochschild_differential_squares_to_zero(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = algebra(&mut g, false);
        let m = Bimodule::diagonal(&a);
        let h = Hochschild::new(&a, &m);
        for r in 0..3 {
            let f = cochain(&mut g, r, a.dim(), a.dim(), false);
            prop_assert!(h.delta(&h.delta(&f).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn hh_is_basis_independent(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = algebra(&mut g, true);
        let b = a.change_basis(&invertible(&mut g, a.dim(), true)).unwrap();
        let dims = |x: &hochkit::algebra::FiniteAlgebra| {
            let m = Bimodule::diagonal(x);
            Hochschild::new(x, &m).cohomology(2).unwrap().iter().map(|h| h.dim).collect::<Vec<_>>()
        };
        prop_assert_eq!(dims(&a), dims(&b));
    }

    #[test]
    fn cup_of_cocycles_is_a_cocycle(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = algebra(&mut g, true);
        let m = Bimodule::diagonal(&a);
        let h = Hochschild::new(&a, &m);
        let hh = h.cohomology(2).unwrap();
        let z1 = two_cocycle(&mut g, &a, true);
        for x in hh[1].representatives.iter().chain(std::iter::once(&z1)) {
            for y in &hh[1].representatives {
                let p = algebra::cup(&a, x, y).unwrap();
                prop_assert!(h.delta(&p).unwrap().is_zero());
            }
        }
        // a coboundary times a cocycle is a coboundary
        if let Some(y) = hh[1].representatives.first() {
            let b = h.delta(&cochain(&mut g, 1, a.dim(), a.dim(), true)).unwrap();
            prop_assert!(h.is_coboundary(&algebra::cup(&a, &b, y).unwrap()).unwrap());
        }
    }

    #[test]
    fn coboundary_deformations_are_trivial(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = algebra(&mut g, false);
        let m = Bimodule::diagonal(&a);
        let b = Hochschild::new(&a, &m).delta(&cochain(&mut g, 1, a.dim(), a.dim(), false)).unwrap();
        let def = FirstOrderDeformation::new(a, vec![b]).unwrap();
        prop_assert!(deform::class_of(&def).unwrap().is_zero());
    }

    #[test]
    fn algebra_json_round_trip(seed in any::<u64>()) {
        let a = algebra(&mut rng(seed), false);
        let text = serde_json::to_string(&AlgebraSpec::from_algebra(&a)).unwrap();
        prop_assert_eq!(io::parse_algebra(&text).unwrap(), a);
    }
}

fn random_gs_cochain(g: &mut rand_chacha::ChaCha8Rng, d: &AlgebraDiagram, degree: usize) -> GsCochain {
    let mut components = BTreeMap::new();
    for p in 0..=degree.min(d.poset().height()) {
        for (k, s) in d.poset().simplices(p).iter().enumerate() {
            let (first, last) = (s[0], s[s.len() - 1]);
            let f = cochain(g, degree - p, d.algebra(last).dim(), d.algebra(first).dim(), false);
            components.insert((p, k), f);
        }
    }
    GsCochain { degree, components }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gs_differential_squares_to_zero(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = algebra(&mut g, false);
        let d = match g.gen_range(0..3) {
            0 => AlgebraDiagram::constant(Poset::chain(2), a),
            1 => AlgebraDiagram::constant(Poset::chain(3), a),
            _ => io::parse_diagram(include_str!("../fixtures/diagram/scaling-edge.json")).unwrap(),
        };
        let gs = diagram::gs_complex(&d, 3, algebra::DEFAULT_CAP).unwrap();
        for r in 0..2 {
            let f = random_gs_cochain(&mut g, &d, r);
            let df = gs.differential(&f).unwrap();
            prop_assert!(gs.differential(&df).unwrap().is_zero());
        }
        // the derivation cocycle is closed
        let z = diagram::gs_derivation_cocycle(&d, &Derivation::d_dq());
        prop_assert!(gs.differential(&z).unwrap().is_zero());
    }

    #[test]
    fn ainf_random_categories_are_valid(seed in any::<u64>()) {
        let mut g = rng(seed);
        let c = ainf_category(&mut g);
        prop_assert_eq!(c.validate(4), Ok(()));
        let text = serde_json::to_string(&AInfSpec::from_category(&c)).unwrap();
        prop_assert_eq!(io::parse_ainf(&text).unwrap().category, c.clone());
        // δ² = 0 on a random cochain built from composable chains
        let h = AInfHochschild::new(&c, 4, c.arity()).unwrap();
        let mut terms = Vec::new();
        for _ in 0..4 {
            let len = g.gen_range(1..=2);
            let mut ins = vec![g.gen_range(0..c.dim())];
            while ins.len() < len {
                let next: Vec<usize> = (0..c.dim()).filter(|&k| c.generators()[k].source == c.generators()[*ins.last().unwrap()].target).collect();
                ins.push(next[g.gen_range(0..next.len())]);
            }
            let out = g.gen_range(0..c.dim());
            let (s, t) = (c.generators()[ins[0]].source, c.generators()[*ins.last().unwrap()].target);
            if c.generators()[out].source == s && c.generators()[out].target == t {
                terms.push((c.cell(ins), SparseVec::from_pairs(vec![(out, scalar(&mut g, false))])));
            }
        }
        let f = AInfCochain::from_terms(terms);
        prop_assert!(h.delta(&h.delta(&f)).is_zero());
    }
}
