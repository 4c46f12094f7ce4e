//! Property tests against independent oracles.

mod common;

use common::*;
use hochkit::algebra::{Bimodule, FiniteAlgebra, Hochschild};
use hochkit::linalg::{kernel_basis, ExactMatrix};
use hochkit::scalar::Scalar;
use proptest::prelude::*;

fn arb_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..5, 1usize..5, any::<u64>()).prop_map(|(r, c, seed)| {
        let mut g = rng(seed);
        let rows: Vec<Vec<Scalar>> = (0..r).map(|_| (0..c).map(|_| if rand::Rng::gen_bool(&mut g, 0.3) { Scalar::zero() } else { scalar(&mut g, false) }).collect()).collect();
        ExactMatrix::from_rows(&rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_agrees_with_bareiss(m in arb_matrix()) {
        prop_assert_eq!(m.rank(), bareiss_rank(&matrix_rows(&m)));
        prop_assert_eq!(m.rank() + kernel_basis(&m).len(), m.cols());
        for v in kernel_basis(&m) {
            prop_assert!(m.mul_vec(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn hh_agrees_with_bar_oracle(seed in any::<u64>()) {
        let a = algebra(&mut rng(seed), false);
        let m = Bimodule::diagonal(&a);
        let dims: Vec<usize> = Hochschild::new(&a, &m).cohomology(2).unwrap().iter().map(|h| h.dim).collect();
        prop_assert_eq!(dims, bar_hh_dims(&a, 2));
    }
}

#[test]
fn bar_oracle_on_known_algebras() {
    assert_eq!(bar_hh_dims(&FiniteAlgebra::field(), 2), [1, 0, 0]);
    assert_eq!(bar_hh_dims(&FiniteAlgebra::upper_triangular(2), 2), [1, 0, 0]);
    assert_eq!(bar_hh_dims(&FiniteAlgebra::quadratic(Scalar::q()), 2), [2, 0, 0]);
}
