//! Additive weight gradings compatible with a set of structure constants.
//!
//! If every nonzero structure constant sends inputs of weights `w_1, ..., w_s`
//! to an output of weight `w_1 + ... + w_s`, then all Hochschild-type
//! differentials preserve the total weight `w(out) - sum w(in)` of a cell, and
//! complexes split into independent weight blocks. The finest such grading is
//! the integer solution space of the homogeneity equations.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::linalg::{kernel_basis, ExactMatrix, SparseVec};
use crate::scalar::Scalar;

pub type Weight = Vec<i64>;

/// Collects homogeneity equations over a fixed set of variables.
#[derive(Clone, Debug, Default)]
pub struct WeightSolver {
    vars: usize,
    /// `(output, sorted inputs)`; a relation with no inputs forces weight zero.
    relations: BTreeSet<(usize, Vec<usize>)>,
}

impl WeightSolver {
    pub fn new(vars: usize) -> Self {
        WeightSolver { vars, relations: BTreeSet::new() }
    }

    /// Require `w(out) = sum of w(inputs)`.
    pub fn relate(&mut self, out: usize, inputs: &[usize]) {
        let mut ins = inputs.to_vec();
        ins.sort_unstable();
        self.relations.insert((out, ins));
    }

    /// Require `w(v) = 0`.
    pub fn fix_zero(&mut self, v: usize) {
        self.relations.insert((v, Vec::new()));
    }

    /// Integer weights for every variable; all vectors have the same length.
    pub fn solve(&self) -> Vec<Weight> {
        let rows: Vec<Vec<Scalar>> = self
            .relations
            .iter()
            .map(|(out, ins)| {
                let mut row = vec![0i64; self.vars];
                row[*out] += 1;
                for i in ins {
                    row[*i] -= 1;
                }
                row.into_iter().map(Scalar::int).collect()
            })
            .collect();
        let basis = if rows.is_empty() {
            (0..self.vars).map(SparseVec::unit).collect()
        } else {
            kernel_basis(&ExactMatrix::from_rows(&rows).expect("rectangular"))
        };
        let integral: Vec<Vec<i64>> = basis.iter().map(|v| integerize(&v.to_dense(self.vars))).collect();
        (0..self.vars).map(|x| integral.iter().map(|col| col[x]).collect()).collect()
    }
}

fn integerize(v: &[Scalar]) -> Vec<i64> {
    let rats: Vec<_> = v.iter().map(|s| s.as_rational().expect("weight equations are rational").clone()).collect();
    let lcm = rats.iter().fold(num_bigint::BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<num_bigint::BigInt> = rats.iter().map(|r| (r * &lcm).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_positive() { x / &g } else { x.clone() };
            y.to_i64().expect("weights fit in i64")
        })
        .collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn zero(rank: usize) -> Weight {
    vec![0; rank]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_pair_has_two_free_weights() {
        // basis 1, x, y, xy
        let mut s = WeightSolver::new(4);
        s.fix_zero(0);
        for i in 0..4 {
            s.relate(i, &[0, i]);
        }
        s.relate(3, &[1, 2]);
        let w = s.solve();
        assert_eq!(w[0], vec![0, 0]);
        assert_eq!(add(&w[1], &w[2]), w[3]);
        assert_ne!(w[1], w[2]);
    }

    #[test]
    fn idempotent_forces_zero() {
        let mut s = WeightSolver::new(2);
        s.relate(1, &[1, 1]);
        let w = s.solve();
        assert_eq!(w[1], vec![0]);
        assert_eq!(w[0], vec![1]);
    }
}
