//! Finite-dimensional unital associative algebras, bimodules, and their
//! Hochschild cochain and chain complexes.
//!
//! A Hochschild `r`-cochain with values in a bimodule `M` is stored as a sparse
//! vector over flattened cells `(i_1, ..., i_r; o)`, meaning the coefficient of
//! the basis vector `m_o` in `f(e_{i_1}, ..., e_{i_r})`. The differential is
//!
//! ```text
//! (δf)(a_1..a_{r+1}) = a_1 f(a_2..) + Σ_i (-1)^i f(.., a_i a_{i+1}, ..) + (-1)^{r+1} f(..a_r) a_{r+1}
//! ```
//!
//! on the unreduced bar complex. Complexes are split into weight blocks (see
//! [`crate::weights`]) so that only the block containing a cochain of interest
//! has to be materialized.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::complex::CellComplex;
use crate::complex::FiniteComplex;
use crate::error::{Error, Result};
use crate::linalg::{inverse, Echelon, ExactMatrix, SparseVec};
use crate::scalar::Scalar;
use crate::weights::{self, Weight, WeightSolver};

/// Default bound on the number of cells enumerated in one degree.
pub const DEFAULT_CAP: u128 = 2_000_000;

/// Default top degree for Hochschild computations.
pub const DEFAULT_MAX_DEGREE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    labels: Vec<String>,
    degrees: Option<Vec<i64>>,
    unit: SparseVec,
    mul: Vec<Vec<SparseVec>>,
}

/// First failing identity found by [`FiniteAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LeftUnit { i: usize },
    RightUnit { i: usize },
    Associativity { i: usize, j: usize, k: usize },
    Degree { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LeftUnit { i } => write!(f, "unitality fails: 1*e{i} != e{i}"),
            Violation::RightUnit { i } => write!(f, "unitality fails: e{i}*1 != e{i}"),
            Violation::Associativity { i, j, k } => {
                write!(f, "associativity fails at (e{i}, e{j}, e{k})")
            }
            Violation::Degree { i, j } => write!(f, "product e{i}*e{j} is not homogeneous of degree |e{i}|+|e{j}|"),
        }
    }
}

impl FiniteAlgebra {
    /// `mul[i][j]` is the coefficient vector of `e_i e_j`.
    pub fn new(labels: Vec<String>, degrees: Option<Vec<i64>>, unit: Vec<Scalar>, mul: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let n = labels.len();
        if unit.len() != n {
            return Err(Error::DimensionMismatch(format!("unit has {} coefficients for {n} basis elements", unit.len())));
        }
        if degrees.as_ref().is_some_and(|d| d.len() != n) {
            return Err(Error::DimensionMismatch("degrees and basis differ in length".into()));
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch(format!("multiplication table must be {n}x{n}x{n}")));
        }
        let mul = mul.iter().map(|row| row.iter().map(|v| SparseVec::from_dense(v)).collect()).collect();
        Ok(FiniteAlgebra { labels, degrees, unit: SparseVec::from_dense(&unit), mul })
    }

    pub fn from_sparse(labels: Vec<String>, degrees: Option<Vec<i64>>, unit: SparseVec, mul: Vec<Vec<SparseVec>>) -> Result<Self> {
        let n = labels.len();
        let fits = |v: &SparseVec| v.max_index().is_none_or(|m| m < n);
        if !fits(&unit) || mul.len() != n || mul.iter().any(|r| r.len() != n || !r.iter().all(fits)) {
            return Err(Error::DimensionMismatch(format!("structure constants do not fit a basis of size {n}")));
        }
        Ok(FiniteAlgebra { labels, degrees, unit, mul })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    /// Degree of a basis element; ungraded algebras sit in degree 0.
    pub fn degree(&self, i: usize) -> i64 {
        self.degrees.as_ref().map_or(0, |d| d[i])
    }

    pub fn with_degrees(mut self, degrees: Option<Vec<i64>>) -> Result<Self> {
        if degrees.as_ref().is_some_and(|d| d.len() != self.dim()) {
            return Err(Error::DimensionMismatch("degrees and basis differ in length".into()));
        }
        self.degrees = degrees;
        Ok(self)
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i][j]
    }

    pub fn table(&self) -> &[Vec<SparseVec>] {
        &self.mul
    }

    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                acc = acc.axpy(&(a * b), &self.mul[*i][*j]);
            }
        }
        acc
    }

    /// Check unitality, grading and associativity exactly; unitality first.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim();
        for i in 0..n {
            let e = SparseVec::unit(i);
            if self.mul_vec(&self.unit, &e) != e {
                return Err(Violation::LeftUnit { i });
            }
            if self.mul_vec(&e, &self.unit) != e {
                return Err(Violation::RightUnit { i });
            }
        }
        if let Some(d) = &self.degrees {
            for i in 0..n {
                for j in 0..n {
                    if self.mul[i][j].entries().iter().any(|(l, _)| d[*l] != d[i] + d[j]) {
                        return Err(Violation::Degree { i, j });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_vec(&self.mul[i][j], &SparseVec::unit(k));
                    let right = self.mul_vec(&SparseVec::unit(i), &self.mul[j][k]);
                    if left != right {
                        return Err(Violation::Associativity { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.mul[i][j] == self.mul[j][i]))
    }

    /// Apply `f` to every structure constant (the unit is left alone).
    pub fn map_table(&self, f: impl Fn(&Scalar) -> Scalar) -> Vec<Vec<SparseVec>> {
        self.mul
            .iter()
            .map(|row| row.iter().map(|v| SparseVec::from_pairs(v.entries().iter().map(|(l, c)| (*l, f(c))).collect())).collect())
            .collect()
    }

    /// Does any structure constant depend on `q`?
    pub fn is_q_independent(&self) -> bool {
        self.mul.iter().flatten().all(|v| v.entries().iter().all(|(_, c)| c.is_rational()))
            && self.unit.entries().iter().all(|(_, c)| c.is_rational())
    }

    /// Rewrite in the basis whose `a`-th element has coordinates `p[:, a]`.
    pub fn change_basis(&self, p: &ExactMatrix) -> Result<FiniteAlgebra> {
        let pinv = inverse(p)?.ok_or_else(|| Error::invalid("basis change is singular"))?;
        let n = self.dim();
        let mul = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| pinv.mul_vec(&self.mul_vec(p.column(a), p.column(b))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = pinv.mul_vec(&self.unit)?;
        Ok(FiniteAlgebra { labels: self.labels.clone(), degrees: self.degrees.clone(), unit, mul })
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_mult_matrix(&self, x: &SparseVec) -> ExactMatrix {
        let n = self.dim();
        let cols = (0..n).map(|j| self.mul_vec(x, &SparseVec::unit(j))).collect();
        ExactMatrix::from_columns(n, cols).expect("square")
    }

    // ---- stock algebras -------------------------------------------------

    pub fn field() -> Self {
        FiniteAlgebra { labels: vec!["1".into()], degrees: None, unit: SparseVec::unit(0), mul: vec![vec![SparseVec::unit(0)]] }
    }

    /// `K[x]/x^k` in the basis `1, x, ..., x^{k-1}`.
    pub fn truncated_polynomial(k: usize) -> Self {
        let labels = (0..k).map(|i| if i == 0 { "1".into() } else if i == 1 { "x".into() } else { format!("x^{i}") }).collect();
        let mul = (0..k)
            .map(|i| (0..k).map(|j| if i + j < k { SparseVec::unit(i + j) } else { SparseVec::new() }).collect())
            .collect();
        FiniteAlgebra { labels, degrees: None, unit: SparseVec::unit(0), mul }
    }

    pub fn dual_numbers() -> Self {
        Self::truncated_polynomial(2)
    }

    /// `K[x]/(x^2 - c)` in the basis `1, x`.
    pub fn quadratic(c: Scalar) -> Self {
        let mul = vec![
            vec![SparseVec::unit(0), SparseVec::unit(1)],
            vec![SparseVec::unit(1), SparseVec::from_pairs(vec![(0, c)])],
        ];
        FiniteAlgebra { labels: vec!["1".into(), "x".into()], degrees: None, unit: SparseVec::unit(0), mul }
    }

    /// `K<x,y>/(x^2, y^2, xy + c yx)` in the basis `1, x, y, xy`.
    pub fn quantum_exterior(c: Scalar) -> Self {
        let mut mul = vec![vec![SparseVec::new(); 4]; 4];
        for i in 0..4 {
            mul[0][i] = SparseVec::unit(i);
            mul[i][0] = SparseVec::unit(i);
        }
        mul[1][2] = SparseVec::unit(3);
        mul[2][1] = SparseVec::from_pairs(vec![(3, -(c.inv().expect("nonzero parameter")))]);
        let labels = ["1", "x", "y", "xy"].iter().map(|s| s.to_string()).collect();
        FiniteAlgebra { labels, degrees: None, unit: SparseVec::unit(0), mul }
    }

    /// Exterior algebra on `k` generators of degree 1, basis ordered by subsets
    /// encoded as bitmasks.
    pub fn exterior(k: usize) -> Self {
        let n = 1usize << k;
        let labels = (0..n)
            .map(|s| {
                if s == 0 {
                    "1".to_string()
                } else {
                    (0..k).filter(|b| s >> b & 1 == 1).map(|b| format!("x{}", b + 1)).collect::<Vec<_>>().join("^")
                }
            })
            .collect();
        let mut mul = vec![vec![SparseVec::new(); n]; n];
        for s in 0..n {
            for t in 0..n {
                if s & t != 0 {
                    continue;
                }
                // sign of merging two increasing words
                let mut swaps = 0u32;
                for b in 0..k {
                    if t >> b & 1 == 1 {
                        swaps += (s >> (b + 1)).count_ones();
                    }
                }
                let sign = if swaps % 2 == 0 { 1 } else { -1 };
                mul[s][t] = SparseVec::from_pairs(vec![(s | t, Scalar::int(sign))]);
            }
        }
        let degrees = (0..n).map(|s: usize| s.count_ones() as i64).collect();
        FiniteAlgebra { labels, degrees: Some(degrees), unit: SparseVec::unit(0), mul }
    }

    /// Direct product `a x b`.
    pub fn product_algebra(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Self {
        let (n, m) = (a.dim(), b.dim());
        let mut mul = vec![vec![SparseVec::new(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                mul[i][j] = a.mul[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                mul[n + i][n + j] = b.mul[i][j].remap(|l| Some(n + l));
            }
        }
        let labels = a.labels.iter().map(|l| format!("({l},0)")).chain(b.labels.iter().map(|l| format!("(0,{l})"))).collect();
        let unit = a.unit.add(&b.unit.remap(|l| Some(n + l)));
        let degrees = match (&a.degrees, &b.degrees) {
            (None, None) => None,
            _ => Some((0..n).map(|i| a.degree(i)).chain((0..m).map(|i| b.degree(i))).collect()),
        };
        FiniteAlgebra { labels, degrees, unit, mul }
    }

    /// Tensor product `a ⊗ b` with basis `e_i ⊗ f_j` at index `i * dim b + j`
    /// (no Koszul signs: both factors are treated as ungraded).
    pub fn tensor(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Self {
        let (n, m) = (a.dim(), b.dim());
        let mut mul = vec![vec![SparseVec::new(); n * m]; n * m];
        for i1 in 0..n {
            for j1 in 0..m {
                for i2 in 0..n {
                    for j2 in 0..m {
                        let mut pairs = Vec::new();
                        for (k, c) in a.mul[i1][i2].entries() {
                            for (l, d) in b.mul[j1][j2].entries() {
                                pairs.push((k * m + l, c * d));
                            }
                        }
                        mul[i1 * m + j1][i2 * m + j2] = SparseVec::from_pairs(pairs);
                    }
                }
            }
        }
        let labels = a
            .labels
            .iter()
            .flat_map(|x| b.labels.iter().map(move |y| format!("{x}(x){y}")))
            .collect();
        let mut unit = Vec::new();
        for (k, c) in a.unit.entries() {
            for (l, d) in b.unit.entries() {
                unit.push((k * m + l, c * d));
            }
        }
        FiniteAlgebra { labels, degrees: None, unit: SparseVec::from_pairs(unit), mul }
    }

    /// Upper triangular `k x k` matrices, basis `E_{ij}` (`i <= j`) in row-major order.
    pub fn upper_triangular(k: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
        let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(p, e)| (*e, p)).collect();
        let n = pairs.len();
        let mut mul = vec![vec![SparseVec::new(); n]; n];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(j2, l)) in pairs.iter().enumerate() {
                if j == j2 {
                    mul[a][b] = SparseVec::unit(pos[&(i, l)]);
                }
            }
        }
        let labels = pairs.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
        let unit = SparseVec::from_pairs((0..k).map(|i| (pos[&(i, i)], Scalar::one())).collect());
        FiniteAlgebra { labels, degrees: None, unit, mul }
    }
}

/// A finite-dimensional bimodule over a [`FiniteAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    labels: Vec<String>,
    /// `left[i][m]` is `e_i . m_m`.
    left: Vec<Vec<SparseVec>>,
    /// `right[m][i]` is `m_m . e_i`.
    right: Vec<Vec<SparseVec>>,
    diagonal: bool,
}

impl Bimodule {
    pub fn new(labels: Vec<String>, left: Vec<Vec<SparseVec>>, right: Vec<Vec<SparseVec>>) -> Self {
        Bimodule { labels, left, right, diagonal: false }
    }

    /// `a` as a bimodule over itself.
    pub fn diagonal(a: &FiniteAlgebra) -> Self {
        let right = a.mul.clone();
        Bimodule { labels: a.labels.clone(), left: a.mul.clone(), right, diagonal: true }
    }

    /// `V* ⊗ a` for a `v`-dimensional `V`; basis `(k, i)` at index `k * dim a + i`.
    pub fn dual_tensor(v: usize, a: &FiniteAlgebra) -> Self {
        if v == 1 {
            return Self::diagonal(a);
        }
        let n = a.dim();
        let shift = |k: usize, x: &SparseVec| x.remap(|l| Some(k * n + l));
        let left = (0..n).map(|i| (0..v * n).map(|p| shift(p / n, &a.mul[i][p % n])).collect()).collect();
        let right = (0..v * n).map(|p| (0..n).map(|i| shift(p / n, &a.mul[p % n][i])).collect()).collect();
        let labels = (0..v).flat_map(|k| a.labels.iter().map(move |l| format!("v{}*{l}", k + 1))).collect();
        Bimodule { labels, left, right, diagonal: false }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn left_table(&self) -> &[Vec<SparseVec>] {
        &self.left
    }

    pub fn right_table(&self) -> &[Vec<SparseVec>] {
        &self.right
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn act_left(&self, i: usize, m: usize) -> &SparseVec {
        &self.left[i][m]
    }

    pub fn act_right(&self, m: usize, i: usize) -> &SparseVec {
        &self.right[m][i]
    }

    fn left_vec(&self, x: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (i, c) in x.entries() {
            for (k, d) in m.entries() {
                acc = acc.axpy(&(c * d), &self.left[*i][*k]);
            }
        }
        acc
    }

    fn right_vec(&self, m: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (k, d) in m.entries() {
            for (i, c) in x.entries() {
                acc = acc.axpy(&(c * d), &self.right[*k][*i]);
            }
        }
        acc
    }

    /// Unital, associative actions that commute with each other.
    pub fn validate(&self, a: &FiniteAlgebra) -> Result<()> {
        let (n, d) = (a.dim(), self.dim());
        if self.left.len() != n || self.left.iter().any(|r| r.len() != d) || self.right.len() != d || self.right.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("bimodule action tables have the wrong shape".into()));
        }
        for m in 0..d {
            let e = SparseVec::unit(m);
            if self.left_vec(a.unit(), &e) != e || self.right_vec(&e, a.unit()) != e {
                return Err(Error::invalid(format!("bimodule action is not unital on {}", self.labels[m])));
            }
            for i in 0..n {
                let ei = SparseVec::unit(i);
                for j in 0..n {
                    let ej = SparseVec::unit(j);
                    let l1 = self.left_vec(&a.mul[i][j], &e);
                    let l2 = self.left_vec(&ei, &self.left_vec(&ej, &e));
                    let r1 = self.right_vec(&e, &a.mul[i][j]);
                    let r2 = self.right_vec(&self.right_vec(&e, &ei), &ej);
                    let c1 = self.right_vec(&self.left_vec(&ei, &e), &ej);
                    let c2 = self.left_vec(&ei, &self.right_vec(&e, &ej));
                    if l1 != l2 || r1 != r2 || c1 != c2 {
                        return Err(Error::invalid(format!("bimodule identities fail at ({i}, {}, {j})", self.labels[m])));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A multilinear map `a^{⊗r} -> M`, stored over flattened cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildCochain {
    degree: usize,
    n: usize,
    m: usize,
    values: SparseVec,
}

impl HochschildCochain {
    pub fn zero(degree: usize, n: usize, m: usize) -> Self {
        HochschildCochain { degree, n, m, values: SparseVec::new() }
    }

    pub fn from_values(degree: usize, n: usize, m: usize, values: SparseVec) -> Result<Self> {
        let size = (n as u128).pow(degree as u32) * m as u128;
        if values.max_index().is_some_and(|i| i as u128 >= size) {
            return Err(Error::DimensionMismatch("cochain index out of range".into()));
        }
        Ok(HochschildCochain { degree, n, m, values })
    }

    /// Entries `(inputs, output, coefficient)`.
    pub fn from_entries(degree: usize, n: usize, m: usize, entries: Vec<(Vec<usize>, usize, Scalar)>) -> Result<Self> {
        let mut pairs = Vec::with_capacity(entries.len());
        for (ins, o, c) in entries {
            if ins.len() != degree || ins.iter().any(|&i| i >= n) || o >= m {
                return Err(Error::DimensionMismatch(format!("cochain entry {ins:?} -> {o} does not fit degree {degree}")));
            }
            pairs.push((encode(&ins, o, n, m), c));
        }
        Ok(HochschildCochain { degree, n, m, values: SparseVec::from_pairs(pairs) })
    }

    /// Tabulate `f` on all basis tuples.
    pub fn from_fn(degree: usize, n: usize, m: usize, mut f: impl FnMut(&[usize]) -> SparseVec) -> Self {
        let mut pairs = Vec::new();
        for t in tuples(n, degree) {
            for (o, c) in f(&t).into_entries() {
                pairs.push((encode(&t, o, n, m), c));
            }
        }
        HochschildCochain { degree, n, m, values: SparseVec::from_pairs(pairs) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &SparseVec {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize, &Scalar)> + '_ {
        self.values.entries().iter().map(|(k, c)| {
            let (ins, o) = decode(*k, self.degree, self.n, self.m);
            (ins, o, c)
        })
    }

    /// Value on basis inputs.
    pub fn eval_basis(&self, ins: &[usize]) -> SparseVec {
        let base = encode(ins, 0, self.n, self.m);
        let lo = self.values.entries().partition_point(|(k, _)| *k < base);
        let hi = self.values.entries().partition_point(|(k, _)| *k < base + self.m);
        SparseVec::from_pairs(self.values.entries()[lo..hi].iter().map(|(k, c)| (k - base, c.clone())).collect())
    }

    fn check_same_shape(&self, o: &HochschildCochain) -> Result<()> {
        if (self.degree, self.n, self.m) != (o.degree, o.n, o.m) {
            return Err(Error::DimensionMismatch("cochains of different shapes".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &HochschildCochain) -> Result<HochschildCochain> {
        self.check_same_shape(o)?;
        Ok(HochschildCochain { values: self.values.add(&o.values), ..self.clone() })
    }

    pub fn sub(&self, o: &HochschildCochain) -> Result<HochschildCochain> {
        self.check_same_shape(o)?;
        Ok(HochschildCochain { values: self.values.sub(&o.values), ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> HochschildCochain {
        HochschildCochain { values: self.values.scale(c), ..self.clone() }
    }

    /// Restrict values to the `k`-th copy of `a` inside `V* ⊗ a`.
    pub fn component(&self, k: usize, a_dim: usize) -> HochschildCochain {
        let pairs = self
            .entries()
            .filter(|(_, o, _)| o / a_dim == k)
            .map(|(ins, o, c)| (encode(&ins, o % a_dim, self.n, a_dim), c.clone()))
            .collect();
        HochschildCochain { degree: self.degree, n: self.n, m: a_dim, values: SparseVec::from_pairs(pairs) }
    }
}

pub(crate) fn encode(ins: &[usize], o: usize, n: usize, m: usize) -> usize {
    ins.iter().fold(0usize, |acc, &i| acc * n + i) * m + o
}

pub(crate) fn decode(mut key: usize, r: usize, n: usize, m: usize) -> (Vec<usize>, usize) {
    let o = key % m;
    key /= m;
    let mut ins = vec![0; r];
    for p in (0..r).rev() {
        ins[p] = key % n;
        key /= n;
    }
    (ins, o)
}

/// All length-`r` tuples over `0..n` in lexicographic order.
pub(crate) fn tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Hochschild data for a pair `(a, M)`: weight grading, factorization table,
/// and builders for weight blocks of the cochain and chain complexes.
pub struct Hochschild<'a> {
    a: &'a FiniteAlgebra,
    m: &'a Bimodule,
    wa: Vec<Weight>,
    wm: Vec<Weight>,
    /// `factors[l]` lists `(j, k, c)` with `e_j e_k = c e_l + ...`.
    factors: Vec<Vec<(usize, usize, Scalar)>>,
    cap: u128,
}

/// Cohomology (or homology) in one degree, with representatives.
#[derive(Clone, Debug)]
pub struct HHDegree {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<HochschildCochain>,
}

impl<'a> Hochschild<'a> {
    pub fn new(a: &'a FiniteAlgebra, m: &'a Bimodule) -> Self {
        let (n, d) = (a.dim(), m.dim());
        let mut solver = WeightSolver::new(n + d);
        for (i, _) in a.unit.entries() {
            solver.fix_zero(*i);
        }
        for i in 0..n {
            for j in 0..n {
                for (l, _) in a.mul[i][j].entries() {
                    solver.relate(*l, &[i, j]);
                }
            }
            for k in 0..d {
                for (l, _) in m.left[i][k].entries() {
                    solver.relate(n + l, &[i, n + k]);
                }
                for (l, _) in m.right[k][i].entries() {
                    solver.relate(n + l, &[n + k, i]);
                }
            }
        }
        let w = solver.solve();
        Self::with_weights(a, m, w[..n].to_vec(), w[n..].to_vec())
    }

    /// Use a single weight block (for cross-checks).
    pub fn ungraded(a: &'a FiniteAlgebra, m: &'a Bimodule) -> Self {
        Self::with_weights(a, m, vec![Vec::new(); a.dim()], vec![Vec::new(); m.dim()])
    }

    fn with_weights(a: &'a FiniteAlgebra, m: &'a Bimodule, wa: Vec<Weight>, wm: Vec<Weight>) -> Self {
        Hochschild { a, m, wa, wm, factors: factor_table(a), cap: DEFAULT_CAP }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.a
    }

    pub fn module(&self) -> &Bimodule {
        self.m
    }

    pub fn weight_rank(&self) -> usize {
        self.wa.first().or(self.wm.first()).map_or(0, Vec::len)
    }

    fn cell_count(&self, r: usize) -> u128 {
        (self.a.dim() as u128).saturating_pow(r as u32).saturating_mul(self.m.dim() as u128)
    }

    fn check_cap(&self, r: usize) -> Result<()> {
        let size = self.cell_count(r);
        if size > self.cap {
            return Err(Error::CapExceeded { what: format!("Hochschild degree {r}"), size, cap: self.cap });
        }
        Ok(())
    }

    /// Input tuples with their total weight, in lexicographic order.
    fn weighted_tuples(&self, r: usize) -> Vec<(Vec<usize>, Weight)> {
        let rank = self.weight_rank();
        let mut out = vec![(Vec::new(), weights::zero(rank))];
        for _ in 0..r {
            out = out
                .into_iter()
                .flat_map(|(t, w)| {
                    (0..self.a.dim()).map(move |i| ([t.clone(), vec![i]].concat(), weights::add(&w, &self.wa[i])))
                })
                .collect();
        }
        out
    }

    /// Weight of a cochain cell: `w(out) - Σ w(in)`.
    pub fn cochain_weight(&self, ins: &[usize], o: usize) -> Weight {
        let s = ins.iter().fold(weights::zero(self.weight_rank()), |acc, &i| weights::add(&acc, &self.wa[i]));
        weights::sub(&self.wm[o], &s)
    }

    fn module_by_weight(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut map: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (o, w) in self.wm.iter().enumerate() {
            map.entry(w.clone()).or_default().push(o);
        }
        map
    }

    /// Cochain cells of degree `r` and weight `w`, sorted.
    pub fn cochain_cells(&self, r: usize, w: &[i64]) -> Result<Vec<usize>> {
        self.check_cap(r)?;
        let by_w = self.module_by_weight();
        let (n, m) = (self.a.dim(), self.m.dim());
        let mut out = Vec::new();
        for (t, tw) in self.weighted_tuples(r) {
            if let Some(os) = by_w.get(&weights::add(&tw, w)) {
                out.extend(os.iter().map(|&o| encode(&t, o, n, m)));
            }
        }
        Ok(out)
    }

    /// All weights of cochain cells in degree `r`.
    pub fn cochain_weights(&self, r: usize) -> Result<BTreeSet<Weight>> {
        self.check_cap(r)?;
        let mut set = BTreeSet::new();
        let outs: BTreeSet<&Weight> = self.wm.iter().collect();
        for (_, tw) in self.weighted_tuples(r) {
            for o in &outs {
                set.insert(weights::sub(o, &tw));
            }
        }
        Ok(set)
    }

    /// `δ` of the basis cochain at `key` in degree `r`.
    pub(crate) fn delta_cell(&self, r: usize, key: usize) -> Vec<(usize, Scalar)> {
        delta_cell_raw(self.a.dim(), &self.m.left, &self.m.right, &self.factors, r, key)
    }

    /// The Hochschild differential applied to any cochain.
    pub fn delta(&self, f: &HochschildCochain) -> Result<HochschildCochain> {
        self.check_shape(f)?;
        let mut acc = Vec::new();
        for (key, c) in f.values.entries() {
            acc.extend(self.delta_cell(f.degree, *key).into_iter().map(|(k, v)| (k, &v * c)));
        }
        Ok(HochschildCochain { degree: f.degree + 1, n: f.n, m: f.m, values: SparseVec::from_pairs(acc) })
    }

    fn check_shape(&self, f: &HochschildCochain) -> Result<()> {
        if f.n != self.a.dim() || f.m != self.m.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cochain for dims ({}, {}) used with algebra of dim {} and module of dim {}",
                f.n,
                f.m,
                self.a.dim(),
                self.m.dim()
            )));
        }
        Ok(())
    }

    /// Weight block `w` of the cochain complex in degrees `lo..=hi`.
    pub fn block_complex(&self, w: &[i64], lo: usize, hi: usize, check: bool) -> Result<CellComplex> {
        let cells = (lo..=hi).map(|r| self.cochain_cells(r, w)).collect::<Result<Vec<_>>>()?;
        CellComplex::build(lo as i64, cells, |r, key| Ok(self.delta_cell(r as usize, key)), check)
    }

    /// The whole cochain complex in degrees `0..=max_degree`, cells in flattened order.
    pub fn full_complex(&self, max_degree: usize) -> Result<FiniteComplex> {
        let cells = (0..=max_degree)
            .map(|r| {
                self.check_cap(r)?;
                Ok((0..self.cell_count(r) as usize).collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Ok(CellComplex::build(0, cells, |r, key| Ok(self.delta_cell(r as usize, key)), true)?.complex)
    }

    /// `HH^r` for `r = 0..=max_degree`, summed over weight blocks.
    pub fn cohomology(&self, max_degree: usize) -> Result<Vec<HHDegree>> {
        let mut all = BTreeSet::new();
        for r in 0..=max_degree {
            all.extend(self.cochain_weights(r)?);
        }
        self.check_cap(max_degree + 1)?;
        let (n, m) = (self.a.dim(), self.m.dim());
        let mut out: Vec<HHDegree> =
            (0..=max_degree).map(|degree| HHDegree { degree, dim: 0, representatives: Vec::new() }).collect();
        for w in &all {
            let block = self.block_complex(w, 0, max_degree + 1, true)?;
            for r in 0..=max_degree {
                let h = block.complex.cohomology_unchecked(r as i64);
                out[r].dim += h.dim;
                for z in h.representatives {
                    let values = block.to_keys(r as i64, &z);
                    out[r].representatives.push(HochschildCochain { degree: r, n, m, values });
                }
            }
        }
        Ok(out)
    }

    /// Split a cochain into weight-homogeneous parts.
    fn split_by_weight(&self, f: &HochschildCochain) -> BTreeMap<Weight, SparseVec> {
        let mut parts: BTreeMap<Weight, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (key, c) in f.values.entries() {
            let (ins, o) = decode(*key, f.degree, f.n, f.m);
            parts.entry(self.cochain_weight(&ins, o)).or_default().push((*key, c.clone()));
        }
        parts.into_iter().map(|(w, p)| (w, SparseVec::from_pairs(p))).collect()
    }

    /// `Some(h)` with `δh = z` if the cocycle `z` is a coboundary.
    pub fn primitive(&self, z: &HochschildCochain) -> Result<Option<HochschildCochain>> {
        self.check_shape(z)?;
        if !self.delta(z)?.is_zero() {
            return Err(Error::NotCocycle { degree: z.degree as i64 });
        }
        let r = z.degree;
        if z.is_zero() {
            return Ok(Some(HochschildCochain::zero(r.saturating_sub(1), z.n, z.m)));
        }
        if r == 0 {
            return Ok(None);
        }
        let mut total = SparseVec::new();
        for (w, part) in self.split_by_weight(z) {
            let block = self.block_complex(&w, r - 1, r, false)?;
            let local = block.to_local(r as i64, &part)?;
            match block.complex.differential(r as i64 - 1).echelon().express(&local) {
                Some(h) => total = total.add(&block.to_keys(r as i64 - 1, &h)),
                None => return Ok(None),
            }
        }
        Ok(Some(HochschildCochain { degree: r - 1, n: z.n, m: z.m, values: total }))
    }

    pub fn is_coboundary(&self, z: &HochschildCochain) -> Result<bool> {
        Ok(self.primitive(z)?.is_some())
    }

    /// Are the cocycles `z`, `w` cohomologous? Returns `h` with `δh = z - w`.
    pub fn classes_equal(&self, z: &HochschildCochain, w: &HochschildCochain) -> Result<Option<HochschildCochain>> {
        self.primitive(&z.sub(w)?)
    }

    // ---- Hochschild homology ------------------------------------------

    fn chain_weight(&self, mm: usize, ins: &[usize]) -> Weight {
        ins.iter().fold(self.wm[mm].clone(), |acc, &i| weights::add(&acc, &self.wa[i]))
    }

    /// Chain cells `m ⊗ a_1 ⊗ .. ⊗ a_r` of weight `w`, keyed `m * n^r + index(a)`.
    fn chain_cells(&self, r: usize, w: &[i64]) -> Result<Vec<usize>> {
        self.check_cap(r)?;
        let n = self.a.dim();
        let nr = n.pow(r as u32);
        let mut out = Vec::new();
        let ts = self.weighted_tuples(r);
        for mm in 0..self.m.dim() {
            for (k, (_, tw)) in ts.iter().enumerate() {
                if weights::add(&self.wm[mm], tw) == w {
                    out.push(mm * nr + k);
                }
            }
        }
        Ok(out)
    }

    fn boundary_cell(&self, r: usize, key: usize) -> Vec<(usize, Scalar)> {
        let n = self.a.dim();
        let nr = n.pow(r as u32);
        let (mm, ins) = (key / nr, decode(key % nr, r, n, 1).0);
        let low = n.pow(r.saturating_sub(1) as u32);
        let enc = |mm: usize, t: &[usize]| mm * low + encode(t, 0, n, 1);
        let mut out = Vec::new();
        if r == 0 {
            return out;
        }
        for (l, c) in self.m.right[mm][ins[0]].entries() {
            out.push((enc(*l, &ins[1..]), c.clone()));
        }
        for p in 0..r - 1 {
            let sign = if (p + 1) % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
            for (l, c) in self.a.mul[ins[p]][ins[p + 1]].entries() {
                let t: Vec<usize> = ins[..p].iter().copied().chain([*l]).chain(ins[p + 2..].iter().copied()).collect();
                out.push((enc(mm, &t), &sign * c));
            }
        }
        let sign = if r % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        for (l, c) in self.m.left[ins[r - 1]][mm].entries() {
            out.push((enc(*l, &ins[..r - 1]), &sign * c));
        }
        out
    }

    /// `HH_r(a, M)` for `r = 0..=max_degree`, with representative cycles keyed as
    /// `m * n^r + index(a_1..a_r)`.
    pub fn homology(&self, max_degree: usize) -> Result<Vec<(usize, usize, Vec<SparseVec>)>> {
        self.check_cap(max_degree + 1)?;
        let mut all = BTreeSet::new();
        for r in 0..=max_degree {
            for mm in 0..self.m.dim() {
                for (t, _) in self.weighted_tuples(r) {
                    all.insert(self.chain_weight(mm, &t));
                }
            }
        }
        let mut out: Vec<(usize, usize, Vec<SparseVec>)> = (0..=max_degree).map(|r| (r, 0, Vec::new())).collect();
        for w in &all {
            // degree -r holds r-chains; the differential raises the complex degree
            let top = max_degree + 1;
            let cells = (0..=top).rev().map(|r| self.chain_cells(r, w)).collect::<Result<Vec<_>>>()?;
            let block = CellComplex::build(-(top as i64), cells, |deg, key| Ok(self.boundary_cell((-deg) as usize, key)), true)?;
            for r in 0..=max_degree {
                let h = block.complex.cohomology_unchecked(-(r as i64));
                out[r].1 += h.dim;
                out[r].2.extend(h.representatives.iter().map(|z| block.to_keys(-(r as i64), z)));
            }
        }
        Ok(out)
    }
}

/// `factors[l]` lists `(j, k, c)` with `e_j e_k = c e_l + ...`.
pub(crate) fn factor_table(a: &FiniteAlgebra) -> Vec<Vec<(usize, usize, Scalar)>> {
    let n = a.dim();
    let mut factors = vec![Vec::new(); n];
    for j in 0..n {
        for k in 0..n {
            for (l, c) in a.mul[j][k].entries() {
                factors[*l].push((j, k, c.clone()));
            }
        }
    }
    factors
}

/// Hochschild differential of one basis cochain, for an algebra of dimension
/// `n` acting on a module through the tables `left[i][m]`, `right[m][i]`.
pub(crate) fn delta_cell_raw(
    n: usize,
    left: &[Vec<SparseVec>],
    right: &[Vec<SparseVec>],
    factors: &[Vec<(usize, usize, Scalar)>],
    r: usize,
    key: usize,
) -> Vec<(usize, Scalar)> {
    let m = right.len();
    let (ins, o) = decode(key, r, n, m);
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(r + 1);
    for j in 0..n {
        buf.clear();
        buf.push(j);
        buf.extend_from_slice(&ins);
        for (l, c) in left[j][o].entries() {
            out.push((encode(&buf, *l, n, m), c.clone()));
        }
    }
    for p in 0..r {
        let sign = if (p + 1) % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        for (j, k, c) in &factors[ins[p]] {
            buf.clear();
            buf.extend_from_slice(&ins[..p]);
            buf.push(*j);
            buf.push(*k);
            buf.extend_from_slice(&ins[p + 1..]);
            out.push((encode(&buf, o, n, m), &sign * c));
        }
    }
    let sign = if (r + 1) % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
    for j in 0..n {
        buf.clear();
        buf.extend_from_slice(&ins);
        buf.push(j);
        for (l, c) in right[o][j].entries() {
            out.push((encode(&buf, *l, n, m), &sign * c));
        }
    }
    out
}

/// The cochain complex `C^0 -> ... -> C^{max_degree}` for `(a, M)`.
pub fn hochschild_complex(a: &FiniteAlgebra, m: &Bimodule, max_degree: usize, cap: u128) -> Result<FiniteComplex> {
    Hochschild::new(a, m).with_cap(cap).full_complex(max_degree)
}

/// Cup product of two cochains with values in the diagonal bimodule.
pub fn cup(a: &FiniteAlgebra, alpha: &HochschildCochain, beta: &HochschildCochain) -> Result<HochschildCochain> {
    let n = a.dim();
    for c in [alpha, beta] {
        if c.n != n || c.m != n {
            return Err(Error::invalid("cup product needs cochains with values in the algebra itself"));
        }
    }
    let r = alpha.degree + beta.degree;
    let mut acc = Vec::new();
    for (i1, o1, c1) in alpha.entries() {
        for (i2, o2, c2) in beta.entries() {
            let ins = [i1.as_slice(), i2.as_slice()].concat();
            for (l, c) in a.mul[o1][o2].entries() {
                acc.push((encode(&ins, *l, n, n), &(c1 * c2) * c));
            }
        }
    }
    Ok(HochschildCochain { degree: r, n, m: n, values: SparseVec::from_pairs(acc) })
}

/// The unit 0-cochain `1 ∈ a`.
pub fn unit_cochain(a: &FiniteAlgebra) -> HochschildCochain {
    HochschildCochain { degree: 0, n: a.dim(), m: a.dim(), values: a.unit.clone() }
}

/// Outcome of [`trace_pairing_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairingVerdict {
    Nondegenerate,
    /// A nonzero element of the given degree pairing to zero with its partner degree.
    Degenerate { degree: i64, witness: SparseVec },
}

/// Check that `<u, v> = tr(u v)` pairs degree `d` perfectly with degree `n - d`.
pub fn trace_pairing_check(a: &FiniteAlgebra, tr: &[Scalar], n: i64) -> Result<PairingVerdict> {
    if tr.len() != a.dim() {
        return Err(Error::DimensionMismatch("trace has the wrong length".into()));
    }
    if let Some(i) = (0..a.dim()).find(|&i| !tr[i].is_zero() && a.degree(i) != n) {
        return Err(Error::invalid(format!("trace is nonzero on {} outside degree {n}", a.labels[i])));
    }
    let mut by_deg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..a.dim() {
        by_deg.entry(a.degree(i)).or_default().push(i);
    }
    let trv = SparseVec::from_dense(tr);
    let empty = Vec::new();
    for (&d, us) in &by_deg {
        let vs = by_deg.get(&(n - d)).unwrap_or(&empty);
        // columns indexed by u, rows by v: kernel vectors are degenerate u's
        let cols = us
            .iter()
            .map(|&u| SparseVec::from_pairs(vs.iter().enumerate().map(|(k, &v)| (k, trv.dot(&a.mul[u][v]))).collect()))
            .collect();
        let p = ExactMatrix::from_columns(vs.len(), cols)?;
        let mut e = Echelon::new();
        for (j, c) in p.columns().iter().enumerate() {
            if !e.insert(c.clone(), SparseVec::unit(j)) {
                let rel = e.relations().last().expect("relation").clone();
                let witness = rel.remap(|k| Some(us[k]));
                return Ok(PairingVerdict::Degenerate { degree: d, witness });
            }
        }
    }
    Ok(PairingVerdict::Nondegenerate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(a: &FiniteAlgebra, max: usize) -> Vec<usize> {
        let m = Bimodule::diagonal(a);
        Hochschild::new(a, &m).cohomology(max).unwrap().iter().map(|h| h.dim).collect()
    }

    #[test]
    fn validation() {
        assert_eq!(FiniteAlgebra::dual_numbers().validate(), Ok(()));
        assert_eq!(FiniteAlgebra::quantum_exterior(Scalar::q()).validate(), Ok(()));
        assert_eq!(FiniteAlgebra::exterior(2).validate(), Ok(()));
        assert_eq!(FiniteAlgebra::upper_triangular(2).validate(), Ok(()));
        let one = || vec![Scalar::one(), Scalar::zero()];
        let bad = FiniteAlgebra::new(
            vec!["1".into(), "x".into()],
            None,
            vec![Scalar::zero(), Scalar::one()],
            vec![vec![one(), vec![Scalar::zero(), Scalar::one()]], vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::zero(), Scalar::one()]]],
        )
        .unwrap();
        assert!(matches!(bad.validate(), Err(Violation::LeftUnit { .. })));
    }

    #[test]
    fn field_and_dual_numbers() {
        assert_eq!(dims(&FiniteAlgebra::field(), 3), vec![1, 0, 0, 0]);
        assert_eq!(dims(&FiniteAlgebra::dual_numbers(), 4), vec![2, 1, 1, 1, 1]);
        let a = FiniteAlgebra::dual_numbers();
        let c = hochschild_complex(&a, &Bimodule::diagonal(&a), 2, DEFAULT_CAP).unwrap();
        assert_eq!((c.dim(0), c.dim(1), c.dim(2)), (2, 4, 8));
    }

    #[test]
    fn graded_blocks_match_single_block() {
        let a = FiniteAlgebra::quantum_exterior(Scalar::q());
        let m = Bimodule::diagonal(&a);
        let graded: Vec<usize> = Hochschild::new(&a, &m).cohomology(2).unwrap().iter().map(|h| h.dim).collect();
        let flat: Vec<usize> = Hochschild::ungraded(&a, &m).cohomology(2).unwrap().iter().map(|h| h.dim).collect();
        assert_eq!(graded, flat);
    }

    #[test]
    fn homology_small_cases() {
        let h = |a: &FiniteAlgebra, r| {
            let m = Bimodule::diagonal(a);
            Hochschild::new(a, &m).homology(r).unwrap().iter().map(|x| x.1).collect::<Vec<_>>()
        };
        assert_eq!(h(&FiniteAlgebra::field(), 2), vec![1, 0, 0]);
        let kk = FiniteAlgebra::product_algebra(&FiniteAlgebra::field(), &FiniteAlgebra::field());
        assert_eq!(h(&kk, 2), vec![2, 0, 0]);
        assert_eq!(h(&FiniteAlgebra::dual_numbers(), 2)[1], 1);
    }

    #[test]
    fn cup_products_on_dual_numbers() {
        let a = FiniteAlgebra::dual_numbers();
        let m = Bimodule::diagonal(&a);
        let hh = Hochschild::new(&a, &m);
        let coh = hh.cohomology(2).unwrap();
        let u = coh[1].representatives[0].clone();
        let v = coh[2].representatives[0].clone();
        // u = x d/dx, so u ∪ u sends (x, x) to x^2 = 0
        assert!(cup(&a, &u, &u).unwrap().is_zero());
        for (p, q) in [(&u, &v), (&v, &v)] {
            let c = cup(&a, p, q).unwrap();
            assert!(hh.delta(&c).unwrap().is_zero());
            assert!(!hh.is_coboundary(&c).unwrap());
        }
        let e = unit_cochain(&a);
        let diff = cup(&a, &e, &v).unwrap().sub(&v).unwrap();
        assert!(hh.is_coboundary(&diff).unwrap());
        assert!(cup(&a, &v, &HochschildCochain::zero(1, 2, 2)).unwrap().is_zero());
    }

    #[test]
    fn trace_pairings() {
        let ext1 = FiniteAlgebra::exterior(1);
        let tr = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(trace_pairing_check(&ext1, &tr, 1).unwrap(), PairingVerdict::Nondegenerate);
        let zero = vec![Scalar::zero(), Scalar::zero()];
        assert_eq!(
            trace_pairing_check(&ext1, &zero, 1).unwrap(),
            PairingVerdict::Degenerate { degree: 0, witness: SparseVec::unit(0) }
        );
        let ext2 = FiniteAlgebra::exterior(2);
        let mut tr2 = vec![Scalar::zero(); 4];
        tr2[3] = Scalar::one();
        assert_eq!(trace_pairing_check(&ext2, &tr2, 2).unwrap(), PairingVerdict::Nondegenerate);
        assert!(trace_pairing_check(&ext1, &[Scalar::one(), Scalar::zero()], 1).is_err());
    }
}
