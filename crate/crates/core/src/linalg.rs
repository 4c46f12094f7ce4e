//! Exact sparse linear algebra over [`Scalar`].
//!
//! Matrices are stored by columns. All eliminations go through [`Echelon`],
//! which keeps an incrementally built echelon basis whose pivot is the
//! smallest row index of each reduced vector. Columns are processed in
//! order, so every result (kernel bases, solutions, representatives) is
//! reproducible run to run.


use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Scalar::one())] }
    }

    /// Build from arbitrary `(index, value)` pairs; duplicates are summed.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += &v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        if c.is_one() {
            return self.clone();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    let v = &self.entries[a].1 + &(c * &other.entries[b].1);
                    if !v.is_zero() {
                        out.push((x, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(y)) => {
                    out.push((y, c * &other.entries[b].1));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&Scalar::int(-1), other)
    }

    pub fn neg(&self) -> SparseVec {
        self.scale(&Scalar::int(-1))
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ib) = (self.entries[a].0, other.entries[b].0);
            if ia == ib {
                acc += &(&self.entries[a].1 * &other.entries[b].1);
                a += 1;
                b += 1;
            } else if ia < ib {
                a += 1;
            } else {
                b += 1;
            }
        }
        acc
    }

    /// Reindex through `f`; entries mapped to `None` are dropped.
    pub fn remap(&self, mut f: impl FnMut(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, v)| f(*i).map(|j| (j, v.clone()))).collect())
    }
}

/// Exact matrix with sparse column storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix { rows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Result<Self> {
        if let Some(bad) = cols.iter().find(|c| c.max_index().is_some_and(|m| m >= rows)) {
            return Err(Error::DimensionMismatch(format!(
                "column entry at row {} but matrix has {rows} rows",
                bad.max_index().unwrap_or(0)
            )));
        }
        Ok(ExactMatrix { rows, cols })
    }

    /// Build from dense rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cols[j].push((i, v.clone()));
                }
            }
        }
        Ok(ExactMatrix { rows: rows.len(), cols: cols.into_iter().map(|e| SparseVec { entries: e }).collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn mul_vec(&self, x: &SparseVec) -> Result<SparseVec> {
        if x.max_index().is_some_and(|m| m >= self.cols()) {
            return Err(Error::DimensionMismatch(format!("vector longer than {} columns", self.cols())));
        }
        let mut acc = SparseVec::new();
        for (j, c) in x.entries() {
            acc = acc.axpy(c, &self.cols[*j]);
        }
        Ok(acc)
    }

    pub fn mul_dense(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", x.len(), self.cols())));
        }
        Ok(self.mul_vec(&SparseVec::from_dense(x))?.to_dense(self.rows))
    }

    /// `self * other`
    pub fn compose(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if other.rows != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let cols = other.cols.iter().map(|c| self.mul_vec(c)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { rows: self.rows, cols })
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut rows = vec![Vec::new(); self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c.entries() {
                rows[*i].push((j, v.clone()));
            }
        }
        ExactMatrix { rows: self.cols(), cols: rows.into_iter().map(|e| SparseVec { entries: e }).collect() }
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for (j, c) in self.cols.iter().enumerate() {
            e.insert(c.clone(), SparseVec::unit(j));
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Check `rank + nullity = cols` by computing both independently of each other.
    pub fn check_rank_nullity(&self) -> bool {
        let kernel = kernel_basis(self);
        let rank = self.rank();
        let kernel_ok = kernel.iter().all(|v| self.mul_vec(v).map(|r| r.is_zero()).unwrap_or(false));
        kernel_ok && rank + kernel.len() == self.cols()
    }
}

/// Row of an [`Echelon`]: a reduced vector normalized to 1 at its pivot,
/// together with the combination of inserted inputs that produced it.
#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental echelon basis over [`Scalar`], tracking input combinations.
///
/// Each row vanishes at the pivots of the rows before it, so reducing in
/// insertion order clears every pivot. The pivot of a new row is its simplest
/// entry (constants before rational functions, then lowest index), which keeps
/// coefficient growth down on `q`-dependent input.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<EchelonRow>,
    relations: Vec<SparseVec>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// What is left after clearing every pivot position.
    pub remainder: SparseVec,
    /// Combination of inserted inputs whose span element was subtracted.
    pub combo: SparseVec,
}

fn pivot_cost(c: &Scalar) -> (u64, u64) {
    match c.as_rational() {
        Some(r) => (0, r.numer().bits() + r.denom().bits()),
        None => {
            let deg = |p: &crate::scalar::Poly| p.degree().unwrap_or(0) as u64;
            (1 + deg(&c.numer()) + deg(&c.denom()), 0)
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    /// Relations found so far: combinations of inserted inputs that vanish.
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    /// Reduce `v` against the basis. On return, `v - remainder = sum(combo_k * input_k)`.
    pub fn reduce(&self, v: &SparseVec) -> Reduction {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        for row in &self.rows {
            if rem.is_zero() {
                break;
            }
            let c = rem.get(row.pivot);
            if c.is_zero() {
                continue;
            }
            rem = rem.axpy(&-&c, &row.vec);
            combo = combo.axpy(&c, &row.combo);
        }
        Reduction { remainder: rem, combo }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).remainder.is_zero()
    }

    /// Insert `v`, labelled by the input combination `tag`. Returns `true` if
    /// the rank grew; otherwise the resulting relation is recorded.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> bool {
        let red = self.reduce(&v);
        let combo = tag.sub(&red.combo);
        let best = red.remainder.entries().iter().min_by_key(|(i, c)| (pivot_cost(c), *i));
        match best {
            None => {
                self.relations.push(combo);
                false
            }
            Some((p, c)) => {
                let inv = c.inv().expect("nonzero pivot");
                let row = EchelonRow { pivot: *p, vec: red.remainder.scale(&inv), combo: combo.scale(&inv) };
                self.rows.push(row);
                true
            }
        }
    }

    /// Express `v` as a combination of inserted inputs, if it lies in their span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let red = self.reduce(v);
        red.remainder.is_zero().then_some(red.combo)
    }
}

/// Basis of the kernel of `m`. The vectors are independent and span the whole
/// kernel. A matrix with zero rows has the full coordinate space as kernel; a
/// matrix with zero columns has an empty kernel basis.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<SparseVec> {
    m.echelon().relations().to_vec()
}

/// Solve `m x = b`. Returns `Ok(None)` when no solution exists.
pub fn solve(m: &ExactMatrix, b: &SparseVec) -> Result<Option<SparseVec>> {
    if b.max_index().is_some_and(|i| i >= m.rows()) {
        return Err(Error::DimensionMismatch(format!("right-hand side longer than {} rows", m.rows())));
    }
    Ok(m.echelon().express(b))
}

/// Dense convenience wrapper around [`solve`].
pub fn solve_dense(m: &ExactMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), m.rows())));
    }
    Ok(solve(m, &SparseVec::from_dense(b))?.map(|x| x.to_dense(m.cols())))
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(m: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let e = m.echelon();
    if e.rank() < m.cols() {
        return Ok(None);
    }
    let cols = (0..m.rows()).map(|i| e.express(&SparseVec::unit(i)).expect("full rank")).collect();
    Ok(Some(ExactMatrix::from_columns(m.cols(), cols)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> ExactMatrix {
        ExactMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|x| s(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&ExactMatrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = kernel_basis(&ExactMatrix::zero(2, 3));
        assert_eq!(k, vec![SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(2)]);
    }

    #[test]
    fn degenerate_shapes() {
        assert_eq!(kernel_basis(&ExactMatrix::zero(0, 4)).len(), 4);
        assert!(kernel_basis(&ExactMatrix::zero(4, 0)).is_empty());
    }

    #[test]
    fn kernel_over_rational_functions() {
        let m = mat(&[&["1", "q"], &["q", "q^2"]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).unwrap().is_zero());
        // proportional to (q, -1)
        let v = k[0].to_dense(2);
        assert_eq!(&v[0] * &Scalar::int(-1), &v[1] * &Scalar::q());
    }

    #[test]
    fn solve_cases() {
        let b = vec![s("1"), s("q"), s("1/3")];
        assert_eq!(solve_dense(&ExactMatrix::identity(3), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve_dense(&ExactMatrix::zero(3, 2), &b).unwrap(), None);
        let x = solve_dense(&mat(&[&["2*q"]]), &[s("1")]).unwrap().unwrap();
        assert_eq!(x, vec![s("1/(2q)")]);
        assert!(solve_dense(&ExactMatrix::identity(2), &b).is_err());
    }

    #[test]
    fn rank_nullity() {
        let m = mat(&[&["1", "2", "3"], &["q", "2q", "3q"], &["0", "1", "q"]]);
        assert_eq!(m.rank(), 2);
        assert!(m.check_rank_nullity());
    }
}
