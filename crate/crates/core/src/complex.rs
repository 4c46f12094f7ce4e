//! Bounded cochain complexes of finite-dimensional spaces.

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Echelon, ExactMatrix, SparseVec};
use crate::scalar::Scalar;

/// `C^lo -> C^{lo+1} -> ... -> C^hi`, zero outside that range.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    lowest: i64,
    dims: Vec<usize>,
    /// `diffs[k]` maps degree `lowest + k` to `lowest + k + 1`.
    diffs: Vec<ExactMatrix>,
}

/// Cohomology in one degree.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i64,
    pub dim: usize,
    /// Cocycles independent modulo coboundaries, one per dimension.
    pub representatives: Vec<SparseVec>,
}

impl FiniteComplex {
    /// Build a complex and check `d∘d = 0` exactly.
    pub fn new(lowest: i64, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(lowest, dims, diffs)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Build without the `d∘d = 0` check; shapes are still validated.
    pub fn new_unchecked(lowest: i64, dims: Vec<usize>, diffs: Vec<ExactMatrix>) -> Result<Self> {
        if dims.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::DimensionMismatch("differentials without spaces".into()));
            }
        } else if diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} spaces need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    lowest + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        Ok(FiniteComplex { lowest, dims, diffs })
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].compose(&self.diffs[k - 1])?.is_zero() {
                return Err(Error::NotSquareZero { degree: self.lowest + k as i64 - 1 });
            }
        }
        Ok(())
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest
    }

    pub fn highest_degree(&self) -> i64 {
        self.lowest + self.dims.len() as i64 - 1
    }

    fn slot(&self, r: i64) -> Option<usize> {
        let k = r - self.lowest;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn dim(&self, r: i64) -> usize {
        self.slot(r).map_or(0, |k| self.dims[k])
    }

    /// The differential out of degree `r` (a zero matrix at the ends).
    pub fn differential(&self, r: i64) -> ExactMatrix {
        match self.slot(r) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => ExactMatrix::zero(self.dim(r + 1), self.dim(r)),
        }
    }

    fn diff_ref(&self, r: i64) -> Option<&ExactMatrix> {
        self.slot(r).and_then(|k| self.diffs.get(k))
    }

    pub fn apply(&self, r: i64, v: &SparseVec) -> Result<SparseVec> {
        match self.diff_ref(r) {
            Some(d) => d.mul_vec(v),
            None => Ok(SparseVec::new()),
        }
    }

    fn cycles(&self, r: i64) -> Vec<SparseVec> {
        match self.diff_ref(r) {
            Some(d) => kernel_basis(d),
            None => (0..self.dim(r)).map(SparseVec::unit).collect(),
        }
    }

    fn boundaries(&self, r: i64) -> Echelon {
        match self.diff_ref(r - 1) {
            Some(d) => d.echelon(),
            None => Echelon::new(),
        }
    }

    /// Cohomology at degree `r`: `dim ker d_r - rank d_{r-1}` with representatives.
    pub fn cohomology(&self, r: i64) -> Result<Cohomology> {
        self.check_square_zero()?;
        Ok(self.cohomology_unchecked(r))
    }

    /// As [`FiniteComplex::cohomology`] but trusting `d∘d = 0`.
    pub fn cohomology_unchecked(&self, r: i64) -> Cohomology {
        let mut span = self.boundaries(r);
        let mut representatives = Vec::new();
        for z in self.cycles(r) {
            if span.insert(z.clone(), SparseVec::new()) {
                representatives.push(z);
            }
        }
        Cohomology { degree: r, dim: representatives.len(), representatives }
    }

    /// `Ok(Some(h))` with `d h = z` when `z` is a coboundary, `Ok(None)` otherwise.
    pub fn is_coboundary(&self, r: i64, z: &SparseVec) -> Result<Option<SparseVec>> {
        if z.max_index().is_some_and(|i| i >= self.dim(r)) {
            return Err(Error::DimensionMismatch(format!("cochain too long for degree {r}")));
        }
        if !self.apply(r, z)?.is_zero() {
            return Err(Error::NotCocycle { degree: r });
        }
        if z.is_zero() {
            return Ok(Some(SparseVec::new()));
        }
        Ok(self.boundaries(r).express(z))
    }
}

/// A complex whose basis in each degree is a sorted list of integer keys.
///
/// Builders of Hochschild-type complexes describe their cells by keys (for
/// instance flattened tensor indices) and supply the differential one cell at
/// a time; this assembles the matrices and translates vectors both ways.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub cells: Vec<Vec<usize>>,
    pub complex: FiniteComplex,
}

impl CellComplex {
    /// `cells[k]` lists the keys in degree `lowest + k`, strictly increasing.
    /// `diff(r, key)` returns the image of a cell of degree `r` as
    /// `(key, coefficient)` pairs in degree `r + 1`.
    pub fn build(
        lowest: i64,
        cells: Vec<Vec<usize>>,
        mut diff: impl FnMut(i64, usize) -> Result<Vec<(usize, Scalar)>>,
        check_square_zero: bool,
    ) -> Result<Self> {
        let mut diffs = Vec::new();
        for k in 0..cells.len().saturating_sub(1) {
            let r = lowest + k as i64;
            let target = &cells[k + 1];
            let mut cols = Vec::with_capacity(cells[k].len());
            for &key in &cells[k] {
                let mut pairs = Vec::new();
                for (t, c) in diff(r, key)? {
                    let pos = target.binary_search(&t).map_err(|_| {
                        Error::invalid(format!("differential leaves the cell set at degree {}", r + 1))
                    })?;
                    pairs.push((pos, c));
                }
                cols.push(SparseVec::from_pairs(pairs));
            }
            diffs.push(ExactMatrix::from_columns(target.len(), cols)?);
        }
        let dims = cells.iter().map(Vec::len).collect();
        let complex = if check_square_zero {
            FiniteComplex::new(lowest, dims, diffs)?
        } else {
            FiniteComplex::new_unchecked(lowest, dims, diffs)?
        };
        Ok(CellComplex { cells, complex })
    }

    fn keys(&self, r: i64) -> &[usize] {
        let k = r - self.complex.lowest_degree();
        if k < 0 {
            return &[];
        }
        self.cells.get(k as usize).map_or(&[], Vec::as_slice)
    }

    /// Translate a key-indexed vector into local coordinates.
    pub fn to_local(&self, r: i64, v: &SparseVec) -> Result<SparseVec> {
        let keys = self.keys(r);
        let mut out = Vec::with_capacity(v.nnz());
        for (key, c) in v.entries() {
            let pos = keys
                .binary_search(key)
                .map_err(|_| Error::invalid(format!("cochain has a component outside degree {r} cells")))?;
            out.push((pos, c.clone()));
        }
        Ok(SparseVec::from_pairs(out))
    }

    pub fn to_keys(&self, r: i64, v: &SparseVec) -> SparseVec {
        let keys = self.keys(r);
        SparseVec::from_pairs(v.entries().iter().map(|(i, c)| (keys[*i], c.clone())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn koszul() -> FiniteComplex {
        // multiplication by x on K[x]/x^2 in the basis {1, x}
        let m = ExactMatrix::from_rows(&[vec![Scalar::zero(), Scalar::zero()], vec![Scalar::one(), Scalar::zero()]]).unwrap();
        FiniteComplex::new(0, vec![2, 2], vec![m]).unwrap()
    }

    #[test]
    fn single_space() {
        let c = FiniteComplex::new(0, vec![1], vec![]).unwrap();
        assert_eq!(c.cohomology(0).unwrap().dim, 1);
        assert_eq!(c.cohomology(1).unwrap().dim, 0);
    }

    #[test]
    fn identity_is_acyclic() {
        let c = FiniteComplex::new(0, vec![1, 1], vec![ExactMatrix::identity(1)]).unwrap();
        assert_eq!((c.cohomology(0).unwrap().dim, c.cohomology(1).unwrap().dim), (0, 0));
    }

    #[test]
    fn koszul_dims_and_classes() {
        let c = koszul();
        assert_eq!((c.cohomology(0).unwrap().dim, c.cohomology(1).unwrap().dim), (1, 1));
        let gen = c.cohomology(1).unwrap().representatives[0].clone();
        assert_eq!(c.is_coboundary(1, &gen).unwrap(), None);
        let h0 = SparseVec::unit(0);
        let z = c.apply(0, &h0).unwrap();
        let h = c.is_coboundary(1, &z).unwrap().unwrap();
        assert_eq!(c.apply(0, &h).unwrap(), z);
        assert_eq!(c.is_coboundary(1, &SparseVec::new()).unwrap(), Some(SparseVec::new()));
    }

    #[test]
    fn rejects_non_cocycle_and_bad_square() {
        let c = FiniteComplex::new(0, vec![1, 1], vec![ExactMatrix::identity(1)]).unwrap();
        assert!(matches!(c.is_coboundary(0, &SparseVec::unit(0)), Err(Error::NotCocycle { degree: 0 })));
        let bad = FiniteComplex::new(3, vec![1, 1, 1], vec![ExactMatrix::identity(1), ExactMatrix::identity(1)]);
        assert!(matches!(bad, Err(Error::NotSquareZero { degree: 3 })));
    }
}
