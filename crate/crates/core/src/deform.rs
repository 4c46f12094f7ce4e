//! First-order deformations over `K[V]/V^2`, splittings, and their
//! deformation 2-cocycles.
//!
//! A deformation is stored as the classical product of `a` plus one
//! correction 2-cochain `m_k` per basis vector `ε_k` of `V*`:
//! `e_i * e_j = e_i e_j + Σ_k ε_k m_k(e_i, e_j)`. A splitting is a lift
//! `s(e_i) = e_i + Σ_k ε_k g_k(e_i)`.

use crate::algebra::{Bimodule, FiniteAlgebra, Hochschild, HochschildCochain};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::{Derivation, Scalar};

#[derive(Clone, Debug)]
pub struct FirstOrderDeformation {
    a: FiniteAlgebra,
    corrections: Vec<HochschildCochain>,
}

/// Linear lift of the basis of `a` into the deformed algebra.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// `lifts[k]` is the `ε_k` component, a linear map `a -> a`.
    lifts: Vec<HochschildCochain>,
}

/// Class of a deformation cocycle, one entry per basis vector of `V`.
#[derive(Clone, Debug)]
pub struct DeformationClass {
    /// `None` for a nonzero class, otherwise a primitive.
    pub components: Vec<Option<HochschildCochain>>,
}

impl DeformationClass {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Option::is_some)
    }
}

impl FirstOrderDeformation {
    /// `corrections[k]` must be a 2-cochain `a ⊗ a -> a`.
    pub fn new(a: FiniteAlgebra, corrections: Vec<HochschildCochain>) -> Result<Self> {
        let n = a.dim();
        if corrections.is_empty() {
            return Err(Error::invalid("parameter space V must be nonzero"));
        }
        if corrections.iter().any(|c| c.degree() != 2 || c.algebra_dim() != n || c.module_dim() != n) {
            return Err(Error::DimensionMismatch("corrections must be 2-cochains on the algebra".into()));
        }
        Ok(FirstOrderDeformation { a, corrections })
    }

    /// The trivial deformation `a ⊗ K_ε` over a `v`-dimensional `V`.
    pub fn trivial(a: FiniteAlgebra, v: usize) -> Self {
        let n = a.dim();
        FirstOrderDeformation { a, corrections: vec![HochschildCochain::zero(2, n, n); v.max(1)] }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.a
    }

    pub fn v_dim(&self) -> usize {
        self.corrections.len()
    }

    pub fn corrections(&self) -> &[HochschildCochain] {
        &self.corrections
    }

    /// The deformed algebra as a `K`-algebra with basis `e_i` followed by
    /// `ε_k e_i` (index `n + k n + i`).
    pub fn total_algebra(&self) -> FiniteAlgebra {
        let n = self.a.dim();
        let v = self.v_dim();
        let size = n * (1 + v);
        let mut mul = vec![vec![SparseVec::new(); size]; size];
        let eps = |k: usize, x: &SparseVec| x.remap(|l| Some(n + k * n + l));
        for i in 0..n {
            for j in 0..n {
                let mut p = self.a.product(i, j).clone();
                for (k, c) in self.corrections.iter().enumerate() {
                    p = p.add(&eps(k, &c.eval_basis(&[i, j])));
                }
                mul[i][j] = p;
                for k in 0..v {
                    mul[n + k * n + i][j] = eps(k, self.a.product(i, j));
                    mul[i][n + k * n + j] = eps(k, self.a.product(i, j));
                }
            }
        }
        let labels = self
            .a
            .labels()
            .iter()
            .cloned()
            .chain((0..v).flat_map(|k| self.a.labels().iter().map(move |l| format!("e{}*{l}", k + 1))))
            .collect();
        FiniteAlgebra::from_sparse(labels, None, self.a.unit().clone(), mul).expect("shape")
    }

    /// Associativity of the deformed product modulo `V^2`.
    pub fn validate(&self) -> Result<()> {
        if let Err(v) = self.a.validate() {
            return Err(Error::invalid(format!("base algebra: {v}")));
        }
        let total = self.total_algebra();
        let size = total.dim();
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let l = total.mul_vec(total.product(i, j), &SparseVec::unit(k));
                    let r = total.mul_vec(&SparseVec::unit(i), total.product(j, k));
                    if l != r {
                        return Err(Error::invalid(format!(
                            "deformed product is not associative at ({}, {}, {})",
                            total.labels()[i],
                            total.labels()[j],
                            total.labels()[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl Splitting {
    pub fn canonical(def: &FirstOrderDeformation) -> Self {
        let n = def.a.dim();
        Splitting { lifts: vec![HochschildCochain::zero(1, n, n); def.v_dim()] }
    }

    pub fn new(def: &FirstOrderDeformation, lifts: Vec<HochschildCochain>) -> Result<Self> {
        let n = def.a.dim();
        if lifts.len() != def.v_dim() || lifts.iter().any(|g| g.degree() != 1 || g.algebra_dim() != n || g.module_dim() != n) {
            return Err(Error::invalid("splitting must give one linear map a -> a per basis vector of V"));
        }
        Ok(Splitting { lifts })
    }

    /// From full lifts `s(e_i)` written in the basis of the deformed algebra.
    pub fn from_lifts(def: &FirstOrderDeformation, lifts: &[SparseVec]) -> Result<Self> {
        let n = def.a.dim();
        if lifts.len() != n {
            return Err(Error::invalid("a splitting needs one lift per basis element"));
        }
        let mut entries = vec![Vec::new(); def.v_dim()];
        for (i, s) in lifts.iter().enumerate() {
            for (idx, c) in s.entries() {
                if *idx < n {
                    let expected = if *idx == i { Scalar::one() } else { Scalar::zero() };
                    if *c != expected {
                        return Err(Error::invalid(format!("lift of basis element {i} does not project back to it")));
                    }
                } else if *idx < n * (1 + def.v_dim()) {
                    let k = (idx - n) / n;
                    entries[k].push((vec![i], (idx - n) % n, c.clone()));
                } else {
                    return Err(Error::DimensionMismatch("lift has too many coordinates".into()));
                }
            }
            if s.get(i).is_zero() {
                return Err(Error::invalid(format!("lift of basis element {i} does not project back to it")));
            }
        }
        let lifts = entries.into_iter().map(|e| HochschildCochain::from_entries(1, n, n, e)).collect::<Result<_>>()?;
        Ok(Splitting { lifts })
    }

    pub fn lifts(&self) -> &[HochschildCochain] {
        &self.lifts
    }

    /// `s(x)` in the basis of the deformed algebra.
    fn apply(&self, n: usize, x: &SparseVec) -> SparseVec {
        let mut out = x.clone();
        for (k, g) in self.lifts.iter().enumerate() {
            for (i, c) in x.entries() {
                out = out.axpy(c, &g.eval_basis(&[*i]).remap(|l| Some(n + k * n + l)));
            }
        }
        out
    }
}

/// `β(a, b) = s(a) s(b) - s(ab)`, a 2-cochain with values in `V* ⊗ a`.
pub fn beta_cocycle(def: &FirstOrderDeformation, s: &Splitting) -> Result<HochschildCochain> {
    let n = def.a.dim();
    let v = def.v_dim();
    if s.lifts.len() != v || s.lifts.iter().any(|g| g.algebra_dim() != n) {
        return Err(Error::invalid("splitting does not belong to this deformation"));
    }
    let total = def.total_algebra();
    let mut entries = Vec::new();
    for i in 0..n {
        let si = s.apply(n, &SparseVec::unit(i));
        for j in 0..n {
            let sj = s.apply(n, &SparseVec::unit(j));
            let lhs = total.mul_vec(&si, &sj);
            let rhs = s.apply(n, def.a.product(i, j));
            for (idx, c) in lhs.sub(&rhs).entries() {
                if *idx < n {
                    return Err(Error::invalid("splitting is not a section of the projection"));
                }
                entries.push((vec![i, j], idx - n, c.clone()));
            }
        }
    }
    HochschildCochain::from_entries(2, n, n * v, entries)
}

/// Per-`V`-component class test of a `V* ⊗ a`-valued 2-cocycle.
pub fn cocycle_class(a: &FiniteAlgebra, beta: &HochschildCochain) -> Result<DeformationClass> {
    let n = a.dim();
    if beta.algebra_dim() != n || beta.module_dim() % n != 0 {
        return Err(Error::DimensionMismatch("cocycle does not live on this algebra".into()));
    }
    let m = Bimodule::diagonal(a);
    let hh = Hochschild::new(a, &m);
    let components = (0..beta.module_dim() / n)
        .map(|k| hh.primitive(&beta.component(k, n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DeformationClass { components })
}

/// `def_a(A)`, computed from the canonical splitting.
pub fn class_of(def: &FirstOrderDeformation) -> Result<DeformationClass> {
    def.validate()?;
    cocycle_class(&def.a, &beta_cocycle(def, &Splitting::canonical(def))?)
}

/// The cocycle `ξ(m)`: entrywise derivative of the structure constants.
pub fn derivation_deformation(a: &FiniteAlgebra, xi: &Derivation) -> HochschildCochain {
    let n = a.dim();
    let table = a.map_table(|c| xi.apply(c));
    HochschildCochain::from_fn(2, n, n, |t| table[t[0]][t[1]].clone())
}

/// Do `z1` and `z2` define the same class? Returns `h` with `δh = z1 - z2`.
pub fn classes_equal(a: &FiniteAlgebra, z1: &HochschildCochain, z2: &HochschildCochain) -> Result<Option<HochschildCochain>> {
    let n = a.dim();
    if z1.algebra_dim() != n || z2.algebra_dim() != n || z1.module_dim() != z2.module_dim() || z1.module_dim() % n != 0 {
        return Err(Error::DimensionMismatch("cocycles belong to different algebras or parameter spaces".into()));
    }
    let m = Bimodule::dual_tensor(z1.module_dim() / n, a);
    Hochschild::new(a, &m).classes_equal(z1, z2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clifford() -> FirstOrderDeformation {
        let a = FiniteAlgebra::dual_numbers();
        let m1 = HochschildCochain::from_entries(2, 2, 2, vec![(vec![1, 1], 0, Scalar::one())]).unwrap();
        FirstOrderDeformation::new(a, vec![m1]).unwrap()
    }

    #[test]
    fn trivial_deformation_has_zero_beta() {
        let d = FirstOrderDeformation::trivial(FiniteAlgebra::dual_numbers(), 2);
        assert!(beta_cocycle(&d, &Splitting::canonical(&d)).unwrap().is_zero());
        assert!(class_of(&d).unwrap().is_zero());
    }

    #[test]
    fn clifford_beta_and_splitting_change() {
        let d = clifford();
        d.validate().unwrap();
        let b0 = beta_cocycle(&d, &Splitting::canonical(&d)).unwrap();
        let entries: Vec<_> = b0.entries().map(|(i, o, c)| (i, o, c.clone())).collect();
        assert_eq!(entries, vec![(vec![1, 1], 0, Scalar::one())]);
        // s(x) = x + ε·1
        let s = Splitting::from_lifts(&d, &[SparseVec::unit(0), SparseVec::from_pairs(vec![(1, Scalar::one()), (2, Scalar::one())])]).unwrap();
        let b1 = beta_cocycle(&d, &s).unwrap();
        let h = classes_equal(d.algebra(), &b1, &b0).unwrap().unwrap();
        let a = d.algebra();
        let m = Bimodule::diagonal(a);
        assert_eq!(Hochschild::new(a, &m).delta(&h).unwrap(), b1.sub(&b0).unwrap());
        assert!(!class_of(&d).unwrap().is_zero());
    }

    #[test]
    fn derivation_of_quadratic_extension_is_exact() {
        let a = FiniteAlgebra::quadratic(Scalar::q());
        let b = derivation_deformation(&a, &Derivation::d_dq());
        assert_eq!(b.eval_basis(&[1, 1]), SparseVec::unit(0));
        let h = cocycle_class(&a, &b).unwrap().components[0].clone().unwrap();
        assert_eq!(h.eval_basis(&[1]), SparseVec::from_pairs(vec![(1, "1/(2q)".parse().unwrap())]));
        assert!(h.eval_basis(&[0]).is_zero());
    }

    #[test]
    fn quantum_exterior_class_is_nonzero() {
        let a = FiniteAlgebra::quantum_exterior(Scalar::q());
        let b = derivation_deformation(&a, &Derivation::d_dq());
        assert!(!cocycle_class(&a, &b).unwrap().is_zero());
        assert!(derivation_deformation(&FiniteAlgebra::dual_numbers(), &Derivation::d_dq()).is_zero());
    }
}
