//! Shared helpers for the integration tests: independent oracles and seeded
//! random generators.
#![allow(dead_code)]

use hochkit::ainf::{self, AInfCategory};
use hochkit::algebra::{Bimodule, FiniteAlgebra, Hochschild, HochschildCochain};
use hochkit::deform::FirstOrderDeformation;
use hochkit::linalg::{ExactMatrix, SparseVec};
use hochkit::scalar::Scalar;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// polynomials over Q, kept apart from the library's own arithmetic

type P = Vec<BigRational>;

fn trim(mut p: P) -> P {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn pmul(a: &P, b: &P) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn psub(a: &P, b: &P) -> P {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Exact quotient; panics if `d` does not divide `a`.
fn pdiv(a: &P, d: &P) -> P {
    let mut r = a.clone();
    if r.is_empty() {
        return r;
    }
    let dl = d.len() - 1;
    let lead = d[dl].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(dl).max(1)];
    while r.len() > dl {
        let k = r.len() - 1 - dl;
        let c = &r[r.len() - 1] / &lead;
        for (i, x) in d.iter().enumerate() {
            r[i + k] -= &c * x;
        }
        q[k] = c;
        r = trim(r);
    }
    assert!(r.is_empty(), "inexact division in the elimination oracle");
    trim(q)
}

fn to_poly(p: &hochkit::scalar::Poly) -> P {
    trim(p.coeffs().to_vec())
}

/// Rank of a matrix over Q(q) by fraction-free (Bareiss) elimination over Q[q].
pub fn bareiss_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<P>> = rows
        .iter()
        .map(|row| {
            let den = row.iter().fold(vec![BigRational::one()], |acc, s| pmul(&acc, &to_poly(&s.denom())));
            row.iter().map(|s| pdiv(&pmul(&to_poly(&s.numer()), &den), &to_poly(&s.denom()))).collect()
        })
        .collect();
    let (nr, nc) = (m.len(), m.first().map_or(0, Vec::len));
    let mut prev: P = vec![BigRational::one()];
    let mut rank = 0;
    for c in 0..nc {
        let Some(p) = (rank..nr).find(|&r| !m[r][c].is_empty()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..nr {
            for j in c + 1..nc {
                let v = psub(&pmul(&m[rank][c], &m[r][j]), &pmul(&m[r][c], &m[rank][j]));
                m[r][j] = pdiv(&v, &prev);
            }
            m[r][c] = Vec::new();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

pub fn matrix_rows(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
}

// ---------------------------------------------------------------------------
// brute-force bar complex

/// Matrix of `d: Hom(a^{⊗r}, a) -> Hom(a^{⊗(r+1)}, a)` written out from the
/// alternating-sum formula, rows indexed by `(inputs, output)` of the target.
pub fn bar_differential(a: &FiniteAlgebra, r: usize) -> Vec<Vec<Scalar>> {
    let n = a.dim();
    let src = n.pow(r as u32) * n;
    let tgt = n.pow(r as u32 + 1) * n;
    let mut out = vec![vec![Scalar::zero(); src]; tgt];
    let digits = |mut k: usize, len: usize| {
        let mut v = vec![0; len];
        for i in (0..len).rev() {
            v[i] = k % n;
            k /= n;
        }
        v
    };
    let index = |t: &[usize]| t.iter().fold(0, |acc, &d| acc * n + d);
    let prod = |i: usize, j: usize| a.product(i, j).to_dense(n);
    // column of the basis cochain f = (ins -> e_o)
    for col in 0..src {
        let (ins, o) = (col / n, col % n);
        let t = digits(ins, r);
        for row_ins in 0..n.pow(r as u32 + 1) {
            let x = digits(row_ins, r + 1);
            let mut value = vec![Scalar::zero(); n];
            // x_0 f(x_1..x_r)
            if x[1..] == t[..] {
                for (k, c) in prod(x[0], o).iter().enumerate() {
                    value[k] += c;
                }
            }
            // sum (-1)^i f(.., x_{i-1} x_i, ..)
            for i in 1..=r {
                let pr = prod(x[i - 1], x[i]);
                for (z, c) in pr.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut y = x[..i - 1].to_vec();
                    y.push(z);
                    y.extend_from_slice(&x[i + 1..]);
                    if y == t {
                        let s = if i % 2 == 1 { -c } else { c.clone() };
                        value[o] += &s;
                    }
                }
            }
            // (-1)^{r+1} f(x_0..x_{r-1}) x_r
            if x[..r] == t[..] {
                for (k, c) in prod(o, x[r]).iter().enumerate() {
                    let s = if (r + 1) % 2 == 1 { -c } else { c.clone() };
                    value[k] += &s;
                }
            }
            for (k, v) in value.into_iter().enumerate() {
                out[index(&x) * n + k][col] = v;
            }
        }
    }
    out
}

/// `dim HH^r(a, a)` for `r = 0..=max` from the brute-force bar complex.
pub fn bar_hh_dims(a: &FiniteAlgebra, max: usize) -> Vec<usize> {
    let n = a.dim();
    let ranks: Vec<usize> = (0..=max).map(|r| bareiss_rank(&bar_differential(a, r))).collect();
    (0..=max)
        .map(|r| {
            let cochains = n.pow(r as u32) * n;
            let before = if r == 0 { 0 } else { ranks[r - 1] };
            cochains - ranks[r] - before
        })
        .collect()
}

// ---------------------------------------------------------------------------
// random data

pub fn small_int(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-3..=3)
}

/// A small element of Q(q); rational only when `rational` is set.
pub fn scalar(rng: &mut ChaCha8Rng, rational: bool) -> Scalar {
    let a = Scalar::ratio(small_int(rng), rng.gen_range(1..=3));
    if rational || rng.gen_bool(0.5) {
        return a;
    }
    let b = Scalar::int(small_int(rng));
    let num = &a + &(&b * &Scalar::q());
    if rng.gen_bool(0.3) {
        &num / &(&Scalar::q() + &Scalar::one())
    } else {
        num
    }
}

/// A random invertible matrix: rational row operations followed by scaling
/// one column by `q` (unless `rational`), which keeps coefficients small.
pub fn invertible(rng: &mut ChaCha8Rng, n: usize, rational: bool) -> ExactMatrix {
    let mut m: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect();
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            let c = Scalar::int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { -1 } else { 1 });
            for x in m[i].iter_mut() {
                *x = &*x * &c;
            }
        } else {
            let c = Scalar::int(small_int(rng));
            let row = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&row) {
                *x = &*x + &(&c * y);
            }
        }
    }
    if !rational && rng.gen_bool(0.5) {
        let k = rng.gen_range(0..n);
        for row in m.iter_mut() {
            row[k] = &row[k] * &Scalar::q();
        }
    }
    ExactMatrix::from_rows(&m).unwrap()
}

/// One of a menu of algebras of dimension at most 3, in a random basis.
pub fn algebra(rng: &mut ChaCha8Rng, rational: bool) -> FiniteAlgebra {
    let k = FiniteAlgebra::field();
    let base = match rng.gen_range(0..8) {
        0 => k,
        1 => FiniteAlgebra::dual_numbers(),
        2 => FiniteAlgebra::product_algebra(&k, &k),
        3 => FiniteAlgebra::quadratic(if rational { Scalar::int(rng.gen_range(1..=4)) } else { scalar(rng, false) }),
        4 => FiniteAlgebra::upper_triangular(2),
        5 => FiniteAlgebra::truncated_polynomial(3),
        6 => FiniteAlgebra::product_algebra(&FiniteAlgebra::product_algebra(&k, &k), &k),
        _ => FiniteAlgebra::product_algebra(&k, &FiniteAlgebra::dual_numbers()),
    };
    let p = invertible(rng, base.dim(), rational);
    base.change_basis(&p).unwrap()
}

pub fn cochain(rng: &mut ChaCha8Rng, degree: usize, n: usize, m: usize, rational: bool) -> HochschildCochain {
    HochschildCochain::from_fn(degree, n, m, |_| {
        let mut pairs = Vec::new();
        for k in 0..m {
            if rng.gen_bool(0.4) {
                pairs.push((k, scalar(rng, rational)));
            }
        }
        SparseVec::from_pairs(pairs)
    })
}

/// A random Hochschild 2-cocycle: a coboundary plus a combination of class representatives.
pub fn two_cocycle(rng: &mut ChaCha8Rng, a: &FiniteAlgebra, rational: bool) -> HochschildCochain {
    let n = a.dim();
    let m = Bimodule::diagonal(a);
    let h = Hochschild::new(a, &m);
    let mut z = h.delta(&cochain(rng, 1, n, n, rational)).unwrap();
    let hh = h.cohomology(2).unwrap();
    for rep in &hh[2].representatives {
        z = z.add(&rep.scale(&scalar(rng, rational))).unwrap();
    }
    z
}

pub fn deformation(rng: &mut ChaCha8Rng) -> FirstOrderDeformation {
    let rational = rng.gen_bool(0.5);
    let a = algebra(rng, rational);
    let v = rng.gen_range(1..=2);
    let corrections = (0..v).map(|_| two_cocycle(rng, &a, rational)).collect();
    FirstOrderDeformation::new(a, corrections).unwrap()
}

/// A valid A∞ category with at most two objects, at most three basis
/// morphisms between any pair, and products up to arity 4.
pub fn ainf_category(rng: &mut ChaCha8Rng) -> AInfCategory {
    let one = |rng: &mut ChaCha8Rng| -> AInfCategory {
        match rng.gen_range(0..4) {
            0 => {
                let len = rng.gen_range(1..=3);
                let coeffs: Vec<Scalar> = (0..len).map(|_| scalar(rng, false)).collect();
                let c = ainf::massey_category(&coeffs);
                // rescale x and z, keeping degrees
                let (sx, sz) = (Scalar::int(rng.gen_range(1..=3)), if rng.gen_bool(0.5) { Scalar::q() } else { Scalar::int(2) });
                let p = ExactMatrix::from_rows(&[
                    vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
                    vec![Scalar::zero(), sx, Scalar::zero()],
                    vec![Scalar::zero(), Scalar::zero(), sz],
                ])
                .unwrap();
                c.change_basis(&p).unwrap()
            }
            1 => AInfCategory::from_algebra(&algebra(rng, false)),
            2 => AInfCategory::from_algebra(&algebra(rng, true)),
            _ => ainf::exterior_category(),
        }
    };
    let c = one(rng);
    match rng.gen_range(0..3) {
        0 => c,
        1 if c.dim() <= 3 => {
            let d = one(rng);
            if d.dim() <= 3 {
                c.disjoint_union(&d)
            } else {
                c
            }
        }
        _ => c.with_zero_object("0"),
    }
}
