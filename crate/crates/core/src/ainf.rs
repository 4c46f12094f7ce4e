//! Finite ℤ-graded A∞ categories with structure maps `μ^s`, `1 <= s <= arity`.
//!
//! Morphisms are spanned by generators `a: X -> Y`. Inputs are written in
//! composition order: `μ^s(a_1, .., a_s)` takes `a_k: X_{k-1} -> X_k` to a
//! morphism `X_0 -> X_s`, so that for one object `μ^2(a, b)` is the product `ab`.
//!
//! Internally everything runs through the bar construction, with reduced
//! degrees `|a|' = |a| - 1` and
//!
//! ```text
//! b^s(a_1, .., a_s) = (-1)^{Σ_k (s-k)|a_k|} μ^s(a_1, .., a_s).
//! ```
//!
//! The A∞ relations are `b∘b = 0` for the Gerstenhaber composition
//! `(f∘g)(a) = Σ (-1)^{|g|'(|a_1|'+..+|a_i|')} f(a_1, .., a_i, g(..), ..)` and the
//! Hochschild differential is `[b, f]`. Cochains are presented unshifted with the
//! same sign twist, and the differential is rescaled by `(-1)^{r+1}` in
//! Hochschild degree `r`, which makes it the usual Hochschild differential on
//! ungraded algebras. The cup product is the brace `b{α, β}`, rescaled by
//! `(-1)^{|α|(|β|-1)}` so that it is the concatenation product on algebras.
//!
//! Cochains of length above a chosen bound are dropped. The differential never
//! shortens a cochain, so this is a quotient complex; for ungraded categories
//! length equals degree and nothing is lost below the bound.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::complex::{CellComplex, FiniteComplex};
use crate::error::{Error, Result};
use crate::linalg::{inverse, solve, Echelon, ExactMatrix, SparseVec};
use crate::scalar::{Derivation, Scalar};
use crate::weights::{self, Weight, WeightSolver};
use crate::algebra::FiniteAlgebra;

/// Largest number of cells in one enumeration.
pub const DEFAULT_AINF_CAP: u128 = 20_000_000;

fn parity(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

static NO_ENTRIES: BTreeMap<Vec<usize>, SparseVec> = BTreeMap::new();

#[derive(Clone, Debug, PartialEq)]
pub struct AInfCategory {
    objects: Vec<String>,
    gens: Vec<Generator>,
    /// `mu[s]` maps composable input tuples of length `s` to outputs; `mu[0]` is empty.
    mu: Vec<BTreeMap<Vec<usize>, SparseVec>>,
}

/// First failure found by [`AInfCategory::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum AInfViolation {
    /// `μ^s(inputs)` has a component of the wrong degree.
    Degree { inputs: Vec<String>, output: String },
    /// `Σ ± μ(.., μ(..), ..)` evaluated on `inputs` is `value`, not zero.
    Relation { inputs: Vec<String>, value: Vec<(String, Scalar)> },
}

impl std::fmt::Display for AInfViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AInfViolation::Degree { inputs, output } => {
                write!(f, "μ^{}({}) has a component on {output} of the wrong degree", inputs.len(), inputs.join(", "))
            }
            AInfViolation::Relation { inputs, value } => {
                let v: Vec<String> = value.iter().map(|(l, c)| format!("({c}) {l}")).collect();
                write!(f, "A∞ relation fails on ({}): {}", inputs.join(", "), v.join(" + "))
            }
        }
    }
}

/// `name`, primed until it clashes with nothing in `taken`.
fn fresh<'a>(name: &str, taken: impl Iterator<Item = &'a String> + Clone) -> String {
    let mut n = name.to_string();
    while taken.clone().any(|t| *t == n) {
        n.push('\'');
    }
    n
}

impl AInfCategory {
    /// `entries` lists `(inputs, output)`; repeated inputs are summed.
    pub fn new(objects: Vec<String>, gens: Vec<Generator>, arity: usize, entries: Vec<(Vec<usize>, SparseVec)>) -> Result<Self> {
        for g in &gens {
            if g.source >= objects.len() || g.target >= objects.len() {
                return Err(Error::invalid(format!("morphism {} has an unknown end object", g.label)));
            }
        }
        let mut c = AInfCategory { objects, gens, mu: vec![BTreeMap::new(); arity + 1] };
        for (ins, out) in entries {
            let s = ins.len();
            if s == 0 {
                return Err(Error::invalid("μ^0 must vanish: curvature terms are not allowed"));
            }
            if s > arity {
                return Err(Error::invalid(format!("μ^{s} given but the arity bound is {arity}")));
            }
            let (x, y) = c.chain_ends(&ins)?;
            for (o, _) in out.entries() {
                let g = c.gens.get(*o).ok_or_else(|| Error::invalid(format!("output index {o} out of range")))?;
                if g.source != x || g.target != y {
                    return Err(Error::invalid(format!(
                        "μ^{s}({}) has a component on {}, which is not a morphism {} -> {}",
                        c.labels(&ins).join(", "),
                        g.label,
                        c.objects[x],
                        c.objects[y]
                    )));
                }
            }
            let slot = c.mu[s].entry(ins).or_default();
            *slot = slot.add(&out);
        }
        for m in c.mu.iter_mut() {
            m.retain(|_, v| !v.is_zero());
        }
        Ok(c)
    }

    /// One object with `μ^2` the product of `a`.
    pub fn from_algebra(a: &FiniteAlgebra) -> Self {
        let gens = (0..a.dim())
            .map(|i| Generator { label: a.labels()[i].clone(), source: 0, target: 0, degree: a.degree(i) })
            .collect();
        let mut entries = Vec::new();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if !a.product(i, j).is_zero() {
                    entries.push((vec![i, j], a.product(i, j).clone()));
                }
            }
        }
        AInfCategory::new(vec!["X".into()], gens, 2, entries).expect("algebra gives a category")
    }

    fn chain_ends(&self, ins: &[usize]) -> Result<(usize, usize)> {
        for &i in ins {
            if i >= self.gens.len() {
                return Err(Error::invalid(format!("morphism index {i} out of range")));
            }
        }
        for w in ins.windows(2) {
            if self.gens[w[0]].target != self.gens[w[1]].source {
                return Err(Error::invalid(format!(
                    "{} and {} are not composable",
                    self.gens[w[0]].label, self.gens[w[1]].label
                )));
            }
        }
        Ok((self.gens[ins[0]].source, self.gens[*ins.last().unwrap()].target))
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn arity(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self, s: usize) -> &BTreeMap<Vec<usize>, SparseVec> {
        self.mu.get(s).unwrap_or(&NO_ENTRIES)
    }

    /// Basis morphisms `x -> y`.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.gens.len()).filter(|&g| self.gens[g].source == x && self.gens[g].target == y).collect()
    }

    fn labels(&self, ins: &[usize]) -> Vec<String> {
        ins.iter().map(|&i| self.gens[i].label.clone()).collect()
    }

    fn labelled(&self, v: &SparseVec) -> Vec<(String, Scalar)> {
        v.entries().iter().map(|(i, c)| (self.gens[*i].label.clone(), c.clone())).collect()
    }

    pub fn is_q_independent(&self) -> bool {
        self.mu.iter().all(|m| m.values().all(|v| v.entries().iter().all(|(_, c)| c.is_rational())))
    }

    /// Largest `s` with `μ^s != 0`.
    pub fn top_arity(&self) -> usize {
        (0..self.mu.len()).rev().find(|&s| !self.mu[s].is_empty()).unwrap_or(0)
    }

    /// Apply `f` to every structure constant.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> AInfCategory {
        let mu = self
            .mu
            .iter()
            .map(|m| {
                m.iter()
                    .map(|(k, v)| (k.clone(), SparseVec::from_pairs(v.entries().iter().map(|(i, c)| (*i, f(c))).collect())))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        AInfCategory { objects: self.objects.clone(), gens: self.gens.clone(), mu }
    }

    /// Objects of both categories, with no morphisms between them.
    pub fn disjoint_union(&self, other: &AInfCategory) -> AInfCategory {
        let (no, ng) = (self.objects.len(), self.gens.len());
        let mut gens = self.gens.clone();
        for g in &other.gens {
            let label = fresh(&g.label, gens.iter().map(|h| &h.label));
            gens.push(Generator { label, source: g.source + no, target: g.target + no, degree: g.degree });
        }
        let arity = self.arity().max(other.arity());
        let mut mu = vec![BTreeMap::new(); arity + 1];
        for (s, m) in self.mu.iter().enumerate() {
            mu[s].extend(m.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        for (s, m) in other.mu.iter().enumerate() {
            for (k, v) in m {
                mu[s].insert(k.iter().map(|i| i + ng).collect(), v.remap(|i| Some(i + ng)));
            }
        }
        let mut objects = self.objects.clone();
        for o in &other.objects {
            let o = fresh(o, objects.iter());
            objects.push(o);
        }
        AInfCategory { objects, gens, mu }
    }

    /// Adjoin an object with no morphisms at all (a zero object).
    pub fn with_zero_object(&self, label: &str) -> AInfCategory {
        let mut c = self.clone();
        let label = fresh(label, c.objects.iter());
        c.objects.push(label);
        c
    }

    /// Conjugate by the invertible matrix `p`, whose column `j` expresses new
    /// generator `j` in the old basis: `μ'(u) = p^{-1} μ(p u_1, .., p u_s)`.
    /// Columns may only mix generators with the same ends and degree.
    pub fn change_basis(&self, p: &ExactMatrix) -> Result<AInfCategory> {
        let d = self.dim();
        if p.rows() != d || p.cols() != d {
            return Err(Error::DimensionMismatch(format!("basis change must be {d}x{d}")));
        }
        for j in 0..d {
            for (i, _) in p.column(j).entries() {
                let (a, b) = (&self.gens[*i], &self.gens[j]);
                if (a.source, a.target, a.degree) != (b.source, b.target, b.degree) {
                    return Err(Error::invalid(format!("basis change mixes {} into {}", a.label, b.label)));
                }
            }
        }
        let pinv = inverse(p)?.ok_or_else(|| Error::invalid("basis change is not invertible"))?;
        let mut entries = Vec::new();
        for s in 1..=self.arity() {
            if self.mu[s].is_empty() {
                continue;
            }
            for_each_tuple(self, s, &mut |u: &[usize]| {
                let mut acc = SparseVec::new();
                expand(p, u, &mut Vec::new(), Scalar::one(), &mut |old: &[usize], c: &Scalar| {
                    if let Some(v) = self.mu[s].get(old) {
                        acc = acc.axpy(c, v);
                    }
                });
                if !acc.is_zero() {
                    entries.push((u.to_vec(), pinv.mul_vec(&acc).expect("square")));
                }
            });
        }
        AInfCategory::new(self.objects.clone(), self.gens.clone(), self.arity(), entries)
    }

    /// Unit of `End(x)`: `e` with `μ^2(e, a) = a` and `μ^2(b, e) = b`.
    pub fn unit(&self, x: usize) -> Option<SparseVec> {
        let cand: Vec<usize> = self.hom(x, x).into_iter().filter(|&g| self.gens[g].degree == 0).collect();
        let d = self.dim();
        let out_of: Vec<usize> = (0..d).filter(|&g| self.gens[g].source == x).collect();
        let into: Vec<usize> = (0..d).filter(|&g| self.gens[g].target == x).collect();
        let blocks = out_of.len() + into.len();
        let rows = blocks * d;
        let mut cols = Vec::new();
        for &e in &cand {
            let mut pairs = Vec::new();
            for (k, &a) in out_of.iter().enumerate() {
                if let Some(v) = self.mu(2).get(&vec![e, a]) {
                    pairs.extend(v.entries().iter().map(|(i, c)| (k * d + i, c.clone())));
                }
            }
            for (k, &b) in into.iter().enumerate() {
                if let Some(v) = self.mu(2).get(&vec![b, e]) {
                    pairs.extend(v.entries().iter().map(|(i, c)| ((out_of.len() + k) * d + i, c.clone())));
                }
            }
            cols.push(SparseVec::from_pairs(pairs));
        }
        let mut rhs = Vec::new();
        for (k, &a) in out_of.iter().enumerate() {
            rhs.push((k * d + a, Scalar::one()));
        }
        for (k, &b) in into.iter().enumerate() {
            rhs.push(((out_of.len() + k) * d + b, Scalar::one()));
        }
        let m = ExactMatrix::from_columns(rows, cols).ok()?;
        let sol = solve(&m, &SparseVec::from_pairs(rhs)).ok()??;
        Some(SparseVec::from_pairs(sol.entries().iter().map(|(k, c)| (cand[*k], c.clone())).collect()))
    }

    /// Degree bookkeeping and all A∞ relations with at most `arity` inputs.
    pub fn validate(&self, arity: usize) -> std::result::Result<(), AInfViolation> {
        for (s, m) in self.mu.iter().enumerate() {
            for (ins, out) in m {
                let want: i64 = ins.iter().map(|&i| self.gens[i].degree).sum::<i64>() + 2 - s as i64;
                for (o, _) in out.entries() {
                    if self.gens[*o].degree != want {
                        return Err(AInfViolation::Degree { inputs: self.labels(ins), output: self.gens[*o].label.clone() });
                    }
                }
            }
        }
        let bar = Bar::new(self, arity);
        let mut acc: BTreeMap<(usize, Vec<usize>), SparseVec> = BTreeMap::new();
        for s in 1..bar.b.len() {
            for (ins, out) in &bar.b[s] {
                let mut e = 0i64;
                for (i, &a) in ins.iter().enumerate() {
                    for (t, idx, c) in &bar.producers[a] {
                        if s + t - 1 > arity {
                            continue;
                        }
                        let inner = &bar.b[*t][*idx].0;
                        let new: Vec<usize> = ins[..i].iter().chain(inner).chain(&ins[i + 1..]).copied().collect();
                        let slot = acc.entry((new.len(), new)).or_default();
                        *slot = slot.axpy(&(&parity(e) * c), out);
                    }
                    e += bar.deg[a];
                }
            }
        }
        for ((_, ins), v) in acc {
            if !v.is_zero() {
                let v = v.scale(&sigma(&self.gens, &ins));
                return Err(AInfViolation::Relation { inputs: self.labels(&ins), value: self.labelled(&v) });
            }
        }
        Ok(())
    }

    /// Hochschild degree `ℓ + |out| - Σ|a_k|` of a basis cochain.
    pub fn cell_degree(&self, cell: &Cell, out: usize) -> i64 {
        cell.inputs.len() as i64 + self.gens[out].degree - cell.inputs.iter().map(|&i| self.gens[i].degree).sum::<i64>()
    }

    pub fn cell(&self, inputs: Vec<usize>) -> Cell {
        Cell { object: self.gens[inputs[0]].source, inputs }
    }
}

/// `(-1)^{Σ_k (ℓ-k)|a_k|}`, the sign between `μ`-form and `b`-form.
fn sigma(gens: &[Generator], ins: &[usize]) -> Scalar {
    let l = ins.len() as i64;
    parity(ins.iter().enumerate().map(|(k, &a)| (l - 1 - k as i64) * gens[a].degree).sum())
}

/// Expand `μ(p u_1, .., p u_s)` multilinearly.
fn expand(p: &ExactMatrix, u: &[usize], buf: &mut Vec<usize>, c: Scalar, f: &mut impl FnMut(&[usize], &Scalar)) {
    if buf.len() == u.len() {
        f(buf, &c);
        return;
    }
    for (i, x) in p.column(u[buf.len()]).entries() {
        buf.push(*i);
        expand(p, u, buf, &c * x, f);
        buf.pop();
    }
}

/// Call `f` on every composable tuple of generators of length `len >= 1`.
fn for_each_tuple(c: &AInfCategory, len: usize, f: &mut impl FnMut(&[usize])) {
    let mut out_of = vec![Vec::new(); c.objects.len()];
    for (g, gen) in c.gens.iter().enumerate() {
        out_of[gen.source].push(g);
    }
    fn go(c: &AInfCategory, out_of: &[Vec<usize>], buf: &mut Vec<usize>, len: usize, f: &mut impl FnMut(&[usize])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        let next: Vec<usize> = match buf.last() {
            None => (0..c.gens.len()).collect(),
            Some(&g) => out_of[c.gens[g].target].clone(),
        };
        for g in next {
            buf.push(g);
            go(c, out_of, buf, len, f);
            buf.pop();
        }
    }
    if len > 0 {
        go(c, &out_of, &mut Vec::new(), len, f);
    }
}

/// Structure maps in bar form, indexed for insertions.
struct Bar {
    deg: Vec<i64>,
    b: Vec<Vec<(Vec<usize>, SparseVec)>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    /// `slot[s][(i, g)]`: entries of `b^s` with `g` in input position `i`.
    slot: Vec<HashMap<(usize, usize), Vec<usize>>>,
    /// `producers[g]`: `(s, entry, coefficient of g in its output)`.
    producers: Vec<Vec<(usize, usize, Scalar)>>,
}

impl Bar {
    fn new(c: &AInfCategory, arity: usize) -> Self {
        let top = arity.min(c.arity());
        let deg: Vec<i64> = c.gens.iter().map(|g| g.degree - 1).collect();
        let mut b = vec![Vec::new(); top + 1];
        let mut lookup = vec![HashMap::new(); top + 1];
        let mut slot = vec![HashMap::new(); top + 1];
        let mut producers = vec![Vec::new(); c.gens.len()];
        for s in 1..=top {
            for (ins, out) in &c.mu[s] {
                let idx = b[s].len();
                let v = out.scale(&sigma(&c.gens, ins));
                for (i, &g) in ins.iter().enumerate() {
                    slot[s].entry((i, g)).or_insert_with(Vec::new).push(idx);
                }
                for (o, x) in v.entries() {
                    producers[*o].push((s, idx, x.clone()));
                }
                lookup[s].insert(ins.clone(), idx);
                b[s].push((ins.clone(), v));
            }
        }
        Bar { deg, b, lookup, slot, producers }
    }

    fn top(&self) -> usize {
        self.b.len() - 1
    }
}

// ---------------------------------------------------------------------------
// cochains

/// A composable chain of inputs starting at `object` (the source of the first
/// input, or the only object for the empty chain).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub object: usize,
    pub inputs: Vec<usize>,
}

impl Cell {
    pub fn empty(object: usize) -> Self {
        Cell { object, inputs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// Hochschild cochain of an A∞ category: for each chain of inputs, a morphism
/// from its first source to its last target.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AInfCochain {
    terms: BTreeMap<Cell, SparseVec>,
}

impl AInfCochain {
    pub fn zero() -> Self {
        AInfCochain::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Cell, SparseVec)>) -> Self {
        let mut map: BTreeMap<Cell, SparseVec> = BTreeMap::new();
        for (k, v) in terms {
            let slot = map.entry(k).or_default();
            *slot = slot.add(&v);
        }
        map.retain(|_, v| !v.is_zero());
        AInfCochain { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<Cell, SparseVec> {
        &self.terms
    }

    pub fn get(&self, cell: &Cell) -> Option<&SparseVec> {
        self.terms.get(cell)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &AInfCochain) -> AInfCochain {
        AInfCochain::from_terms(self.terms.iter().chain(&o.terms).map(|(k, v)| (k.clone(), v.clone())))
    }

    pub fn sub(&self, o: &AInfCochain) -> AInfCochain {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> AInfCochain {
        AInfCochain::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v.scale(c))))
    }

    /// Terms with exactly `len` inputs.
    pub fn length_component(&self, len: usize) -> AInfCochain {
        AInfCochain::from_terms(self.terms.iter().filter(|(k, _)| k.len() == len).map(|(k, v)| (k.clone(), v.clone())))
    }

    pub fn lengths(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Cell::len).collect()
    }

    fn max_length(&self) -> usize {
        self.terms.keys().map(Cell::len).max().unwrap_or(0)
    }

    /// Flip every term between `μ`-form and `b`-form.
    fn twisted(&self, gens: &[Generator]) -> AInfCochain {
        AInfCochain {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.scale(&sigma(gens, &k.inputs)))).collect(),
        }
    }
}

/// `ξ(μ*)`: the entrywise derivative of every structure map, as a cochain of degree 2.
pub fn ks_cat(c: &AInfCategory, xi: &Derivation) -> AInfCochain {
    let mut terms = Vec::new();
    for m in &c.mu {
        for (ins, out) in m {
            let v = SparseVec::from_pairs(out.entries().iter().map(|(i, x)| (*i, xi.apply(x))).collect());
            terms.push((c.cell(ins.clone()), v));
        }
    }
    AInfCochain::from_terms(terms)
}

/// The unit cochain `x ↦ 1_x` of length zero, if every object has a unit.
pub fn unit_cochain(c: &AInfCategory) -> Option<AInfCochain> {
    let mut terms = Vec::new();
    for x in 0..c.objects.len() {
        terms.push((Cell::empty(x), c.unit(x)?));
    }
    Some(AInfCochain::from_terms(terms))
}

// ---------------------------------------------------------------------------
// full subcategories

/// Full subcategory on `objects`, with the generator renumbering `old -> new`.
pub fn restrict(c: &AInfCategory, objects: &[usize]) -> Result<(AInfCategory, Vec<Option<usize>>)> {
    if objects.is_empty() {
        return Err(Error::invalid("cannot restrict to an empty set of objects"));
    }
    let mut keep: Vec<usize> = objects.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&x| x >= c.objects.len()) {
        return Err(Error::invalid("restriction to an unknown object"));
    }
    let obj_map: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let mut gen_map = vec![None; c.dim()];
    let mut gens = Vec::new();
    for (g, gen) in c.gens.iter().enumerate() {
        if let (Some(&s), Some(&t)) = (obj_map.get(&gen.source), obj_map.get(&gen.target)) {
            gen_map[g] = Some(gens.len());
            gens.push(Generator { source: s, target: t, ..gen.clone() });
        }
    }
    let mut mu = vec![BTreeMap::new(); c.mu.len()];
    for (s, m) in c.mu.iter().enumerate() {
        for (ins, out) in m {
            if let Some(new) = ins.iter().map(|&i| gen_map[i]).collect::<Option<Vec<_>>>() {
                mu[s].insert(new, out.remap(|i| gen_map[i]));
            }
        }
    }
    let objects = keep.iter().map(|&o| c.objects[o].clone()).collect();
    Ok((AInfCategory { objects, gens, mu }, gen_map))
}

/// Restrict a cochain along [`restrict`]: keep the chains inside the subcategory.
pub fn restrict_cochain(c: &AInfCategory, objects: &[usize], z: &AInfCochain) -> Result<AInfCochain> {
    let (sub, gen_map) = restrict(c, objects)?;
    let mut keep: Vec<usize> = objects.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut terms = Vec::new();
    for (cell, v) in &z.terms {
        let Ok(pos) = keep.binary_search(&cell.object) else { continue };
        if let Some(ins) = cell.inputs.iter().map(|&i| gen_map[i]).collect::<Option<Vec<_>>>() {
            terms.push((Cell { object: pos, inputs: ins }, v.remap(|i| gen_map[i])));
        }
    }
    let _ = sub;
    Ok(AInfCochain::from_terms(terms))
}

// ---------------------------------------------------------------------------
// the Hochschild complex

/// Flattened keys for cochain cells `(object or inputs, output)` up to a length
/// bound, sorted by length, then inputs, then output.
struct Codec {
    d: usize,
    offsets: Vec<usize>,
}

impl Codec {
    fn new(nobj: usize, d: usize, max_len: usize, cap: u128) -> Result<Self> {
        let mut offsets = vec![0usize];
        let mut size = (nobj as u128) * (d as u128);
        let mut total: u128 = 0;
        for l in 0..=max_len {
            total += size;
            if total > cap {
                return Err(Error::CapExceeded { what: format!("A∞ cochains of length {l}"), size: total, cap });
            }
            offsets.push(total as usize);
            size = (d as u128).pow(l as u32 + 1) * d as u128;
        }
        Ok(Codec { d, offsets })
    }

    fn encode(&self, cell: &Cell, out: usize) -> usize {
        let idx = if cell.inputs.is_empty() {
            cell.object
        } else {
            cell.inputs.iter().fold(0, |acc, &g| acc * self.d + g)
        };
        self.offsets[cell.inputs.len()] + idx * self.d + out
    }

    fn decode(&self, key: usize, gens: &[Generator]) -> (Cell, usize) {
        let l = self.offsets.partition_point(|&o| o <= key) - 1;
        let rest = key - self.offsets[l];
        let (mut t, out) = (rest / self.d, rest % self.d);
        if l == 0 {
            return (Cell::empty(t), out);
        }
        let mut ins = vec![0; l];
        for k in (0..l).rev() {
            ins[k] = t % self.d;
            t /= self.d;
        }
        (Cell { object: gens[ins[0]].source, inputs: ins }, out)
    }
}

/// Cohomology of one `(degree, weight)` class.
#[derive(Clone, Debug)]
pub struct AInfHH {
    pub degree: i64,
    pub weight: Weight,
    pub dim: usize,
    pub representatives: Vec<AInfCochain>,
}

/// Hochschild cochains of length at most `max_length`, with the structure
/// maps up to a chosen arity.
pub struct AInfHochschild<'c> {
    c: &'c AInfCategory,
    bar: Bar,
    max_length: usize,
    weights: Vec<Weight>,
    codec: Codec,
    warnings: Vec<String>,
    cap: u128,
}

impl<'c> AInfHochschild<'c> {
    /// Complex on cochains of length `<= max_length` using `μ^s` for `s <= arity`.
    /// The differential into length `ℓ` needs `μ^{<= ℓ+1}`; if the category has
    /// a nonzero structure map beyond `arity` that would be needed, this refuses.
    pub fn new(c: &'c AInfCategory, max_length: usize, arity: usize) -> Result<Self> {
        Self::with_ties(c, max_length, arity, &[])
    }

    /// As [`new`](Self::new), forcing the generators in `tie` to share one weight.
    pub fn with_ties(c: &'c AInfCategory, max_length: usize, arity: usize, tie: &[usize]) -> Result<Self> {
        let needed = max_length + 1;
        let mut warnings = Vec::new();
        if arity < needed {
            if let Some(s) = (arity + 1..=needed.min(c.arity())).find(|&s| !c.mu[s].is_empty()) {
                let _ = s;
                return Err(Error::ArityInsufficient { needed, given: arity });
            }
            warnings.push(format!(
                "arity {arity} is below {needed}; the differential is complete only because μ^s vanishes for {arity} < s <= {needed}"
            ));
        }
        let mut solver = WeightSolver::new(c.dim());
        for m in &c.mu {
            for (ins, out) in m {
                for (o, _) in out.entries() {
                    solver.relate(*o, ins);
                }
            }
        }
        for w in tie.windows(2) {
            solver.relate(w[0], &[w[1]]);
        }
        let weights = solver.solve();
        let codec = Codec::new(c.objects.len(), c.dim(), max_length, DEFAULT_AINF_CAP)?;
        Ok(AInfHochschild { c, bar: Bar::new(c, arity), max_length, weights, codec, warnings, cap: DEFAULT_AINF_CAP })
    }

    /// Bound the number of cells enumerated (default [`DEFAULT_AINF_CAP`]).
    pub fn with_cap(mut self, cap: u128) -> Result<Self> {
        self.codec = Codec::new(self.c.objects.len(), self.c.dim(), self.max_length, cap)?;
        self.cap = cap;
        Ok(self)
    }

    pub fn category(&self) -> &AInfCategory {
        self.c
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn generator_weight(&self, g: usize) -> &Weight {
        &self.weights[g]
    }

    fn rank(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn cell_weight(&self, cell: &Cell, out: usize) -> Weight {
        cell.inputs.iter().fold(self.weights[out].clone(), |acc, &g| weights::sub(&acc, &self.weights[g]))
    }

    /// Reduced degree `|f|'` of a basis cochain.
    fn shifted_degree(&self, ins: &[usize], out: usize) -> i64 {
        self.bar.deg[out] - ins.iter().map(|&g| self.bar.deg[g]).sum::<i64>()
    }

    /// Every cell of length `<= max_length`, grouped by weight and degree.
    fn all_cells(&self, only: Option<&Weight>) -> BTreeMap<Weight, BTreeMap<i64, Vec<usize>>> {
        let mut out: BTreeMap<Weight, BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
        let c = self.c;
        let mut visit = |cell: &Cell, outs: &[usize]| {
            for &o in outs {
                let w = self.cell_weight(cell, o);
                if only.is_some_and(|x| *x != w) {
                    continue;
                }
                let r = c.cell_degree(cell, o);
                out.entry(w).or_default().entry(r).or_default().push(self.codec.encode(cell, o));
            }
        };
        for x in 0..c.objects.len() {
            visit(&Cell::empty(x), &c.hom(x, x));
        }
        let homs: HashMap<(usize, usize), Vec<usize>> = {
            let mut h: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
            for (g, gen) in c.gens.iter().enumerate() {
                h.entry((gen.source, gen.target)).or_default().push(g);
            }
            h
        };
        for l in 1..=self.max_length {
            for_each_tuple(c, l, &mut |t: &[usize]| {
                let cell = c.cell(t.to_vec());
                let key = (cell.object, c.gens[*t.last().unwrap()].target);
                if let Some(outs) = homs.get(&key) {
                    visit(&cell, outs);
                }
            });
        }
        for by_deg in out.values_mut() {
            for v in by_deg.values_mut() {
                v.sort_unstable();
            }
        }
        out
    }

    /// `[b, f]` of one basis cochain in `b`-form, dropping terms beyond the length bound.
    fn delta_internal(&self, cell: &Cell, out: usize) -> Vec<(Cell, usize, Scalar)> {
        let gens = &self.c.gens;
        let ins = &cell.inputs;
        let l = ins.len();
        let fdeg = self.shifted_degree(ins, out);
        let mut res = Vec::new();
        // b ∘ f
        for s in 1..=self.bar.top() {
            if l + s - 1 > self.max_length {
                break;
            }
            for i in 0..s {
                let Some(idxs) = self.bar.slot[s].get(&(i, out)) else { continue };
                for &idx in idxs {
                    let (bins, bout) = &self.bar.b[s][idx];
                    let e: i64 = bins[..i].iter().map(|&g| self.bar.deg[g]).sum();
                    let new: Vec<usize> = bins[..i].iter().chain(ins).chain(&bins[i + 1..]).copied().collect();
                    let obj = if new.is_empty() { cell.object } else { gens[new[0]].source };
                    let sign = parity(fdeg * e);
                    let nc = Cell { object: obj, inputs: new };
                    for (o, x) in bout.entries() {
                        res.push((nc.clone(), *o, &sign * x));
                    }
                }
            }
        }
        // -(-1)^{|f|'} f ∘ b
        let mut e = 0i64;
        for p in 0..l {
            for (s, idx, x) in &self.bar.producers[ins[p]] {
                if l + s - 1 > self.max_length {
                    continue;
                }
                let bins = &self.bar.b[*s][*idx].0;
                let new: Vec<usize> = ins[..p].iter().chain(bins).chain(&ins[p + 1..]).copied().collect();
                let obj = if new.is_empty() { cell.object } else { gens[new[0]].source };
                let sign = -(&parity(fdeg) * &parity(e));
                res.push((Cell { object: obj, inputs: new }, out, &sign * x));
            }
            e += self.bar.deg[ins[p]];
        }
        res
    }

    /// Differential of a basis cochain in the presented (unshifted) form.
    fn delta_cell(&self, cell: &Cell, out: usize) -> Vec<(Cell, usize, Scalar)> {
        let gens = &self.c.gens;
        let r = self.c.cell_degree(cell, out);
        let pre = &parity(r + 1) * &sigma(gens, &cell.inputs);
        self.delta_internal(cell, out)
            .into_iter()
            .map(|(nc, o, x)| {
                let s = &pre * &sigma(gens, &nc.inputs);
                (nc, o, &s * &x)
            })
            .collect()
    }

    fn delta_key(&self, key: usize) -> Vec<(usize, Scalar)> {
        let (cell, out) = self.codec.decode(key, &self.c.gens);
        self.delta_cell(&cell, out).into_iter().map(|(nc, o, x)| (self.codec.encode(&nc, o), x)).collect()
    }

    /// The Hochschild differential, truncated at the length bound.
    pub fn delta(&self, f: &AInfCochain) -> AInfCochain {
        let mut terms = Vec::new();
        for (cell, v) in &f.terms {
            if cell.len() > self.max_length {
                continue;
            }
            for (o, c) in v.entries() {
                for (nc, o2, x) in self.delta_cell(cell, *o) {
                    terms.push((nc, SparseVec::from_pairs(vec![(o2, &x * c)])));
                }
            }
        }
        AInfCochain::from_terms(terms)
    }

    fn to_keys(&self, f: &AInfCochain) -> SparseVec {
        let mut pairs = Vec::new();
        for (cell, v) in &f.terms {
            if cell.len() <= self.max_length {
                pairs.extend(v.entries().iter().map(|(o, c)| (self.codec.encode(cell, *o), c.clone())));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    fn from_keys(&self, v: &SparseVec) -> AInfCochain {
        AInfCochain::from_terms(v.entries().iter().map(|(k, c)| {
            let (cell, o) = self.codec.decode(*k, &self.c.gens);
            (cell, SparseVec::from_pairs(vec![(o, c.clone())]))
        }))
    }

    fn block(&self, by_deg: &BTreeMap<i64, Vec<usize>>, check: bool) -> Result<CellComplex> {
        let lo = *by_deg.keys().next().unwrap_or(&0);
        let hi = *by_deg.keys().last().unwrap_or(&0);
        let cells: Vec<Vec<usize>> = (lo..=hi).map(|r| by_deg.get(&r).cloned().unwrap_or_default()).collect();
        CellComplex::build(lo, cells, |_, key| Ok(self.delta_key(key)), check)
    }

    /// The truncated complex on all cells with degree in `lo..=hi`, keys in flattened order.
    pub fn full_complex(&self, lo: i64, hi: i64) -> Result<FiniteComplex> {
        let mut by_deg: BTreeMap<i64, Vec<usize>> = (lo..=hi).map(|r| (r, Vec::new())).collect();
        for blocks in self.all_cells(None).into_values() {
            for (r, keys) in blocks {
                if let Some(v) = by_deg.get_mut(&r) {
                    v.extend(keys);
                }
            }
        }
        for v in by_deg.values_mut() {
            v.sort_unstable();
        }
        Ok(self.block(&by_deg, true)?.complex)
    }

    /// Cohomology of every `(degree, weight)` class that has cells.
    pub fn cohomology(&self) -> Result<Vec<AInfHH>> {
        let mut out = Vec::new();
        for (w, by_deg) in self.all_cells(None) {
            let block = self.block(&by_deg, true)?;
            for &r in by_deg.keys() {
                let h = block.complex.cohomology_unchecked(r);
                let representatives = h.representatives.iter().map(|z| self.from_keys(&block.to_keys(r, z))).collect();
                out.push(AInfHH { degree: r, weight: w.clone(), dim: h.dim, representatives });
            }
        }
        out.sort_by(|a, b| (a.degree, &a.weight).cmp(&(b.degree, &b.weight)));
        Ok(out)
    }

    /// Total dimension per degree.
    pub fn dims(&self) -> Result<BTreeMap<i64, usize>> {
        let mut m = BTreeMap::new();
        for h in self.cohomology()? {
            *m.entry(h.degree).or_insert(0) += h.dim;
        }
        Ok(m)
    }

    fn split(&self, z: &AInfCochain) -> BTreeMap<Weight, AInfCochain> {
        let mut parts: BTreeMap<Weight, Vec<(Cell, SparseVec)>> = BTreeMap::new();
        for (cell, v) in &z.terms {
            for (o, c) in v.entries() {
                parts
                    .entry(self.cell_weight(cell, *o))
                    .or_default()
                    .push((cell.clone(), SparseVec::from_pairs(vec![(*o, c.clone())])));
            }
        }
        parts.into_iter().map(|(w, t)| (w, AInfCochain::from_terms(t))).collect()
    }

    fn degree_of(&self, z: &AInfCochain) -> Result<Option<i64>> {
        let mut degs = BTreeSet::new();
        for (cell, v) in &z.terms {
            for (o, _) in v.entries() {
                degs.insert(self.c.cell_degree(cell, *o));
            }
        }
        match degs.len() {
            0 => Ok(None),
            1 => Ok(degs.into_iter().next()),
            _ => Err(Error::invalid("cochain is not homogeneous in Hochschild degree")),
        }
    }

    /// `Some(h)` with `δh = z` (up to the length bound) if the cocycle `z` is a coboundary.
    pub fn primitive(&self, z: &AInfCochain) -> Result<Option<AInfCochain>> {
        let Some(r) = self.degree_of(z)? else { return Ok(Some(AInfCochain::zero())) };
        if z.max_length() > self.max_length {
            return Err(Error::invalid("cochain is longer than the length bound"));
        }
        if !self.delta(z).is_zero() {
            return Err(Error::NotCocycle { degree: r });
        }
        let mut total = AInfCochain::zero();
        for (w, part) in self.split(z) {
            let by_deg = self.all_cells(Some(&w)).remove(&w).unwrap_or_default();
            let block = self.block(&by_deg, false)?;
            let local = block.to_local(r, &self.to_keys(&part))?;
            match block.complex.differential(r - 1).echelon().express(&local) {
                Some(h) => total = total.add(&self.from_keys(&block.to_keys(r - 1, &h))),
                None => return Ok(None),
            }
        }
        Ok(Some(total))
    }

    pub fn is_coboundary(&self, z: &AInfCochain) -> Result<bool> {
        Ok(self.primitive(z)?.is_some())
    }

    /// Cup product `(-1)^{|α|(|β|-1)} b{α, β}`, truncated at the length bound.
    pub fn cup(&self, alpha: &AInfCochain, beta: &AInfCochain) -> AInfCochain {
        let gens = &self.c.gens;
        let a = alpha.twisted(gens);
        let b = beta.twisted(gens);
        let mut terms = Vec::new();
        for (fc, fv) in &a.terms {
            for (o1, c1) in fv.entries() {
                let fdeg = self.shifted_degree(&fc.inputs, *o1);
                let fr = self.c.cell_degree(fc, *o1);
                for (gc, gv) in &b.terms {
                    for (o2, c2) in gv.entries() {
                        let gdeg = self.shifted_degree(&gc.inputs, *o2);
                        let gr = self.c.cell_degree(gc, *o2);
                        let outer = &(&parity(fr * (gr - 1)) * c1) * c2;
                        for s in 2..=self.bar.top() {
                            if fc.len() + gc.len() + s - 2 > self.max_length {
                                break;
                            }
                            for i in 0..s - 1 {
                                let Some(idxs) = self.bar.slot[s].get(&(i, *o1)) else { continue };
                                for &idx in idxs {
                                    let (bins, bout) = &self.bar.b[s][idx];
                                    let ei: i64 = bins[..i].iter().map(|&g| self.bar.deg[g]).sum();
                                    let mut ej = ei + fc.inputs.iter().map(|&g| self.bar.deg[g]).sum::<i64>();
                                    for j in i + 1..s {
                                        if j > i + 1 {
                                            ej += self.bar.deg[bins[j - 1]];
                                        }
                                        if bins[j] != *o2 {
                                            continue;
                                        }
                                        let new: Vec<usize> = bins[..i]
                                            .iter()
                                            .chain(&fc.inputs)
                                            .chain(&bins[i + 1..j])
                                            .chain(&gc.inputs)
                                            .chain(&bins[j + 1..])
                                            .copied()
                                            .collect();
                                        let obj = gens[bins[0]].source;
                                        let sign = &parity(fdeg * ei + gdeg * ej) * &outer;
                                        let tw = sigma(gens, &new);
                                        terms.push((Cell { object: obj, inputs: new }, bout.scale(&(&sign * &tw))));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        AInfCochain::from_terms(terms)
    }

    // ---- Hochschild homology ------------------------------------------

    fn chain_key(&self, t: &[usize]) -> usize {
        let d = self.c.dim();
        let base: usize = (1..t.len()).map(|l| d.pow(l as u32)).sum();
        base + t.iter().fold(0, |acc, &g| acc * d + g)
    }

    fn chain_decode(&self, key: usize) -> Vec<usize> {
        let d = self.c.dim();
        let mut l = 1;
        let mut base = 0;
        while key >= base + d.pow(l as u32) {
            base += d.pow(l as u32);
            l += 1;
        }
        let mut t = key - base;
        let mut out = vec![0; l];
        for k in (0..l).rev() {
            out[k] = t % d;
            t /= d;
        }
        out
    }

    /// Cohomological degree `Σ|a_k| - ℓ` of the chain `a_0[a_1|..|a_ℓ]`.
    fn chain_degree(&self, t: &[usize]) -> i64 {
        t.iter().map(|&g| self.c.gens[g].degree).sum::<i64>() - (t.len() as i64 - 1)
    }

    fn chain_weight(&self, t: &[usize]) -> Weight {
        t.iter().fold(weights::zero(self.rank()), |acc, &g| weights::add(&acc, &self.weights[g]))
    }

    /// Cyclic bar differential of a chain of generators, in `b`-form.
    fn chain_boundary(&self, t: &[usize]) -> Vec<(Vec<usize>, Scalar)> {
        let l = t.len() - 1;
        let deg = |xs: &[usize]| xs.iter().map(|&g| self.bar.deg[g]).sum::<i64>();
        let mut out = Vec::new();
        for s in 1..=self.bar.top().min(l + 1) {
            // windows not containing a_0
            for k in 1..=l + 1 - s {
                if let Some(&idx) = self.bar.lookup[s].get(&t[k..k + s]) {
                    let sign = parity(deg(&t[..k]));
                    for (o, x) in self.bar.b[s][idx].1.entries() {
                        let new: Vec<usize> = t[..k].iter().chain([o]).chain(&t[k + s..]).copied().collect();
                        out.push((new, &sign * x));
                    }
                }
            }
            // windows through a_0: i elements from the end, j after a_0
            for i in 0..s {
                let j = s - 1 - i;
                if i + j > l {
                    continue;
                }
                let window: Vec<usize> = t[l + 1 - i..].iter().chain(&t[..=j]).copied().collect();
                if let Some(&idx) = self.bar.lookup[s].get(&window) {
                    let sign = parity(deg(&t[l + 1 - i..]) * deg(&t[..l + 1 - i]));
                    for (o, x) in self.bar.b[s][idx].1.entries() {
                        let new: Vec<usize> = [*o].iter().chain(&t[j + 1..l + 1 - i]).copied().collect();
                        out.push((new, &sign * x));
                    }
                }
            }
        }
        out
    }

    /// Hochschild homology by `(degree, weight)`, on chains with at most
    /// `max_length` bar entries. Chains with fewer entries form a subcomplex.
    pub fn homology(&self) -> Result<Vec<AInfHH>> {
        let c = self.c;
        let mut cells: BTreeMap<Weight, BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
        let mut total: u128 = 0;
        for l in 0..=self.max_length {
            total += (c.dim() as u128).pow(l as u32 + 1);
            if total > self.cap {
                return Err(Error::CapExceeded { what: format!("A∞ chains of length {l}"), size: total, cap: self.cap });
            }
            for_each_tuple(c, l + 1, &mut |t: &[usize]| {
                if c.gens[t[l]].target == c.gens[t[0]].source {
                    cells
                        .entry(self.chain_weight(t))
                        .or_default()
                        .entry(self.chain_degree(t))
                        .or_default()
                        .push(self.chain_key(t));
                }
            });
        }
        let mut out = Vec::new();
        for (w, mut by_deg) in cells {
            for v in by_deg.values_mut() {
                v.sort_unstable();
            }
            let block = self.chain_block(&by_deg)?;
            for &r in by_deg.keys() {
                let h = block.complex.cohomology_unchecked(r);
                out.push(AInfHH { degree: r, weight: w.clone(), dim: h.dim, representatives: Vec::new() });
            }
        }
        out.sort_by(|a, b| (a.degree, &a.weight).cmp(&(b.degree, &b.weight)));
        Ok(out)
    }

    fn chain_block(&self, by_deg: &BTreeMap<i64, Vec<usize>>) -> Result<CellComplex> {
        let lo = *by_deg.keys().next().unwrap_or(&0);
        let hi = *by_deg.keys().last().unwrap_or(&0);
        let cells: Vec<Vec<usize>> = (lo..=hi).map(|r| by_deg.get(&r).cloned().unwrap_or_default()).collect();
        CellComplex::build(
            lo,
            cells,
            |_, key| {
                let t = self.chain_decode(key);
                Ok(self.chain_boundary(&t).into_iter().map(|(n, x)| (self.chain_key(&n), x)).collect())
            },
            true,
        )
    }
}

/// Hochschild complex of `c` through `max_degree`: cochains of length up to
/// `max_degree + 1`, using structure maps up to `arity`.
pub fn hh_complex_ainf(c: &AInfCategory, max_degree: usize, arity: usize) -> Result<AInfHochschild<'_>> {
    AInfHochschild::new(c, max_degree + 1, arity)
}

pub fn cup_ainf(h: &AInfHochschild<'_>, alpha: &AInfCochain, beta: &AInfCochain) -> Result<AInfCochain> {
    for z in [alpha, beta] {
        if !h.delta(z).is_zero() {
            return Err(Error::NotCocycle { degree: h.degree_of(z)?.unwrap_or(0) });
        }
    }
    Ok(h.cup(alpha, beta))
}

// ---------------------------------------------------------------------------
// n-potency

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NPotency {
    pub n: usize,
    /// `powers[k-1]` says whether `KS^{∪k}` is a nonzero class; stops at the first zero.
    pub powers: Vec<bool>,
}

impl NPotency {
    /// Largest `k <= n` with `KS^{∪k} != 0`.
    pub fn largest(&self) -> usize {
        self.powers.iter().take_while(|&&b| b).count()
    }

    pub fn is_potent(&self) -> bool {
        self.largest() >= self.n
    }

    /// First `k` whose power vanishes, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.powers.iter().position(|b| !b).map(|k| k + 1)
    }
}

/// Cup powers of `ks_cat(c, ξ)` up to `n`, tested against coboundaries on
/// cochains of length up to `2n`. Only the weight block of `KS` is ever built.
pub fn npotency(c: &AInfCategory, n: usize, xi: &Derivation) -> Result<NPotency> {
    npotency_capped(c, n, xi, DEFAULT_AINF_CAP)
}

pub fn npotency_capped(c: &AInfCategory, n: usize, xi: &Derivation, cap: u128) -> Result<NPotency> {
    let h = AInfHochschild::new(c, (2 * n).max(1), c.arity())?.with_cap(cap)?;
    let ks = ks_cat(c, xi);
    let mut powers = Vec::new();
    let mut p = ks.clone();
    for k in 1..=n {
        if k > 1 {
            p = h.cup(&p, &ks);
        }
        let nonzero = !p.is_zero() && !h.is_coboundary(&p)?;
        powers.push(nonzero);
        if !nonzero {
            break;
        }
    }
    Ok(NPotency { n, powers })
}

// ---------------------------------------------------------------------------
// weak Calabi–Yau duality

/// A functional on the degree-`n` endomorphisms of each object.
#[derive(Clone, Debug, PartialEq)]
pub struct CyTrace {
    pub values: Vec<(usize, Scalar)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CyPairing {
    Nondegenerate,
    /// `Hom(x, y)^d ⊗ Hom(y, x)^{n-d} -> K` is not perfect.
    Degenerate { x: usize, y: usize, degree: i64 },
}

/// One compared pair of classes `HH^r_w` and `HH_{n-r, w_tr - w}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityRow {
    pub degree: i64,
    pub weight: Weight,
    pub cohomology: usize,
    pub homology: usize,
}

#[derive(Clone, Debug)]
pub struct CyReport {
    pub pairing: CyPairing,
    /// Classes stable between the two windows on both sides.
    pub rows: Vec<DualityRow>,
    pub window: usize,
}

impl CyReport {
    pub fn dims_agree(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.cohomology == r.homology)
    }

    /// Per-degree totals over the compared classes: `(r, dim HH^r, dim HH_{n-r})`.
    pub fn totals(&self) -> Vec<(i64, usize, usize)> {
        let mut m: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
        for r in &self.rows {
            let e = m.entry(r.degree).or_default();
            e.0 += r.cohomology;
            e.1 += r.homology;
        }
        m.into_iter().map(|(r, (a, b))| (r, a, b)).collect()
    }
}

/// Cohomology of `(Hom(x, y), μ^1)` in each degree, as representative vectors.
fn hom_cohomology(c: &AInfCategory, x: usize, y: usize) -> BTreeMap<i64, Vec<SparseVec>> {
    let gens = c.hom(x, y);
    let d1 = |g: usize| c.mu(1).get(&vec![g]).cloned().unwrap_or_default();
    let mut image = Echelon::new();
    for &g in &gens {
        let v = d1(g);
        if !v.is_zero() {
            image.insert(v, SparseVec::new());
        }
    }
    // kernel of μ^1 on this hom space
    let cols: Vec<SparseVec> = gens.iter().map(|&g| d1(g)).collect();
    let m = ExactMatrix::from_columns(c.dim(), cols).expect("shape");
    let mut out: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    for k in crate::linalg::kernel_basis(&m) {
        let v = SparseVec::from_pairs(k.entries().iter().map(|(i, s)| (gens[*i], s.clone())).collect());
        if image.insert(v.clone(), SparseVec::new()) {
            let deg = c.gens[v.leading().unwrap().0].degree;
            out.entry(deg).or_default().push(v);
        }
    }
    out
}

fn apply_mu2(c: &AInfCategory, a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for (i, x) in a.entries() {
        for (j, y) in b.entries() {
            if let Some(v) = c.mu(2).get(&vec![*i, *j]) {
                acc = acc.axpy(&(x * y), v);
            }
        }
    }
    acc
}

/// Check (i) that `tr(μ^2(a, b))` is a perfect pairing between cohomology-level
/// `Hom(x, y)` and `Hom(y, x)`, and (ii) that `dim HH^r` equals `dim HH_{n-r}`
/// class by class. (ii) computes both sides on lengths `window` and
/// `window + 1` and compares only classes that agree between the two.
pub fn cy_duality_check(c: &AInfCategory, tr: &CyTrace, n: i64, window: usize) -> Result<CyReport> {
    for (g, x) in &tr.values {
        let gen = c.gens.get(*g).ok_or_else(|| Error::invalid(format!("trace on unknown morphism {g}")))?;
        if !x.is_zero() && (gen.degree != n || gen.source != gen.target) {
            return Err(Error::invalid(format!("trace is nonzero on {}, outside degree-{n} endomorphisms", gen.label)));
        }
    }
    let trv = SparseVec::from_pairs(tr.values.clone());
    let mut pairing = CyPairing::Nondegenerate;
    'outer: for x in 0..c.objects.len() {
        for y in 0..c.objects.len() {
            let hxy = hom_cohomology(c, x, y);
            let hyx = hom_cohomology(c, y, x);
            let degs: BTreeSet<i64> = hxy.keys().copied().chain(hyx.keys().map(|d| n - d)).collect();
            for d in degs {
                let left = hxy.get(&d).cloned().unwrap_or_default();
                let right = hyx.get(&(n - d)).cloned().unwrap_or_default();
                let rows: Vec<Vec<Scalar>> =
                    left.iter().map(|a| right.iter().map(|b| trv.dot(&apply_mu2(c, a, b))).collect()).collect();
                let rank = if left.is_empty() || right.is_empty() {
                    0
                } else {
                    ExactMatrix::from_rows(&rows)?.rank()
                };
                if left.len() != right.len() || rank != left.len() {
                    pairing = CyPairing::Degenerate { x, y, degree: d };
                    break 'outer;
                }
            }
        }
    }
    let tie: Vec<usize> = tr.values.iter().filter(|(_, x)| !x.is_zero()).map(|(g, _)| *g).collect();
    let classes = |l: usize| -> Result<(BTreeMap<(i64, Weight), usize>, BTreeMap<(i64, Weight), usize>, Weight)> {
        let h = AInfHochschild::with_ties(c, l, c.arity(), &tie)?;
        let co = h.cohomology()?.into_iter().map(|x| ((x.degree, x.weight), x.dim)).collect();
        let ho = h.homology()?.into_iter().map(|x| ((x.degree, x.weight), x.dim)).collect();
        let wt = tie.first().map_or(weights::zero(h.rank()), |&g| h.weights[g].clone());
        Ok((co, ho, wt))
    };
    let (co0, ho0, wt) = classes(window)?;
    let (co1, ho1, _) = classes(window + 1)?;
    let mut rows = Vec::new();
    for ((r, w), dim) in &co0 {
        if co1.get(&(*r, w.clone())) != Some(dim) {
            continue;
        }
        let dual = (n - r, weights::sub(&wt, w));
        let (Some(h0), Some(h1)) = (ho0.get(&dual), ho1.get(&dual)) else { continue };
        if h0 != h1 {
            continue;
        }
        rows.push(DualityRow { degree: *r, weight: w.clone(), cohomology: *dim, homology: *h0 });
    }
    Ok(CyReport { pairing, rows, window })
}

// ---------------------------------------------------------------------------
// stock categories

/// One object with `1` (degree 0), `x` (degree 1), `z` (degree 2), strict unit,
/// and `μ^k(x, .., x) = c_k z` for `k = 2..`; `coeffs[k-2] = c_k`.
pub fn massey_category(coeffs: &[Scalar]) -> AInfCategory {
    let gens = vec![
        Generator { label: "1".into(), source: 0, target: 0, degree: 0 },
        Generator { label: "x".into(), source: 0, target: 0, degree: 1 },
        Generator { label: "z".into(), source: 0, target: 0, degree: 2 },
    ];
    let mut entries = Vec::new();
    for g in 0..3 {
        entries.push((vec![0, g], SparseVec::unit(g)));
        if g != 0 {
            entries.push((vec![g, 0], SparseVec::unit(g)));
        }
    }
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            entries.push((vec![1; k + 2], SparseVec::from_pairs(vec![(2, c.clone())])));
        }
    }
    AInfCategory::new(vec!["X".into()], gens, coeffs.len() + 1, entries).expect("massey category")
}

/// Exterior algebra on one generator of degree 1, as a one-object category.
pub fn exterior_category() -> AInfCategory {
    let a = FiniteAlgebra::truncated_polynomial(2).with_degrees(Some(vec![0, 1])).expect("degrees");
    AInfCategory::from_algebra(&a)
}

/// `k` copies of one object, all homs equal to the exterior algebra on one degree-1 generator.
pub fn exterior_copies(k: usize) -> AInfCategory {
    let mut gens = Vec::new();
    let id = |x: usize, y: usize, t: usize| (x * k + y) * 2 + t;
    for x in 0..k {
        for y in 0..k {
            gens.push(Generator { label: format!("u{x}{y}"), source: x, target: y, degree: 0 });
            gens.push(Generator { label: format!("t{x}{y}"), source: x, target: y, degree: 1 });
        }
    }
    let mut entries = Vec::new();
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                entries.push((vec![id(x, y, 0), id(y, z, 0)], SparseVec::unit(id(x, z, 0))));
                entries.push((vec![id(x, y, 0), id(y, z, 1)], SparseVec::unit(id(x, z, 1))));
                entries.push((vec![id(x, y, 1), id(y, z, 0)], SparseVec::unit(id(x, z, 1))));
            }
        }
    }
    AInfCategory::new((0..k).map(|x| format!("L{x}")).collect(), gens, 2, entries).expect("exterior copies")
}
