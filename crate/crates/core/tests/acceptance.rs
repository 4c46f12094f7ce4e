//! The ten acceptance criteria, each with a pinned runtime limit.
//!
//! Every criterion prints one `PASS`/`FAIL` line to stderr (uncaptured), and the
//! test fails if any criterion fails or exceeds its limit.

mod common;

use std::io::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use hochkit::ainf::{self, AInfCategory, AInfHochschild, CyPairing};
use hochkit::algebra::{Bimodule, FiniteAlgebra, Hochschild, HochschildCochain};
use hochkit::cech::{self, Elem};
use hochkit::deform::{self, Splitting};
use hochkit::diagram::{self, AlgebraDiagram, Poset};
use hochkit::io;
use hochkit::linalg::SparseVec;
use hochkit::scalar::{Derivation, Scalar};
use rand::Rng;

type Outcome = Result<String, String>;

fn fixture(rel: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)).unwrap()
}

fn fixtures_in(dir: &str) -> Vec<(String, String)> {
    let mut v: Vec<_> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    v.sort();
    v
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn hh_dims(a: &FiniteAlgebra, max: usize) -> Vec<usize> {
    let m = Bimodule::diagonal(a);
    Hochschild::new(a, &m).cohomology(max).unwrap().iter().map(|h| h.dim).collect()
}

fn criterion_1() -> Outcome {
    let a = io::parse_algebra(&fixture("algebra/dualnumbers.json")).map_err(|e| e.to_string())?;
    let dims = hh_dims(&a, 4);
    let oracle = bar_hh_dims(&a, 4);
    ensure!(dims == [2, 1, 1, 1, 1], "hh dims {dims:?}");
    ensure!(dims == oracle, "hh dims {dims:?} but the bar-complex oracle gives {oracle:?}");
    Ok(format!("HH dims {dims:?} match the bar-complex oracle"))
}

/// `β(e_i, e_j)` in component `k`, straight from `s(a)s(b) - s(ab)` with `s = id + Σ ε_k g_k`.
fn beta_by_hand(a: &FiniteAlgebra, m: &HochschildCochain, g: &HochschildCochain) -> HochschildCochain {
    let n = a.dim();
    let apply = |f: &HochschildCochain, v: &SparseVec| {
        v.entries().iter().fold(SparseVec::new(), |acc, (i, c)| acc.axpy(c, &f.eval_basis(&[*i])))
    };
    HochschildCochain::from_fn(2, n, n, |t| {
        let (i, j) = (t[0], t[1]);
        let lhs = m.eval_basis(&[i, j]).add(&a.mul_vec(&SparseVec::unit(i), &g.eval_basis(&[j]))).add(&a.mul_vec(&g.eval_basis(&[i]), &SparseVec::unit(j)));
        lhs.sub(&apply(g, a.product(i, j)))
    })
}

fn criterion_2() -> Outcome {
    let mut g = rng(2);
    for trial in 0..50 {
        let def = deformation(&mut g);
        def.validate().map_err(|e| format!("trial {trial}: generated deformation invalid: {e}"))?;
        let a = def.algebra();
        let (n, v) = (a.dim(), def.v_dim());
        let rational = a.is_q_independent();
        let mut betas = Vec::new();
        for _ in 0..2 {
            let lifts: Vec<HochschildCochain> = (0..v).map(|_| cochain(&mut g, 1, n, n, rational)).collect();
            let s = Splitting::new(&def, lifts.clone()).unwrap();
            let beta = deform::beta_cocycle(&def, &s).map_err(|e| e.to_string())?;
            for (k, l) in lifts.iter().enumerate() {
                let expect = beta_by_hand(a, &def.corrections()[k], l);
                ensure!(beta.component(k, n) == expect, "trial {trial}: β component {k} disagrees with s(a)s(b) - s(ab)");
            }
            let m = Bimodule::dual_tensor(v, a);
            let d = Hochschild::new(a, &m).delta(&beta).unwrap();
            ensure!(d.is_zero(), "trial {trial}: δβ != 0");
            betas.push(beta);
        }
        let same = deform::classes_equal(a, &betas[0], &betas[1]).map_err(|e| e.to_string())?;
        let Some(h) = same else { return Err(format!("trial {trial}: classes from two splittings differ")) };
        let m = Bimodule::dual_tensor(v, a);
        ensure!(Hochschild::new(a, &m).delta(&h).unwrap() == betas[0].sub(&betas[1]).unwrap(), "trial {trial}: returned primitive is wrong");
    }
    Ok("50 random deformations: δβ = 0 and classes independent of the splitting".into())
}

fn criterion_3() -> Outcome {
    let xi = Derivation::d_dq();
    for name in ["dualnumbers", "triangular", "truncated3"] {
        let a = io::parse_algebra(&fixture(&format!("algebra/{name}.json"))).unwrap();
        ensure!(deform::derivation_deformation(&a, &xi).is_zero(), "{name}: derivative of q-free constants is not the zero cochain");
    }
    let quad = io::parse_algebra(&fixture("algebra/quadratic.json")).unwrap();
    let z = deform::derivation_deformation(&quad, &xi);
    let m = Bimodule::diagonal(&quad);
    let hh = Hochschild::new(&quad, &m);
    let h = hh.primitive(&z).unwrap().ok_or("x^2 = q: derivation class should cobound")?;
    let expected = HochschildCochain::from_entries(1, 2, 2, vec![(vec![1], 1, Scalar::parse("1/(2*q)").unwrap())]).unwrap();
    ensure!(hh.delta(&h).unwrap() == z, "primitive does not cobound");
    ensure!(h == expected, "primitive {:?} is not h(x) = x/(2q)", h.entries().collect::<Vec<_>>());
    let qext = io::parse_algebra(&fixture("algebra/qext.json")).unwrap();
    let zq = deform::derivation_deformation(&qext, &xi);
    let mq = Bimodule::diagonal(&qext);
    ensure!(!zq.is_zero() && Hochschild::new(&qext, &mq).primitive(&zq).unwrap().is_none(), "quantum exterior class should be nonzero");
    Ok("q-free: zero cochain; x^2 = q: h(x) = x/(2q); quantum exterior: nonzero".into())
}

fn diagram_fixtures() -> Vec<(String, AlgebraDiagram)> {
    fixtures_in("diagram").into_iter().map(|(n, t)| (n, io::parse_diagram(&t).unwrap())).collect()
}

fn criterion_4() -> Outcome {
    let mut algebras: Vec<FiniteAlgebra> = fixtures_in("algebra").iter().map(|(_, t)| io::parse_algebra(t).unwrap()).collect();
    let mut g = rng(4);
    algebras.extend((0..4).map(|_| algebra(&mut g, true)));
    for a in &algebras {
        let hh = hh_dims(a, 3);
        let point = AlgebraDiagram::constant(Poset::chain(1), a.clone());
        let gs = diagram::gs_complex(&point, 3, hochkit::algebra::DEFAULT_CAP).unwrap().dims()[..=3].to_vec();
        ensure!(gs == hh, "one-point GS dims {gs:?} differ from HH dims {hh:?}");
        let edge = AlgebraDiagram::constant(Poset::chain(2), a.clone());
        let gs2 = diagram::gs_complex(&edge, 2, hochkit::algebra::DEFAULT_CAP).unwrap().dims()[..=2].to_vec();
        ensure!(gs2 == hh[..=2], "constant i<j GS dims {gs2:?} differ from HH dims {:?}", &hh[..=2]);
    }
    let mut checks = 0;
    for (name, d) in diagram_fixtures() {
        for xi in [Derivation::d_dq(), Derivation::q_d_dq()] {
            for c in diagram::gs_component_identities(&d, &xi).unwrap() {
                ensure!(c.holds, "{name}: identity `{}` fails", c.name);
                checks += 1;
            }
        }
    }
    Ok(format!("{} algebras agree with one-point and i<j diagrams; {checks} component identities hold", algebras.len()))
}

fn criterion_5() -> Outcome {
    let d = io::parse_diagram(&fixture("diagram/constant-k.json")).unwrap();
    let bang = diagram::diagram_algebra(&d).unwrap();
    ensure!(bang.dim() == 3 && bang.validate().is_ok(), "a! has dimension {}", bang.dim());
    // idempotents e, f with ef = fe = 0, and a square-zero t with exactly one of et, te equal to t
    let idx = |l: &str| bang.labels().iter().position(|x| x == l).unwrap();
    let (e, t, f) = (idx("1[i<=i]"), idx("1[i<=j]"), idx("1[j<=j]"));
    let p = |x: usize, y: usize| bang.product(x, y).clone();
    let u = SparseVec::unit;
    ensure!(p(e, e) == u(e) && p(f, f) == u(f) && p(e, f).is_zero() && p(f, e).is_zero() && p(t, t).is_zero(), "a! is not triangular");
    let sides = [p(e, t) == u(t), p(t, e) == u(t), p(f, t) == u(t), p(t, f) == u(t)];
    ensure!(sides.iter().filter(|&&b| b).count() == 2 && (sides[0] != sides[1]) && (sides[2] != sides[3]), "a! is not the triangular matrix algebra");
    let dims = hh_dims(&bang, 2);
    let oracle = bar_hh_dims(&bang, 2);
    let gs = diagram::gs_complex(&d, 2, hochkit::algebra::DEFAULT_CAP).unwrap().dims()[..=2].to_vec();
    ensure!(dims == [1, 0, 0] && dims == oracle && gs == dims, "HH(a!) {dims:?}, oracle {oracle:?}, GS {gs:?}");
    let mut n = 0;
    for (name, d) in diagram_fixtures() {
        let r = diagram::scct_check(&d, 2, hochkit::algebra::DEFAULT_CAP).unwrap();
        ensure!(r.verdicts_agree(), "{name}: GS verdict {} but a! verdict {}", r.gs_class_zero, r.bang_class_zero);
        ensure!(r.dims_agree(), "{name}: GS dims {:?} vs a! dims {:?}", r.gs_dims, r.bang_dims);
        n += 1;
    }
    Ok(format!("a! is triangular with HH (1,0,0) = GS; verdicts agree on {n} diagram fixtures"))
}

fn ainf_fixture(name: &str) -> io::AInfInput {
    io::parse_ainf(&fixture(&format!("ainf/{name}.json"))).unwrap()
}

fn criterion_6() -> Outcome {
    let xi = Derivation::d_dq();
    let qext = ainf_fixture("qext").category;
    ensure!(ainf::npotency(&qext, 1, &xi).unwrap().is_potent(), "quantum exterior is not 1-potent");
    let sq = ainf_fixture("qext-tensor").category;
    ensure!(sq.dim() == 16, "tensor square has {} morphisms", sq.dim());
    let r = ainf::npotency(&sq, 2, &xi).unwrap();
    ensure!(r.powers == [true, true], "tensor square powers {:?}", r.powers);
    let flat = [ainf_fixture("flat-exterior").category, ainf_fixture("exterior").category, AInfCategory::from_algebra(&FiniteAlgebra::dual_numbers()), ainf::massey_category(&[Scalar::one(), Scalar::int(2)])];
    for c in &flat {
        ensure!(c.is_q_independent() && ainf::npotency(c, 1, &xi).unwrap().largest() == 0, "a q-independent category is not 0-potent");
    }
    Ok("quantum exterior 1-potent; tensor square 2-potent; q-independent categories 0-potent".into())
}

fn criterion_7() -> Outcome {
    let mut g = rng(7);
    let (d, qd) = (Derivation::d_dq(), Derivation::q_d_dq());
    let (mut nonzero, mut two_objects, mut higher) = (0, 0, 0);
    for trial in 0..25 {
        let c = ainf_category(&mut g);
        ensure!(c.objects().len() <= 2 && c.arity() <= 4, "trial {trial}: generator out of range");
        for x in 0..c.objects().len() {
            for y in 0..c.objects().len() {
                ensure!(c.hom(x, y).len() <= 3, "trial {trial}: too many morphisms");
            }
        }
        c.validate(4).map_err(|v| format!("trial {trial}: generated category invalid: {v}"))?;
        let ks = ainf::ks_cat(&c, &d);
        nonzero += usize::from(!ks.is_zero());
        two_objects += usize::from(c.objects().len() == 2);
        higher += usize::from(c.top_arity() > 2);
        let h = AInfHochschild::new(&c, 2 * c.arity().max(2) - 1, c.arity()).unwrap();
        ensure!(h.delta(&ks).is_zero(), "trial {trial}: δ(ξ(μ)) != 0");
        for x in 0..c.objects().len() {
            let (sub, _) = ainf::restrict(&c, &[x]).unwrap();
            ensure!(ainf::ks_cat(&sub, &d) == ainf::restrict_cochain(&c, &[x], &ks).unwrap(), "trial {trial}: restriction to object {x} does not commute");
        }
        let c1 = Scalar::int(g.gen_range(-3..=3));
        let sum = Derivation { scale: &c1 + &Scalar::q() };
        let lhs = ainf::ks_cat(&c, &sum);
        ensure!(lhs == ks.scale(&c1).add(&ainf::ks_cat(&c, &qd)), "trial {trial}: not linear in ξ");
    }
    ensure!(nonzero >= 10 && two_objects >= 5 && higher >= 5, "sample too degenerate: {nonzero} nonzero KS, {two_objects} two-object, {higher} with higher products");
    Ok(format!("25 random categories ({nonzero} with KS != 0, {two_objects} two-object, {higher} with μ^3 or μ^4): δ(ξ(μ)) = 0, restriction commutes, linear in ξ"))
}

fn criterion_8() -> Outcome {
    for name in ["exterior", "exterior-pair"] {
        let inp = ainf_fixture(name);
        let r = ainf::cy_duality_check(&inp.category, inp.trace.as_ref().unwrap(), inp.cy_dimension.unwrap(), 3).unwrap();
        ensure!(r.pairing == CyPairing::Nondegenerate, "{name}: pairing degenerate");
        ensure!(r.dims_agree(), "{name}: duality rows {:?}", r.rows);
    }
    let z = ainf_fixture("zero-trace");
    let r = ainf::cy_duality_check(&z.category, z.trace.as_ref().unwrap(), 1, 3).unwrap();
    ensure!(matches!(r.pairing, CyPairing::Degenerate { .. }), "zero trace reported nondegenerate");
    Ok("exterior fixtures nondegenerate with HH^r = HH_(n-r) in window 3; zero trace degenerate".into())
}

fn criterion_9() -> Outcome {
    let (d, lift) = cech::parse_cech(&fixture("cech/legendre.json")).unwrap();
    let lift = lift.unwrap();
    let w = 7;
    let h0 = cech::cech_cohomology(&d, 1, 0, w).map_err(|e| e.to_string())?;
    let h1 = cech::cech_cohomology(&d, 1, 1, w).map_err(|e| e.to_string())?;
    ensure!(h0.dim == 1 && h1.dim == 1, "H^0(T) = {}, H^1(T) = {}", h0.dim, h1.dim);
    let ks = cech::ks_class(&d, &lift, w).unwrap();
    ensure!(!ks.is_zero(), "KS(d/dq) vanishes");
    ensure!(cech::max_unipotent(&d, &lift, 1, w).unwrap().verdict, "max-unipotent n=1 should be yes");
    ensure!(!cech::max_unipotent(&d, &lift, 2, w).unwrap().verdict, "max-unipotent n=2 should be no");
    let fields: Vec<Vec<Elem>> = d.pieces.iter().map(|p| vec![p.ring.parse(&format!("q*{}^3 - 2", p.ring.var)).unwrap()]).collect();
    let other = lift.perturbed(&d, &fields);
    let a = cech::ks_cocycle(&d, &lift, w).unwrap();
    let b = cech::ks_cocycle(&d, &other, w).unwrap();
    ensure!(a != b, "perturbation did not change the cocycle");
    let diff = b.sub(&a);
    ensure!(cech::cech_primitive(&d, &diff, diff.size(&d).max(w)).unwrap().is_some(), "perturbed lift changed the class");
    ensure!(!cech::ks_class(&d, &other, w).unwrap().is_zero(), "perturbed KS vanishes");
    Ok(format!("window {w}: H^0(T) = 1, H^1(T) = 1, KS != 0, n=1 yes, n=2 no, lift-independent"))
}

fn criterion_10() -> Outcome {
    for name in ["scaling_edge", "legendre"] {
        let (d, lift) = cech::parse_cech(&fixture(&format!("cech/{name}.json"))).unwrap();
        let r = cech::hkr_component_check(&d, &lift.unwrap(), 4).unwrap();
        ensure!(r.passed(), "{name}: hkr check fails: {r:?}");
        ensure!(r.charts.iter().all(|c| c.antisymmetrization_vanishes && c.pairs > 0), "{name}: antisymmetrization");
        ensure!(r.edges.iter().all(|e| e.matches && e.monomials > 0), "{name}: edge components");
    }
    Ok("hkr-check passes on the toy edge and the Legendre fixture".into())
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome, u64); 10] = [
        (1, criterion_1, 5),
        (2, criterion_2, 60),
        (3, criterion_3, 10),
        (4, criterion_4, 30),
        (5, criterion_5, 60),
        (6, criterion_6, 300),
        (7, criterion_7, 300),
        (8, criterion_8, 300),
        (9, criterion_9, 300),
        (10, criterion_10, 300),
    ];
    let mut failed = Vec::new();
    for (k, f, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let line = match outcome {
            Ok(msg) if took <= Duration::from_secs(limit) => format!("criterion {k:>2}: PASS ({:.2}s, limit {limit}s) {msg}", took.as_secs_f64()),
            Ok(msg) => format!("criterion {k:>2}: FAIL ({:.2}s exceeds {limit}s) {msg}", took.as_secs_f64()),
            Err(msg) => format!("criterion {k:>2}: FAIL ({:.2}s) {msg}", took.as_secs_f64()),
        };
        if line.contains("FAIL") {
            failed.push(k);
        }
        let _ = writeln!(std::io::stderr(), "{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
