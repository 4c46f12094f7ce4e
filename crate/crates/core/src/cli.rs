//! Command-line front end: argument model and dispatch to the computations.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::ainf::{self, CyPairing};
use crate::algebra::{self, Bimodule, FiniteAlgebra, Hochschild};
use crate::cech;
use crate::deform;
use crate::diagram::{self, AlgebraDiagram};
use crate::error::{Error, Result};
use crate::io;
use crate::report::{self, InputDigest, Item, Report, Status};
use crate::scalar::Derivation;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "hochkit", version, about = "Exact Hochschild and Kodaira-Spencer computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub report: Format,
    /// Bound on the number of cells enumerated in one degree.
    #[arg(long, global = true)]
    pub cap: Option<u128>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Hochschild cohomology of an algebra with coefficients in itself.
    Hh(DegreeArgs),
    /// Hochschild homology of an algebra.
    HhHomology(DegreeArgs),
    /// Cup products of Hochschild cohomology representatives.
    Cup(DegreeArgs),
    /// Class of a first-order deformation, per parameter direction.
    DefClass(FileArg),
    /// Class of the deformation obtained by differentiating structure constants.
    DerivationClass(XiArgs),
    /// Gerstenhaber-Schack cohomology of a diagram.
    GsHh(DegreeArgs),
    /// Class of a diagram's derivation cocycle, with its component identities.
    GsClass(XiArgs),
    /// The diagram algebra of a diagram and its Hochschild cohomology.
    DiagramAlgebra(DegreeArgs),
    /// Compare GS cohomology of a diagram with HH of its diagram algebra.
    ScctCheck(DegreeArgs),
    /// Verify the A-infinity relations.
    CheckAinf(ArityArgs),
    /// Kodaira-Spencer cocycle of an A-infinity category.
    KsCat(KsArgs),
    /// Cup powers of the Kodaira-Spencer class.
    Npotent(NArgs),
    /// Weak Calabi-Yau pairing and duality check.
    CyPairing(CyArgs),
    /// Cech cohomology of polyvector fields.
    CechHh(WindowArgs),
    /// Kodaira-Spencer class of a Cech datum with lifts.
    CechKs(WindowArgs),
    /// Is the n-th cup power of the Kodaira-Spencer class nonzero?
    MaxUnipotent(WindowNArgs),
    /// Componentwise comparison of the diagram cocycle with the lift data.
    HkrCheck(WindowArgs),
}

#[derive(clap::Args, Debug, Clone)]
pub struct FileArg {
    pub input: PathBuf,
}

#[derive(clap::Args, Debug, Clone)]
pub struct DegreeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub max_degree: Option<usize>,
}

#[derive(clap::Args, Debug, Clone)]
pub struct XiArgs {
    pub input: PathBuf,
    /// Derivation of Q(q): d/dq or q*d/dq.
    #[arg(long, default_value = "d/dq")]
    pub xi: String,
}

#[derive(clap::Args, Debug, Clone)]
pub struct ArityArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(clap::Args, Debug, Clone)]
pub struct KsArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub arity: Option<usize>,
    #[arg(long, default_value = "d/dq")]
    pub xi: String,
}

#[derive(clap::Args, Debug, Clone)]
pub struct NArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value = "d/dq")]
    pub xi: String,
}

#[derive(clap::Args, Debug, Clone)]
pub struct CyArgs {
    pub input: PathBuf,
    /// Calabi-Yau dimension; defaults to the input's `cy_dimension`.
    #[arg(long)]
    pub n: Option<i64>,
    /// Bar length of the Hochschild window.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
}

#[derive(clap::Args, Debug, Clone)]
pub struct WindowArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub window: usize,
}

#[derive(clap::Args, Debug, Clone)]
pub struct WindowNArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub window: usize,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hh(_) => "hh",
            Command::HhHomology(_) => "hh-homology",
            Command::Cup(_) => "cup",
            Command::DefClass(_) => "def-class",
            Command::DerivationClass(_) => "derivation-class",
            Command::GsHh(_) => "gs-hh",
            Command::GsClass(_) => "gs-class",
            Command::DiagramAlgebra(_) => "diagram-algebra",
            Command::ScctCheck(_) => "scct-check",
            Command::CheckAinf(_) => "check-ainf",
            Command::KsCat(_) => "ks-cat",
            Command::Npotent(_) => "npotent",
            Command::CyPairing(_) => "cy-pairing",
            Command::CechHh(_) => "cech-hh",
            Command::CechKs(_) => "cech-ks",
            Command::MaxUnipotent(_) => "max-unipotent",
            Command::HkrCheck(_) => "hkr-check",
        }
    }

    pub fn input(&self) -> &PathBuf {
        match self {
            Command::Hh(a) | Command::HhHomology(a) | Command::Cup(a) => &a.input,
            Command::GsHh(a) | Command::DiagramAlgebra(a) | Command::ScctCheck(a) => &a.input,
            Command::DefClass(a) => &a.input,
            Command::DerivationClass(a) | Command::GsClass(a) => &a.input,
            Command::CheckAinf(a) => &a.input,
            Command::KsCat(a) => &a.input,
            Command::Npotent(a) => &a.input,
            Command::CyPairing(a) => &a.input,
            Command::CechHh(a) | Command::CechKs(a) | Command::HkrCheck(a) => &a.input,
            Command::MaxUnipotent(a) => &a.input,
        }
    }

    fn parameters(&self, cap: u128) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.into(), v);
        };
        match self {
            Command::Hh(a) | Command::HhHomology(a) => put("max_degree", json!(a.max_degree.unwrap_or(algebra::DEFAULT_MAX_DEGREE))),
            Command::Cup(a) => put("max_degree", json!(a.max_degree.unwrap_or(2))),
            Command::GsHh(a) | Command::ScctCheck(a) => put("max_degree", json!(a.max_degree.unwrap_or(diagram::DEFAULT_GS_DEGREE))),
            Command::DiagramAlgebra(a) => put("max_degree", json!(a.max_degree.unwrap_or(2))),
            Command::DefClass(_) => {}
            Command::DerivationClass(a) | Command::GsClass(a) => put("xi", json!(a.xi)),
            Command::CheckAinf(a) => {
                if let Some(n) = a.arity {
                    put("arity", json!(n))
                }
            }
            Command::KsCat(a) => {
                if let Some(n) = a.arity {
                    put("arity", json!(n));
                }
                put("xi", json!(a.xi));
            }
            Command::Npotent(a) => {
                put("n", json!(a.n));
                put("xi", json!(a.xi));
            }
            Command::CyPairing(a) => {
                if let Some(n) = a.n {
                    put("n", json!(n));
                }
                put("window", json!(a.window));
            }
            Command::CechHh(a) | Command::CechKs(a) | Command::HkrCheck(a) => put("window", json!(a.window)),
            Command::MaxUnipotent(a) => {
                put("n", json!(a.n));
                put("window", json!(a.window));
            }
        }
        if cap != algebra::DEFAULT_CAP {
            put("cap", json!(cap.to_string()));
        }
        m
    }
}

/// Run a command on input bytes already read from `cmd.input()`.
pub fn run_on(cmd: &Command, cap: Option<u128>, bytes: &[u8]) -> Report {
    let file = cmd.input().to_string_lossy().into_owned();
    let capv = cap.unwrap_or(algebra::DEFAULT_CAP);
    let mut rep = Report::new(cmd.name(), InputDigest::new(&file, bytes), cmd.parameters(capv));
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => return rep.failed(&Error::Parse("input is not UTF-8".into())),
    };
    match dispatch(cmd, cap, text, &mut rep) {
        Ok(()) => rep,
        Err(e) => rep.failed(&e),
    }
}

/// Read the input file and run.
pub fn run(cmd: &Command, cap: Option<u128>) -> Report {
    match std::fs::read(cmd.input()) {
        Ok(bytes) => run_on(cmd, cap, &bytes),
        Err(e) => {
            let file = cmd.input().to_string_lossy().into_owned();
            let rep = Report::new(cmd.name(), InputDigest::new(&file, b""), cmd.parameters(cap.unwrap_or(algebra::DEFAULT_CAP)));
            rep.failed(&Error::Io(std::io::Error::new(e.kind(), format!("{file}: {e}"))))
        }
    }
}

/// Parse arguments, run, print, and return the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let rep = run(&cli.command, cli.cap);
    let out = match cli.report {
        Format::Json => rep.to_json(),
        Format::Text => format!("{}elapsed: {} ms\n", rep.to_text(), start.elapsed().as_millis()),
    };
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    rep.exit_code()
}

/// Largest number of inputs whose A∞ relation only involves μ up to the
/// declared bound, with higher μ absent.
fn full_relations(arity: usize) -> usize {
    (2 * arity).saturating_sub(1).max(1)
}

fn verdict(zero: bool) -> &'static str {
    if zero {
        "zero"
    } else {
        "nonzero"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validated_algebra(text: &str) -> Result<FiniteAlgebra> {
    let a = io::parse_algebra(text)?;
    a.validate().map_err(|v| Error::invalid(format!("not an algebra: {v}")))?;
    Ok(a)
}

fn validated_diagram(text: &str) -> Result<AlgebraDiagram> {
    let d = io::parse_diagram(text)?;
    d.validate().map_err(|v| Error::invalid(format!("not a diagram of algebras: {v}")))?;
    Ok(d)
}

fn homology_json(a: &FiniteAlgebra, r: usize, v: &crate::linalg::SparseVec) -> Value {
    let n = a.dim();
    let width = n.pow(r as u32);
    let labels = a.labels();
    Value::Array(
        v.entries()
            .iter()
            .map(|(key, c)| {
                let (m, mut idx) = (key / width, key % width);
                let mut ins = vec![String::new(); r];
                for k in (0..r).rev() {
                    ins[k] = labels[idx % n].clone();
                    idx /= n;
                }
                json!({"element": labels[m].clone(), "tensor": ins, "coeff": c.to_string()})
            })
            .collect(),
    )
}

fn dims_line(dims: &[usize]) -> String {
    dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
}

fn dispatch(cmd: &Command, cap: Option<u128>, text: &str, rep: &mut Report) -> Result<()> {
    let capv = cap.unwrap_or(algebra::DEFAULT_CAP);
    match cmd {
        Command::Hh(args) => {
            let a = validated_algebra(text)?;
            let max = args.max_degree.unwrap_or(algebra::DEFAULT_MAX_DEGREE);
            let m = Bimodule::diagonal(&a);
            let hh = Hochschild::new(&a, &m).with_cap(capv).cohomology(max)?;
            for h in &hh {
                let reps: Vec<Value> = h.representatives.iter().map(|z| report::hochschild_json(z, a.labels(), a.labels())).collect();
                rep.results.push(Item::new(format!("HH^{}", h.degree)).degree(h.degree as i64).dimension(h.dim).representative(Value::Array(reps)));
            }
            rep.summary.push(format!("dims: {}", dims_line(&hh.iter().map(|h| h.dim).collect::<Vec<_>>())));
        }
        Command::HhHomology(args) => {
            let a = validated_algebra(text)?;
            let max = args.max_degree.unwrap_or(algebra::DEFAULT_MAX_DEGREE);
            let m = Bimodule::diagonal(&a);
            let hh = Hochschild::new(&a, &m).with_cap(capv).homology(max)?;
            for (r, dim, reps) in &hh {
                let reps: Vec<Value> = reps.iter().map(|z| homology_json(&a, *r, z)).collect();
                rep.results.push(Item::new(format!("HH_{r}")).degree(*r as i64).dimension(*dim).representative(Value::Array(reps)));
            }
            rep.summary.push(format!("dims: {}", dims_line(&hh.iter().map(|h| h.1).collect::<Vec<_>>())));
        }
        Command::Cup(args) => {
            let a = validated_algebra(text)?;
            let max = args.max_degree.unwrap_or(2);
            let m = Bimodule::diagonal(&a);
            let h = Hochschild::new(&a, &m).with_cap(capv);
            let hh = h.cohomology(max)?;
            let mut nonzero = 0;
            for x in &hh {
                for y in &hh {
                    if x.degree + y.degree > max {
                        continue;
                    }
                    for (i, alpha) in x.representatives.iter().enumerate() {
                        for (j, beta) in y.representatives.iter().enumerate() {
                            let p = algebra::cup(&a, alpha, beta)?;
                            let zero = p.is_zero() || h.is_coboundary(&p)?;
                            nonzero += usize::from(!zero);
                            rep.results.push(
                                Item::new(format!("HH^{}[{i}] ∪ HH^{}[{j}]", x.degree, y.degree))
                                    .degree((x.degree + y.degree) as i64)
                                    .verdict(verdict(zero))
                                    .representative(report::hochschild_json(&p, a.labels(), a.labels())),
                            );
                        }
                    }
                }
            }
            rep.summary.push(format!("nonzero products: {nonzero} of {}", rep.results.len()));
        }
        Command::DefClass(_) => {
            let d = io::parse_deformation(text)?;
            d.algebra().validate().map_err(|v| Error::invalid(format!("not an algebra: {v}")))?;
            d.validate()?;
            let a = d.algebra();
            let beta = deform::beta_cocycle(&d, &deform::Splitting::canonical(&d))?;
            let cls = deform::class_of(&d)?;
            let n = a.dim();
            for (k, c) in cls.components.iter().enumerate() {
                let part = beta.component(k, n);
                let mut it = Item::new(format!("v{}", k + 1))
                    .degree(2)
                    .verdict(verdict(c.is_some()))
                    .representative(report::hochschild_json(&part, a.labels(), a.labels()));
                if let Some(h) = c {
                    it = it.details(json!({"primitive": report::hochschild_json(h, a.labels(), a.labels())}));
                }
                rep.results.push(it);
            }
            rep.summary.push(format!("deformation class: {}", verdict(cls.is_zero())));
        }
        Command::DerivationClass(args) => {
            let a = validated_algebra(text)?;
            let xi: Derivation = args.xi.parse()?;
            let z = deform::derivation_deformation(&a, &xi);
            let m = Bimodule::diagonal(&a);
            let h = Hochschild::new(&a, &m).with_cap(capv);
            let prim = h.primitive(&z)?;
            let v = if z.is_zero() {
                "zero cochain"
            } else if prim.is_some() {
                "coboundary"
            } else {
                "nonzero"
            };
            let mut it = Item::new(format!("{}(μ)", xi.name())).degree(2).verdict(v).representative(report::hochschild_json(&z, a.labels(), a.labels()));
            if let (Some(p), false) = (&prim, z.is_zero()) {
                it = it.details(json!({"primitive": report::hochschild_json(p, a.labels(), a.labels())}));
            }
            rep.results.push(it);
            rep.summary.push(format!("derivation class: {v}"));
        }
        Command::GsHh(args) => {
            let d = validated_diagram(text)?;
            let max = args.max_degree.unwrap_or(diagram::DEFAULT_GS_DEGREE);
            let g = diagram::gs_complex(&d, max, capv)?;
            let dims = g.dims()[..=max].to_vec();
            for (r, dim) in dims.iter().enumerate() {
                rep.results.push(Item::new(format!("H^{r}_GS")).degree(r as i64).dimension(*dim));
            }
            rep.summary.push(format!("dims: {}", dims_line(&dims)));
        }
        Command::GsClass(args) => {
            let d = validated_diagram(text)?;
            let xi: Derivation = args.xi.parse()?;
            let g = diagram::gs_complex(&d, 2, capv)?;
            let z = diagram::gs_derivation_cocycle(&d, &xi);
            let zero = g.primitive(&z)?.is_some();
            rep.results.push(Item::new(format!("{}(a)", xi.name())).degree(2).verdict(verdict(zero)));
            let checks = diagram::gs_component_identities(&d, &xi)?;
            for c in &checks {
                rep.results.push(Item::new(c.name.clone()).verdict(if c.holds { "holds" } else { "fails" }));
            }
            if checks.iter().any(|c| !c.holds) {
                rep.status = Status::Violation;
            }
            rep.summary.push(format!("GS derivation class: {}", verdict(zero)));
            rep.summary.push(format!("component identities: {}/{} hold", checks.iter().filter(|c| c.holds).count(), checks.len()));
        }
        Command::DiagramAlgebra(args) => {
            let d = validated_diagram(text)?;
            let max = args.max_degree.unwrap_or(2);
            let bang = diagram::diagram_algebra(&d)?;
            let ok = bang.validate().is_ok();
            let spec = serde_json::to_value(io::AlgebraSpec::from_algebra(&bang))?;
            rep.results.push(Item::new("a!").dimension(bang.dim()).verdict(if ok { "valid" } else { "invalid" }).details(spec));
            let m = Bimodule::diagonal(&bang);
            let hh = Hochschild::new(&bang, &m).with_cap(capv).cohomology(max)?;
            for h in &hh {
                rep.results.push(Item::new(format!("HH^{}(a!)", h.degree)).degree(h.degree as i64).dimension(h.dim));
            }
            if !ok {
                rep.status = Status::Violation;
            }
            rep.summary.push(format!("dim a! = {}", bang.dim()));
            rep.summary.push(format!("HH dims: {}", dims_line(&hh.iter().map(|h| h.dim).collect::<Vec<_>>())));
        }
        Command::ScctCheck(args) => {
            let d = validated_diagram(text)?;
            let max = args.max_degree.unwrap_or(diagram::DEFAULT_GS_DEGREE);
            let s = diagram::scct_check(&d, max, capv)?;
            for r in 0..=max {
                rep.results.push(
                    Item::new(format!("degree {r}"))
                        .degree(r as i64)
                        .verdict(if s.gs_dims[r] == s.bang_dims[r] { "agree" } else { "differ" })
                        .details(json!({"gs": s.gs_dims[r], "diagram_algebra": s.bang_dims[r]})),
                );
            }
            rep.results.push(
                Item::new("d/dq class")
                    .degree(2)
                    .verdict(if s.verdicts_agree() { "agree" } else { "differ" })
                    .details(json!({"gs": verdict(s.gs_class_zero), "diagram_algebra": verdict(s.bang_class_zero)})),
            );
            rep.summary.push(format!("dims agree: {}", yes_no(s.dims_agree())));
            rep.summary.push(format!("class verdicts agree: {}", yes_no(s.verdicts_agree())));
            if !(s.dims_agree() && s.verdicts_agree()) {
                rep.status = Status::Violation;
            }
        }
        Command::CheckAinf(args) => {
            let inp = io::parse_ainf(text)?;
            let arity = args.arity.unwrap_or(full_relations(inp.arity));
            match inp.category.validate(arity) {
                Ok(()) => {
                    rep.results.push(Item::new("A∞ relations").verdict("ok"));
                    rep.summary.push(format!("A∞ relations hold up to arity {arity}"));
                }
                Err(v) => {
                    let details = match &v {
                        ainf::AInfViolation::Degree { inputs, output } => json!({"kind": "degree", "inputs": inputs, "output": output}),
                        ainf::AInfViolation::Relation { inputs, value } => json!({
                            "kind": "relation",
                            "inputs": inputs,
                            "value": value.iter().map(|(l, c)| json!([l, c.to_string()])).collect::<Vec<_>>(),
                        }),
                    };
                    rep.results.push(Item::new("A∞ relations").verdict("fails").details(details));
                    rep.summary.push(v.to_string());
                    rep.status = Status::Violation;
                }
            }
        }
        Command::KsCat(args) => {
            let inp = io::parse_ainf(text)?;
            let c = &inp.category;
            let arity = args.arity.unwrap_or(inp.arity);
            c.validate(full_relations(inp.arity).max(arity)).map_err(|v| Error::invalid(v.to_string()))?;
            let xi: Derivation = args.xi.parse()?;
            let ks = ainf::ks_cat(c, &xi);
            let h = ainf::hh_complex_ainf(c, 2, arity)?.with_cap(cap.unwrap_or(ainf::DEFAULT_AINF_CAP))?;
            rep.warnings.extend(h.warnings().iter().cloned());
            let cocycle = h.delta(&ks).is_zero();
            let zero = ks.is_zero() || h.is_coboundary(&ks)?;
            rep.results.push(
                Item::new(format!("KS({})", xi.name()))
                    .degree(2)
                    .verdict(verdict(zero))
                    .representative(report::ainf_json(c, &ks))
                    .details(json!({"cocycle": cocycle})),
            );
            rep.summary.push(format!("KS class: {}", verdict(zero)));
            if !cocycle {
                rep.status = Status::Violation;
            }
        }
        Command::Npotent(args) => {
            let inp = io::parse_ainf(text)?;
            let c = &inp.category;
            c.validate(full_relations(inp.arity)).map_err(|v| Error::invalid(v.to_string()))?;
            let xi: Derivation = args.xi.parse()?;
            let p = ainf::npotency_capped(c, args.n, &xi, cap.unwrap_or(ainf::DEFAULT_AINF_CAP))?;
            for (k, nz) in p.powers.iter().enumerate() {
                rep.results.push(Item::new(format!("KS^{}", k + 1)).degree(2 * (k as i64 + 1)).verdict(verdict(!nz)));
            }
            rep.summary.push(format!("{}-potent: {}", args.n, yes_no(p.is_potent())));
            if let Some(k) = p.first_zero() {
                rep.summary.push(format!("first vanishing power: {k}"));
            }
            if xi != Derivation::d_dq() {
                rep.warnings.push("d/dq and q*d/dq differ by a unit, so the verdicts agree".into());
            }
        }
        Command::CyPairing(args) => {
            let inp = io::parse_ainf(text)?;
            let c = &inp.category;
            c.validate(full_relations(inp.arity)).map_err(|v| Error::invalid(v.to_string()))?;
            let tr = inp.trace.ok_or_else(|| Error::Parse("cy-pairing needs a `trace` in the input".into()))?;
            let n = args.n.or(inp.cy_dimension).ok_or_else(|| Error::Parse("give --n or `cy_dimension`".into()))?;
            let r = ainf::cy_duality_check(c, &tr, n, args.window)?;
            let pairing = match &r.pairing {
                CyPairing::Nondegenerate => Item::new("pairing").verdict("nondegenerate"),
                CyPairing::Degenerate { x, y, degree } => Item::new("pairing")
                    .verdict("degenerate")
                    .details(json!({"source": c.objects()[*x].clone(), "target": c.objects()[*y].clone(), "degree": degree})),
            };
            rep.results.push(pairing);
            for row in &r.rows {
                rep.results.push(
                    Item::new(format!("HH^{} vs HH_{}", row.degree, n - row.degree))
                        .degree(row.degree)
                        .weight(row.weight.clone())
                        .verdict(if row.cohomology == row.homology { "agree" } else { "differ" })
                        .window(r.window)
                        .details(json!({"cohomology": row.cohomology, "homology": row.homology})),
                );
            }
            rep.summary.push(format!("pairing: {}", if r.pairing == CyPairing::Nondegenerate { "nondegenerate" } else { "degenerate" }));
            rep.summary.push(format!("duality dims agree: {}", yes_no(r.dims_agree())));
            if r.pairing != CyPairing::Nondegenerate {
                rep.status = Status::Violation;
            }
        }
        Command::CechHh(args) => {
            let (d, _) = cech::parse_cech(text)?;
            d.check_nerve()?;
            let top = d.pieces.iter().map(|p| p.cover.len()).max().unwrap_or(1) - 1;
            let mut unstable = None;
            for a in 0..=d.rank() {
                for p in 0..=top {
                    let label = format!("H^{p}(∧^{a} T)");
                    match cech::cech_cohomology(&d, a, p, args.window) {
                        Ok(h) => {
                            let reps: Vec<Value> = h.representatives.iter().map(|z| report::cech_json(&d, z)).collect();
                            rep.results.push(Item::new(label).degree(p as i64).dimension(h.dim).window(h.window).representative(Value::Array(reps)));
                        }
                        Err(e @ Error::Unstable { .. }) => {
                            rep.results.push(Item::new(label).degree(p as i64).verdict("unstable").window(args.window));
                            unstable.get_or_insert(e);
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            if let Some(e) = unstable {
                rep.summary.push("some groups did not stabilize; widen --window".into());
                return Err(e);
            }
        }
        Command::CechKs(args) => {
            let (d, lift) = cech::parse_cech(text)?;
            let lift = lift.ok_or_else(|| Error::Parse("cech-ks needs `lifts` in the input".into()))?;
            let ks = cech::ks_class(&d, &lift, args.window)?;
            let mut it = Item::new(format!("KS({})", lift.xi.name()))
                .degree(1)
                .verdict(verdict(ks.is_zero()))
                .window(ks.window)
                .representative(report::cech_json(&d, &ks.cocycle));
            if let Some(p) = &ks.primitive {
                it = it.details(json!({"primitive": report::cech_json(&d, p)}));
            }
            rep.results.push(it);
            rep.summary.push(format!("KS class: {}", verdict(ks.is_zero())));
        }
        Command::MaxUnipotent(args) => {
            let (d, lift) = cech::parse_cech(text)?;
            let lift = lift.ok_or_else(|| Error::Parse("max-unipotent needs `lifts` in the input".into()))?;
            let m = cech::max_unipotent(&d, &lift, args.n, args.window)?;
            rep.results.push(
                Item::new(format!("KS^{}", args.n))
                    .degree(args.n as i64)
                    .verdict(yes_no(m.verdict))
                    .window(m.window)
                    .representative(report::cech_json(&d, &m.power)),
            );
            rep.summary.push(format!("maximally unipotent at n = {}: {}", args.n, yes_no(m.verdict)));
        }
        Command::HkrCheck(args) => {
            let (d, lift) = cech::parse_cech(text)?;
            let lift = lift.ok_or_else(|| Error::Parse("hkr-check needs `lifts` in the input".into()))?;
            let r = cech::hkr_component_check(&d, &lift, args.window)?;
            for c in &r.charts {
                rep.results.push(
                    Item::new(format!("chart {}", c.piece))
                        .verdict(if c.antisymmetrization_vanishes && c.lift_kills_hochschild { "holds" } else { "fails" })
                        .window(r.window)
                        .details(json!({
                            "pairs": c.pairs,
                            "nonzero_pairs": c.nonzero_pairs,
                            "antisymmetrization_vanishes": c.antisymmetrization_vanishes,
                            "lift_kills_hochschild": c.lift_kills_hochschild,
                        })),
                );
            }
            for e in &r.edges {
                rep.results.push(
                    Item::new(format!("edge {} -> {}", e.from, e.to))
                        .verdict(if e.matches { "holds" } else { "fails" })
                        .window(r.window)
                        .details(json!({"monomials": e.monomials, "nonzero_components": e.nonzero_components})),
                );
            }
            if d.check_nerve().is_ok() {
                let ks = cech::ks_class(&d, &lift, args.window)?;
                rep.results.push(Item::new("Cech KS class").degree(1).verdict(verdict(ks.is_zero())).window(ks.window));
            }
            rep.summary.push(format!("HKR component checks: {}", if r.passed() { "pass" } else { "fail" }));
            if !r.passed() {
                rep.status = Status::Violation;
            }
        }
    }
    Ok(())
}
