//! Čech cohomology of polyvector fields over finite affine covers.
//!
//! Each piece of the cover (a chart or an intersection of charts) carries a
//! ring from a small menu: `K[x][1/h]` for a squarefree `h`, optionally with a
//! square root `y^2 = f(x)`. Elements are kept in the normal form
//!
//! ```text
//! Σ c x^i y^ε  +  Σ c x^i h^{-e} y^ε     (e >= 1, i < deg h, ε ∈ {0, 1})
//! ```
//!
//! which for `h = x` is the Laurent basis. Tangent modules are free with a
//! chosen basis of vector fields; restrictions are given by images of the ring
//! generators and of the basis fields. Infinite-dimensional spaces are cut off
//! at a size window and a dimension is only reported when two consecutive
//! windows agree.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::{Derivation, Scalar};

// ---------------------------------------------------------------------------
// univariate polynomials over Q(q)

/// Polynomial in the chart coordinate, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UPoly(Vec<Scalar>);

impl UPoly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn constant(c: Scalar) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(Scalar::one())
    }

    pub fn monomial(i: usize) -> Self {
        let mut c = vec![Scalar::zero(); i + 1];
        c[i] = Scalar::one();
        UPoly(c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> Scalar {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut c = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(c)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        let mut q = vec![Scalar::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &lead;
            if !c.is_zero() {
                for (j, x) in d.0.iter().enumerate() {
                    r[k + j] -= &(&c * x);
                }
                q[k] = c;
            }
            r.pop();
        }
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.degree() {
            Some(d) => a.scale(&a.0[d].inv().expect("nonzero")),
            None => a,
        }
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * &Scalar::int(i as i64)).collect())
    }

    /// Apply `ξ` to every coefficient.
    pub fn map_coeffs(&self, xi: &Derivation) -> UPoly {
        UPoly::new(self.0.iter().map(|c| xi.apply(c)).collect())
    }
}

// ---------------------------------------------------------------------------
// chart rings

/// Basis monomial `x^i h^{-pole} y^y`. With `pole >= 1` always `i < deg h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub y: u8,
    pub pole: u32,
    pub i: u32,
}

/// Ring element in normal form.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Elem(BTreeMap<Mono, Scalar>);

impl Elem {
    pub fn zero() -> Self {
        Elem::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        Elem::mono(Mono { y: 0, pole: 0, i: 0 }, c)
    }

    pub fn mono(m: Mono, c: Scalar) -> Self {
        let mut e = Elem::default();
        if !c.is_zero() {
            e.0.insert(m, c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn axpy_mut(&mut self, c: &Scalar, o: &Elem) {
        for (m, x) in &o.0 {
            let v = self.0.entry(*m).or_default();
            *v += &(c * x);
            if v.is_zero() {
                self.0.remove(m);
            }
        }
    }

    pub fn add(&self, o: &Elem) -> Elem {
        let mut r = self.clone();
        r.axpy_mut(&Scalar::one(), o);
        r
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        let mut r = self.clone();
        r.axpy_mut(&Scalar::int(-1), o);
        r
    }

    pub fn scale(&self, c: &Scalar) -> Elem {
        Elem(self.0.iter().map(|(m, x)| (*m, x * c)).filter(|(_, x)| !x.is_zero()).collect())
    }

    /// The constant, if this element is one.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => self.0.get(&Mono { y: 0, pole: 0, i: 0 }).cloned(),
            _ => None,
        }
    }

    /// Coefficientwise `ξ` in the normal-form basis.
    pub fn map_coeffs(&self, xi: &Derivation) -> Elem {
        Elem(self.0.iter().map(|(m, x)| (*m, xi.apply(x))).filter(|(_, x)| !x.is_zero()).collect())
    }
}

/// `K[x][1/h]`, optionally adjoined `y` with `y^2 = f(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartRing {
    pub var: String,
    pub yvar: Option<String>,
    pub inv: Option<String>,
    f: UPoly,
    h: UPoly,
}

impl ChartRing {
    pub fn polynomial(var: &str) -> Self {
        ChartRing { var: var.into(), yvar: None, inv: None, f: UPoly::default(), h: UPoly::one() }
    }

    pub fn laurent(var: &str) -> Self {
        ChartRing::polynomial(var).localized(UPoly::monomial(1), None).expect("x is squarefree")
    }

    /// Invert the squarefree polynomial `h`.
    pub fn localized(mut self, h: UPoly, inv: Option<&str>) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::invalid("cannot invert the zero polynomial"));
        }
        if h.degree() == Some(0) {
            return Ok(self);
        }
        if h.gcd(&h.derivative()).degree() != Some(0) {
            return Err(Error::invalid("inverted polynomial must be squarefree"));
        }
        let d = h.degree().unwrap();
        self.h = h.scale(&h.0[d].inv()?);
        self.inv = inv.map(str::to_string);
        Ok(self)
    }

    /// Adjoin `y` with `y^2 = f(x)`.
    pub fn hyperelliptic(mut self, y: &str, f: UPoly) -> Result<Self> {
        if f.degree().is_none_or(|d| d == 0) {
            return Err(Error::invalid("hyperelliptic polynomial must be nonconstant"));
        }
        self.yvar = Some(y.into());
        self.f = f;
        Ok(self)
    }

    pub fn has_y(&self) -> bool {
        self.yvar.is_some()
    }

    pub fn f(&self) -> &UPoly {
        &self.f
    }

    pub fn h(&self) -> &UPoly {
        &self.h
    }

    fn hdeg(&self) -> u32 {
        self.h.degree().unwrap_or(0) as u32
    }

    pub fn size(&self, m: &Mono) -> usize {
        if m.pole == 0 {
            m.i as usize
        } else {
            (m.pole * self.hdeg()) as usize
        }
    }

    pub fn elem_size(&self, e: &Elem) -> usize {
        e.0.keys().map(|m| self.size(m)).max().unwrap_or(0)
    }

    /// Basis monomials of size at most `w`.
    pub fn monomials(&self, w: usize) -> Vec<Mono> {
        let mut out = Vec::new();
        for y in 0..=u8::from(self.has_y()) {
            for i in 0..=w as u32 {
                out.push(Mono { y, pole: 0, i });
            }
            let hd = self.hdeg();
            if hd > 0 {
                for pole in 1..=(w as u32 / hd) {
                    for i in 0..hd {
                        out.push(Mono { y, pole, i });
                    }
                }
            }
        }
        out
    }

    pub fn x(&self) -> Elem {
        self.poly(&UPoly::monomial(1))
    }

    pub fn y(&self) -> Elem {
        Elem::mono(Mono { y: 1, pole: 0, i: 0 }, Scalar::one())
    }

    /// `h^{-1}`, or 1 when nothing is inverted.
    pub fn hinv(&self) -> Elem {
        if self.hdeg() == 0 {
            Elem::scalar(Scalar::one())
        } else {
            Elem::mono(Mono { y: 0, pole: 1, i: 0 }, Scalar::one())
        }
    }

    pub fn poly(&self, p: &UPoly) -> Elem {
        self.normalize(p.clone(), 0, 0)
    }

    /// The element `x^i h^{-e} y^ε`.
    pub fn term(&self, i: u32, e: u32, y: u8) -> Elem {
        self.normalize(UPoly::monomial(i as usize), e, y)
    }

    /// Normal form of `n / h^e · y^ε`.
    fn normalize(&self, mut n: UPoly, mut e: u32, y: u8) -> Elem {
        let mut out = Elem::zero();
        if n.is_zero() {
            return out;
        }
        if self.hdeg() == 0 {
            e = 0;
        }
        while e > 0 {
            let (q, r) = n.div_rem(&self.h);
            if !r.is_zero() {
                break;
            }
            n = q;
            e -= 1;
        }
        let (quot, mut rem) = n.div_rem(&self.h.pow(e));
        for (i, c) in quot.0.iter().enumerate() {
            if !c.is_zero() {
                out.0.insert(Mono { y, pole: 0, i: i as u32 }, c.clone());
            }
        }
        for k in 0..e {
            let (q, rk) = rem.div_rem(&self.h);
            for (i, c) in rk.0.iter().enumerate() {
                if !c.is_zero() {
                    out.0.insert(Mono { y, pole: e - k, i: i as u32 }, c.clone());
                }
            }
            rem = q;
        }
        out
    }

    /// `(numerator, pole order)` of the `y^ε` part.
    fn fraction(&self, a: &Elem, y: u8) -> (UPoly, u32) {
        let e = a.0.keys().filter(|m| m.y == y).map(|m| m.pole).max().unwrap_or(0);
        let mut n = UPoly::default();
        for (m, c) in a.0.iter().filter(|(m, _)| m.y == y) {
            n = n.add(&UPoly::monomial(m.i as usize).mul(&self.h.pow(e - m.pole)).scale(c));
        }
        (n, e)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::zero();
        if a.is_zero() || b.is_zero() {
            return out;
        }
        let ys = u8::from(self.has_y());
        for ya in 0..=ys {
            let (na, ea) = self.fraction(a, ya);
            if na.is_zero() {
                continue;
            }
            for yb in 0..=ys {
                let (nb, eb) = self.fraction(b, yb);
                if nb.is_zero() {
                    continue;
                }
                let mut n = na.mul(&nb);
                let mut y = ya + yb;
                if y == 2 {
                    n = n.mul(&self.f);
                    y = 0;
                }
                out.axpy_mut(&Scalar::one(), &self.normalize(n, ea + eb, y));
            }
        }
        out
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        (0..e).fold(Elem::scalar(Scalar::one()), |acc, _| self.mul(&acc, a))
    }

    /// Inverse of a unit: a nonzero constant times a divisor of a power of `h`, over a power of `h`.
    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        if a.0.keys().any(|m| m.y != 0) {
            return None;
        }
        let (n, e) = self.fraction(a, 0);
        let d = n.degree()?;
        if d == 0 {
            return Some(self.mul(&self.poly(&self.h.pow(e)), &Elem::scalar(n.0[0].inv().ok()?)));
        }
        if self.hdeg() == 0 {
            return None;
        }
        let g = self.h.pow(d as u32);
        let (cof, r) = g.div_rem(&n);
        if !r.is_zero() {
            return None;
        }
        // a^{-1} = h^e cof / h^d
        Some(self.normalize(cof.mul(&self.h.pow(e)), d as u32, 0))
    }

    /// `p(a)` for a polynomial `p` with scalar coefficients.
    pub fn eval(&self, p: &UPoly, a: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for c in p.0.iter().rev() {
            acc = self.mul(&acc, a).add(&Elem::scalar(c.clone()));
        }
        acc
    }

    /// Check `(ab)c = a(bc)` and `ab = ba` on all monomials of size at most `w`.
    pub fn check_normal_forms(&self, w: usize) -> Result<()> {
        let ms: Vec<Elem> = self.monomials(w).into_iter().map(|m| Elem::mono(m, Scalar::one())).collect();
        for a in &ms {
            for b in &ms {
                let ab = self.mul(a, b);
                if ab != self.mul(b, a) {
                    return Err(Error::invalid("chart product is not commutative"));
                }
                for c in &ms {
                    if self.mul(&ab, c) != self.mul(a, &self.mul(b, c)) {
                        return Err(Error::invalid("chart normal forms are not confluent"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse an expression in the generators of this ring and `q`.
    pub fn parse(&self, text: &str) -> Result<Elem> {
        let toks = tokenize(text)?;
        let mut p = ExprParser { ring: self, toks, pos: 0, text };
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Parse a polynomial in the coordinate alone.
    pub fn parse_poly(var: &str, text: &str) -> Result<UPoly> {
        let ring = ChartRing::polynomial(var);
        let e = ring.parse(text)?;
        let mut c = Vec::new();
        for (m, x) in &e.0 {
            if m.i as usize >= c.len() {
                c.resize(m.i as usize + 1, Scalar::zero());
            }
            c[m.i as usize] = x.clone();
        }
        Ok(UPoly::new(c))
    }

    pub fn display(&self, e: &Elem) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &e.0 {
            let mut f = Vec::new();
            if m.i > 0 {
                f.push(if m.i == 1 { self.var.clone() } else { format!("{}^{}", self.var, m.i) });
            }
            if m.pole > 0 {
                let name = if self.h == UPoly::monomial(1) {
                    self.var.clone()
                } else {
                    self.inv.clone().map_or_else(|| "h".to_string(), |n| n)
                };
                if self.h == UPoly::monomial(1) {
                    f.push(format!("{name}^-{}", m.pole));
                } else if self.inv.is_some() {
                    f.push(if m.pole == 1 { name } else { format!("{name}^{}", m.pole) });
                } else {
                    f.push(format!("h^-{}", m.pole));
                }
            }
            if m.y == 1 {
                f.push(self.yvar.clone().unwrap_or_else(|| "y".into()));
            }
            let body = f.join("*");
            parts.push(if body.is_empty() {
                format!("({c})")
            } else if c.is_one() {
                body
            } else {
                format!("({c})*{body}")
            });
        }
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[s..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[s..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{text}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    ring: &'a ChartRing,
    toks: Vec<Tok>,
    pos: usize,
    text: &'a str,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in `{}`", self.pos + 1, self.text))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn sum(&mut self) -> Result<Elem> {
        let mut acc = self.product()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.product()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Elem> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = self.ring.mul(&acc, &t);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    let inv = self.ring.inverse(&t).ok_or_else(|| self.err("division by a non-unit"))?;
                    acc = self.ring.mul(&acc, &inv);
                }
                Some(Tok::Op('(')) | Some(Tok::Ident(_)) | Some(Tok::Num(_)) => {
                    let t = self.unary()?;
                    acc = self.ring.mul(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Elem> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.scale(&Scalar::int(-1)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        let Some(Tok::Num(n)) = self.peek().cloned() else { return Err(self.err("expected an integer exponent")) };
        self.pos += 1;
        let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
        let base = if neg { self.ring.inverse(&base).ok_or_else(|| self.err("negative power of a non-unit"))? } else { base };
        Ok(self.ring.pow(&base, e))
    }

    fn atom(&mut self) -> Result<Elem> {
        let t = self.peek().cloned().ok_or_else(|| self.err("unexpected end of expression"))?;
        self.pos += 1;
        match t {
            Tok::Num(n) => Ok(Elem::scalar(Scalar::parse(&n)?)),
            Tok::Ident(name) => {
                let r = self.ring;
                if name == r.var {
                    Ok(r.x())
                } else if r.yvar.as_deref() == Some(name.as_str()) {
                    Ok(r.y())
                } else if r.inv.as_deref() == Some(name.as_str()) {
                    Ok(r.hinv())
                } else if name == "q" {
                    Ok(Elem::scalar(Scalar::q()))
                } else {
                    self.pos -= 1;
                    Err(self.err(&format!("unknown symbol `{name}`")))
                }
            }
            Tok::Op('(') => {
                let e = self.sum()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(&format!("unexpected `{c}`")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// derivations and ring maps

/// A derivation of a chart ring, given on `x` and `y`, acting on coefficients by `coef`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartDerivation {
    pub x: Elem,
    pub y: Elem,
    pub coef: Derivation,
}

impl ChartDerivation {
    /// A vector field: zero on coefficients.
    pub fn field(x: Elem, y: Elem) -> Self {
        ChartDerivation { x, y, coef: Derivation::zero() }
    }

    pub fn apply(&self, ring: &ChartRing, a: &Elem) -> Elem {
        let dh = ring.poly(&ring.h.map_coeffs(&self.coef)).add(&ring.mul(&ring.poly(&ring.h.derivative()), &self.x));
        let mut out = a.map_coeffs(&self.coef);
        for (m, c) in &a.0 {
            if m.i > 0 {
                let t = ring.mul(&ring.term(m.i - 1, m.pole, m.y), &self.x);
                out.axpy_mut(&(c * &Scalar::int(m.i as i64)), &t);
            }
            if m.pole > 0 {
                let t = ring.mul(&ring.term(m.i, m.pole + 1, m.y), &dh);
                out.axpy_mut(&(c * &Scalar::int(-(m.pole as i64))), &t);
            }
            if m.y == 1 {
                let t = ring.mul(&ring.term(m.i, m.pole, 0), &self.y);
                out.axpy_mut(c, &t);
            }
        }
        out
    }

    /// `2y D(y) = f^ξ(x) + f'(x) D(x)` when `y` is present.
    pub fn check(&self, ring: &ChartRing) -> Result<()> {
        if !ring.has_y() {
            if !self.y.is_zero() {
                return Err(Error::invalid("derivation has a value on a missing generator"));
            }
            return Ok(());
        }
        let lhs = ring.mul(&ring.y(), &self.y).scale(&Scalar::int(2));
        let rhs = ring.poly(&ring.f.map_coeffs(&self.coef)).add(&ring.mul(&ring.poly(&ring.f.derivative()), &self.x));
        if lhs != rhs {
            return Err(Error::invalid("derivation does not preserve the relation y^2 = f(x)"));
        }
        Ok(())
    }

    pub fn add(&self, o: &ChartDerivation) -> ChartDerivation {
        ChartDerivation { x: self.x.add(&o.x), y: self.y.add(&o.y), coef: Derivation { scale: &self.coef.scale + &o.coef.scale } }
    }

    pub fn sub(&self, o: &ChartDerivation) -> ChartDerivation {
        ChartDerivation { x: self.x.sub(&o.x), y: self.y.sub(&o.y), coef: Derivation { scale: &self.coef.scale - &o.coef.scale } }
    }

    /// `Σ λ_l t_l` for vector fields `t_l`.
    pub fn combination(ring: &ChartRing, fields: &[ChartDerivation], coeffs: &[Elem]) -> ChartDerivation {
        let mut x = Elem::zero();
        let mut y = Elem::zero();
        for (t, c) in fields.iter().zip(coeffs) {
            x = x.add(&ring.mul(c, &t.x));
            y = y.add(&ring.mul(c, &t.y));
        }
        ChartDerivation::field(x, y)
    }
}

/// A `K`-algebra map between chart rings, given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMap {
    pub x: Elem,
    pub y: Elem,
    pub hinv: Elem,
}

impl RingMap {
    pub fn new(src: &ChartRing, dst: &ChartRing, x: Elem, y: Option<Elem>, hinv: Option<Elem>) -> Result<Self> {
        let y = match (src.has_y(), y) {
            (true, Some(y)) => y,
            (true, None) => return Err(Error::invalid(format!("ring map must give the image of {}", src.yvar.as_deref().unwrap()))),
            (false, Some(_)) => return Err(Error::invalid("ring map gives an image for a missing generator")),
            (false, None) => Elem::zero(),
        };
        let hx = dst.eval(&src.h, &x);
        let hinv = match hinv {
            Some(v) => v,
            None if src.hdeg() == 0 => Elem::scalar(Scalar::one()),
            None => dst.inverse(&hx).ok_or_else(|| Error::invalid("the inverted polynomial does not map to a unit"))?,
        };
        if src.hdeg() > 0 && dst.mul(&hx, &hinv) != Elem::scalar(Scalar::one()) {
            return Err(Error::invalid("image of the inverse is not inverse to the image of h"));
        }
        if src.has_y() && dst.mul(&y, &y) != dst.eval(&src.f, &x) {
            return Err(Error::invalid("ring map does not preserve y^2 = f(x)"));
        }
        Ok(RingMap { x, y, hinv })
    }

    pub fn apply(&self, src: &ChartRing, dst: &ChartRing, a: &Elem) -> Elem {
        let mut out = Elem::zero();
        let mut cache: HashMap<(u32, u32, u8), Elem> = HashMap::new();
        for (m, c) in &a.0 {
            let v = cache.entry((m.i, m.pole, m.y)).or_insert_with(|| {
                let mut v = dst.mul(&dst.pow(&self.x, m.i), &dst.pow(&self.hinv, m.pole));
                if m.y == 1 {
                    v = dst.mul(&v, &self.y);
                }
                v
            });
            out.axpy_mut(c, v);
        }
        let _ = src;
        out
    }
}

// ---------------------------------------------------------------------------
// Čech data

/// One piece of the cover: the intersection of the charts in `cover`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub name: String,
    pub cover: Vec<usize>,
    pub ring: ChartRing,
    /// Basis of the tangent module.
    pub tangent: Vec<ChartDerivation>,
}

/// Restriction from a piece to a piece covered by one more chart.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub from: usize,
    pub to: usize,
    pub map: RingMap,
    /// `tangent[l][k]`: coefficient of target field `l` in the image of source field `k`.
    pub tangent: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug)]
pub struct CechDatum {
    pub pieces: Vec<Piece>,
    pub restrictions: Vec<Restriction>,
    rank: usize,
    by_cover: HashMap<Vec<usize>, usize>,
    edge: HashMap<(usize, usize), usize>,
}

/// Lifts `ξ^I` of a derivation of `Q(q)` to every piece.
#[derive(Clone, Debug)]
pub struct LiftedDerivation {
    pub xi: Derivation,
    pub lifts: Vec<ChartDerivation>,
}

/// Subsets of `0..n` of size `a`, in lexicographic order.
fn subsets(n: usize, a: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, a: usize, buf: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if buf.len() == a {
            out.push(buf.clone());
            return;
        }
        for i in start..n {
            buf.push(i);
            go(i + 1, n, a, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    if a <= n {
        go(0, n, a, &mut Vec::new(), &mut out);
    }
    out
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// `t_S ∧ t_T`, if nonzero.
fn wedge(s: &[usize], t: &[usize]) -> Option<(Scalar, Vec<usize>)> {
    let mut inv = 0;
    for a in s {
        for b in t {
            if a == b {
                return None;
            }
            if a > b {
                inv += 1;
            }
        }
    }
    let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
    u.sort_unstable();
    Some((Scalar::int(if inv % 2 == 0 { 1 } else { -1 }), u))
}

impl CechDatum {
    pub fn new(pieces: Vec<Piece>, restrictions: Vec<Restriction>) -> Result<Self> {
        let rank = pieces.first().map_or(0, |p| p.tangent.len());
        let mut by_cover = HashMap::new();
        for (k, p) in pieces.iter().enumerate() {
            if p.cover.is_empty() || p.cover.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("piece {} needs a strictly increasing nonempty cover", p.name)));
            }
            if p.tangent.len() != rank {
                return Err(Error::invalid(format!("piece {} has tangent rank {}, expected {rank}", p.name, p.tangent.len())));
            }
            for t in &p.tangent {
                if !t.coef.is_zero() {
                    return Err(Error::invalid(format!("tangent field on {} must vanish on scalars", p.name)));
                }
                t.check(&p.ring).map_err(|e| Error::invalid(format!("tangent field on {}: {e}", p.name)))?;
            }
            if by_cover.insert(p.cover.clone(), k).is_some() {
                return Err(Error::invalid(format!("two pieces cover {:?}", p.cover)));
            }
        }
        let mut edge = HashMap::new();
        for (k, r) in restrictions.iter().enumerate() {
            let (a, b) = (&pieces[r.from], &pieces[r.to]);
            let extra: Vec<usize> = b.cover.iter().filter(|c| !a.cover.contains(c)).copied().collect();
            if b.cover.len() != a.cover.len() + 1 || extra.len() != 1 {
                return Err(Error::invalid(format!("restriction {} -> {} must add exactly one chart", a.name, b.name)));
            }
            if r.tangent.len() != rank || r.tangent.iter().any(|row| row.len() != rank) {
                return Err(Error::invalid(format!("restriction {} -> {} needs a {rank}x{rank} tangent matrix", a.name, b.name)));
            }
            // the module map lies over the ring map: Σ_l M_lk t_l(φ(g)) = φ(t_k(g))
            let gens = Self::generators(&a.ring);
            for k in 0..rank {
                for g in &gens {
                    let mut lhs = Elem::zero();
                    for l in 0..rank {
                        let tl = b.tangent[l].apply(&b.ring, &r.map.apply(&a.ring, &b.ring, g));
                        lhs = lhs.add(&b.ring.mul(&r.tangent[l][k], &tl));
                    }
                    let rhs = r.map.apply(&a.ring, &b.ring, &a.tangent[k].apply(&a.ring, g));
                    if lhs != rhs {
                        return Err(Error::invalid(format!(
                            "tangent map {} -> {} is not compatible with the ring map",
                            a.name, b.name
                        )));
                    }
                }
            }
            if edge.insert((r.from, r.to), k).is_some() {
                return Err(Error::invalid(format!("restriction {} -> {} given twice", a.name, b.name)));
            }
        }
        Ok(CechDatum { pieces, restrictions, rank, by_cover, edge })
    }

    fn generators(ring: &ChartRing) -> Vec<Elem> {
        let mut g = vec![ring.x()];
        if ring.has_y() {
            g.push(ring.y());
        }
        g
    }

    /// Rank of the tangent module (the dimension).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn piece(&self, name: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.name == name)
    }

    /// Pieces forming `p`-simplices, in order.
    fn simplices(&self, p: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.pieces.len()).filter(|&k| self.pieces[k].cover.len() == p + 1).collect();
        v.sort_by(|a, b| self.pieces[*a].cover.cmp(&self.pieces[*b].cover));
        v
    }

    /// Every face of every piece must be a piece, with its restriction.
    pub fn check_nerve(&self) -> Result<()> {
        for (k, p) in self.pieces.iter().enumerate() {
            if p.cover.len() < 2 {
                continue;
            }
            for j in 0..p.cover.len() {
                let mut f = p.cover.clone();
                f.remove(j);
                let Some(&fi) = self.by_cover.get(&f) else {
                    return Err(Error::invalid(format!("face {f:?} of {} is missing", p.name)));
                };
                if !self.edge.contains_key(&(fi, k)) {
                    return Err(Error::invalid(format!("restriction {} -> {} is missing", self.pieces[fi].name, p.name)));
                }
            }
        }
        Ok(())
    }

    /// Restriction of a section of `∧^a T` along one restriction.
    fn restrict_wedge(&self, r: &Restriction, a: usize, sec: &[Elem]) -> Vec<Elem> {
        let (src, dst) = (&self.pieces[r.from].ring, &self.pieces[r.to].ring);
        let subs = subsets(self.rank, a);
        let mapped: Vec<Elem> = sec.iter().map(|e| r.map.apply(src, dst, e)).collect();
        let mut out = vec![Elem::zero(); subs.len()];
        let perms = permutations(a);
        for (si, s) in subs.iter().enumerate() {
            if mapped[si].is_zero() {
                continue;
            }
            for (ti, t) in subs.iter().enumerate() {
                // det of the minor M[t, s]
                let mut det = Elem::zero();
                for p in &perms {
                    let mut prod = Elem::scalar(Scalar::int(perm_sign(p)));
                    for (row, &col) in p.iter().enumerate() {
                        prod = dst.mul(&prod, &r.tangent[t[row]][s[col]]);
                    }
                    det = det.add(&prod);
                }
                out[ti] = out[ti].add(&dst.mul(&det, &mapped[si]));
            }
        }
        out
    }

    /// Restrict a section from piece `from` to a piece whose cover contains it,
    /// adding the missing charts in increasing order.
    fn restrict_to(&self, from: usize, to: usize, a: usize, sec: &[Elem]) -> Result<Vec<Elem>> {
        let mut cur = from;
        let mut sec = sec.to_vec();
        let target = &self.pieces[to].cover;
        for c in target.iter().filter(|c| !self.pieces[from].cover.contains(c)) {
            let mut next = self.pieces[cur].cover.clone();
            next.push(*c);
            next.sort_unstable();
            let ni = *self.by_cover.get(&next).ok_or_else(|| Error::invalid(format!("piece {next:?} missing")))?;
            let r = &self.restrictions[*self.edge.get(&(cur, ni)).ok_or_else(|| Error::invalid("restriction missing"))?];
            sec = self.restrict_wedge(r, a, &sec);
            cur = ni;
        }
        Ok(sec)
    }
}

// ---------------------------------------------------------------------------
// cochains and cohomology

/// A Čech `p`-cochain with values in `∧^a T`: per `p`-simplex, coefficients on the wedge basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CechCochain {
    pub p: usize,
    pub a: usize,
    pub entries: BTreeMap<usize, Vec<Elem>>,
}

impl CechCochain {
    pub fn zero(p: usize, a: usize) -> Self {
        CechCochain { p, a, entries: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.iter().all(Elem::is_zero))
    }

    fn combine(&self, o: &CechCochain, c: &Scalar) -> CechCochain {
        let mut out = self.clone();
        for (k, v) in &o.entries {
            let slot = out.entries.entry(*k).or_insert_with(|| vec![Elem::zero(); v.len()]);
            for (s, e) in slot.iter_mut().zip(v) {
                s.axpy_mut(c, e);
            }
        }
        out.entries.retain(|_, v| v.iter().any(|e| !e.is_zero()));
        out
    }

    pub fn add(&self, o: &CechCochain) -> CechCochain {
        self.combine(o, &Scalar::one())
    }

    pub fn sub(&self, o: &CechCochain) -> CechCochain {
        self.combine(o, &Scalar::int(-1))
    }

    /// Largest monomial size over all entries.
    pub fn size(&self, d: &CechDatum) -> usize {
        self.entries
            .iter()
            .flat_map(|(k, v)| v.iter().map(move |e| d.pieces[*k].ring.elem_size(e)))
            .max()
            .unwrap_or(0)
    }

    pub fn describe(&self, d: &CechDatum) -> Vec<(String, Vec<String>)> {
        self.entries
            .iter()
            .map(|(k, v)| (d.pieces[*k].name.clone(), v.iter().map(|e| d.pieces[*k].ring.display(e)).collect()))
            .collect()
    }
}

type Key = (usize, usize, Mono);

/// Flat indices for `(piece, wedge index, monomial)`.
#[derive(Default)]
struct Interner {
    map: HashMap<Key, usize>,
    keys: Vec<Key>,
}

impl Interner {
    fn id(&mut self, k: Key) -> usize {
        if let Some(&i) = self.map.get(&k) {
            return i;
        }
        self.keys.push(k);
        self.map.insert(k, self.keys.len() - 1);
        self.keys.len() - 1
    }
}

struct Engine<'d> {
    d: &'d CechDatum,
    a: usize,
    nsub: usize,
    keys: Interner,
}

impl<'d> Engine<'d> {
    fn new(d: &'d CechDatum, a: usize) -> Self {
        Engine { d, a, nsub: subsets(d.rank, a).len(), keys: Interner::default() }
    }

    fn flatten(&mut self, c: &CechCochain) -> SparseVec {
        let mut pairs = Vec::new();
        for (k, v) in &c.entries {
            for (s, e) in v.iter().enumerate() {
                for (m, x) in &e.0 {
                    pairs.push((self.keys.id((*k, s, *m)), x.clone()));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    fn unflatten(&self, p: usize, v: &SparseVec) -> CechCochain {
        let mut c = CechCochain::zero(p, self.a);
        for (i, x) in v.entries() {
            let (k, s, m) = self.keys.keys[*i];
            let slot = c.entries.entry(k).or_insert_with(|| vec![Elem::zero(); self.nsub]);
            slot[s].axpy_mut(x, &Elem::mono(m, Scalar::one()));
        }
        c
    }

    fn in_window(&self, key: usize, w: usize) -> bool {
        let (k, _, m) = self.keys.keys[key];
        self.d.pieces[k].ring.size(&m) <= w
    }

    /// Basis of `C^p_w`: one cochain per `(simplex, wedge index, monomial)`.
    fn basis(&self, p: usize, w: usize) -> Vec<Key> {
        let mut out = Vec::new();
        for k in self.d.simplices(p) {
            for s in 0..self.nsub {
                for m in self.d.pieces[k].ring.monomials(w) {
                    out.push((k, s, m));
                }
            }
        }
        out
    }

    fn differential(&self, c: &CechCochain) -> CechCochain {
        let mut out = CechCochain::zero(c.p + 1, c.a);
        for r in &self.d.restrictions {
            let Some(sec) = c.entries.get(&r.from) else { continue };
            let target = &self.d.pieces[r.to].cover;
            let added = target.iter().position(|x| !self.d.pieces[r.from].cover.contains(x)).unwrap();
            let sign = Scalar::int(if added % 2 == 0 { 1 } else { -1 });
            let img = self.d.restrict_wedge(r, c.a, sec);
            let slot = out.entries.entry(r.to).or_insert_with(|| vec![Elem::zero(); self.nsub]);
            for (s, e) in slot.iter_mut().zip(&img) {
                s.axpy_mut(&sign, e);
            }
        }
        out.entries.retain(|_, v| v.iter().any(|e| !e.is_zero()));
        out
    }

    fn basis_cochain(&self, p: usize, key: &Key) -> CechCochain {
        let mut c = CechCochain::zero(p, self.a);
        let mut v = vec![Elem::zero(); self.nsub];
        v[key.1] = Elem::mono(key.2, Scalar::one());
        c.entries.insert(key.0, v);
        c
    }

    /// Span of `d(C^{p-1}_{2w}) ∩ C^p_w` and the images themselves, tagged by preimage.
    fn image(&mut self, p: usize, w: usize) -> (Echelon, Echelon) {
        let mut inside = Echelon::new();
        let mut full = Echelon::new();
        if p == 0 {
            return (inside, full);
        }
        let mut out_part = Echelon::new();
        for key in self.basis(p - 1, 2 * w) {
            let b = self.basis_cochain(p - 1, &key);
            let v = self.flatten(&self.differential(&b));
            let (mut inn, mut out) = (Vec::new(), Vec::new());
            for (i, x) in v.entries() {
                if self.in_window(*i, w) {
                    inn.push((*i, x.clone()));
                } else {
                    out.push((*i, x.clone()));
                }
            }
            let bid = self.keys.id(key);
            full.insert(v, SparseVec::unit(bid));
            out_part.insert(SparseVec::from_pairs(out), SparseVec::from_pairs(inn));
        }
        for r in out_part.relations() {
            inside.insert(r.clone(), SparseVec::new());
        }
        (inside, full)
    }

    fn cohomology_at(&mut self, p: usize, w: usize) -> (usize, Vec<CechCochain>) {
        let mut kernel = Echelon::new();
        for key in self.basis(p, w) {
            let b = self.basis_cochain(p, &key);
            let v = self.flatten(&self.differential(&b));
            let id = self.keys.id(key);
            kernel.insert(v, SparseVec::unit(id));
        }
        let (mut span, _) = self.image(p, w);
        let mut reps = Vec::new();
        for z in kernel.relations().to_vec() {
            if span.insert(z.clone(), SparseVec::new()) {
                reps.push(self.unflatten(p, &z));
            }
        }
        (reps.len(), reps)
    }

    fn primitive_at(&mut self, z: &CechCochain, w: usize) -> Option<CechCochain> {
        if z.is_zero() {
            return Some(CechCochain::zero(z.p.saturating_sub(1), z.a));
        }
        if z.p == 0 {
            return None;
        }
        let v = self.flatten(z);
        let (_, full) = self.image(z.p, w);
        full.express(&v).map(|h| self.unflatten(z.p - 1, &h))
    }
}

/// Stabilized cohomology `H^p(∧^a T)`.
#[derive(Clone, Debug)]
pub struct CechCohomology {
    pub p: usize,
    pub a: usize,
    pub window: usize,
    pub dim: usize,
    pub representatives: Vec<CechCochain>,
}

/// `H^p(∧^a T)` on windows `w` and `w + 1`; an error if the two disagree.
pub fn cech_cohomology(d: &CechDatum, a: usize, p: usize, w: usize) -> Result<CechCohomology> {
    d.check_nerve()?;
    let mut e = Engine::new(d, a);
    let (d0, reps) = e.cohomology_at(p, w);
    let (d1, _) = e.cohomology_at(p, w + 1);
    if d0 != d1 {
        return Err(Error::Unstable { window: w, next: w + 1 });
    }
    Ok(CechCohomology { p, a, window: w, dim: d0, representatives: reps })
}

/// The Čech differential.
pub fn cech_differential(d: &CechDatum, c: &CechCochain) -> CechCochain {
    Engine::new(d, c.a).differential(c)
}

/// `Some(h)` with `dh = z` if the cocycle `z` is a coboundary of a cochain of
/// size at most `2w`, checked on `w` and `w + 1`.
pub fn cech_primitive(d: &CechDatum, z: &CechCochain, w: usize) -> Result<Option<CechCochain>> {
    d.check_nerve()?;
    let mut e = Engine::new(d, z.a);
    if !e.differential(z).is_zero() {
        return Err(Error::NotCocycle { degree: z.p as i64 });
    }
    if z.size(d) > w {
        return Err(Error::invalid(format!("window {w} is smaller than the cochain (size {})", z.size(d))));
    }
    let h0 = e.primitive_at(z, w);
    let h1 = e.primitive_at(z, w + 1);
    if h0.is_some() != h1.is_some() {
        return Err(Error::Unstable { window: w, next: w + 1 });
    }
    Ok(h0)
}

/// The unit section `1 ∈ H^0(O)`.
pub fn unit_section(d: &CechDatum) -> CechCochain {
    let mut c = CechCochain::zero(0, 0);
    for k in d.simplices(0) {
        c.entries.insert(k, vec![Elem::scalar(Scalar::one())]);
    }
    c
}

/// Simplicial cup with wedge coefficients: `(α∪β)_{i_0..i_{p+r}} = α_{i_0..i_p} ∧ β_{i_p..i_{p+r}}`.
pub fn ht_cup(d: &CechDatum, alpha: &CechCochain, beta: &CechCochain) -> Result<CechCochain> {
    d.check_nerve()?;
    let (p, r) = (alpha.p, beta.p);
    let a = alpha.a + beta.a;
    let mut out = CechCochain::zero(p + r, a);
    if a > d.rank {
        return Ok(out);
    }
    let sa = subsets(d.rank, alpha.a);
    let sb = subsets(d.rank, beta.a);
    let su = subsets(d.rank, a);
    for k in d.simplices(p + r) {
        let cover = &d.pieces[k].cover;
        let front = d.by_cover[&cover[..=p].to_vec()];
        let back = d.by_cover[&cover[p..].to_vec()];
        let (Some(x), Some(y)) = (alpha.entries.get(&front), beta.entries.get(&back)) else { continue };
        let x = d.restrict_to(front, k, alpha.a, x)?;
        let y = d.restrict_to(back, k, beta.a, y)?;
        let ring = &d.pieces[k].ring;
        let mut v = vec![Elem::zero(); su.len()];
        for (i, s) in sa.iter().enumerate() {
            for (j, t) in sb.iter().enumerate() {
                if let Some((sign, u)) = wedge(s, t) {
                    let ui = su.iter().position(|z| *z == u).unwrap();
                    v[ui].axpy_mut(&sign, &ring.mul(&x[i], &y[j]));
                }
            }
        }
        if v.iter().any(|e| !e.is_zero()) {
            out.entries.insert(k, v);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Kodaira–Spencer classes

impl LiftedDerivation {
    pub fn check(&self, d: &CechDatum) -> Result<()> {
        if self.lifts.len() != d.pieces.len() {
            return Err(Error::invalid("one lift per piece is required"));
        }
        for (p, l) in d.pieces.iter().zip(&self.lifts) {
            if l.coef != self.xi {
                return Err(Error::invalid(format!("lift on {} does not extend {}", p.name, self.xi.name())));
            }
            l.check(&p.ring).map_err(|e| Error::invalid(format!("lift on {}: {e}", p.name)))?;
        }
        Ok(())
    }

    /// Lifts acting only on coefficients: valid whenever every relation is `q`-free.
    pub fn coefficientwise(d: &CechDatum, xi: &Derivation) -> Self {
        let lifts = d.pieces.iter().map(|_| ChartDerivation { x: Elem::zero(), y: Elem::zero(), coef: xi.clone() }).collect();
        LiftedDerivation { xi: xi.clone(), lifts }
    }

    /// Add the vector field `Σ_l c_l t_l` to the lift on each piece.
    pub fn perturbed(&self, d: &CechDatum, fields: &[Vec<Elem>]) -> Self {
        let lifts = self
            .lifts
            .iter()
            .zip(&d.pieces)
            .zip(fields)
            .map(|((l, p), c)| l.add(&ChartDerivation::combination(&p.ring, &p.tangent, c)))
            .collect();
        LiftedDerivation { xi: self.xi.clone(), lifts }
    }

    /// Multiply the derivation (and every lift) by a scalar.
    pub fn scaled(&self, d: &CechDatum, c: &Scalar) -> Self {
        let lifts = self
            .lifts
            .iter()
            .zip(&d.pieces)
            .map(|(l, p)| ChartDerivation {
                x: p.ring.mul(&Elem::scalar(c.clone()), &l.x),
                y: p.ring.mul(&Elem::scalar(c.clone()), &l.y),
                coef: Derivation { scale: &l.coef.scale * c },
            })
            .collect();
        LiftedDerivation { xi: Derivation { scale: &self.xi.scale * c }, lifts }
    }
}

/// `ξ^J ∘ φ - φ ∘ ξ^I` along the restriction `r`, as a tangent vector on the target:
/// coefficients `λ_l` with monomials of size at most `w`.
pub fn edge_vector(d: &CechDatum, lift: &LiftedDerivation, r: &Restriction, w: usize) -> Result<Vec<Elem>> {
    let (src, dst) = (&d.pieces[r.from], &d.pieces[r.to]);
    let gens = CechDatum::generators(&src.ring);
    let mut rows: HashMap<(usize, Mono), usize> = HashMap::new();
    let mut row = |g: usize, m: Mono| {
        let n = rows.len();
        *rows.entry((g, m)).or_insert(n)
    };
    let imgs: Vec<Elem> = gens.iter().map(|g| r.map.apply(&src.ring, &dst.ring, g)).collect();
    let mut rhs = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let v = lift.lifts[r.to]
            .apply(&dst.ring, &imgs[gi])
            .sub(&r.map.apply(&src.ring, &dst.ring, &lift.lifts[r.from].apply(&src.ring, g)));
        for (m, x) in &v.0 {
            rhs.push((row(gi, *m), x.clone()));
        }
    }
    let monos = dst.ring.monomials(w);
    let mut ech = Echelon::new();
    for l in 0..d.rank {
        let tl: Vec<Elem> = imgs.iter().map(|e| dst.tangent[l].apply(&dst.ring, e)).collect();
        for (mi, m) in monos.iter().enumerate() {
            let me = Elem::mono(*m, Scalar::one());
            let mut col = Vec::new();
            for (gi, t) in tl.iter().enumerate() {
                for (mm, x) in &dst.ring.mul(&me, t).0 {
                    col.push((row(gi, *mm), x.clone()));
                }
            }
            ech.insert(SparseVec::from_pairs(col), SparseVec::unit(l * monos.len() + mi));
        }
    }
    let sol = ech.express(&SparseVec::from_pairs(rhs)).ok_or_else(|| {
        Error::invalid(format!(
            "window {w} is too small to express the derivation difference on {} -> {} as a vector field",
            src.name, dst.name
        ))
    })?;
    let mut out = vec![Elem::zero(); d.rank];
    for (i, x) in sol.entries() {
        out[i / monos.len()].axpy_mut(x, &Elem::mono(monos[i % monos.len()], Scalar::one()));
    }
    Ok(out)
}

/// The Kodaira–Spencer cocycle `c_{ij} = D_{i -> ij} - D_{j -> ij}` and its verdict.
#[derive(Clone, Debug)]
pub struct KsClass {
    pub cocycle: CechCochain,
    pub window: usize,
    /// A primitive if the class vanishes.
    pub primitive: Option<CechCochain>,
}

impl KsClass {
    pub fn is_zero(&self) -> bool {
        self.primitive.is_some()
    }
}

pub fn ks_cocycle(d: &CechDatum, lift: &LiftedDerivation, w: usize) -> Result<CechCochain> {
    lift.check(d)?;
    d.check_nerve()?;
    let mut c = CechCochain::zero(1, 1);
    for k in d.simplices(1) {
        let cover = &d.pieces[k].cover;
        let mut v = vec![Elem::zero(); d.rank];
        for (pos, sign) in [(0usize, 1i64), (1, -1)] {
            let face = d.by_cover[&vec![cover[pos]]];
            let r = &d.restrictions[d.edge[&(face, k)]];
            for (s, e) in v.iter_mut().zip(edge_vector(d, lift, r, w)?) {
                s.axpy_mut(&Scalar::int(sign), &e);
            }
        }
        if v.iter().any(|e| !e.is_zero()) {
            c.entries.insert(k, v);
        }
    }
    if !cech_differential(d, &c).is_zero() {
        return Err(Error::NotCocycle { degree: 1 });
    }
    Ok(c)
}

pub fn ks_class(d: &CechDatum, lift: &LiftedDerivation, w: usize) -> Result<KsClass> {
    let cocycle = ks_cocycle(d, lift, w)?;
    let w = w.max(cocycle.size(d));
    let primitive = cech_primitive(d, &cocycle, w)?;
    Ok(KsClass { cocycle, window: w, primitive })
}

#[derive(Clone, Debug)]
pub struct MaxUnipotent {
    pub n: usize,
    pub window: usize,
    pub power: CechCochain,
    pub verdict: bool,
}

/// Is the `n`-th cup power of the Kodaira–Spencer class nonzero in `H^n(∧^n T)`?
pub fn max_unipotent(d: &CechDatum, lift: &LiftedDerivation, n: usize, w: usize) -> Result<MaxUnipotent> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let ks = ks_cocycle(d, lift, w)?;
    let mut power = ks.clone();
    for _ in 1..n {
        power = ht_cup(d, &power, &ks)?;
    }
    if power.is_zero() {
        return Ok(MaxUnipotent { n, window: w, power, verdict: false });
    }
    let w = w.max(power.size(d));
    let verdict = cech_primitive(d, &power, w)?.is_none();
    Ok(MaxUnipotent { n, window: w, power, verdict })
}

// ---------------------------------------------------------------------------
// HKR components

#[derive(Clone, Debug, PartialEq)]
pub struct HkrChart {
    pub piece: String,
    pub pairs: usize,
    /// Pairs with `ξ(m)(a, b) != 0`.
    pub nonzero_pairs: usize,
    /// `ξ(m)(a, b) = ξ(m)(b, a)` on every pair.
    pub antisymmetrization_vanishes: bool,
    /// `ξ(m)` equals the Hochschild coboundary of `ξ^I - ξ̃` on every pair.
    pub lift_kills_hochschild: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HkrEdge {
    pub from: String,
    pub to: String,
    pub monomials: usize,
    /// `ξ(φ) + (θ_J φ - φ θ_I)` equals the lift difference on every monomial.
    pub matches: bool,
    pub nonzero_components: usize,
}

#[derive(Clone, Debug)]
pub struct HkrReport {
    pub window: usize,
    pub charts: Vec<HkrChart>,
    pub edges: Vec<HkrEdge>,
}

impl HkrReport {
    pub fn passed(&self) -> bool {
        self.charts.iter().all(|c| c.antisymmetrization_vanishes && c.lift_kills_hochschild)
            && self.edges.iter().all(|e| e.matches)
    }
}

/// The two componentwise comparisons between the Gerstenhaber–Schack cocycle
/// `(ξ(m_I), ξ(φ^v))` in the monomial bases and the lift data, on every
/// monomial (pair) of size at most `w`. Here `ξ̃` is `ξ` on normal-form
/// coefficients and `θ_I = ξ^I - ξ̃`.
pub fn hkr_component_check(d: &CechDatum, lift: &LiftedDerivation, w: usize) -> Result<HkrReport> {
    if w == 0 {
        return Err(Error::invalid("window 0 is too small to certify the edge components"));
    }
    lift.check(d)?;
    let xi = &lift.xi;
    let theta = |k: usize, a: &Elem| -> Elem {
        let ring = &d.pieces[k].ring;
        lift.lifts[k].apply(ring, a).sub(&a.map_coeffs(xi))
    };
    let mut charts = Vec::new();
    for (k, p) in d.pieces.iter().enumerate() {
        let ring = &p.ring;
        let ms: Vec<Elem> = ring.monomials(w).into_iter().map(|m| Elem::mono(m, Scalar::one())).collect();
        let xm = |a: &Elem, b: &Elem| {
            ring.mul(a, b).map_coeffs(xi).sub(&ring.mul(&a.map_coeffs(xi), b)).sub(&ring.mul(a, &b.map_coeffs(xi)))
        };
        let (mut anti, mut kills, mut nonzero) = (true, true, 0);
        for a in &ms {
            for b in &ms {
                let v = xm(a, b);
                nonzero += usize::from(!v.is_zero());
                anti &= v == xm(b, a);
                let cob = theta(k, &ring.mul(a, b)).sub(&ring.mul(&theta(k, a), b)).sub(&ring.mul(a, &theta(k, b)));
                kills &= v.add(&cob).is_zero();
            }
        }
        charts.push(HkrChart { piece: p.name.clone(), pairs: ms.len() * ms.len(), nonzero_pairs: nonzero, antisymmetrization_vanishes: anti, lift_kills_hochschild: kills });
    }
    let mut edges = Vec::new();
    for r in &d.restrictions {
        let (src, dst) = (&d.pieces[r.from], &d.pieces[r.to]);
        let monos = src.ring.monomials(w);
        let (mut ok, mut nonzero) = (true, 0);
        for m in &monos {
            let a = Elem::mono(*m, Scalar::one());
            let (gs, dv) = edge_components(d, lift, r, &a);
            if !gs.is_zero() {
                nonzero += 1;
            }
            let cob = theta(r.to, &r.map.apply(&src.ring, &dst.ring, &a))
                .sub(&r.map.apply(&src.ring, &dst.ring, &theta(r.from, &a)));
            ok &= gs.add(&cob) == dv;
        }
        edges.push(HkrEdge { from: src.name.clone(), to: dst.name.clone(), monomials: monos.len(), matches: ok, nonzero_components: nonzero });
    }
    Ok(HkrReport { window: w, charts, edges })
}

/// `(ξ(φ)(a), (ξ^J φ - φ ξ^I)(a))` for a restriction `φ`: the edge component of
/// the coefficientwise cocycle and the lift difference.
pub fn edge_components(d: &CechDatum, lift: &LiftedDerivation, r: &Restriction, a: &Elem) -> (Elem, Elem) {
    let (src, dst) = (&d.pieces[r.from], &d.pieces[r.to]);
    let phi = |e: &Elem| r.map.apply(&src.ring, &dst.ring, e);
    let gs = phi(a).map_coeffs(&lift.xi).sub(&phi(&a.map_coeffs(&lift.xi)));
    let dv = lift.lifts[r.to].apply(&dst.ring, &phi(a)).sub(&phi(&lift.lifts[r.from].apply(&src.ring, a)));
    (gs, dv)
}

// ---------------------------------------------------------------------------
// JSON input

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub var: String,
    #[serde(default)]
    pub y: Option<String>,
    #[serde(default)]
    pub f: Option<String>,
    #[serde(default)]
    pub invert: Option<String>,
    #[serde(default)]
    pub inv: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub name: String,
    pub cover: Vec<usize>,
    pub ring: RingSpec,
    /// Basis vector fields, each given by its values on the generators.
    pub tangent: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionSpec {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
    pub tangent: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpec {
    #[serde(default = "default_derivation")]
    pub derivation: String,
    pub values: BTreeMap<String, BTreeMap<String, String>>,
}

fn default_derivation() -> String {
    "d/dq".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CechSpec {
    pub pieces: Vec<PieceSpec>,
    pub restrictions: Vec<RestrictionSpec>,
    #[serde(default)]
    pub lifts: Option<LiftSpec>,
}

impl RingSpec {
    fn build(&self) -> Result<ChartRing> {
        let mut r = ChartRing::polynomial(&self.var);
        if let Some(h) = &self.invert {
            r = r.localized(ChartRing::parse_poly(&self.var, h)?, self.inv.as_deref())?;
        } else if self.inv.is_some() {
            return Err(Error::invalid("`inv` given without `invert`"));
        }
        match (&self.y, &self.f) {
            (Some(y), Some(f)) => r = r.hyperelliptic(y, ChartRing::parse_poly(&self.var, f)?)?,
            (None, None) => {}
            _ => return Err(Error::invalid("`y` and `f` must be given together")),
        }
        Ok(r)
    }
}

fn derivation_from(ring: &ChartRing, vals: &BTreeMap<String, String>, coef: Derivation, what: &str) -> Result<ChartDerivation> {
    let mut x = Elem::zero();
    let mut y = Elem::zero();
    for (k, v) in vals {
        let e = ring.parse(v).map_err(|e| Error::Parse(format!("{what}: {e}")))?;
        if *k == ring.var {
            x = e;
        } else if ring.yvar.as_deref() == Some(k.as_str()) {
            y = e;
        } else {
            return Err(Error::Parse(format!("{what}: `{k}` is not a generator")));
        }
    }
    Ok(ChartDerivation { x, y, coef })
}

impl CechSpec {
    pub fn build(&self) -> Result<(CechDatum, Option<LiftedDerivation>)> {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let ring = p.ring.build().map_err(|e| Error::invalid(format!("piece {}: {e}", p.name)))?;
            let tangent = p
                .tangent
                .iter()
                .map(|t| derivation_from(&ring, t, Derivation::zero(), &format!("tangent field on {}", p.name)))
                .collect::<Result<Vec<_>>>()?;
            pieces.push(Piece { name: p.name.clone(), cover: p.cover.clone(), ring, tangent });
        }
        let names: Vec<String> = pieces.iter().map(|p| p.name.clone()).collect();
        let find = |n: &str| {
            names.iter().position(|p| p == n).ok_or_else(|| Error::invalid(format!("unknown piece `{n}`")))
        };
        let mut restrictions = Vec::new();
        for r in &self.restrictions {
            let (from, to) = (find(&r.from)?, find(&r.to)?);
            let (src, dst) = (&pieces[from].ring, &pieces[to].ring);
            let what = format!("restriction {} -> {}", r.from, r.to);
            let get = |name: Option<&String>| -> Result<Option<Elem>> {
                match name.and_then(|n| r.map.get(n)) {
                    Some(t) => Ok(Some(dst.parse(t).map_err(|e| Error::Parse(format!("{what}: {e}")))?)),
                    None => Ok(None),
                }
            };
            for k in r.map.keys() {
                if *k != src.var && src.yvar.as_ref() != Some(k) && src.inv.as_ref() != Some(k) {
                    return Err(Error::Parse(format!("{what}: `{k}` is not a generator of {}", r.from)));
                }
            }
            let x = get(Some(&src.var))?.ok_or_else(|| Error::Parse(format!("{what}: missing image of {}", src.var)))?;
            let map = RingMap::new(src, dst, x, get(src.yvar.as_ref())?, get(src.inv.as_ref())?)
                .map_err(|e| Error::invalid(format!("{what}: {e}")))?;
            let tangent = r
                .tangent
                .iter()
                .map(|row| row.iter().map(|t| dst.parse(t)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            restrictions.push(Restriction { from, to, map, tangent });
        }
        let datum = CechDatum::new(pieces, restrictions)?;
        let lift = match &self.lifts {
            None => None,
            Some(l) => {
                let xi: Derivation = l.derivation.parse()?;
                let mut lifts = Vec::new();
                for p in &datum.pieces {
                    let empty = BTreeMap::new();
                    let vals = l.values.get(&p.name).unwrap_or(&empty);
                    lifts.push(derivation_from(&p.ring, vals, xi.clone(), &format!("lift on {}", p.name))?);
                }
                for k in l.values.keys() {
                    find(k)?;
                }
                let lift = LiftedDerivation { xi, lifts };
                lift.check(&datum)?;
                Some(lift)
            }
        };
        Ok((datum, lift))
    }
}

pub fn parse_cech(text: &str) -> Result<(CechDatum, Option<LiftedDerivation>)> {
    let spec: CechSpec = serde_json::from_str(text)?;
    spec.build()
}

// ---------------------------------------------------------------------------
// stock data

/// The Legendre family `y^2 = x(x-1)(x-q)` on two charts, with lifts of `d/dq`.
pub fn legendre() -> (CechDatum, LiftedDerivation) {
    let (d, l) = parse_cech(include_str!("../fixtures/cech/legendre.json")).expect("legendre fixture");
    (d, l.expect("lifts"))
}

/// The projective line on two charts, with coefficientwise lifts of `d/dq`.
pub fn projective_line() -> (CechDatum, LiftedDerivation) {
    let (d, l) = parse_cech(include_str!("../fixtures/cech/p1.json")).expect("p1 fixture");
    (d, l.expect("lifts"))
}

/// A single restriction `K[x] -> K[x]`, `x ↦ qx`, with coefficientwise lifts.
pub fn scaling_edge() -> (CechDatum, LiftedDerivation) {
    let (d, l) = parse_cech(include_str!("../fixtures/cech/scaling_edge.json")).expect("edge fixture");
    (d, l.expect("lifts"))
}

/// Two Laurent charts glued by `u ↦ qx`, with coefficientwise lifts.
pub fn scaled_gluing() -> (CechDatum, LiftedDerivation) {
    let (d, l) = parse_cech(include_str!("../fixtures/cech/scaled_gluing.json")).expect("gluing fixture");
    (d, l.expect("lifts"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::int(x)
    }

    #[test]
    fn normal_forms() {
        let r = ChartRing::laurent("x");
        let x = r.x();
        let xi = r.inverse(&x).unwrap();
        assert_eq!(r.mul(&x, &xi), Elem::scalar(s(1)));
        assert_eq!(r.parse("x^-2*x^3").unwrap(), x);
        r.check_normal_forms(3).unwrap();
        let h = ChartRing::parse_poly("x", "x*(x-1)").unwrap();
        let loc = ChartRing::polynomial("x").localized(h, Some("u")).unwrap();
        loc.check_normal_forms(4).unwrap();
        let inv_x = loc.parse("1/x").unwrap();
        assert_eq!(loc.mul(&inv_x, &loc.x()), Elem::scalar(s(1)));
        assert_eq!(loc.parse("u*(x^2-x)").unwrap(), Elem::scalar(s(1)));
        assert!(loc.parse("1/(x+1)").is_err());
        let f = ChartRing::parse_poly("x", "x*(x-1)*(x-q)").unwrap();
        let ell = ChartRing::laurent("x").hyperelliptic("y", f.clone()).unwrap();
        ell.check_normal_forms(2).unwrap();
        assert_eq!(ell.mul(&ell.y(), &ell.y()), ell.poly(&f));
        assert!(ChartRing::polynomial("x").localized(ChartRing::parse_poly("x", "x^2").unwrap(), None).is_err());
    }

    #[test]
    fn derivation_rule() {
        let r = ChartRing::laurent("x");
        let d = ChartDerivation::field(Elem::scalar(s(1)), Elem::zero());
        // d/dx (x^-2) = -2 x^-3
        assert_eq!(d.apply(&r, &r.parse("x^-2").unwrap()), r.parse("-2*x^-3").unwrap());
        let h = ChartRing::parse_poly("x", "x^2-1").unwrap();
        let loc = ChartRing::polynomial("x").localized(h, Some("u")).unwrap();
        let a = loc.parse("x*u^2").unwrap();
        let b = loc.parse("x^3 + u").unwrap();
        let lhs = d.apply(&loc, &loc.mul(&a, &b));
        let rhs = loc.mul(&d.apply(&loc, &a), &b).add(&loc.mul(&a, &d.apply(&loc, &b)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_chart_has_no_higher_cohomology() {
        let d = CechDatum::new(
            vec![Piece {
                name: "A".into(),
                cover: vec![0],
                ring: ChartRing::polynomial("x"),
                tangent: vec![ChartDerivation::field(Elem::scalar(s(1)), Elem::zero())],
            }],
            vec![],
        )
        .unwrap();
        let h0 = cech_cohomology(&d, 0, 0, 4);
        // the window itself keeps growing: H^0 is the whole truncated module
        assert!(matches!(h0, Err(Error::Unstable { .. })));
        assert_eq!(cech_cohomology(&d, 0, 1, 4).unwrap().dim, 0);
        assert_eq!(cech_cohomology(&d, 1, 1, 4).unwrap().dim, 0);
    }

    #[test]
    fn projective_line_cohomology() {
        let (d, _) = projective_line();
        assert_eq!(cech_cohomology(&d, 0, 0, 4).unwrap().dim, 1);
        assert_eq!(cech_cohomology(&d, 0, 1, 4).unwrap().dim, 0);
        assert_eq!(cech_cohomology(&d, 1, 0, 4).unwrap().dim, 3);
        assert_eq!(cech_cohomology(&d, 1, 1, 4).unwrap().dim, 0);
    }

    #[test]
    fn differential_squares_to_zero() {
        // three Laurent charts of G_m glued by identities
        let mut pieces = Vec::new();
        let covers = [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]];
        for c in &covers {
            pieces.push(Piece {
                name: format!("{c:?}"),
                cover: c.clone(),
                ring: ChartRing::laurent("x"),
                tangent: vec![ChartDerivation::field(Elem::scalar(s(1)), Elem::zero())],
            });
        }
        let r = ChartRing::laurent("x");
        let mut res = Vec::new();
        for (j, c) in covers.iter().enumerate() {
            for (i, f) in covers.iter().enumerate() {
                if c.len() == f.len() + 1 && f.iter().all(|x| c.contains(x)) {
                    let map = RingMap::new(&r, &r, r.x(), None, None).unwrap();
                    res.push(Restriction { from: i, to: j, map, tangent: vec![vec![Elem::scalar(s(1))]] });
                }
            }
        }
        let d = CechDatum::new(pieces, res).unwrap();
        let mut c = CechCochain::zero(0, 1);
        c.entries.insert(0, vec![r.parse("x^2 + 3*x^-1").unwrap()]);
        c.entries.insert(2, vec![r.parse("q*x").unwrap()]);
        let dc = cech_differential(&d, &c);
        assert!(!dc.is_zero());
        assert!(cech_differential(&d, &dc).is_zero());
        // H^1 of a cover of an affine scheme vanishes
        assert_eq!(cech_cohomology(&d, 0, 1, 2).unwrap().dim, 0);
    }

    #[test]
    fn legendre_cohomology_and_ks() {
        let (d, lift) = legendre();
        assert_eq!(cech_cohomology(&d, 1, 0, 4).unwrap().dim, 1);
        assert_eq!(cech_cohomology(&d, 1, 1, 4).unwrap().dim, 1);
        assert_eq!(cech_cohomology(&d, 0, 1, 4).unwrap().dim, 1);
        let ks = ks_class(&d, &lift, 4).unwrap();
        assert!(!ks.is_zero());
        // c_{01} = -(1/(2q(q-1))) y/x
        let ov = d.piece("U01").unwrap();
        let r = &d.pieces[ov].ring;
        let want = r.parse("-1/(2*q*(q-1)) * y * x^-1").unwrap();
        assert_eq!(ks.cocycle.entries[&ov], vec![want]);
    }

    #[test]
    fn ks_is_independent_of_lifts() {
        let (d, lift) = legendre();
        let fields: Vec<Vec<Elem>> = d
            .pieces
            .iter()
            .map(|p| vec![p.ring.parse(&format!("{} + q*{}^2", 1 + p.cover.len(), p.ring.var)).unwrap()])
            .collect();
        let other = lift.perturbed(&d, &fields);
        let a = ks_cocycle(&d, &lift, 4).unwrap();
        let b = ks_cocycle(&d, &other, 4).unwrap();
        assert_ne!(a, b);
        let diff = b.sub(&a);
        assert!(cech_primitive(&d, &diff, diff.size(&d).max(4)).unwrap().is_some());
    }

    #[test]
    fn ks_linear_in_xi() {
        let (d, lift) = legendre();
        let q = lift.scaled(&d, &Scalar::q());
        let a = ks_cocycle(&d, &lift, 4).unwrap();
        let b = ks_cocycle(&d, &q, 4).unwrap();
        let ov = d.piece("U01").unwrap();
        let r = &d.pieces[ov].ring;
        assert_eq!(b.entries[&ov][0], r.mul(&Elem::scalar(Scalar::q()), &a.entries[&ov][0]));
    }

    #[test]
    fn max_unipotence() {
        let (d, lift) = legendre();
        assert!(max_unipotent(&d, &lift, 1, 4).unwrap().verdict);
        let two = max_unipotent(&d, &lift, 2, 4).unwrap();
        assert!(!two.verdict && two.power.is_zero());
        let (p1, flat) = projective_line();
        assert!(!max_unipotent(&p1, &flat, 1, 4).unwrap().verdict);
    }

    #[test]
    fn cup_with_unit() {
        let (d, lift) = legendre();
        let ks = ks_cocycle(&d, &lift, 4).unwrap();
        let one = unit_section(&d);
        assert_eq!(ht_cup(&d, &ks, &one).unwrap(), ks);
        assert_eq!(ht_cup(&d, &one, &ks).unwrap(), ks);
    }

    #[test]
    fn scaled_gluing_is_trivial() {
        let (d, lift) = scaled_gluing();
        let ks = ks_class(&d, &lift, 3).unwrap();
        let ov = d.piece("U01").unwrap();
        assert_eq!(ks.cocycle.entries[&ov], vec![d.pieces[ov].ring.parse("-x/q").unwrap()]);
        assert!(ks.is_zero());
    }

    #[test]
    fn hkr_toy_edge() {
        let (d, lift) = scaling_edge();
        let r = &d.restrictions[0];
        let x = d.pieces[0].ring.x();
        let (gs, dv) = edge_components(&d, &lift, r, &x);
        assert_eq!(gs, d.pieces[1].ring.x());
        assert_eq!(gs, dv);
        let rep = hkr_component_check(&d, &lift, 4).unwrap();
        assert!(rep.passed() && rep.edges[0].nonzero_components == 4);
    }

    #[test]
    fn hkr_legendre() {
        let (d, lift) = legendre();
        let rep = hkr_component_check(&d, &lift, 4).unwrap();
        assert!(rep.passed(), "{rep:?}");
        // the restrictions are q-free; the deformation sits in the chart products
        assert!(rep.edges.iter().all(|e| e.nonzero_components == 0));
        assert!(rep.charts.iter().all(|c| c.nonzero_pairs > 0));
        let (p1, flat) = projective_line();
        let rep = hkr_component_check(&p1, &flat, 3).unwrap();
        assert!(rep.passed() && rep.edges.iter().all(|e| e.nonzero_components == 0));
    }

    #[test]
    fn rejects_bad_data() {
        let bad_lift = r#"{"pieces":[{"name":"A","cover":[0],"ring":{"var":"x","y":"y","f":"x^3-q"},
            "tangent":[{"x":"2*y","y":"3*x^2"}]}],"restrictions":[],
            "lifts":{"values":{"A":{"x":"0","y":"0"}}}}"#;
        assert!(parse_cech(bad_lift).is_err());
        let bad_field = r#"{"pieces":[{"name":"A","cover":[0],"ring":{"var":"x","y":"y","f":"x^3-q"},
            "tangent":[{"x":"1","y":"0"}]}],"restrictions":[]}"#;
        assert!(parse_cech(bad_field).is_err());
        let typo = r#"{"pieces":[],"restrictions":[],"lift":{}}"#;
        assert!(parse_cech(typo).is_err());
    }
}
