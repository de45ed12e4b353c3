//! Sparse polynomials over F_p, their arithmetic, parsing and canonical printing.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{degrevlex, Monomial};

/// A polynomial as `(coefficient, monomial)` pairs sorted strictly descending in degrevlex.
/// No coefficient is zero and no monomial repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(u32, Monomial)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    /// Builds from terms in any order; merges duplicates and drops zeros.
    pub fn from_terms(field: &PrimeField, mut terms: Vec<(u32, Monomial)>) -> Self {
        terms.sort_by(|a, b| degrevlex(&b.1, &a.1));
        let mut out: Vec<(u32, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = field.add(last.0, c),
                _ => out.push((c, m)),
            }
        }
        out.retain(|(c, _)| *c != 0);
        Polynomial { terms: out }
    }

    /// Trusts the caller: terms already sorted descending, nonzero, distinct.
    pub(crate) fn from_sorted_terms(terms: Vec<(u32, Monomial)>) -> Self {
        Polynomial { terms }
    }

    pub fn constant(field: &PrimeField, nvars: usize, c: i64) -> Self {
        let c = field.from_i64(c);
        if c == 0 {
            Self::zero()
        } else {
            Polynomial { terms: vec![(c, Monomial::one(nvars))] }
        }
    }

    pub fn monomial(c: u32, m: Monomial) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Polynomial { terms: vec![(c, m)] }
        }
    }

    pub fn terms(&self) -> &[(u32, Monomial)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(u32, Monomial)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(u32, Monomial)> {
        self.terms.first()
    }

    /// Degree of the leading term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(_, m)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((_, m0)) => self.terms.iter().all(|(_, m)| m.degree() == m0.degree()),
        }
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    /// Constant term (zero when absent).
    pub fn constant_term(&self) -> u32 {
        match self.terms.last() {
            Some((c, m)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, field: &PrimeField, other: &Polynomial) -> Polynomial {
        merge(field, &self.terms, &other.terms, 1, None)
    }

    pub fn sub(&self, field: &PrimeField, other: &Polynomial) -> Polynomial {
        merge(field, &self.terms, &other.terms, field.neg(1), None)
    }

    pub fn neg(&self, field: &PrimeField) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(c, m)| (field.neg(*c), m.clone())).collect() }
    }

    pub fn scale(&self, field: &PrimeField, c: u32) -> Polynomial {
        if c == 0 {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(a, m)| (field.mul(*a, c), m.clone())).collect() }
    }

    pub fn mul_term(&self, field: &PrimeField, c: u32, mono: &Monomial) -> Polynomial {
        if c == 0 {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(a, m)| (field.mul(*a, c), m.mul(mono))).collect(),
        }
    }

    pub fn mul(&self, field: &PrimeField, other: &Polynomial) -> Polynomial {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Polynomial::zero();
        for (c, m) in &small.terms {
            let part = big.mul_term(field, *c, m);
            acc = acc.add(field, &part);
        }
        acc
    }

    /// Plain repeated-squaring power.
    pub fn pow(&self, field: &PrimeField, nvars: usize, mut k: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(field, nvars, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(field, &base);
            }
        }
        acc
    }

    /// Multiplies so that the leading coefficient becomes one.
    pub fn monic(&self, field: &PrimeField) -> Polynomial {
        match self.terms.first() {
            None => Self::zero(),
            Some((c, _)) => self.scale(field, field.inv(*c)),
        }
    }
}

/// `a + factor * b`, optionally with every monomial of `b` multiplied by `shift`.
pub(crate) fn merge(
    field: &PrimeField,
    a: &[(u32, Monomial)],
    b: &[(u32, Monomial)],
    factor: u32,
    shift: Option<&Monomial>,
) -> Polynomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let bterm = |j: usize| -> (u32, Monomial) {
        let (c, m) = &b[j];
        let m = match shift {
            Some(s) => m.mul(s),
            None => m.clone(),
        };
        (field.mul(*c, factor), m)
    };
    let mut pending = if j < b.len() { Some(bterm(j)) } else { None };
    while i < a.len() || pending.is_some() {
        match (a.get(i), pending.as_ref()) {
            (Some(x), Some(y)) => match degrevlex(&x.1, &y.1) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(pending.take().unwrap());
                    j += 1;
                    pending = if j < b.len() { Some(bterm(j)) } else { None };
                }
                Ordering::Equal => {
                    let c = field.add(x.0, y.0);
                    if c != 0 {
                        out.push((c, x.1.clone()));
                    }
                    i += 1;
                    j += 1;
                    pending = if j < b.len() { Some(bterm(j)) } else { None };
                }
            },
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push(pending.take().unwrap());
                j += 1;
                pending = if j < b.len() { Some(bterm(j)) } else { None };
            }
            (None, None) => break,
        }
    }
    out.retain(|(c, _)| *c != 0);
    Polynomial { terms: out }
}

/// The ambient polynomial ring `F_p[x_1..x_n]`: a field and named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub field: PrimeField,
    pub names: Vec<String>,
}

impl PolyRing {
    pub fn new(p: u64, names: &[&str]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Self::with_field(field, names.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_field(field: PrimeField, names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidArgument("variable list is empty".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(Error::InvalidArgument(format!("`{n}` is not a valid variable name")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("variable `{n}` listed twice")));
            }
        }
        Ok(PolyRing { field, names })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::monomial(1, Monomial::variable(self.nvars(), i))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::constant(&self.field, self.nvars(), 1)
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        Polynomial::constant(&self.field, self.nvars(), c)
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.add(&self.field, b)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.sub(&self.field, b)
    }

    pub fn neg(&self, a: &Polynomial) -> Polynomial {
        a.neg(&self.field)
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul(&self.field, b)
    }

    pub fn pow(&self, a: &Polynomial, k: u64) -> Polynomial {
        a.pow(&self.field, self.nvars(), k)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Parser::new(self, text).parse_all()
    }

    pub fn format(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (c, m)) in f.terms().iter().enumerate() {
            let sc = self.field.signed(*c);
            let (neg, mag) = if sc < 0 { (true, -sc) } else { (false, sc) };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if m.is_one() {
                write!(s, "{mag}").unwrap();
            } else if mag == 1 {
                s.push_str(&mono);
            } else {
                write!(s, "{mag}*{mono}").unwrap();
            }
        }
        s
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a PolyRing, text: &'a str) -> Self {
        Parser { ring, src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Polynomial> {
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let f = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!("unexpected `{}`", self.src[self.pos] as char));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.unary()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let f = self.unary()?;
                Ok(self.ring.neg(&f))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected an exponent after `^`");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let k: u32 = match text.parse() {
                Ok(k) => k,
                Err(_) => return self.err("exponent too large"),
            };
            if base.is_monomial() {
                let (c, m) = &base.terms()[0];
                let m = m.pow(k)?;
                return Ok(Polynomial::monomial(self.ring.field.pow(*c, k as u64), m));
            }
            return Ok(self.ring.pow(&base, k as u64));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.ring.p() as u64;
                let mut v = 0u64;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = (v * 10 + (self.src[self.pos] - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(self.ring.constant(v as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(5, &["x", "y"]).unwrap()
    }

    #[test]
    fn parse_difference_of_squares() {
        let r = ring();
        let f = r.parse("x^2 - y^2").unwrap();
        assert_eq!(
            f.terms(),
            &[(1, Monomial::from_exponents(&[2, 0])), (4, Monomial::from_exponents(&[0, 2]))]
        );
    }

    #[test]
    fn parse_zero_and_commuted_product() {
        let r = ring();
        assert!(r.parse("0").unwrap().is_zero());
        assert_eq!(r.parse("y*x").unwrap(), r.parse("x*y").unwrap());
        assert!(r.parse("x - x").unwrap().is_zero());
    }

    #[test]
    fn parse_errors() {
        let r = ring();
        assert_eq!(r.parse("x + z"), Err(Error::UnknownVariable("z".into())));
        assert!(matches!(r.parse("x +"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse("(x"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(r.parse("x^"), Err(Error::Parse { .. })));
        assert!(matches!(r.parse(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_printing() {
        let r = ring();
        let f = r.parse("3*x^2*y - y^3 + 2").unwrap();
        assert_eq!(r.format(&f), "-2*x^2*y - y^3 + 2");
        assert_eq!(r.parse(&r.format(&f)).unwrap(), f);
    }

    #[test]
    fn parenthesised_powers_expand() {
        let r = ring();
        let f = r.parse("(x+y)^5").unwrap();
        assert_eq!(f, r.parse("x^5 + y^5").unwrap());
    }
}
