//! Buchberger's algorithm on sparse vectors of a graded free module.
//!
//! Vectors are stored as flat term lists `(position, monomial, coefficient)` sorted
//! descending in the position-over-term extension of degrevlex (lower position is
//! larger). Everything here assumes homogeneous input.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{degrevlex, Monomial};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    pub pos: u32,
    pub mono: Monomial,
    pub coef: u32,
}

#[inline]
pub(crate) fn cmp_pot(pa: u32, a: &Monomial, pb: u32, b: &Monomial) -> Ordering {
    pb.cmp(&pa).then_with(|| degrevlex(a, b))
}

/// Sparse module element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct SVec {
    pub terms: Vec<Term>,
}

impl SVec {
    pub fn zero() -> Self {
        SVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn from_components(components: &[Polynomial]) -> Self {
        let mut terms = Vec::new();
        for (k, f) in components.iter().enumerate() {
            for (c, m) in f.terms() {
                terms.push(Term { pos: k as u32, mono: m.clone(), coef: *c });
            }
        }
        // components are already in ascending position, each sorted descending
        SVec { terms }
    }

    pub fn from_polynomial_at(f: &Polynomial, pos: u32) -> Self {
        SVec {
            terms: f.terms().iter().map(|(c, m)| Term { pos, mono: m.clone(), coef: *c }).collect(),
        }
    }

    pub fn to_components(&self, rank: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(u32, Monomial)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            parts[t.pos as usize].push((t.coef, t.mono.clone()));
        }
        parts.into_iter().map(Polynomial::from_sorted_terms).collect()
    }

    /// Degree of the leading term, including the row twist of its position.
    pub fn degree(&self, rowdeg: &[i64]) -> Option<i64> {
        self.lead().map(|t| t.mono.degree() as i64 + rowdeg[t.pos as usize])
    }

    pub fn is_homogeneous(&self, rowdeg: &[i64]) -> bool {
        match self.degree(rowdeg) {
            None => true,
            Some(d) => self.terms.iter().all(|t| t.mono.degree() as i64 + rowdeg[t.pos as usize] == d),
        }
    }

    pub fn scale(&self, field: &PrimeField, c: u32) -> SVec {
        if c == 0 {
            return SVec::zero();
        }
        SVec {
            terms: self
                .terms
                .iter()
                .map(|t| Term { pos: t.pos, mono: t.mono.clone(), coef: field.mul(t.coef, c) })
                .collect(),
        }
    }

    pub fn monic(&self, field: &PrimeField) -> SVec {
        match self.lead() {
            None => SVec::zero(),
            Some(t) if t.coef == 1 => self.clone(),
            Some(t) => self.scale(field, field.inv(t.coef)),
        }
    }

    /// Shifts every position by `delta` (positions must stay non-negative).
    pub fn shift_positions(&self, delta: i64) -> SVec {
        SVec {
            terms: self
                .terms
                .iter()
                .map(|t| Term { pos: (t.pos as i64 + delta) as u32, mono: t.mono.clone(), coef: t.coef })
                .collect(),
        }
    }

    /// Keeps terms with position in `range`.
    pub fn restrict(&self, lo: u32, hi: u32) -> SVec {
        SVec { terms: self.terms.iter().filter(|t| t.pos >= lo && t.pos < hi).cloned().collect() }
    }
}

/// `a + c * shift * b`, merged in term order.
pub(crate) fn axpy(field: &PrimeField, a: &[Term], c: u32, shift: &Monomial, b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    if c == 0 {
        out.extend_from_slice(a);
        return out;
    }
    let trivial = shift.is_one();
    let (mut i, mut j) = (0usize, 0usize);
    let mut cur: Option<Term> = None;
    let next_b = |j: usize| -> Option<Term> {
        b.get(j).map(|t| Term {
            pos: t.pos,
            mono: if trivial { t.mono.clone() } else { t.mono.mul(shift) },
            coef: field.mul(t.coef, c),
        })
    };
    if j < b.len() {
        cur = next_b(j);
    }
    loop {
        match (a.get(i), cur.as_ref()) {
            (Some(x), Some(y)) => match cmp_pot(x.pos, &x.mono, y.pos, &y.mono) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(cur.take().unwrap());
                    j += 1;
                    cur = next_b(j);
                }
                Ordering::Equal => {
                    let s = field.add(x.coef, y.coef);
                    if s != 0 {
                        out.push(Term { pos: x.pos, mono: x.mono.clone(), coef: s });
                    }
                    i += 1;
                    j += 1;
                    cur = next_b(j);
                }
            },
            (Some(_), None) => {
                out.extend_from_slice(&a[i..]);
                break;
            }
            (None, Some(_)) => {
                out.push(cur.take().unwrap());
                j += 1;
                cur = next_b(j);
            }
            (None, None) => break,
        }
    }
    out
}

#[derive(Debug, Clone)]
struct Elem {
    v: SVec,
    pos: u32,
    lm: Monomial,
    mask: u64,
    /// `false` once another element's leading term divides this one's.
    in_g: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pair {
    deg: i64,
    lcm: Monomial,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    // BinaryHeap is a max-heap: smallest degree first, then smallest lcm, then indices
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .deg
            .cmp(&self.deg)
            .then_with(|| degrevlex(&other.lcm, &self.lcm))
            .then_with(|| other.j.cmp(&self.j))
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Incremental Buchberger state with the Gebauer-Moeller pair criteria.
#[derive(Debug, Clone)]
pub(crate) struct Builder {
    field: PrimeField,
    rank: usize,
    rowdeg: Vec<i64>,
    basis: Vec<Elem>,
    pairs: BinaryHeap<Pair>,
    max_elements: usize,
}

impl Builder {
    pub fn new(field: PrimeField, rowdeg: Vec<i64>, max_elements: usize) -> Self {
        Builder { field, rank: rowdeg.len(), rowdeg, basis: Vec::new(), pairs: BinaryHeap::new(), max_elements }
    }



    fn find_reducer(&self, pos: u32, mono: &Monomial, mask: u64) -> Option<&Elem> {
        self.basis
            .iter()
            .find(|g| g.in_g && g.pos == pos && g.mask & !mask == 0 && g.lm.divides(mono))
    }

    /// Full reduction against the current basis.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut out = Vec::new();
        let mut cur: Vec<Term> = v.terms.clone();
        let mut start = 0usize;
        while start < cur.len() {
            let t = &cur[start];
            match self.find_reducer(t.pos, &t.mono, t.mono.divmask()) {
                Some(g) => {
                    let shift = g.lm.quotient_of(&t.mono);
                    let c = self.field.neg(t.coef);
                    cur = axpy(&self.field, &cur[start + 1..], c, &shift, &g.v.terms[1..]);
                    start = 0;
                }
                None => {
                    out.push(cur[start].clone());
                    start += 1;
                }
            }
        }
        SVec { terms: out }
    }

    /// Reduces only while the leading term lies in a position `< stop_pos`;
    /// returns `None` if such a leading term is irreducible.
    #[allow(dead_code)]
    pub fn reduce_head_block(&self, v: &SVec, stop_pos: u32) -> Option<SVec> {
        let mut cur: Vec<Term> = v.terms.clone();
        loop {
            let Some(t) = cur.first() else { return Some(SVec::zero()) };
            if t.pos >= stop_pos {
                return Some(SVec { terms: cur });
            }
            let g = self.find_reducer(t.pos, &t.mono, t.mono.divmask())?;
            let shift = g.lm.quotient_of(&t.mono);
            let c = self.field.neg(t.coef);
            cur = axpy(&self.field, &cur[1..], c, &shift, &g.v.terms[1..]);
        }
    }

    /// Adds a generator; returns `true` if it enlarged the span seen so far.
    pub fn add(&mut self, v: &SVec) -> Result<bool> {
        debug_assert!(v.is_homogeneous(&self.rowdeg));
        let r = self.reduce(v);
        if r.is_zero() {
            return Ok(false);
        }
        self.insert(r.monic(&self.field))?;
        Ok(true)
    }

    /// Inserts an already reduced, monic element and updates the pair set.
    fn insert(&mut self, v: SVec) -> Result<()> {
        if self.basis.len() >= self.max_elements {
            return Err(Error::ResourceBound(self.max_elements));
        }
        let lt = v.lead().unwrap().clone();
        let t = self.basis.len();
        let h = Elem { pos: lt.pos, mask: lt.mono.divmask(), lm: lt.mono.clone(), in_g: true, v };

        // criterion B on existing pairs
        if !self.pairs.is_empty() {
            let basis = &self.basis;
            let old: Vec<Pair> = std::mem::take(&mut self.pairs).into_vec();
            let kept: Vec<Pair> = old
                .into_iter()
                .filter(|p| {
                    if basis[p.i].pos != h.pos || !h.lm.divides(&p.lcm) {
                        return true;
                    }
                    let li = basis[p.i].lm.lcm(&h.lm);
                    let lj = basis[p.j].lm.lcm(&h.lm);
                    li == p.lcm || lj == p.lcm
                })
                .collect();
            self.pairs = BinaryHeap::from(kept);
        }

        // new pairs with criteria M and F (and the product criterion for ideals)
        let mut cands: Vec<(Monomial, usize, bool)> = Vec::new();
        for (i, g) in self.basis.iter().enumerate() {
            if !g.in_g || g.pos != h.pos {
                continue;
            }
            let coprime = self.rank == 1 && g.lm.is_coprime(&h.lm);
            cands.push((g.lm.lcm(&h.lm), i, coprime));
        }
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a != b && keep[b] && cands[b].0.divides(&cands[a].0) && cands[b].0 != cands[a].0 {
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut chosen: Vec<(Monomial, usize, bool)> = Vec::new();
        for (k, c) in cands.into_iter().enumerate() {
            if !keep[k] {
                continue;
            }
            if let Some(existing) = chosen.iter_mut().find(|e| e.0 == c.0) {
                existing.2 |= c.2;
            } else {
                chosen.push(c);
            }
        }
        for (lcm, i, coprime) in chosen {
            if coprime {
                continue;
            }
            let d = lcm.degree() as i64 + self.rowdeg[h.pos as usize];
            self.pairs.push(Pair { deg: d, lcm, i, j: t });
        }

        for g in self.basis.iter_mut() {
            if g.in_g && g.pos == h.pos && h.mask & !g.mask == 0 && h.lm.divides(&g.lm) {
                g.in_g = false;
            }
        }
        self.basis.push(h);
        Ok(())
    }

    fn spoly(&self, p: &Pair) -> SVec {
        let gi = &self.basis[p.i];
        let gj = &self.basis[p.j];
        let si = gi.lm.quotient_of(&p.lcm);
        let sj = gj.lm.quotient_of(&p.lcm);
        let left: Vec<Term> = axpy(&self.field, &[], 1, &si, &gi.v.terms[1..]);
        SVec { terms: axpy(&self.field, &left, self.field.neg(1), &sj, &gj.v.terms[1..]) }
    }

    /// Processes pairs until none of degree `<= bound` remain (all pairs when `None`).
    pub fn run(&mut self, bound: Option<i64>) -> Result<()> {
        while let Some(p) = self.pairs.peek() {
            if let Some(b) = bound {
                if p.deg > b {
                    break;
                }
            }
            let p = self.pairs.pop().unwrap();
            let s = self.spoly(&p);
            if s.is_zero() {
                continue;
            }
            let r = self.reduce(&s);
            if !r.is_zero() {
                self.insert(r.monic(&self.field))?;
            }
        }
        Ok(())
    }


    /// Reduced Groebner basis sorted ascending by leading term. Call after `run(None)`.
    pub fn reduced(&self) -> Vec<SVec> {
        let minimal: Vec<&Elem> = self.basis.iter().filter(|g| g.in_g).collect();
        let mut out: Vec<SVec> = Vec::with_capacity(minimal.len());
        for (k, g) in minimal.iter().enumerate() {
            // tail-reduce against the other minimal elements
            let mut cur: Vec<Term> = g.v.terms[1..].to_vec();
            let mut done: Vec<Term> = vec![g.v.terms[0].clone()];
            let mut start = 0usize;
            while start < cur.len() {
                let t = &cur[start];
                let mask = t.mono.divmask();
                let red = minimal.iter().enumerate().find(|(o, h)| {
                    *o != k && h.pos == t.pos && h.mask & !mask == 0 && h.lm.divides(&t.mono)
                });
                match red {
                    Some((_, h)) => {
                        let shift = h.lm.quotient_of(&t.mono);
                        let c = self.field.neg(t.coef);
                        cur = axpy(&self.field, &cur[start + 1..], c, &shift, &h.v.terms[1..]);
                        start = 0;
                    }
                    None => {
                        done.push(cur[start].clone());
                        start += 1;
                    }
                }
            }
            out.push(SVec { terms: done });
        }
        out.sort_by(|a, b| {
            let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
            cmp_pot(x.pos, &x.mono, y.pos, &y.mono)
        });
        out
    }

}

/// One-shot reduced Groebner basis of homogeneous generators.
pub(crate) fn reduced_basis(
    field: PrimeField,
    rowdeg: &[i64],
    gens: &[SVec],
    max_elements: usize,
) -> Result<Vec<SVec>> {
    let mut b = Builder::new(field, rowdeg.to_vec(), max_elements);
    let mut sorted: Vec<&SVec> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by_key(|g| g.degree(rowdeg).unwrap());
    for g in sorted {
        b.add(g)?;
    }
    b.run(None)?;
    Ok(b.reduced())
}

/// Buchberger criterion: every same-position S-vector reduces to zero.
pub(crate) fn is_groebner(field: PrimeField, rowdeg: &[i64], basis: &[SVec]) -> bool {
    let mut b = Builder::new(field, rowdeg.to_vec(), usize::MAX);
    for g in basis {
        let lt = g.lead().unwrap();
        b.basis.push(Elem {
            v: g.monic(&field),
            pos: lt.pos,
            lm: lt.mono.clone(),
            mask: lt.mono.divmask(),
            in_g: true,
        });
    }
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if b.basis[i].pos != b.basis[j].pos {
                continue;
            }
            let lcm = b.basis[i].lm.lcm(&b.basis[j].lm);
            let p = Pair { deg: 0, lcm, i, j };
            let s = b.spoly(&p);
            if !b.reduce(&s).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Normal forms with respect to a fixed Groebner basis.
#[derive(Debug, Clone, Default)]
pub(crate) struct Reducer {
    elems: Vec<(u32, Monomial, u64, SVec)>,
}

impl Reducer {
    pub fn new(field: &PrimeField, basis: &[SVec]) -> Self {
        let elems = basis
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                let g = g.monic(field);
                let lt = g.lead().unwrap().clone();
                (lt.pos, lt.mono.clone(), lt.mono.divmask(), g)
            })
            .collect();
        Reducer { elems }
    }

    fn find(&self, t: &Term) -> Option<&(u32, Monomial, u64, SVec)> {
        let mask = t.mono.divmask();
        self.elems.iter().find(|(p, m, k, _)| *p == t.pos && k & !mask == 0 && m.divides(&t.mono))
    }

    pub fn reduce(&self, field: &PrimeField, v: &SVec) -> SVec {
        let mut out = Vec::new();
        let mut cur: Vec<Term> = v.terms.clone();
        let mut start = 0usize;
        while start < cur.len() {
            match self.find(&cur[start]) {
                Some((_, lm, _, g)) => {
                    let t = &cur[start];
                    let shift = lm.quotient_of(&t.mono);
                    let c = field.neg(t.coef);
                    cur = axpy(field, &cur[start + 1..], c, &shift, &g.terms[1..]);
                    start = 0;
                }
                None => {
                    out.push(cur[start].clone());
                    start += 1;
                }
            }
        }
        SVec { terms: out }
    }

    /// Head-reduces while the leading position is `< stop_pos`; `None` if stuck there.
    pub fn reduce_head_block(&self, field: &PrimeField, v: &SVec, stop_pos: u32) -> Option<SVec> {
        let mut cur: Vec<Term> = v.terms.clone();
        loop {
            let Some(t) = cur.first() else { return Some(SVec::zero()) };
            if t.pos >= stop_pos {
                return Some(SVec { terms: cur });
            }
            let (_, lm, _, g) = self.find(t)?;
            let shift = lm.quotient_of(&t.mono);
            let c = field.neg(t.coef);
            cur = axpy(field, &cur[1..], c, &shift, &g.terms[1..]);
        }
    }
}
