//! Standard-graded quotient rings `R = S / I`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::engine::{reduced_basis, Reducer, SVec};
use crate::hilbert::{independent_set_dimension, module_series, HilbertSeries};
use crate::monomial::Monomial;
use crate::poly::{PolyRing, Polynomial};

/// Resource limits applied to every Groebner computation over a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_gb_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_gb_size: 250_000 }
    }
}

/// `S / I` with the reduced degrevlex Groebner basis of `I` cached.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    poly: PolyRing,
    generators: Vec<Polynomial>,
    gb: Vec<Polynomial>,
    lead: Vec<Monomial>,
    reducer: Reducer,
    dim: i64,
    limits: Limits,
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.gb == other.gb
    }
}

/// Parses `gens` in `F_p[vars]` and builds the quotient ring.
pub fn make_ring(p: u64, vars: &[&str], gens: &[&str]) -> Result<Arc<QuotientRing>> {
    let poly = PolyRing::new(p, vars)?;
    let gens = gens.iter().map(|g| poly.parse(g)).collect::<Result<Vec<_>>>()?;
    QuotientRing::new(poly, gens, Limits::default())
}

impl QuotientRing {
    pub fn new(poly: PolyRing, generators: Vec<Polynomial>, limits: Limits) -> Result<Arc<Self>> {
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &generators {
            if !g.is_homogeneous() {
                return Err(Error::NotHomogeneous(poly.format(g)));
            }
            if g.is_unit() {
                return Err(Error::UnitIdeal);
            }
        }
        let field = poly.field;
        let vecs: Vec<SVec> = generators.iter().map(|g| SVec::from_polynomial_at(g, 0)).collect();
        let basis = reduced_basis(field, &[0], &vecs, limits.max_gb_size)?;
        let gb: Vec<Polynomial> = basis.iter().map(|v| v.to_components(1).remove(0)).collect();
        let lead: Vec<Monomial> = gb.iter().map(|g| g.leading().unwrap().1.clone()).collect();
        let dim = independent_set_dimension(&lead, poly.nvars());
        Ok(Arc::new(QuotientRing { reducer: Reducer::new(&field, &basis), poly, generators, gb, lead, dim, limits }))
    }

    pub fn poly(&self) -> &PolyRing {
        &self.poly
    }

    pub fn field(&self) -> &PrimeField {
        &self.poly.field
    }

    pub fn p(&self) -> u32 {
        self.poly.p()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Reduced Groebner basis of `I`, ascending by leading monomial.
    pub fn ideal_basis(&self) -> &[Polynomial] {
        &self.gb
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.lead
    }

    /// Krull dimension of `R`.
    pub fn dimension(&self) -> i64 {
        self.dim
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Same ring with other resource limits.
    pub fn with_limits(&self, limits: Limits) -> Arc<QuotientRing> {
        Arc::new(QuotientRing { limits, ..self.clone() })
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        module_series(std::slice::from_ref(&self.lead), &[0], self.nvars())
    }

    /// Normal form modulo `I`.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let v = SVec::from_polynomial_at(f, 0);
        self.reducer.reduce(self.field(), &v).to_components(1).remove(0)
    }

    pub fn reduce_vector(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        v.iter().map(|f| self.reduce(f)).collect()
    }

    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.poly.var(i)
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        self.poly.parse(text)
    }

    pub fn format(&self, f: &Polynomial) -> String {
        self.poly.format(f)
    }

    /// `S / (I + extra)` over the same variables.
    pub fn quotient_by(&self, extra: &[Polynomial]) -> Result<Arc<QuotientRing>> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        QuotientRing::new(self.poly.clone(), gens, self.limits)
    }

    /// `true` when both rings are built over the same `S` and have the same `I`.
    pub fn same_ring(&self, other: &QuotientRing) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_with_embedded_point() {
        let r = make_ring(5, &["x", "y"], &["x^2", "x*y"]).unwrap();
        assert_eq!(r.dimension(), 1);
        assert_eq!(r.ideal_basis().len(), 2);
        let f = r.parse("x^2*y + 3*x*y^2 + y^3").unwrap();
        assert_eq!(r.format(&r.reduce(&f)), "y^3");
    }

    #[test]
    fn rejects_unit_and_inhomogeneous() {
        assert_eq!(make_ring(5, &["x"], &["1"]).unwrap_err(), Error::UnitIdeal);
        assert!(matches!(make_ring(5, &["x", "y"], &["x^2 - y"]), Err(Error::NotHomogeneous(_))));
        assert!(matches!(make_ring(4, &["x"], &[]), Err(Error::NotPrime(4))));
    }

    #[test]
    fn groebner_of_twisted_cubic_has_three_quadrics() {
        let r = make_ring(32003, &["x", "y", "z", "w"], &["x*z - y^2", "y*w - z^2", "x*w - y*z"]).unwrap();
        assert_eq!(r.ideal_basis().len(), 3);
        assert_eq!(r.dimension(), 2);
        assert_eq!(r.hilbert_series().multiplicity(), 3);
    }
}
