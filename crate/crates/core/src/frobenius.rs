//! Frobenius bracket powers of polynomials, ideals, matrices and complexes.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::Matrix;
use crate::poly::Polynomial;
use crate::resolution::FreeComplex;

/// `q = p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct BracketLevel {
    pub e: u32,
    pub q: u32,
}

impl BracketLevel {
    pub fn new(p: u32, e: u32) -> Result<Self> {
        let q = p.checked_pow(e).ok_or(Error::Overflow)?;
        Ok(BracketLevel { e, q })
    }
}

/// `f^q`, computed termwise: exponents scale by `q` and `c^q = c` in `F_p`.
pub fn frobenius_power(field: &PrimeField, f: &Polynomial, level: BracketLevel) -> Result<Polynomial> {
    if level.q == 1 {
        return Ok(f.clone());
    }
    let mut terms = Vec::with_capacity(f.len());
    for (c, m) in f.terms() {
        terms.push((field.pow(*c, level.q as u64), m.scaled(level.q)?));
    }
    // scaling preserves the order, so the terms stay sorted
    Ok(Polynomial::from_sorted_terms(terms))
}

/// Generator-wise bracket power.
pub fn bracket_ideal(field: &PrimeField, gens: &[Polynomial], level: BracketLevel) -> Result<Vec<Polynomial>> {
    gens.iter().map(|g| frobenius_power(field, g, level)).collect()
}

/// Entry-wise bracket power; row and column degrees scale by `q`.
pub fn bracket_matrix(field: &PrimeField, a: &Matrix, level: BracketLevel) -> Result<Matrix> {
    let q = level.q as i64;
    let mut columns = Vec::with_capacity(a.ncols());
    for col in a.columns() {
        columns.push(col.iter().map(|f| frobenius_power(field, f, level)).collect::<Result<Vec<_>>>()?);
    }
    let rows = a.row_degrees().iter().map(|d| d * q).collect();
    let cols = a.col_degrees().iter().map(|d| d * q).collect();
    Ok(Matrix::with_parts(rows, cols, columns))
}

/// The complex `(G_j, phi_j^[q])`, checked to be a complex modulo `I`.
pub fn twist_complex(c: &FreeComplex, level: BracketLevel) -> Result<FreeComplex> {
    let ring = c.ring();
    let maps = c
        .maps()
        .iter()
        .map(|m| bracket_matrix(ring.field(), m, level).map(|b| b.reduce_mod(ring)))
        .collect::<Result<Vec<_>>>()?;
    let degrees = c.degrees().iter().map(|ds| ds.iter().map(|d| d * level.q as i64).collect()).collect();
    let twisted = FreeComplex::new(ring.clone(), degrees, maps)?;
    if !twisted.is_complex()? {
        return Err(Error::LiftFailure);
    }
    Ok(twisted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    #[test]
    fn freshmans_dream() {
        let r = PolyRing::new(5, &["x", "y"]).unwrap();
        let lvl = BracketLevel::new(5, 1).unwrap();
        let f = r.parse("x + y").unwrap();
        assert_eq!(frobenius_power(&r.field, &f, lvl).unwrap(), r.pow(&f, 5));
        let g = r.parse("x^2 - y^2").unwrap();
        assert_eq!(r.format(&frobenius_power(&r.field, &g, lvl).unwrap()), "x^10 - y^10");
        assert_eq!(frobenius_power(&r.field, &r.one(), lvl).unwrap(), r.one());
        assert!(frobenius_power(&r.field, &Polynomial::zero(), lvl).unwrap().is_zero());
    }

    #[test]
    fn overflow_is_reported() {
        let r = PolyRing::new(2, &["x"]).unwrap();
        let f = r.parse("x^3").unwrap();
        let lvl = BracketLevel::new(2, 31).unwrap();
        assert_eq!(frobenius_power(&r.field, &f, lvl), Err(Error::Overflow));
        assert_eq!(BracketLevel::new(5, 14), Err(Error::Overflow));
    }
}
