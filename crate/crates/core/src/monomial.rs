//! Exponent vectors and the degree reverse lexicographic order.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Exps = SmallVec<[u32; 8]>;

/// A monomial `x^a` with its total degree cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars), degree: 0 }
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial { degree: exps.iter().sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// `true` when `self` divides `other`.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Monomial { exps, degree: other.degree - self.degree }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { degree: exps.iter().sum(), exps }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect();
        Monomial { degree: exps.iter().sum(), exps }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Scales every exponent by `q`, failing on 32-bit overflow.
    pub fn scaled(&self, q: u32) -> Result<Monomial> {
        let mut exps = Exps::with_capacity(self.exps.len());
        for &a in &self.exps {
            exps.push(a.checked_mul(q).ok_or(Error::Overflow)?);
        }
        let degree = self.degree.checked_mul(q).ok_or(Error::Overflow)?;
        Ok(Monomial { exps, degree })
    }

    pub fn pow(&self, k: u32) -> Result<Monomial> {
        self.scaled(k)
    }

    /// Bit `i` set when variable `i` occurs (variables past 63 share the top bit).
    #[inline]
    pub fn divmask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &a) in self.exps.iter().enumerate() {
            if a > 0 {
                m |= 1 << i.min(63);
            }
        }
        m
    }

    /// Variables occurring in the monomial.
    pub fn support(&self) -> Vec<usize> {
        self.exps.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i).collect()
    }
}

/// Degree reverse lexicographic comparison: higher degree is larger; ties are
/// broken by the last variable where the exponents differ, smaller exponent wins.
pub fn degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree.cmp(&b.degree) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.exps.iter().zip(&b.exps).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(self, other)
    }
}

/// The monomial order in use: degrevlex on the variables, extended to free
/// modules position-over-term, where a lower position index is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLexPot,
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        degrevlex(a, b)
    }

    pub fn compare_module(&self, pa: usize, a: &Monomial, pb: usize, b: &Monomial) -> Ordering {
        pb.cmp(&pa).then_with(|| degrevlex(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_basics() {
        // x > y > z in degree one
        assert_eq!(degrevlex(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(degrevlex(&m(&[0, 1, 0]), &m(&[0, 0, 1])), Ordering::Greater);
        // x*z < y^2 in degrevlex
        assert_eq!(degrevlex(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(degrevlex(&m(&[0, 0, 3]), &m(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert!(m(&[1, 1]).divides(&a));
        assert!(!b.divides(&a));
        assert_eq!(m(&[1, 1]).quotient_of(&a), m(&[1, 0]));
    }

    #[test]
    fn scaling_overflow_is_an_error() {
        assert_eq!(m(&[u32::MAX / 2 + 1]).scaled(2), Err(Error::Overflow));
    }
}
