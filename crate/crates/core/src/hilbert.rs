//! Hilbert series of graded quotients of free modules by monomial submodules.
//!
//! A series is stored as `N(t) / (1 - t)^n` with `N` a Laurent polynomial.

use crate::monomial::Monomial;

/// Laurent polynomial `sum c_k t^(k + offset)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    pub offset: i64,
    pub coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { offset: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly { offset: 0, coeffs: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn normalize(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            return LaurentPoly::zero();
        }
        self.coeffs.drain(..lead);
        self.offset += lead as i64;
        self
    }

    pub fn coeff(&self, k: i64) -> i64 {
        let i = k - self.offset;
        if i < 0 {
            0
        } else {
            self.coeffs.get(i as usize).copied().unwrap_or(0)
        }
    }

    pub fn add(&self, other: &LaurentPoly, sign: i64) -> LaurentPoly {
        if self.is_zero() {
            return other.scale(sign);
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.coeffs.len() as i64).max(other.offset + other.coeffs.len() as i64);
        let coeffs = (lo..hi).map(|k| self.coeff(k) + sign * other.coeff(k)).collect();
        LaurentPoly { offset: lo, coeffs }.normalize()
    }

    pub fn scale(&self, c: i64) -> LaurentPoly {
        LaurentPoly { offset: self.offset, coeffs: self.coeffs.iter().map(|x| x * c).collect() }.normalize()
    }

    pub fn shift(&self, s: i64) -> LaurentPoly {
        LaurentPoly { offset: self.offset + s, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly { offset: self.offset + other.offset, coeffs }.normalize()
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Exact division by `1 - t`, if possible.
    pub fn div_one_minus_t(&self) -> Option<LaurentPoly> {
        if self.is_zero() || self.eval_one() != 0 {
            return None;
        }
        // N = (1 - t) Q  iff  Q is the sequence of prefix sums of N
        let mut q = Vec::with_capacity(self.coeffs.len());
        let mut acc = 0i64;
        for &c in &self.coeffs[..self.coeffs.len() - 1] {
            acc += c;
            q.push(acc);
        }
        Some(LaurentPoly { offset: self.offset, coeffs: q }.normalize())
    }
}

/// `sum_t dim_k M_t * s^t` in the form `numerator / (1 - s)^nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: LaurentPoly,
    pub nvars: usize,
}

impl HilbertSeries {
    pub fn zero(nvars: usize) -> Self {
        HilbertSeries { numerator: LaurentPoly::zero(), nvars }
    }

    pub fn add(&self, other: &HilbertSeries) -> HilbertSeries {
        HilbertSeries { numerator: self.numerator.add(&other.numerator, 1), nvars: self.nvars }
    }

    pub fn sub(&self, other: &HilbertSeries) -> HilbertSeries {
        HilbertSeries { numerator: self.numerator.add(&other.numerator, -1), nvars: self.nvars }
    }

    /// Reduced form `h(t) / (1 - t)^d` with `h(1) != 0`; `None` for the zero series.
    pub fn reduced(&self) -> Option<(LaurentPoly, usize)> {
        if self.numerator.is_zero() {
            return None;
        }
        let mut h = self.numerator.clone();
        let mut d = self.nvars;
        while d > 0 {
            match h.div_one_minus_t() {
                Some(q) => {
                    h = q;
                    d -= 1;
                }
                None => break,
            }
        }
        Some((h, d))
    }

    /// Krull dimension (pole order at 1); `-1` for the zero module.
    pub fn dimension(&self) -> i64 {
        self.reduced().map(|(_, d)| d as i64).unwrap_or(-1)
    }

    /// Total dimension over the field, or `None` when infinite.
    pub fn length(&self) -> Option<u64> {
        match self.reduced() {
            None => Some(0),
            Some((h, 0)) => Some(h.eval_one() as u64),
            Some(_) => None,
        }
    }

    /// Multiplicity (value of the reduced numerator at 1).
    pub fn multiplicity(&self) -> i64 {
        self.reduced().map(|(h, _)| h.eval_one()).unwrap_or(0)
    }

    /// Value of the Hilbert function in degree `t`.
    pub fn hilbert_function(&self, t: i64) -> i64 {
        // coefficient of s^t in N(s) * sum_k binom(k + n - 1, n - 1) s^k
        let n = self.nvars as i64;
        let mut acc = 0i64;
        for (i, &c) in self.numerator.coeffs.iter().enumerate() {
            let k = t - (self.numerator.offset + i as i64);
            if k < 0 || c == 0 {
                continue;
            }
            acc += c * binom(k + n - 1, n - 1);
        }
        acc
    }
}

fn binom(a: i64, b: i64) -> i64 {
    if b < 0 || a < b {
        return if b == -1 && a == -1 { 1 } else { 0 };
    }
    let b = b.min(a - b);
    let mut r: i128 = 1;
    for i in 0..b {
        r = r * (a - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator of the Hilbert series of `S / (gens)` over `(1 - t)^nvars`.
pub fn monomial_numerator(gens: &[Monomial], nvars: usize) -> LaurentPoly {
    numerator_rec(minimalize(gens.to_vec()), nvars)
}

fn numerator_rec(gens: Vec<Monomial>, nvars: usize) -> LaurentPoly {
    if gens.is_empty() {
        return LaurentPoly::one();
    }
    if gens.iter().any(|g| g.is_one()) {
        return LaurentPoly::zero();
    }
    // pure powers in distinct variables (after minimalization) give a product formula
    if gens.iter().all(|g| g.support().len() == 1) {
        let mut acc = LaurentPoly::one();
        for g in &gens {
            let d = g.degree() as usize;
            let mut f = vec![0i64; d + 1];
            f[0] = 1;
            f[d] = -1;
            acc = acc.mul(&LaurentPoly { offset: 0, coeffs: f });
        }
        return acc;
    }
    // pivot on the variable occurring most often in mixed generators
    let mut counts = vec![0usize; nvars];
    for g in gens.iter().filter(|g| g.support().len() > 1) {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let var = (0..nvars).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
    let mut exps: Vec<u32> = gens.iter().map(|g| g.exponents()[var]).filter(|&a| a > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2].max(1);
    let mut pe = vec![0u32; nvars];
    pe[var] = e;
    let pivot = Monomial::from_exponents(&pe);

    let mut plus = gens.clone();
    plus.push(pivot.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut ex = g.exponents().to_vec();
            ex[var] = ex[var].saturating_sub(e);
            Monomial::from_exponents(&ex)
        })
        .collect();
    let a = numerator_rec(minimalize(plus), nvars);
    let b = numerator_rec(minimalize(colon), nvars).shift(e as i64);
    a.add(&b, 1)
}

/// Hilbert series of `F / L` for a free module `F` with generator degrees `rowdeg`
/// and monomial submodule `L` given position by position.
pub fn module_series(per_position: &[Vec<Monomial>], rowdeg: &[i64], nvars: usize) -> HilbertSeries {
    let mut num = LaurentPoly::zero();
    for (k, gens) in per_position.iter().enumerate() {
        num = num.add(&monomial_numerator(gens, nvars).shift(rowdeg[k]), 1);
    }
    HilbertSeries { numerator: num, nvars }
}

/// Krull dimension of `S / (gens)` via maximal independent sets; `-1` if `1` is a generator.
pub fn independent_set_dimension(gens: &[Monomial], nvars: usize) -> i64 {
    if gens.iter().any(|g| g.is_one()) {
        return -1;
    }
    let supports: Vec<u64> = gens.iter().map(|g| g.divmask()).collect();
    let mut best = 0i64;
    for set in 0u64..(1u64 << nvars) {
        let size = set.count_ones() as i64;
        if size <= best {
            continue;
        }
        // independent: no generator is supported inside the set
        if supports.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn fat_point_length() {
        // S/(x^2, xy, y^3) has basis 1, x, y, y^2
        let hs = module_series(&[vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 3])]], &[0], 2);
        assert_eq!(hs.length(), Some(4));
        assert_eq!(hs.dimension(), 0);
        assert_eq!(hs.hilbert_function(1), 2);
        assert_eq!(hs.hilbert_function(2), 1);
        assert_eq!(hs.hilbert_function(3), 0);
    }

    #[test]
    fn line_with_embedded_point() {
        // S/(x^2, xy): dimension 1, multiplicity 1, h(t) = 1 + t
        let gens = vec![m(&[2, 0]), m(&[1, 1])];
        let hs = module_series(std::slice::from_ref(&gens), &[0], 2);
        assert_eq!(hs.dimension(), 1);
        assert_eq!(hs.multiplicity(), 1);
        assert_eq!(hs.length(), None);
        assert_eq!(hs.hilbert_function(0), 1);
        assert_eq!(hs.hilbert_function(1), 2);
        assert_eq!(hs.hilbert_function(5), 1);
        assert_eq!(independent_set_dimension(&gens, 2), 1);
    }

    #[test]
    fn shifted_free_module() {
        let hs = module_series(&[vec![], vec![m(&[1])]], &[0, -2], 1);
        assert_eq!(hs.dimension(), 1);
        assert_eq!(hs.hilbert_function(-2), 1);
        assert_eq!(hs.hilbert_function(-1), 0);
        assert_eq!(hs.hilbert_function(0), 1);
    }
}
