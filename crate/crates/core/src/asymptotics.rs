//! Sequences `lambda(..)/q^d` over Frobenius levels and their limit estimates.
//!
//! The estimate is the first difference `(raw_{k+1} - raw_k) / (q_{k+1}^d - q_k^d)`
//! at the last two levels. It is flagged stabilized when the last two differences
//! agree exactly. For `d = 0` the estimate is the last raw value, stabilized when
//! the last two raw values agree.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frobenius::{bracket_ideal, BracketLevel};
use crate::groebner::SubmodulePresentation;
use crate::homology::{ext_length_from, tor_length_from, Coefficients};
use crate::poly::Polynomial;
use crate::resolution::resolve;
use crate::ring::QuotientRing;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Hk,
    Beta,
    Mu,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub e: u32,
    pub q: u64,
    pub raw: u64,
    pub normalized: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticEstimate {
    pub kind: SequenceKind,
    pub index: usize,
    pub d: i64,
    pub levels: Vec<Level>,
    pub estimate: Option<Rational>,
    pub stabilized: bool,
}

fn qpow(q: u64, d: i64) -> i128 {
    (q as i128).pow(d.max(0) as u32)
}

impl AsymptoticEstimate {
    /// Builds the estimate from `(e, q, raw)` triples in any order.
    pub fn from_raw(kind: SequenceKind, index: usize, d: i64, mut raw: Vec<(u32, u64, u64)>) -> Self {
        raw.sort_by_key(|r| r.0);
        let levels: Vec<Level> = raw
            .iter()
            .map(|&(e, q, v)| Level { e, q, raw: v, normalized: Rational::new(v as i128, qpow(q, d)) })
            .collect();
        let mut est = AsymptoticEstimate { kind, index, d, levels, estimate: None, stabilized: false };
        if est.levels.len() >= 2 {
            if d <= 0 {
                let n = est.levels.len();
                est.estimate = Some(est.levels[n - 1].normalized);
                est.stabilized = est.levels[n - 1].raw == est.levels[n - 2].raw;
            } else {
                let diffs = est.differences();
                est.estimate = diffs.last().copied();
                est.stabilized = diffs.len() >= 2 && diffs[diffs.len() - 1] == diffs[diffs.len() - 2];
            }
        }
        est
    }

    /// First differences between consecutive levels.
    pub fn differences(&self) -> Vec<Rational> {
        self.levels
            .windows(2)
            .map(|w| {
                let num = w[1].raw as i128 - w[0].raw as i128;
                let den = qpow(w[1].q, self.d) - qpow(w[0].q, self.d);
                if den == 0 {
                    Rational::zero()
                } else {
                    Rational::new(num, den)
                }
            })
            .collect()
    }

    pub fn estimate_f64(&self) -> Option<f64> {
        self.estimate.and_then(|r| r.to_f64())
    }

    pub fn raw_values(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.raw).collect()
    }
}

fn levels(p: u32, range: RangeInclusive<u32>) -> Result<Vec<BracketLevel>> {
    range.map(|e| BracketLevel::new(p, e)).collect()
}

/// `lambda(R / (J^[q] + I))` over `e` in `range`.
pub fn hk_sequence(ring: &Arc<QuotientRing>, j: &[Polynomial], range: RangeInclusive<u32>) -> Result<AsymptoticEstimate> {
    let base = SubmodulePresentation::quotient_module(ring.clone(), j.to_vec())?;
    if base.dimension()? > 0 {
        return Err(Error::NotPrimary);
    }
    let raw = levels(ring.p(), range)?
        .into_par_iter()
        .map(|lvl| {
            let jq = bracket_ideal(ring.field(), j, lvl)?;
            let len = SubmodulePresentation::quotient_module(ring.clone(), jq)?.length()?.ok_or(Error::NotPrimary)?;
            Ok((lvl.e, lvl.q as u64, len))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticEstimate::from_raw(SequenceKind::Hk, 0, ring.dimension(), raw))
}

/// `lambda(Tor_i(M, ^e N)) / q^d`.
pub fn beta_sequence_with(
    m: &SubmodulePresentation,
    i: usize,
    range: RangeInclusive<u32>,
    coefficients: &Coefficients,
) -> Result<AsymptoticEstimate> {
    if m.dimension()? > 0 {
        return Err(Error::InfiniteLength);
    }
    let ring = m.ring().clone();
    let res = resolve(m, i + 1, true)?;
    let raw = levels(ring.p(), range)?
        .into_par_iter()
        .map(|lvl| Ok((lvl.e, lvl.q as u64, tor_length_from(&res, i, lvl.e, coefficients)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticEstimate::from_raw(SequenceKind::Beta, i, ring.dimension(), raw))
}

/// `lambda(Tor_i(M, ^e R)) / q^d`.
pub fn beta_sequence(m: &SubmodulePresentation, i: usize, range: RangeInclusive<u32>) -> Result<AsymptoticEstimate> {
    beta_sequence_with(m, i, range, &Coefficients::Ring)
}

/// `lambda(Ext^i(M, ^e R)) / q^d`.
pub fn mu_sequence(m: &SubmodulePresentation, i: usize, range: RangeInclusive<u32>) -> Result<AsymptoticEstimate> {
    if m.dimension()? > 0 {
        return Err(Error::InfiniteLength);
    }
    let ring = m.ring().clone();
    let res = resolve(m, i + 1, true)?;
    let raw = levels(ring.p(), range)?
        .into_par_iter()
        .map(|lvl| Ok((lvl.e, lvl.q as u64, ext_length_from(&res, i, lvl.e)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticEstimate::from_raw(SequenceKind::Mu, i, ring.dimension(), raw))
}

/// A prime of maximal dimension with the length of `R` localized there.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPrime {
    pub generators: Vec<Polynomial>,
    pub multiplicity: u64,
}

/// Data for the nonzerodivisor inequality: `beta_i(R) <= beta_i(R/(x))`.
#[derive(Debug, Clone)]
pub struct NzdData {
    pub x: Polynomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawCheck {
    pub law: String,
    pub index: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn law(&self, name: &str) -> Vec<&LawCheck> {
        self.checks.iter().filter(|c| c.law == name).collect()
    }
}

/// Options for `verify_laws`.
#[derive(Debug, Clone)]
pub struct LawOptions {
    pub indices: Vec<usize>,
    pub range: RangeInclusive<u32>,
    pub tolerance: Rational,
    pub primes: Option<Vec<WeightedPrime>>,
    pub additivity: bool,
    pub nzd: Option<NzdData>,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            indices: vec![0, 1],
            range: 1..=4,
            tolerance: Rational::new(1, 20),
            primes: None,
            additivity: false,
            nzd: None,
        }
    }
}

fn fmt_est(e: &AsymptoticEstimate) -> String {
    match e.estimate {
        Some(r) => format!("{r}"),
        None => "n/a".into(),
    }
}

/// Checks the Bass vanishing, Tor/Ext duality, additivity over maximal-dimensional
/// primes and the nonzerodivisor inequality at estimator level.
pub fn verify_laws(m: &SubmodulePresentation, opts: &LawOptions) -> Result<LawReport> {
    let ring = m.ring().clone();
    let d = ring.dimension().max(0) as usize;
    let tol = opts.tolerance;
    let mut report = LawReport::default();
    let est = |e: &AsymptoticEstimate| e.estimate.unwrap_or_else(Rational::zero);

    for i in 0..d {
        let mu = mu_sequence(m, i, opts.range.clone())?;
        report.checks.push(LawCheck {
            law: "bass".into(),
            index: i,
            passed: est(&mu).abs() <= tol,
            detail: format!("mu_{i} estimate {}", fmt_est(&mu)),
        });
    }

    for &i in &opts.indices {
        let beta = beta_sequence(m, i, opts.range.clone())?;
        let mu = mu_sequence(m, d + i, opts.range.clone())?;
        report.checks.push(LawCheck {
            law: "duality".into(),
            index: i,
            passed: (est(&beta) - est(&mu)).abs() <= tol,
            detail: format!("beta_{i} {} vs mu_{} {}", fmt_est(&beta), d + i, fmt_est(&mu)),
        });

        if opts.additivity {
            let primes = opts.primes.as_ref().ok_or(Error::MissingMultiplicities)?;
            let diffs_r = beta.differences();
            let mut diffs_sum = vec![Rational::zero(); diffs_r.len()];
            let mut est_sum = Rational::zero();
            for wp in primes {
                let b = beta_sequence_with(m, i, opts.range.clone(), &Coefficients::Quotient(wp.generators.clone()))?;
                for (acc, x) in diffs_sum.iter_mut().zip(b.differences()) {
                    *acc += x * Rational::from_integer(wp.multiplicity as i128);
                }
                est_sum += est(&b) * Rational::from_integer(wp.multiplicity as i128);
            }
            let termwise = diffs_r == diffs_sum;
            report.checks.push(LawCheck {
                law: "additivity".into(),
                index: i,
                passed: (est(&beta) - est_sum).abs() <= tol && termwise,
                detail: format!(
                    "beta_{i} {} vs weighted sum {}; differences {:?} vs {:?}",
                    fmt_est(&beta),
                    est_sum,
                    diffs_r.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    diffs_sum.iter().map(|r| r.to_string()).collect::<Vec<_>>()
                ),
            });
        }

        if let Some(nzd) = &opts.nzd {
            let kr = SubmodulePresentation::residue_field(ring.clone());
            let quotient = ring.quotient_by(std::slice::from_ref(&nzd.x))?;
            let kq = SubmodulePresentation::residue_field(quotient);
            let br = beta_sequence(&kr, i, opts.range.clone())?;
            let bq = beta_sequence(&kq, i, opts.range.clone())?;
            report.checks.push(LawCheck {
                law: "nzd".into(),
                index: i,
                passed: est(&br) <= est(&bq) + tol,
                detail: format!("beta_{i}(R) {} vs beta_{i}(R/(x)) {}", fmt_est(&br), fmt_est(&bq)),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn max_ideal(r: &QuotientRing) -> Vec<Polynomial> {
        (0..r.nvars()).map(|i| r.var(i)).collect()
    }

    #[test]
    fn hk_of_r1() {
        let r = r1(5).unwrap();
        let s = hk_sequence(&r, &max_ideal(&r), 1..=3).unwrap();
        assert_eq!(s.raw_values(), vec![6, 26, 126]);
        assert_eq!(s.levels[0].normalized, Rational::new(6, 5));
        assert_eq!(s.estimate, Some(Rational::from_integer(1)));
        assert!(s.stabilized);
    }

    #[test]
    fn hk_of_r4_is_two() {
        let r = r4(3).unwrap();
        let s = hk_sequence(&r, &max_ideal(&r), 1..=3).unwrap();
        assert_eq!(s.raw_values(), vec![6, 18, 54]);
        assert_eq!(s.estimate, Some(Rational::from_integer(2)));
    }

    #[test]
    fn beta_zero_matches_hk() {
        let r = r1(3).unwrap();
        let k = residue_field(&r);
        let b = beta_sequence(&k, 0, 1..=3).unwrap();
        let h = hk_sequence(&r, &max_ideal(&r), 1..=3).unwrap();
        assert_eq!(b.raw_values(), h.raw_values());
    }

    #[test]
    fn mu_zero_over_r1() {
        let r = r1(5).unwrap();
        let s = mu_sequence(&residue_field(&r), 0, 1..=3).unwrap();
        assert_eq!(s.raw_values(), vec![1, 1, 1]);
        assert_eq!(s.estimate, Some(Rational::zero()));
    }

    #[test]
    fn not_primary_is_rejected() {
        let r = r1(5).unwrap();
        let x = vec![r.var(0)];
        assert_eq!(hk_sequence(&r, &x, 1..=2).unwrap_err(), Error::NotPrimary);
    }
}
