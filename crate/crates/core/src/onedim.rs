//! Decision procedures over one-dimensional rings.
//!
//! Everything here is exact. `H^0_m(R)` is the saturation of the zero ideal, so
//! `H^0_m(G) = H^0_m(R) G` for a free module `G` and the vanishing test for
//! `beta_i^F(M, R)` reduces to ideal membership of the entries of `phi_{i+1}`.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{beta_sequence, AsymptoticEstimate, Rational};
use crate::error::{Error, Result};
use crate::groebner::{ideal_quotient, saturate_at_irrelevant, Matrix, PresentationMode, SubmodulePresentation};
use crate::homology::{tor_length_from, Coefficients};
use crate::monomial::Monomial;
use crate::poly::{PolyRing, Polynomial};
use crate::resolution::{entries_in_ideal, resolve, syzygy_from, MinimalResolution};
use crate::ring::{Limits, QuotientRing};

/// Parameter candidates tried before giving up.
pub const PARAMETER_ATTEMPTS: usize = 50;
/// Largest exponent `n` tried for `x = y^n`.
pub const MAX_PARAMETER_EXPONENT: u32 = 32;

fn require_one_dim(ring: &QuotientRing) -> Result<()> {
    match ring.dimension() {
        1 => Ok(()),
        d => Err(Error::WrongDimension(d)),
    }
}

fn require_finite_length(m: &SubmodulePresentation) -> Result<()> {
    if m.dimension()? > 0 {
        return Err(Error::InfiniteLength);
    }
    Ok(())
}

fn zero_ideal(ring: &Arc<QuotientRing>) -> Result<SubmodulePresentation> {
    SubmodulePresentation::ideal(ring.clone(), Vec::new())
}

/// Minimal generators of `H^0_m(R) = (I : m^infinity) / I`, as elements of `S`. Empty when `R` has positive depth.
pub fn h0_ring(ring: &Arc<QuotientRing>) -> Result<Vec<Polynomial>> {
    let sat = saturate_at_irrelevant(&zero_ideal(ring)?)?;
    Ok(sat.minimal_generators()?.columns().iter().map(|c| c[0].clone()).filter(|f| !f.is_zero()).collect())
}

/// `depth R` for rings of dimension at most one.
pub fn depth(ring: &Arc<QuotientRing>) -> Result<usize> {
    match ring.dimension() {
        d if d <= 0 => Ok(0),
        1 => Ok(if h0_ring(ring)?.is_empty() { 1 } else { 0 }),
        d => Err(Error::WrongDimension(d)),
    }
}

fn resolution_for(m: &SubmodulePresentation, steps: usize) -> Result<MinimalResolution> {
    resolve(m, steps, true)
}

/// `true` iff every entry of `phi_{i+1}` lies in `h0`.
pub fn beta_vanishing_from(res: &MinimalResolution, h0: &[Polynomial], i: usize) -> Result<bool> {
    let phi = res.map(i + 1);
    if phi.is_zero() {
        return Ok(true);
    }
    if h0.is_empty() {
        return Ok(phi.reduce_mod(res.ring()).is_zero());
    }
    entries_in_ideal(res.ring(), &phi, h0)
}

/// Exact decision of `beta_i^F(M, R) = 0`: `im(phi_{i+1})` lies in `H^0_m(G_i)`.
pub fn decide_beta_vanishing(m: &SubmodulePresentation, i: usize) -> Result<bool> {
    require_one_dim(m.ring())?;
    require_finite_length(m)?;
    let res = resolution_for(m, i + 1)?;
    beta_vanishing_from(&res, &h0_ring(m.ring())?, i)
}

/// Twisted Tor lengths against one minimal prime.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTorReport {
    pub prime: Vec<Polynomial>,
    /// `(e, lambda(Tor_i(M, ^e(R/p))))`.
    pub lengths: Vec<(u32, u64)>,
}

impl PrimeTorReport {
    pub fn all_zero(&self) -> bool {
        self.lengths.iter().all(|&(_, l)| l == 0)
    }

    pub fn first_nonzero(&self) -> Option<u32> {
        self.lengths.iter().find(|&&(_, l)| l != 0).map(|&(e, _)| e)
    }
}

/// `lambda(Tor_i(M, ^e(R/p)))` for each supplied prime `p` and each `e` in range.
pub fn tor_vanishing_vs_minimal_primes(
    m: &SubmodulePresentation,
    i: usize,
    primes: &[Vec<Polynomial>],
    e_range: RangeInclusive<u32>,
) -> Result<Vec<PrimeTorReport>> {
    require_one_dim(m.ring())?;
    require_finite_length(m)?;
    let res = resolution_for(m, i + 1)?;
    tor_vs_primes_from(&res, i, primes, e_range)
}

fn tor_vs_primes_from(
    res: &MinimalResolution,
    i: usize,
    primes: &[Vec<Polynomial>],
    e_range: RangeInclusive<u32>,
) -> Result<Vec<PrimeTorReport>> {
    primes
        .iter()
        .map(|p| {
            let coeffs = Coefficients::Quotient(p.clone());
            let lengths = e_range
                .clone()
                .map(|e| Ok((e, tor_length_from(res, i, e, &coeffs)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(PrimeTorReport { prime: p.clone(), lengths })
        })
        .collect()
}

/// Which corollary decided finiteness of projective dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdRule {
    /// Depth one: vanishing at a single index `i >= 1` is equivalent to finite pd.
    CohenMacaulay,
    /// Depth zero: vanishing at `i` and `i + 1` forces finite pd.
    TwoConsecutive,
}

impl PdRule {
    pub fn describe(self) -> &'static str {
        match self {
            PdRule::CohenMacaulay => "depth-one: beta_i^F = 0 for one i >= 1 iff pd finite",
            PdRule::TwoConsecutive => "depth-zero: beta_i^F = beta_{i+1}^F = 0 implies pd finite",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdDecision {
    pub index: usize,
    pub finite: bool,
    pub rule: PdRule,
    /// Vanishing verdicts at `i` (and at `i + 1` under the depth-zero rule).
    pub vanishing: Vec<(usize, bool)>,
    /// Smallest `j` with `G_j = 0` in the minimal resolution, computed when `finite`.
    pub certificate: Option<usize>,
}

/// Decides `pd_R M < infinity` from the vanishing of Frobenius Betti numbers at `i` (and `i + 1`).
pub fn decide_finite_pd_1dim(m: &SubmodulePresentation, i: usize) -> Result<PdDecision> {
    require_one_dim(m.ring())?;
    require_finite_length(m)?;
    if i == 0 {
        return Err(Error::InvalidArgument("probe index must be at least 1".into()));
    }
    let h0 = h0_ring(m.ring())?;
    let res = resolution_for(m, i + 2)?;
    let (rule, probes) = if h0.is_empty() { (PdRule::CohenMacaulay, vec![i]) } else { (PdRule::TwoConsecutive, vec![i, i + 1]) };
    let vanishing = probes.iter().map(|&j| Ok((j, beta_vanishing_from(&res, &h0, j)?))).collect::<Result<Vec<_>>>()?;
    let finite = vanishing.iter().all(|&(_, v)| v);
    // pd M = depth R <= 1 when finite, so G_2 = 0 already
    let certificate = if finite { res.betti.iter().position(|&b| b == 0) } else { None };
    Ok(PdDecision { index: i, finite, rule, vanishing, certificate })
}

/// `x = y^n` with the defining properties checked by Groebner bases.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterChoice {
    pub y: Polynomial,
    pub n: u32,
    pub x: Polynomial,
    pub flags: ParameterFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ParameterFlags {
    /// `dim R/(y) = 0`.
    pub is_parameter: bool,
    /// `x H^0_m(R) = 0`.
    pub kills_h0: bool,
    /// `H^0_m(R) = (0 : x)`.
    pub h0_is_colon: bool,
    /// `x M = 0`; `None` when no module was supplied.
    pub kills_module: Option<bool>,
}

impl ParameterFlags {
    pub fn all(&self) -> bool {
        self.is_parameter && self.kills_h0 && self.h0_is_colon && self.kills_module.unwrap_or(true)
    }
}

fn annihilates_ideal(ring: &QuotientRing, x: &Polynomial, gens: &[Polynomial]) -> bool {
    let f = ring.field();
    gens.iter().all(|h| ring.is_zero(&x.mul(f, h)))
}

fn annihilates_module(m: &SubmodulePresentation, x: &Polynomial) -> Result<bool> {
    let ring = m.ring();
    let f = ring.field();
    let r = m.rank();
    match m.mode() {
        PresentationMode::Cokernel => {
            let span = SubmodulePresentation::submodule(ring.clone(), m.matrix().clone())?;
            for k in 0..r {
                let v: Vec<Polynomial> = (0..r).map(|i| if i == k { x.clone() } else { Polynomial::zero() }).collect();
                if !span.contains(&v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        PresentationMode::Submodule => {
            Ok(m.matrix().columns().iter().all(|c| c.iter().all(|e| ring.is_zero(&x.mul(f, e)))))
        }
    }
}

/// Recomputes every flag of `x = y^n` from scratch.
pub fn verify_parameter(
    ring: &Arc<QuotientRing>,
    y: &Polynomial,
    n: u32,
    h0: &[Polynomial],
    module: Option<&SubmodulePresentation>,
) -> Result<ParameterFlags> {
    let x = y.pow(ring.field(), ring.nvars(), n as u64);
    let is_parameter = match ring.quotient_by(std::slice::from_ref(y)) {
        Ok(q) => q.dimension() == ring.dimension() - 1,
        Err(Error::UnitIdeal) => false,
        Err(e) => return Err(e),
    };
    let kills_h0 = annihilates_ideal(ring, &x, h0);
    let h0_is_colon = if ring.is_zero(&x) {
        false
    } else {
        let colon = ideal_quotient(&zero_ideal(ring)?, &x)?;
        colon.same_span(&SubmodulePresentation::ideal(ring.clone(), h0.to_vec())?)?
    };
    let kills_module = module.map(|m| annihilates_module(m, &x)).transpose()?;
    Ok(ParameterFlags { is_parameter, kills_h0, h0_is_colon, kills_module })
}

fn random_linear_form(ring: &QuotientRing, rng: &mut ChaCha8Rng) -> Polynomial {
    let p = ring.p();
    let nv = ring.nvars();
    let terms = (0..nv).map(|i| (rng.gen_range(0..p), Monomial::variable(nv, i))).collect();
    Polynomial::from_terms(ring.field(), terms)
}

/// A homogeneous parameter `y` and the least `n` with `H^0_m(R) = (0 : y^n)` (and `y^n M = 0` when `annihilate` is given).
///
/// Variables are tried first, then seeded random linear forms.
pub fn choose_parameter(
    ring: &Arc<QuotientRing>,
    annihilate: Option<&SubmodulePresentation>,
    seed: u64,
) -> Result<ParameterChoice> {
    require_one_dim(ring)?;
    let h0 = h0_ring(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..PARAMETER_ATTEMPTS {
        let y = if attempt < ring.nvars() { ring.var(attempt) } else { random_linear_form(ring, &mut rng) };
        if y.is_zero() {
            continue;
        }
        if !verify_parameter(ring, &y, 1, &[], None)?.is_parameter {
            continue;
        }
        for n in 1..=MAX_PARAMETER_EXPONENT {
            let flags = verify_parameter(ring, &y, n, &h0, annihilate)?;
            if flags.all() {
                let x = y.pow(ring.field(), ring.nvars(), n as u64);
                return Ok(ParameterChoice { y, n, x, flags });
            }
        }
    }
    Err(Error::NoParameterFound(PARAMETER_ATTEMPTS))
}

/// Why the alternating-sum formula does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiGate {
    ZeroModule,
    InfiniteLength,
    IndexBelowTwo,
    FinitePd,
    SyzygyLength,
}

#[derive(Debug, Clone, PartialEq)]
pub enum XiOutcome {
    Inapplicable(XiGate),
    Evaluated {
        parameter: ParameterChoice,
        /// `lambda(Omega_{i+1})`.
        lhs: u64,
        /// `sum_{j=0}^{i} (-1)^{i-j+1} lambda(Tor_j(M, R/(x)))`.
        rhs: i64,
        tor_lengths: Vec<u64>,
    },
}

impl XiOutcome {
    pub fn holds(&self) -> Option<bool> {
        match self {
            XiOutcome::Inapplicable(_) => None,
            XiOutcome::Evaluated { lhs, rhs, .. } => Some(*lhs as i64 == *rhs),
        }
    }
}

/// Checks `lambda(Omega_{i+1})` against the alternating sum of `lambda(Tor_j(M, R/(x)))` for a suitable parameter `x`.
pub fn xi_alternating_sum_check(m: &SubmodulePresentation, i: usize, seed: u64) -> Result<XiOutcome> {
    require_one_dim(m.ring())?;
    let dim = m.dimension()?;
    if dim < 0 {
        return Ok(XiOutcome::Inapplicable(XiGate::ZeroModule));
    }
    if dim > 0 {
        return Ok(XiOutcome::Inapplicable(XiGate::InfiniteLength));
    }
    if i < 2 {
        return Ok(XiOutcome::Inapplicable(XiGate::IndexBelowTwo));
    }
    let res = resolution_for(m, i + 2)?;
    if res.betti.contains(&0) {
        return Ok(XiOutcome::Inapplicable(XiGate::FinitePd));
    }
    let Some(lhs) = syzygy_from(&res, i + 1)?.length else {
        return Ok(XiOutcome::Inapplicable(XiGate::SyzygyLength));
    };
    let parameter = choose_parameter(m.ring(), Some(m), seed)?;
    let coeffs = Coefficients::Quotient(vec![parameter.x.clone()]);
    let tor_lengths = (0..=i).map(|j| tor_length_from(&res, j, 0, &coeffs)).collect::<Result<Vec<_>>>()?;
    let rhs = tor_lengths
        .iter()
        .enumerate()
        .map(|(j, &t)| if (i - j + 1).is_multiple_of(2) { t as i64 } else { -(t as i64) })
        .sum();
    Ok(XiOutcome::Evaluated { parameter, lhs, rhs, tor_lengths })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "tor_length")]
pub enum LemmaOutcome {
    /// `Omega_{i+1}` has infinite length.
    Vacuous,
    Holds,
    Violated(u64),
}

/// `lambda(Tor_i(M, R/H^0_m(R)))` when `Omega_{i+1}` has finite length; it must vanish.
pub fn lemma_h0_check(m: &SubmodulePresentation, i: usize) -> Result<LemmaOutcome> {
    require_finite_length(m)?;
    if i == 0 {
        return Err(Error::InvalidArgument("index must be at least 1".into()));
    }
    let res = resolution_for(m, i + 1)?;
    lemma_h0_from(&res, &h0_ring(m.ring())?, i)
}

fn lemma_h0_from(res: &MinimalResolution, h0: &[Polynomial], i: usize) -> Result<LemmaOutcome> {
    if syzygy_from(res, i + 1)?.length.is_none() {
        return Ok(LemmaOutcome::Vacuous);
    }
    let coeffs = if h0.is_empty() { Coefficients::Ring } else { Coefficients::Quotient(h0.to_vec()) };
    Ok(match tor_length_from(res, i, 0, &coeffs)? {
        0 => LemmaOutcome::Holds,
        t => LemmaOutcome::Violated(t),
    })
}

/// Tri-state necessary condition for a one-dimensional ring to be Buchsbaum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuchsbaumFlag {
    /// `m H^0_m(R) = 0` with `H^0_m(R) != 0`.
    Holds,
    /// `H^0_m(R) = 0`.
    HoldsVacuously,
    Fails,
}

impl BuchsbaumFlag {
    pub fn holds(self) -> bool {
        self != BuchsbaumFlag::Fails
    }
}

/// Tests `m H^0_m(R) = 0`. Never asserts that `R` is Buchsbaum.
pub fn buchsbaum_flag(ring: &Arc<QuotientRing>) -> Result<BuchsbaumFlag> {
    require_one_dim(ring)?;
    let h0 = h0_ring(ring)?;
    if h0.is_empty() {
        return Ok(BuchsbaumFlag::HoldsVacuously);
    }
    let killed = (0..ring.nvars()).all(|v| annihilates_ideal(ring, &ring.var(v), &h0));
    Ok(if killed { BuchsbaumFlag::Holds } else { BuchsbaumFlag::Fails })
}

/// Minimal primes of a monomial ideal: the minimal sets of variables meeting every generator's support.
pub fn minimal_primes_monomial(poly: &PolyRing, gens: &[Polynomial]) -> Result<Vec<Vec<Polynomial>>> {
    let mut supports: Vec<Vec<usize>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if !g.is_monomial() {
            return Err(Error::NotMonomial(poly.format(g)));
        }
        let s = g.terms()[0].1.support();
        if s.is_empty() {
            return Err(Error::UnitIdeal);
        }
        supports.push(s);
    }
    let mut covers: Vec<Vec<usize>> = Vec::new();
    extend_covers(&supports, Vec::new(), &mut covers);
    covers.sort();
    covers.dedup();
    let minimal: Vec<Vec<usize>> = covers
        .iter()
        .filter(|c| !covers.iter().any(|o| o.len() < c.len() && o.iter().all(|v| c.contains(v))))
        .cloned()
        .collect();
    Ok(minimal.into_iter().map(|c| c.into_iter().map(|v| poly.var(v)).collect()).collect())
}

fn extend_covers(supports: &[Vec<usize>], chosen: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match supports.iter().find(|s| !s.iter().any(|v| chosen.contains(v))) {
        None => {
            let mut c = chosen;
            c.sort_unstable();
            out.push(c);
        }
        Some(s) => {
            for &v in s {
                let mut next = chosen.clone();
                next.push(v);
                extend_covers(supports, next, out);
            }
        }
    }
}

/// Minimal primes of `R` when its defining ideal is monomial.
pub fn ring_minimal_primes(ring: &QuotientRing) -> Result<Vec<Vec<Polynomial>>> {
    minimal_primes_monomial(ring.poly(), ring.ideal_basis())
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SurveyRow {
    pub index: usize,
    pub betti: usize,
    /// `-1` for the zero module.
    pub dimension: i64,
    pub length: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Passed,
    Vacuous,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SurveyCheck {
    pub law: &'static str,
    pub index: Option<usize>,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SyzygySurvey {
    pub ring_dimension: i64,
    pub rows: Vec<SurveyRow>,
    pub checks: Vec<SurveyCheck>,
}

impl SyzygySurvey {
    pub fn violations(&self) -> Vec<&SurveyCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Violated).collect()
    }

    pub fn checks_for(&self, law: &str) -> Vec<&SurveyCheck> {
        self.checks.iter().filter(|c| c.law == law).collect()
    }
}

/// Betti numbers, dimensions and lengths of `Omega_0 .. Omega_{i_max}` together with the syzygy laws they must satisfy.
pub fn syzygy_length_survey(m: &SubmodulePresentation, i_max: usize) -> Result<SyzygySurvey> {
    let ring = m.ring();
    let d = ring.dimension();
    let res = resolution_for(m, i_max + 1)?;
    let all_rows = (0..=i_max + 1)
        .map(|i| {
            let s = syzygy_from(&res, i)?;
            Ok(SurveyRow { index: i, betti: res.betti[i], dimension: s.dimension, length: s.length })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = all_rows[..=i_max].to_vec();
    let finite_m = rows[0].length.is_some();
    let mut checks = Vec::new();
    let check = |law, index, ok: bool, detail: String| SurveyCheck {
        law,
        index,
        status: if ok { CheckStatus::Passed } else { CheckStatus::Violated },
        detail,
    };
    let vacuous = |law, detail: &str| SurveyCheck { law, index: None, status: CheckStatus::Vacuous, detail: detail.into() };

    for row in &rows {
        let coherent = row.length.is_some() == (row.dimension <= 0);
        checks.push(check(
            "length-dimension",
            Some(row.index),
            coherent,
            format!("dim {} length {:?}", row.dimension, row.length),
        ));
    }
    if finite_m {
        for row in rows.iter().skip(1) {
            let ok = row.dimension == d || row.dimension <= 0;
            checks.push(check("syzygy-dimension", Some(row.index), ok, format!("dim Omega_{} = {} with d = {d}", row.index, row.dimension)));
        }
    } else {
        checks.push(vacuous("syzygy-dimension", "M has infinite length"));
    }

    let infinite_pd = |through: usize| all_rows.iter().take(through + 1).all(|r| r.betti > 0);
    if d == 1 && finite_m && i_max >= 3 && infinite_pd(i_max) {
        let ok = rows[1].dimension == 1 && rows[3].dimension == 1;
        checks.push(check(
            "odd-syzygy-dimension",
            None,
            ok,
            format!("dim Omega_1 = {}, dim Omega_3 = {}", rows[1].dimension, rows[3].dimension),
        ));
    } else {
        checks.push(vacuous("odd-syzygy-dimension", "requires d = 1, finite length, infinite pd and i_max >= 3"));
    }

    let h0 = if finite_m { h0_ring(ring)? } else { Vec::new() };
    let buchsbaum = if d == 1 { Some(buchsbaum_flag(ring)?) } else { None };
    let (mut one_dim_gated, mut lemma_gated, mut buchsbaum_gated) = (false, false, false);
    for i in 1..=i_max {
        if !finite_m || all_rows[i + 1].length.is_none() {
            continue;
        }
        lemma_gated = true;
        let outcome = lemma_h0_from(&res, &h0, i)?;
        checks.push(check("tor-modulo-h0", Some(i), !matches!(outcome, LemmaOutcome::Violated(_)), format!("{outcome:?}")));
        if d > 0 && infinite_pd(i_max + 1) && rows[i].betti >= rows[i - 1].betti {
            one_dim_gated = true;
            let ok = all_rows[i - 1].length.is_some() && d == 1;
            checks.push(check(
                "betti-growth",
                Some(i),
                ok,
                format!("beta_{i} = {} >= beta_{} = {}; Omega_{} length {:?}", rows[i].betti, i - 1, rows[i - 1].betti, i - 1, all_rows[i - 1].length),
            ));
        }
        if i >= 2 && infinite_pd(i_max + 1) && buchsbaum.is_some_and(|b| b.holds()) {
            buchsbaum_gated = true;
            let ok = all_rows[i - 1].betti == 0;
            checks.push(check("buchsbaum-pd", Some(i), ok, format!("beta_{} = {}", i - 1, all_rows[i - 1].betti)));
        }
    }
    if !lemma_gated {
        checks.push(vacuous("tor-modulo-h0", "no row with finite-length Omega_{i+1}"));
    }
    if !one_dim_gated {
        checks.push(vacuous("betti-growth", "no row meets the hypotheses"));
    }
    if !buchsbaum_gated {
        checks.push(vacuous("buchsbaum-pd", "no row meets the hypotheses"));
    }
    Ok(SyzygySurvey { ring_dimension: d, rows, checks })
}

/// The equivalent vanishing conditions at one index, evaluated side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosisReport {
    pub index: usize,
    /// `im(phi_{i+1})` lies in `H^0_m(G_i)`.
    pub condition_i: bool,
    /// Sampled Tor vanishing against each minimal prime.
    pub condition_iii: Vec<PrimeTorReport>,
    pub beta_estimate: AsymptoticEstimate,
    /// The conditions agree with each other and with the estimator.
    pub consistent: bool,
    pub pd: Option<PdDecision>,
    pub buchsbaum: BuchsbaumFlag,
}

/// Evaluates conditions (i), (iii) and the beta estimate for `M` at index `i`.
pub fn diagnose(
    m: &SubmodulePresentation,
    i: usize,
    primes: &[Vec<Polynomial>],
    e_range: RangeInclusive<u32>,
) -> Result<DiagnosisReport> {
    require_one_dim(m.ring())?;
    require_finite_length(m)?;
    let res = resolution_for(m, i + 2)?;
    let h0 = h0_ring(m.ring())?;
    let condition_i = beta_vanishing_from(&res, &h0, i)?;
    let condition_iii = tor_vs_primes_from(&res, i, primes, e_range.clone())?;
    let beta_estimate = beta_sequence(m, i, e_range)?;
    let tor_agrees = condition_iii.iter().all(|r| r.all_zero()) == condition_i;
    let estimate_agrees = match (beta_estimate.stabilized, beta_estimate.estimate) {
        (true, Some(est)) => (est == Rational::from_integer(0)) == condition_i,
        _ => true,
    };
    let pd = if i >= 1 { Some(decide_finite_pd_1dim(m, i)?) } else { None };
    Ok(DiagnosisReport {
        index: i,
        condition_i,
        condition_iii,
        beta_estimate,
        consistent: tor_agrees && estimate_agrees,
        pd,
        buchsbaum: buchsbaum_flag(m.ring())?,
    })
}

/// A seeded random ring with a module over it.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub seed: u64,
    pub ring: Arc<QuotientRing>,
    pub module: SubmodulePresentation,
}

fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn go(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial::from_exponents(prefix));
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            go(nvars, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}

fn random_form(ring: &QuotientRing, rng: &mut ChaCha8Rng, deg: u32, max_terms: usize) -> Polynomial {
    let monos = monomials_of_degree(ring.nvars(), deg);
    let k = rng.gen_range(1..=max_terms);
    let terms = (0..k).map(|_| (rng.gen_range(1..ring.p()), monos[rng.gen_range(0..monos.len())].clone())).collect();
    Polynomial::from_terms(ring.field(), terms)
}

/// Draws a ring `F_p[x_1..x_n] / J` and a module `coker(A)`.
///
/// `J` has one to five monomial generators of degree two or three; `A` has one
/// or two rows in degree 0 and one to three columns of degree one or two, each
/// entry a form with at most two terms. Draws are repeated (from the same
/// stream) until `dim R = ring_dim` and `M` is nonzero of finite length.
pub fn random_instance(seed: u64, p: u64, nvars: usize, ring_dim: i64) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = PolyRing::new(p, &(0..nvars).map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect::<Vec<_>>())?;
    for _ in 0..10_000 {
        let ngens = rng.gen_range(1..=5);
        let gens: Vec<Polynomial> = (0..ngens)
            .map(|_| {
                let monos = monomials_of_degree(nvars, rng.gen_range(2..=3));
                Polynomial::monomial(1, monos[rng.gen_range(0..monos.len())].clone())
            })
            .collect();
        let ring = QuotientRing::new(poly.clone(), gens, Limits::default())?;
        if ring.dimension() != ring_dim {
            continue;
        }
        for _ in 0..20 {
            let rows = rng.gen_range(1..=2);
            let cols = rng.gen_range(1..=3);
            let columns: Vec<Vec<Polynomial>> = (0..cols)
                .map(|_| {
                    let deg = rng.gen_range(1..=2);
                    (0..rows).map(|_| if rng.gen_bool(0.7) { random_form(&ring, &mut rng, deg, 2) } else { Polynomial::zero() }).collect()
                })
                .collect();
            let a = Matrix::new(vec![0; rows], columns.iter().map(|c| c.iter().filter_map(|e| e.degree()).next().unwrap_or(1) as i64).collect(), columns)?;
            let module = SubmodulePresentation::cokernel(ring.clone(), a)?;
            let dim = module.dimension()?;
            if dim == 0 {
                return Ok(RandomInstance { seed, ring, module });
            }
        }
    }
    Err(Error::InvalidArgument(format!("no instance of dimension {ring_dim} drawn for seed {seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{quotient, r1, r2, r3, r5, r5_module, residue_field};
    use crate::ring::make_ring;

    fn polys(ring: &QuotientRing, gens: &[&str]) -> Vec<Polynomial> {
        gens.iter().map(|g| ring.parse(g).unwrap()).collect()
    }

    #[test]
    fn h0_of_fixtures() {
        let r = r1(5).unwrap();
        assert_eq!(h0_ring(&r).unwrap(), polys(&r, &["x"]));
        assert!(h0_ring(&r3(5).unwrap()).unwrap().is_empty());
        assert!(h0_ring(&r2(5).unwrap()).unwrap().is_empty());
        assert_eq!(depth(&r).unwrap(), 0);
        assert_eq!(depth(&r3(5).unwrap()).unwrap(), 1);
    }

    #[test]
    fn beta_vanishing_decisions() {
        let r = r3(5).unwrap();
        assert!(decide_beta_vanishing(&quotient(&r, &["x+y"]).unwrap(), 1).unwrap());
        let r = r1(5).unwrap();
        let k = residue_field(&r);
        assert!(!decide_beta_vanishing(&k, 1).unwrap());
        assert!(!decide_beta_vanishing(&k, 0).unwrap());
        assert!(decide_beta_vanishing(&residue_field(&r2(5).unwrap()), 1).unwrap());
        assert_eq!(decide_beta_vanishing(&quotient(&r, &["x"]).unwrap(), 1), Err(Error::InfiniteLength));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let r = make_ring(5, &["x", "y"], &[]).unwrap();
        assert_eq!(decide_beta_vanishing(&residue_field(&r), 1), Err(Error::WrongDimension(2)));
    }

    #[test]
    fn tor_against_primes() {
        let r = r1(5).unwrap();
        let k = residue_field(&r);
        let primes = ring_minimal_primes(&r).unwrap();
        assert_eq!(primes, vec![polys(&r, &["x"])]);
        let rep = tor_vanishing_vs_minimal_primes(&k, 1, &primes, 0..=2).unwrap();
        assert_eq!(rep[0].first_nonzero(), Some(0));
        let r = r3(5).unwrap();
        let m = quotient(&r, &["x+y"]).unwrap();
        let primes = ring_minimal_primes(&r).unwrap();
        let rep = tor_vanishing_vs_minimal_primes(&m, 1, &primes, 0..=2).unwrap();
        assert!(rep.iter().all(|p| p.all_zero()));
        let rep = tor_vanishing_vs_minimal_primes(&m, 0, &primes, 0..=1).unwrap();
        assert!(rep.iter().all(|p| !p.all_zero()));
    }

    #[test]
    fn finite_pd_decisions() {
        let r = r3(5).unwrap();
        let d = decide_finite_pd_1dim(&quotient(&r, &["x+y"]).unwrap(), 1).unwrap();
        assert!(d.finite);
        assert_eq!(d.rule, PdRule::CohenMacaulay);
        assert_eq!(d.certificate, Some(2));
        let d = decide_finite_pd_1dim(&residue_field(&r1(5).unwrap()), 1).unwrap();
        assert!(!d.finite);
        assert_eq!(d.rule, PdRule::TwoConsecutive);
        let d = decide_finite_pd_1dim(&residue_field(&r2(5).unwrap()), 1).unwrap();
        assert!(d.finite);
        assert_eq!(d.certificate, Some(2));
    }

    #[test]
    fn parameters() {
        let r = r1(5).unwrap();
        let c = choose_parameter(&r, None, 7).unwrap();
        assert_eq!((c.y.clone(), c.n), (r.parse("y").unwrap(), 1));
        assert!(c.flags.all());
        let r = r3(5).unwrap();
        let c = choose_parameter(&r, None, 7).unwrap();
        assert!(c.flags.all());
        let r = r5(101).unwrap();
        let c = choose_parameter(&r, None, 7).unwrap();
        assert_eq!(c.y, r.parse("y").unwrap());
        let colon = ideal_quotient(&zero_ideal(&r).unwrap(), &c.y).unwrap();
        let expected = SubmodulePresentation::ideal(r.clone(), polys(&r, &["u", "v", "z^2"])).unwrap();
        assert!(colon.same_span(&expected).unwrap());
    }

    #[test]
    fn parameter_annihilating_a_module() {
        let r = r1(5).unwrap();
        let m = quotient(&r, &["x", "y^3"]).unwrap();
        let c = choose_parameter(&r, Some(&m), 1).unwrap();
        assert_eq!(c.n, 3);
        assert_eq!(c.flags.kills_module, Some(true));
    }

    #[test]
    fn xi_gates() {
        let r = r3(5).unwrap();
        assert_eq!(
            xi_alternating_sum_check(&quotient(&r, &["x+y"]).unwrap(), 2, 0).unwrap(),
            XiOutcome::Inapplicable(XiGate::FinitePd)
        );
        let r = r1(5).unwrap();
        assert_eq!(xi_alternating_sum_check(&residue_field(&r), 2, 0).unwrap(), XiOutcome::Inapplicable(XiGate::SyzygyLength));
        let zero = quotient(&r, &["1"]).unwrap();
        assert_eq!(xi_alternating_sum_check(&zero, 2, 0).unwrap(), XiOutcome::Inapplicable(XiGate::ZeroModule));
    }

    #[test]
    fn lemma_h0() {
        let r = r1(5).unwrap();
        assert_eq!(lemma_h0_check(&residue_field(&r), 1).unwrap(), LemmaOutcome::Vacuous);
        let r = r3(5).unwrap();
        assert_eq!(lemma_h0_check(&quotient(&r, &["x+y"]).unwrap(), 1).unwrap(), LemmaOutcome::Holds);
    }

    #[test]
    fn buchsbaum() {
        assert_eq!(buchsbaum_flag(&r1(5).unwrap()).unwrap(), BuchsbaumFlag::Holds);
        assert_eq!(buchsbaum_flag(&r3(5).unwrap()).unwrap(), BuchsbaumFlag::HoldsVacuously);
        let r = make_ring(5, &["x", "y"], &["x^3", "x^2*y^2"]).unwrap();
        assert_eq!(buchsbaum_flag(&r).unwrap(), BuchsbaumFlag::Fails);
    }

    #[test]
    fn monomial_primes() {
        let r = make_ring(5, &["x", "y"], &[]).unwrap();
        let p = |g: &[&str]| minimal_primes_monomial(r.poly(), &polys(&r, g)).unwrap();
        assert_eq!(p(&["x^2", "x*y"]), vec![polys(&r, &["x"])]);
        assert_eq!(p(&["x*y"]), vec![polys(&r, &["x"]), polys(&r, &["y"])]);
        assert_eq!(p(&["x"]), vec![polys(&r, &["x"])]);
        assert!(matches!(minimal_primes_monomial(r.poly(), &polys(&r, &["x+y"])), Err(Error::NotMonomial(_))));
    }

    #[test]
    fn survey_residue_field_over_r1() {
        let r = r1(5).unwrap();
        let s = syzygy_length_survey(&residue_field(&r), 3).unwrap();
        assert_eq!(s.rows.iter().map(|r| r.dimension).collect::<Vec<_>>(), vec![0, 1, 1, 1]);
        assert!(s.violations().is_empty(), "{:?}", s.violations());
        assert_eq!(s.checks_for("odd-syzygy-dimension")[0].status, CheckStatus::Passed);
    }

    #[test]
    fn survey_r5_module() {
        let r = r5(101).unwrap();
        let s = syzygy_length_survey(&r5_module(&r).unwrap(), 3).unwrap();
        assert!(s.rows[0].length.is_none());
        assert!(s.rows[1].length.is_some());
        assert!(s.rows[3].length.is_some());
        assert!(s.violations().is_empty());
    }

    #[test]
    fn survey_quotient_by_embedded_component() {
        let r = r1(5).unwrap();
        let s = syzygy_length_survey(&quotient(&r, &["x"]).unwrap(), 2).unwrap();
        assert_eq!(s.rows[1].length, Some(1));
        assert_eq!(s.rows[2].length, None);
    }

    #[test]
    fn diagnosis_is_consistent() {
        let r = r1(2).unwrap();
        let primes = ring_minimal_primes(&r).unwrap();
        let rep = diagnose(&residue_field(&r), 1, &primes, 0..=3).unwrap();
        assert!(!rep.condition_i);
        assert!(rep.consistent);
        let r = r3(2).unwrap();
        let primes = ring_minimal_primes(&r).unwrap();
        let rep = diagnose(&quotient(&r, &["x+y"]).unwrap(), 1, &primes, 0..=3).unwrap();
        assert!(rep.condition_i);
        assert!(rep.consistent);
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(11, 3, 2, 1).unwrap();
        let b = random_instance(11, 3, 2, 1).unwrap();
        assert_eq!(a.module.matrix(), b.module.matrix());
        assert_eq!(a.ring.dimension(), 1);
        assert_eq!(a.module.dimension().unwrap(), 0);
    }
}
