//! Command dispatch and report assembly.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use fbetti::asymptotics::{beta_sequence, hk_sequence, mu_sequence, verify_laws, AsymptoticEstimate, LawOptions};
use fbetti::frobenius::{twist_complex, BracketLevel};
use fbetti::homology::{degreewise_homology_oracle, finite_pd_certificate, twisted_tor_vanishing};
use fbetti::onedim::{
    choose_parameter, decide_beta_vanishing, diagnose, h0_ring, lemma_h0_check, ring_minimal_primes,
    syzygy_length_survey, xi_alternating_sum_check, XiOutcome,
};
use fbetti::resolution::{resolve, FreeComplex};
use fbetti::{Error, Limits, Matrix, Polynomial, QuotientRing, SubmodulePresentation};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{sha256_hex, Cache, CacheKind, CacheLookup};
use crate::problem::{parse_problem, ProblemError, ProblemFile};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Resolve,
    Hk,
    Beta,
    Mu,
    Diagnose1,
    Syz,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Resolve => "resolve",
            Command::Hk => "hk",
            Command::Beta => "beta",
            Command::Mu => "mu",
            Command::Diagnose1 => "diagnose1",
            Command::Syz => "syz",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub idx: usize,
    pub emax: u32,
    pub steps: usize,
    pub exact: bool,
    pub degree_bound: Option<i64>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub max_gb_size: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            idx: 0,
            emax: 3,
            steps: 3,
            exact: false,
            degree_bound: None,
            threads: None,
            cache_dir: None,
            seed: 0,
            max_gb_size: Limits::default().max_gb_size,
        }
    }
}

/// Exit-code classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INAPPLICABLE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        CliError { code: EXIT_PARSE, message: e.to_string() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotPrime(_) | Error::NotHomogeneous(_) | Error::Parse { .. } | Error::UnknownVariable(_) | Error::UnitIdeal => EXIT_PARSE,
            Error::ResourceBound(_) | Error::Overflow => EXIT_RESOURCE,
            Error::LiftFailure => 1,
            _ => EXIT_INAPPLICABLE,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RingEcho {
    pub characteristic: u32,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
    pub dimension: i64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CacheEvent {
    pub kind: &'static str,
    pub status: &'static str,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub cache: Vec<CacheEvent>,
}

/// The report written for every command. Field order is fixed and payload maps are key-sorted.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportEnvelope {
    pub version: &'static str,
    pub command: &'static str,
    pub input_digest: String,
    pub ring: RingEcho,
    pub result: Value,
    pub timing: Timing,
    pub warnings: Vec<String>,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Output of a run: the envelope and, for sequence commands, the CSV table.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub envelope: ReportEnvelope,
    pub csv: Option<String>,
}

struct Ctx {
    problem: ProblemFile,
    ring: Arc<QuotientRing>,
    opts: RunOptions,
    digest: String,
    cache: Option<Cache>,
    events: Vec<CacheEvent>,
    warnings: Vec<String>,
}

impl Ctx {
    fn fmt(&self, f: &Polynomial) -> String {
        self.ring.format(f)
    }

    fn fmt_all(&self, fs: &[Polynomial]) -> Vec<String> {
        fs.iter().map(|f| self.fmt(f)).collect()
    }

    fn module(&self) -> Result<SubmodulePresentation, CliError> {
        Ok(self.problem.build_module(&self.ring)?)
    }

    fn cache_get(&mut self, kind: CacheKind) -> Option<String> {
        let cache = self.cache.as_ref()?;
        match cache.get(&self.digest, kind) {
            CacheLookup::Hit(body) => {
                self.events.push(CacheEvent { kind: kind.name(), status: "hit" });
                Some(body)
            }
            CacheLookup::Miss => {
                self.events.push(CacheEvent { kind: kind.name(), status: "miss" });
                None
            }
            CacheLookup::Corrupt(why) => {
                self.events.push(CacheEvent { kind: kind.name(), status: "corrupt" });
                self.warnings.push(format!("{why}; recomputed"));
                None
            }
        }
    }

    fn cache_put(&mut self, kind: CacheKind, body: &str) {
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.put(&self.digest, kind, body) {
                self.warnings.push(format!("cache write failed: {e}"));
            }
        }
    }
}

fn default_cache_dir(opts: &RunOptions) -> Option<PathBuf> {
    opts.cache_dir.clone().or_else(|| std::env::var_os("FB_CACHE_DIR").map(PathBuf::from))
}

/// The reduced Groebner basis of the defining ideal, from the cache when present.
/// The ring is always rebuilt from that basis so hits and misses construct identical rings.
fn build_ring(ctx: &mut Ctx) -> Result<(), CliError> {
    let limits = Limits { max_gb_size: ctx.opts.max_gb_size };
    let poly = ctx.problem.ring.clone();
    let cached = ctx.cache_get(CacheKind::Gb).and_then(|body| {
        let gens: Option<Vec<Polynomial>> = serde_json::from_str::<Vec<String>>(&body)
            .ok()?
            .iter()
            .map(|s| poly.parse(s).ok())
            .collect();
        gens
    });
    let gb = match cached {
        Some(g) => g,
        None => {
            let r = ctx.problem.build_ring(limits)?;
            let g = r.ideal_basis().to_vec();
            let body = serde_json::to_string(&g.iter().map(|f| poly.format(f)).collect::<Vec<_>>()).unwrap();
            ctx.cache_put(CacheKind::Gb, &body);
            g
        }
    };
    ctx.ring = QuotientRing::new(poly, gb, limits)?;
    Ok(())
}

/// Parses, dispatches and assembles the report.
pub fn run(command: Command, text: &str, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let problem = parse_problem(text)?;
    let digest = sha256_hex(problem.canonical_text().as_bytes());
    let cache = default_cache_dir(opts).map(Cache::new);
    let placeholder = QuotientRing::new(problem.ring.clone(), Vec::new(), Limits::default())?;
    let mut ctx = Ctx {
        problem,
        ring: placeholder,
        opts: opts.clone(),
        digest,
        cache,
        events: Vec::new(),
        warnings: Vec::new(),
    };
    let body = |ctx: &mut Ctx| -> Result<(Value, Option<String>), CliError> {
        build_ring(ctx)?;
        match command {
            Command::Resolve => cmd_resolve(ctx).map(|v| (v, None)),
            Command::Hk => cmd_hk(ctx),
            Command::Beta => cmd_beta(ctx),
            Command::Mu => cmd_mu(ctx),
            Command::Diagnose1 => cmd_diagnose(ctx).map(|v| (v, None)),
            Command::Syz => cmd_syz(ctx).map(|v| (v, None)),
            Command::Verify => cmd_verify(ctx).map(|v| (v, None)),
        }
    };
    let (result, csv) = match opts.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| CliError { code: 1, message: e.to_string() })?;
            pool.install(|| body(&mut ctx))?
        }
        None => body(&mut ctx)?,
    };
    let ring = RingEcho {
        characteristic: ctx.ring.p(),
        vars: ctx.problem.ring.names.clone(),
        ideal: ctx.fmt_all(&ctx.problem.ideal),
        dimension: ctx.ring.dimension(),
    };
    let envelope = ReportEnvelope {
        version: REPORT_VERSION,
        command: command.name(),
        input_digest: ctx.digest.clone(),
        ring,
        result,
        timing: Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3, cache: ctx.events },
        warnings: ctx.warnings,
    };
    Ok(RunOutput { envelope, csv })
}

fn matrix_json(ctx: &Ctx, m: &Matrix) -> Value {
    json!({
        "row_degrees": m.row_degrees(),
        "col_degrees": m.col_degrees(),
        "rows": m.rows().iter().map(|r| ctx.fmt_all(r)).collect::<Vec<_>>(),
    })
}

fn complex_to_cache(ctx: &Ctx, c: &FreeComplex) -> String {
    let maps: Vec<Vec<Vec<String>>> = c.maps().iter().map(|m| m.rows().iter().map(|r| ctx.fmt_all(r)).collect()).collect();
    serde_json::to_string(&json!({ "degrees": c.degrees(), "maps": maps })).unwrap()
}

fn complex_from_cache(ctx: &Ctx, body: &str) -> Option<FreeComplex> {
    let v: Value = serde_json::from_str(body).ok()?;
    let degrees: Vec<Vec<i64>> = serde_json::from_value(v.get("degrees")?.clone()).ok()?;
    let maps_txt: Vec<Vec<Vec<String>>> = serde_json::from_value(v.get("maps")?.clone()).ok()?;
    if maps_txt.len() + 1 != degrees.len() {
        return None;
    }
    let mut maps = Vec::new();
    for (j, rows) in maps_txt.iter().enumerate() {
        let ncols = degrees[j + 1].len();
        let mut columns = vec![Vec::with_capacity(rows.len()); ncols];
        for r in rows {
            if r.len() != ncols {
                return None;
            }
            for (c, t) in r.iter().enumerate() {
                columns[c].push(ctx.ring.parse(t).ok()?);
            }
        }
        maps.push(Matrix::new(degrees[j].clone(), degrees[j + 1].clone(), columns).ok()?);
    }
    FreeComplex::new(ctx.ring.clone(), degrees, maps).ok()
}

fn cmd_resolve(ctx: &mut Ctx) -> Result<Value, CliError> {
    let steps = ctx.opts.steps;
    let cached = ctx
        .cache_get(CacheKind::Resolution)
        .and_then(|b| complex_from_cache(ctx, &b))
        .filter(|c| c.top() >= steps);
    let complex = match cached {
        Some(c) => c.truncate(steps),
        None => {
            let res = resolve(&ctx.module()?, steps, true)?;
            let body = complex_to_cache(ctx, &res.complex);
            ctx.cache_put(CacheKind::Resolution, &body);
            res.complex
        }
    };
    Ok(json!({
        "steps": steps,
        "betti": complex.ranks(),
        "minimal": complex.is_minimal(),
        "degrees": complex.degrees(),
        "maps": complex.maps().iter().map(|m| matrix_json(ctx, m)).collect::<Vec<_>>(),
    }))
}

fn rational_text(r: &fbetti::asymptotics::Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn sequence_json(est: &AsymptoticEstimate) -> Value {
    json!({
        "kind": est.kind,
        "index": est.index,
        "d": est.d,
        "levels": est.levels.iter().map(|l| json!({
            "e": l.e,
            "q": l.q,
            "raw": l.raw,
            "normalized": rational_text(&l.normalized),
            "normalized_decimal": l.normalized.to_f64(),
        })).collect::<Vec<_>>(),
        "differences": est.differences().iter().map(rational_text).collect::<Vec<_>>(),
        "estimate": est.estimate.as_ref().map(rational_text),
        "estimate_decimal": est.estimate_f64(),
        "stabilized": est.stabilized,
        "label": if est.d <= 1 { "eventually exact" } else { "estimate only" },
    })
}

/// `e,q,raw,normalized`, one row per level, matching the JSON entries.
pub fn sequence_csv(est: &AsymptoticEstimate) -> String {
    let mut s = String::from("e,q,raw,normalized\n");
    for l in &est.levels {
        s += &format!("{},{},{},{}\n", l.e, l.q, l.raw, rational_text(&l.normalized));
    }
    s
}

fn cmd_hk(ctx: &mut Ctx) -> Result<(Value, Option<String>), CliError> {
    let j = ctx.problem.hk_ideal();
    let est = hk_sequence(&ctx.ring, &j, 1..=ctx.opts.emax)?;
    let mut v = sequence_json(&est);
    v["ideal"] = json!(ctx.fmt_all(&j));
    Ok((v, Some(sequence_csv(&est))))
}

fn cmd_beta(ctx: &mut Ctx) -> Result<(Value, Option<String>), CliError> {
    let m = ctx.module()?;
    let i = ctx.opts.idx;
    if ctx.opts.exact {
        let vanishes = decide_beta_vanishing(&m, i)?;
        let h0 = h0_ring(&ctx.ring)?;
        return Ok((
            json!({
                "index": i,
                "vanishes": vanishes,
                "rule": "condition-i: im(phi_{i+1}) in H0_m(G_i)",
                "h0": ctx.fmt_all(&h0),
            }),
            None,
        ));
    }
    let est = beta_sequence(&m, i, 1..=ctx.opts.emax)?;
    let mut v = sequence_json(&est);
    if let Some(bound) = ctx.opts.degree_bound {
        let res = resolve(&m, i + 1, true)?;
        let mut checks = Vec::new();
        for l in &est.levels {
            let c = twist_complex(&res.complex, BracketLevel::new(ctx.ring.p(), l.e)?)?;
            let o = degreewise_homology_oracle(&c, i, bound);
            if !o.stabilized {
                ctx.warnings.push(format!("degreewise oracle at e = {} not stabilized by degree {bound}", l.e));
            } else if o.value != l.raw {
                ctx.warnings.push(format!("degreewise oracle at e = {} gave {} against {}", l.e, o.value, l.raw));
            }
            checks.push(json!({ "e": l.e, "value": o.value, "stabilized": o.stabilized }));
        }
        v["oracle"] = json!({ "degree_bound": bound, "levels": checks });
    }
    Ok((v, Some(sequence_csv(&est))))
}

fn cmd_mu(ctx: &mut Ctx) -> Result<(Value, Option<String>), CliError> {
    let m = ctx.module()?;
    let est = mu_sequence(&m, ctx.opts.idx, 1..=ctx.opts.emax)?;
    Ok((sequence_json(&est), Some(sequence_csv(&est))))
}

fn primes(ctx: &Ctx) -> Result<Vec<Vec<Polynomial>>, CliError> {
    match &ctx.problem.minprimes {
        Some(p) => Ok(p.clone()),
        None => ring_minimal_primes(&ctx.ring).map_err(|e| CliError {
            code: EXIT_INAPPLICABLE,
            message: format!("{e}; supply a `minprimes:` block"),
        }),
    }
}

fn cmd_diagnose(ctx: &mut Ctx) -> Result<Value, CliError> {
    let m = ctx.module()?;
    let i = ctx.opts.idx;
    let primes = primes(ctx)?;
    let rep = diagnose(&m, i, &primes, 0..=ctx.opts.emax)?;
    let param = choose_parameter(&ctx.ring, Some(&m), ctx.opts.seed)?;
    let xi = match xi_alternating_sum_check(&m, i, ctx.opts.seed)? {
        XiOutcome::Inapplicable(g) => json!({ "applicable": false, "failed_hypothesis": g }),
        XiOutcome::Evaluated { parameter, lhs, rhs, tor_lengths } => json!({
            "applicable": true,
            "parameter": ctx.fmt(&parameter.x),
            "lhs": lhs,
            "rhs": rhs,
            "tor_lengths": tor_lengths,
            "holds": lhs as i64 == rhs,
        }),
    };
    let lemma = if i >= 1 { Some(lemma_h0_check(&m, i)?) } else { None };
    let pd = rep.pd.as_ref().map(|d| {
        json!({
            "finite": d.finite,
            "rule": d.rule,
            "rule_text": d.rule.describe(),
            "vanishing": d.vanishing.iter().map(|&(j, v)| json!({ "index": j, "vanishes": v })).collect::<Vec<_>>(),
            "certificate": d.certificate.map(|j| json!({ "first_zero_free_module": j })),
        })
    });
    Ok(json!({
        "index": i,
        "h0": ctx.fmt_all(&h0_ring(&ctx.ring)?),
        "condition_i": rep.condition_i,
        "condition_iii": rep.condition_iii.iter().map(|r| json!({
            "prime": ctx.fmt_all(&r.prime),
            "lengths": r.lengths.iter().map(|&(e, l)| json!({ "e": e, "length": l })).collect::<Vec<_>>(),
            "all_zero": r.all_zero(),
            "first_nonzero": r.first_nonzero(),
        })).collect::<Vec<_>>(),
        "beta": sequence_json(&rep.beta_estimate),
        "consistent": rep.consistent,
        "finite_pd": pd,
        "buchsbaum_necessary_condition": rep.buchsbaum,
        "parameter": {
            "y": ctx.fmt(&param.y),
            "n": param.n,
            "x": ctx.fmt(&param.x),
            "flags": param.flags,
        },
        "alternating_sum": xi,
        "tor_modulo_h0": lemma,
    }))
}

fn cmd_syz(ctx: &mut Ctx) -> Result<Value, CliError> {
    let m = ctx.module()?;
    let s = syzygy_length_survey(&m, ctx.opts.steps)?;
    Ok(serde_json::to_value(&s).unwrap())
}

fn cmd_verify(ctx: &mut Ctx) -> Result<Value, CliError> {
    let m = ctx.module()?;
    let weighted = ctx.problem.weighted_primes();
    let opts = LawOptions {
        indices: (0..=ctx.opts.idx.max(1)).collect(),
        range: 1..=ctx.opts.emax,
        additivity: weighted.is_some(),
        primes: weighted,
        ..LawOptions::default()
    };
    let report = verify_laws(&m, &opts)?;
    let mut certs = json!(null);
    if ctx.ring.dimension() <= 1 {
        let depth = fbetti::onedim::depth(&ctx.ring)?;
        certs = json!({
            "twisted_tor_vanishing": twisted_tor_vanishing(&m, depth + 2, 0..=ctx.opts.emax)?,
            "consecutive_tor_vanishing": finite_pd_certificate(&m, 1, depth)?,
        });
    }
    Ok(json!({
        "all_passed": report.all_passed(),
        "checks": report.checks.iter().map(|c| json!({
            "law": c.law,
            "index": c.index,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "finite_pd_certificates": certs,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{report_schema, validate};

    fn fixture(name: &str) -> String {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
        std::fs::read_to_string(path).unwrap()
    }

    fn opts(f: impl FnOnce(&mut RunOptions)) -> RunOptions {
        let mut o = RunOptions::default();
        f(&mut o);
        o
    }

    fn payload(out: &RunOutput) -> Value {
        let mut v = serde_json::to_value(&out.envelope).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    }

    fn statuses(out: &RunOutput) -> Vec<&'static str> {
        out.envelope.timing.cache.iter().map(|e| e.status).collect()
    }

    fn invocations() -> Vec<(Command, &'static str, RunOptions)> {
        vec![
            (Command::Hk, "r1.fbr", opts(|_| {})),
            (Command::Hk, "r4.fbr", opts(|o| o.emax = 2)),
            (Command::Beta, "r1K.fbr", opts(|o| o.idx = 1)),
            (Command::Beta, "r1K.fbr", opts(|o| (o.idx, o.exact) = (1, true))),
            (Command::Beta, "r3K.fbr", opts(|o| (o.idx, o.emax, o.degree_bound) = (1, 2, Some(150)))),
            (Command::Mu, "r3K.fbr", opts(|o| (o.idx, o.emax) = (1, 2))),
            (Command::Resolve, "r5.fbr", opts(|_| {})),
            (Command::Resolve, "r1x.fbr", opts(|o| o.steps = 4)),
            (Command::Diagnose1, "r1K.fbr", opts(|o| (o.idx, o.emax) = (1, 2))),
            (Command::Diagnose1, "r3pd.fbr", opts(|o| (o.idx, o.emax) = (2, 2))),
            (Command::Syz, "r1x.fbr", opts(|_| {})),
            (Command::Syz, "r3K.fbr", opts(|_| {})),
            (Command::Verify, "r1K.fbr", opts(|o| (o.idx, o.emax) = (1, 2))),
            (Command::Verify, "r3pd.fbr", opts(|o| (o.idx, o.emax) = (1, 2))),
        ]
    }

    #[test]
    fn every_command_validates_and_is_deterministic() {
        let schema = report_schema();
        for (cmd, file, o) in invocations() {
            let text = fixture(file);
            let a = run(cmd, &text, &o).unwrap();
            let b = run(cmd, &text, &o).unwrap();
            let errs = validate(&schema, &serde_json::to_value(&a.envelope).unwrap());
            assert!(errs.is_empty(), "{cmd:?} {file}: {errs:?}");
            assert_eq!(payload(&a), payload(&b), "{cmd:?} {file}");
            assert!(a.envelope.warnings.is_empty(), "{cmd:?} {file}: {:?}", a.envelope.warnings);
        }
    }

    #[test]
    fn layout_changes_keep_the_digest() {
        let a = run(Command::Hk, &fixture("r1.fbr"), &RunOptions::default()).unwrap();
        let b = run(Command::Hk, "char:5\n\nvars: x,y   # comment\nideal: x^2,x*y\n", &RunOptions::default()).unwrap();
        assert_eq!(a.envelope.input_digest, b.envelope.input_digest);
    }

    #[test]
    fn thread_count_does_not_change_the_payload() {
        let text = fixture("r1K.fbr");
        let one = run(Command::Beta, &text, &opts(|o| (o.idx, o.threads) = (1, Some(1)))).unwrap();
        let four = run(Command::Beta, &text, &opts(|o| (o.idx, o.threads) = (1, Some(4)))).unwrap();
        assert_eq!(payload(&one), payload(&four));
    }

    #[test]
    fn hk_of_r1_matches_the_frozen_levels() {
        let out = run(Command::Hk, &fixture("r1.fbr"), &RunOptions::default()).unwrap();
        let r = &out.envelope.result;
        let levels: Vec<(u64, u64, u64, f64)> = r["levels"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| (l["e"].as_u64().unwrap(), l["q"].as_u64().unwrap(), l["raw"].as_u64().unwrap(), l["normalized_decimal"].as_f64().unwrap()))
            .collect();
        assert_eq!(levels, vec![(1, 5, 6, 1.2), (2, 25, 26, 1.04), (3, 125, 126, 1.008)]);
        assert_eq!(r["estimate"], "1");
    }

    #[test]
    fn exact_beta_on_k_over_r1_does_not_vanish() {
        let out = run(Command::Beta, &fixture("r1K.fbr"), &opts(|o| (o.idx, o.exact) = (1, true))).unwrap();
        assert_eq!(out.envelope.result["vanishes"], false);
        assert!(out.envelope.result["rule"].as_str().unwrap().starts_with("condition-i"));
    }

    #[test]
    fn csv_rows_equal_json_levels() {
        let out = run(Command::Mu, &fixture("r3K.fbr"), &opts(|o| o.idx = 1)).unwrap();
        let csv = out.csv.unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("e,q,raw,normalized"));
        let rows: Vec<&str> = lines.collect();
        let levels = out.envelope.result["levels"].as_array().unwrap();
        assert_eq!(rows.len(), levels.len());
        for (row, l) in rows.iter().zip(levels) {
            assert_eq!(*row, format!("{},{},{},{}", l["e"], l["q"], l["raw"], l["normalized"].as_str().unwrap()));
        }
    }

    #[test]
    fn cache_hits_reproduce_the_payload_and_corruption_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = dir.path().join("absent/cache");
        let o = opts(|o| o.cache_dir = Some(cache.clone()));
        let text = fixture("r5.fbr");
        let cold = run(Command::Resolve, &text, &o).unwrap();
        assert!(cache.is_dir());
        assert_eq!(statuses(&cold), ["miss", "miss"]);
        let warm = run(Command::Resolve, &text, &o).unwrap();
        assert_eq!(statuses(&warm), ["hit", "hit"]);
        assert_eq!(payload(&cold), payload(&warm));

        let entry = cache.join(&cold.envelope.input_digest).join("resolution.dat");
        let body = std::fs::read_to_string(&entry).unwrap();
        std::fs::write(&entry, body.replace("\"y\"", "\"x\"")).unwrap();
        let repaired = run(Command::Resolve, &text, &o).unwrap();
        assert_eq!(statuses(&repaired), ["hit", "corrupt"]);
        assert_eq!(repaired.envelope.result, cold.envelope.result);
        assert_eq!(repaired.envelope.warnings.len(), 1);
        assert_eq!(statuses(&run(Command::Resolve, &text, &o).unwrap()), ["hit", "hit"]);

        let shorter = run(Command::Resolve, &text, &opts(|o| (o.cache_dir, o.steps) = (Some(cache.clone()), 2))).unwrap();
        assert_eq!(statuses(&shorter), ["hit", "hit"]);
        assert_eq!(shorter.envelope.result["betti"], json!([3, 1, 1]));
        let longer = run(Command::Resolve, &text, &opts(|o| (o.cache_dir, o.steps) = (Some(cache.clone()), 4))).unwrap();
        assert_eq!(longer.envelope.result["betti"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn gb_cache_feeds_every_command() {
        let dir = tempfile::tempdir().unwrap();
        let o = opts(|o| (o.cache_dir, o.idx) = (Some(dir.path().to_path_buf()), 1));
        let text = fixture("r1K.fbr");
        let cold = run(Command::Beta, &text, &o).unwrap();
        let warm = run(Command::Beta, &text, &o).unwrap();
        assert_eq!(statuses(&warm), ["hit"]);
        assert_eq!(payload(&cold), payload(&warm));
    }

    fn code(cmd: Command, text: &str, o: &RunOptions) -> i32 {
        match run(cmd, text, o) {
            Ok(_) => 0,
            Err(e) => e.code,
        }
    }

    #[test]
    fn exit_codes_follow_the_error_class() {
        let d = RunOptions::default();
        let ok = "char: 5\nvars: x, y\nideal: x^2, x*y\n";
        assert_eq!(code(Command::Hk, ok, &d), 0);
        assert_eq!(code(Command::Hk, "char: 5\nvars: x, y\nideal: x^2 +\n", &d), EXIT_PARSE, "syntax");
        assert_eq!(code(Command::Hk, "char: 5\nvars: x, y\nideal: x^2 + y\n", &d), EXIT_PARSE, "inhomogeneous");
        assert_eq!(code(Command::Hk, "char: 5\nvars: x, y\nideal: x^2\nminprimes: (x)\nlocalmult: 1, 2\n", &d), EXIT_PARSE, "blocks");
        assert_eq!(code(Command::Hk, "char: 6\nvars: x, y\nideal: x^2\n", &d), EXIT_PARSE, "not prime");
        assert_eq!(code(Command::Hk, "char: 5\nvars: x, y\nideal: x^2, x*w\n", &d), EXIT_PARSE, "unknown variable");
        let exact = opts(|o| (o.idx, o.exact) = (1, true));
        assert_eq!(code(Command::Beta, "char: 5\nvars: x, y, z\nideal: x*y\n", &exact), EXIT_INAPPLICABLE, "--exact with d = 2");
        let diag = opts(|o| o.idx = 1);
        let infinite = "char: 5\nvars: x, y\nideal: x^2\nmodule: quotient x\n";
        assert_eq!(code(Command::Diagnose1, infinite, &diag), EXIT_INAPPLICABLE, "infinite length");
        assert_eq!(code(Command::Mu, infinite, &d), EXIT_INAPPLICABLE, "mu of infinite length");
        assert_eq!(code(Command::Hk, ok, &opts(|o| o.max_gb_size = 1)), EXIT_RESOURCE, "resource bound");
    }
}
