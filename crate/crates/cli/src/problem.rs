//! `.fbr` problem files.
//!
//! ```text
//! # comment
//! char: 5
//! vars: x, y
//! ideal: x^2, x*y
//! module: coker [x, y]          # rows separated by ';'
//! module: quotient x            # alternative
//! rowdegs: 0
//! minprimes: (x)
//! localmult: 1
//! ```

use std::fmt;
use std::sync::Arc;

use fbetti::asymptotics::WeightedPrime;
use fbetti::{Limits, Matrix, PolyRing, Polynomial, QuotientRing, SubmodulePresentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemError {
    Parse { line: usize, column: usize, msg: String },
    NotHomogeneous { line: usize, msg: String },
    InconsistentBlocks(String),
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::Parse { line, column, msg } => write!(f, "parse error at {line}:{column}: {msg}"),
            ProblemError::NotHomogeneous { line, msg } => write!(f, "line {line}: not homogeneous: {msg}"),
            ProblemError::InconsistentBlocks(msg) => write!(f, "inconsistent blocks: {msg}"),
        }
    }
}

impl std::error::Error for ProblemError {}

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleSpec {
    /// Rows of the presentation matrix.
    Coker(Vec<Vec<Polynomial>>),
    Quotient(Vec<Polynomial>),
    /// No module block: the residue field.
    ResidueField,
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub ring: PolyRing,
    pub ideal: Vec<Polynomial>,
    pub module: ModuleSpec,
    pub rowdegs: Option<Vec<i64>>,
    pub minprimes: Option<Vec<Vec<Polynomial>>>,
    pub localmult: Option<Vec<u64>>,
}

/// One `key: value` line with the column where the value starts.
struct Entry<'a> {
    line: usize,
    col: usize,
    value: &'a str,
}

fn parse_err(line: usize, column: usize, msg: impl Into<String>) -> ProblemError {
    ProblemError::Parse { line, column, msg: msg.into() }
}

/// Splits `s` on `sep` outside parentheses and brackets, keeping byte offsets.
fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn trimmed(offset: usize, s: &str) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (offset + lead, s.trim())
}

fn poly_at(ring: &PolyRing, e: &Entry, offset: usize, text: &str) -> Result<Polynomial, ProblemError> {
    let (off, t) = trimmed(offset, text);
    if t.is_empty() {
        return Err(parse_err(e.line, e.col + off, "empty polynomial"));
    }
    let f = ring.parse(t).map_err(|err| match err {
        fbetti::Error::Parse { pos, msg } => parse_err(e.line, e.col + off + pos, msg),
        other => parse_err(e.line, e.col + off, other.to_string()),
    })?;
    if !f.is_homogeneous() {
        return Err(ProblemError::NotHomogeneous { line: e.line, msg: t.to_string() });
    }
    Ok(f)
}

fn poly_list(ring: &PolyRing, e: &Entry, offset: usize, text: &str) -> Result<Vec<Polynomial>, ProblemError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(text, ',').into_iter().map(|(o, t)| poly_at(ring, e, offset + o, t)).collect()
}

fn int_list<T: std::str::FromStr>(e: &Entry) -> Result<Vec<T>, ProblemError> {
    split_top(e.value, ',')
        .into_iter()
        .map(|(o, t)| {
            let (off, t) = trimmed(o, t);
            t.parse().map_err(|_| parse_err(e.line, e.col + off, format!("expected an integer, found `{t}`")))
        })
        .collect()
}

fn strip_wrapped(e: &Entry, offset: usize, text: &str, open: char, close: char) -> Result<(usize, String), ProblemError> {
    let (off, t) = trimmed(offset, text);
    if !t.starts_with(open) || !t.ends_with(close) || t.len() < 2 {
        return Err(parse_err(e.line, e.col + off, format!("expected `{open}...{close}`")));
    }
    Ok((off + 1, t[1..t.len() - 1].to_string()))
}

const KEYS: [&str; 7] = ["char", "vars", "ideal", "module", "rowdegs", "minprimes", "localmult"];

/// Parses a problem file. Errors carry 1-based line and column.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let mut entries: Vec<(&str, Entry)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            return Err(parse_err(line, 1, "expected `key: value`"));
        };
        let key = content[..colon].trim();
        if !KEYS.contains(&key) {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(parse_err(line, col, format!("unknown key `{key}`")));
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(ProblemError::InconsistentBlocks(format!("`{key}` given twice (line {line})")));
        }
        entries.push((key, Entry { line, col: colon + 2, value: &content[colon + 1..] }));
    }
    let get = |k: &str| entries.iter().find(|(key, _)| *key == k).map(|(_, e)| e);
    let missing = |k: &str| ProblemError::InconsistentBlocks(format!("missing `{k}`"));

    let ch = get("char").ok_or_else(|| missing("char"))?;
    let p: u64 = {
        let (off, t) = trimmed(0, ch.value);
        t.parse().map_err(|_| parse_err(ch.line, ch.col + off, "expected a prime"))?
    };
    let vars = get("vars").ok_or_else(|| missing("vars"))?;
    let names: Vec<(usize, &str)> = split_top(vars.value, ',').into_iter().map(|(o, t)| trimmed(o, t)).collect();
    for &(off, n) in &names {
        let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(parse_err(vars.line, vars.col + off, format!("invalid variable name `{n}`")));
        }
    }
    let name_list: Vec<&str> = names.iter().map(|&(_, n)| n).collect();
    let ring = PolyRing::new(p, &name_list).map_err(|err| parse_err(ch.line, ch.col, err.to_string()))?;

    let ideal = match get("ideal") {
        Some(e) => poly_list(&ring, e, 0, e.value)?,
        None => Vec::new(),
    };

    let module = match get("module") {
        None => ModuleSpec::ResidueField,
        Some(e) => {
            let (off, t) = trimmed(0, e.value);
            if let Some(rest) = t.strip_prefix("coker") {
                let (moff, body) = strip_wrapped(e, off + 5, rest, '[', ']')?;
                let rows = split_top(&body, ';')
                    .into_iter()
                    .map(|(o, r)| poly_list(&ring, e, moff + o, r))
                    .collect::<Result<Vec<_>, _>>()?;
                let width = rows[0].len();
                if width == 0 || rows.iter().any(|r| r.len() != width) {
                    return Err(parse_err(e.line, e.col + off, "matrix rows must be nonempty and of equal length"));
                }
                ModuleSpec::Coker(rows)
            } else if let Some(rest) = t.strip_prefix("quotient") {
                ModuleSpec::Quotient(poly_list(&ring, e, off + 8, rest)?)
            } else {
                return Err(parse_err(e.line, e.col + off, "expected `coker [..]` or `quotient ..`"));
            }
        }
    };

    let rowdegs = get("rowdegs").map(int_list::<i64>).transpose()?;
    if let Some(rd) = &rowdegs {
        let rows = match &module {
            ModuleSpec::Coker(r) => r.len(),
            _ => 1,
        };
        if rd.len() != rows {
            return Err(ProblemError::InconsistentBlocks(format!("rowdegs has {} entries for {rows} rows", rd.len())));
        }
    }
    let minprimes = get("minprimes")
        .map(|e| {
            split_top(e.value, ';')
                .into_iter()
                .map(|(o, t)| {
                    let (inner_off, body) = strip_wrapped(e, o, t, '(', ')')?;
                    poly_list(&ring, e, inner_off, &body)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let localmult = get("localmult").map(int_list::<u64>).transpose()?;
    match (&minprimes, &localmult) {
        (None, Some(_)) => return Err(ProblemError::InconsistentBlocks("localmult given without minprimes".into())),
        (Some(p), Some(m)) if p.len() != m.len() => {
            return Err(ProblemError::InconsistentBlocks(format!(
                "localmult has {} entries for {} minimal primes",
                m.len(),
                p.len()
            )))
        }
        _ => {}
    }
    Ok(ProblemFile { ring, ideal, module, rowdegs, minprimes, localmult })
}

impl ProblemFile {
    /// The canonical text the input digest is taken over: fixed key order, normalized polynomials.
    pub fn canonical_text(&self) -> String {
        let fmt = |fs: &[Polynomial]| fs.iter().map(|f| self.ring.format(f)).collect::<Vec<_>>().join(", ");
        let mut s = format!("char: {}\nvars: {}\nideal: {}\n", self.ring.p(), self.ring.names.join(", "), fmt(&self.ideal));
        match &self.module {
            ModuleSpec::Coker(rows) => {
                s += &format!("module: coker [{}]\n", rows.iter().map(|r| fmt(r)).collect::<Vec<_>>().join("; "))
            }
            ModuleSpec::Quotient(g) => s += &format!("module: quotient {}\n", fmt(g)),
            ModuleSpec::ResidueField => s += "module: residue-field\n",
        }
        if let Some(rd) = &self.rowdegs {
            s += &format!("rowdegs: {}\n", rd.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));
        }
        if let Some(mp) = &self.minprimes {
            s += &format!("minprimes: {}\n", mp.iter().map(|p| format!("({})", fmt(p))).collect::<Vec<_>>().join("; "));
        }
        if let Some(lm) = &self.localmult {
            s += &format!("localmult: {}\n", lm.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "));
        }
        s
    }

    pub fn build_ring(&self, limits: Limits) -> fbetti::Result<Arc<QuotientRing>> {
        QuotientRing::new(self.ring.clone(), self.ideal.clone(), limits)
    }

    /// The module over `ring`; row degrees default to zero and are inferred when zeros are inconsistent.
    pub fn build_module(&self, ring: &Arc<QuotientRing>) -> fbetti::Result<SubmodulePresentation> {
        match &self.module {
            ModuleSpec::ResidueField => Ok(SubmodulePresentation::residue_field(ring.clone())),
            ModuleSpec::Quotient(g) => SubmodulePresentation::quotient_module(ring.clone(), g.clone()),
            ModuleSpec::Coker(rows) => {
                let ncols = rows[0].len();
                let columns: Vec<Vec<Polynomial>> = (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
                let m = match &self.rowdegs {
                    Some(rd) => Matrix::from_columns(rd.clone(), columns)?,
                    None => Matrix::from_rows_infer(rows.clone())?,
                };
                SubmodulePresentation::cokernel(ring.clone(), m)
            }
        }
    }

    /// The `quotient` generators when the module is `R/J`, else the variables.
    pub fn hk_ideal(&self) -> Vec<Polynomial> {
        match &self.module {
            ModuleSpec::Quotient(g) => g.clone(),
            _ => (0..self.ring.nvars()).map(|i| self.ring.var(i)).collect(),
        }
    }

    pub fn weighted_primes(&self) -> Option<Vec<WeightedPrime>> {
        let primes = self.minprimes.as_ref()?;
        let mults = self.localmult.as_ref()?;
        Some(
            primes
                .iter()
                .zip(mults)
                .map(|(g, &m)| WeightedPrime { generators: g.clone(), multiplicity: m })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R1: &str = "# R1\nchar: 5\nvars: x, y\nideal: x^2, x*y\nmodule: quotient x, y\n";

    #[test]
    fn parses_r1() {
        let p = parse_problem(R1).unwrap();
        assert_eq!(p.ideal.len(), 2);
        assert_eq!(p.module, ModuleSpec::Quotient(vec![p.ring.var(0), p.ring.var(1)]));
    }

    #[test]
    fn quotient_module_block() {
        let p = parse_problem("char: 5\nvars: x, y\nideal: x^2, x*y\nmodule: quotient x\n").unwrap();
        let ring = p.build_ring(Limits::default()).unwrap();
        let m = p.build_module(&ring).unwrap();
        assert_eq!(m.length().unwrap(), None);
    }

    #[test]
    fn coker_rows() {
        let p = parse_problem("char: 101\nvars: x,y,z\nmodule: coker [x, y; z, 0]\n").unwrap();
        match p.module {
            ModuleSpec::Coker(rows) => assert_eq!((rows.len(), rows[0].len()), (2, 2)),
            _ => panic!(),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem("char: 5\nvars: x, y\nideal: x^2, x*w\n").unwrap_err();
        assert!(matches!(e, ProblemError::Parse { line: 3, .. }), "{e:?}");
        let e = parse_problem("char: 5\nvars: x\nfoo: 1\n").unwrap_err();
        assert_eq!(e, ProblemError::Parse { line: 3, column: 1, msg: "unknown key `foo`".into() });
        let e = parse_problem("char: 5\nvars: x, y\nideal: x^2 + y\n").unwrap_err();
        assert!(matches!(e, ProblemError::NotHomogeneous { line: 3, .. }));
    }

    #[test]
    fn inconsistent_blocks() {
        let e = parse_problem("char: 5\nvars: x, y\nideal: x^2, x*y\nminprimes: (x)\nlocalmult: 1, 2\n").unwrap_err();
        assert!(matches!(e, ProblemError::InconsistentBlocks(_)));
        let e = parse_problem("vars: x\n").unwrap_err();
        assert!(matches!(e, ProblemError::InconsistentBlocks(_)));
    }

    #[test]
    fn canonical_text_ignores_layout() {
        let a = parse_problem(R1).unwrap().canonical_text();
        let b = parse_problem("char:5\n\nvars:x,y   # vars\nideal: x*y,x^2\nmodule: quotient x,y").unwrap().canonical_text();
        assert_ne!(a, b);
        let c = parse_problem("char:5\nvars:x,y\nideal:   x^2,  x*y\nmodule: quotient x ,y").unwrap().canonical_text();
        assert_eq!(a, c);
    }

    #[test]
    fn rowdegs_inferred_when_zeros_fail() {
        let p = parse_problem("char: 101\nvars: u, v, z\nmodule: coker [u; v; z^2]\n").unwrap();
        let ring = p.build_ring(Limits::default()).unwrap();
        let m = p.build_module(&ring).unwrap();
        assert_eq!(m.row_degrees(), &[1, 1, 0]);
    }
}
