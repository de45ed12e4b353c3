//! Submodules of graded free modules over `S` and over `R = S / I`.
//!
//! Every kernel, colon and lifting computation reduces to one primitive, the
//! preimage `{c : A c in L}` of a submodule `L` under a matrix `A`. It is computed
//! from a Groebner basis of the augmented columns `(A e_j, e_j)` together with
//! `(l, 0)` for `l` in `L`, in the position-over-term order on `F (+) S^a`: the
//! elements whose leading position falls in the second block generate the preimage.

pub(crate) mod engine;

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::hilbert::{independent_set_dimension, module_series, HilbertSeries};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::QuotientRing;
use engine::{reduced_basis, Builder, Reducer, SVec, Term};

/// A column vector of a free module; component `k` lives in position `k`.
pub type ModuleElement = Vec<Polynomial>;

/// A homogeneous matrix `phi: F_1 -> F_0` between graded free modules.
/// Entry `(r, c)` is zero or homogeneous of degree `col_degrees[c] - row_degrees[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    row_degrees: Vec<i64>,
    col_degrees: Vec<i64>,
    columns: Vec<ModuleElement>,
}

impl Matrix {
    pub fn new(row_degrees: Vec<i64>, col_degrees: Vec<i64>, columns: Vec<ModuleElement>) -> Result<Self> {
        if columns.len() != col_degrees.len() {
            return Err(Error::AmbientMismatch(format!(
                "{} columns but {} column degrees",
                columns.len(),
                col_degrees.len()
            )));
        }
        for (c, col) in columns.iter().enumerate() {
            if col.len() != row_degrees.len() {
                return Err(Error::AmbientMismatch(format!(
                    "column {c} has {} entries, expected {}",
                    col.len(),
                    row_degrees.len()
                )));
            }
            for (r, f) in col.iter().enumerate() {
                let want = col_degrees[c] - row_degrees[r];
                if !f.is_zero() && (!f.is_homogeneous() || f.degree().map(|d| d as i64) != Some(want)) {
                    return Err(Error::NotHomogeneous(format!("matrix entry ({r}, {c}) should have degree {want}")));
                }
            }
        }
        Ok(Matrix { row_degrees, col_degrees, columns })
    }

    /// Infers column degrees from the entries; a zero column gets the degree of row 0.
    pub fn from_columns(row_degrees: Vec<i64>, columns: Vec<ModuleElement>) -> Result<Self> {
        let mut col_degrees = Vec::with_capacity(columns.len());
        for col in &columns {
            let d = col
                .iter()
                .zip(&row_degrees)
                .find(|(f, _)| !f.is_zero())
                .map(|(f, r)| f.degree().unwrap_or(0) as i64 + r)
                .unwrap_or_else(|| row_degrees.first().copied().unwrap_or(0));
            col_degrees.push(d);
        }
        Matrix::new(row_degrees, col_degrees, columns)
    }

    /// Builds a matrix from rows, inferring degrees: rows get degree 0 when that is
    /// consistent, otherwise the smallest non-negative twist making every entry homogeneous.
    pub fn from_rows_infer(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::AmbientMismatch("ragged matrix rows".into()));
        }
        let columns: Vec<ModuleElement> = (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
        if let Ok(m) = Matrix::from_columns(vec![0; nrows], columns.clone()) {
            return Ok(m);
        }
        // solve col_c - row_r = deg(a_rc) over the bipartite graph of nonzero entries
        let mut rdeg: Vec<Option<i64>> = vec![None; nrows];
        let mut cdeg: Vec<Option<i64>> = vec![None; ncols];
        for start in 0..nrows {
            if rdeg[start].is_some() {
                continue;
            }
            rdeg[start] = Some(0);
            let mut component_rows = vec![start];
            let mut changed = true;
            while changed {
                changed = false;
                for r in 0..nrows {
                    for c in 0..ncols {
                        let f = &columns[c][r];
                        if f.is_zero() {
                            continue;
                        }
                        if !f.is_homogeneous() {
                            return Err(Error::NotHomogeneous(format!("matrix entry ({r}, {c})")));
                        }
                        let d = f.degree().unwrap() as i64;
                        match (rdeg[r], cdeg[c]) {
                            (Some(x), None) => {
                                cdeg[c] = Some(x + d);
                                changed = true;
                            }
                            (None, Some(y)) => {
                                rdeg[r] = Some(y - d);
                                component_rows.push(r);
                                changed = true;
                            }
                            (Some(x), Some(y)) if y - x != d => {
                                return Err(Error::NotHomogeneous(format!("no consistent grading at entry ({r}, {c})")));
                            }
                            _ => {}
                        }
                    }
                }
            }
            let lo = component_rows.iter().filter_map(|&r| rdeg[r]).min().unwrap_or(0);
            for &r in &component_rows {
                rdeg[r] = rdeg[r].map(|x| x - lo);
            }
            for c in 0..ncols {
                if let Some(y) = cdeg[c] {
                    if columns[c].iter().enumerate().any(|(r, f)| !f.is_zero() && component_rows.contains(&r)) {
                        cdeg[c] = Some(y - lo);
                    }
                }
            }
        }
        let row_degrees: Vec<i64> = rdeg.into_iter().map(|d| d.unwrap_or(0)).collect();
        let col_degrees: Vec<i64> = cdeg.into_iter().map(|d| d.unwrap_or(0)).collect();
        Matrix::new(row_degrees, col_degrees, columns)
    }

    pub fn zero(row_degrees: Vec<i64>, col_degrees: Vec<i64>, nvars: usize) -> Self {
        let _ = nvars;
        let columns = col_degrees.iter().map(|_| vec![Polynomial::zero(); row_degrees.len()]).collect();
        Matrix { row_degrees, col_degrees, columns }
    }

    pub fn nrows(&self) -> usize {
        self.row_degrees.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn row_degrees(&self) -> &[i64] {
        &self.row_degrees
    }

    pub fn col_degrees(&self) -> &[i64] {
        &self.col_degrees
    }

    pub fn columns(&self) -> &[ModuleElement] {
        &self.columns
    }

    pub fn column(&self, c: usize) -> &ModuleElement {
        &self.columns[c]
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial {
        &self.columns[c][r]
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.nrows()).map(|r| self.columns.iter().map(|c| c[r].clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|f| f.is_zero()))
    }

    /// Dual map `F_0^* -> F_1^*`; dual generators have negated degrees.
    pub fn transpose(&self) -> Matrix {
        Matrix {
            row_degrees: self.col_degrees.iter().map(|d| -d).collect(),
            col_degrees: self.row_degrees.iter().map(|d| -d).collect(),
            columns: self.rows(),
        }
    }

    /// Entries reduced modulo the ideal of `ring`.
    pub fn reduce_mod(&self, ring: &QuotientRing) -> Matrix {
        Matrix {
            row_degrees: self.row_degrees.clone(),
            col_degrees: self.col_degrees.clone(),
            columns: self.columns.iter().map(|c| ring.reduce_vector(c)).collect(),
        }
    }

    /// `self * v`, unreduced.
    pub fn apply(&self, ring: &QuotientRing, v: &[Polynomial]) -> ModuleElement {
        let f = ring.field();
        let mut out = vec![Polynomial::zero(); self.nrows()];
        for (c, coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (r, a) in self.columns[c].iter().enumerate() {
                if !a.is_zero() {
                    out[r] = out[r].add(f, &a.mul(f, coef));
                }
            }
        }
        out
    }

    /// `self * other`, reduced modulo `I`.
    pub fn compose(&self, ring: &QuotientRing, other: &Matrix) -> Result<Matrix> {
        if self.col_degrees != other.row_degrees {
            return Err(Error::AmbientMismatch("composition of incompatible maps".into()));
        }
        let columns = other.columns.iter().map(|c| ring.reduce_vector(&self.apply(ring, c))).collect();
        Ok(Matrix { row_degrees: self.row_degrees.clone(), col_degrees: other.col_degrees.clone(), columns })
    }

    /// Columns `keep` only.
    pub fn select_columns(&self, keep: &[usize]) -> Matrix {
        Matrix {
            row_degrees: self.row_degrees.clone(),
            col_degrees: keep.iter().map(|&c| self.col_degrees[c]).collect(),
            columns: keep.iter().map(|&c| self.columns[c].clone()).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.row_degrees != other.row_degrees {
            return Err(Error::AmbientMismatch("hcat of matrices with different targets".into()));
        }
        let mut m = self.clone();
        m.col_degrees.extend_from_slice(&other.col_degrees);
        m.columns.extend(other.columns.iter().cloned());
        Ok(m)
    }

    pub fn map_entries(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Matrix {
        Matrix {
            row_degrees: self.row_degrees.clone(),
            col_degrees: self.col_degrees.clone(),
            columns: self.columns.iter().map(|c| c.iter().map(&f).collect()).collect(),
        }
    }

    /// Rebuilds with scaled degrees; used by the Frobenius twist.
    pub(crate) fn with_parts(row_degrees: Vec<i64>, col_degrees: Vec<i64>, columns: Vec<ModuleElement>) -> Matrix {
        Matrix { row_degrees, col_degrees, columns }
    }

    pub(crate) fn svec_columns(&self) -> Vec<SVec> {
        self.columns.iter().map(|c| SVec::from_components(c)).collect()
    }
}

/// Whether a presentation describes the span of its generators or the quotient by it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PresentationMode {
    /// `F / (span + I F)`.
    Cokernel,
    /// `(span + I F) / I F`, a submodule of `F` over `R`.
    Submodule,
}

/// Reduced Groebner basis of a submodule of a graded free module over `S`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    row_degrees: Vec<i64>,
    nvars: usize,
    elems: Vec<SVec>,
    reducer: Reducer,
    field: crate::field::PrimeField,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.row_degrees == other.row_degrees && self.elems == other.elems
    }
}

impl GroebnerBasis {
    fn from_svecs(ring: &QuotientRing, row_degrees: Vec<i64>, elems: Vec<SVec>) -> Self {
        GroebnerBasis {
            reducer: Reducer::new(ring.field(), &elems),
            row_degrees,
            nvars: ring.nvars(),
            elems,
            field: *ring.field(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> Vec<ModuleElement> {
        self.elems.iter().map(|v| v.to_components(self.row_degrees.len())).collect()
    }

    /// Leading terms as `(position, monomial)`.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|v| {
            let t = v.lead().unwrap();
            (t.pos as usize, t.mono.clone())
        }).collect()
    }

    fn per_position(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.row_degrees.len()];
        for (k, m) in self.leading_terms() {
            out[k].push(m);
        }
        out
    }

    /// Hilbert series of `F / L` (which equals that of `F / in(L)`).
    pub fn quotient_series(&self) -> HilbertSeries {
        module_series(&self.per_position(), &self.row_degrees, self.nvars)
    }

    /// Dimension of `F / L` from maximal independent sets, position by position.
    pub fn quotient_dimension(&self) -> i64 {
        self.per_position().iter().map(|g| independent_set_dimension(g, self.nvars)).max().unwrap_or(-1)
    }

    pub fn normal_form(&self, v: &[Polynomial]) -> ModuleElement {
        let r = self.reducer.reduce(&self.field, &SVec::from_components(v));
        r.to_components(self.row_degrees.len())
    }

    pub fn contains(&self, v: &[Polynomial]) -> bool {
        self.reducer.reduce(&self.field, &SVec::from_components(v)).is_zero()
    }

    /// Checks the Buchberger criterion directly.
    pub fn verify(&self) -> bool {
        engine::is_groebner(self.field, &self.row_degrees, &self.elems)
    }
}

/// A graded submodule `N` of `F = R^r(-d)`, or the module `F / N`.
#[derive(Debug)]
pub struct SubmodulePresentation {
    ring: Arc<QuotientRing>,
    matrix: Matrix,
    mode: PresentationMode,
    gb: OnceLock<GroebnerBasis>,
}

impl Clone for SubmodulePresentation {
    fn clone(&self) -> Self {
        SubmodulePresentation { ring: self.ring.clone(), matrix: self.matrix.clone(), mode: self.mode, gb: self.gb.clone() }
    }
}

impl SubmodulePresentation {
    pub fn new(ring: Arc<QuotientRing>, matrix: Matrix, mode: PresentationMode) -> Result<Self> {
        for col in matrix.columns() {
            for f in col {
                if f.terms().iter().any(|(_, m)| m.nvars() != ring.nvars()) {
                    return Err(Error::AmbientMismatch("entry over a different polynomial ring".into()));
                }
            }
        }
        Ok(SubmodulePresentation { ring, matrix, mode, gb: OnceLock::new() })
    }

    /// `coker(matrix)` over `R`.
    pub fn cokernel(ring: Arc<QuotientRing>, matrix: Matrix) -> Result<Self> {
        Self::new(ring, matrix, PresentationMode::Cokernel)
    }

    /// `im(matrix)` over `R`.
    pub fn submodule(ring: Arc<QuotientRing>, matrix: Matrix) -> Result<Self> {
        Self::new(ring, matrix, PresentationMode::Submodule)
    }

    /// The ideal generated by `gens` in `R`, as a submodule of `R`.
    pub fn ideal(ring: Arc<QuotientRing>, gens: Vec<Polynomial>) -> Result<Self> {
        let m = Matrix::from_columns(vec![0], gens.into_iter().map(|g| vec![g]).collect())?;
        Self::submodule(ring, m)
    }

    /// `R / (gens)`.
    pub fn quotient_module(ring: Arc<QuotientRing>, gens: Vec<Polynomial>) -> Result<Self> {
        let m = Matrix::from_columns(vec![0], gens.into_iter().map(|g| vec![g]).collect())?;
        Self::cokernel(ring, m)
    }

    /// The residue field `R / m`.
    pub fn residue_field(ring: Arc<QuotientRing>) -> Self {
        let vars = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        Self::quotient_module(ring, vars).expect("variables are homogeneous")
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn mode(&self) -> PresentationMode {
        self.mode
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn row_degrees(&self) -> &[i64] {
        self.matrix.row_degrees()
    }

    /// Groebner basis over `S` of `span + I F`.
    pub fn gb(&self) -> Result<&GroebnerBasis> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = span_basis(&self.ring, self.matrix.row_degrees(), &self.matrix.svec_columns())?;
        let _ = self.gb.set(g);
        Ok(self.gb.get().unwrap())
    }

    pub fn contains(&self, v: &[Polynomial]) -> Result<bool> {
        Ok(self.gb()?.contains(v))
    }

    /// `true` when both span the same submodule of the same free module.
    pub fn same_span(&self, other: &SubmodulePresentation) -> Result<bool> {
        Ok(self.row_degrees() == other.row_degrees() && self.gb()? == other.gb()?)
    }

    /// Hilbert series of the module this presentation describes.
    pub fn hilbert_series(&self) -> Result<HilbertSeries> {
        let quotient = self.gb()?.quotient_series();
        Ok(match self.mode {
            PresentationMode::Cokernel => quotient,
            PresentationMode::Submodule => free_series(&self.ring, self.row_degrees()).sub(&quotient),
        })
    }

    /// Length over `R`; `None` when infinite.
    pub fn length(&self) -> Result<Option<u64>> {
        Ok(self.hilbert_series()?.length())
    }

    /// Krull dimension; `-1` for the zero module.
    pub fn dimension(&self) -> Result<i64> {
        Ok(self.hilbert_series()?.dimension())
    }

    /// Minimal homogeneous generators of the span, reduced modulo `I`.
    pub fn minimal_generators(&self) -> Result<Matrix> {
        minimal_generators(&self.ring, &self.matrix)
    }
}

/// Hilbert series of `F / I F`.
pub fn free_series(ring: &QuotientRing, rowdeg: &[i64]) -> HilbertSeries {
    let lead = ring.leading_monomials().to_vec();
    module_series(&vec![lead; rowdeg.len()], rowdeg, ring.nvars())
}

fn ideal_relations(ring: &QuotientRing, positions: std::ops::Range<usize>) -> Vec<SVec> {
    let mut out = Vec::new();
    for k in positions {
        for g in ring.ideal_basis() {
            out.push(SVec::from_polynomial_at(g, k as u32));
        }
    }
    out
}

fn span_basis(ring: &QuotientRing, rowdeg: &[i64], cols: &[SVec]) -> Result<GroebnerBasis> {
    let mut gens = ideal_relations(ring, 0..rowdeg.len());
    gens.extend(cols.iter().cloned());
    let elems = reduced_basis(*ring.field(), rowdeg, &gens, ring.limits().max_gb_size)?;
    Ok(GroebnerBasis::from_svecs(ring, rowdeg.to_vec(), elems))
}

/// Groebner basis of the span of the columns of `gens`, over `S` or of `span + I F`.
pub fn groebner_basis(ring: &QuotientRing, gens: &Matrix, over_quotient: bool) -> Result<GroebnerBasis> {
    if over_quotient {
        return span_basis(ring, gens.row_degrees(), &gens.svec_columns());
    }
    let elems = reduced_basis(*ring.field(), gens.row_degrees(), &gens.svec_columns(), ring.limits().max_gb_size)?;
    Ok(GroebnerBasis::from_svecs(ring, gens.row_degrees().to_vec(), elems))
}

/// Normal form of `v` with respect to `gb`.
pub fn normal_form(v: &[Polynomial], gb: &GroebnerBasis) -> ModuleElement {
    gb.normal_form(v)
}

/// Augmented basis for `A: S^a -> F` modulo relations `L`.
struct Augmented {
    b: usize,
    a: usize,
    elems: Vec<SVec>,
    reducer: Reducer,
}

fn augmented(
    ring: &QuotientRing,
    top_rowdeg: &[i64],
    cols: &[SVec],
    col_degs: &[i64],
    relations: &[SVec],
    track_mod_ideal: bool,
) -> Result<Augmented> {
    let b = top_rowdeg.len();
    let a = cols.len();
    let mut rowdeg = top_rowdeg.to_vec();
    rowdeg.extend_from_slice(col_degs);
    let one = Monomial::one(ring.nvars());
    let mut gens: Vec<SVec> = Vec::with_capacity(a + relations.len());
    for (j, c) in cols.iter().enumerate() {
        let mut terms = c.terms.clone();
        terms.push(Term { pos: (b + j) as u32, mono: one.clone(), coef: 1 });
        gens.push(SVec { terms });
    }
    gens.extend(relations.iter().cloned());
    if track_mod_ideal {
        gens.extend(ideal_relations(ring, b..b + a));
    }
    let elems = reduced_basis(*ring.field(), &rowdeg, &gens, ring.limits().max_gb_size)?;
    Ok(Augmented { b, a, reducer: Reducer::new(ring.field(), &elems), elems })
}

impl Augmented {
    /// Elements of the preimage, in `S^a` coordinates.
    fn kernel(&self) -> Vec<SVec> {
        self.elems
            .iter()
            .filter(|v| v.lead().unwrap().pos as usize >= self.b)
            .map(|v| v.restrict(self.b as u32, (self.b + self.a) as u32).shift_positions(-(self.b as i64)))
            .collect()
    }

    /// `c` with `A c = v` modulo the relations, if `v` lies in the image.
    fn lift(&self, ring: &QuotientRing, v: &SVec) -> Option<SVec> {
        let rest = self.reducer.reduce_head_block(ring.field(), v, self.b as u32)?;
        let w = rest.shift_positions(-(self.b as i64));
        Some(w.scale(ring.field(), ring.field().neg(1)))
    }
}

fn reduce_columns_mod(ring: &QuotientRing, rank: usize, v: &SVec) -> SVec {
    SVec::from_components(&ring.reduce_vector(&v.to_components(rank)))
}

/// `{c in R^a : A c in sub + I F}` (over `R`), or `{c in S^a : A c in sub}` (over `S`).
/// Returns raw generators, not necessarily minimal.
fn preimage_raw(ring: &QuotientRing, a: &Matrix, sub: &[SVec], over_quotient: bool) -> Result<Vec<SVec>> {
    let mut rel: Vec<SVec> = sub.to_vec();
    if over_quotient {
        rel.extend(ideal_relations(ring, 0..a.nrows()));
    }
    let aug = augmented(ring, a.row_degrees(), &a.svec_columns(), a.col_degrees(), &rel, over_quotient)?;
    let mut ker = aug.kernel();
    if over_quotient {
        ker = ker.iter().map(|v| reduce_columns_mod(ring, a.ncols(), v)).filter(|v| !v.is_zero()).collect();
    }
    Ok(ker)
}

fn svecs_to_matrix(rank_rowdeg: &[i64], vs: &[SVec]) -> Matrix {
    let cols: Vec<ModuleElement> = vs.iter().map(|v| v.to_components(rank_rowdeg.len())).collect();
    let degs = vs.iter().map(|v| v.degree(rank_rowdeg).unwrap_or(0)).collect();
    Matrix::with_parts(rank_rowdeg.to_vec(), degs, cols)
}

/// Minimal homogeneous generators of `span(cols) + I F` modulo `I F`, each reduced modulo `I`.
fn minimal_svecs(ring: &QuotientRing, rowdeg: &[i64], cands: &[SVec]) -> Result<Vec<SVec>> {
    let mut cands: Vec<SVec> = cands
        .iter()
        .map(|v| reduce_columns_mod(ring, rowdeg.len(), v).monic(ring.field()))
        .filter(|v| !v.is_zero())
        .collect();
    cands.sort_by(|x, y| {
        let (tx, ty) = (x.lead().unwrap(), y.lead().unwrap());
        x.degree(rowdeg)
            .cmp(&y.degree(rowdeg))
            .then_with(|| engine::cmp_pot(tx.pos, &tx.mono, ty.pos, &ty.mono))
    });
    cands.dedup();
    let mut builder = Builder::new(*ring.field(), rowdeg.to_vec(), ring.limits().max_gb_size);
    let mut rel = ideal_relations(ring, 0..rowdeg.len());
    rel.sort_by_key(|v| v.degree(rowdeg).unwrap());
    let mut rel_iter = rel.into_iter().peekable();
    let mut kept = Vec::new();
    for c in cands {
        let d = c.degree(rowdeg).unwrap();
        while let Some(r) = rel_iter.peek() {
            if r.degree(rowdeg).unwrap() > d {
                break;
            }
            builder.add(&rel_iter.next().unwrap())?;
        }
        builder.run(Some(d))?;
        if builder.add(&c)? {
            kept.push(c);
        }
    }
    Ok(kept)
}

/// Minimal homogeneous generators over `R` of the column span of `m`.
pub fn minimal_generators(ring: &QuotientRing, m: &Matrix) -> Result<Matrix> {
    let kept = minimal_svecs(ring, m.row_degrees(), &m.svec_columns())?;
    Ok(svecs_to_matrix(m.row_degrees(), &kept))
}

/// Generators of the syzygies of the columns of `a`: over `R` (minimal) or over `S`.
pub fn syzygy_generators(ring: &QuotientRing, a: &Matrix, over_quotient: bool) -> Result<Matrix> {
    let raw = preimage_raw(ring, a, &[], over_quotient)?;
    if over_quotient {
        let kept = minimal_svecs(ring, a.col_degrees(), &raw)?;
        Ok(svecs_to_matrix(a.col_degrees(), &kept))
    } else {
        Ok(svecs_to_matrix(a.col_degrees(), &raw))
    }
}

/// Minimal generators of `ker(a)` over `R`.
pub fn kernel_over_quotient(ring: &QuotientRing, a: &Matrix) -> Result<Matrix> {
    syzygy_generators(ring, a, true)
}

/// Generators of `ker(a)` over `R`, without pruning to a minimal set.
pub fn kernel_raw(ring: &QuotientRing, a: &Matrix) -> Result<Matrix> {
    let raw = preimage_raw(ring, a, &[], true)?;
    Ok(svecs_to_matrix(a.col_degrees(), &raw))
}

/// Minimal generators of `{c in R^a : a c in span(sub)}`; `sub` shares the target of `a`.
pub fn preimage(ring: &QuotientRing, a: &Matrix, sub: &Matrix) -> Result<Matrix> {
    if a.row_degrees() != sub.row_degrees() {
        return Err(Error::AmbientMismatch("preimage target differs from submodule ambient".into()));
    }
    let raw = preimage_raw(ring, a, &sub.svec_columns(), true)?;
    let kept = minimal_svecs(ring, a.col_degrees(), &raw)?;
    Ok(svecs_to_matrix(a.col_degrees(), &kept))
}

/// `c` with `n c = v` over `R`, or `None` when `v` is not in the span of the columns of `n`.
pub fn membership_lift(ring: &QuotientRing, v: &[Polynomial], n: &Matrix) -> Result<Option<ModuleElement>> {
    if v.len() != n.nrows() {
        return Err(Error::AmbientMismatch("vector and submodule live in different free modules".into()));
    }
    let rel = ideal_relations(ring, 0..n.nrows());
    let aug = augmented(ring, n.row_degrees(), &n.svec_columns(), n.col_degrees(), &rel, true)?;
    let target = SVec::from_components(v);
    Ok(aug.lift(ring, &target).map(|c| ring.reduce_vector(&c.to_components(n.ncols()))))
}

/// `(N :_F f) = {v in F : f v in N}` for a submodule `N` of `F` over `R`.
pub fn ideal_quotient(n: &SubmodulePresentation, f: &Polynomial) -> Result<SubmodulePresentation> {
    let ring = n.ring();
    let f = ring.reduce(f);
    if f.is_zero() {
        return Err(Error::ZeroDivisorQuery);
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous(ring.format(&f)));
    }
    let r = n.rank();
    let rowdeg = n.row_degrees().to_vec();
    let fd = f.degree().unwrap() as i64;
    let cols: Vec<ModuleElement> = (0..r)
        .map(|k| (0..r).map(|i| if i == k { f.clone() } else { Polynomial::zero() }).collect())
        .collect();
    let a = Matrix::with_parts(rowdeg.clone(), rowdeg.iter().map(|d| d + fd).collect(), cols);
    // `a` maps F(-deg f) -> F; relabel the source as F after the computation
    let raw = preimage_raw(ring, &a, &n.matrix().svec_columns(), true)?;
    let gens = raw
        .iter()
        .map(|v| v.to_components(r))
        .collect::<Vec<_>>();
    let m = Matrix::from_columns(rowdeg, gens)?;
    let m = minimal_generators(ring, &m)?;
    SubmodulePresentation::submodule(ring.clone(), m)
}

/// `(N :_F m)` for the irrelevant ideal `m`.
pub fn colon_by_maximal(n: &SubmodulePresentation) -> Result<SubmodulePresentation> {
    let ring = n.ring();
    let nv = ring.nvars();
    let r = n.rank();
    let rowdeg = n.row_degrees();
    // stacked map F -> F(+1)^nvars, v -> (x_1 v, .., x_n v)
    let mut top_rowdeg = Vec::with_capacity(nv * r);
    for _ in 0..nv {
        top_rowdeg.extend(rowdeg.iter().map(|d| d - 1));
    }
    let mut cols: Vec<ModuleElement> = Vec::with_capacity(r);
    for k in 0..r {
        let mut col = vec![Polynomial::zero(); nv * r];
        for i in 0..nv {
            col[i * r + k] = ring.var(i);
        }
        cols.push(col);
    }
    let a = Matrix::with_parts(top_rowdeg, rowdeg.to_vec(), cols);
    let mut sub = Vec::new();
    for i in 0..nv {
        for c in n.matrix().svec_columns() {
            sub.push(c.shift_positions((i * r) as i64));
        }
    }
    let raw = preimage_raw(ring, &a, &sub, true)?;
    let m = svecs_to_matrix(rowdeg, &raw);
    let m = minimal_generators(ring, &m.hcat(&minimal_generators(ring, n.matrix())?)?)?;
    SubmodulePresentation::submodule(ring.clone(), m)
}

/// `(N :_F m^infinity)`, iterating colons until the span stabilizes.
pub fn saturate_at_irrelevant(n: &SubmodulePresentation) -> Result<SubmodulePresentation> {
    let mut cur = n.clone();
    loop {
        let next = colon_by_maximal(&cur)?;
        if next.same_span(&cur)? {
            return Ok(next);
        }
        cur = next;
    }
}

/// Length of the module a presentation describes; `None` when infinite.
pub fn length(n: &SubmodulePresentation) -> Result<Option<u64>> {
    n.length()
}

/// Krull dimension of the module a presentation describes.
pub fn dimension(n: &SubmodulePresentation) -> Result<i64> {
    n.dimension()
}

/// Splits off unit entries of a presentation matrix: a column with a nonzero
/// constant in row `r` eliminates generator `r`. The cokernel is unchanged.
pub fn prune_presentation(ring: &QuotientRing, m: &Matrix) -> Matrix {
    let f = ring.field();
    let mut rowdeg = m.row_degrees().to_vec();
    let mut coldeg = m.col_degrees().to_vec();
    let mut cols: Vec<ModuleElement> = m.columns().iter().map(|c| ring.reduce_vector(c)).collect();
    loop {
        let mut pivot = None;
        'search: for (c, col) in cols.iter().enumerate() {
            for (r, e) in col.iter().enumerate() {
                if e.is_unit() {
                    pivot = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((r, c)) = pivot else { break };
        let u = cols[c][r].constant_term();
        let uinv = f.inv(u);
        let pc = cols[c].clone();
        for (k, col) in cols.iter_mut().enumerate() {
            if k == c || col[r].is_zero() {
                continue;
            }
            // col -= (col[r] / u) * pc
            let factor = col[r].scale(f, uinv);
            for (i, e) in col.iter_mut().enumerate() {
                if !pc[i].is_zero() {
                    *e = ring.reduce(&e.sub(f, &pc[i].mul(f, &factor)));
                }
            }
        }
        cols.remove(c);
        coldeg.remove(c);
        for col in cols.iter_mut() {
            col.remove(r);
        }
        rowdeg.remove(r);
    }
    let keep: Vec<usize> = (0..cols.len()).filter(|&c| cols[c].iter().any(|e| !e.is_zero())).collect();
    Matrix::with_parts(
        rowdeg,
        keep.iter().map(|&c| coldeg[c]).collect(),
        keep.iter().map(|&c| cols[c].clone()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn polys(ring: &QuotientRing, xs: &[&str]) -> Vec<Polynomial> {
        xs.iter().map(|s| ring.parse(s).unwrap()).collect()
    }

    #[test]
    fn syzygies_of_a_row_over_the_quotient() {
        let r = make_ring(5, &["x", "y"], &["x^2", "x*y"]).unwrap();
        let a = Matrix::from_columns(vec![0], vec![polys(&r, &["x"]), polys(&r, &["y"])]).unwrap();
        let k = kernel_over_quotient(&r, &a).unwrap();
        assert_eq!(k.ncols(), 3);
        assert!(k.col_degrees().iter().all(|&d| d == 2));
        let expected = Matrix::from_columns(
            vec![1, 1],
            vec![polys(&r, &["x", "0"]), polys(&r, &["y", "0"]), polys(&r, &["0", "x"])],
        )
        .unwrap();
        let s1 = SubmodulePresentation::submodule(r.clone(), k).unwrap();
        let s2 = SubmodulePresentation::submodule(r.clone(), expected).unwrap();
        assert!(s1.same_span(&s2).unwrap());
    }

    #[test]
    fn syzygies_over_the_polynomial_ring_are_koszul() {
        let r = make_ring(7, &["x", "y", "z"], &[]).unwrap();
        let a = Matrix::from_columns(vec![0], vec![polys(&r, &["x"]), polys(&r, &["y"]), polys(&r, &["z"])]).unwrap();
        let k = syzygy_generators(&r, &a, false).unwrap();
        assert_eq!(k.ncols(), 3);
        for c in k.columns() {
            assert!(a.apply(&r, c).iter().all(|f| f.is_zero()));
        }
    }

    #[test]
    fn colon_and_saturation() {
        let r = make_ring(5, &["x", "y"], &["x^2", "x*y"]).unwrap();
        let zero = SubmodulePresentation::ideal(r.clone(), vec![]).unwrap();
        let h0 = saturate_at_irrelevant(&zero).unwrap();
        let x = SubmodulePresentation::ideal(r.clone(), polys(&r, &["x"])).unwrap();
        assert!(h0.same_span(&x).unwrap());
        assert_eq!(h0.length().unwrap(), Some(1));
        let q = ideal_quotient(&zero, &r.parse("y").unwrap()).unwrap();
        assert!(q.same_span(&x).unwrap());
    }

    #[test]
    fn lifting_through_generators() {
        let r = make_ring(5, &["x", "y"], &["x^2", "x*y"]).unwrap();
        let n = Matrix::from_columns(vec![0], vec![polys(&r, &["x + y"]), polys(&r, &["y^2"])]).unwrap();
        let v = polys(&r, &["y^3 + x*y + y^2"]);
        let c = membership_lift(&r, &v, &n).unwrap().unwrap();
        let back = r.reduce_vector(&n.apply(&r, &c));
        assert_eq!(back, r.reduce_vector(&v));
        assert!(membership_lift(&r, &polys(&r, &["x"]), &n).unwrap().is_none());
    }

    #[test]
    fn pruning_removes_unit_entries() {
        let r = make_ring(5, &["x", "y"], &[]).unwrap();
        // coker [[1, x], [y, 0]] with rows in degree (1, 0)
        let m = Matrix::new(
            vec![1, 0],
            vec![1, 2],
            vec![polys(&r, &["1", "y"]), polys(&r, &["x", "0"])],
        )
        .unwrap();
        let p = prune_presentation(&r, &m);
        assert_eq!(p.nrows(), 1);
        let c = SubmodulePresentation::cokernel(r.clone(), p).unwrap();
        let orig = SubmodulePresentation::cokernel(r.clone(), m).unwrap();
        assert_eq!(c.hilbert_series().unwrap(), orig.hilbert_series().unwrap());
    }

    #[test]
    fn resource_bound_is_reported() {
        let r = make_ring(5, &["x", "y", "z"], &[]).unwrap();
        let r = r.with_limits(crate::ring::Limits { max_gb_size: 2 });
        let a = Matrix::from_columns(
            vec![0],
            vec![polys(&r, &["x^2 + y*z"]), polys(&r, &["y^2 + x*z"]), polys(&r, &["z^2 + x*y"])],
        )
        .unwrap();
        assert_eq!(groebner_basis(&r, &a, false).unwrap_err(), Error::ResourceBound(2));
    }
}
