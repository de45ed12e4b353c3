//! Lengths of homology of free complexes over `R`, Tor and Ext against Frobenius
//! twists, a degreewise linear-algebra oracle, and finite projective dimension
//! certificates.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::frobenius::{twist_complex, BracketLevel};
use crate::groebner::{kernel_over_quotient, membership_lift, Matrix, SubmodulePresentation};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::resolution::{resolve, FreeComplex, MinimalResolution};
use crate::ring::QuotientRing;

/// `ker(kernel_of) / im(image_of)` presented as `coker([C | Syz(K)])` on the kernel generators `K`.
#[derive(Debug, Clone)]
pub struct SubquotientPresentation {
    pub kernel: Matrix,
    pub lifted_image: Matrix,
    pub kernel_syzygies: Matrix,
    pub presented: SubmodulePresentation,
}

/// Builds the subquotient; `image_of` must map into the source of `kernel_of` with image in its kernel.
pub fn subquotient(ring: &Arc<QuotientRing>, kernel_of: &Matrix, image_of: &Matrix) -> Result<SubquotientPresentation> {
    if kernel_of.col_degrees() != image_of.row_degrees() {
        return Err(Error::AmbientMismatch("maps do not compose".into()));
    }
    let k = kernel_over_quotient(ring, kernel_of)?;
    let mut lifted = Vec::with_capacity(image_of.ncols());
    for col in image_of.columns() {
        let c = membership_lift(ring, col, &k)?.ok_or(Error::LiftFailure)?;
        lifted.push(c);
    }
    let lifted = Matrix::with_parts(k.col_degrees().to_vec(), image_of.col_degrees().to_vec(), lifted);
    let syz = kernel_over_quotient(ring, &k)?;
    let presented = SubmodulePresentation::cokernel(ring.clone(), lifted.hcat(&syz)?)?;
    Ok(SubquotientPresentation { kernel: k, lifted_image: lifted, kernel_syzygies: syz, presented })
}

/// `lambda(H_i(C))`; `None` when infinite.
pub fn homology_length(c: &FreeComplex, i: usize) -> Result<Option<u64>> {
    let phi_i = c.map_or_zero(i as i64);
    let phi_next = c.map_or_zero(i as i64 + 1);
    subquotient(c.ring(), &phi_i, &phi_next)?.presented.length()
}

/// `lambda(H_i(C))` from Hilbert series of the kernel and image spans.
pub fn homology_length_by_series(c: &FreeComplex, i: usize) -> Result<Option<u64>> {
    let ring = c.ring();
    let k = kernel_over_quotient(ring, &c.map_or_zero(i as i64))?;
    let im = c.map_or_zero(i as i64 + 1);
    let sk = SubmodulePresentation::submodule(ring.clone(), k)?.hilbert_series()?;
    let si = SubmodulePresentation::submodule(ring.clone(), im)?.hilbert_series()?;
    Ok(sk.sub(&si).length())
}

/// The module `N` in `Tor_i(M, ^e N)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Ring,
    /// `R / p` for the ideal generated by these elements.
    Quotient(Vec<Polynomial>),
}

fn require_finite_length(m: &SubmodulePresentation) -> Result<()> {
    if m.dimension()? > 0 {
        return Err(Error::InfiniteLength);
    }
    Ok(())
}

/// `lambda(Tor_i(M, ^e N))` from a resolution computed through at least `i + 1`.
pub fn tor_length_from(res: &MinimalResolution, i: usize, e: u32, coefficients: &Coefficients) -> Result<u64> {
    if res.steps() < i + 1 && res.betti.last().copied().unwrap_or(0) != 0 {
        return Err(Error::InvalidArgument(format!("resolution must reach degree {}", i + 1)));
    }
    let ring = res.ring();
    let level = BracketLevel::new(ring.p(), e)?;
    let twisted = twist_complex(&res.complex, level)?;
    let c = match coefficients {
        Coefficients::Ring => twisted,
        Coefficients::Quotient(p) => twisted.base_change(ring.quotient_by(p)?)?,
    };
    homology_length(&c, i)?.ok_or(Error::InfiniteLength)
}

/// `lambda(Tor_i(M, ^e N))` with `N = R` or `N = R / p`.
pub fn tor_length(m: &SubmodulePresentation, i: usize, e: u32, coefficients: &Coefficients) -> Result<u64> {
    require_finite_length(m)?;
    let res = resolve(m, i + 1, true)?;
    tor_length_from(&res, i, e, coefficients)
}

/// `lambda(Ext^i(M, ^e R))` from a resolution computed through at least `i + 1`.
pub fn ext_length_from(res: &MinimalResolution, i: usize, e: u32) -> Result<u64> {
    let ring = res.ring();
    let level = BracketLevel::new(ring.p(), e)?;
    let twisted = twist_complex(&res.complex, level)?;
    // cochain maps d^i = (phi_{i+1}^[q])^T : G_i^* -> G_{i+1}^*
    let d_i = twisted.map_or_zero(i as i64 + 1).transpose();
    let d_prev = twisted.map_or_zero(i as i64).transpose();
    subquotient(ring, &d_i, &d_prev)?.presented.length()?.ok_or(Error::InfiniteLength)
}

/// `lambda(Ext^i(M, ^e R))`, from the transposed bracket-powered resolution.
pub fn ext_length(m: &SubmodulePresentation, i: usize, e: u32) -> Result<u64> {
    require_finite_length(m)?;
    let res = resolve(m, i + 1, true)?;
    ext_length_from(&res, i, e)
}

/// Result of the degreewise oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleResult {
    pub value: u64,
    /// The last three degrees up to the bound contributed nothing.
    pub stabilized: bool,
}

fn monomials_of_degree(nvars: usize, d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps));
            return;
        }
        for a in (0..=left).rev() {
            exps[i] = a;
            rec(i + 1, left - a, exps, out);
        }
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d as u32, &mut exps, &mut out);
    out
}

/// Row echelon form over `F_p`; returns the reduced rows with their pivot columns.
fn echelon(field: &PrimeField, mut rows: Vec<Vec<u32>>) -> Vec<(usize, Vec<u32>)> {
    let mut out: Vec<(usize, Vec<u32>)> = Vec::new();
    for row in rows.iter_mut() {
        for (p, r) in &out {
            let c = row[*p];
            if c != 0 {
                let t = field.neg(c);
                for (x, y) in row.iter_mut().zip(r) {
                    if *y != 0 {
                        *x = field.add(*x, field.mul(t, *y));
                    }
                }
            }
        }
        if let Some(p) = row.iter().position(|&x| x != 0) {
            let inv = field.inv(row[p]);
            let r: Vec<u32> = row.iter().map(|&x| field.mul(x, inv)).collect();
            // keep earlier rows reduced at the new pivot
            for (_, q) in out.iter_mut() {
                let c = q[p];
                if c != 0 {
                    let t = field.neg(c);
                    for (x, y) in q.iter_mut().zip(&r) {
                        if *y != 0 {
                            *x = field.add(*x, field.mul(t, *y));
                        }
                    }
                }
            }
            out.push((p, r));
        }
    }
    out
}

fn rank(field: &PrimeField, rows: Vec<Vec<u32>>) -> usize {
    echelon(field, rows).len()
}

/// `R_s = S_s / I_s` by Macaulay-matrix linear algebra, no Groebner bases involved.
struct GradedPiece {
    monos: Vec<Monomial>,
    index: std::collections::HashMap<Monomial, usize>,
    ideal_rows: Vec<(usize, Vec<u32>)>,
    basis_cols: Vec<usize>,
}

impl GradedPiece {
    fn new(ring: &QuotientRing, s: i64) -> Self {
        let field = ring.field();
        let monos = monomials_of_degree(ring.nvars(), s);
        let index: std::collections::HashMap<Monomial, usize> =
            monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for g in ring.generators() {
            let gd = g.degree().unwrap() as i64;
            for mult in monomials_of_degree(ring.nvars(), s - gd) {
                let mut row = vec![0u32; monos.len()];
                for (c, m) in g.terms() {
                    row[index[&m.mul(&mult)]] = *c;
                }
                rows.push(row);
            }
        }
        let ideal_rows = echelon(field, rows);
        let pivots: std::collections::HashSet<usize> = ideal_rows.iter().map(|(p, _)| *p).collect();
        let basis_cols = (0..monos.len()).filter(|c| !pivots.contains(c)).collect();
        GradedPiece { monos, index, ideal_rows, basis_cols }
    }

    fn dim(&self) -> usize {
        self.basis_cols.len()
    }

    /// Coordinates of a degree-`s` polynomial in the quotient basis.
    fn project(&self, field: &PrimeField, f: &Polynomial) -> Vec<u32> {
        let mut v = vec![0u32; self.monos.len()];
        for (c, m) in f.terms() {
            v[self.index[m]] = *c;
        }
        for (p, r) in &self.ideal_rows {
            let c = v[*p];
            if c != 0 {
                let t = field.neg(c);
                for (x, y) in v.iter_mut().zip(r) {
                    if *y != 0 {
                        *x = field.add(*x, field.mul(t, *y));
                    }
                }
            }
        }
        self.basis_cols.iter().map(|&c| v[c]).collect()
    }
}

/// Matrix of `phi` restricted to internal degree `t`, rows indexed by the source basis.
fn degree_map(
    ring: &QuotientRing,
    pieces: &mut std::collections::HashMap<i64, GradedPiece>,
    phi: &Matrix,
    t: i64,
) -> (usize, Vec<Vec<u32>>) {
    let field = *ring.field();
    for &d in phi.row_degrees().iter().chain(phi.col_degrees()) {
        pieces.entry(t - d).or_insert_with(|| GradedPiece::new(ring, t - d));
    }
    let target_dims: Vec<usize> = phi.row_degrees().iter().map(|d| pieces[&(t - d)].dim()).collect();
    let target_total: usize = target_dims.iter().sum();
    let mut rows = Vec::new();
    let mut source_dim = 0;
    for (c, &cd) in phi.col_degrees().iter().enumerate() {
        let src = &pieces[&(t - cd)];
        for &bc in &src.basis_cols {
            source_dim += 1;
            let b = Polynomial::monomial(1, src.monos[bc].clone());
            let mut image = Vec::with_capacity(target_total);
            for (r, &rd) in phi.row_degrees().iter().enumerate() {
                let piece = &pieces[&(t - rd)];
                let e = phi.entry(r, c);
                if e.is_zero() {
                    image.extend(std::iter::repeat_n(0, piece.dim()));
                } else {
                    image.extend(piece.project(&field, &e.mul(&field, &b)));
                }
            }
            rows.push(image);
        }
    }
    (source_dim, rows)
}

/// Default degree bound: entry degrees times complex length plus the top generator degree, plus 10.
pub fn default_degree_bound(c: &FreeComplex) -> i64 {
    let mut max_entry = 0i64;
    for m in c.maps() {
        for (cidx, col) in m.columns().iter().enumerate() {
            for (r, e) in col.iter().enumerate() {
                if !e.is_zero() {
                    max_entry = max_entry.max(m.col_degrees()[cidx] - m.row_degrees()[r]);
                }
            }
        }
    }
    let top_gen = c.degrees().iter().flatten().copied().max().unwrap_or(0);
    max_entry * (c.top() as i64).max(1) + top_gen.max(0) + 10
}

/// `sum_t dim H_i(C)_t` for internal degrees up to `bound`, by linear algebra over `F_p`
/// in each degree.
pub fn degreewise_homology_oracle(c: &FreeComplex, i: usize, bound: i64) -> OracleResult {
    let ring = c.ring().clone();
    let field = *ring.field();
    let phi_i = c.map_or_zero(i as i64);
    let phi_next = c.map_or_zero(i as i64 + 1);
    let gens = c.degrees_at(i as i64);
    let Some(&lo) = gens.iter().min() else {
        return OracleResult { value: 0, stabilized: true };
    };
    let mut pieces = std::collections::HashMap::new();
    let mut total = 0u64;
    let mut last_nonzero = lo - 1;
    for t in lo..=bound {
        let (dim_t, rows_i) = degree_map(&ring, &mut pieces, &phi_i, t);
        let (_, rows_next) = degree_map(&ring, &mut pieces, &phi_next, t);
        let contrib = dim_t - rank(&field, rows_i) - rank(&field, rows_next);
        if contrib > 0 {
            last_nonzero = t;
        }
        total += contrib as u64;
    }
    OracleResult { value: total, stabilized: bound - last_nonzero >= 3 }
}

/// `true` iff `Tor_i(M, ^e R) = 0` for `i = t+1 .. 2t+1`; a certificate of finite projective dimension.
pub fn finite_pd_certificate(m: &SubmodulePresentation, e: u32, depth: usize) -> Result<bool> {
    require_finite_length(m)?;
    let res = resolve(m, 2 * depth + 2, true)?;
    for i in depth + 1..=2 * depth + 1 {
        if tor_length_from(&res, i, e, &Coefficients::Ring)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `true` iff `Tor_i(M, ^e R) = 0` for every `1 <= i <= max_i` and `e` in range; finite pd forces this.
pub fn twisted_tor_vanishing(m: &SubmodulePresentation, max_i: usize, e_range: std::ops::RangeInclusive<u32>) -> Result<bool> {
    require_finite_length(m)?;
    let res = resolve(m, max_i + 1, true)?;
    for e in e_range {
        for i in 1..=max_i {
            if tor_length_from(&res, i, e, &Coefficients::Ring)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn hk_identity_on_r1() {
        let r = r1(5).unwrap();
        let k = residue_field(&r);
        assert_eq!(tor_length(&k, 0, 1, &Coefficients::Ring).unwrap(), 6);
        assert_eq!(tor_length(&k, 0, 0, &Coefficients::Ring).unwrap(), 1);
    }

    #[test]
    fn regular_ring_tor_vanishes() {
        let r = r2(5).unwrap();
        let k = residue_field(&r);
        for e in 0..3 {
            assert_eq!(tor_length(&k, 1, e, &Coefficients::Ring).unwrap(), 0);
        }
        assert_eq!(ext_length(&k, 0, 1).unwrap(), 0);
        assert_eq!(ext_length(&k, 1, 1).unwrap(), 5);
        assert_eq!(ext_length(&k, 1, 2).unwrap(), 25);
    }

    #[test]
    fn ext_zero_over_r1_is_one() {
        let r = r1(5).unwrap();
        let k = residue_field(&r);
        assert_eq!(ext_length(&k, 0, 1).unwrap(), 1);
        assert_eq!(ext_length(&k, 0, 2).unwrap(), 1);
    }

    #[test]
    fn oracle_matches_on_twisted_residue_field() {
        let r = r1(5).unwrap();
        let res = resolve(&residue_field(&r), 2, true).unwrap();
        let tw = twist_complex(&res.complex, BracketLevel::new(5, 1).unwrap()).unwrap();
        let o = degreewise_homology_oracle(&tw, 0, 10);
        assert_eq!(o, OracleResult { value: 6, stabilized: true });
        let h1 = homology_length(&tw, 1).unwrap().unwrap();
        let o1 = degreewise_homology_oracle(&tw, 1, default_degree_bound(&tw));
        assert!(o1.stabilized);
        assert_eq!(o1.value, h1);
        assert_eq!(homology_length_by_series(&tw, 1).unwrap(), Some(h1));
    }

    #[test]
    fn infinite_length_module_is_rejected() {
        let r = r1(5).unwrap();
        let m = quotient(&r, &["x"]).unwrap();
        assert_eq!(tor_length(&m, 0, 1, &Coefficients::Ring), Err(Error::InfiniteLength));
    }

    #[test]
    fn certificates() {
        let r = r3(5).unwrap();
        let m = quotient(&r, &["x + y"]).unwrap();
        assert!(finite_pd_certificate(&m, 1, 1).unwrap());
        let k1 = residue_field(&r1(5).unwrap());
        assert!(!finite_pd_certificate(&k1, 1, 0).unwrap());
        let k2 = residue_field(&r2(5).unwrap());
        assert!(finite_pd_certificate(&k2, 1, 1).unwrap());
    }
}
