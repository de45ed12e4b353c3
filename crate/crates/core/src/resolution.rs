//! Graded free complexes and minimal free resolutions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::{
    kernel_over_quotient, kernel_raw, minimal_generators, prune_presentation, Matrix, ModuleElement,
    PresentationMode, SubmodulePresentation,
};
use crate::poly::Polynomial;
use crate::ring::QuotientRing;

/// `G_0 <- G_1 <- ... <- G_k` over `R`; `maps[j - 1]` is `phi_j: G_j -> G_{j-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeComplex {
    ring: Arc<QuotientRing>,
    degrees: Vec<Vec<i64>>,
    maps: Vec<Matrix>,
}

impl FreeComplex {
    pub fn new(ring: Arc<QuotientRing>, degrees: Vec<Vec<i64>>, maps: Vec<Matrix>) -> Result<Self> {
        if degrees.is_empty() || maps.len() + 1 != degrees.len() {
            return Err(Error::AmbientMismatch("a complex needs one more module than maps".into()));
        }
        for (j, m) in maps.iter().enumerate() {
            if m.row_degrees() != degrees[j].as_slice() || m.col_degrees() != degrees[j + 1].as_slice() {
                return Err(Error::AmbientMismatch(format!("map phi_{} does not chain", j + 1)));
            }
        }
        Ok(FreeComplex { ring, degrees, maps })
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    /// Generator degrees of `G_0 .. G_k`.
    pub fn degrees(&self) -> &[Vec<i64>] {
        &self.degrees
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.len()).collect()
    }

    /// Index of the last module.
    pub fn top(&self) -> usize {
        self.maps.len()
    }

    /// Generator degrees of `G_j`; empty outside the stored range.
    pub fn degrees_at(&self, j: i64) -> Vec<i64> {
        if j < 0 || j as usize >= self.degrees.len() {
            Vec::new()
        } else {
            self.degrees[j as usize].clone()
        }
    }

    /// `phi_j: G_j -> G_{j-1}`, the zero map outside the stored range.
    pub fn map_or_zero(&self, j: i64) -> Matrix {
        if j >= 1 && (j as usize) <= self.maps.len() {
            return self.maps[j as usize - 1].clone();
        }
        let n = self.ring.nvars();
        Matrix::zero(self.degrees_at(j - 1), self.degrees_at(j), n)
    }

    /// `phi_j phi_{j+1} = 0` modulo `I` for all stored `j`.
    pub fn is_complex(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !w[0].compose(&self.ring, &w[1])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// No matrix entry is a unit.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| m.columns().iter().all(|c| c.iter().all(|e| !self.ring.reduce(e).is_unit())))
    }

    /// The same complex with entries reduced modulo a larger ideal `ring` over the same variables.
    pub fn base_change(&self, ring: Arc<QuotientRing>) -> Result<FreeComplex> {
        if ring.poly() != self.ring.poly() {
            return Err(Error::AmbientMismatch("base change to a ring over different variables".into()));
        }
        let maps = self.maps.iter().map(|m| m.reduce_mod(&ring)).collect();
        Ok(FreeComplex { ring, degrees: self.degrees.clone(), maps })
    }

    /// `G_0 .. G_k` only.
    pub fn truncate(&self, k: usize) -> FreeComplex {
        let k = k.min(self.maps.len());
        FreeComplex { ring: self.ring.clone(), degrees: self.degrees[..=k].to_vec(), maps: self.maps[..k].to_vec() }
    }
}

/// A resolution of `module` through homological degree `betti.len() - 1`.
#[derive(Debug, Clone)]
pub struct MinimalResolution {
    pub complex: FreeComplex,
    pub betti: Vec<usize>,
    pub minimal: bool,
    pub module: SubmodulePresentation,
}

impl MinimalResolution {
    pub fn ring(&self) -> &Arc<QuotientRing> {
        self.complex.ring()
    }

    /// `phi_j`, zero outside the computed range.
    pub fn map(&self, j: usize) -> Matrix {
        self.complex.map_or_zero(j as i64)
    }

    pub fn steps(&self) -> usize {
        self.complex.top()
    }
}

/// Splits off every unit entry by row and column operations. The homology is unchanged.
pub fn minimize(c: &FreeComplex) -> FreeComplex {
    let ring = c.ring.clone();
    let f = *ring.field();
    let mut degrees = c.degrees.clone();
    let mut maps: Vec<Vec<ModuleElement>> =
        c.maps.iter().map(|m| m.columns().iter().map(|col| ring.reduce_vector(col)).collect()).collect();
    loop {
        let mut found = None;
        'outer: for (j, cols) in maps.iter().enumerate() {
            for (ci, col) in cols.iter().enumerate() {
                for (ri, e) in col.iter().enumerate() {
                    if e.is_unit() {
                        found = Some((j, ri, ci));
                        break 'outer;
                    }
                }
            }
        }
        let Some((j, r, ci)) = found else { break };
        // Schur complement of phi_{j+1} at (r, ci)
        let pivot = maps[j][ci].clone();
        let uinv = f.inv(pivot[r].constant_term());
        for (k, col) in maps[j].iter_mut().enumerate() {
            if k == ci || col[r].is_zero() {
                continue;
            }
            let t = col[r].scale(&f, uinv);
            for (i, e) in col.iter_mut().enumerate() {
                if !pivot[i].is_zero() {
                    *e = ring.reduce(&e.sub(&f, &pivot[i].mul(&f, &t)));
                }
            }
        }
        maps[j].remove(ci);
        for col in maps[j].iter_mut() {
            col.remove(r);
        }
        // the basis change leaves the split rows and columns of the neighbours zero
        if j + 1 < maps.len() {
            for col in maps[j + 1].iter_mut() {
                col.remove(ci);
            }
        }
        if j >= 1 {
            maps[j - 1].remove(r);
        }
        degrees[j + 1].remove(ci);
        degrees[j].remove(r);
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(j, cols)| Matrix::with_parts(degrees[j].clone(), degrees[j + 1].clone(), cols))
        .collect();
    FreeComplex { ring, degrees, maps }
}

/// Resolves a cokernel-mode module through homological degree `steps`.
///
/// With `minimize = true` each map is pruned to minimal generators as it is built;
/// otherwise raw kernel generators are used one step further and the complex is
/// minimized afterwards.
pub fn resolve(m: &SubmodulePresentation, steps: usize, minimize_each: bool) -> Result<MinimalResolution> {
    if m.mode() != PresentationMode::Cokernel {
        return Err(Error::InvalidArgument("resolve expects a cokernel presentation".into()));
    }
    let ring = m.ring().clone();
    let complex = if minimize_each {
        let pruned = prune_presentation(&ring, m.matrix());
        let mut degrees = vec![pruned.row_degrees().to_vec()];
        let mut maps = Vec::with_capacity(steps);
        if steps >= 1 {
            maps.push(minimal_generators(&ring, &pruned)?);
            degrees.push(maps[0].col_degrees().to_vec());
        }
        while maps.len() < steps {
            let next = kernel_over_quotient(&ring, maps.last().unwrap())?;
            degrees.push(next.col_degrees().to_vec());
            maps.push(next);
        }
        FreeComplex::new(ring.clone(), degrees, maps)?
    } else {
        let a = m.matrix().reduce_mod(&ring);
        let keep: Vec<usize> = (0..a.ncols()).filter(|&c| a.column(c).iter().any(|e| !e.is_zero())).collect();
        let a = a.select_columns(&keep);
        let mut degrees = vec![a.row_degrees().to_vec(), a.col_degrees().to_vec()];
        let mut maps = vec![a];
        while maps.len() < steps + 1 {
            let next = kernel_raw(&ring, maps.last().unwrap())?;
            degrees.push(next.col_degrees().to_vec());
            maps.push(next);
        }
        minimize(&FreeComplex::new(ring.clone(), degrees, maps)?).truncate(steps)
    };
    let betti = complex.ranks();
    Ok(MinimalResolution { minimal: complex.is_minimal(), complex, betti, module: m.clone() })
}

/// `Omega_i = im(phi_i)` inside `G_{i-1}` (and `Omega_0 = M`) with its length and dimension.
#[derive(Debug, Clone)]
pub struct SyzygyPresentation {
    pub index: usize,
    pub presentation: SubmodulePresentation,
    pub length: Option<u64>,
    pub dimension: i64,
}

/// The `i`-th syzygy of `m` read off an existing resolution computed at least through `i`.
pub fn syzygy_from(res: &MinimalResolution, i: usize) -> Result<SyzygyPresentation> {
    if i > res.steps() {
        return Err(Error::InvalidArgument(format!("resolution only computed through {}", res.steps())));
    }
    let presentation = if i == 0 {
        res.module.clone()
    } else {
        SubmodulePresentation::submodule(res.ring().clone(), res.map(i))?
    };
    Ok(SyzygyPresentation {
        index: i,
        length: presentation.length()?,
        dimension: presentation.dimension()?,
        presentation,
    })
}

/// The `i`-th syzygy of `m`.
pub fn syzygy(m: &SubmodulePresentation, i: usize) -> Result<SyzygyPresentation> {
    let res = resolve(m, i, true)?;
    syzygy_from(&res, i)
}

/// `true` when every entry of `a` lies in the ideal `h` (given by generators in `S`).
pub fn entries_in_ideal(ring: &QuotientRing, a: &Matrix, h: &[Polynomial]) -> Result<bool> {
    let ideal = SubmodulePresentation::ideal(Arc::new(ring.clone()), h.to_vec())?;
    for col in a.columns() {
        for e in col {
            if !e.is_zero() && !ideal.contains(std::slice::from_ref(e))? {
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
    fn residue_field_over_r1() {
        let r = r1(5).unwrap();
        let res = resolve(&residue_field(&r), 2, true).unwrap();
        assert_eq!(res.betti, vec![1, 2, 3]);
        assert!(res.minimal);
        assert!(res.complex.is_complex().unwrap());
    }

    #[test]
    fn residue_field_over_r2_is_koszul() {
        let r = r2(5).unwrap();
        let res = resolve(&residue_field(&r), 2, true).unwrap();
        assert_eq!(res.betti, vec![1, 1, 0]);
    }

    #[test]
    fn r5_module_shape() {
        let r = r5(101).unwrap();
        let m = r5_module(&r).unwrap();
        let res = resolve(&m, 3, true).unwrap();
        // z^2 lies in the ideal, so the map R^3 -> R has a zero column and splits off
        assert_eq!(res.betti, vec![3, 1, 1, 2]);
        assert!(res.complex.is_complex().unwrap());
    }

    #[test]
    fn r5_displayed_complex_is_exact() {
        use crate::homology::homology_length;
        let r = r5(101).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        let col = Matrix::from_columns(vec![1, 1, 0], vec![vec![p("u"), p("v"), p("z^2")]]).unwrap();
        let y = Matrix::new(vec![2], vec![3], vec![vec![p("y")]]).unwrap();
        let row = Matrix::new(vec![3], vec![4, 4, 5], vec![vec![p("u")], vec![p("v")], vec![p("z^2")]]).unwrap();
        let c = FreeComplex::new(r.clone(), vec![vec![1, 1, 0], vec![2], vec![3], vec![4, 4, 5]], vec![col, y, row])
            .unwrap();
        assert!(c.is_complex().unwrap());
        assert_eq!(homology_length(&c, 1).unwrap(), Some(0));
        assert_eq!(homology_length(&c, 2).unwrap(), Some(0));
        // exact but not minimal: the last map has a zero column in R
        assert!(r.is_zero(&p("z^2")));
    }

    #[test]
    fn r5_without_the_redundant_quadric() {
        let gens: Vec<&str> = R5_IDEAL.iter().copied().filter(|g| *g != "z^2").collect();
        let r = crate::ring::make_ring(101, &["x", "y", "z", "u", "v"], &gens).unwrap();
        let res = resolve(&r5_module(&r).unwrap(), 3, true).unwrap();
        assert_eq!(res.betti, vec![3, 1, 1, 3]);
    }

    #[test]
    fn non_minimal_path_agrees() {
        let r = r1(5).unwrap();
        let res = resolve(&residue_field(&r), 2, false).unwrap();
        assert_eq!(res.betti, vec![1, 2, 3]);
        assert!(res.minimal);
    }

    #[test]
    fn minimize_removes_identity_block() {
        let r = r2(5).unwrap();
        let one = r.parse("1").unwrap();
        let x = r.parse("x").unwrap();
        // R <-[x 1]- R^2 <-[1; -x]- R : an identity block hidden in a split complex
        let phi1 = Matrix::new(vec![0], vec![1, 0], vec![vec![x.clone()], vec![one.clone()]]).unwrap();
        let phi2 = Matrix::new(vec![1, 0], vec![1], vec![vec![one.clone(), x.neg(r.field())]]).unwrap();
        let c = FreeComplex::new(r.clone(), vec![vec![0], vec![1, 0], vec![1]], vec![phi1, phi2]).unwrap();
        assert!(c.is_complex().unwrap());
        let m = minimize(&c);
        assert_eq!(m.ranks(), vec![0, 0, 0]);
        let again = minimize(&resolve(&residue_field(&r), 1, true).unwrap().complex);
        assert_eq!(again.ranks(), vec![1, 1]);
    }

    #[test]
    fn syzygies_of_r1_mod_x() {
        let r = r1(5).unwrap();
        let m = quotient(&r, &["x"]).unwrap();
        let s1 = syzygy(&m, 1).unwrap();
        assert_eq!(s1.length, Some(1));
        assert_eq!(s1.dimension, 0);
        let s2 = syzygy(&m, 2).unwrap();
        assert_eq!(s2.length, None);
        assert_eq!(s2.dimension, 1);
    }

    #[test]
    fn finite_pd_quotient_of_r3() {
        let r = r3(5).unwrap();
        let m = quotient(&r, &["x + y"]).unwrap();
        let s2 = syzygy(&m, 2).unwrap();
        assert_eq!(s2.dimension, -1);
        assert_eq!(s2.length, Some(0));
    }
}
