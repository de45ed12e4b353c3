//! The standard small rings and modules used throughout the tests and examples.

use std::sync::Arc;

use crate::error::Result;
use crate::groebner::{Matrix, SubmodulePresentation};
use crate::ring::{make_ring, QuotientRing};

/// `F_p[x,y]/(x^2, xy)`: a line with an embedded point; dimension 1, depth 0.
pub fn r1(p: u64) -> Result<Arc<QuotientRing>> {
    make_ring(p, &["x", "y"], &["x^2", "x*y"])
}

/// `F_p[x]`.
pub fn r2(p: u64) -> Result<Arc<QuotientRing>> {
    make_ring(p, &["x"], &[])
}

/// `F_p[x,y]/(xy)`: two crossing lines, Cohen-Macaulay of dimension 1.
pub fn r3(p: u64) -> Result<Arc<QuotientRing>> {
    make_ring(p, &["x", "y"], &["x*y"])
}

/// `F_p[x,y]/(x^2)`: a double line.
pub fn r4(p: u64) -> Result<Arc<QuotientRing>> {
    make_ring(p, &["x", "y"], &["x^2"])
}

pub const R5_IDEAL: [&str; 12] = [
    "x^2", "x*z", "z^2", "x*u", "z*v", "u^2", "v^2", "z*u + x*v + u*v", "y*u", "y*v", "y*x - z*u", "y*z - x*v",
];

/// `F_p[x,y,z,u,v]` modulo twelve quadrics: one-dimensional of depth 0, with `y` a parameter.
pub fn r5(p: u64) -> Result<Arc<QuotientRing>> {
    make_ring(p, &["x", "y", "z", "u", "v"], &R5_IDEAL)
}

/// `R / (gens)` for generators given as text.
pub fn quotient(ring: &Arc<QuotientRing>, gens: &[&str]) -> Result<SubmodulePresentation> {
    let gens = gens.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>>>()?;
    SubmodulePresentation::quotient_module(ring.clone(), gens)
}

/// The residue field `R / m`.
pub fn residue_field(ring: &Arc<QuotientRing>) -> SubmodulePresentation {
    SubmodulePresentation::residue_field(ring.clone())
}

/// Cokernel of the column `(u, v, z^2)^T` over `R5`, rows in degrees `(1, 1, 0)`.
pub fn r5_module(ring: &Arc<QuotientRing>) -> Result<SubmodulePresentation> {
    let col = vec![ring.parse("u")?, ring.parse("v")?, ring.parse("z^2")?];
    let m = Matrix::from_columns(vec![1, 1, 0], vec![col])?;
    SubmodulePresentation::cokernel(ring.clone(), m)
}
