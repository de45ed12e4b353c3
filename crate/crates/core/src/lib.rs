//! Exact computation of Frobenius Betti numbers, Frobenius mu numbers and
//! Hilbert-Kunz estimates over standard-graded quotients of `F_p[x_1, .., x_n]`,
//! together with minimal free resolutions and decision procedures for
//! one-dimensional rings.
//!
//! All arithmetic is exact. Rings are `R = S / I` with `S` a polynomial ring over a
//! prime field and `I` homogeneous; modules are graded and finitely presented.

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod frobenius;
pub mod groebner;
pub mod hilbert;
pub mod homology;
pub mod monomial;
pub mod onedim;
pub mod poly;
pub mod resolution;
pub mod ring;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use groebner::{Matrix, ModuleElement, PresentationMode, SubmodulePresentation};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{PolyRing, Polynomial};
pub use ring::{make_ring, Limits, QuotientRing};
