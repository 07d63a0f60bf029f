//! Exact computation with polynomial automorphisms and polynomial vector
//! fields on affine space.
//!
//! The crate is layered: [`exactpoly`] provides sparse rational polynomials,
//! [`polymap`] and [`vectorfield`] build maps and derivations on top of them,
//! [`liealg`] and [`spectral`] analyse finite-dimensional pieces, and
//! [`plane`] collects the two-dimensional constructions (de Jonquieres
//! factorization, free-product normal forms, the `u`, `v` example).

pub mod error;
pub mod exactpoly;
pub mod liealg;
pub mod linalg;
pub mod plane;
pub mod polymap;
pub mod spectral;
pub mod vectorfield;
pub mod verify;

pub use error::{Error, Result};
pub use exactpoly::{Monomial, Polynomial, Rational, UPoly};
pub use liealg::{ClosureReport, ClosureStatus, LieSpan};
pub use linalg::Matrix;
pub use polymap::{Automorphism, PolyMap};
pub use vectorfield::{Verdict, VectorField};
