//! Finite-element solver for double-porosity (Barenblatt) poroelasticity on the
//! unit square, with three time integrators:
//!
//! * the monolithic two-level θ-scheme ([`schemes::SchemeKind::Coupled`]),
//! * the incomplete process splitting, where mechanics is lagged and both
//!   pressures are solved together ([`schemes::SchemeKind::Incomplete`]),
//! * the full process splitting, where mechanics and each pressure field are
//!   solved separately ([`schemes::SchemeKind::Full`]).
//!
//! The splitting schemes are three-level explicit-implicit schemes whose
//! weight θ must satisfy `2θ ≥ 1 + δ`; [`spectral`] estimates δ.
//!
//! Displacements use P2 vector elements and both pressures use P1 elements.
//! All material parameters are SI inside the library.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod fem;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod schemes;
pub mod spectral;
pub mod system;

pub use error::{Error, Result};
