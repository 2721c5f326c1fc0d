//! Exact computations with derived operations of bilinear structures.
//!
//! An algebra is given by structure constants over the rationals. For a linear
//! operator `D` the derived operation is
//! `ψ'_D(x, y) = D(ψ(x, y)) − ψ(Dx, y) − ψ(x, Dy)`, and most of this crate
//! revolves around when the plane spanned by `ψ` and `ψ'_D` is stable under
//! that action: pencils of compatible brackets, contractions from gradings,
//! Poisson-commutative families, Nijenhuis torsion and the index of the
//! resulting Lie algebras.

pub mod algebra;
pub mod analysis;
pub mod constructions;
pub mod error;
pub mod exactmath;
pub mod format;
pub mod nijenhuis;
pub mod poisson;

pub use error::{Error, Result};
