//! Builders for classical Lie algebras and the operators studied on them.

pub mod assoc;
pub mod classical;
pub mod grading;
pub mod nilpotent;
pub mod splitting;

pub use assoc::{assoc_operators, AssocChecks, AssocOperators, InvolutionSplit};
pub use classical::{build_classical, gl_associative, ClassicalAlgebra, Family, MatrixBasis};
pub use grading::{
    check_special, contractions_from_grading, deform_bracket, grading_operator, quasi_grading_extension, Contractions,
    DeformationTable, GradingKind, GradingSpec, QuasiGrading, QuasiGradingReport, SpecialReport,
};
pub use nilpotent::{
    nilpotent_square, sl2_complete, sl_centraliser_dim, NilpotentSquare, Sl2Triple, SquareDiagnostics,
};
pub use splitting::{splitting_operators, SplittingOperators};
