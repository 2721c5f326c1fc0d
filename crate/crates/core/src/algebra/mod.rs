//! Structure tensors, derived operations and operator classification.

pub mod derived;
pub mod pencil;
pub mod tensor;

pub use derived::{
    check_vanishing_propagation, derived, derived_iter, derived_pair, power_pair_formula, second_derived_closed_form,
    shift_by_derivation, vanishing_partners,
};
pub use pencil::{classify_operator, normalize_pencil, NormalizedPencil, OperatorClass, PencilAction, PencilMode};
pub use tensor::{check_jacobi, check_skew, eval, is_lie, require_lie, LawCheck, StructureTensor};
