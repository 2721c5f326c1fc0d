use std::collections::BTreeSet;

use num_traits::Zero;

use crate::algebra::tensor::StructureTensor;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{LinOp, RatMatrix};
use crate::exactmath::rat::{int, Rat};

/// Projections onto the two parts of a splitting `q = h ⊕ r` into
/// subalgebras spanned by basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingOperators {
    pub onto_first: LinOp,
    pub onto_second: LinOp,
}

fn spans_subalgebra(t: &StructureTensor, part: &BTreeSet<usize>) -> Option<(usize, usize)> {
    t.entries()
        .filter(|((i, j), _)| part.contains(i) && part.contains(j))
        .find(|(_, v)| v.iter().enumerate().any(|(k, c)| !c.is_zero() && !part.contains(&k)))
        .map(|((i, j), _)| (*i, *j))
}

pub fn splitting_operators(t: &StructureTensor, first: &[usize], second: &[usize]) -> Result<SplittingOperators> {
    let n = t.dim();
    let a: BTreeSet<usize> = first.iter().copied().collect();
    let b: BTreeSet<usize> = second.iter().copied().collect();
    if a.len() != first.len() || b.len() != second.len() {
        return Err(Error::InvalidSplitting("repeated basis index".into()));
    }
    if let Some(&i) = a.iter().chain(&b).find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    if !a.is_disjoint(&b) || a.len() + b.len() != n {
        return Err(Error::InvalidSplitting(
            "the two index sets must partition the basis".into(),
        ));
    }
    for (name, part) in [("first", &a), ("second", &b)] {
        if let Some((i, j)) = spans_subalgebra(t, part) {
            return Err(Error::InvalidSplitting(format!(
                "{name} part is not a subalgebra: product of {i} and {j} leaves it"
            )));
        }
    }
    let proj = |part: &BTreeSet<usize>| {
        let diag: Vec<Rat> = (0..n)
            .map(|i| if part.contains(&i) { int(1) } else { Rat::zero() })
            .collect();
        RatMatrix::diagonal(&diag)
    };
    Ok(SplittingOperators {
        onto_first: proj(&a),
        onto_second: proj(&b),
    })
}
