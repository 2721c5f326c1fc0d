//! Squares of nilpotent inner derivations and the sl₂-triples behind them.

use serde::Serialize;

use crate::algebra::derived::{derived, derived_iter, power_pair_formula};
use crate::algebra::tensor::StructureTensor;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{rref, LinOp, RatMatrix};
use crate::exactmath::rat::{int, is_zero_vec, unit_vector, vec_scale, vec_sub, Rat, RatVec};

use super::classical::{build_classical, matrix_unit, ClassicalAlgebra, Family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareDiagnostics {
    /// `(ad e)³ = 0`.
    pub cube_vanishes: bool,
    /// `D² = 0`.
    pub square_vanishes: bool,
    /// `[Im D, Im D] = 0`, equivalent to `D` being a quasi-derivation.
    pub image_abelian: bool,
    /// `[Im D, q] ⊆ Ker D`.
    pub image_brackets_in_kernel: bool,
    /// `ρ(D)·T (x, y) = 2[[e, x], [e, y]]` on all basis pairs.
    pub first_formula: bool,
    /// `ρ(D)^k·T (x, y) = 2^k [(ad e)^k x, (ad e)^k y]` for `k ≤ 3`.
    pub power_formula: bool,
}

#[derive(Clone, Debug)]
pub struct NilpotentSquare {
    pub ad_e: LinOp,
    pub operator: LinOp,
    pub derived: StructureTensor,
    pub diagnostics: SquareDiagnostics,
}

fn column_space(m: &RatMatrix) -> Vec<RatVec> {
    let (_, pivots) = rref(m);
    pivots.into_iter().map(|j| m.column(j)).collect()
}

/// `D = (ad e)²` together with checks of the identities and sufficient
/// conditions for it to be a quasi-derivation.
pub fn nilpotent_square(t: &StructureTensor, e: &[Rat]) -> Result<NilpotentSquare> {
    let n = t.dim();
    let ad_e = t.left_mult(e)?;
    let d = &ad_e * &ad_e;
    let dt = derived(t, &d)?;

    let image = column_space(&d);
    let mut image_abelian = true;
    let mut image_brackets_in_kernel = true;
    for u in &image {
        for v in &image {
            if !is_zero_vec(&t.eval(u, v)?) {
                image_abelian = false;
            }
        }
        for j in 0..n {
            let w = t.eval(u, &unit_vector(n, j))?;
            if !is_zero_vec(&d.apply(&w)?) {
                image_brackets_in_kernel = false;
            }
        }
    }

    let mut first_formula = true;
    for i in 0..n {
        for j in 0..n {
            let lhs = dt.product(i, j);
            let rhs = vec_scale(&t.eval(&ad_e.column(i), &ad_e.column(j))?, &int(2));
            if !is_zero_vec(&vec_sub(&lhs, &rhs)) {
                first_formula = false;
            }
        }
    }

    let mut power_formula = true;
    for k in 1..=3 {
        let dk = derived_iter(t, &d, k)?;
        for i in 0..n {
            for j in 0..n {
                let rhs = power_pair_formula(t, &ad_e, k, &unit_vector(n, i), &unit_vector(n, j))?;
                if dk.product(i, j) != rhs {
                    power_formula = false;
                }
            }
        }
    }

    let diagnostics = SquareDiagnostics {
        cube_vanishes: ad_e.pow(3).is_zero(),
        square_vanishes: d.pow(2).is_zero(),
        image_abelian,
        image_brackets_in_kernel,
        first_formula,
        power_formula,
    };
    Ok(NilpotentSquare {
        ad_e,
        operator: d,
        derived: dt,
        diagnostics,
    })
}

/// `(e, h, f)` with `[h, e] = 2e`, `[e, f] = h`, `[h, f] = −2f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: RatVec,
    pub h: RatVec,
    pub f: RatVec,
}

impl Sl2Triple {
    pub fn new(t: &StructureTensor, e: RatVec, h: RatVec, f: RatVec) -> Result<Self> {
        let checks = [
            (t.eval(&h, &e)?, vec_scale(&e, &int(2)), "[h, e] = 2e"),
            (t.eval(&e, &f)?, h.clone(), "[e, f] = h"),
            (t.eval(&h, &f)?, vec_scale(&f, &int(-2)), "[h, f] = -2f"),
        ];
        for (lhs, rhs, name) in checks {
            if lhs != rhs {
                return Err(Error::IdentityViolated(format!("sl2-triple relation {name} fails")));
            }
        }
        Ok(Sl2Triple { e, h, f })
    }
}

/// Validates a partition of `n` whose parts are at most 2, the condition
/// for `(ad e)³ = 0` in `sl_n` and `sp_n`.
pub fn check_height_two(family: Family, n: usize, partition: &[usize]) -> Result<()> {
    if partition.iter().sum::<usize>() != n || partition.contains(&0) {
        return Err(Error::InvalidPartition(format!(
            "{partition:?} is not a partition of {n}"
        )));
    }
    if partition.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidPartition(format!("{partition:?} is not non-increasing")));
    }
    match family {
        Family::Sl | Family::Gl | Family::Sp => {
            if family == Family::Sp && !n.is_multiple_of(2) {
                return Err(Error::InvalidFamily(format!("sp_{n} needs an even size")));
            }
            if partition.iter().any(|&p| p > 2) {
                return Err(Error::InvalidPartition(format!(
                    "{partition:?} has a part larger than 2"
                )));
            }
            Ok(())
        }
        other => Err(Error::Unsupported(format!(
            "sl2-triples are only built for gl/sl/sp, not {other}; pass the triple explicitly"
        ))),
    }
}

/// The standard triple of a nilpotent matrix with Jordan blocks of sizes 2
/// and 1, in the coordinates of `build_classical(family, n)`.
///
/// For `sp_n` each block of size 2 pairs `i` with `i + n/2`, so `e` has the
/// shape `[[0, B], [0, 0]]` with `B` symmetric.
pub fn sl2_complete(family: Family, n: usize, partition: &[usize]) -> Result<(ClassicalAlgebra, Sl2Triple)> {
    check_height_two(family, n, partition)?;
    let g = build_classical(family, n)?;
    let mut e = RatMatrix::zeros(n, n);
    let mut h = RatMatrix::zeros(n, n);
    let mut f = RatMatrix::zeros(n, n);
    let blocks = partition.iter().filter(|&&p| p == 2).count();
    for b in 0..blocks {
        let (i, j) = if family == Family::Sp {
            (b, b + n / 2)
        } else {
            (2 * b, 2 * b + 1)
        };
        e = &e + &matrix_unit(n, i, j);
        f = &f + &matrix_unit(n, j, i);
        h = &h + &(&matrix_unit(n, i, i) - &matrix_unit(n, j, j));
    }
    let triple = Sl2Triple::new(&g.tensor, g.basis.coords(&e)?, g.basis.coords(&h)?, g.basis.coords(&f)?)?;
    Ok((g, triple))
}

/// `dim sl_n^e = Σ (2i − 1) λ_i − 1` for a nilpotent of partition `λ`.
pub fn sl_centraliser_dim(partition: &[usize]) -> usize {
    let mut parts = partition.to_vec();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts.iter().enumerate().map(|(i, p)| (2 * i + 1) * p).sum::<usize>() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pencil::{classify_operator, OperatorClass};

    #[test]
    fn sl2_regular() {
        let (g, tr) = sl2_complete(Family::Sl, 2, &[2]).unwrap();
        assert_eq!(tr.e, unit_vector(3, 0));
        assert_eq!(tr.h, unit_vector(3, 1));
        assert_eq!(tr.f, unit_vector(3, 2));
        let sq = nilpotent_square(&g.tensor, &tr.e).unwrap();
        let d = &sq.derived;
        assert_eq!(d.entries().count(), 2);
        assert_eq!(d.product(1, 2), vec![int(8), int(0), int(0)]);
        let diag = &sq.diagnostics;
        assert!(diag.cube_vanishes && diag.image_abelian && diag.first_formula && diag.power_formula);
    }

    #[test]
    fn zero_element() {
        let g = build_classical(Family::Sl, 2).unwrap();
        let sq = nilpotent_square(&g.tensor, &[int(0), int(0), int(0)]).unwrap();
        assert!(sq.operator.is_zero() && sq.derived.is_zero());
        assert_eq!(classify_operator(&g.tensor, &sq.operator).unwrap().dim_u, 1);
    }

    #[test]
    fn sl3_and_sl4() {
        let (g, tr) = sl2_complete(Family::Sl, 3, &[2, 1]).unwrap();
        let m = g.basis.to_matrix(&tr.h).unwrap();
        assert_eq!(m.diagonal_entries(), vec![int(1), int(-1), int(0)]);
        let sq = nilpotent_square(&g.tensor, &tr.e).unwrap();
        assert!(sq.diagnostics.cube_vanishes);
        assert_eq!(
            classify_operator(&g.tensor, &sq.operator).unwrap().class,
            OperatorClass::Quasi
        );

        let (g, tr) = sl2_complete(Family::Sl, 4, &[2, 2]).unwrap();
        let e = g.basis.to_matrix(&tr.e).unwrap();
        assert_eq!(e, &matrix_unit(4, 0, 1) + &matrix_unit(4, 2, 3));
        assert_eq!(sl_centraliser_dim(&[2, 2]), 7);
        assert_eq!(sl_centraliser_dim(&[2, 1]), 4);
    }

    #[test]
    fn symplectic_triples() {
        for (n, partition) in [(4, vec![2, 2]), (4, vec![2, 1, 1]), (6, vec![2, 2, 1, 1])] {
            let (g, tr) = sl2_complete(Family::Sp, n, &partition).unwrap();
            let sq = nilpotent_square(&g.tensor, &tr.e).unwrap();
            assert!(sq.diagnostics.cube_vanishes, "sp_{n} {partition:?}");
        }
        let (g, tr) = sl2_complete(Family::Sp, 4, &[2, 1, 1]).unwrap();
        assert_eq!(g.basis.to_matrix(&tr.e).unwrap(), matrix_unit(4, 0, 2));
    }

    #[test]
    fn partitions_are_validated() {
        assert!(matches!(
            sl2_complete(Family::Sl, 3, &[3]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            sl2_complete(Family::Sl, 3, &[2]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            sl2_complete(Family::So, 4, &[2, 2]),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            sl2_complete(Family::Sp, 3, &[2, 1]),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn triple_relations_checked() {
        let g = build_classical(Family::Sl, 2).unwrap();
        let r = Sl2Triple::new(&g.tensor, unit_vector(3, 0), unit_vector(3, 2), unit_vector(3, 1));
        assert!(matches!(r, Err(Error::IdentityViolated(_))));
    }
}
