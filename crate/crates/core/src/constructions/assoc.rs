//! Operators on `gl_n` coming from its associative product.

use serde::Serialize;

use crate::algebra::derived::{derived, derived_iter};
use crate::algebra::tensor::StructureTensor;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{kernel_basis, LinOp, RatMatrix};
use crate::exactmath::rat::{int, rat};

use super::classical::{build_classical, linear_constraint, unflatten_matrix, Family, MatrixBasis};

/// `gl_n = a₀ ⊕ a₁` for the anti-involution `x* = J⁻¹xᵗJ`, with
/// `a₀ = {x* = −x}` and `a₁ = {x* = x}`.
#[derive(Clone, Debug)]
pub struct InvolutionSplit {
    pub size: usize,
    pub form: RatMatrix,
    form_inverse: RatMatrix,
    pub odd: MatrixBasis,
    pub even: MatrixBasis,
}

impl InvolutionSplit {
    pub fn new(form: RatMatrix) -> Result<Self> {
        if !form.is_square() {
            return Err(Error::InvalidInvolution("matrix is not square".into()));
        }
        let n = form.rows();
        let transpose = form.transpose();
        if transpose != form && transpose != -&form {
            return Err(Error::InvalidInvolution(
                "matrix is neither symmetric nor skew-symmetric".into(),
            ));
        }
        let form_inverse = form
            .inverse()
            .ok_or_else(|| Error::InvalidInvolution("matrix is singular".into()))?;
        let star = |x: &RatMatrix| &(&form_inverse * &x.transpose()) * &form;
        let basis = |sign: i64, prefix: &str| -> Result<MatrixBasis> {
            let c = linear_constraint(n, |x| &star(x) + &x.scale(&int(sign)))?;
            let elements: Vec<RatMatrix> = kernel_basis(&c).iter().map(|v| unflatten_matrix(n, v)).collect();
            let labels = (0..elements.len()).map(|k| format!("{prefix}{k}")).collect();
            MatrixBasis::new(n, elements, labels)
        };
        let odd = basis(1, "u")?;
        let even = basis(-1, "v")?;
        Ok(InvolutionSplit {
            size: n,
            form,
            form_inverse,
            odd,
            even,
        })
    }

    pub fn star(&self, x: &RatMatrix) -> RatMatrix {
        &(&self.form_inverse * &x.transpose()) * &self.form
    }

    pub fn is_self_adjoint(&self, x: &RatMatrix) -> bool {
        &self.star(x) == x
    }

    /// The Lie algebra `a₀` with the commutator bracket.
    pub fn odd_algebra(&self) -> Result<StructureTensor> {
        self.odd.lie_tensor()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssocChecks {
    /// `−ρ(L_a)·T (x, y) = xay − yax` on basis pairs of `gl_n`.
    pub left_bracket: bool,
    /// `(L_a)^k = L_{a^k}` for `k ≤ 4`.
    pub left_powers: bool,
    /// `−ρ(D_a)·T (x, y) = xay − yax` on `a₀`.
    pub restricted_bracket: Option<bool>,
    /// `ρ(D_a)²·T (x, y) = x a² y − y a² x` on `a₀`.
    pub restricted_second: Option<bool>,
}

impl AssocChecks {
    pub fn all_hold(&self) -> bool {
        self.left_bracket
            && self.left_powers
            && self.restricted_bracket != Some(false)
            && self.restricted_second != Some(false)
    }
}

#[derive(Clone, Debug)]
pub struct Restricted {
    pub split: InvolutionSplit,
    pub algebra: StructureTensor,
    /// `D_a = ½(L_a + R_a)` on `a₀`.
    pub operator: LinOp,
}

#[derive(Clone, Debug)]
pub struct AssocOperators {
    pub basis: MatrixBasis,
    /// Commutator bracket of `gl_n`.
    pub algebra: StructureTensor,
    pub left: LinOp,
    pub right: LinOp,
    /// `[x, y]_a = xay − yax`.
    pub bracket_a: StructureTensor,
    pub restricted: Option<Restricted>,
    pub checks: AssocChecks,
}

fn sandwich(a: &RatMatrix) -> impl Fn(&RatMatrix, &RatMatrix) -> RatMatrix + '_ {
    move |x, y| &(&(x * a) * y) - &(&(y * a) * x)
}

pub fn assoc_operators(n: usize, a: &RatMatrix, form: Option<&RatMatrix>) -> Result<AssocOperators> {
    let g = build_classical(Family::Gl, n)?;
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.rows(),
        });
    }
    let basis = g.basis;
    let t = g.tensor;
    let left = basis.operator_of(|x| a * x)?;
    let right = basis.operator_of(|x| x * a)?;
    let bracket_a = basis.tensor_of(sandwich(a))?;
    let left_bracket = derived(&t, &left)?.scale(&int(-1)) == bracket_a;
    let mut left_powers = true;
    for k in 1..=4 {
        let ak = a.pow(k);
        if left.pow(k) != basis.operator_of(|x| &ak * x)? {
            left_powers = false;
        }
    }

    let mut checks = AssocChecks {
        left_bracket,
        left_powers,
        restricted_bracket: None,
        restricted_second: None,
    };
    let restricted = match form {
        None => None,
        Some(j) => {
            let split = InvolutionSplit::new(j.clone())?;
            if split.size != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: split.size,
                });
            }
            if !split.is_self_adjoint(a) {
                return Err(Error::NotSelfAdjoint);
            }
            let algebra = split.odd_algebra()?;
            let half = rat(1, 2);
            let operator = split.odd.operator_of(|x| (&(a * x) + &(x * a)).scale(&half))?;
            let expected = split.odd.tensor_of(sandwich(a))?;
            checks.restricted_bracket = Some(derived(&algebra, &operator)?.scale(&int(-1)) == expected);
            let a2 = a * a;
            let expected2 = split.odd.tensor_of(sandwich(&a2))?;
            checks.restricted_second = Some(derived_iter(&algebra, &operator, 2)? == expected2);
            Some(Restricted {
                split,
                algebra,
                operator,
            })
        }
    };
    Ok(AssocOperators {
        basis,
        algebra: t,
        left,
        right,
        bracket_a,
        restricted,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pencil::{classify_operator, OperatorClass};
    use crate::algebra::tensor::is_lie;
    use crate::constructions::classical::matrix_unit;

    #[test]
    fn idempotent_gives_near_derivation() {
        let a = matrix_unit(2, 0, 0);
        let ops = assoc_operators(2, &a, None).unwrap();
        assert!(ops.checks.all_hold());
        let e12 = ops.basis.coords(&matrix_unit(2, 0, 1)).unwrap();
        let e21 = ops.basis.coords(&matrix_unit(2, 1, 0)).unwrap();
        let e22 = ops.basis.coords(&matrix_unit(2, 1, 1)).unwrap();
        let minus_e22: Vec<_> = e22.iter().map(|c| -c).collect();
        assert_eq!(ops.bracket_a.eval(&e12, &e21).unwrap(), minus_e22);
        assert_eq!(
            classify_operator(&ops.algebra, &ops.left).unwrap().class,
            OperatorClass::Near
        );
    }

    #[test]
    fn identity_and_square_zero() {
        let ops = assoc_operators(2, &RatMatrix::identity(2), None).unwrap();
        assert_eq!(ops.bracket_a, ops.algebra);
        assert_eq!(ops.left, RatMatrix::identity(4));
        assert_eq!(
            classify_operator(&ops.algebra, &ops.left).unwrap().class,
            OperatorClass::ScalarType
        );
        let ops = assoc_operators(2, &matrix_unit(2, 0, 1), None).unwrap();
        assert_eq!(
            classify_operator(&ops.algebra, &ops.left).unwrap().class,
            OperatorClass::Quasi
        );
    }

    #[test]
    fn orthogonal_split() {
        let split = InvolutionSplit::new(RatMatrix::identity(3)).unwrap();
        assert_eq!(split.odd.dim(), 3);
        assert_eq!(split.even.dim(), 6);
        assert!(is_lie(&split.odd_algebra().unwrap()));
        // [a₁, a₁] ⊆ a₀
        for x in split.even.elements() {
            for y in split.even.elements() {
                assert!(split.odd.coords(&x.commutator(y)).is_ok());
            }
        }
        let a = RatMatrix::diagonal(&[int(1), int(0), int(0)]);
        let ops = assoc_operators(3, &a, Some(&RatMatrix::identity(3))).unwrap();
        assert!(ops.checks.all_hold(), "{:?}", ops.checks);
    }

    #[test]
    fn symplectic_split() {
        let j = crate::constructions::classical::symplectic_form(4);
        let split = InvolutionSplit::new(j.clone()).unwrap();
        assert_eq!(split.odd.dim(), 10);
        assert!(InvolutionSplit::new(RatMatrix::from_i64(&[&[1, 2], &[3, 4]])).is_err());
        assert!(InvolutionSplit::new(RatMatrix::zeros(2, 2)).is_err());
        let not_adjoint = matrix_unit(4, 0, 1);
        assert_eq!(
            assoc_operators(4, &not_adjoint, Some(&j)).unwrap_err(),
            Error::NotSelfAdjoint
        );
    }
}
