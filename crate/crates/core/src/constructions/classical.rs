//! Matrix Lie algebras given by an explicit basis of matrices.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::tensor::{require_lie, StructureTensor};
use crate::error::{Error, Result};
use crate::exactmath::matrix::{kernel_basis, solve, LinOp, RatMatrix};
use crate::exactmath::rat::{Rat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Gl,
    Sl,
    So,
    Sp,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gl" => Ok(Family::Gl),
            "sl" => Ok(Family::Sl),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            other => Err(Error::InvalidFamily(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        })
    }
}

/// A linearly independent list of `n × n` matrices, used as coordinates on
/// the subspace they span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixBasis {
    size: usize,
    elements: Vec<RatMatrix>,
    labels: Vec<String>,
    // n² × dim matrix whose columns are the flattened elements
    embedding: RatMatrix,
}

fn flatten(m: &RatMatrix) -> RatVec {
    m.to_rows().into_iter().flatten().collect()
}

fn unflatten(n: usize, v: &[Rat]) -> RatMatrix {
    RatMatrix::from_fn(n, n, |i, j| v[i * n + j].clone())
}

pub fn matrix_unit(n: usize, i: usize, j: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    m[(i, j)] = Rat::one();
    m
}

impl MatrixBasis {
    pub fn new(size: usize, elements: Vec<RatMatrix>, labels: Vec<String>) -> Result<Self> {
        assert_eq!(elements.len(), labels.len(), "one label per element");
        for m in &elements {
            if m.rows() != size || m.cols() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: m.rows(),
                });
            }
        }
        let cols: Vec<RatVec> = elements.iter().map(flatten).collect();
        let embedding = RatMatrix::from_columns(size * size, &cols)?;
        if crate::exactmath::matrix::rank_exact(&embedding) != elements.len() {
            return Err(Error::InvalidFamily("basis matrices are linearly dependent".into()));
        }
        Ok(MatrixBasis {
            size,
            elements,
            labels,
            embedding,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RatMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coordinates of `m` in this basis, or `NotInSpan`.
    pub fn coords(&self, m: &RatMatrix) -> Result<RatVec> {
        if m.rows() != self.size || m.cols() != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                found: m.rows(),
            });
        }
        solve(&self.embedding, &flatten(m)).ok_or(Error::NotInSpan)
    }

    pub fn to_matrix(&self, v: &[Rat]) -> Result<RatMatrix> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(unflatten(self.size, &self.embedding.apply(v)?))
    }

    /// Structure constants of the operation `op` restricted to the span,
    /// which must be closed under it.
    pub fn tensor_of(&self, op: impl Fn(&RatMatrix, &RatMatrix) -> RatMatrix) -> Result<StructureTensor> {
        let n = self.dim();
        let mut t = StructureTensor::zero(n).with_labels(self.labels.clone());
        for i in 0..n {
            for j in 0..n {
                let p = op(&self.elements[i], &self.elements[j]);
                if !p.is_zero() {
                    t.set(i, j, self.coords(&p)?);
                }
            }
        }
        Ok(t)
    }

    pub fn lie_tensor(&self) -> Result<StructureTensor> {
        self.tensor_of(|x, y| x.commutator(y))
    }

    /// Matrix (in this basis) of a linear map given on matrices.
    pub fn operator_of(&self, f: impl Fn(&RatMatrix) -> RatMatrix) -> Result<LinOp> {
        let cols = self
            .elements
            .iter()
            .map(|b| self.coords(&f(b)))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::from_columns(self.dim(), &cols)
    }
}

#[derive(Clone, Debug)]
pub struct ClassicalAlgebra {
    pub family: Family,
    pub size: usize,
    pub basis: MatrixBasis,
    pub tensor: StructureTensor,
}

fn sl2_label(i: usize, j: usize) -> Option<&'static str> {
    match (i, j) {
        (0, 1) => Some("e"),
        (1, 0) => Some("f"),
        _ => None,
    }
}

/// `gl_n` basis ordered as upper matrix units `E_ij` (i < j), then diagonal
/// elements, then lower matrix units. For `sl_n` the diagonal part is
/// `H_i = E_ii − E_(i+1)(i+1)`, so `sl_2` gets the basis `(e, h, f)`.
fn triangular_basis(n: usize, traceless: bool) -> Result<MatrixBasis> {
    let small = traceless && n == 2;
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    let unit_label = |i: usize, j: usize| match (small, sl2_label(i, j)) {
        (true, Some(l)) => l.to_string(),
        _ => format!("E{}{}", i + 1, j + 1),
    };
    for i in 0..n {
        for j in i + 1..n {
            elements.push(matrix_unit(n, i, j));
            labels.push(unit_label(i, j));
        }
    }
    if traceless {
        for i in 0..n.saturating_sub(1) {
            elements.push(&matrix_unit(n, i, i) - &matrix_unit(n, i + 1, i + 1));
            labels.push(if small { "h".into() } else { format!("H{}", i + 1) });
        }
    } else {
        for i in 0..n {
            elements.push(matrix_unit(n, i, i));
            labels.push(format!("E{}{}", i + 1, i + 1));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            elements.push(matrix_unit(n, j, i));
            labels.push(unit_label(j, i));
        }
    }
    MatrixBasis::new(n, elements, labels)
}

/// The standard skew form `[[0, I], [−I, 0]]` of size `2m`.
pub fn symplectic_form(size: usize) -> RatMatrix {
    let m = size / 2;
    RatMatrix::from_fn(size, size, |i, j| {
        if j == i + m && i < m {
            Rat::one()
        } else if i == j + m && j < m {
            -Rat::one()
        } else {
            Rat::zero()
        }
    })
}

/// Basis of `{x : xᵗJ + Jx = 0}`, the Lie algebra preserving the form `J`.
pub fn form_algebra_basis(j: &RatMatrix) -> Result<MatrixBasis> {
    let n = j.rows();
    let constraint = linear_constraint(n, |x| &(&x.transpose() * j) + &(j * x))?;
    let elements: Vec<RatMatrix> = kernel_basis(&constraint).iter().map(|v| unflatten(n, v)).collect();
    let labels = (0..elements.len()).map(|k| format!("b{k}")).collect();
    MatrixBasis::new(n, elements, labels)
}

/// Matrix of a linear map `gl_n → gl_n` in flattened coordinates.
pub(crate) fn linear_constraint(n: usize, f: impl Fn(&RatMatrix) -> RatMatrix) -> Result<RatMatrix> {
    let cols: Vec<RatVec> = (0..n * n).map(|k| flatten(&f(&matrix_unit(n, k / n, k % n)))).collect();
    RatMatrix::from_columns(n * n, &cols)
}

pub(crate) fn unflatten_matrix(n: usize, v: &[Rat]) -> RatMatrix {
    unflatten(n, v)
}

pub fn classical_basis(family: Family, n: usize) -> Result<MatrixBasis> {
    if n == 0 {
        return Err(Error::InvalidFamily(format!("{family}_0 is not supported")));
    }
    match family {
        Family::Gl => triangular_basis(n, false),
        Family::Sl => triangular_basis(n, true),
        Family::So => {
            let mut elements = Vec::new();
            let mut labels = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    elements.push(&matrix_unit(n, i, j) - &matrix_unit(n, j, i));
                    labels.push(format!("A{}{}", i + 1, j + 1));
                }
            }
            MatrixBasis::new(n, elements, labels)
        }
        Family::Sp => {
            if !n.is_multiple_of(2) {
                return Err(Error::InvalidFamily(format!("sp_{n} needs an even size")));
            }
            form_algebra_basis(&symplectic_form(n))
        }
    }
}

/// Structure constants of a classical Lie algebra from matrix commutators,
/// checked to be skew-symmetric and to satisfy Jacobi.
pub fn build_classical(family: Family, n: usize) -> Result<ClassicalAlgebra> {
    let basis = classical_basis(family, n)?;
    let tensor = basis.lie_tensor()?;
    require_lie(&tensor)?;
    Ok(ClassicalAlgebra {
        family,
        size: n,
        basis,
        tensor,
    })
}

/// `gl_n` as an associative algebra under matrix multiplication, in the same
/// basis as `build_classical(Family::Gl, n)`.
pub fn gl_associative(n: usize) -> Result<(MatrixBasis, StructureTensor)> {
    let basis = classical_basis(Family::Gl, n)?;
    let t = basis.tensor_of(|x, y| x * y)?;
    Ok((basis, t))
}
