use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::matrix::{solve, LinOp, RatMatrix};
use crate::exactmath::rat::{is_zero_vec, vec_axpy, Rat, RatVec};

/// Bilinear operation on an `n`-dimensional space, stored as structure
/// constants: `ψ(e_i, e_j) = Σ_k c[(i, j)][k] e_k`.
///
/// Only nonzero products are stored. Labels are cosmetic and ignored by
/// equality.
#[derive(Clone, Debug)]
pub struct StructureTensor {
    dim: usize,
    labels: Vec<String>,
    entries: BTreeMap<(usize, usize), RatVec>,
}

impl PartialEq for StructureTensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl Eq for StructureTensor {}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

impl StructureTensor {
    pub fn zero(dim: usize) -> Self {
        StructureTensor {
            dim,
            labels: default_labels(dim),
            entries: BTreeMap::new(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim, "label count must equal dimension");
        self.labels = labels;
        self
    }

    /// Builds a tensor from a function giving the product of two basis vectors.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> RatVec) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.set(i, j, f(i, j));
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatVec) {
        assert!(i < self.dim && j < self.dim, "basis index out of range");
        assert_eq!(v.len(), self.dim, "product vector has wrong length");
        if is_zero_vec(&v) {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Sets `ψ(e_i, e_j) = v` and `ψ(e_j, e_i) = −v`.
    pub fn set_skew(&mut self, i: usize, j: usize, v: RatVec) {
        let neg: RatVec = v.iter().map(|c| -c).collect();
        self.set(i, j, v);
        self.set(j, i, neg);
    }

    /// Nonzero products in `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &RatVec)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&RatVec> {
        self.entries.get(&(i, j))
    }

    pub fn product(&self, i: usize, j: usize) -> RatVec {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| vec![Rat::zero(); self.dim])
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Rat {
        self.entries
            .get(&(i, j))
            .map(|v| v[k].clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_vec(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_op(&self, d: &LinOp) -> Result<()> {
        if d.rows() != self.dim || d.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: if d.rows() != self.dim { d.rows() } else { d.cols() },
            });
        }
        Ok(())
    }

    pub fn check_same_dim(&self, other: &StructureTensor) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// `ψ(x, y)` for coordinate vectors `x`, `y`.
    pub fn eval(&self, x: &[Rat], y: &[Rat]) -> Result<RatVec> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        let mut out = vec![Rat::zero(); self.dim];
        for ((i, j), v) in &self.entries {
            if x[*i].is_zero() || y[*j].is_zero() {
                continue;
            }
            vec_axpy(&mut out, &(&x[*i] * &y[*j]), v);
        }
        Ok(out)
    }

    /// Matrix of `y ↦ ψ(x, y)`.
    pub fn left_mult(&self, x: &[Rat]) -> Result<LinOp> {
        self.check_vec(x)?;
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for ((i, j), v) in &self.entries {
            if x[*i].is_zero() {
                continue;
            }
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    m[(k, *j)] += &x[*i] * c;
                }
            }
        }
        Ok(m)
    }

    /// Matrix of `x ↦ ψ(x, y)`.
    pub fn right_mult(&self, y: &[Rat]) -> Result<LinOp> {
        self.check_vec(y)?;
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for ((i, j), v) in &self.entries {
            if y[*j].is_zero() {
                continue;
            }
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    m[(k, *i)] += &y[*j] * c;
                }
            }
        }
        Ok(m)
    }

    pub fn checked_add(&self, other: &StructureTensor) -> Result<Self> {
        self.linear_combination(&Rat::one(), other, &Rat::one())
    }

    pub fn checked_sub(&self, other: &StructureTensor) -> Result<Self> {
        self.linear_combination(&Rat::one(), other, &-Rat::one())
    }

    /// `α·self + β·other`.
    pub fn linear_combination(&self, alpha: &Rat, other: &StructureTensor, beta: &Rat) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut out = StructureTensor {
            dim: self.dim,
            labels: self.labels.clone(),
            entries: BTreeMap::new(),
        };
        let keys: std::collections::BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        for (i, j) in keys {
            let mut v = vec![Rat::zero(); self.dim];
            if let Some(a) = self.entries.get(&(i, j)) {
                vec_axpy(&mut v, alpha, a);
            }
            if let Some(b) = other.entries.get(&(i, j)) {
                vec_axpy(&mut v, beta, b);
            }
            out.set(i, j, v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = StructureTensor {
            dim: self.dim,
            labels: self.labels.clone(),
            entries: BTreeMap::new(),
        };
        if s.is_zero() {
            return out;
        }
        for (k, v) in &self.entries {
            out.entries.insert(*k, v.iter().map(|c| c * s).collect());
        }
        out
    }

    /// Coordinates as a vector of length `n³`, indexed by `(i·n + j)·n + k`.
    pub fn flatten(&self) -> RatVec {
        let n = self.dim;
        let mut out = vec![Rat::zero(); n * n * n];
        for ((i, j), v) in &self.entries {
            let base = (i * n + j) * n;
            out[base..base + n].clone_from_slice(v);
        }
        out
    }

    /// The same operation written in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &LinOp) -> Result<Self> {
        self.check_op(p)?;
        let n = self.dim;
        let cols: Vec<RatVec> = (0..n).map(|j| p.column(j)).collect();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = self.eval(&cols[i], &cols[j])?;
                if is_zero_vec(&v) {
                    continue;
                }
                let coords = solve(p, &v).ok_or(Error::NotInSpan)?;
                out.set(i, j, coords);
            }
        }
        Ok(out)
    }

    /// Restriction to a subspace spanned by `basis`, which must be closed
    /// under the operation.
    pub fn restrict(&self, basis: &[RatVec]) -> Result<Self> {
        for b in basis {
            self.check_vec(b)?;
        }
        let m = basis.len();
        let embed = RatMatrix::from_columns(self.dim, basis)?;
        let mut out = Self::zero(m);
        for i in 0..m {
            for j in 0..m {
                let v = self.eval(&basis[i], &basis[j])?;
                if is_zero_vec(&v) {
                    continue;
                }
                out.set(i, j, solve(&embed, &v).ok_or(Error::NotInSpan)?);
            }
        }
        Ok(out)
    }

    pub(crate) fn require_op(&self, d: &LinOp) -> Result<()> {
        self.check_op(d)
    }

    pub(crate) fn require_vec(&self, v: &[Rat]) -> Result<()> {
        self.check_vec(v)
    }
}

pub fn eval(t: &StructureTensor, x: &[Rat], y: &[Rat]) -> Result<RatVec> {
    t.eval(x, y)
}

/// Outcome of an axiom check; `witness` holds the offending basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl LawCheck {
    fn pass() -> Self {
        LawCheck {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: Vec<usize>) -> Self {
        LawCheck {
            holds: false,
            witness: Some(witness),
        }
    }
}

pub fn check_skew(t: &StructureTensor) -> LawCheck {
    let n = t.dim();
    for i in 0..n {
        for j in i..n {
            let a = t.get(i, j);
            let b = t.get(j, i);
            let ok = match (a, b) {
                (None, None) => true,
                (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| (x + y).is_zero()),
                _ => false,
            };
            if !ok {
                return LawCheck::fail(vec![i, j]);
            }
        }
    }
    LawCheck::pass()
}

/// Cyclic sum `ψ(ψ(x,y),z) + ψ(ψ(y,z),x) + ψ(ψ(z,x),y)` over all basis triples.
pub fn check_jacobi(t: &StructureTensor) -> LawCheck {
    let n = t.dim();
    // right[z] is the matrix of u ↦ ψ(u, e_z)
    let right: Vec<LinOp> = (0..n)
        .map(|z| {
            t.right_mult(&crate::exactmath::rat::unit_vector(n, z))
                .expect("dims match")
        })
        .collect();
    let image = |v: &RatVec, z: usize| right[z].apply(v).expect("dims match");
    for i in 0..n {
        for j in 0..n {
            let xy = t.product(i, j);
            for k in 0..n {
                let mut s = image(&xy, k);
                let yz = t.product(j, k);
                let zx = t.product(k, i);
                s = crate::exactmath::rat::vec_add(&s, &image(&yz, i));
                s = crate::exactmath::rat::vec_add(&s, &image(&zx, j));
                if !is_zero_vec(&s) {
                    return LawCheck::fail(vec![i, j, k]);
                }
            }
        }
    }
    LawCheck::pass()
}

pub fn is_lie(t: &StructureTensor) -> bool {
    check_skew(t).holds && check_jacobi(t).holds
}

/// `Ok(())` when `t` is skew-symmetric and satisfies Jacobi.
pub fn require_lie(t: &StructureTensor) -> Result<()> {
    let skew = check_skew(t);
    if let Some(w) = skew.witness {
        return Err(Error::NotLie(format!("not skew-symmetric on basis pair {w:?}")));
    }
    let jac = check_jacobi(t);
    if let Some(w) = jac.witness {
        return Err(Error::NotLie(format!("Jacobi fails on basis triple {w:?}")));
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::StructureTensor;
    use crate::exactmath::rat::int;

    /// sl₂ in the basis (e, h, f).
    pub(crate) fn sl2() -> StructureTensor {
        let mut t = StructureTensor::zero(3);
        t.set_skew(0, 2, vec![int(0), int(1), int(0)]);
        t.set_skew(1, 0, vec![int(2), int(0), int(0)]);
        t.set_skew(1, 2, vec![int(0), int(0), int(-2)]);
        t
    }
}
