//! Poisson brackets on the symmetric algebra `S(q)` and Poisson-commutative
//! families built from central elements.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::tensor::{default_labels, require_lie, LawCheck, StructureTensor};
use crate::constructions::grading::GradingSpec;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{kernel_basis, LinOp, RatMatrix};
use crate::exactmath::poly::{monomials_of_degree, poly_span_rank, Monomial, PolyTerm, SparsePoly};
use crate::exactmath::rat::{one, Rat, RatVec};

/// An element of `q*`.
pub type Covector = RatVec;

/// Degree bound used by [`centre_candidates`] unless told otherwise.
pub const DEFAULT_CENTRE_DEGREE: u32 = 2;

/// Biderivation of `S(q)` given by its values on pairs of generators.
/// Only `i < j` is stored; the rest follows from antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    nvars: usize,
    labels: Vec<String>,
    table: BTreeMap<(usize, usize), SparsePoly>,
}

impl PoissonStructure {
    pub fn zero(nvars: usize) -> Self {
        PoissonStructure {
            nvars,
            labels: default_labels(nvars),
            table: BTreeMap::new(),
        }
    }

    /// The linear bracket `{x_i, x_j} = ψ(x_i, x_j)` of any skew tensor.
    /// Jacobi is not checked.
    pub fn from_tensor(t: &StructureTensor) -> Self {
        let n = t.dim();
        let mut p = PoissonStructure::zero(n);
        p.labels = t.labels().to_vec();
        for ((i, j), v) in t.entries() {
            if i < j {
                p.set(*i, *j, SparsePoly::linear(v));
            }
        }
        p
    }

    /// The Lie–Poisson bracket of a Lie algebra.
    pub fn from_lie(t: &StructureTensor) -> Result<Self> {
        require_lie(t)?;
        Ok(PoissonStructure::from_tensor(t))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.nvars {
            self.labels = labels;
        }
        self
    }

    /// Sets `{x_i, x_j} = p` and `{x_j, x_i} = −p`.
    pub fn set(&mut self, i: usize, j: usize, p: SparsePoly) {
        assert!(i < self.nvars && j < self.nvars && p.nvars() == self.nvars);
        let (key, value) = if i < j { ((i, j), p) } else { ((j, i), -&p) };
        if i == j || value.is_zero() {
            self.table.remove(&key);
        } else {
            self.table.insert(key, value);
        }
    }

    pub fn generator_bracket(&self, i: usize, j: usize) -> SparsePoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.table.get(&(i, j)).cloned(),
            std::cmp::Ordering::Greater => self.table.get(&(j, i)).map(|p| -p),
            std::cmp::Ordering::Equal => None,
        }
        .unwrap_or_else(|| SparsePoly::zero(self.nvars))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &SparsePoly)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    fn require_poly(&self, f: &SparsePoly) -> Result<()> {
        if f.nvars() != self.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: f.nvars(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &PoissonStructure) -> Result<Self> {
        if other.nvars != self.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut out = self.clone();
        for ((i, j), p) in &other.table {
            let sum = &out.generator_bracket(*i, *j) + p;
            out.set(*i, *j, sum);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = PoissonStructure::zero(self.nvars);
        out.labels = self.labels.clone();
        for ((i, j), p) in &self.table {
            out.set(*i, *j, p.scale(s));
        }
        out
    }

    /// `{f, g} = Σ_{i<j} {x_i, x_j} (∂_i f ∂_j g − ∂_j f ∂_i g)`.
    pub fn bracket(&self, f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
        self.require_poly(f)?;
        self.require_poly(g)?;
        let df: Vec<SparsePoly> = (0..self.nvars).map(|i| f.partial(i)).collect::<Result<_>>()?;
        let dg: Vec<SparsePoly> = (0..self.nvars).map(|i| g.partial(i)).collect::<Result<_>>()?;
        let mut out = SparsePoly::zero(self.nvars);
        for ((i, j), c) in &self.table {
            let cross = &(&df[*i] * &dg[*j]) - &(&df[*j] * &dg[*i]);
            if !cross.is_zero() {
                out = &out + &(c * &cross);
            }
        }
        Ok(out)
    }

    /// Jacobi on all generator triples, which suffices for a biderivation.
    pub fn check_jacobi(&self) -> LawCheck {
        let n = self.nvars;
        let x: Vec<SparsePoly> = (0..n).map(|i| SparsePoly::var(n, i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let term = |a: usize, b: usize, c: usize| {
                        self.bracket(&self.generator_bracket(a, b), &x[c])
                            .expect("generators share the variable count")
                    };
                    let sum = &(&term(i, j, k) + &term(j, k, i)) + &term(k, i, j);
                    if !sum.is_zero() {
                        return LawCheck {
                            holds: false,
                            witness: Some(vec![i, j, k]),
                        };
                    }
                }
            }
        }
        LawCheck {
            holds: true,
            witness: None,
        }
    }

    /// `{x_i, x_j}' = D̂{x_i, x_j} − {D̂x_i, x_j} − {x_i, D̂x_j}` on generators.
    pub fn derived(&self, d: &LinOp) -> Result<Self> {
        let n = self.nvars;
        let mut out = PoissonStructure::zero(n);
        out.labels = self.labels.clone();
        let x: Vec<SparsePoly> = (0..n).map(|i| SparsePoly::var(n, i)).collect();
        let dx: Vec<SparsePoly> = x.iter().map(|xi| lift_operator(d, xi)).collect::<Result<_>>()?;
        for i in 0..n {
            for j in i + 1..n {
                let value = &(&lift_operator(d, &self.generator_bracket(i, j))? - &self.bracket(&dx[i], &x[j])?)
                    - &self.bracket(&x[i], &dx[j])?;
                out.set(i, j, value);
            }
        }
        Ok(out)
    }
}

/// Extension of `D` to `S(q)` as a derivation of the product:
/// `D̂f = Σ_i (D x_i) ∂f/∂x_i`.
pub fn lift_operator(d: &LinOp, f: &SparsePoly) -> Result<SparsePoly> {
    let n = f.nvars();
    if !d.is_square() || d.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.rows(),
        });
    }
    let mut out = SparsePoly::zero(n);
    for i in 0..n {
        let di = f.partial(i)?;
        if di.is_zero() {
            continue;
        }
        out = &out + &(&SparsePoly::linear(&d.column(i)) * &di);
    }
    Ok(out)
}

/// `D_γ f = Σ_i γ_i ∂f/∂x_i`.
pub fn directional_derivative(gamma: &[Rat], f: &SparsePoly) -> Result<SparsePoly> {
    if gamma.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: gamma.len(),
        });
    }
    let mut out = SparsePoly::zero(f.nvars());
    for (i, g) in gamma.iter().enumerate() {
        if !g.is_zero() {
            out = &out + &f.partial(i)?.scale(g);
        }
    }
    Ok(out)
}

/// Constant bracket `{x_i, x_j}_γ = γ([x_i, x_j])`.
pub fn frozen_bracket(t: &StructureTensor, gamma: &[Rat]) -> Result<PoissonStructure> {
    require_lie(t)?;
    t.require_vec(gamma)?;
    let n = t.dim();
    let mut p = PoissonStructure::zero(n);
    p.labels = t.labels().to_vec();
    for ((i, j), v) in t.entries() {
        if i < j {
            let c: Rat = v.iter().zip(gamma).map(|(a, b)| a * b).sum();
            p.set(*i, *j, SparsePoly::constant(n, c));
        }
    }
    Ok(p)
}

/// The operator whose orbit of a central seed generates a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitOperator {
    /// `D̂` for an operator `D` on `q`.
    Lift(LinOp),
    /// `D_γ` for a covector `γ`.
    Directional(Covector),
}

impl OrbitOperator {
    pub fn apply(&self, f: &SparsePoly) -> Result<SparsePoly> {
        match self {
            OrbitOperator::Lift(d) => lift_operator(d, f),
            OrbitOperator::Directional(g) => directional_derivative(g, f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    /// The `power`-th image of seed number `seed`.
    Orbit { seed: usize, power: usize },
    /// The weight-`weight` component of seed number `seed`.
    Component { seed: usize, weight: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PcWitness {
    pub left: usize,
    pub right: usize,
    pub bracket: Vec<PolyTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PcCertificate {
    pub commutes: bool,
    pub pairs_checked: usize,
    pub witness: Option<PcWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcFamily {
    pub generators: Vec<SparsePoly>,
    pub provenance: Vec<Provenance>,
    pub certificate: Option<PcCertificate>,
}

impl PcFamily {
    pub fn new(generators: Vec<SparsePoly>, provenance: Vec<Provenance>) -> Self {
        PcFamily {
            generators,
            provenance,
            certificate: None,
        }
    }

    pub fn verified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.commutes)
    }
}

/// First generator `x_i` with `{z, x_i} ≠ 0`, if any.
pub fn non_central_witness(p: &PoissonStructure, z: &SparsePoly) -> Result<Option<usize>> {
    let n = p.nvars();
    for i in 0..n {
        if !p.bracket(z, &SparsePoly::var(n, i))?.is_zero() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The orbits `z, Az, A²z, …` of central seeds, each cut at the first
/// element that depends linearly on the earlier ones from the same seed.
pub fn pc_generate(p: &PoissonStructure, op: &OrbitOperator, seeds: &[SparsePoly]) -> Result<PcFamily> {
    let mut generators = Vec::new();
    let mut provenance = Vec::new();
    for (s, z) in seeds.iter().enumerate() {
        p.require_poly(z)?;
        if let Some(generator) = non_central_witness(p, z)? {
            return Err(Error::NotCentral { seed: s, generator });
        }
        let mut orbit: Vec<SparsePoly> = Vec::new();
        let mut current = z.clone();
        loop {
            orbit.push(current.clone());
            if current.is_zero() || poly_span_rank(&orbit) < orbit.len() {
                orbit.pop();
                break;
            }
            current = op.apply(&current)?;
        }
        for (k, g) in orbit.into_iter().enumerate() {
            generators.push(g);
            provenance.push(Provenance::Orbit { seed: s, power: k });
        }
    }
    Ok(PcFamily::new(generators, provenance))
}

/// Checks `{g_i, g_j} = 0` for every pair, which by the Leibniz rule makes
/// the generated subalgebra Poisson-commutative.
pub fn pc_verify(family: &PcFamily, p: &PoissonStructure) -> Result<PcCertificate> {
    let g = &family.generators;
    let mut pairs = 0;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            pairs += 1;
            let b = p.bracket(&g[i], &g[j])?;
            if !b.is_zero() {
                return Ok(PcCertificate {
                    commutes: false,
                    pairs_checked: pairs,
                    witness: Some(PcWitness {
                        left: i,
                        right: j,
                        bracket: b.to_terms(),
                    }),
                });
            }
        }
    }
    Ok(PcCertificate {
        commutes: true,
        pairs_checked: pairs,
        witness: None,
    })
}

/// [`pc_generate`] followed by [`pc_verify`], storing the certificate.
pub fn pc_generate_verified(p: &PoissonStructure, op: &OrbitOperator, seeds: &[SparsePoly]) -> Result<PcFamily> {
    let mut family = pc_generate(p, op, seeds)?;
    family.certificate = Some(pc_verify(&family, p)?);
    Ok(family)
}

/// Components of `f` by total weight, in increasing weight order. Each is an
/// eigenvector of the lifted grading operator.
pub fn bihomogeneous_components(f: &SparsePoly, g: &GradingSpec) -> Result<Vec<(i64, SparsePoly)>> {
    let w = g.weights();
    if w.len() != f.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: w.len(),
        });
    }
    let mut parts: BTreeMap<i64, SparsePoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let weight: i64 = m.exponents().iter().zip(w).map(|(e, wi)| i64::from(*e) * wi).sum();
        parts
            .entry(weight)
            .or_insert_with(|| SparsePoly::zero(f.nvars()))
            .add_term(m.clone(), c.clone());
    }
    Ok(parts.into_iter().filter(|(_, p)| !p.is_zero()).collect())
}

/// Basis of the polynomials of degree `1..=degree` that commute with every
/// generator.
pub fn centre_candidates(p: &PoissonStructure, degree: u32) -> Result<Vec<SparsePoly>> {
    let n = p.nvars();
    let monomials: Vec<Monomial> = (1..=degree).flat_map(|d| monomials_of_degree(n, d)).collect();
    if monomials.is_empty() {
        return Ok(Vec::new());
    }
    let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(monomials.len());
    for m in &monomials {
        let f = SparsePoly::from_terms(n, [(m.exponents().to_vec(), one())])?;
        let mut col = Vec::new();
        for i in 0..n {
            let b = p.bracket(&f, &SparsePoly::var(n, i))?;
            for (bm, c) in b.terms() {
                let next = row_index.len();
                let r = *row_index.entry((i, bm.clone())).or_insert(next);
                col.push((r, c.clone()));
            }
        }
        columns.push(col);
    }
    let mut m = RatMatrix::zeros(row_index.len(), monomials.len());
    for (j, col) in columns.iter().enumerate() {
        for (r, c) in col {
            m[(*r, j)] = c.clone();
        }
    }
    kernel_basis(&m)
        .into_iter()
        .map(|v: RatVec| SparsePoly::from_terms(n, monomials.iter().zip(v).map(|(m, c)| (m.exponents().to_vec(), c))))
        .collect()
}
