//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under the graded
//! lexicographic order, so equality and printing are canonical. Printing lists
//! the leading (largest) monomial first.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{span_rank, BareissRing};
use super::rat::{format_rat, parse_rat, Rat, RatVec};
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divide(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of exactly the given total degree,
/// ascending in graded-lex order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    if nvars == 0 {
        return if degree == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rat::one());
        p
    }

    /// The linear form `Σ coeffs[i]·x_i`.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::VariableCountMismatch {
                    left: nvars,
                    right: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &SparsePoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &SparsePoly) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &SparsePoly) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, Rat::one()), |acc, _| &acc * self)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * Rat::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum())
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &SparsePoly) -> Option<Self> {
        if self.nvars != d.nvars {
            return None;
        }
        let (lm, lc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.divide(lm)?;
            let c = rc / lc;
            let mut t = Self::zero(self.nvars);
            t.add_term(m.clone(), c.clone());
            rem = &rem - &(&t * d);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Coefficient vector against a fixed list of monomials. Terms outside the
    /// list are ignored.
    pub fn coefficients(&self, basis: &[Monomial]) -> RatVec {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn display_with(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Rat::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let name = labels.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
            if factors.is_empty() {
                out.push_str(&format_rat(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rat(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(m, c)| PolyTerm {
                exponents: m.0.clone(),
                coeff: format_rat(c),
            })
            .collect()
    }

    pub fn from_poly_terms(nvars: usize, terms: &[PolyTerm]) -> std::result::Result<Self, String> {
        let mut p = Self::zero(nvars);
        for (k, t) in terms.iter().enumerate() {
            if t.exponents.len() != nvars {
                return Err(format!(
                    "term {k}: exponent vector has length {}, expected {nvars}",
                    t.exponents.len()
                ));
            }
            let c = parse_rat(&t.coeff).map_err(|e| format!("term {k}: {e}"))?;
            p.add_term(Monomial(t.exponents.clone()), c);
        }
        Ok(p)
    }
}

/// Serialized form of one polynomial term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.checked_add(&-rhs).expect("variable count mismatch")
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

pub fn poly_mul(f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
    f.checked_mul(g)
}

pub fn poly_partial(f: &SparsePoly, i: usize) -> Result<SparsePoly> {
    f.partial(i)
}

/// Dimension of the linear span of a list of polynomials.
pub fn poly_span_rank(polys: &[SparsePoly]) -> usize {
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms.keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<RatVec> = polys.iter().map(|p| p.coefficients(&monos)).collect();
    span_rank(&rows)
}

/// Whether two lists of polynomials span the same subspace.
pub fn same_span(a: &[SparsePoly], b: &[SparsePoly]) -> bool {
    let ra = poly_span_rank(a);
    let rb = poly_span_rank(b);
    let joint: Vec<SparsePoly> = a.iter().chain(b).cloned().collect();
    ra == rb && poly_span_rank(&joint) == ra
}

impl SparsePoly {
    fn is_constant_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.degree() == 0 && c.is_one())
    }
}

impl BareissRing for SparsePoly {
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    // The elimination only uses `zero` to overwrite eliminated entries and
    // `one` as the initial divisor, so their variable count is never read.
    fn ring_zero() -> Self {
        SparsePoly::zero(0)
    }
    fn ring_one() -> Self {
        SparsePoly::constant(0, Rat::one())
    }
    fn cross_div(a: &Self, d: &Self, b: &Self, c: &Self, prev: &Self) -> Self {
        let num = &(a * d) - &(b * c);
        if prev.is_constant_one() {
            return num;
        }
        num.div_exact(prev).expect("Bareiss division must be exact")
    }
    fn weight(&self) -> usize {
        self.terms.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::int;

    fn p(nvars: usize, terms: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), int(*c)))).unwrap()
    }

    #[test]
    fn products() {
        let x1 = SparsePoly::var(3, 1);
        let x2 = SparsePoly::var(3, 2);
        assert_eq!(poly_mul(&x1, &x2).unwrap(), p(3, &[(&[0, 1, 1], 1)]));
        let s = &x1 + &x2;
        assert_eq!(
            poly_mul(&s, &s).unwrap(),
            p(3, &[(&[0, 2, 0], 1), (&[0, 1, 1], 2), (&[0, 0, 2], 1)])
        );
        let one = SparsePoly::constant(3, int(1));
        let a = &x1 - &one;
        let b = &x1 + &one;
        assert_eq!(poly_mul(&a, &b).unwrap(), p(3, &[(&[0, 2, 0], 1), (&[0, 0, 0], -1)]));
        assert!(matches!(
            poly_mul(&x1, &SparsePoly::var(2, 0)),
            Err(Error::VariableCountMismatch { .. })
        ));
    }

    #[test]
    fn partials() {
        let f = p(3, &[(&[0, 2, 1], 1)]); // x1² x2
        assert_eq!(poly_partial(&f, 1).unwrap(), p(3, &[(&[0, 1, 1], 2)]));
        assert!(poly_partial(&SparsePoly::constant(3, int(7)), 1).unwrap().is_zero());
        let casimir = p(3, &[(&[0, 2, 0], 1), (&[1, 0, 1], 4)]);
        assert_eq!(poly_partial(&casimir, 2).unwrap(), p(3, &[(&[1, 0, 0], 4)]));
        assert_eq!(
            poly_partial(&casimir, 3),
            Err(Error::IndexOutOfRange { index: 3, size: 3 })
        );
    }

    #[test]
    fn grlex_order_and_display() {
        let f = p(2, &[(&[0, 1], 1), (&[2, 0], -3), (&[1, 1], 1), (&[0, 0], 5)]);
        assert_eq!(f.to_string(), "-3*x0^2 + x0*x1 + x1 + 5");
        assert_eq!(f.degree(), Some(2));
        assert_eq!(SparsePoly::zero(2).to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let x = SparsePoly::var(2, 0);
        let y = SparsePoly::var(2, 1);
        let a = &(&x + &y) * &(&x - &y);
        assert_eq!(a.div_exact(&(&x + &y)).unwrap(), &x - &y);
        assert!(x.div_exact(&y).is_none());
        assert!(a.div_exact(&SparsePoly::zero(2)).is_none());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
        let m = monomials_of_degree(2, 2);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spans() {
        let h = SparsePoly::var(3, 1);
        let ef = &SparsePoly::var(3, 0) * &SparsePoly::var(3, 2);
        let cas = &(&h * &h) + &ef.scale(&int(4));
        assert!(same_span(&[cas.clone(), ef.scale(&int(8))], &[&h * &h, ef.clone()]));
        assert!(!same_span(&[cas], &[&h * &h, ef]));
    }
}
