//! Gradings given by integer weights, their operators and contractions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::derived::derived;
use crate::algebra::pencil::{classify_operator, normalize_pencil, PencilAction};
use crate::algebra::tensor::{require_lie, StructureTensor};
use crate::error::{Error, Result};
use crate::exactmath::matrix::{LinOp, RatMatrix};
use crate::exactmath::rat::{int, rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradingKind {
    /// Weights in `0..n`, products add weights modulo `n`.
    Modular(u32),
    /// Arbitrary integer weights, products add weights.
    Integer,
}

/// Integer weight per basis vector. The weight spaces are spanned by basis
/// vectors, so the grading is always diagonal in the given basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingSpec {
    weights: Vec<i64>,
    kind: GradingKind,
}

impl GradingSpec {
    /// A `Z_n`-grading. Weights must lie in `0..n` and `n ≥ 2`.
    pub fn modular(weights: Vec<i64>, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrading(format!("modulus must be at least 2, got {n}")));
        }
        if let Some(w) = weights.iter().find(|&&w| w < 0 || w >= i64::from(n)) {
            return Err(Error::InvalidGrading(format!("weight {w} outside 0..{n}")));
        }
        Ok(GradingSpec {
            weights,
            kind: GradingKind::Modular(n),
        })
    }

    pub fn integer(weights: Vec<i64>) -> Self {
        GradingSpec {
            weights,
            kind: GradingKind::Integer,
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn kind(&self) -> GradingKind {
        self.kind
    }

    pub fn modulus(&self) -> Option<u32> {
        match self.kind {
            GradingKind::Modular(n) => Some(n),
            GradingKind::Integer => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.weights.iter().copied().max()
    }

    /// Basis indices grouped by weight.
    pub fn weight_spaces(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &w) in self.weights.iter().enumerate() {
            out.entry(w).or_default().push(i);
        }
        out
    }

    fn combine(&self, a: i64, b: i64) -> i64 {
        match self.kind {
            GradingKind::Modular(n) => (a + b).rem_euclid(i64::from(n)),
            GradingKind::Integer => a + b,
        }
    }

    /// Checks that every product of weight vectors lands in the expected
    /// weight space; the first offending basis pair is reported.
    pub fn validate(&self, t: &StructureTensor) -> Result<()> {
        if self.dim() != t.dim() {
            return Err(Error::DimensionMismatch {
                expected: t.dim(),
                found: self.dim(),
            });
        }
        for ((i, j), v) in t.entries() {
            let target = self.combine(self.weights[*i], self.weights[*j]);
            if let Some(k) = v
                .iter()
                .enumerate()
                .position(|(k, c)| !c.is_zero() && self.weights[k] != target)
            {
                return Err(Error::InvalidGrading(format!(
                    "product of basis vectors {i} and {j} has a component on {k} of weight {}, expected weight {target}",
                    self.weights[k]
                )));
            }
        }
        Ok(())
    }
}

/// Diagonal operator acting by the weight on each weight space.
pub fn grading_operator(g: &GradingSpec) -> LinOp {
    let diag: Vec<Rat> = g.weights.iter().map(|&w| int(w)).collect();
    RatMatrix::diagonal(&diag)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contractions {
    /// Products of weights `i + j < n`, kept as they are.
    pub zero: StructureTensor,
    /// Products of weights `i + j ≥ n`, equal to `−(1/n)·ρ(D)·T`.
    pub infinity: StructureTensor,
}

/// Splits the bracket of a `Z_n`-graded Lie algebra into the two
/// contractions obtained as `t → 0` and `t → ∞` of the rescaled bracket.
pub fn contractions_from_grading(t: &StructureTensor, g: &GradingSpec) -> Result<Contractions> {
    let n = g
        .modulus()
        .ok_or_else(|| Error::InvalidGrading("a Z_n-grading is required".into()))?;
    g.validate(t)?;
    let d = grading_operator(g);
    let infinity = derived(t, &d)?.scale(&rat(-1, i64::from(n)));
    let zero = t.checked_sub(&infinity)?;
    require_lie(&zero)?;
    require_lie(&infinity)?;
    Ok(Contractions { zero, infinity })
}

/// The grade tables of the two contractions of the extended algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiGradingReport {
    /// Every nonzero product of weights `i + j ≤ n` in `T̃₍₀₎` has weight `i + j`,
    /// and products with `i + j > n` vanish.
    pub zero_grade_table: bool,
    /// Every nonzero product of weights `i + j ≥ n + 1` in `T̃₍∞₎` has weight
    /// `i + j − n`, and products with `i + j ≤ n` vanish.
    pub infinity_grade_table: bool,
    /// The diagonal copy of the zero weight space is central in `T̃₍∞₎`.
    pub diagonal_central: bool,
    /// No product in `T̃₍∞₎` has a component on the diagonal copy.
    pub diagonal_not_hit: bool,
    /// Both contractions span the degenerate lines of the pencil.
    pub degenerate_lines_match: bool,
}

impl QuasiGradingReport {
    pub fn all_hold(&self) -> bool {
        self.zero_grade_table
            && self.infinity_grade_table
            && self.diagonal_central
            && self.diagonal_not_hit
            && self.degenerate_lines_match
    }
}

#[derive(Clone, Debug)]
pub struct QuasiGrading {
    /// `q ∔ q₀` in the adapted basis.
    pub tensor: StructureTensor,
    /// Weights `0..=n` of the adapted basis.
    pub grading: GradingSpec,
    pub operator: LinOp,
    /// Columns are the adapted basis vectors in the coordinates of `q ∔ q₀`
    /// (first the basis of `q`, then the basis of the weight-zero part).
    pub change_of_basis: LinOp,
    pub pencil: PencilAction,
    pub contractions: Contractions,
    pub report: QuasiGradingReport,
}

fn proportional(a: &StructureTensor, b: &StructureTensor) -> bool {
    crate::exactmath::matrix::span_rank(&[a.flatten(), b.flatten()]) <= 1 && (a.is_zero() == b.is_zero())
}

/// Builds `q ∔ q₀` from a `Z_n`-graded `q`, with the basis
/// `Δq₀` (weight 0), `q_i` (weight `i`, `1 ≤ i < n`), `q₀ ⊕ 0` (weight `n`).
pub fn quasi_grading_extension(t: &StructureTensor, g: &GradingSpec) -> Result<QuasiGrading> {
    let n = g
        .modulus()
        .ok_or_else(|| Error::InvalidGrading("a Z_n-grading is required".into()))?;
    g.validate(t)?;
    let dim = t.dim();
    let spaces = g.weight_spaces();
    let zero_idx: Vec<usize> = spaces.get(&0).cloned().unwrap_or_default();
    let m = zero_idx.len();
    let total = dim + m;

    // q ∔ q₀ in its natural basis
    let mut sum = StructureTensor::zero(total);
    for ((i, j), v) in t.entries() {
        let mut w = v.clone();
        w.resize(total, Rat::zero());
        sum.set(*i, *j, w);
    }
    for (a, &i) in zero_idx.iter().enumerate() {
        for (b, &j) in zero_idx.iter().enumerate() {
            let v = t.product(i, j);
            let mut w = vec![Rat::zero(); total];
            for (c, &k) in zero_idx.iter().enumerate() {
                w[dim + c] = v[k].clone();
            }
            sum.set(dim + a, dim + b, w);
        }
    }

    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(total);
    let mut weights: Vec<i64> = Vec::with_capacity(total);
    let mut labels: Vec<String> = Vec::with_capacity(total);
    for (a, &i) in zero_idx.iter().enumerate() {
        let mut c = vec![Rat::zero(); total];
        c[i] = int(1);
        c[dim + a] = int(1);
        columns.push(c);
        weights.push(0);
        labels.push(format!("d{}", t.labels()[i]));
    }
    for w in 1..i64::from(n) {
        for &i in spaces.get(&w).map(Vec::as_slice).unwrap_or(&[]) {
            let mut c = vec![Rat::zero(); total];
            c[i] = int(1);
            columns.push(c);
            weights.push(w);
            labels.push(t.labels()[i].clone());
        }
    }
    for &i in &zero_idx {
        let mut c = vec![Rat::zero(); total];
        c[i] = int(1);
        columns.push(c);
        weights.push(i64::from(n));
        labels.push(t.labels()[i].clone());
    }
    let p = RatMatrix::from_columns(total, &columns)?;
    let tensor = sum.change_basis(&p)?.with_labels(labels);
    let grading = GradingSpec::integer(weights.clone());
    let operator = grading_operator(&grading);
    let pencil = classify_operator(&tensor, &operator)?;
    let infinity = pencil.derived.scale(&rat(-1, i64::from(n)));
    let zero = tensor.checked_sub(&infinity)?;
    require_lie(&zero)?;
    require_lie(&infinity)?;

    let nn = i64::from(n);
    let grade_ok = |tt: &StructureTensor, keep: &dyn Fn(i64) -> bool, shift: i64| {
        tt.entries().all(|((i, j), v)| {
            let s = weights[*i] + weights[*j];
            keep(s)
                && v.iter()
                    .enumerate()
                    .all(|(k, c)| c.is_zero() || weights[k] == s - shift)
        })
    };
    let zero_grade_table = grade_ok(&zero, &|s| s <= nn, 0);
    let infinity_grade_table = grade_ok(&infinity, &|s| s > nn, nn);
    let diagonal_central = infinity
        .entries()
        .all(|((i, j), _)| weights[*i] != 0 && weights[*j] != 0);
    let diagonal_not_hit = infinity
        .entries()
        .all(|(_, v)| v.iter().enumerate().all(|(k, c)| c.is_zero() || weights[k] != 0));
    let degenerate_lines_match = match normalize_pencil(&pencil) {
        Ok(np) => {
            np.degenerate_lines.len() == 2
                && proportional(&np.degenerate_lines[0], &infinity)
                && proportional(&np.degenerate_lines[1], &zero)
        }
        Err(_) => false,
    };
    let report = QuasiGradingReport {
        zero_grade_table,
        infinity_grade_table,
        diagonal_central,
        diagonal_not_hit,
        degenerate_lines_match,
    };
    Ok(QuasiGrading {
        tensor,
        grading,
        operator,
        change_of_basis: p,
        pencil,
        contractions: Contractions { zero, infinity },
        report,
    })
}

/// Coefficient tensors of `φ_t⁻¹ ψ(φ_t x, φ_t y) = Σ_e t^e ψ₍ₑ₎(x, y)` where
/// `φ_t` multiplies the weight-`w` basis vectors by `t^w`. Exponents may be
/// negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationTable {
    pub weights: Vec<i64>,
    pub terms: BTreeMap<i64, StructureTensor>,
}

impl DeformationTable {
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&e| e >= 0)
    }

    pub fn exponents(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    /// The undeformed tensor, i.e. the value at `t = 1`.
    pub fn total(&self) -> StructureTensor {
        let n = self.weights.len();
        self.terms.values().fold(StructureTensor::zero(n), |acc, t| {
            acc.checked_add(t).expect("same dimension")
        })
    }
}

pub fn deform_bracket(t: &StructureTensor, weights: &[i64]) -> Result<DeformationTable> {
    if weights.len() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: weights.len(),
        });
    }
    let n = t.dim();
    let mut parts: BTreeMap<i64, BTreeMap<(usize, usize), Vec<Rat>>> = BTreeMap::new();
    for ((i, j), v) in t.entries() {
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = weights[*i] + weights[*j] - weights[k];
            let slot = parts
                .entry(e)
                .or_default()
                .entry((*i, *j))
                .or_insert_with(|| vec![Rat::zero(); n]);
            slot[k] = c.clone();
        }
    }
    let terms = parts
        .into_iter()
        .map(|(e, entries)| {
            let mut tt = StructureTensor::zero(n).with_labels(t.labels().to_vec());
            for ((i, j), v) in entries {
                tt.set(i, j, v);
            }
            (e, tt)
        })
        .collect();
    Ok(DeformationTable {
        weights: weights.to_vec(),
        terms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialReport {
    pub is_special: bool,
    pub m: Option<i64>,
    /// `ρ(D)·T = −m·T₍ₘ₎`.
    pub derived_matches: bool,
    /// `D` classifies as a near-derivation with `(a, b) = (0, −m)`.
    pub semisimple_near: bool,
    /// Both end terms satisfy skew-symmetry and Jacobi.
    pub end_terms_lie: bool,
    /// `[q_i, q_j] ⊆ q_{i+j} ⊕ q_{i+j−m}` for all weight pairs.
    pub containment: bool,
    /// `p ≤ m`, checked when the top weight space has nonzero products.
    pub top_bound: Option<bool>,
    /// `p = m`, checked when the top weight space is a non-abelian subalgebra.
    pub top_equality: Option<bool>,
}

impl SpecialReport {
    pub fn all_hold(&self) -> bool {
        self.is_special
            && self.derived_matches
            && self.semisimple_near
            && self.end_terms_lie
            && self.containment
            && self.top_bound != Some(false)
            && self.top_equality != Some(false)
    }
}

/// Decides whether the deformation has exactly two terms, at `t⁰` and `t^m`,
/// and if so checks the properties such deformations must have.
pub fn check_special(table: &DeformationTable) -> Result<SpecialReport> {
    let exps = table.exponents();
    let mut report = SpecialReport {
        is_special: false,
        m: None,
        derived_matches: false,
        semisimple_near: false,
        end_terms_lie: false,
        containment: false,
        top_bound: None,
        top_equality: None,
    };
    if !table.is_polynomial() || exps.len() != 2 || exps[0] != 0 {
        return Ok(report);
    }
    let m = exps[1];
    report.is_special = true;
    report.m = Some(m);
    let t = table.total();
    let tm = &table.terms[&m];
    let t0 = &table.terms[&0];
    let grading = GradingSpec::integer(table.weights.clone());
    let d = grading_operator(&grading);
    let dt = derived(&t, &d)?;
    report.derived_matches = dt == tm.scale(&int(-m));
    let pencil = classify_operator(&t, &d)?;
    report.semisimple_near =
        pencil.class == crate::algebra::pencil::OperatorClass::Near && pencil.coeffs == Some((Rat::zero(), int(-m)));
    report.end_terms_lie = require_lie(t0).is_ok() && require_lie(tm).is_ok();
    let w = &table.weights;
    report.containment = t.entries().all(|((i, j), v)| {
        let s = w[*i] + w[*j];
        v.iter()
            .enumerate()
            .all(|(k, c)| c.is_zero() || w[k] == s || w[k] == s - m)
    });
    if let Some(p) = grading.max_weight() {
        let top: BTreeSet<usize> = grading.weight_spaces()[&p].iter().copied().collect();
        let top_products: Vec<&Vec<Rat>> = t
            .entries()
            .filter(|((i, j), _)| top.contains(i) && top.contains(j))
            .map(|(_, v)| v)
            .collect();
        if !top_products.is_empty() {
            report.top_bound = Some(p <= m);
            let closed = top_products
                .iter()
                .all(|v| v.iter().enumerate().all(|(k, c)| c.is_zero() || top.contains(&k)));
            if closed {
                report.top_equality = Some(p == m);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::lower_central_series;
    use crate::constructions::classical::{build_classical, Family};
    use crate::exactmath::rat::unit_vector;

    fn sl2() -> StructureTensor {
        build_classical(Family::Sl, 2).unwrap().tensor
    }

    fn z2() -> GradingSpec {
        GradingSpec::modular(vec![1, 0, 1], 2).unwrap()
    }

    #[test]
    fn validation() {
        assert!(z2().validate(&sl2()).is_ok());
        let bad = GradingSpec::modular(vec![1, 1, 0], 2).unwrap();
        assert!(matches!(bad.validate(&sl2()), Err(Error::InvalidGrading(_))));
        assert!(GradingSpec::modular(vec![2, 0, 1], 2).is_err());
        assert!(GradingSpec::integer(vec![2, 0, -2]).validate(&sl2()).is_ok());
    }

    #[test]
    fn operator_is_diagonal() {
        assert!(grading_operator(&GradingSpec::integer(vec![0, 0, 0])).is_zero());
        assert_eq!(grading_operator(&z2()), RatMatrix::diagonal(&[int(1), int(0), int(1)]));
    }

    #[test]
    fn sl2_contractions() {
        let t = sl2();
        let c = contractions_from_grading(&t, &z2()).unwrap();
        assert_eq!(c.infinity.entries().count(), 2);
        assert_eq!(c.infinity.product(0, 2), unit_vector(3, 1));
        assert!(c.zero.get(0, 2).is_none());
        assert!(c.zero.get(1, 0).is_some() && c.zero.get(1, 2).is_some());
        assert_eq!(c.zero.checked_add(&c.infinity).unwrap(), t);
        assert_eq!(lower_central_series(&c.infinity), vec![3, 1, 0]);
        let ab = StructureTensor::zero(2);
        let c = contractions_from_grading(&ab, &GradingSpec::modular(vec![0, 1], 2).unwrap()).unwrap();
        assert!(c.zero.is_zero() && c.infinity.is_zero());
    }

    #[test]
    fn sl2_quasi_grading() {
        let q = quasi_grading_extension(&sl2(), &z2()).unwrap();
        assert_eq!(q.tensor.dim(), 4);
        assert_eq!(q.grading.weights(), [0, 1, 1, 2]);
        assert_eq!(q.pencil.coeffs, Some((int(0), int(-2))));
        assert!(q.report.all_hold(), "{:?}", q.report);
        let w = q.grading.weights();
        for ((i, j), _) in q.pencil.derived.entries() {
            assert!(w[*i] + w[*j] >= 3);
        }
    }

    #[test]
    fn z2_deformation_is_special() {
        let t = sl2();
        let table = deform_bracket(&t, &[1, 0, 1]).unwrap();
        assert_eq!(table.exponents(), vec![0, 2]);
        let r = check_special(&table).unwrap();
        assert_eq!(r.m, Some(2));
        assert!(r.all_hold(), "{r:?}");
        let c = contractions_from_grading(&t, &z2()).unwrap();
        assert_eq!(table.terms[&2], c.infinity);
        assert_eq!(table.terms[&0], c.zero);
    }

    #[test]
    fn equal_weights_give_one_term() {
        let t = sl2();
        let table = deform_bracket(&t, &[0, 0, 0]).unwrap();
        assert_eq!(table.exponents(), vec![0]);
        assert_eq!(table.terms[&0], t);
        let table = deform_bracket(&t, &[3, 3, 3]).unwrap();
        assert_eq!(table.exponents(), vec![3]);
        assert!(!check_special(&table).unwrap().is_special);
    }

    #[test]
    fn shifted_h_grading_is_one_term() {
        let table = deform_bracket(&sl2(), &[2, 1, 0]).unwrap();
        assert_eq!(table.exponents(), vec![1]);
        assert!(!check_special(&table).unwrap().is_special);
    }

    #[test]
    fn three_terms_not_special() {
        let g = build_classical(Family::Gl, 2).unwrap();
        // weights (E12, E11, E22, E21) = (1, 0, 1, 1): [E12, E21] = E11 − E22
        // splits over exponents 2 and 1, [E11, E12] has exponent 0
        let table = deform_bracket(&g.tensor, &[1, 0, 1, 1]).unwrap();
        assert_eq!(table.exponents(), vec![0, 1, 2]);
        assert!(table.is_polynomial());
        assert!(!check_special(&table).unwrap().is_special);

        let g = build_classical(Family::Sl, 3).unwrap();
        let mut w = vec![0; 8];
        w[0] = 1;
        w[5] = 1;
        // [E23, E31] = E21 lowers the exponent below zero
        let table = deform_bracket(&g.tensor, &w).unwrap();
        assert_eq!(table.exponents(), vec![-1, 0, 1, 2]);
        assert!(!table.is_polynomial());
    }

    #[test]
    fn negative_exponents_reported() {
        let table = deform_bracket(&sl2(), &[0, 1, 0]).unwrap();
        assert!(!table.is_polynomial());
        assert!(table.exponents().contains(&-1));
    }
}
