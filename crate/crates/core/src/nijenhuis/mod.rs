//! Nijenhuis torsion, Nijenhuis operators and the exponential identities
//! satisfied by nilpotent Nijenhuis operators and near-derivations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::derived::{derived, derived_iter};
use crate::algebra::pencil::{classify_operator, OperatorClass};
use crate::algebra::tensor::{check_jacobi, is_lie, StructureTensor};
use crate::constructions::assoc::InvolutionSplit;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{nilpotent_exp, LinOp, RatMatrix};
use crate::exactmath::rat::{format_rat, int, rat, rat_pow, unit_vector, vec_add, vec_sub, Rat, RatVec};

/// Values `𝒯_D(x_i, x_j)` on basis pairs.
pub type TorsionTensor = StructureTensor;

/// `𝒯_D(x, y) = [Dx, Dy] + D(D[x, y] − [Dx, y] − [x, Dy])`.
pub fn torsion(t: &StructureTensor, d: &LinOp) -> Result<TorsionTensor> {
    let first = derived(t, d)?;
    let n = t.dim();
    let mut out = StructureTensor::zero(n).with_labels(t.labels().to_vec());
    for i in 0..n {
        for j in 0..n {
            let v = vec_add(&t.eval(&d.column(i), &d.column(j))?, &d.apply(&first.product(i, j))?);
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// The definition expanded term by term, without the derived operation.
fn torsion_expanded(t: &StructureTensor, d: &LinOp) -> Result<TorsionTensor> {
    let n = t.dim();
    let mut out = StructureTensor::zero(n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (unit_vector(n, i), unit_vector(n, j));
            let (dx, dy) = (d.column(i), d.column(j));
            let inner = vec_sub(
                &vec_sub(&d.apply(&t.eval(&x, &y)?)?, &t.eval(&dx, &y)?),
                &t.eval(&x, &dy)?,
            );
            out.set(i, j, vec_add(&t.eval(&dx, &dy)?, &d.apply(&inner)?));
        }
    }
    Ok(out)
}

fn first_nonzero_pair(t: &StructureTensor) -> Option<(usize, usize)> {
    t.entries().next().map(|(k, _)| *k)
}

/// An eigenspace of a diagonal operator that is not closed under the bracket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceWitness {
    pub eigenvalue: String,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NijenhuisVerdict {
    pub is_nijenhuis: bool,
    /// First basis pair with nonzero torsion.
    pub witness: Option<(usize, usize)>,
    /// The two ways of evaluating the torsion agree.
    pub forms_agree: bool,
    /// Only searched for diagonal operators.
    pub eigenspace_witness: Option<EigenspaceWitness>,
}

fn eigenspace_witness(t: &StructureTensor, d: &LinOp) -> Option<EigenspaceWitness> {
    if !d.is_diagonal() {
        return None;
    }
    let diag = d.diagonal_entries();
    let mut spaces: BTreeMap<&Rat, Vec<usize>> = BTreeMap::new();
    for (i, l) in diag.iter().enumerate() {
        spaces.entry(l).or_default().push(i);
    }
    for (l, idx) in &spaces {
        for &i in idx {
            for &j in idx {
                let leaves = t
                    .get(i, j)
                    .is_some_and(|v| v.iter().enumerate().any(|(k, c)| !c.is_zero() && &diag[k] != *l));
                if leaves {
                    return Some(EigenspaceWitness {
                        eigenvalue: format_rat(l),
                        left: i,
                        right: j,
                    });
                }
            }
        }
    }
    None
}

pub fn is_nijenhuis(t: &StructureTensor, d: &LinOp) -> Result<NijenhuisVerdict> {
    let tor = torsion(t, d)?;
    let expanded = torsion_expanded(t, d)?;
    Ok(NijenhuisVerdict {
        is_nijenhuis: tor.is_zero(),
        witness: first_nonzero_pair(&tor),
        forms_agree: tor == expanded,
        eigenspace_witness: eigenspace_witness(t, d),
    })
}

fn require_nijenhuis(t: &StructureTensor, d: &LinOp) -> Result<()> {
    match first_nonzero_pair(&torsion(t, d)?) {
        Some((i, j)) => Err(Error::NotNijenhuis(i, j)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerChecks {
    pub power: usize,
    /// `𝒯_{N^k} = 0`.
    pub torsion_vanishes: bool,
    /// `[ , ]^(k)_N = (−1)^(k−1) [ , ]'_{N^k}`.
    pub iterate_formula: bool,
    /// `[ , ]^(k)_N` is a Lie bracket.
    pub iterate_is_lie: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NPropertiesReport {
    pub depth: usize,
    pub powers: Vec<PowerChecks>,
    /// `[ , ]^(i)_N + [ , ]^(j)_N` satisfies Jacobi for all `0 ≤ i < j ≤ depth`.
    pub pairwise_compatible: bool,
    pub incompatible_pair: Option<(usize, usize)>,
}

impl NPropertiesReport {
    pub fn all_hold(&self) -> bool {
        self.pairwise_compatible
            && self
                .powers
                .iter()
                .all(|p| p.torsion_vanishes && p.iterate_formula && p.iterate_is_lie)
    }
}

pub fn check_n_properties(t: &StructureTensor, n: &LinOp, depth: usize) -> Result<NPropertiesReport> {
    require_nijenhuis(t, n)?;
    let mut iterates = vec![t.clone()];
    let mut powers = Vec::with_capacity(depth);
    for k in 1..=depth {
        let nk = n.pow(k);
        let iterate = derived(iterates.last().expect("starts with T"), n)?;
        let sign = if k % 2 == 1 { int(1) } else { int(-1) };
        powers.push(PowerChecks {
            power: k,
            torsion_vanishes: torsion(t, &nk)?.is_zero(),
            iterate_formula: iterate == derived(t, &nk)?.scale(&sign),
            iterate_is_lie: is_lie(&iterate),
        });
        iterates.push(iterate);
    }
    let mut incompatible_pair = None;
    'outer: for i in 0..iterates.len() {
        for j in i + 1..iterates.len() {
            if !check_jacobi(&iterates[i].checked_add(&iterates[j])?).holds {
                incompatible_pair = Some((i, j));
                break 'outer;
            }
        }
    }
    Ok(NPropertiesReport {
        depth,
        powers,
        pairwise_compatible: incompatible_pair.is_none(),
        incompatible_pair,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

impl IdentityCheck {
    fn compare(lhs: &StructureTensor, rhs: &StructureTensor) -> Result<Self> {
        let diff = lhs.checked_sub(rhs)?;
        let witness = first_nonzero_pair(&diff);
        Ok(IdentityCheck {
            holds: witness.is_none(),
            witness,
        })
    }
}

/// `[x, y]''_D = 2𝒯_D(x, y) − [x, y]'_{D²}` for any operator `D`.
pub fn torsion_decomposition(t: &StructureTensor, d: &LinOp) -> Result<IdentityCheck> {
    let lhs = derived_iter(t, d, 2)?;
    let rhs = torsion(t, d)?.linear_combination(&int(2), &derived(t, &(d * d))?, &int(-1))?;
    IdentityCheck::compare(&lhs, &rhs)
}

/// `[Nx_i, Nx_j]'_N`, `N([x_i, x_j]'_{N²})` and `−N([x_i, x_j]''_N)` agree
/// on all basis pairs.
pub fn exp_coefficient_check(t: &StructureTensor, n: &LinOp) -> Result<bool> {
    let first = derived(t, n)?;
    let of_square = derived(t, &(n * n))?;
    let second = derived_iter(t, n, 2)?;
    let dim = t.dim();
    for i in 0..dim {
        for j in 0..dim {
            let a = first.eval(&n.column(i), &n.column(j))?;
            let b = n.apply(&of_square.product(i, j))?;
            let c: RatVec = n.apply(&second.product(i, j))?.iter().map(|x| -x).collect();
            if a != b || b != c {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `e^{−sN}[e^{sN}x, e^{sN}y] = [e^{sN}x, y] + [x, e^{sN}y] − e^{sN}[x, y]`
/// on all basis pairs, at one value of `s`.
pub fn exp_identity_nijenhuis(t: &StructureTensor, n: &LinOp, s: &Rat) -> Result<bool> {
    t.require_op(n)?;
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    require_nijenhuis(t, n)?;
    let e = nilpotent_exp(n, s)?;
    let e_inv = nilpotent_exp(n, &-s)?;
    let dim = t.dim();
    for i in 0..dim {
        for j in 0..dim {
            let (x, y) = (unit_vector(dim, i), unit_vector(dim, j));
            let (ex, ey) = (e.column(i), e.column(j));
            let lhs = e_inv.apply(&t.eval(&ex, &ey)?)?;
            let rhs = vec_sub(
                &vec_add(&t.eval(&ex, &y)?, &t.eval(&x, &ey)?),
                &e.apply(&t.eval(&x, &y)?)?,
            );
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of checking a polynomial or Laurent identity at sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpCertificate {
    pub points: Vec<String>,
    pub distinct_points: usize,
    /// Number of distinct points that pins the identity.
    pub points_needed: usize,
    pub holds: bool,
    pub failing_point: Option<String>,
}

impl ExpCertificate {
    pub fn certified(&self) -> bool {
        self.holds && self.distinct_points >= self.points_needed
    }
}

/// `0, 1, −1, 2, −2, …` followed by halves, `count` distinct values.
pub fn sample_points(count: usize) -> Vec<Rat> {
    (0..count as i64)
        .map(|k| if k % 2 == 0 { rat(-k, 4) } else { rat(k + 1, 4) })
        .collect()
}

fn certificate(
    points: &[Rat],
    points_needed: usize,
    mut check: impl FnMut(&Rat) -> Result<bool>,
) -> Result<ExpCertificate> {
    let mut failing_point = None;
    for p in points {
        if !check(p)? {
            failing_point = Some(format_rat(p));
            break;
        }
    }
    let mut distinct = points.to_vec();
    distinct.sort();
    distinct.dedup();
    Ok(ExpCertificate {
        points: points.iter().map(format_rat).collect(),
        distinct_points: distinct.len(),
        points_needed,
        holds: failing_point.is_none(),
        failing_point,
    })
}

/// Checks the Nijenhuis exponential identity at the given points. Both sides
/// are polynomials in `s` of degree below `3ν` for `N^ν = 0`, so `3ν − 2`
/// points certify it. With `points = None`, `4·dim + 1` points are used.
pub fn certify_exp_nijenhuis(t: &StructureTensor, n: &LinOp, points: Option<&[Rat]>) -> Result<ExpCertificate> {
    t.require_op(n)?;
    let nu = n.nilpotency_index().ok_or(Error::NotNilpotent)?;
    let default;
    let points = match points {
        Some(p) => p,
        None => {
            default = sample_points(4 * t.dim() + 1);
            &default
        }
    };
    let needed = (3 * nu).saturating_sub(2).max(1);
    certificate(points, needed, |s| exp_identity_nijenhuis(t, n, s))
}

/// How the one-parameter group `e^{sD}` of a near-derivation is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NearExpCase {
    /// `D` nilpotent with `ρ(D)²·T = 0`: the point is `s`.
    Nilpotent,
    /// `D` diagonal with integer entries and `ρ(D)²·T = m·ρ(D)·T`: the point
    /// is `v = e^s` and `e^{sD}x_i = v^{d_i}x_i`.
    Diagonal { m: i64 },
}

pub fn near_exp_case(t: &StructureTensor, d: &LinOp) -> Result<NearExpCase> {
    let p = classify_operator(t, d)?;
    let m = match p.class {
        OperatorClass::Derivation => Rat::zero(),
        OperatorClass::Quasi | OperatorClass::Near => {
            let (a, b) = p.coeffs.expect("near classes carry coefficients");
            if !a.is_zero() {
                return Err(Error::Unsupported(
                    "the exponential identity needs a = 0; normalise the pencil first".into(),
                ));
            }
            b
        }
        _ => return Err(Error::NotNearDerivation),
    };
    if m.is_zero() && d.is_nilpotent() {
        return Ok(NearExpCase::Nilpotent);
    }
    let integral = |r: &Rat| r.is_integer();
    if d.is_diagonal() && d.diagonal_entries().iter().all(integral) && integral(&m) {
        let m = i64::try_from(m.to_integer()).map_err(|_| Error::Unsupported("coefficient out of range".into()))?;
        return Ok(NearExpCase::Diagonal { m });
    }
    Err(Error::Unsupported(
        "only nilpotent quasi-derivations and diagonal integer operators are exponentiated".into(),
    ))
}

/// `e^{sD}[e^{−sD}x, e^{−sD}y]` against `[x, y] + (1/m)(v^m − 1)[x, y]'_D`
/// (diagonal case, `point = v`) or `[x, y] + s[x, y]'_D` (nilpotent case,
/// `point = s`), on all basis pairs.
pub fn exp_identity_near(t: &StructureTensor, d: &LinOp, point: &Rat) -> Result<bool> {
    let case = near_exp_case(t, d)?;
    let first = derived(t, d)?;
    let dim = t.dim();
    let (lhs, rhs) = match case {
        NearExpCase::Nilpotent => {
            let e = nilpotent_exp(d, point)?;
            let e_inv = nilpotent_exp(d, &-point)?;
            let lhs = StructureTensor::from_fn(dim, |i, j| {
                let v = t.eval(&e_inv.column(i), &e_inv.column(j)).expect("dimensions match");
                e.apply(&v).expect("dimensions match")
            });
            (lhs, t.linear_combination(&Rat::one(), &first, point)?)
        }
        NearExpCase::Diagonal { m } => {
            if point.is_zero() {
                return Err(Error::Unsupported("v = e^s must be nonzero".into()));
            }
            let w: Vec<i64> = d
                .diagonal_entries()
                .iter()
                .map(|x| i64::try_from(x.to_integer()).expect("small weights"))
                .collect();
            let mut lhs = StructureTensor::zero(dim);
            for ((i, j), v) in t.entries() {
                let scaled = v
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * rat_pow(point, w[k] - w[*i] - w[*j]))
                    .collect();
                lhs.set(*i, *j, scaled);
            }
            let coeff = if m == 0 {
                Rat::zero()
            } else {
                (rat_pow(point, m) - Rat::one()) / int(m)
            };
            (lhs, t.linear_combination(&Rat::one(), &first, &coeff)?)
        }
    };
    Ok(lhs == rhs)
}

/// Checks [`exp_identity_near`] at the given points, reporting how many are
/// needed: `3ν − 2` in the nilpotent case, and one more than the spread of
/// exponents of the Laurent polynomials in the diagonal case.
pub fn certify_exp_near(t: &StructureTensor, d: &LinOp, points: &[Rat]) -> Result<ExpCertificate> {
    let needed = match near_exp_case(t, d)? {
        NearExpCase::Nilpotent => {
            let nu = d.nilpotency_index().expect("nilpotent case");
            (3 * nu).saturating_sub(2).max(1)
        }
        NearExpCase::Diagonal { m } => {
            let w: Vec<i64> = d
                .diagonal_entries()
                .iter()
                .map(|x| i64::try_from(x.to_integer()).expect("small weights"))
                .collect();
            let mut exps = vec![0, m];
            for ((i, j), v) in t.entries() {
                for (k, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        exps.push(w[k] - w[*i] - w[*j]);
                    }
                }
            }
            let spread = exps.iter().max().expect("nonempty") - exps.iter().min().expect("nonempty");
            usize::try_from(spread).expect("nonnegative") + 1
        }
    };
    certificate(points, needed, |p| exp_identity_near(t, d, p))
}

/// Nijenhuis operator whose powers, applied on both sides of a vanishing
/// bracket, give a nonzero bracket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerVanishingWitness {
    pub left: usize,
    pub right: usize,
    pub i: usize,
    pub j: usize,
}

/// For basis pairs with `[x, y] = [N^i x, y] = [x, N^j y] = 0`, checks that
/// `[N^i x, N^j y] = 0`, for `1 ≤ i, j ≤ max_power`.
pub fn check_power_vanishing(
    t: &StructureTensor,
    n: &LinOp,
    max_power: usize,
) -> Result<Option<PowerVanishingWitness>> {
    require_nijenhuis(t, n)?;
    let dim = t.dim();
    let powers: Vec<LinOp> = (0..=max_power).map(|k| n.pow(k)).collect();
    let zero = |v: &RatVec| v.iter().all(Zero::is_zero);
    for a in 0..dim {
        for b in 0..dim {
            if !zero(&t.product(a, b)) {
                continue;
            }
            let (x, y) = (unit_vector(dim, a), unit_vector(dim, b));
            for (i, pi) in powers.iter().enumerate().skip(1) {
                let nx = pi.column(a);
                if !zero(&t.eval(&nx, &y)?) {
                    continue;
                }
                for (j, pj) in powers.iter().enumerate().skip(1) {
                    let ny = pj.column(b);
                    if zero(&t.eval(&x, &ny)?) && !zero(&t.eval(&nx, &ny)?) {
                        return Ok(Some(PowerVanishingWitness {
                            left: a,
                            right: b,
                            i,
                            j,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct AssocTorsion {
    /// The Lie algebra `a₀`.
    pub algebra: StructureTensor,
    /// `D_a = ½(L_a + R_a)` on `a₀`.
    pub operator: LinOp,
    pub torsion: TorsionTensor,
    pub report: AssocTorsionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssocTorsionReport {
    /// `𝒯_{D_a}(x, y) = −¼[[a, x], [a, y]]` on `a₀`.
    pub formula_holds: bool,
    /// `2[[a, x], [a, y]] = [x, y]'_{(ad a)²}` on `a₀`.
    pub ad_square_rewrite_holds: bool,
    /// `(ad a)²` vanishes on `a₀`.
    pub ad_square_vanishes: bool,
    pub is_nijenhuis: bool,
}

impl AssocTorsionReport {
    pub fn all_hold(&self) -> bool {
        self.formula_holds && self.ad_square_rewrite_holds && (!self.ad_square_vanishes || self.is_nijenhuis)
    }
}

pub fn assoc_torsion_formula(split: &InvolutionSplit, a: &RatMatrix) -> Result<AssocTorsion> {
    if a.rows() != split.size || a.cols() != split.size {
        return Err(Error::DimensionMismatch {
            expected: split.size,
            found: a.rows(),
        });
    }
    if !split.is_self_adjoint(a) {
        return Err(Error::NotSelfAdjoint);
    }
    let basis = &split.odd;
    let algebra = split.odd_algebra()?;
    let half = rat(1, 2);
    let operator = basis.operator_of(|x| (&(a * x) + &(x * a)).scale(&half))?;
    let tor = torsion(&algebra, &operator)?;
    let double_bracket = |x: &RatMatrix, y: &RatMatrix| a.commutator(x).commutator(&a.commutator(y));
    let expected = basis.tensor_of(|x, y| double_bracket(x, y).scale(&rat(-1, 4)))?;
    let ad_square = basis.operator_of(|x| a.commutator(&a.commutator(x)))?;
    let rewrite = basis.tensor_of(|x, y| double_bracket(x, y).scale(&int(2)))?;
    let report = AssocTorsionReport {
        formula_holds: tor == expected,
        ad_square_rewrite_holds: derived(&algebra, &ad_square)? == rewrite,
        ad_square_vanishes: ad_square.is_zero(),
        is_nijenhuis: tor.is_zero(),
    };
    Ok(AssocTorsion {
        algebra,
        operator,
        torsion: tor,
        report,
    })
}
