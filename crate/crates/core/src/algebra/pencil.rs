//! Classification of an operator by how `ρ(D)` acts on the plane
//! `U = ⟨T, ρ(D)·T⟩`, and the normalisation of that action.

use num_traits::{One, Zero};
use serde::Serialize;

use super::derived::derived;
use super::tensor::StructureTensor;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{solve, span_rank, LinOp, RatMatrix};
use crate::exactmath::rat::{format_rat, int, rat, rat_sqrt, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorClass {
    /// `ρ(D)·T = 0`.
    Derivation,
    /// `ρ(D)·T` is a nonzero multiple of `T`.
    ScalarType,
    /// `ρ(D)²·T = 0` with `dim U = 2`.
    Quasi,
    /// `ρ(D)²·T = aT + bρ(D)·T` with `(a, b) ≠ (0, 0)`.
    Near,
    NotNear,
}

impl OperatorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorClass::Derivation => "derivation",
            OperatorClass::ScalarType => "scalar-type",
            OperatorClass::Quasi => "quasi",
            OperatorClass::Near => "near",
            OperatorClass::NotNear => "not-near",
        }
    }

    /// Quasi- and near-derivations, the cases with a genuine 2-dimensional pencil.
    pub fn has_pencil(self) -> bool {
        matches!(self, OperatorClass::Quasi | OperatorClass::Near)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilAction {
    pub base: StructureTensor,
    pub operator: LinOp,
    pub derived: StructureTensor,
    pub second: StructureTensor,
    /// `(a, b)` with `ρ(D)²·T = aT + bρ(D)·T`, when `dim U = 2` and it exists.
    pub coeffs: Option<(Rat, Rat)>,
    /// `c` with `ρ(D)·T = cT` in the scalar-type case.
    pub scalar: Option<Rat>,
    pub dim_u: usize,
    pub class: OperatorClass,
}

pub fn classify_operator(t: &StructureTensor, d: &LinOp) -> Result<PencilAction> {
    let first = derived(t, d)?;
    let second = derived(&first, d)?;
    let mut out = PencilAction {
        base: t.clone(),
        operator: d.clone(),
        derived: first,
        second,
        coeffs: None,
        scalar: None,
        dim_u: 0,
        class: OperatorClass::NotNear,
    };
    if out.derived.is_zero() {
        out.dim_u = usize::from(!t.is_zero());
        out.class = OperatorClass::Derivation;
        return Ok(out);
    }
    let ft = t.flatten();
    let fd = out.derived.flatten();
    out.dim_u = span_rank(&[ft.clone(), fd.clone()]);
    if out.dim_u == 1 {
        // T ≠ 0 here, since T' ≠ 0 and T' = c·T
        let (k, tk) = ft.iter().enumerate().find(|(_, x)| !x.is_zero()).expect("T is nonzero");
        out.scalar = Some(&fd[k] / tk);
        out.class = OperatorClass::ScalarType;
        return Ok(out);
    }
    let system = RatMatrix::from_columns(ft.len(), &[ft, fd])?;
    match solve(&system, &out.second.flatten()) {
        Some(ab) => {
            let (a, b) = (ab[0].clone(), ab[1].clone());
            out.class = if a.is_zero() && b.is_zero() {
                OperatorClass::Quasi
            } else {
                OperatorClass::Near
            };
            out.coeffs = Some((a, b));
        }
        None => out.class = OperatorClass::NotNear,
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PencilMode {
    Nilpotent,
    Semisimple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPencil {
    /// `λ₁`, the root of `λ² − bλ − a` used for the shift.
    pub shift: Rat,
    /// `λ₂`.
    pub other_root: Rat,
    /// `D₁ = D + λ₁I`, so that `ρ(D₁) = ρ(D) − λ₁` on `U`.
    pub operator: LinOp,
    /// `ρ(D₁)·T`.
    pub derived: StructureTensor,
    /// Eigenvalues `(0, λ₂ − λ₁)` of `ρ(D₁)` on `U`.
    pub eigenvalues: (Rat, Rat),
    pub mode: PencilMode,
    /// The members of `U` not isomorphic to a generic member: `T'₁`, and in
    /// semisimple mode also `(λ₂ − λ₁)T − T'₁`.
    pub degenerate_lines: Vec<StructureTensor>,
}

impl NormalizedPencil {
    /// Coefficients `(a₁, b₁) = (0, λ₂ − λ₁)` of the normalised action.
    pub fn coeffs(&self) -> (Rat, Rat) {
        self.eigenvalues.clone()
    }
}

pub fn normalize_pencil(p: &PencilAction) -> Result<NormalizedPencil> {
    let (a, b) = match (&p.coeffs, p.class.has_pencil()) {
        (Some(ab), true) => ab.clone(),
        _ => return Err(Error::NotNearDerivation),
    };
    let n = p.base.dim();
    let (l1, l2) = if a.is_zero() {
        (Rat::zero(), b.clone())
    } else {
        let disc = &b * &b + &a * int(4);
        let root = rat_sqrt(&disc).ok_or_else(|| Error::IrrationalEigenvalues {
            a: format_rat(&a),
            b: format_rat(&b),
        })?;
        let half = rat(1, 2);
        ((&b - &root) * &half, (&b + &root) * &half)
    };
    let operator = if l1.is_zero() {
        p.operator.clone()
    } else {
        &p.operator + &RatMatrix::scalar(n, &l1)
    };
    let derived1 = p.derived.linear_combination(&Rat::one(), &p.base, &-l1.clone())?;
    let gap = &l2 - &l1;
    let mode = if gap.is_zero() {
        PencilMode::Nilpotent
    } else {
        PencilMode::Semisimple
    };
    let mut degenerate_lines = vec![derived1.clone()];
    if mode == PencilMode::Semisimple {
        degenerate_lines.push(p.base.linear_combination(&gap, &derived1, &-Rat::one())?);
    }
    Ok(NormalizedPencil {
        shift: l1,
        other_root: l2,
        operator,
        derived: derived1,
        eigenvalues: (Rat::zero(), gap),
        mode,
        degenerate_lines,
    })
}
