//! The action of `gl(V)` on bilinear operations and its iterates.

use num_traits::Zero;

use super::pencil::{classify_operator, OperatorClass};
use super::tensor::StructureTensor;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{kernel_basis, LinOp, RatMatrix};
use crate::exactmath::rat::{int, is_zero_vec, unit_vector, vec_axpy, vec_scale, Rat, RatVec};

/// `(ρ(D)·ψ)(x, y) = D(ψ(x, y)) − ψ(Dx, y) − ψ(x, Dy)`.
pub fn derived(t: &StructureTensor, d: &LinOp) -> Result<StructureTensor> {
    t.require_op(d)?;
    let n = t.dim();
    let minus_one = int(-1);
    let mut out = StructureTensor::zero(n).with_labels(t.labels().to_vec());
    for i in 0..n {
        for j in 0..n {
            let mut v = match t.get(i, j) {
                Some(p) => d.apply(p)?,
                None => vec![Rat::zero(); n],
            };
            for a in 0..n {
                let da = &d[(a, i)];
                if !da.is_zero() {
                    if let Some(p) = t.get(a, j) {
                        vec_axpy(&mut v, &(da * &minus_one), p);
                    }
                }
                let db = &d[(a, j)];
                if !db.is_zero() {
                    if let Some(p) = t.get(i, a) {
                        vec_axpy(&mut v, &(db * &minus_one), p);
                    }
                }
            }
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `ρ(D)^k·ψ` by iteration.
pub fn derived_iter(t: &StructureTensor, d: &LinOp, k: usize) -> Result<StructureTensor> {
    t.require_op(d)?;
    let mut cur = t.clone();
    for _ in 0..k {
        cur = derived(&cur, d)?;
    }
    Ok(cur)
}

/// `ρ(D)²·ψ` written out directly:
/// `ψ(D²x,y) + 2ψ(Dx,Dy) + ψ(x,D²y) + D²ψ(x,y) − 2D(ψ(Dx,y) + ψ(x,Dy))`.
pub fn second_derived_closed_form(t: &StructureTensor, d: &LinOp) -> Result<StructureTensor> {
    t.require_op(d)?;
    let n = t.dim();
    let d2 = d * d;
    let mut out = StructureTensor::zero(n).with_labels(t.labels().to_vec());
    for i in 0..n {
        let x = unit_vector(n, i);
        let dx = d.column(i);
        let d2x = d2.column(i);
        for j in 0..n {
            let y = unit_vector(n, j);
            let dy = d.column(j);
            let d2y = d2.column(j);
            let mut v = t.eval(&d2x, &y)?;
            vec_axpy(&mut v, &int(2), &t.eval(&dx, &dy)?);
            vec_axpy(&mut v, &int(1), &t.eval(&x, &d2y)?);
            vec_axpy(&mut v, &int(1), &d2.apply(&t.product(i, j))?);
            let mut inner = t.eval(&dx, &y)?;
            vec_axpy(&mut inner, &int(1), &t.eval(&x, &dy)?);
            vec_axpy(&mut v, &int(-2), &d.apply(&inner)?);
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Recomputes `ρ(D + d)·ψ` and `ρ(D + d)²·ψ` for a derivation `d` and checks
/// `ρ(D + d)·ψ = ρ(D)·ψ` and `ρ(D + d)²·ψ = ρ(D)²·ψ + ρ([d, D])·ψ`.
pub fn shift_by_derivation(
    t: &StructureTensor,
    d_op: &LinOp,
    der: &LinOp,
) -> Result<(StructureTensor, StructureTensor)> {
    t.require_op(d_op)?;
    t.require_op(der)?;
    if !derived(t, der)?.is_zero() {
        return Err(Error::NotDerivation);
    }
    let shifted = d_op + der;
    let first = derived(t, &shifted)?;
    let second = derived(&first, &shifted)?;
    if first != derived(t, d_op)? {
        return Err(Error::IdentityViolated(
            "first derived operation changed under a derivation shift".into(),
        ));
    }
    let expected = derived_iter(t, d_op, 2)?.checked_add(&derived(t, &der.commutator(d_op))?)?;
    if second != expected {
        return Err(Error::IdentityViolated(
            "second derived operation differs from ψ''_D + ψ'_[d,D]".into(),
        ));
    }
    Ok((first, second))
}

/// All `y` with `ψ(D^i x, y) = ψ(x, D^i y) = 0` for `0 ≤ i ≤ n`.
pub fn vanishing_partners(t: &StructureTensor, d: &LinOp, x: &[Rat], n: usize) -> Result<Vec<RatVec>> {
    t.require_op(d)?;
    t.require_vec(x)?;
    let dim = t.dim();
    let lx = t.left_mult(x)?;
    let mut rows: Vec<RatVec> = Vec::new();
    let mut dix = x.to_vec();
    let mut di = RatMatrix::identity(dim);
    for _ in 0..=n {
        rows.extend(t.left_mult(&dix)?.to_rows());
        rows.extend((&lx * &di).to_rows());
        dix = d.apply(&dix)?;
        di = &di * d;
    }
    Ok(kernel_basis(&RatMatrix::from_rows(rows)?))
}

/// For a near-derivation `D`: if `ψ(D^i x, y) = ψ(x, D^i y) = 0` for all
/// `i ≤ n`, then `ψ(D^i x, D^j y) = 0` whenever `i + j ≤ n`. Returns whether
/// the conclusion holds, checked by brute force.
pub fn check_vanishing_propagation(t: &StructureTensor, d: &LinOp, x: &[Rat], y: &[Rat], n: usize) -> Result<bool> {
    t.require_vec(x)?;
    t.require_vec(y)?;
    let class = classify_operator(t, d)?.class;
    if class == OperatorClass::NotNear {
        return Err(Error::NotNearDerivation);
    }
    let mut xs = vec![x.to_vec()];
    let mut ys = vec![y.to_vec()];
    for _ in 0..n {
        xs.push(d.apply(xs.last().unwrap())?);
        ys.push(d.apply(ys.last().unwrap())?);
    }
    for (i, (xi, yi)) in xs.iter().zip(&ys).enumerate() {
        if !is_zero_vec(&t.eval(xi, y)?) || !is_zero_vec(&t.eval(x, yi)?) {
            return Err(Error::PreconditionViolated { power: i });
        }
    }
    for (i, xi) in xs.iter().enumerate() {
        for yj in &ys[..=n - i] {
            if !is_zero_vec(&t.eval(xi, yj)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `ρ(D)·ψ` evaluated on a single pair, without building the whole tensor.
pub fn derived_pair(t: &StructureTensor, d: &LinOp, x: &[Rat], y: &[Rat]) -> Result<RatVec> {
    let mut v = d.apply(&t.eval(x, y)?)?;
    vec_axpy(&mut v, &int(-1), &t.eval(&d.apply(x)?, y)?);
    vec_axpy(&mut v, &int(-1), &t.eval(x, &d.apply(y)?)?);
    Ok(v)
}

/// `2^k · ψ(d^k x, d^k y)`.
pub fn power_pair_formula(t: &StructureTensor, d: &LinOp, k: usize, x: &[Rat], y: &[Rat]) -> Result<RatVec> {
    let dk = d.pow(k);
    let v = t.eval(&dk.apply(x)?, &dk.apply(y)?)?;
    Ok(vec_scale(
        &v,
        &Rat::from_integer(num_bigint::BigInt::from(2u32).pow(k as u32)),
    ))
}
