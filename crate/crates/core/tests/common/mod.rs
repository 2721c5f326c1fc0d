#![allow(dead_code)]

use nearderiv::algebra::StructureTensor;
use nearderiv::constructions::classical::{build_classical, matrix_unit, Family};
use nearderiv::constructions::grading::{grading_operator, GradingSpec};
use nearderiv::constructions::nilpotent::{nilpotent_square, sl2_complete};
use nearderiv::constructions::splitting::splitting_operators;
use nearderiv::constructions::{assoc_operators, quasi_grading_extension};
use nearderiv::exactmath::{rat, LinOp, Rat, RatMatrix, RatVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rat(rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> RatVec {
    (0..n).map(|_| random_rat(rng)).collect()
}

pub fn random_op(rng: &mut impl Rng, n: usize) -> LinOp {
    RatMatrix::from_fn(n, n, |_, _| random_rat(rng))
}

pub fn algebra(family: Family, n: usize) -> StructureTensor {
    build_classical(family, n).unwrap().tensor
}

/// The three algebras used for random-operator suites.
pub fn test_algebras() -> Vec<(&'static str, StructureTensor)> {
    vec![
        ("sl2", algebra(Family::Sl, 2)),
        ("sl3", algebra(Family::Sl, 3)),
        ("gl3", algebra(Family::Gl, 3)),
    ]
}

pub fn sl2_z2() -> GradingSpec {
    GradingSpec::modular(vec![1, 0, 1], 2).unwrap()
}

/// `Z_3`-grading of `sl_3` by `j − i mod 3` on `E_ij`.
pub fn sl3_z3() -> GradingSpec {
    // basis: E12, E13, E23, H1, H2, E21, E31, E32
    GradingSpec::modular(vec![1, 2, 1, 0, 0, 2, 1, 2], 3).unwrap()
}

/// Every near-derivation (including quasi-derivations) built by the
/// constructions, with the algebra it acts on.
pub fn near_derivations() -> Vec<(String, StructureTensor, LinOp)> {
    let mut out = Vec::new();
    let sl2 = algebra(Family::Sl, 2);
    out.push(("sl2 Z2 grading".to_string(), sl2.clone(), grading_operator(&sl2_z2())));
    let sl3 = algebra(Family::Sl, 3);
    out.push(("sl3 Z3 grading".to_string(), sl3, grading_operator(&sl3_z3())));
    let s = splitting_operators(&sl2, &[0, 1], &[2]).unwrap();
    out.push(("sl2 splitting onto b".to_string(), sl2.clone(), s.onto_first));
    out.push(("sl2 splitting onto <f>".to_string(), sl2.clone(), s.onto_second));
    for (n, partition) in [(2, vec![2]), (3, vec![2, 1]), (4, vec![2, 2])] {
        let (g, tr) = sl2_complete(Family::Sl, n, &partition).unwrap();
        let sq = nilpotent_square(&g.tensor, &tr.e).unwrap();
        out.push((format!("sl{n} (ad e)^2 {partition:?}"), g.tensor, sq.operator));
    }
    for (name, a) in [("E11", matrix_unit(2, 0, 0)), ("E12", matrix_unit(2, 0, 1))] {
        let ops = assoc_operators(2, &a, None).unwrap();
        out.push((format!("gl2 L_{name}"), ops.algebra, ops.left));
    }
    let q = quasi_grading_extension(&sl2, &sl2_z2()).unwrap();
    out.push(("sl2 Z2 quasi-grading extension".to_string(), q.tensor, q.operator));
    out
}
