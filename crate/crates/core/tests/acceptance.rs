//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every comparison is exact.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use nearderiv::algebra::tensor::{check_jacobi, check_skew};
use nearderiv::algebra::{
    check_vanishing_propagation, classify_operator, derived_iter, normalize_pencil, second_derived_closed_form,
    vanishing_partners, OperatorClass, StructureTensor,
};
use nearderiv::analysis::{lie_index, verify_index_theorem, IndexMode, DEFAULT_SEED};
use nearderiv::constructions::classical::{matrix_unit, Family};
use nearderiv::constructions::grading::grading_operator;
use nearderiv::constructions::nilpotent::{nilpotent_square, sl2_complete};
use nearderiv::constructions::splitting::splitting_operators;
use nearderiv::constructions::{assoc_operators, quasi_grading_extension, InvolutionSplit};
use nearderiv::exactmath::same_span;
use nearderiv::exactmath::{int, rat, span_rank, RatMatrix, SparsePoly};
use nearderiv::nijenhuis::{
    assoc_torsion_formula, certify_exp_nijenhuis, check_n_properties, exp_identity_near, is_nijenhuis,
    torsion_decomposition,
};
use nearderiv::poisson::{bihomogeneous_components, pc_generate_verified, OrbitOperator, PoissonStructure};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn derived_engine() -> Outcome {
    let mut r = rng(1);
    let mut count = 0;
    for (name, t) in test_algebras() {
        for k in 0..100 {
            let d = random_op(&mut r, t.dim());
            let iter = derived_iter(&t, &d, 2).map_err(|e| e.to_string())?;
            let closed = second_derived_closed_form(&t, &d).map_err(|e| e.to_string())?;
            ensure(
                iter == closed,
                format!("{name}: operator #{k} differs from the closed formula"),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} random operators on sl2, sl3, gl3"))
}

fn classification_table() -> Outcome {
    let sl2 = algebra(Family::Sl, 2);
    let p = classify_operator(&sl2, &grading_operator(&sl2_z2())).unwrap();
    ensure(
        p.class == OperatorClass::Near && p.coeffs == Some((int(0), int(-2))),
        format!("Z2 grading: {:?} {:?}", p.class, p.coeffs),
    )?;
    let s = splitting_operators(&sl2, &[0, 1], &[2]).unwrap();
    for (name, d) in [("onto b", &s.onto_first), ("onto <f>", &s.onto_second)] {
        let p = classify_operator(&sl2, d).unwrap();
        ensure(
            p.coeffs == Some((int(0), int(-1))),
            format!("splitting {name}: {:?}", p.coeffs),
        )?;
    }
    for (n, partition) in [(2, vec![2]), (3, vec![2, 1]), (4, vec![2, 2])] {
        let (g, tr) = sl2_complete(Family::Sl, n, &partition).unwrap();
        let sq = nilpotent_square(&g.tensor, &tr.e).unwrap();
        let p = classify_operator(&g.tensor, &sq.operator).unwrap();
        ensure(
            p.class == OperatorClass::Quasi && p.coeffs == Some((int(0), int(0))),
            format!("sl{n} {partition:?}: {:?} {:?}", p.class, p.coeffs),
        )?;
    }
    Ok("Z2 grading (0,-2), splittings (0,-1), (ad e)^2 quasi on sl2, sl3, sl4".into())
}

fn is_lie_pair(t: &StructureTensor) -> bool {
    check_skew(t).holds && check_jacobi(t).holds
}

fn compatibility() -> Outcome {
    let mut r = rng(3);
    let mut members = 0;
    let mut degenerate = 0;
    for (name, t, d) in near_derivations() {
        let p = classify_operator(&t, &d).unwrap();
        ensure(p.class.has_pencil(), format!("{name}: classified {:?}", p.class))?;
        let np = normalize_pencil(&p).map_err(|e| format!("{name}: {e}"))?;
        let mut k = 0;
        while k < 20 {
            let (alpha, beta) = (random_rat(&mut r), random_rat(&mut r));
            let m = t.linear_combination(&alpha, &p.derived, &beta).unwrap();
            let on_degenerate = m.is_zero()
                || np
                    .degenerate_lines
                    .iter()
                    .any(|l| span_rank(&[l.flatten(), m.flatten()]) <= 1);
            if on_degenerate {
                continue;
            }
            ensure(
                is_lie_pair(&m),
                format!("{name}: member {alpha}·T + {beta}·T' is not Lie"),
            )?;
            k += 1;
            members += 1;
        }
        for (i, l) in np.degenerate_lines.iter().enumerate() {
            ensure(is_lie_pair(l), format!("{name}: degenerate line {i} is not Lie"))?;
            degenerate += 1;
        }
    }
    Ok(format!(
        "{members} generic members and {degenerate} degenerate lines over {} operators",
        near_derivations().len()
    ))
}

fn index_theorem() -> Outcome {
    let mut lines = Vec::new();
    for (n, partition) in [(2, vec![2]), (3, vec![2, 1]), (4, vec![2, 2])] {
        // sl4 has dimension 15, above the default exact limit
        let rep = verify_index_theorem(Family::Sl, n, &partition, DEFAULT_SEED, 15).map_err(|e| e.to_string())?;
        let exact = rep
            .index_exact
            .as_ref()
            .ok_or(format!("sl{n}: exact mode did not run"))?;
        ensure(
            rep.holds && exact.index == rep.index_probabilistic.index,
            format!("sl{n} {partition:?}: {rep:?}"),
        )?;
        lines.push(format!(
            "sl{n} {partition:?}: ind = dim g^e = dim z = {}, class {:?}",
            rep.centraliser_dim, rep.nilpotency_class
        ));
    }
    Ok(lines.join("; "))
}

fn poisson_families() -> Outcome {
    let sl2 = algebra(Family::Sl, 2);
    let p = PoissonStructure::from_lie(&sl2).unwrap();
    let casimir = SparsePoly::from_terms(3, [(vec![0, 2, 0], int(1)), (vec![1, 0, 1], int(4))]).unwrap();
    let fam = pc_generate_verified(
        &p,
        &OrbitOperator::Lift(grading_operator(&sl2_z2())),
        std::slice::from_ref(&casimir),
    )
    .map_err(|e| e.to_string())?;
    ensure(
        fam.verified(),
        format!("Z2 family does not commute: {:?}", fam.certificate),
    )?;
    let comps: Vec<SparsePoly> = bihomogeneous_components(&casimir, &sl2_z2())
        .unwrap()
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    ensure(comps.len() == 2, "expected two bi-homogeneous components")?;
    ensure(
        same_span(&comps, &fam.generators),
        "orbit span differs from the component span",
    )?;
    let mf = pc_generate_verified(
        &p,
        &OrbitOperator::Directional(vec![int(0), int(0), int(1)]),
        &[casimir],
    )
    .map_err(|e| e.to_string())?;
    ensure(mf.verified(), "Mishchenko-Fomenko family does not commute")?;
    Ok(format!(
        "Z2 family of {} generators, span = components; MF family of {} generators",
        fam.generators.len(),
        mf.generators.len()
    ))
}

fn vanishing_propagation() -> Outcome {
    let mut r = rng(6);
    let mut summary = Vec::new();
    for (name, t, d) in near_derivations() {
        let dim = t.dim();
        let mut found = 0;
        let mut tries = 0;
        while found < 50 && tries < 5000 {
            tries += 1;
            let n = r.gen_range(0..=3);
            // sparse x: a couple of basis directions
            let mut x = vec![int(0); dim];
            for _ in 0..r.gen_range(1..=2) {
                x[r.gen_range(0..dim)] = random_rat(&mut r);
            }
            let partners = vanishing_partners(&t, &d, &x, n).unwrap();
            if partners.is_empty() {
                continue;
            }
            let mut y = vec![int(0); dim];
            for b in &partners {
                let c = random_rat(&mut r);
                for (yi, bi) in y.iter_mut().zip(b) {
                    *yi += &c * bi;
                }
            }
            let ok = check_vanishing_propagation(&t, &d, &x, &y, n).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                ok,
                format!("{name}: propagation fails for x = {x:?}, y = {y:?}, n = {n}"),
            )?;
            found += 1;
        }
        ensure(
            found == 50,
            format!("{name}: only {found} admissible instances in {tries} tries"),
        )?;
        summary.push(found);
    }
    Ok(format!(
        "{} instances over {} operators",
        summary.iter().sum::<usize>(),
        summary.len()
    ))
}

fn torsion_identity() -> Outcome {
    let mut r = rng(7);
    let mut count = 0;
    for (name, t) in test_algebras() {
        for k in 0..200 {
            let d = random_op(&mut r, t.dim());
            let c = torsion_decomposition(&t, &d).map_err(|e| e.to_string())?;
            ensure(c.holds, format!("{name}: operator #{k} fails at {:?}", c.witness))?;
            count += 1;
        }
    }
    Ok(format!("{count} random operators on sl2, sl3, gl3"))
}

fn nijenhuis_suite() -> Outcome {
    let ops = assoc_operators(2, &matrix_unit(2, 0, 0), None).unwrap();
    let v = is_nijenhuis(&ops.algebra, &ops.left).unwrap();
    ensure(v.is_nijenhuis && v.forms_agree, "L_E11 is not Nijenhuis")?;
    let rep = check_n_properties(&ops.algebra, &ops.left, 3).map_err(|e| e.to_string())?;
    ensure(rep.all_hold(), format!("(N1)-(N4) at depth 3: {rep:?}"))?;
    let sl2 = algebra(Family::Sl, 2);
    let v = is_nijenhuis(&sl2, &grading_operator(&sl2_z2())).unwrap();
    let w = v
        .eigenspace_witness
        .clone()
        .ok_or("no eigenspace witness for the Z2 operator")?;
    ensure(!v.is_nijenhuis, "Z2 grading operator reported Nijenhuis")?;
    Ok(format!(
        "L_E11 passes (N1)-(N4) to depth 3; Z2 operator fails, eigenspace {} not closed on ({}, {})",
        w.eigenvalue, w.left, w.right
    ))
}

fn exponential_identities() -> Outcome {
    let ops = assoc_operators(2, &matrix_unit(2, 0, 1), None).unwrap();
    let points: Vec<_> = (-4..=4).map(|k| rat(k, 2)).collect();
    let cert = certify_exp_nijenhuis(&ops.algebra, &ops.left, Some(&points)).map_err(|e| e.to_string())?;
    ensure(
        cert.holds && cert.distinct_points == 9,
        format!("Nijenhuis identity: {cert:?}"),
    )?;
    let sl2 = algebra(Family::Sl, 2);
    let z2 = grading_operator(&sl2_z2());
    for v in [2, 3, 5, 7] {
        ensure(
            exp_identity_near(&sl2, &z2, &int(v)).map_err(|e| e.to_string())?,
            format!("Z2 operator fails at v = {v}"),
        )?;
    }
    let (g, tr) = sl2_complete(Family::Sl, 2, &[2]).unwrap();
    let sq = nilpotent_square(&g.tensor, &tr.e).unwrap();
    for s in [1, 2, 3] {
        ensure(
            exp_identity_near(&g.tensor, &sq.operator, &int(s)).map_err(|e| e.to_string())?,
            format!("(ad e)^2 fails at s = {s}"),
        )?;
    }
    Ok("L_E12 at 9 points, Z2 operator at v = 2, 3, 5, 7, (ad e)^2 at s = 1, 2, 3".into())
}

fn associative_torsion() -> Outcome {
    let split = InvolutionSplit::new(RatMatrix::identity(3)).unwrap();
    let a = RatMatrix::diagonal(&[int(1), int(0), int(0)]);
    let at = assoc_torsion_formula(&split, &a).map_err(|e| e.to_string())?;
    ensure(at.report.all_hold(), format!("diag(1,0,0): {:?}", at.report))?;
    let x = split
        .odd
        .coords(&(&matrix_unit(3, 0, 1) - &matrix_unit(3, 1, 0)))
        .unwrap();
    let y = split
        .odd
        .coords(&(&matrix_unit(3, 0, 2) - &matrix_unit(3, 2, 0)))
        .unwrap();
    let expected = split
        .odd
        .coords(&(&matrix_unit(3, 1, 2) - &matrix_unit(3, 2, 1)).scale(&rat(-1, 4)))
        .unwrap();
    ensure(
        at.torsion.eval(&x, &y).unwrap() == expected,
        "worked diag(1,0,0) value differs",
    )?;
    let mut r = rng(10);
    for k in 0..20 {
        let m = random_op(&mut r, 3);
        let sym = &m + &m.transpose();
        let at = assoc_torsion_formula(&split, &sym).map_err(|e| e.to_string())?;
        ensure(at.report.all_hold(), format!("random symmetric #{k}: {:?}", at.report))?;
    }
    Ok("so3: diag(1,0,0) worked value and 20 random symmetric a".into())
}

fn quasi_grading() -> Outcome {
    let sl2 = algebra(Family::Sl, 2);
    let q = quasi_grading_extension(&sl2, &sl2_z2()).map_err(|e| e.to_string())?;
    ensure(
        q.pencil.class == OperatorClass::Near && q.pencil.coeffs == Some((int(0), int(-2))),
        format!("extension pencil {:?} {:?}", q.pencil.class, q.pencil.coeffs),
    )?;
    ensure(q.report.all_hold(), format!("grade tables: {:?}", q.report))?;
    let prob = lie_index(&q.contractions.zero, &IndexMode::probabilistic(DEFAULT_SEED)).unwrap();
    let exact = lie_index(&q.contractions.zero, &IndexMode::exact()).unwrap();
    let rk_g = lie_index(&sl2, &IndexMode::exact()).unwrap().index;
    let zero_part: Vec<_> = sl2_z2().weight_spaces().get(&0).cloned().unwrap_or_default();
    let basis: Vec<_> = zero_part
        .iter()
        .map(|&i| nearderiv::exactmath::rat::unit_vector(3, i))
        .collect();
    let q0 = sl2.restrict(&basis).unwrap();
    let rk_q0 = lie_index(&q0, &IndexMode::exact()).unwrap().index;
    ensure(
        prob.index == 2 && exact.index == 2 && rk_g + rk_q0 == 2,
        format!(
            "ind = {} / {}, rk g + rk q0 = {}",
            prob.index,
            exact.index,
            rk_g + rk_q0
        ),
    )?;
    Ok("extension is near (0,-2), grade tables hold, ind = 2 = rk sl2 + rk q0".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("derived-operation engine", derived_engine),
        ("classification table", classification_table),
        ("pencil compatibility", compatibility),
        ("index theorem", index_theorem),
        ("Poisson-commutative families", poisson_families),
        ("vanishing propagation", vanishing_propagation),
        ("torsion identity", torsion_identity),
        ("Nijenhuis suite", nijenhuis_suite),
        ("exponential identities", exponential_identities),
        ("associative torsion", associative_torsion),
        ("quasi-grading", quasi_grading),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
