use std::path::Path;

use anyhow::{bail, Context};
use nearderiv::algebra::{
    check_jacobi, check_skew, classify_operator, derived_iter, is_lie, normalize_pencil, NormalizedPencil,
    PencilAction, StructureTensor,
};
use nearderiv::analysis::{lie_centre, lie_index, lower_central_series, nilpotency_class, IndexMode};
use nearderiv::exactmath::{format_rat, int, solve, LinOp, Rat, RatMatrix, SparsePoly};
use nearderiv::format::{AlgebraFile, OperatorFile};
use nearderiv::nijenhuis::{
    certify_exp_near, certify_exp_nijenhuis, check_n_properties, check_power_vanishing, is_nijenhuis, near_exp_case,
    sample_points, torsion_decomposition, NearExpCase,
};
use nearderiv::poisson::{centre_candidates, frozen_bracket, pc_generate, pc_verify, OrbitOperator, PoissonStructure};
use serde_json::{json, Value};

use crate::input::{exit_code, load_algebra, load_operator, load_seeds, parse_rats, InputError};
use crate::output::Report;
use crate::{IndexOpts, Pair, RankMode};

fn r(x: &Rat) -> String {
    format_rat(x)
}

fn tensor_json(t: &StructureTensor) -> Value {
    serde_json::to_value(AlgebraFile::from_tensor(t, None)).expect("algebra files serialize")
}

fn op_json(d: &LinOp) -> Value {
    serde_json::to_value(OperatorFile::from_op(d)).expect("operator files serialize")
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn load_pair(pair: &Pair) -> anyhow::Result<(StructureTensor, LinOp)> {
    let (_, t) = load_algebra(&pair.algebra)?;
    let d = load_operator(&pair.operator, t.dim())?;
    Ok((t, d))
}

/// Coordinates of `member` in the basis `(T, ρ(D)·T)` of the pencil.
fn pencil_coords(p: &PencilAction, member: &StructureTensor) -> Option<(Rat, Rat)> {
    let ft = p.base.flatten();
    let fd = p.derived.flatten();
    let m = RatMatrix::from_columns(ft.len(), &[ft, fd]).ok()?;
    solve(&m, &member.flatten()).map(|c| (c[0].clone(), c[1].clone()))
}

fn law_checks(p: &PencilAction, members: &[(Rat, Rat)]) -> anyhow::Result<(Vec<Value>, bool)> {
    let mut out = Vec::new();
    let mut all = true;
    for (alpha, beta) in members {
        let m = p.base.linear_combination(alpha, &p.derived, beta)?;
        let skew = check_skew(&m);
        let jacobi = check_jacobi(&m);
        all &= skew.holds && jacobi.holds;
        out.push(json!({
            "t": r(alpha),
            "derived": r(beta),
            "skew": skew.holds,
            "jacobi": jacobi.holds,
            "witness": skew.witness.or(jacobi.witness),
        }));
    }
    Ok((out, all))
}

struct Classified {
    body: Value,
    /// Every checked pencil member is skew-symmetric and satisfies Jacobi.
    laws: bool,
    near: bool,
    pencil: Option<NormalizedPencil>,
}

fn classify_body(p: &PencilAction) -> anyhow::Result<Classified> {
    let (a, b) = match &p.coeffs {
        Some((a, b)) => (Some(r(a)), Some(r(b))),
        None => (None, None),
    };
    let mut body = json!({
        "tag": p.class.as_str(),
        "a": a,
        "b": b,
        "scalar": p.scalar.as_ref().map(r),
        "dim_u": p.dim_u,
        "mode": null,
        "degenerate_lines": [],
    });
    let mut members = vec![(int(1), int(0))];
    let mut pencil = None;
    if p.class.has_pencil() {
        members.extend([(int(0), int(1)), (int(1), int(1)), (int(1), int(-1)), (int(2), int(3))]);
        match normalize_pencil(p) {
            Ok(np) => {
                let mut lines = Vec::new();
                for line in &np.degenerate_lines {
                    let (alpha, beta) = pencil_coords(p, line).context("degenerate line outside the pencil")?;
                    lines.push(json!({"t": r(&alpha), "derived": r(&beta)}));
                    members.push((alpha, beta));
                }
                body["mode"] = to_json(&np.mode);
                body["shift"] = json!(r(&np.shift));
                body["other_root"] = json!(r(&np.other_root));
                body["degenerate_lines"] = Value::Array(lines);
                pencil = Some(np);
            }
            Err(e) => body["pencil_error"] = json!(e.to_string()),
        }
    }
    let (checks, laws) = law_checks(p, &members)?;
    body["jacobi_checks"] = Value::Array(checks);
    let near = p.class.as_str() != "not-near";
    Ok(Classified {
        body,
        laws,
        near,
        pencil,
    })
}

pub fn classify(pair: &Pair) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let c = classify_body(&classify_operator(&t, &d)?)?;
    Ok(Report::new(c.body, c.laws && c.near))
}

pub fn derive(pair: &Pair, power: usize, output: Option<&Path>) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let dt = derived_iter(&t, &d, power)?.with_labels(t.labels().to_vec());
    match output {
        Some(path) => {
            std::fs::write(path, AlgebraFile::from_tensor(&dt, None).to_json())
                .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
            Ok(Report::new(
                json!({"power": power, "written": path.display().to_string()}),
                true,
            ))
        }
        None => Ok(Report::new(tensor_json(&dt), true)),
    }
}

pub fn pencil(pair: &Pair) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let p = classify_operator(&t, &d)?;
    let np = normalize_pencil(&p)?;
    let (a, b) = p.coeffs.clone().expect("normalised pencils have coefficients");
    let (e0, e1) = np.coeffs();
    let lines: Vec<Value> = np
        .degenerate_lines
        .iter()
        .map(|line| {
            let (alpha, beta) = pencil_coords(&p, line).expect("degenerate lines lie in the pencil");
            json!({"t": r(&alpha), "derived": r(&beta), "tensor": tensor_json(line)})
        })
        .collect();
    let body = json!({
        "tag": p.class.as_str(),
        "a": r(&a),
        "b": r(&b),
        "shift": r(&np.shift),
        "other_root": r(&np.other_root),
        "eigenvalues": [r(&e0), r(&e1)],
        "mode": np.mode,
        "operator": op_json(&np.operator),
        "derived": tensor_json(&np.derived),
        "degenerate_lines": lines,
    });
    Ok(Report::new(body, true))
}

fn index_mode(opts: &IndexOpts) -> IndexMode {
    match opts.mode {
        RankMode::Exact => IndexMode::Exact { max_dim: opts.max_dim },
        RankMode::Prob => IndexMode::probabilistic(opts.seed),
    }
}

fn analyse(t: &StructureTensor, opts: &IndexOpts) -> anyhow::Result<Value> {
    let index = lie_index(t, &index_mode(opts))?;
    let centre = lie_centre(t)?;
    let mut body = to_json(&index);
    body["centre_dim"] = json!(centre.len());
    body["lower_central_series"] = json!(lower_central_series(t));
    body["nilpotency_class"] = json!(nilpotency_class(t));
    Ok(body)
}

pub fn index(algebra: &Path, operator: Option<&Path>, opts: &IndexOpts) -> anyhow::Result<Report> {
    let (_, t) = load_algebra(algebra)?;
    let target = match operator {
        Some(path) => {
            let d = load_operator(path, t.dim())?;
            derived_iter(&t, &d, 1)?
        }
        None => t,
    };
    let mut body = analyse(&target, opts)?;
    body["of"] = json!(if operator.is_some() { "derived" } else { "algebra" });
    Ok(Report::new(body, true))
}

pub fn torsion(pair: &Pair) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let tt = nearderiv::nijenhuis::torsion(&t, &d)?;
    let identity = torsion_decomposition(&t, &d)?;
    let body = json!({
        "vanishes": tt.is_zero(),
        "torsion": tensor_json(&tt),
        "decomposition": identity,
    });
    Ok(Report::new(body, identity.holds))
}

pub fn nijenhuis_check(pair: &Pair, depth: usize) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let verdict = is_nijenhuis(&t, &d)?;
    let mut body = json!({"verdict": verdict, "depth": depth});
    let mut passed = verdict.is_nijenhuis;
    if verdict.is_nijenhuis {
        let props = check_n_properties(&t, &d, depth)?;
        let vanishing = check_power_vanishing(&t, &d, depth)?;
        passed = props.all_hold() && vanishing.is_none();
        body["properties"] = to_json(&props);
        body["power_vanishing_witness"] = to_json(&vanishing);
    }
    Ok(Report::new(body, passed))
}

pub fn exp_check(pair: &Pair, points: Option<&[String]>) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let points = points.map(|p| parse_rats(p, "sample point")).transpose()?;
    let verdict = is_nijenhuis(&t, &d)?;
    let (body, cert) = if verdict.is_nijenhuis && d.is_nilpotent() {
        let cert = certify_exp_nijenhuis(&t, &d, points.as_deref())?;
        (json!({"identity": "nijenhuis"}), cert)
    } else {
        let case = near_exp_case(&t, &d)?;
        let needed = certify_exp_near(&t, &d, &[])?.points_needed;
        let pts = match (points, &case) {
            (Some(p), _) => p,
            (None, NearExpCase::Nilpotent) => sample_points(needed),
            (None, NearExpCase::Diagonal { .. }) => (1..=needed as i64).map(int).collect(),
        };
        let cert = certify_exp_near(&t, &d, &pts)?;
        let case = match case {
            NearExpCase::Nilpotent => json!({"kind": "nilpotent"}),
            NearExpCase::Diagonal { m } => json!({"kind": "diagonal", "m": m}),
        };
        (json!({"identity": "near", "case": case}), cert)
    };
    let mut body = body;
    body["certified"] = json!(cert.certified());
    body["certificate"] = to_json(&cert);
    Ok(Report::new(body, cert.holds))
}

struct PcOutcome {
    body: Value,
    passed: bool,
}

fn run_pc(
    t: &StructureTensor,
    op: OrbitOperator,
    second: &PoissonStructure,
    seeds: Option<Vec<SparsePoly>>,
    degree_bound: u32,
) -> anyhow::Result<PcOutcome> {
    let p = PoissonStructure::from_lie(t)?;
    let labels = t.labels().to_vec();
    let seeds = match seeds {
        Some(s) => s,
        None => centre_candidates(&p, degree_bound)?,
    };
    let family = pc_generate(&p, &op, &seeds)?;
    let first = pc_verify(&family, &p)?;
    let other = pc_verify(&family, second)?;
    let generators: Vec<Value> = family
        .generators
        .iter()
        .zip(&family.provenance)
        .map(|(g, prov)| json!({"poly": g.display_with(&labels), "provenance": prov}))
        .collect();
    let body = json!({
        "seeds": seeds.iter().map(|s| s.display_with(&labels)).collect::<Vec<_>>(),
        "generators": generators,
        "certificate": first,
        "second_bracket_certificate": other,
    });
    Ok(PcOutcome {
        body,
        passed: first.commutes && other.commutes,
    })
}

pub fn pc_check(
    algebra: &Path,
    operator: Option<&Path>,
    direction: Option<&[String]>,
    seed_file: Option<&Path>,
    degree_bound: u32,
) -> anyhow::Result<Report> {
    let (_, t) = load_algebra(algebra)?;
    let seeds = seed_file.map(|f| load_seeds(f, t.dim())).transpose()?;
    let (op, second, kind) = match (operator, direction) {
        (Some(path), None) => {
            let d = load_operator(path, t.dim())?;
            let second = PoissonStructure::from_lie(&t)?.derived(&d)?;
            (OrbitOperator::Lift(d), second, "lift")
        }
        (None, Some(gamma)) => {
            let gamma = parse_rats(gamma, "direction")?;
            if gamma.len() != t.dim() {
                bail!(InputError(format!(
                    "direction has {} coordinates, the algebra has dimension {}",
                    gamma.len(),
                    t.dim()
                )));
            }
            let second = frozen_bracket(&t, &gamma)?;
            (OrbitOperator::Directional(gamma), second, "direction")
        }
        _ => bail!(InputError("pc-check needs an operator file or --direction".into())),
    };
    let mut out = run_pc(&t, op, &second, seeds, degree_bound)?;
    out.body["orbit"] = json!(kind);
    Ok(Report::new(out.body, out.passed))
}

pub fn report(
    pair: &Pair,
    opts: &IndexOpts,
    depth: usize,
    degree_bound: u32,
    seed_file: Option<&Path>,
) -> anyhow::Result<Report> {
    let (t, d) = load_pair(pair)?;
    let seeds = seed_file.map(|f| load_seeds(f, t.dim())).transpose()?;
    let action = classify_operator(&t, &d)?;
    let classified = classify_body(&action)?;
    let mut body = json!({"classification": classified.body});

    let section = |res: anyhow::Result<Value>| res.unwrap_or_else(|e| json!({"error": format!("{e:#}")}));
    if is_lie(&t) {
        body["algebra"] = section(analyse(&t, opts));
    }
    if is_lie(&action.derived) {
        let mut a = section(analyse(&action.derived, opts));
        if let (Some(index), Some(centre)) = (a.get("index").cloned(), a.get("centre_dim").cloned()) {
            a["index_equals_centre"] = json!(index == centre);
        }
        if let Some(class) = a.get("nilpotency_class").and_then(Value::as_u64) {
            a["two_step_nilpotent"] = json!(class <= 2);
        }
        body["derived_algebra"] = a;
    }
    if let Some(np) = &classified.pencil {
        body["pencil"] = json!({
            "operator": op_json(&np.operator),
            "eigenvalues": [r(&np.eigenvalues.0), r(&np.eigenvalues.1)],
        });
    }

    let identity = torsion_decomposition(&t, &d)?;
    let verdict = is_nijenhuis(&t, &d)?;
    let mut tor = json!({"decomposition": identity, "nijenhuis": verdict});
    if verdict.is_nijenhuis {
        tor["properties"] = to_json(&check_n_properties(&t, &d, depth)?);
    }
    body["torsion"] = tor;

    let mut pc_ok = true;
    if action.class.has_pencil() && is_lie(&t) {
        let second = PoissonStructure::from_lie(&t)?.derived(&d)?;
        match run_pc(&t, OrbitOperator::Lift(d.clone()), &second, seeds, degree_bound) {
            Ok(out) => {
                pc_ok = out.passed;
                body["pc_family"] = out.body;
            }
            Err(e) if exit_code(&e) == 1 => {
                pc_ok = false;
                body["pc_family"] = json!({"error": format!("{e:#}")});
            }
            Err(e) => return Err(e),
        }
    }

    let checks = json!({
        "near_derivation": classified.near,
        "pencil_laws": classified.laws,
        "torsion_identity": identity.holds,
        "pc_commutes": pc_ok,
    });
    let passed = checks.as_object().expect("object").values().all(|v| v == &json!(true));
    body["checks"] = checks;
    Ok(Report::new(body, passed))
}
