//! One function per command, each returning the result as JSON.

use germdyn::blowup::{
    exceptional_image, lift_through, rigidify_semisuper, BlowupStep, ChartKind, ExceptionalImage, Modification,
    DEFAULT_MAX_STEPS,
};
use germdyn::conjugacy::{
    divergence_report, first_action_conjugacy, normal_form, second_conjugacy, solve_stable_curve,
    solve_unstable_curve, DivergenceReport, NormalForm,
};
use germdyn::germ::{
    attraction_rates, classify_rigid, DiskPosition, Dominance, GermType, Matrix2, RigidClassification, RigidData,
    RigidOutcome, Rotation,
};
use germdyn::parse::parse_scalar;
use germdyn::valuations::{eigen_weight, EigenDirection};
use germdyn::{BiSeries, Error, Germ};
use serde_json::{json, Map, Value};

use crate::job::{Command, JobSpec};
use crate::CliError;

/// Lines of coefficients shown by the divergence summaries.
const DIVERGENCE_LINES: u32 = 2;

pub fn run(job: &JobSpec, germ: &Germ) -> Result<Value, CliError> {
    Ok(match job.command {
        Command::Classify => classify(germ)?,
        Command::Rates => rates(germ, job.iterates.unwrap_or(4))?,
        Command::Eigen => eigen(germ)?,
        Command::Exceptional => exceptional(germ)?,
        Command::Walk => walk(germ, job.steps.as_deref().unwrap_or(""))?,
        Command::Rigidify => rigidify(germ, job.max_steps.unwrap_or(DEFAULT_MAX_STEPS))?,
        Command::Curves => curves(germ)?,
        Command::FirstAction => first_action(germ)?,
        Command::NormalForm => normal_form_report(germ)?,
    })
}

fn s<T: std::fmt::Display>(x: T) -> Value {
    Value::String(x.to_string())
}

fn matrix(m: &Matrix2) -> Value {
    json!([[s(&m.a), s(&m.b)], [s(&m.c), s(&m.d)]])
}

fn position(p: &DiskPosition) -> &'static str {
    match p {
        DiskPosition::Less => "Less",
        DiskPosition::Greater => "Greater",
        DiskPosition::Equal(Rotation::RootOfUnity(_)) => "RootOfUnity",
        DiskPosition::Equal(Rotation::Irrational) => "IrrationalRotation",
    }
}

fn rigid_fields(out: &mut Map<String, Value>, c: &RigidClassification) {
    out.insert("rigid_class".into(), json!(c.class_id));
    out.insert("critical_set".into(), json!(c.critical_set.iter().map(s).collect::<Vec<_>>()));
    out.insert("jacobian_monomial".into(), json!([c.jacobian_monomial.0, c.jacobian_monomial.1]));
    match &c.data {
        RigidData::Regular => {}
        RigidData::Irreducible { p } => {
            out.insert("p".into(), json!(p));
        }
        RigidData::Reducible { m } => {
            out.insert("M".into(), json!(m));
        }
    }
}

/// Rigid class, `null` with a reason, or an error other than undecidability.
fn rigid_summary(g: &Germ, out: &mut Map<String, Value>) -> Result<(), CliError> {
    match classify_rigid(g) {
        Ok(RigidOutcome::Rigid(c)) => rigid_fields(out, &c),
        Ok(RigidOutcome::NotRigid(e)) => {
            out.insert("rigid_class".into(), Value::Null);
            out.insert("not_rigid".into(), s(&e.detail));
        }
        Err(Error::Undecidable(msg)) => {
            out.insert("rigid_class".into(), Value::Null);
            out.insert("not_rigid".into(), s(msg));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn classify(f: &Germ) -> Result<Value, CliError> {
    let mut out = Map::new();
    let t = f.classify()?;
    out.insert("type".into(), s(t.name()));
    if let GermType::SemiSuper { lambda, position: p } = &t {
        out.insert("lambda".into(), s(lambda));
        out.insert("position".into(), s(position(p)));
    }
    out.insert("linear_part".into(), matrix(&f.linear_part()));
    if let Dominance::Dominant(d) = f.dominance() {
        out.insert("jacobian_order".into(), json!(d));
    }
    rigid_summary(f, &mut out)?;
    let rates = match attraction_rates(f, 4) {
        Ok(r) => json!(r.rates),
        Err(Error::TruncationExhausted(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    out.insert("rates".into(), rates);
    Ok(Value::Object(out))
}

fn rates(f: &Germ, n: u32) -> Result<Value, CliError> {
    let mut report = attraction_rates(f, n)?;
    let mut out = Map::new();
    if let Ok(ew) = eigen_weight(f) {
        report.check_against(&ew.c_inf);
        out.insert("c_inf".into(), s(&ew.c_inf));
    }
    out.insert("rates".into(), json!(report.rates));
    out.insert("supermultiplicative".into(), json!(report.supermultiplicative));
    if let Some(b) = &report.bound {
        out.insert("upper_bound_holds".into(), json!(b.upper_holds));
        out.insert("delta".into(), s(&b.delta));
        out.insert("delta_attained_at".into(), json!(b.delta_attained_at));
    }
    Ok(Value::Object(out))
}

fn eigen(f: &Germ) -> Result<Value, CliError> {
    let ew = eigen_weight(f)?;
    let mut out = Map::new();
    out.insert("matrix".into(), json!(ew.matrix));
    out.insert("c_inf".into(), s(&ew.c_inf));
    match &ew.direction {
        EigenDirection::Quasimonomial(w) => {
            out.insert("weights".into(), json!([s(&w.s), s(&w.t)]));
        }
        EigenDirection::CurveEnd(axis) => {
            out.insert("curve_end".into(), s(axis));
        }
    }
    Ok(Value::Object(out))
}

fn exceptional(f: &Germ) -> Result<Value, CliError> {
    let img = exceptional_image(f)?;
    let mut out = Map::new();
    out.insert("image".into(), s(&img));
    match &img {
        ExceptionalImage::SelfMap { num, den, degree } => {
            out.insert("kind".into(), s("SelfMap"));
            out.insert("numerator".into(), s(num.display_in("theta")));
            out.insert("denominator".into(), s(den.display_in("theta")));
            out.insert("degree".into(), json!(degree));
        }
        ExceptionalImage::ContractedTo(p) => {
            out.insert("kind".into(), s("Contracted"));
            out.insert("point".into(), s(p));
        }
    }
    Ok(Value::Object(out))
}

/// Splits `z:0,w:zeta(6)` at top-level commas.
pub fn parse_steps(src: &str) -> Result<Vec<BlowupStep>, CliError> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, ch) in src.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&src[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
        .into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (chart, theta) = p
                .split_once(':')
                .ok_or_else(|| CliError::Parse(format!("step '{p}' is not of the form chart:theta")))?;
            let chart = match chart.trim() {
                "z" | "Z" => ChartKind::Z,
                "w" | "W" => ChartKind::W,
                other => return Err(CliError::Parse(format!("unknown chart '{other}'"))),
            };
            Ok(BlowupStep::new(chart, parse_scalar(theta.trim())?))
        })
        .collect()
}

fn graph(m: &Modification) -> Value {
    let g = m.dual_graph();
    json!({
        "vertices": g.vertices.iter().map(|v| json!({"index": v.index, "kind": format!("{:?}", v.kind), "parents": v.parents})).collect::<Vec<_>>(),
        "edges": g.edges.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
    })
}

fn walk(f: &Germ, steps: &str) -> Result<Value, CliError> {
    let steps = parse_steps(steps)?;
    if steps.is_empty() {
        return Err(CliError::Parse("walk needs at least one step".into()));
    }
    // each prefix is lifted through the composite projection, so an
    // intermediate lift may be indeterminate while the whole walk is not
    let mut modification = Modification::new();
    let mut lifts = Vec::new();
    for (k, step) in steps.iter().enumerate() {
        modification.push(step.clone());
        let entry = match lift_through(f, &steps[..=k]) {
            Ok(g) => json!({"step": s(step), "center": s(step.point_label()), "lift": s(&g)}),
            Err(e) if k + 1 < steps.len() => json!({"step": s(step), "center": s(step.point_label()), "indeterminate": s(e)}),
            Err(e) => return Err(e.into()),
        };
        lifts.push(entry);
    }
    let g = lift_through(f, &steps)?;
    let mut out = Map::new();
    out.insert("steps".into(), json!(steps.iter().map(s).collect::<Vec<_>>()));
    out.insert("lifts".into(), json!(lifts));
    out.insert("final".into(), s(&g));
    out.insert("dual_graph".into(), graph(&modification));
    rigid_summary(&g, &mut out)?;
    Ok(Value::Object(out))
}

fn rigidify(f: &Germ, max_steps: u32) -> Result<Value, CliError> {
    let r = rigidify_semisuper(f, max_steps)?;
    let mut out = Map::new();
    out.insert("lambda".into(), s(f.semisuper_lambda()?));
    out.insert("blowups".into(), json!(r.modification.len()));
    out.insert("steps".into(), json!(r.modification.steps().iter().map(s).collect::<Vec<_>>()));
    out.insert("prepared".into(), s(&r.prepared.change));
    out.insert("final".into(), s(&r.germ));
    out.insert("dual_graph".into(), graph(&r.modification));
    rigid_fields(&mut out, &r.classification);
    Ok(Value::Object(out))
}

fn curves(f: &Germ) -> Result<Value, CliError> {
    let mut out = Map::new();
    let stable = solve_stable_curve(f)?;
    let unstable = solve_unstable_curve(f)?;
    out.insert("stable".into(), s(format!("z = {}", stable.curve.display_in("w"))));
    out.insert("stable_residual".into(), s(stable.residual));
    out.insert("unstable".into(), s(format!("w = {}", unstable.curve.display_in("z"))));
    out.insert("unstable_residual".into(), s(unstable.residual));
    out.insert(
        "verified".into(),
        json!(stable.residual.is_above_truncation() && unstable.residual.is_above_truncation()),
    );
    Ok(Value::Object(out))
}

fn row(series: &BiSeries, m: u32) -> Value {
    let coeffs: Vec<Value> = (0..series.trunc()).map(|n| s(series.coeff(n, m))).collect();
    let last = coeffs.iter().rposition(|c| c != "0").map_or(0, |k| k + 1);
    json!(coeffs[..last])
}

fn divergence(d: &DivergenceReport) -> Value {
    let mut lines = Map::new();
    for l in &d.lines {
        lines.insert(l.line.to_string(), s(l.verdict));
    }
    json!({"verdict": s(d.verdict), "lines": lines})
}

fn first_action(f: &Germ) -> Result<Value, CliError> {
    let fa = first_action_conjugacy(f)?;
    let mut out = Map::new();
    out.insert("first_action".into(), s(fa.first_action.target.display_in("z")));
    out.insert("one_variable_class".into(), s(&fa.first_action.class));
    out.insert("germ".into(), s(&fa.germ));
    out.insert("phi_row_1".into(), row(&fa.phi, 1));
    out.insert("divergence".into(), divergence(&divergence_report(&fa.phi, DIVERGENCE_LINES)?));
    out.insert("residual_order".into(), json!(fa.record.residual_order));
    out.insert("verified".into(), json!(fa.record.verified()));
    Ok(Value::Object(out))
}

fn normal_form_fields(out: &mut Map<String, Value>, nf: &NormalForm) {
    out.insert("case".into(), s(nf.case_name()));
    out.insert("normal_form".into(), s(nf));
    out.insert("lambda".into(), s(nf.lambda()));
    match nf {
        NormalForm::CaseI { c, d, .. } => {
            out.insert("c".into(), json!(c));
            out.insert("d".into(), json!(d));
        }
        NormalForm::CaseII { c, d, l, epsilon, .. } => {
            out.insert("c".into(), json!(c));
            out.insert("d".into(), json!(d));
            out.insert("l".into(), json!(l));
            out.insert("epsilon".into(), s(epsilon));
        }
        NormalForm::CaseIII { r, s: sv, beta, c, d, epsilon, .. } => {
            out.insert("r".into(), json!(r));
            out.insert("s".into(), json!(sv));
            out.insert("beta".into(), beta.as_ref().map_or(Value::Null, s));
            out.insert("c".into(), json!(c));
            out.insert("d".into(), json!(d));
            out.insert("epsilon".into(), s(epsilon.display_in("z")));
        }
        NormalForm::AttractingClass2 { q, p, .. } => {
            out.insert("q".into(), json!(q));
            out.insert("P".into(), s(p.display_in("z")));
        }
    }
}

fn is_z_only(g: &Germ) -> bool {
    g.f1.terms().all(|((_, j), _)| *j == 0)
}

fn normal_form_report(f: &Germ) -> Result<Value, CliError> {
    let mut out = Map::new();
    // a germ already of the shape (lambda z, z^q w + P(z)) is reported as it stands
    if is_z_only(f) {
        if let Ok(sc) = second_conjugacy(f) {
            if matches!(sc.normal_form, NormalForm::AttractingClass2 { .. }) {
                normal_form_fields(&mut out, &sc.normal_form);
                out.insert("target".into(), s(&sc.target));
                out.insert("verified".into(), json!(sc.record.verified()));
                return Ok(Value::Object(out));
            }
        }
    }
    let report = normal_form(f)?;
    let sc = &report.second;
    normal_form_fields(&mut out, &sc.normal_form);
    out.insert("target".into(), s(&sc.target));
    out.insert("resonances".into(), json!(sc.resonances));
    out.insert("coefficient".into(), s(&sc.coefficient));
    out.insert("notes".into(), json!(sc.notes.iter().chain(report.first.first_action.note.iter()).collect::<Vec<_>>()));
    out.insert("phi_row_1".into(), row(&report.first.phi, 1));
    out.insert("phi_divergence".into(), divergence(&divergence_report(&report.first.phi, DIVERGENCE_LINES)?));
    out.insert("psi_row_1".into(), row(&sc.psi, 1));
    out.insert("psi_divergence".into(), divergence(&divergence_report(&sc.psi, DIVERGENCE_LINES)?));
    out.insert("residual_order".into(), json!(report.total.residual_order));
    out.insert("verified".into(), json!(report.total.verified()));
    Ok(Value::Object(out))
}
