use crate::convert::{self, get, int, opt, shown, uint, Res};
use crate::{Command, ExitCode, JobError, JobSpec};
use polyaut::casestudy::{self, Conclusion, PoloniMoserReport};
use polyaut::classify::{self, ClassificationReport, ClassifyOptions, NormalForm, Verdict};
use polyaut::endo::verify_conjugacy;
use polyaut::ideal::{self, Ideal};
use polyaut::lnd::{log_unipotent, DEFAULT_NILPOTENCY_BOUND};
use polyaut::torus::{self, GroupElementSpec};
use polyaut::{Field, FlowLaw, MonomialOrder};
use serde_json::{json, Value};

pub fn dispatch(job: &JobSpec) -> Res<(Value, ExitCode)> {
    let field = Field::from_spec(&job.field)?;
    let inputs = &job.inputs;
    let budget = job.budgets.core();
    let ok = |v: Value| Ok((v, ExitCode::Ok));
    if job.command == Command::PoloniMoser {
        let d = opt(inputs, "degree_bound")
            .map(|v| uint(v, "degree_bound"))
            .transpose()?
            .map(|d| d as u32)
            .or(job.budgets.degree_bound)
            .unwrap_or(casestudy::DEFAULT_DEGREE_BOUND);
        let rep = casestudy::run_poloni_moser(d, &budget)?;
        let exit = if rep.conclusion == Conclusion::Success { ExitCode::Ok } else { ExitCode::Inconclusive };
        return Ok((poloni_moser_json(&rep), exit));
    }
    let ring = convert::ring(&field, inputs)?;
    match job.command {
        Command::Compose => {
            let f = convert::map(&ring, get(inputs, "f")?)?;
            let g = convert::map(&ring, get(inputs, "g")?)?;
            ok(convert::map_json(&f.compose(&g)?))
        }
        Command::Invert => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            ok(convert::map_json(&f.invert()?))
        }
        Command::IterateDegrees => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let n = uint(get(inputs, "n")?, "n")? as usize;
            ok(json!({ "degrees": f.iterate_degrees(n, &budget)? }))
        }
        Command::Order => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let bound = bound(inputs, "bound", job.budgets.order_bound, classify::DEFAULT_ORDER_BOUND)?;
            ok(json!({ "bound": bound, "order": f.order_up_to(bound, &budget)? }))
        }
        Command::Exp => {
            let d = convert::derivation(&ring, get(inputs, "derivation")?)?;
            let flow = d.exp_flow()?;
            ok(json!({
                "param": flow.param(),
                "flow": flow.to_string(),
                "coords": shown(flow.numerators()),
                "flow_law_verified": flow.satisfies_flow_law()?,
            }))
        }
        Command::Log => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let bound = bound(inputs, "bound", None, DEFAULT_NILPOTENCY_BOUND as u32)?;
            let d = log_unipotent(&f, bound as usize)?;
            ok(json!({ "derivation": shown(d.images()) }))
        }
        Command::PsiDegree => {
            let d = convert::derivation(&ring, get(inputs, "derivation")?)?;
            let f = convert::poly(&ring, get(inputs, "f")?)?;
            ok(json!({ "degree": d.psi_degree(&f)? }))
        }
        Command::WeightSplit => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let a = convert::scalar(&field, get(inputs, "a")?)?;
            let target = convert::poly(&ring, get(inputs, "f")?)?;
            let range = get(inputs, "range")?;
            let (r, s) = (int(&range[0], "range")?, int(&range[1], "range")?);
            let split = torus::weight_split(&f, &a, &target, r, s)?;
            let comps: serde_json::Map<String, Value> =
                split.components.iter().map(|(w, c)| (w.to_string(), Value::String(c.to_string()))).collect();
            ok(json!({ "components": comps }))
        }
        Command::BuildFlow => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let a = convert::scalar(&field, get(inputs, "a")?)?;
            let flow = torus::build_gm_flow(&f, &a, &budget)?;
            ok(json!({
                "param": flow.param(),
                "flow": flow.to_string(),
                "flow_law_verified": flow.satisfies_flow_law()?,
            }))
        }
        Command::Decompose => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let psi = convert::flow(&ring, get(inputs, "flow")?)?;
            let r = uint(get(inputs, "r")?, "r")? as u32;
            let h = convert::scalar(&field, get(inputs, "h")?)?;
            let h = match psi.law() {
                FlowLaw::Additive => GroupElementSpec::Additive(h),
                FlowLaw::Multiplicative => GroupElementSpec::Multiplicative(h),
            };
            let part = torus::finite_part_decompose(&f, &psi, r, &h, &budget)?;
            ok(json!({
                "delta": convert::map_json(&part.delta),
                "b": part.b.to_string(),
                "delta_order": part.delta_order,
            }))
        }
        Command::Gb => {
            let i = Ideal::new(&ring, convert::polys(&ring, get(inputs, "generators")?, "generators")?)?;
            let g = ideal::buchberger(&i, ring.order(), &budget)?;
            ok(json!({ "order": order_name(ring.order()), "basis": shown(g.basis()) }))
        }
        Command::Reduce => {
            let i = Ideal::new(&ring, convert::polys(&ring, get(inputs, "generators")?, "generators")?)?;
            let f = convert::poly(&ring, get(inputs, "f")?)?;
            let g = ideal::buchberger(&i, ring.order(), &budget)?;
            ok(json!({ "basis": shown(g.basis()), "normal_form": g.reduce_with_budget(&f, &budget)?.to_string() }))
        }
        Command::Fixpoints => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let i = ideal::fixpoint_ideal(&f);
            let g = ideal::buchberger(&i, MonomialOrder::Lex, &budget)?;
            let (locus, _) = ideal::fixpoint_locus(&f, &budget)?;
            ok(json!({
                "ideal": shown(i.generators()),
                "lex_basis": shown(g.basis()),
                "locus": serde_json::to_value(&locus).expect("locus serializes"),
            }))
        }
        Command::UniqueFixpoint => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let p = convert::point(&field, get(inputs, "point")?)?;
            ok(json!({ "unique": ideal::unique_fixpoint(&f, &p, &budget)? }))
        }
        Command::Invariants => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let d = bound(inputs, "degree", job.budgets.degree_bound, classify::DEFAULT_INVARIANT_DEGREE_BOUND)?;
            ok(json!({ "degree": d, "basis": shown(&classify::invariant_basis(&f, d, &budget)?) }))
        }
        Command::Classify => {
            let f = convert::map(&ring, get(inputs, "map")?)?;
            let opts = ClassifyOptions {
                order_bound: bound(inputs, "order_bound", job.budgets.order_bound, classify::DEFAULT_ORDER_BOUND)?,
                invariant_degree_bound: bound(
                    inputs,
                    "invariant_degree_bound",
                    job.budgets.degree_bound,
                    classify::DEFAULT_INVARIANT_DEGREE_BOUND,
                )?,
            };
            let rep = classify::classify_plane(&f, &opts, &budget)?;
            let exit = if rep.verdict == Verdict::Inconclusive { ExitCode::Inconclusive } else { ExitCode::Ok };
            Ok((classification_json(&rep, &opts), exit))
        }
        Command::VerifyConjugacy => {
            let h = convert::map(&ring, get(inputs, "h")?)?;
            let a = convert::map(&ring, get(inputs, "a")?)?;
            let b = convert::map(&ring, get(inputs, "b")?)?;
            ok(json!({ "conjugate": verify_conjugacy(&h, &a, &b)? }))
        }
        Command::PoloniMoser => unreachable!(),
    }
}

/// An explicit input, else the budget flag, else the default.
fn bound(inputs: &Value, key: &str, flag: Option<u32>, default: u32) -> Res<u32> {
    match opt(inputs, key) {
        Some(v) => {
            let b = uint(v, key)?;
            u32::try_from(b).map_err(|_| JobError::input(format!("`{key}` is too large")))
        }
        None => Ok(flag.unwrap_or(default)),
    }
}

fn order_name(o: MonomialOrder) -> Value {
    serde_json::to_value(o).expect("order serializes")
}

fn verdict_json(v: Verdict) -> Value {
    match v {
        Verdict::NEquals(n) => json!({ "kind": "n_equals", "n": n }),
        Verdict::NAtMost(n) => json!({ "kind": "n_at_most", "n": n }),
        Verdict::Inconclusive => json!({ "kind": "inconclusive" }),
    }
}

fn form_json(f: &NormalForm) -> Value {
    match f {
        NormalForm::Phi1 { n, m, a, b } => {
            json!({ "form": "phi1", "n": n, "m": m, "a": a.to_string(), "b": b.to_string() })
        }
        NormalForm::Phi2 { a, b, p } => {
            json!({ "form": "phi2", "a": a.to_string(), "b": b.to_string(), "P": p.to_string() })
        }
    }
}

pub fn classification_json(rep: &ClassificationReport, opts: &ClassifyOptions) -> Value {
    let ev = &rep.evidence;
    json!({
        "verdict": verdict_json(rep.verdict),
        "matched_form": rep.matched_form.as_ref().map(form_json),
        "witnesses": shown(&rep.witnesses),
        "evidence": {
            "order_bound": ev.order_bound,
            "order": ev.order,
            "invariant_degree_bound": opts.invariant_degree_bound,
            "invariant_degree_searched": ev.invariant_degree_searched,
            "fixpoint_locus": ev.fixpoint_locus.as_ref().map(|l| serde_json::to_value(l).expect("locus serializes")),
            "fixpoint": ev.fixpoint.as_ref().map(|p| shown(p)),
            "jacobian_at_fixpoint": ev.jacobian.as_ref().map(convert::matrix_json),
            "unipotent": ev.unipotent,
            "identity": ev.identity,
            "budget_exhausted": ev.budget_exhausted,
            "steps": ev.steps,
        },
    })
}

pub fn poloni_moser_json(rep: &PoloniMoserReport) -> Value {
    let bases: serde_json::Map<String, Value> =
        rep.invariant_bases.iter().map(|(d, b)| (d.to_string(), shown(b))).collect();
    let conclusion = match rep.conclusion {
        Conclusion::Success => "success",
        Conclusion::Failure => "failure",
        Conclusion::Incomplete => "incomplete",
    };
    json!({
        "degree_bound": rep.degree_bound,
        "fixpoint_ideal": shown(rep.fixpoint_ideal.generators()),
        "expected_ideal": shown(rep.expected_ideal.generators()),
        "ideal_equality": rep.ideal_equality,
        "y_in_radical": rep.y_in_radical,
        "z_in_radical": rep.z_in_radical,
        "unique_fixpoint": rep.unique_fixpoint,
        "jacobian": {
            "entry_ij_is_dPsi_i_dx_j": convert::matrix_json(&rep.jacobian),
            "entry_ij_is_dPsi_j_dx_i": convert::matrix_json(&rep.jacobian_transposed),
        },
        "unipotent": rep.unipotent,
        "nonidentity_differential": rep.nonidentity_differential,
        "jacobian_determinant": rep.jacobian_determinant.to_string(),
        "invariant_bases": bases,
        "conclusion": conclusion,
        "budget_exhausted": rep.budget_exhausted,
        "note": rep.note,
    })
}
