//! Runs parsed problems and renders their results.

use std::sync::Arc;

use pivext::cohomology::{cohomology_group_with, module_cohomology, CohomologyCoefficients};
use pivext::gmodule::{conj_character_module, inv_center_module, mu_module};
use pivext::picard::{les_report_for_module, stabilizer_pivotal_image_with};
use pivext::pivotal::{extend_character_with, module_pivotalizable, ObstructionReport};
use pivext::ty::ty_pivotal_report;
use pivext::{AbelianGroup, Character, FiniteGroup, Subgroup};
use serde_json::{json, Map, Value};

use crate::error::{lib, CliError};
use crate::problem::{Coefficients, Format, Options, Payload, ProblemFile};

pub fn group_json(g: &FiniteGroup) -> Value {
    match g.standard_spec() {
        Some(spec) => json!(spec.to_string()),
        None => serde_json::to_value(g.to_input()).expect("group input serializes"),
    }
}

fn labels(g: &FiniteGroup, xs: &[usize]) -> Value {
    json!(xs.iter().map(|&x| g.label(x)).collect::<Vec<_>>())
}

fn subgroup_json(s: &Subgroup) -> Value {
    let g = s.parent();
    json!({
        "order": s.order(),
        "generators": labels(g, s.generators()),
    })
}

fn abelian_json(a: &AbelianGroup) -> Value {
    json!({
        "invariant_factors": a.invariant_factors(),
        "order": a.order(),
    })
}

fn character_json(chi: &Character) -> Value {
    serde_json::to_value(chi.to_json()).expect("character serializes")
}

fn obstruction_json(r: &ObstructionReport) -> Value {
    let o2_class = r.o2_class.as_ref().map(|c| c.representative().to_json());
    json!({
        "o1_trivial": r.o1_trivial,
        "o1_cocycle": r.o1_cocycle.to_json(),
        "o2_class": o2_class,
        "o2_trivial": r.o2_trivial,
        "o2_ambient": r.o2_ambient.as_ref().map(abelian_json),
        "o2_witness": r.o2_witness.as_ref().map(|c| c.to_json()),
        "extensions": r.extensions.iter().map(character_json).collect::<Vec<_>>(),
        "torsor_size": r.torsor_size,
        "notes": r.notes,
    })
}

/// Computes the result object for one problem.
pub fn execute(p: &ProblemFile) -> Result<Value, CliError> {
    let Options { level, guards, .. } = &p.options;
    let result = match &p.payload {
        Payload::ExtendCharacter { problem } => {
            let r = extend_character_with(problem, *level, guards).map_err(lib("$.payload"))?;
            let q = problem.quotient().quotient();
            json!({
                "group": group_json(problem.d()),
                "subgroup": subgroup_json(problem.subgroup()),
                "character": character_json(problem.chi()),
                "quotient_order": q.order(),
                "report": obstruction_json(&r),
            })
        }
        Payload::Cohomology {
            group,
            degree,
            coefficients,
        } => {
            let (over, h) = match coefficients {
                Coefficients::Kx => {
                    let h = cohomology_group_with(*degree, group, CohomologyCoefficients::Kx, guards)
                        .map_err(lib("$.payload"))?;
                    (Arc::clone(group), h)
                }
                Coefficients::Mu(n) => {
                    let m = Arc::new(mu_module(Arc::clone(group), *n));
                    let h = module_cohomology(*degree, &m, guards).map_err(lib("$.payload"))?.group;
                    (Arc::clone(group), h)
                }
                Coefficients::ConjCharacter(c) | Coefficients::InvCenter(c) => {
                    let m = match coefficients {
                        Coefficients::ConjCharacter(_) => conj_character_module(group, c),
                        _ => inv_center_module(group, c),
                    }
                    .map_err(lib("$.payload.subgroup"))?;
                    let m = Arc::new(m);
                    let h = module_cohomology(*degree, &m, guards).map_err(lib("$.payload"))?.group;
                    (Arc::clone(m.group()), h)
                }
            };
            let coeffs = match coefficients {
                Coefficients::Kx => json!("kx"),
                Coefficients::Mu(n) => json!(format!("mu:{n}")),
                Coefficients::ConjCharacter(c) => json!({"module": "conj-character", "subgroup": subgroup_json(c)}),
                Coefficients::InvCenter(c) => json!({"module": "inv-center", "subgroup": subgroup_json(c)}),
            };
            json!({
                "group": group_json(group),
                "acting_group_order": over.order(),
                "degree": degree,
                "coefficients": coeffs,
                "cohomology": abelian_json(&h),
            })
        }
        Payload::Ty { data, phi } => {
            let r = ty_pivotal_report(data, phi).map_err(lib("$.payload"))?;
            json!({
                "group": group_json(data.group()),
                "phi": character_json(phi),
                "report": r,
            })
        }
        Payload::Picard { group, phi } => {
            let r = stabilizer_pivotal_image_with(group, phi, guards).map_err(lib("$.payload"))?;
            json!({
                "group": group_json(group),
                "phi": character_json(phi),
                "report": r,
            })
        }
        Payload::Les {
            group,
            subgroup,
            module,
            alpha,
        } => {
            let r = les_report_for_module(module, alpha.as_ref(), guards).map_err(lib("$.payload.alpha"))?;
            json!({
                "group": group_json(group),
                "subgroup": subgroup_json(subgroup),
                "carrier": abelian_json(module.carrier()),
                "report": r,
            })
        }
        Payload::ModulePivotal { phi, subgroup } => {
            let v = module_pivotalizable(phi, subgroup).map_err(lib("$.payload"))?;
            let g = phi.domain();
            json!({
                "group": group_json(g),
                "phi": character_json(phi),
                "subgroup": subgroup_json(subgroup),
                "pivotalizable": v.pivotalizable,
                "witness": v.witness.map(|w| g.label(w).to_string()),
                "solution": v.solution,
            })
        }
    };
    Ok(json!({ "command": p.command.name(), "result": result }))
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("value serializes"),
        Format::Text => {
            let mut out = String::new();
            text_lines(v, "", &mut out);
            out.pop();
            out
        }
    }
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() && !is_leafy(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(x, &p, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

// Cochain tables and characters print on one line.
fn is_leafy(m: &Map<String, Value>) -> bool {
    m.contains_key("values") || m.contains_key("on_elements") || m.contains_key("on_generators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_keeps_cochains_on_one_line() {
        let v = json!({"a": {"b": 1, "c": {"degree": 1, "values": {"[s]": ["1/2"]}}}, "d": "x"});
        assert_eq!(render(&v, Format::Text), "a.b: 1\na.c: {\"degree\":1,\"values\":{\"[s]\":[\"1/2\"]}}\nd: x");
    }

    #[test]
    fn standard_groups_print_as_specs() {
        let g = pivext::group::make_standard(&"symmetric:3 x cyclic:2".parse().unwrap()).unwrap();
        assert_eq!(group_json(&g), json!("symmetric:3 x cyclic:2"));
        let t = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert!(group_json(&t).get("table").is_some());
    }
}
