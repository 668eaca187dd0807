//! Report construction and rendering.

use serde_json::{json, Map, Value};

use steinx_core::acmoves::{AcOutcome, AcTrace};
use steinx_core::chern::{c1_class, c1_cochain, rotation_divisor, CohomologyClass};
use steinx_core::contact::ContactFiveClass;
use steinx_core::exotica::{Certificate, ExoticaReport};
use steinx_core::genus::QGenusBound;
use steinx_core::intlinalg::{form_properties, FormProperties};
use steinx_core::stein::{homology, intersection_form, presentation, SteinHandlebody};

use crate::wire::{int, ints, matrix, presentation_json};

pub const AC_NOTE: &str =
    "AC-reduced: 1-handles traded for 2-handles; rotation numbers carried through the cancellation";

pub fn provenance(keys: &[&str]) -> Value {
    let mut o = Map::new();
    for &k in keys {
        let text = match k {
            "b2" => "rank of the kernel of the 2-chain boundary map",
            "h1" => "cokernel of the 2-chain boundary map, read off its Smith normal form",
            "c1" => "c1 evaluates to the rotation number on each 2-handle; coordinates in a Smith basis of H2",
            "divisibility" => "gcd of the free coordinates of c1",
            "rotation_divisor" => "gcd of the rotation numbers, defined without 1-handles",
            "form" => "intersection form K^T L K for a basis K of the kernel of the boundary map",
            "contact_class" => {
                "n = b2 and r = divisibility of c1 of the page; even r gives the trivial bundle sum, odd r the twisted one"
            }
            "q_genus_lower" => {
                "adjunction inequality |<c1, a>| + a.a <= 2g - 2 on a basis realizing q: max(0, ceil((d + m_min + 2)/2), ceil((m_max + 2)/2))"
            }
            "q_genus_upper" => "maximum oracle genus over a basis realizing q",
            "certificate" => {
                "upper bound for a below lower bound for b separates the Q-genera, a diffeomorphism invariant"
            }
            "verdict" => {
                "pairwise distinct divisibilities give lower bounds growing without bound, so infinitely many members are pairwise non-diffeomorphic"
            }
            "enumeration" => {
                "classes c with |<c, v_i>| <= 2 g_i - 2 - v_i.v_i on every basis class, characteristic by default"
            }
            "ac" => "breadth-first Andrews-Curtis search over canonical presentations",
            "evidence" => "necessary conditions for a homeomorphism; never asserted as proof",
            _ => continue,
        };
        o.insert(k.into(), text.into());
    }
    Value::Object(o)
}

pub fn class_json(c: &CohomologyClass) -> Value {
    json!({
        "free_coords": ints(&c.free_coords),
        "torsion": c.torsion_coords.iter().map(|t| json!({
            "residue": int(&t.residue),
            "order": int(&t.order),
        })).collect::<Vec<_>>(),
    })
}

pub fn form_json(f: &FormProperties) -> Value {
    json!({
        "even": f.even,
        "unimodular": f.unimodular,
        "definiteness": f.definiteness.as_str(),
        "signature": {
            "positive": f.signature.positive,
            "negative": f.signature.negative,
            "zero": f.signature.zero,
            "value": f.signature.value(),
        },
        "rank": f.rank,
        "determinant": int(&f.determinant),
    })
}

pub fn contact_json(c: &ContactFiveClass) -> Value {
    json!({
        "n": c.n,
        "r": int(&c.r),
        "diffeo_type": c.diffeo_type.as_str(),
    })
}

pub fn trace_json(t: &AcTrace) -> Value {
    json!({
        "start": presentation_json(&t.start),
        "moves": t.moves.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "end": presentation_json(&t.end),
    })
}

/// Homology, c1 data, form properties and (when defined) the contact class.
pub fn invariants(x: &SteinHandlebody) -> Value {
    let h = homology(x);
    let q = intersection_form(x);
    let c = c1_class(x);
    let mut c1 = class_json(&c);
    let o = c1.as_object_mut().expect("object");
    o.insert("c1_cochain".into(), ints(&c1_cochain(x)));
    o.insert("divisibility".into(), int(&c.divisibility()));
    o.insert(
        "rotation_divisor".into(),
        rotation_divisor(x).map_or(Value::Null, |r| int(&r)),
    );
    let contact = if x.one_handles == 0 {
        contact_json(&ContactFiveClass::new(h.b2, c.divisibility()))
    } else {
        Value::Null
    };
    json!({
        "b2": h.b2,
        "h1": { "free_rank": h.h1_free_rank, "torsion": ints(&h.torsion_orders) },
        "c1": c1,
        "contact_class": contact,
        "intersection_form": matrix(&q),
        "form": form_json(&form_properties(&q).expect("intersection forms are symmetric")),
        "presentation": presentation_json(&presentation(x)),
        "provenance": provenance(&["b2", "h1", "c1", "divisibility", "rotation_divisor", "form", "contact_class"]),
    })
}

pub fn ac_outcome(out: &AcOutcome) -> Value {
    match out {
        AcOutcome::Trivialized { trace, states } => json!({
            "status": "trivialized",
            "trace": trace_json(trace),
            "states": states,
            "obstruction": Value::Null,
            "provenance": provenance(&["ac"]),
        }),
        AcOutcome::Exhausted {
            best,
            obstruction,
            states,
        } => json!({
            "status": "exhausted",
            "trace": trace_json(best),
            "states": states,
            "obstruction": obstruction.as_ref().map_or(Value::Null, |o| o.to_string().into()),
            "provenance": provenance(&["ac"]),
        }),
    }
}

pub fn genus_bound(b: &QGenusBound) -> Value {
    json!({
        "lower": int(&b.lower),
        "upper": b.upper.map_or(Value::Null, Value::from),
        "witness_class": b.witness_class.as_deref().map_or(Value::Null, ints),
        "witness_basis": b.witness_basis.as_ref().map_or(Value::Null, |bs| {
            bs.iter().map(|v| ints(v)).collect::<Vec<_>>().into()
        }),
        "checks_run": b.checks_run,
        "bases_found": b.bases_found,
        "q": matrix(&b.matrix),
        "provenance": provenance(&["q_genus_lower", "q_genus_upper"]),
    })
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "status": "certified",
        "upper_a": c.upper_a,
        "lower_a": int(&c.lower_a),
        "lower_b": int(&c.lower_b),
        "q": matrix(&c.q),
    })
}

pub fn exotica(r: &ExoticaReport, explain: bool) -> Value {
    let members: Vec<Value> = r
        .members
        .iter()
        .map(|m| {
            let mut o = Map::new();
            o.insert("id".into(), m.id.clone().into());
            o.insert("divisibility".into(), int(&m.divisibility));
            o.insert(
                "contact_class".into(),
                m.contact_class.as_ref().map_or(Value::Null, contact_json),
            );
            o.insert(
                "q_genus_lower".into(),
                m.q_genus_lower.as_ref().map_or(Value::Null, int),
            );
            if explain {
                o.insert(
                    "inequality".into(),
                    m.inequality.clone().map_or(Value::Null, Value::from),
                );
            }
            Value::Object(o)
        })
        .collect();
    let lowers: Vec<Value> = r
        .witness
        .iter()
        .filter_map(|id| r.members.iter().find(|m| &m.id == id))
        .map(|m| m.q_genus_lower.as_ref().map_or(Value::Null, int))
        .collect();
    json!({
        "members": members,
        "verdict": r.verdict.as_str(),
        "witness": r.witness,
        "witness_lower_bounds": lowers,
        "notes": r.notes,
        "unbounded_lower_bounds": r.unbounded_lower_bounds,
        "provenance": provenance(&["divisibility", "q_genus_lower", "verdict", "evidence"]),
    })
}

/// Renders a report as aligned `path  value` lines. Arrays of scalars and
/// matrices stay inline as compact JSON so numbers match the JSON output.
pub fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten(v, String::new(), &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        out.push_str(&k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(&v);
        out.push('\n');
    }
    out
}

fn flatten(v: &Value, path: String, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(o) if !o.is_empty() => {
            for (k, v) in o {
                flatten(v, join(k), rows);
            }
        }
        Value::Array(a) if a.iter().any(Value::is_object) => {
            for (i, v) in a.iter().enumerate() {
                flatten(v, format!("{path}[{i}]"), rows);
            }
        }
        Value::String(s) => rows.push((path, s.clone())),
        other => rows.push((path, other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_keeps_numbers() {
        let v = json!({"a": {"b": 3, "m": [["1", "-2"]]}, "l": [{"x": 1}, {"x": 2}], "s": "t"});
        let t = table(&v);
        assert!(t.contains("a.b  "));
        assert!(t.contains(r#"[["1","-2"]]"#));
        assert!(t.contains("l[1].x"));
        assert!(t.lines().any(|l| l.starts_with('s') && l.ends_with(" t")));
    }

    #[test]
    fn invariants_of_znp() {
        let z = steinx_core::families::build_znp(3, 4).unwrap();
        let r = invariants(&z);
        assert_eq!(r["b2"], 3);
        assert_eq!(r["c1"]["divisibility"], 4);
        assert_eq!(r["contact_class"]["r"], 4);
        assert_eq!(r["contact_class"]["diffeo_type"], "trivial_bundle_sum");
    }
}
