//! Browser bindings for condsplit.
//!
//! Each export takes knowledge-base text and returns a JSON string. The pure
//! functions in [`api`] do the work so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use serde_json::{json, Value};

    use condsplit::crep::{self, minimal_core_vector, Verdict};
    use condsplit::fixtures;
    use condsplit::kb::parse_query;
    use condsplit::operators::{system_z_ocf, Lexicographic};
    use condsplit::splitting::census;
    use condsplit::{enumerate_splittings, models, BeliefBase, InferenceOperator as _, KnowledgeBase, Operator};

    /// Above this many conditionals `cinf` is skipped; its search is exponential.
    pub const CINF_MAX_CONDITIONALS: usize = 5;

    fn parse(text: &str) -> Result<KnowledgeBase, String> {
        KnowledgeBase::parse(text).map_err(|e| e.to_string())
    }

    fn consistent(kb: &KnowledgeBase) -> Result<&BeliefBase, String> {
        if kb.base.is_consistent() {
            Ok(&kb.base)
        } else {
            Err("the belief base is inconsistent".into())
        }
    }

    fn to_string(v: Value) -> String {
        serde_json::to_string(&v).expect("json values serialize")
    }

    /// The shipped example bases as `{name: text}`.
    pub fn fixtures_json() -> String {
        let map: serde_json::Map<String, Value> =
            fixtures::ALL.iter().map(|(n, t)| (n.to_string(), json!(t))).collect();
        to_string(Value::Object(map))
    }

    /// Per world: falsified conditionals, ξ counts, System Z and minimal-core ranks.
    pub fn rankings_json(text: &str) -> Result<String, String> {
        let kb = parse(text)?;
        let base = consistent(&kb)?;
        let sig = base.signature();
        let partition = base.tolerance_partition().expect("consistent");
        let z = system_z_ocf(base).map_err(|e| e.to_string())?;
        let eta = minimal_core_vector(base).map_err(|e| e.to_string())?;
        let mc = crep::induced_ocf(base, &eta).map_err(|e| e.to_string())?;
        let lex = Lexicographic::new(base).map_err(|e| e.to_string())?;
        let worlds: Vec<Value> = (0..base.num_worlds() as u32)
            .map(|w| {
                json!({
                    "world": sig.world_str(w, sig.all()),
                    "falsifies": base.falsified(w).names(),
                    "xi_counts": lex.vector(w),
                    "systemz": z.world_rank(w),
                    "ccore": mc.world_rank(w),
                })
            })
            .collect();
        Ok(to_string(json!({
            "conditionals": base.iter().map(|c| json!({
                "label": c.name(),
                "text": c.display(sig).to_string(),
            })).collect::<Vec<_>>(),
            "partition": partition.parts.iter().map(|p| base.describe(*p)).collect::<Vec<_>>(),
            "eta_mc": eta,
            "worlds": worlds,
        })))
    }

    /// Census counts and every deduplicated splitting.
    pub fn census_json(text: &str) -> Result<String, String> {
        let kb = parse(text)?;
        let base = &kb.base;
        let all = enumerate_splittings(base, true);
        let (total, safe, gensafe, genuine) = census(&all);
        Ok(to_string(json!({
            "total": total,
            "safe": safe,
            "gensafe": gensafe,
            "genuine": genuine,
            "splittings": all.iter().map(|s| {
                let mut j = s.to_json(base);
                j["delta1_text"] = json!(base.describe(s.delta1));
                j["delta2_text"] = json!(base.describe(s.delta2));
                j["delta3_text"] = json!(base.describe(s.delta3));
                j
            }).collect::<Vec<_>>(),
        })))
    }

    fn verdict(base: &BeliefBase, name: &str, query: &(condsplit::Formula, condsplit::Formula)) -> Result<Value, String> {
        let sig = base.signature();
        let (b, a) = (models(&query.0, sig), models(&query.1, sig));
        let op = Operator::parse(name).map_err(|e| e.to_string())?;
        if op == Operator::CInference {
            if base.len() > CINF_MAX_CONDITIONALS {
                return Ok(json!({ "operator": name, "verdict": "SKIPPED" }));
            }
            let r = crep::c_infer(base, &a, &b, None).map_err(|e| e.to_string())?;
            let word = match r.verdict {
                Verdict::True => "ACCEPT",
                Verdict::False => "REJECT",
                Verdict::Unknown => "UNKNOWN",
            };
            return Ok(json!({ "operator": name, "verdict": word, "countermodel": r.countermodel }));
        }
        let accepted = op.build(base).map_err(|e| e.to_string())?.infer_sets(&a, &b);
        Ok(json!({ "operator": name, "verdict": if accepted { "ACCEPT" } else { "REJECT" } }))
    }

    /// Verdicts on `(B | A)` for one operator, or for all of them with `all`.
    pub fn infer_json(text: &str, op: &str, query: &str) -> Result<String, String> {
        let kb = parse(text)?;
        let base = consistent(&kb)?;
        let q = parse_query(query, base.signature()).map_err(|e| e.to_string())?;
        let names: Vec<&str> = if op == "all" { Operator::NAMES.to_vec() } else { vec![op] };
        let results = names.iter().map(|n| verdict(base, n, &q)).collect::<Result<Vec<_>, _>>()?;
        Ok(to_string(json!({
            "query": format!("({} | {})", q.0.display(base.signature()), q.1.display(base.signature())),
            "results": results,
        })))
    }
}

#[wasm_bindgen]
pub fn fixtures() -> String {
    api::fixtures_json()
}

#[wasm_bindgen]
pub fn rankings(kb: &str) -> Result<String, JsValue> {
    api::rankings_json(kb).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn splittings(kb: &str) -> Result<String, JsValue> {
    api::census_json(kb).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn infer(kb: &str, op: &str, query: &str) -> Result<String, JsValue> {
    api::infer_json(kb, op, query).map_err(|e| JsValue::from_str(&e))
}
