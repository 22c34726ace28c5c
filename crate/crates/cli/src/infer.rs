use serde_json::{json, Value};

use condsplit::crep::{self, MinimalCore, SelectionStrategy, Verdict};
use condsplit::kb::parse_query;
use condsplit::operators::{system_z_ocf, Lexicographic, SystemW, Zw};
use condsplit::ranking::Rank;
use condsplit::{models, BeliefBase, Operator, RankingFunction, Relation, WorldSet};

use crate::commands::{eta_str, load, print_json, require_consistent};
use crate::{InferArgs, InputError, Outcome, EXIT_NO, EXIT_OK, EXIT_UNKNOWN};

#[derive(Clone, Copy)]
enum Answer {
    Accept,
    Reject,
    Unknown,
}

impl Answer {
    fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Accept
        } else {
            Answer::Reject
        }
    }

    fn word(self) -> &'static str {
        match self {
            Answer::Accept => "ACCEPT",
            Answer::Reject => "REJECT",
            Answer::Unknown => "UNKNOWN",
        }
    }

    fn code(self) -> u8 {
        match self {
            Answer::Accept => EXIT_OK,
            Answer::Reject => EXIT_NO,
            Answer::Unknown => EXIT_UNKNOWN,
        }
    }
}

fn rank_json(r: Rank) -> Value {
    match r {
        Rank::Finite(n) => json!(n),
        Rank::Infinite => json!("inf"),
    }
}

fn world_names(base: &BeliefBase, worlds: impl IntoIterator<Item = u32>) -> Vec<String> {
    let sig = base.signature();
    worlds.into_iter().map(|w| sig.world_str(w, sig.all())).collect()
}

/// Worlds of `set` with the least key.
fn minimal_by<K: Ord>(set: &WorldSet, key: impl Fn(u32) -> K) -> Vec<u32> {
    let best = match set.iter().map(&key).min() {
        Some(k) => k,
        None => return Vec::new(),
    };
    set.iter().filter(|&w| key(w) == best).collect()
}

fn ranks_trace(base: &BeliefBase, k: &RankingFunction, ab: &WorldSet, abn: &WorldSet) -> Value {
    json!({
        "kind": "ranks",
        "rank_ab": rank_json(k.rank_set(ab)),
        "rank_ab_neg": rank_json(k.rank_set(abn)),
        "minimal_ab": world_names(base, minimal_by(ab, |w| k.world_rank(w))),
        "minimal_ab_neg": world_names(base, minimal_by(abn, |w| k.world_rank(w))),
    })
}

fn lex_trace(base: &BeliefBase, lex: &Lexicographic, ab: &WorldSet, abn: &WorldSet) -> Value {
    let side = |set: &WorldSet| {
        let ws = minimal_by(set, |w| lex.vector(w).into_iter().rev().collect::<Vec<_>>());
        let vector = ws.first().map(|&w| lex.vector(w));
        json!({ "worlds": world_names(base, ws), "xi_counts": vector })
    };
    json!({ "kind": "lex", "minimal_ab": side(ab), "minimal_ab_neg": side(abn) })
}

fn w_trace(base: &BeliefBase, w: &SystemW, ab: &WorldSet, abn: &WorldSet) -> Value {
    let sig = base.signature();
    let rows: Vec<Value> = abn
        .iter()
        .map(|w2| {
            let by = ab.iter().find(|&w1| w.preferred(w1, w2));
            json!({
                "world": sig.world_str(w2, sig.all()),
                "dominated_by": by.map(|w1| sig.world_str(w1, sig.all())),
            })
        })
        .collect();
    json!({ "kind": "preference", "dominance": rows })
}

fn render_trace(t: &Value) -> String {
    let list = |v: &Value| {
        v.as_array().map_or(String::new(), |a| a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(" "))
    };
    let mut out = String::new();
    match t["kind"].as_str() {
        Some("ranks") => {
            if let Some(eta) = t["eta"].as_array() {
                let eta: Vec<u64> = eta.iter().filter_map(Value::as_u64).collect();
                out.push_str(&format!("  impacts {}\n", eta_str(&eta)));
            }
            out.push_str(&format!("  rank(AB)  = {}  at {}\n", t["rank_ab"], list(&t["minimal_ab"])));
            out.push_str(&format!("  rank(AB') = {}  at {}\n", t["rank_ab_neg"], list(&t["minimal_ab_neg"])));
        }
        Some("lex") => {
            for (name, key) in [("AB", "minimal_ab"), ("AB'", "minimal_ab_neg")] {
                let side = &t[key];
                out.push_str(&format!("  least {name} worlds {} with xi counts {}\n", list(&side["worlds"]), side["xi_counts"]));
            }
        }
        Some("preference") => {
            if let Some(rows) = t["dominance"].as_array() {
                for r in rows {
                    let by = r["dominated_by"].as_str().unwrap_or("nothing");
                    out.push_str(&format!("  {} is dominated by {by}\n", r["world"].as_str().unwrap_or("")));
                }
            }
        }
        Some("c-inference") => {
            out.push_str(&format!("  impacts up to {} (threshold {})\n", t["bound"], t["threshold"]));
            if let Some(eta) = t["countermodel"].as_array() {
                let eta: Vec<u64> = eta.iter().filter_map(Value::as_u64).collect();
                out.push_str(&format!("  countermodel {}\n", eta_str(&eta)));
            }
        }
        _ => {}
    }
    if let Some(via) = t["via"].as_str() {
        out.insert_str(0, &format!("  decided by {via}\n"));
    }
    out
}

pub fn run(args: &InferArgs, cap: usize) -> Outcome {
    let kb = load(&args.kb, cap)?;
    require_consistent(&kb)?;
    let base = &kb.base;
    let sig = base.signature();
    let op = Operator::parse(&args.op)?;
    if args.bound.is_some() && op != Operator::CInference {
        return Err(InputError("--bound only applies to --op cinf".into()));
    }
    let (consequent, antecedent) = parse_query(&args.query, sig)?;
    let a = models(&antecedent, sig);
    let b = models(&consequent, sig);
    let (ab, abn) = (&a & &b, &a - &b);

    let (answer, trace) = match &op {
        Operator::CInference => {
            let r = crep::c_infer(base, &a, &b, args.bound)?;
            let answer = match r.verdict {
                Verdict::True => Answer::Accept,
                Verdict::False => Answer::Reject,
                Verdict::Unknown => Answer::Unknown,
            };
            let trace = json!({
                "kind": "c-inference",
                "bound": r.bound,
                "threshold": r.threshold,
                "countermodel": r.countermodel,
            });
            (answer, trace)
        }
        Operator::Lex => {
            let lex = Lexicographic::new(base)?;
            (Answer::from_bool(lex.infer_sets(&a, &b)), lex_trace(base, &lex, &ab, &abn))
        }
        Operator::SystemW => {
            let w = SystemW::new(base)?;
            (Answer::from_bool(w.infer_sets(&a, &b)), w_trace(base, &w, &ab, &abn))
        }
        Operator::Zw => {
            let zw = Zw::new(base)?;
            let mut trace = match &zw {
                Zw::W(w) => w_trace(base, w, &ab, &abn),
                Zw::Z(k) => ranks_trace(base, k, &ab, &abn),
            };
            trace["via"] = json!(if zw.uses_w() { "systemw" } else { "systemz" });
            (Answer::from_bool(zw.infer_sets(&a, &b)), trace)
        }
        Operator::SystemZ => {
            let k = system_z_ocf(base)?;
            (Answer::from_bool(k.infer_sets(&a, &b)), ranks_trace(base, &k, &ab, &abn))
        }
        Operator::CCore | Operator::Strategy(_) => {
            let eta = match &op {
                Operator::Strategy(s) => s.pick(base)?,
                _ => MinimalCore.pick(base)?,
            };
            if !crep::is_solution(base, &eta)? {
                return Err(InputError(format!("strategy selected {} which is not a solution", eta_str(&eta))));
            }
            let k = crep::induced_ocf(base, &eta)?;
            let mut trace = ranks_trace(base, &k, &ab, &abn);
            trace["eta"] = json!(eta);
            (Answer::from_bool(k.infer_sets(&a, &b)), trace)
        }
    };

    let query = format!("({} | {})", consequent.display(sig), antecedent.display(sig));
    if args.json {
        print_json(&json!({
            "kb": kb.display_name(),
            "operator": args.op,
            "query": query,
            "verdict": answer.word(),
            "trace": trace,
        }));
    } else {
        println!("{}", answer.word());
        if args.verbose {
            print!("{}", render_trace(&trace));
        }
    }
    Ok(answer.code())
}
