use std::ops::ControlFlow;

use serde_json::{json, Value};

use condsplit::crep::{self, constraint_sets, cr_plus, minimal_core_vector, reduce, render_table};
use condsplit::postulates::{self, Postulate, PostulateReport, Scope};
use condsplit::splitting::census;
use condsplit::{enumerate_splittings, BeliefBase, KnowledgeBase, Operator, RankingFunction, Splitting};

use crate::{Class, InputError, KbArg, Outcome, PostulateArgs, SplittingsArgs, EXIT_INPUT, EXIT_NO, EXIT_OK};

pub fn load(arg: &KbArg, cap: usize) -> Result<KnowledgeBase, InputError> {
    let path = &arg.kb;
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let mut kb = KnowledgeBase::parse_with_cap(&text, cap).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if kb.name.is_none() {
        kb.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    for w in &kb.warnings {
        eprintln!("warning: {w}");
    }
    Ok(kb)
}

/// Fails with the standard message when the base has no tolerance partition.
pub fn require_consistent(kb: &KnowledgeBase) -> Result<(), InputError> {
    if kb.base.is_consistent() {
        Ok(())
    } else {
        Err(InputError(format!("{}: the belief base is inconsistent", kb.display_name())))
    }
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

pub fn partition_json(base: &BeliefBase) -> Value {
    match base.tolerance_partition() {
        Some(p) => Value::Array(p.parts.iter().map(|part| json!(base.describe(*part))).collect()),
        None => Value::Null,
    }
}

pub fn validate(arg: &KbArg, cap: usize, as_json: bool) -> Outcome {
    let kb = load(arg, cap)?;
    let base = &kb.base;
    let sig = base.signature();
    let consistent = base.is_consistent();
    if as_json {
        print_json(&json!({
            "name": kb.display_name(),
            "signature": sig.atoms(),
            "conditionals": base.iter().map(|c| json!({
                "label": c.name(),
                "text": c.display(sig).to_string(),
            })).collect::<Vec<_>>(),
            "consistent": consistent,
            "partition": partition_json(base),
            "warnings": kb.warnings,
        }));
    } else {
        println!("{}: {} conditionals over {}", kb.display_name(), base.len(), sig.atoms().join(", "));
        match base.tolerance_partition() {
            Some(p) => {
                println!("consistent, {} tolerance levels", p.num_levels());
                for (l, part) in p.parts.iter().enumerate() {
                    println!("  level {l}: {}", base.describe(*part).join(", "));
                }
            }
            None => println!("inconsistent: no tolerance partition"),
        }
    }
    Ok(if consistent { EXIT_OK } else { EXIT_INPUT })
}

pub fn fmt(arg: &KbArg, cap: usize) -> Outcome {
    print!("{}", load(arg, cap)?.to_kb_string());
    Ok(EXIT_OK)
}

fn has(s: &Splitting, class: Class) -> bool {
    match class {
        Class::Safe => s.is_safe,
        Class::Gensafe => s.is_generalized_safe,
        Class::Genuine => s.is_genuine,
        Class::Simple => s.simple.any(),
    }
}

pub fn class_names(s: &Splitting) -> String {
    let mut v = Vec::new();
    if s.is_safe {
        v.push("safe".to_string());
    } else if s.is_generalized_safe {
        v.push("gensafe".to_string());
    }
    if s.is_genuine {
        v.push("genuine".to_string());
    }
    v.extend(s.simple.names().into_iter().map(String::from));
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

pub fn census_line(splittings: &[Splitting]) -> String {
    let (total, safe, gensafe, genuine) = census(splittings);
    format!("total={total} safe={safe} gensafe={gensafe} genuine={genuine}")
}

fn braces(items: Vec<String>) -> String {
    format!("{{{}}}", items.join(", "))
}

/// One row per splitting: the three parts, the three subbases, the classes.
pub fn splitting_rows(base: &BeliefBase, splittings: &[&Splitting]) -> Vec<[String; 7]> {
    let sig = base.signature();
    splittings
        .iter()
        .map(|s| {
            [
                braces(sig.names(s.sigma1)),
                braces(sig.names(s.sigma2)),
                braces(sig.names(s.sigma3)),
                braces(base.describe(s.delta1)),
                braces(base.describe(s.delta2)),
                braces(base.describe(s.delta3)),
                class_names(s),
            ]
        })
        .collect()
}

pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let widths: Vec<usize> = (0..cols)
        .map(|k| rows.iter().map(|r| r[k].chars().count()).chain([header[k].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn splittings(args: &SplittingsArgs, cap: usize) -> Outcome {
    let kb = load(&args.kb, cap)?;
    let base = &kb.base;
    let all = enumerate_splittings(base, !args.no_dedup);
    let wanted: Vec<Class> = args.only.iter().chain(&args.require).copied().collect();
    let shown: Vec<&Splitting> = all.iter().filter(|s| wanted.iter().all(|&c| has(s, c))).collect();
    let header = format!("{} shown={}", census_line(&all), shown.len());
    if args.json {
        eprintln!("{header}");
        for s in &shown {
            println!("{}", serde_json::to_string(&s.to_json(base)).expect("json values serialize"));
        }
    } else {
        println!("{header}");
        if !shown.is_empty() {
            let rows: Vec<Vec<String>> = splitting_rows(base, &shown).into_iter().map(Vec::from).collect();
            print!("{}", table(&["sigma1", "sigma2", "sigma3", "delta1", "delta2", "delta3", "class"], &rows));
        }
    }
    Ok(EXIT_OK)
}

pub fn eta_str(eta: &[u64]) -> String {
    format!("[{}]", eta.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

pub fn crep_dump(arg: &KbArg, cap: usize, as_json: bool) -> Outcome {
    let kb = load(arg, cap)?;
    let base = &kb.base;
    let raw = constraint_sets(base);
    let reduced = reduce(&raw);
    let plus = if base.is_consistent() { Some(cr_plus(base)?) } else { None };
    if as_json {
        print_json(&json!({
            "conditionals": base.iter().map(|c| json!({
                "label": c.name(),
                "text": c.display(base.signature()).to_string(),
            })).collect::<Vec<_>>(),
            "raw": raw.to_json(),
            "reduced": reduced.to_json(),
            "cr_plus": plus.as_ref().map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        }));
    } else {
        print!("{}", render_table(base, &raw, &reduced));
        match &plus {
            Some(p) => {
                println!();
                for c in p {
                    println!("{c}");
                }
            }
            None => println!("\ninconsistent: no CR+ constraints"),
        }
    }
    Ok(EXIT_OK)
}

pub fn ranks_rows(ocf: &RankingFunction) -> Vec<Vec<String>> {
    let sig = ocf.signature();
    (0..sig.num_worlds() as u32)
        .map(|w| vec![sig.world_str(w, sig.all()), ocf.world_rank(w).to_string()])
        .collect()
}

pub fn crep_core(arg: &KbArg, cap: usize, as_json: bool) -> Outcome {
    let kb = load(arg, cap)?;
    require_consistent(&kb)?;
    let base = &kb.base;
    let eta = minimal_core_vector(base)?;
    let ocf = crep::induced_ocf(base, &eta)?;
    if as_json {
        print_json(&json!({ "eta": eta, "ocf": ocf.to_json() }));
    } else {
        println!("η^mc = {}", eta_str(&eta));
        print!("{}", table(&["world", "rank"], &ranks_rows(&ocf)));
    }
    Ok(EXIT_OK)
}

pub fn crep_solutions(arg: &KbArg, cap: usize, bound: u64, limit: Option<usize>, as_json: bool) -> Outcome {
    let kb = load(arg, cap)?;
    require_consistent(&kb)?;
    let mut count = 0usize;
    let _ = crep::for_each_solution(&kb.base, bound, |eta| {
        if limit.is_some_and(|l| count >= l) {
            return ControlFlow::Break(());
        }
        count += 1;
        if as_json {
            println!("{}", json!(eta));
        } else {
            println!("{}", eta_str(eta));
        }
        ControlFlow::Continue(())
    });
    eprintln!("{count} solutions with impacts at most {bound}");
    Ok(EXIT_OK)
}

pub fn render_postulate_report(report: &PostulateReport, base: &BeliefBase) -> String {
    let sig = base.signature();
    let mut out = String::new();
    let scope = report.scope.map_or(String::new(), |s| format!(", scope {}", s.name()));
    let status = if report.is_satisfied() { "no violation" } else { "violated" };
    out.push_str(&format!(
        "{} for {}{scope}: {status} ({} violations, {} splittings, {} queries{})\n",
        report.postulate,
        report.operator,
        report.violation_count,
        report.splittings.len(),
        report.queries,
        if report.restricted_family { ", literal-conjunction family" } else { "" },
    ));
    for v in &report.violations {
        if let Some(k) = v.splitting {
            let s = &report.splittings[k];
            out.push_str(&format!(
                "  splitting {}|{}|{} side {}: ",
                braces(sig.names(s.sigma1)),
                braces(sig.names(s.sigma2)),
                braces(sig.names(s.sigma3)),
                v.side
            ));
        } else {
            out.push_str(&format!("  {}: ", v.postulate));
        }
        out.push_str(&format!("A = {}, B = {}", v.a.display(sig), v.b.display(sig)));
        if let Some(d) = &v.d {
            out.push_str(&format!(", D = {}", d.display(sig)));
        }
        out.push_str(&format!(", E = {}; lhs {} rhs {}\n", v.e.display(sig), v.lhs, v.rhs));
    }
    out
}

pub fn postulates(args: &PostulateArgs, cap: usize) -> Outcome {
    let kb = load(&args.kb, cap)?;
    require_consistent(&kb)?;
    let op = Operator::parse(&args.op)?;
    let postulate = Postulate::parse(&args.postulate)?;
    let scope = Scope::parse(&args.scope)?;
    let report = postulates::check(postulate, &op, &kb.base, scope, args.max_witnesses)?;
    if args.json {
        print_json(&report.to_json(&kb.base));
    } else {
        print!("{}", render_postulate_report(&report, &kb.base));
    }
    Ok(if report.is_satisfied() { EXIT_OK } else { EXIT_NO })
}
