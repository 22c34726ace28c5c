use condsplit::crep::{constraint_sets, cr_plus, minimal_core_ocf, minimal_core_vector, reduce, render_table};
use condsplit::operators::system_z_ocf;
use condsplit::postulates::{self, Postulate, Scope};
use condsplit::{enumerate_splittings, Operator, Splitting};

use crate::commands::{census_line, eta_str, load, splitting_rows};
use crate::{Outcome, ReportArgs, EXIT_INPUT, EXIT_OK};

const DEFAULT_OPS: [&str; 5] = ["systemz", "lex", "systemw", "zw", "ccore"];

fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let esc = |s: &str| s.replace('|', "\\|");
    let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | ")));
    }
    out
}

pub fn run(args: &ReportArgs, cap: usize) -> Outcome {
    let kb = load(&args.kb, cap)?;
    let base = &kb.base;
    let sig = base.signature();
    let mut out = format!("# {}\n\n", kb.display_name());
    out.push_str(&format!("Signature: {}\n\n", sig.atoms().join(", ")));

    out.push_str("## Conditionals\n\n");
    let rows: Vec<Vec<String>> = base.iter().map(|c| vec![c.name(), format!("`{}`", c.display(sig))]).collect();
    out.push_str(&md_table(&["label", "conditional"], &rows));

    let Some(partition) = base.tolerance_partition() else {
        out.push_str("\nThe base is inconsistent: it has no tolerance partition.\n");
        print!("{out}");
        return Ok(EXIT_INPUT);
    };
    out.push_str("\n## Tolerance partition\n\n");
    for (l, part) in partition.parts.iter().enumerate() {
        out.push_str(&format!("- level {l}: {}\n", base.describe(*part).join(", ")));
    }

    let z = system_z_ocf(base)?;
    let mc = minimal_core_ocf(base)?;
    out.push_str("\n## Worlds\n\n");
    let rows: Vec<Vec<String>> = (0..base.num_worlds() as u32)
        .map(|w| {
            let counts = partition.xi_counts(base, w).iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            vec![
                sig.world_str(w, sig.all()),
                base.falsified(w).to_string(),
                format!("({counts})"),
                z.world_rank(w).to_string(),
                mc.world_rank(w).to_string(),
            ]
        })
        .collect();
    out.push_str(&md_table(&["world", "falsifies", "xi counts", "system Z", "minimal core"], &rows));

    let all = enumerate_splittings(base, true);
    out.push_str(&format!("\n## Splittings\n\n{}\n\n", census_line(&all)));
    let shown: Vec<&Splitting> = all.iter().filter(|s| s.is_generalized_safe).collect();
    if shown.is_empty() {
        out.push_str("No generalized safe splitting.\n");
    } else {
        let rows: Vec<Vec<String>> = splitting_rows(base, &shown).into_iter().map(Vec::from).collect();
        out.push_str("Generalized safe splittings:\n\n");
        out.push_str(&md_table(&["sigma1", "sigma2", "sigma3", "delta1", "delta2", "delta3", "class"], &rows));
    }

    let raw = constraint_sets(base);
    out.push_str("\n## c-representations\n\n```text\n");
    out.push_str(&render_table(base, &raw, &reduce(&raw)));
    out.push_str("```\n\n");
    for c in cr_plus(base)? {
        out.push_str(&format!("- {c}\n"));
    }
    out.push_str(&format!("\nMinimal core: η^mc = {}\n", eta_str(&minimal_core_vector(base)?)));

    out.push_str("\n## Postulates\n\n");
    let ops: Vec<String> = if args.ops.is_empty() { DEFAULT_OPS.map(String::from).to_vec() } else { args.ops.clone() };
    let mut rows = Vec::new();
    for name in &ops {
        let op = Operator::parse(name)?;
        let mut row = vec![name.clone()];
        for (postulate, scope) in [
            (Postulate::CSynSplitG, Scope::Safe),
            (Postulate::CSynSplitG, Scope::Gensafe),
            (Postulate::DiTv, Scope::Gensafe),
        ] {
            let r = postulates::check(postulate, &op, base, scope, 1)?;
            row.push(if r.is_satisfied() { "holds".into() } else { format!("{} violations", r.violation_count) });
        }
        rows.push(row);
    }
    out.push_str(&md_table(&["operator", "csynsplit (safe)", "csynsplitg (gensafe)", "di/tv"], &rows));
    print!("{out}");
    Ok(EXIT_OK)
}
