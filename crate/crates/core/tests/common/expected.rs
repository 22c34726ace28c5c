//! Expected values for the example bases, one check per acceptance criterion.
//!
//! Each check returns `Ok(detail)` or `Err(reason)` so that both the golden
//! tests and the acceptance binary can share them.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use condsplit::conditionals::LabelSet;
use condsplit::crep::{self, Verdict};
use condsplit::kb::parse_query;
use condsplit::logic::{models, AtomSet, Signature, WorldSet};
use condsplit::operators::{self, InferenceOperator, Operator};
use condsplit::postulates::{self, Scope};
use condsplit::splitting::{census, enumerate_splittings, has_genuine_safe};
use condsplit::{fixtures, BeliefBase, Splitting};
use serde_json::Value;

use super::*;

pub const RAIN_GOLDEN: &str = include_str!("../data/rain_splittings.json");
pub const KIWI_GOLDEN: &str = include_str!("../data/kiwi_splittings.json");

/// Census counts stated for the rain base: `(total, safe, generalized safe, genuine)`.
pub const RAIN_CENSUS_STATED: (usize, usize, usize, usize) = (37, 16, 32, 5);

/// Birds worlds with their ranks under `(1,2,2,1)`, `(3,4,4,3)` and `(4,5,6,7)`.
pub const IMPACTS: [[u64; 4]; 3] = [[1, 2, 2, 1], [3, 4, 4, 3], [4, 5, 6, 7]];
pub const RANK_TABLE: [(&str, [u64; 3]); 16] = [
    ("b,p,f,w", [2, 4, 5]),
    ("b,p,f,!w", [3, 7, 12]),
    ("b,p,!f,w", [1, 3, 4]),
    ("b,p,!f,!w", [2, 6, 11]),
    ("b,!p,f,w", [0, 0, 0]),
    ("b,!p,f,!w", [1, 3, 7]),
    ("b,!p,!f,w", [1, 3, 4]),
    ("b,!p,!f,!w", [2, 6, 11]),
    ("!b,p,f,w", [4, 8, 11]),
    ("!b,p,f,!w", [4, 8, 11]),
    ("!b,p,!f,w", [2, 4, 6]),
    ("!b,p,!f,!w", [2, 4, 6]),
    ("!b,!p,f,w", [0, 0, 0]),
    ("!b,!p,f,!w", [0, 0, 0]),
    ("!b,!p,!f,w", [0, 0, 0]),
    ("!b,!p,!f,!w", [0, 0, 0]),
];

/// `(V_i, V̂_i, F_i, F̂_i)` of the birds base, by 0-based label.
pub type SetRow = (&'static [&'static [usize]], &'static [&'static [usize]], &'static [&'static [usize]], &'static [&'static [usize]]);
pub const CONSTRAINT_TABLE: [SetRow; 4] = [
    (&[&[], &[1], &[3], &[1, 3]], &[&[]], &[&[], &[3]], &[&[]]),
    (&[&[0], &[2], &[0, 3]], &[&[0]], &[&[], &[2], &[3]], &[&[]]),
    (&[&[0], &[1], &[0, 3], &[1, 3]], &[&[0]], &[&[], &[1]], &[&[]]),
    (&[&[], &[0], &[1]], &[&[]], &[&[], &[0], &[1]], &[&[]]),
];
pub const CR_PLUS: [&str; 4] = ["η1 > 0", "η2 > η1", "η3 > η1", "η4 > 0"];

/// Birds worlds grouped by `(|ξ^0|, |ξ^1|)`.
pub const STRATA: [((usize, usize), &[&str]); 6] = [
    ((0, 2), &["!b,p,f,!w", "!b,p,f,w"]),
    ((1, 1), &["b,p,f,!w"]),
    ((0, 1), &["b,p,f,w", "!b,p,!f,!w", "!b,p,!f,w"]),
    ((2, 0), &["b,p,!f,!w", "b,!p,!f,!w"]),
    ((1, 0), &["b,!p,!f,w", "b,!p,f,!w", "b,p,!f,w"]),
    ((0, 0), &["!b,!p,!f,!w", "!b,!p,f,w", "!b,!p,!f,w", "!b,!p,f,!w", "b,!p,f,w"]),
];

/// The kiwi splitting the definitions admit but the reference list omits.
pub const KIWI_UNLISTED: [&[&str]; 3] = [&["p", "k"], &[], &["f", "b", "w"]];

fn set_of(items: &[&[usize]]) -> BTreeSet<LabelSet> {
    items.iter().map(|s| LabelSet::from_labels(s.iter().copied())).collect()
}

fn atoms(sig: &Signature, names: &[&str]) -> AtomSet {
    sig.atom_set(names).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// One entry of a reference splitting list.
#[derive(Debug, Clone)]
pub struct GoldenEntry {
    pub boxed: bool,
    pub sigma: [AtomSet; 3],
    pub delta: [LabelSet; 2],
    pub class: String,
}

/// Resolves `(B | A)` to the label of the semantically equal conditional.
fn resolve(base: &BeliefBase, text: &str) -> Result<usize, String> {
    let sig = base.signature();
    let (b, a) = parse_query(text, sig).map_err(|e| format!("{text}: {e}"))?;
    let (ma, mb) = (models(&a, sig), models(&b, sig));
    let (ver, fal) = (&ma & &mb, &ma - &mb);
    base.iter()
        .find(|c| c.ver == ver && c.fal == fal)
        .map(|c| c.label)
        .ok_or_else(|| format!("{text} is not in the base"))
}

pub fn parse_golden(base: &BeliefBase, text: &str) -> Result<Vec<GoldenEntry>, String> {
    let sig = base.signature();
    let rows: Vec<Value> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let names = |v: &Value| -> Result<AtomSet, String> {
        let list: Vec<&str> = v.as_array().ok_or("atom list")?.iter().filter_map(Value::as_str).collect();
        sig.atom_set(&list).map_err(|e| e.to_string())
    };
    let delta = |v: &Value| -> Result<LabelSet, String> {
        if v.as_str() == Some("*") {
            return Ok(base.labels());
        }
        let mut out = LabelSet::EMPTY;
        for c in v.as_array().ok_or("conditional list")? {
            out.insert(resolve(base, c.as_str().ok_or("conditional string")?)?);
        }
        Ok(out)
    };
    rows.iter()
        .map(|r| {
            Ok(GoldenEntry {
                boxed: r["boxed"].as_bool().ok_or("boxed flag")?,
                sigma: [names(&r["sigma1"])?, names(&r["sigma2"])?, names(&r["sigma3"])?],
                delta: [delta(&r["delta1"])?, delta(&r["delta2"])?],
                class: r["class"].as_str().ok_or("class")?.to_string(),
            })
        })
        .collect()
}

pub fn class_of(s: &Splitting) -> &'static str {
    if s.is_safe {
        "safe"
    } else if s.is_generalized_safe {
        "gensafe"
    } else {
        "plain"
    }
}

/// How an enumeration compares with a reference list.
#[derive(Debug, Default)]
pub struct GoldenDiff {
    pub matched: usize,
    pub mismatches: Vec<String>,
    pub unlisted: Vec<Splitting>,
    pub missing: Vec<usize>,
}

impl GoldenDiff {
    pub fn is_exact(&self) -> bool {
        self.mismatches.is_empty() && self.unlisted.is_empty() && self.missing.is_empty()
    }
}

fn entry_fits(e: &GoldenEntry, s: &Splitting) -> bool {
    e.sigma == [s.sigma1, s.sigma2, s.sigma3] && e.delta == [s.delta1, s.delta2]
}

/// Matches deduplicated splittings with entries in either orientation.
pub fn compare_golden(base: &BeliefBase, golden: &[GoldenEntry]) -> GoldenDiff {
    let mut diff = GoldenDiff::default();
    let mut used = vec![false; golden.len()];
    let sig = base.signature();
    for s in enumerate_splittings(base, true) {
        let found = golden
            .iter()
            .enumerate()
            .find(|(k, e)| !used[*k] && (entry_fits(e, &s) || entry_fits(e, &s.swapped())));
        match found {
            None => diff.unlisted.push(s),
            Some((k, e)) => {
                used[k] = true;
                diff.matched += 1;
                let boxed = s.is_genuine && s.is_generalized_safe;
                if e.class != class_of(&s) || e.boxed != boxed {
                    diff.mismatches.push(format!(
                        "Σ1={:?} Σ2={:?} Σ3={:?}: listed {} boxed={}, computed {} boxed={}",
                        sig.names(s.sigma1),
                        sig.names(s.sigma2),
                        sig.names(s.sigma3),
                        e.class,
                        e.boxed,
                        class_of(&s),
                        boxed
                    ));
                }
            }
        }
    }
    diff.missing = (0..golden.len()).filter(|&k| !used[k]).collect();
    diff
}

pub fn golden_diff(base: &BeliefBase, text: &str) -> Result<GoldenDiff, String> {
    Ok(compare_golden(base, &parse_golden(base, text)?))
}

pub fn describe(base: &BeliefBase, s: &Splitting) -> String {
    let sig = base.signature();
    format!(
        "Σ1={{{}}} Σ2={{{}}} Σ3={{{}}} ({})",
        sig.names(s.sigma1).join(","),
        sig.names(s.sigma2).join(","),
        sig.names(s.sigma3).join(","),
        class_of(s)
    )
}

pub fn criterion_1() -> Result<String, String> {
    let got = census(&enumerate_splittings(&fixtures::rain(), true));
    let detail = format!("(total, safe, gensafe, genuine) = {got:?}, stated {RAIN_CENSUS_STATED:?}");
    ensure(got == RAIN_CENSUS_STATED, || detail.clone())?;
    Ok(detail)
}

pub fn criterion_2() -> Result<String, String> {
    let rain = fixtures::rain();
    let diff = golden_diff(&rain, RAIN_GOLDEN)?;
    ensure(diff.is_exact(), || {
        format!(
            "mismatches {:?}, unlisted {:?}, missing entries {:?}",
            diff.mismatches,
            diff.unlisted.iter().map(|s| describe(&rain, s)).collect::<Vec<_>>(),
            diff.missing
        )
    })?;
    let boxed = enumerate_splittings(&rain, true).iter().filter(|s| s.is_genuine && s.is_generalized_safe).count();
    ensure(diff.matched == 37 && boxed == 5, || format!("{} matched, {boxed} boxed", diff.matched))?;
    Ok(format!("{} entries match, {boxed} boxed", diff.matched))
}

pub fn criterion_3() -> Result<String, String> {
    let kiwi = fixtures::kiwi();
    let golden = parse_golden(&kiwi, KIWI_GOLDEN)?;
    let diff = compare_golden(&kiwi, &golden);
    ensure(!has_genuine_safe(&kiwi), || "a genuine safe splitting exists".into())?;
    for e in golden.iter().filter(|e| e.boxed) {
        let s = condsplit::splitting::induce(&kiwi, e.sigma[0], e.sigma[1], e.sigma[2]).map_err(|e| e.to_string())?;
        ensure(s.is_generalized_safe && s.is_genuine && !s.is_safe, || format!("boxed {} is not genuine gensafe", describe(&kiwi, &s)))?;
    }
    ensure(diff.mismatches.is_empty() && diff.missing.is_empty(), || {
        format!("mismatches {:?}, missing entries {:?}", diff.mismatches, diff.missing)
    })?;
    ensure(diff.unlisted.is_empty(), || {
        format!(
            "all {} listed entries match and the boxed ones are genuine gensafe, but the enumeration has {} more: {}",
            diff.matched,
            diff.unlisted.len(),
            diff.unlisted.iter().map(|s| describe(&kiwi, s)).collect::<Vec<_>>().join("; ")
        )
    })?;
    Ok(format!("{} entries match", diff.matched))
}

pub fn criterion_4() -> Result<String, String> {
    let birds = fixtures::birds();
    let op = birds.tolerance_partition().ok_or("inconsistent")?;
    let want = vec![LabelSet::from_labels([0, 3]), LabelSet::from_labels([1, 2])];
    ensure(op.parts == want, || format!("got {:?}", op.parts))?;
    Ok("Δ^0 = {(f|b), (w|b)}, Δ^1 = {(!f|p), (b|p)}".into())
}

pub fn criterion_5() -> Result<String, String> {
    let birds = fixtures::birds();
    let sig = birds.signature();
    for (col, eta) in IMPACTS.iter().enumerate() {
        ensure(crep::is_solution(&birds, eta).unwrap(), || format!("{eta:?} is not a solution"))?;
        let ranks = crep::induced_ranks(&birds, eta).unwrap();
        for (conj, want) in RANK_TABLE {
            let w = world(sig, conj);
            ensure(ranks[w as usize] == want[col], || {
                format!("κ under {eta:?} of {conj} is {}, expected {}", ranks[w as usize], want[col])
            })?;
        }
    }
    Ok("48 ranks match".into())
}

pub fn criterion_6() -> Result<String, String> {
    let birds = fixtures::birds();
    let raw = crep::constraint_sets(&birds);
    let reduced = crep::reduce(&raw);
    for (k, (v, vh, f, fh)) in CONSTRAINT_TABLE.iter().enumerate() {
        let (r, h) = (&raw.entries[k], &reduced.entries[k]);
        ensure(r.v == set_of(v) && r.f == set_of(f), || format!("V{0}/F{0} differ: {r:?}", k + 1))?;
        ensure(h.v == set_of(vh) && h.f == set_of(fh), || format!("V̂{0}/F̂{0} differ: {h:?}", k + 1))?;
    }
    let plus: Vec<String> = crep::cr_plus(&birds).map_err(|e| e.to_string())?.iter().map(|c| c.to_string()).collect();
    ensure(plus == CR_PLUS, || format!("CR+ is {plus:?}"))?;
    Ok(plus.join(", "))
}

pub fn criterion_7() -> Result<String, String> {
    let birds = fixtures::birds();
    let sig = birds.signature();
    let mc = crep::minimal_core_vector(&birds).map_err(|e| e.to_string())?;
    ensure(mc == [1, 2, 2, 1], || format!("minimal core {mc:?}"))?;
    let m = |s: &str| models(&sig.parse(s).unwrap(), sig);
    ensure(crep::ccore_infer(&birds, &m("p,b"), &m("w")).unwrap(), || "ccore rejects (w|pb)".into())?;
    let k = crep::minimal_core_ocf(&birds).unwrap();
    let (yes, no) = (k.rank_set(&m("p,b,w")), k.rank_set(&m("p,b,!w")));
    use condsplit::Rank::Finite;
    ensure(yes == Finite(1) && no == Finite(2), || format!("κ(pbw) = {yes}, κ(pb!w) = {no}"))?;
    Ok("η^mc = (1,2,2,1), κ(pbw) = 1 < κ(pb!w) = 2".into())
}

pub fn criterion_8() -> Result<String, String> {
    let (birds, kiwi) = (fixtures::birds(), fixtures::kiwi());
    let f = |b: &BeliefBase, s: &str| b.signature().parse(s).unwrap();
    let got = [
        operators::lex_infer(&birds, &f(&birds, "p,b"), &f(&birds, "w")).unwrap(),
        operators::w_infer(&birds, &f(&birds, "p,b"), &f(&birds, "w")).unwrap(),
        operators::system_z_infer(&kiwi, &f(&kiwi, "b,f"), &f(&kiwi, "w")).unwrap(),
        operators::system_z_infer(&kiwi, &f(&kiwi, "p,b,f"), &f(&kiwi, "w")).unwrap(),
    ];
    ensure(got == [true, true, true, false], || format!("got {got:?}"))?;
    Ok("pb ⊢lex w, pb ⊢w w, bf ⊢z w, pbf ⊬z w".into())
}

pub fn criterion_9() -> Result<String, String> {
    let birds = fixtures::birds();
    let sig = birds.signature();
    let op = birds.tolerance_partition().unwrap();
    let mut seen = 0;
    for ((x0, x1), worlds) in STRATA {
        for conj in worlds {
            let counts = op.xi_counts(&birds, world(sig, conj));
            ensure(counts == [x0, x1], || format!("{conj} has {counts:?}, expected ({x0}, {x1})"))?;
            seen += 1;
        }
    }
    ensure(seen == 16, || format!("{seen} worlds listed"))?;
    Ok("16 worlds in 6 strata".into())
}

pub fn criterion_10() -> Result<String, String> {
    let kiwi = fixtures::kiwi();
    let sig = kiwi.signature();
    let safe = postulates::check_csynsplitg(&Operator::Zw, &kiwi, Scope::Safe, 5).map_err(|e| e.to_string())?;
    ensure(safe.is_satisfied(), || format!("{} violations on safe splittings", safe.violation_count))?;
    let gen = postulates::check_csynsplitg(&Operator::Zw, &kiwi, Scope::Gensafe, usize::MAX).map_err(|e| e.to_string())?;
    ensure(!gen.is_satisfied(), || "no violation on generalized safe splittings".into())?;
    let n = sig.len();
    let (fb, p, w) = (atoms(sig, &["f", "b"]), atoms(sig, &["p"]), sig.index_of("w").unwrap());
    let hit = gen.violations.iter().find(|v| {
        let s = &gen.splittings[v.splitting.unwrap()];
        v.postulate == "cindg"
            && s.sigma3 == fb
            && support(&v.e_models, n) == fb
            && v.d_models.as_ref().is_some_and(|d| support(d, n) == p)
            && support(&v.b_models, n).contains(w)
    });
    let v = hit.ok_or_else(|| format!("{} violations, none with E over {{f,b}}, D over {{p}} and B on w", gen.violation_count))?;
    Ok(format!(
        "safe: 0 of {} queries violated; gensafe: {} violations, e.g. A={} B={} D={} E={}",
        safe.queries,
        gen.violation_count,
        v.a.display(sig),
        v.b.display(sig),
        v.d.as_ref().unwrap().display(sig),
        v.e.display(sig)
    ))
}

pub const RANDOM_SEED: u64 = 0x5eed_2024;
pub const RANDOM_BASES: usize = 200;

/// Up to 64 model sets for queries over `base`: conditional sides plus random ones.
pub fn query_sets(base: &BeliefBase, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<WorldSet> {
    let sig = base.signature();
    let mut out = random_sets(rng, base.num_worlds(), 8);
    for c in base.iter() {
        out.push(models(&c.antecedent, sig));
        out.push(models(&c.consequent, sig));
    }
    out
}

pub fn check_self_fulfilling_delta3(base: &BeliefBase, s: &Splitting) -> Result<(), String> {
    if !s.is_safe {
        return Ok(());
    }
    for c in base.iter().filter(|c| s.delta3.contains(c.label)) {
        let fulfilled = (0..num_worlds(base)).all(|w| !falsifies(c, w));
        ensure(fulfilled, || format!("{} ∈ Δ3 is falsifiable", c.name()))?;
    }
    Ok(())
}

fn level(parts: &[LabelSet], l: usize) -> LabelSet {
    parts.get(l).copied().unwrap_or(LabelSet::EMPTY)
}

pub fn check_xi(base: &BeliefBase, s: &Splitting) -> Result<(), String> {
    let op = oracle_partition(base).unwrap();
    let sub = |d: LabelSet| oracle_partition(&base.subbase(d)).unwrap();
    let (op1, op2, op3) = (sub(s.delta1), sub(s.delta2), sub(s.delta3));
    for w in 0..num_worlds(base) {
        let f = falsified_by(base, w);
        for (l, &part) in op.iter().enumerate() {
            let (x, x1, x2, x3) = (
                f.intersection(part),
                f.intersection(level(&op1, l)),
                f.intersection(level(&op2, l)),
                f.intersection(level(&op3, l)),
            );
            ensure(x == x1.union(x2), || format!("ξ^{l} union fails at world {w}"))?;
            ensure(x.len() + x3.len() == x1.len() + x2.len(), || format!("ξ^{l} cardinality fails at world {w}"))?;
        }
    }
    Ok(())
}

pub fn check_tolerance(base: &BeliefBase, s: &Splitting) -> Result<(), String> {
    let (d1, d2, d3) = (base.subbase(s.delta1), base.subbase(s.delta2), base.subbase(s.delta3));
    for c in base.iter() {
        let whole = oracle_tolerates(base, c);
        for (side, d) in [(1, &d1), (2, &d2)] {
            if s.delta(side).contains(c.label) {
                ensure(oracle_tolerates(d, c) == whole, || format!("Δ{side} and Δ disagree on tolerating {}", c.name()))?;
            }
        }
        if s.delta3.contains(c.label) {
            let both = oracle_tolerates(&d1, c) && oracle_tolerates(&d2, c);
            ensure(oracle_tolerates(&d3, c) == both, || format!("Δ3 tolerance of {} differs", c.name()))?;
        }
    }
    let op = oracle_partition(base).unwrap();
    let (op1, op2, op3) = (
        oracle_partition(&d1).unwrap(),
        oracle_partition(&d2).unwrap(),
        oracle_partition(&d3).unwrap(),
    );
    let q = op1.len().min(op2.len());
    let longer = if q == op1.len() { &op2 } else { &op1 };
    let opi = if q == op1.len() { &op1 } else { &op2 };
    for l in 0..op.len() {
        let (x, x1, x2, x3) = (level(&op, l), level(&op1, l), level(&op2, l), level(&op3, l));
        if l <= q {
            ensure(x.is_subset(x1.union(x2)), || format!("Δ^{l} ⊄ Δ1^{l} ∪ Δ2^{l}"))?;
            ensure(level(opi, l).is_subset(x), || format!("Δi^{l} ⊄ Δ^{l}"))?;
            ensure(x3 == x1.intersection(x2), || format!("Δ3^{l} ≠ Δ1^{l} ∩ Δ2^{l}"))?;
        } else {
            ensure(x == level(longer, l), || format!("Δ^{l} differs from the longer side"))?;
        }
    }
    Ok(())
}

pub fn check_solutions(base: &BeliefBase, s: &Splitting, sols: &[Vec<u64>], bound: u64) -> Result<(), String> {
    let (d1, d2) = (base.subbase(s.delta1), base.subbase(s.delta2));
    for eta in sols {
        let ranks = oracle_c_ranks(base, eta);
        ensure(oracle_kappa_independent(&ranks, s.sigma1, s.sigma2, s.sigma3), || {
            format!("κ under {eta:?} is not independent")
        })?;
        let (e1, e2, _) = crep::split_solution(base, s, eta).map_err(|e| e.to_string())?;
        ensure(oracle_is_solution(&d1, &e1) && oracle_is_solution(&d2, &e2), || {
            format!("{eta:?} splits into non-solutions {e1:?}, {e2:?}")
        })?;
        let back = crep::compose_solution(base, s, &e1, &e2).map_err(|e| e.to_string())?;
        ensure(&back == eta, || format!("{eta:?} composes back to {back:?}"))?;
    }
    let (s1, s2) = (oracle_solutions(&d1, bound), oracle_solutions(&d2, bound));
    for e1 in &s1 {
        let shared = crep::project(&d1, e1, s.delta3);
        for e2 in s2.iter().filter(|e2| crep::project(&d2, e2, s.delta3) == shared) {
            let eta = crep::compose_solution(base, s, e1, e2).map_err(|e| e.to_string())?;
            ensure(sols.contains(&eta), || format!("{e1:?} and {e2:?} compose to non-solution {eta:?}"))?;
        }
    }
    Ok(())
}

fn check_subsumption(base: &BeliefBase, sets: &[WorldSet]) -> Result<(), String> {
    let z = Operator::SystemZ.build(base).map_err(|e| e.to_string())?;
    let lex = Operator::Lex.build(base).map_err(|e| e.to_string())?;
    let w = Operator::SystemW.build(base).map_err(|e| e.to_string())?;
    for a in sets {
        for b in sets {
            if z.infer_sets(a, b) {
                ensure(lex.infer_sets(a, b), || format!("Z accepts but lex rejects {a:?} ⊢ {b:?}"))?;
                ensure(w.infer_sets(a, b), || format!("Z accepts but W rejects {a:?} ⊢ {b:?}"))?;
            }
        }
    }
    Ok(())
}

/// Solutions of a constraint system, evaluated entry by entry.
pub fn system_solutions(base: &BeliefBase, cs: &crep::ConstraintSystem, bound: u64) -> Vec<Vec<u64>> {
    let labels: Vec<usize> = base.iter().map(|c| c.label).collect();
    all_vectors(base.len(), bound)
        .into_iter()
        .filter(|eta| {
            let by = |l: usize| eta[labels.iter().position(|&x| x == l).unwrap()];
            let sum = |s: &LabelSet| s.iter().map(by).sum::<u64>();
            cs.entries.iter().all(|e| match e.v.iter().map(sum).min() {
                None => false,
                Some(mv) => e.f.iter().map(sum).min().is_none_or(|mf| by(e.label) + mf > mv),
            })
        })
        .collect()
}

fn check_reduce(base: &BeliefBase, sols: &[Vec<u64>], bound: u64) -> Result<(), String> {
    let reduced = system_solutions(base, &crep::reduce(&crep::constraint_sets(base)), bound);
    ensure(reduced == sols, || format!("reduced system has {} solutions, expected {}", reduced.len(), sols.len()))
}

/// Parts (a) to (g) on one base; the first failure wins.
pub fn property_failure(base: &BeliefBase, sets: &[WorldSet]) -> Option<String> {
    const BETA: u64 = 3;
    let run = || -> Result<(), String> {
        let sols = oracle_solutions(base, BETA);
        check_subsumption(base, sets).map_err(|e| format!("(f) {e}"))?;
        check_reduce(base, &sols, BETA).map_err(|e| format!("(g) {e}"))?;
        for s in enumerate_splittings(base, false).iter().filter(|s| s.is_generalized_safe) {
            let at = |part: &str, e: String| format!("({part}) {}: {e}", describe(base, s));
            check_self_fulfilling_delta3(base, s).map_err(|e| at("a", e))?;
            check_xi(base, s).map_err(|e| at("b", e))?;
            check_tolerance(base, s).map_err(|e| at("c", e))?;
            check_solutions(base, s, &sols, BETA).map_err(|e| at("d/e", e))?;
        }
        Ok(())
    };
    run().err()
}

/// Number of bases and splittings checked, or a minimized counterexample.
pub fn criterion_11() -> Result<String, String> {
    let mut r = rng(RANDOM_SEED);
    let mut splittings = 0;
    for k in 0..RANDOM_BASES {
        let base = random_base(&mut r, 4, 4);
        let sets = query_sets(&base, &mut r);
        if property_failure(&base, &sets).is_some() {
            let (small, reason) = minimize(&base, |b| property_failure(b, &sets));
            return Err(format!("base #{k}: {reason}\nminimized witness:\n{}", kb_text(&small)));
        }
        splittings += enumerate_splittings(&base, false).iter().filter(|s| s.is_generalized_safe).count();
    }
    Ok(format!("{RANDOM_BASES} bases, {splittings} generalized safe splittings"))
}

/// Every vector within the threshold accepted by `is_solution`.
fn oracle_threshold_solutions(base: &BeliefBase) -> Vec<Vec<u64>> {
    let beta = crep::completeness_threshold(base.len());
    all_vectors(base.len(), beta).into_iter().filter(|eta| crep::is_solution(base, eta).unwrap()).collect()
}

pub fn c_inference_failure(base: &BeliefBase, sets: &[WorldSet]) -> Option<String> {
    let sols = oracle_threshold_solutions(base);
    let ranks: Vec<Vec<u64>> = sols.iter().map(|eta| oracle_c_ranks(base, eta)).collect();
    for a in sets {
        for b in sets.iter().step_by(3) {
            let counter = ranks.iter().any(|r| !ocf_infers(r, a, b));
            let got = crep::c_infer(base, a, b, None).unwrap();
            let expected = if counter { Verdict::False } else { Verdict::True };
            if got.verdict != expected {
                return Some(format!("c_infer says {} for {a:?} ⊢ {b:?}, oracle {}", got.verdict, expected));
            }
            if let Some(eta) = &got.countermodel {
                if ocf_infers(&oracle_c_ranks(base, eta), a, b) || !sols.contains(eta) {
                    return Some(format!("countermodel {eta:?} is not one"));
                }
            }
        }
    }
    None
}

pub fn criterion_12() -> Result<String, String> {
    let mut r = rng(RANDOM_SEED ^ 12);
    let mut queries = 0;
    for k in 0..RANDOM_BASES {
        let base = random_base(&mut r, 4, 4);
        let sets = query_sets(&base, &mut r);
        if c_inference_failure(&base, &sets).is_some() {
            let (small, reason) = minimize(&base, |b| c_inference_failure(b, &sets));
            return Err(format!("base #{k}: {reason}\nminimized witness:\n{}", kb_text(&small)));
        }
        queries += sets.len() * sets.len().div_ceil(3);
    }
    Ok(format!("{RANDOM_BASES} bases, {queries} queries agree"))
}

/// Solutions visited by the engine stay in lexicographic order and inside the bound.
pub fn engine_solutions(base: &BeliefBase, bound: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let _ = crep::for_each_solution(base, bound, |eta| {
        out.push(eta.to_vec());
        ControlFlow::Continue(())
    });
    out
}
