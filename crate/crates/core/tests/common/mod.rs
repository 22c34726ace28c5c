//! Brute-force oracles and a seeded generator of random belief bases.
//!
//! Oracles evaluate formulas world by world and never use the library's
//! precomputed world tables.

#![allow(dead_code)]

use condsplit::conditionals::LabelSet;
use condsplit::crep;
use condsplit::logic::{AtomSet, Formula, Signature, WorldSet};
use condsplit::{BeliefBase, Conditional, KnowledgeBase};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 4] = ["a", "b", "c", "d"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_formula(rng: &mut ChaCha8Rng, n: usize, depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.35) {
        let a = rng.random_range(0..n);
        return Formula::literal(a, rng.random_bool(0.7));
    }
    match rng.random_range(0..4) {
        0 => Formula::negate(random_formula(rng, n, depth - 1)),
        1 | 2 => Formula::and(random_formula(rng, n, depth - 1), random_formula(rng, n, depth - 1)),
        _ => Formula::or(random_formula(rng, n, depth - 1), random_formula(rng, n, depth - 1)),
    }
}

/// A strongly consistent base with `1..=max_atoms` atoms and `1..=max_size` conditionals.
pub fn random_base(rng: &mut ChaCha8Rng, max_atoms: usize, max_size: usize) -> BeliefBase {
    loop {
        let n = rng.random_range(1..=max_atoms);
        let sig = Signature::new(&ATOMS[..n]).unwrap();
        let size = rng.random_range(1..=max_size);
        let mut pairs: Vec<(Formula, Formula)> = Vec::new();
        for _ in 0..size {
            let b = random_formula(rng, n, 2);
            let a = if rng.random_bool(0.15) { Formula::Top } else { random_formula(rng, n, 2) };
            if !pairs.contains(&(b.clone(), a.clone())) {
                pairs.push((b, a));
            }
        }
        let base = BeliefBase::new(sig, pairs).unwrap();
        if oracle_partition(&base).is_some() {
            return base;
        }
    }
}

pub fn random_bases(seed: u64, count: usize) -> Vec<BeliefBase> {
    let mut r = rng(seed);
    (0..count).map(|_| random_base(&mut r, 4, 4)).collect()
}

pub fn load(text: &str) -> BeliefBase {
    KnowledgeBase::parse(text).unwrap().base
}

/// The unique world satisfying a complete conjunction such as `b,!p,f,w`.
pub fn world(sig: &Signature, conj: &str) -> u32 {
    let m = condsplit::models(&sig.parse(conj).unwrap(), sig);
    assert_eq!(m.len(), 1, "{conj} is not a complete conjunction");
    m.first().unwrap()
}

pub fn verifies(c: &Conditional, w: u32) -> bool {
    c.antecedent.eval(w) && c.consequent.eval(w)
}

pub fn falsifies(c: &Conditional, w: u32) -> bool {
    c.antecedent.eval(w) && !c.consequent.eval(w)
}

pub fn falsified_by(base: &BeliefBase, w: u32) -> LabelSet {
    LabelSet::from_labels(base.iter().filter(|c| falsifies(c, w)).map(|c| c.label))
}

pub fn num_worlds(base: &BeliefBase) -> u32 {
    1 << base.signature().len()
}

/// Ordered tolerance partition by repeated search over formulas.
pub fn oracle_partition(base: &BeliefBase) -> Option<Vec<LabelSet>> {
    let n = num_worlds(base);
    let mut rest: Vec<&Conditional> = base.iter().collect();
    let mut parts = Vec::new();
    while !rest.is_empty() {
        let tolerated: Vec<usize> = rest
            .iter()
            .filter(|c| (0..n).any(|w| verifies(c, w) && rest.iter().all(|d| !falsifies(d, w))))
            .map(|c| c.label)
            .collect();
        if tolerated.is_empty() {
            return None;
        }
        rest.retain(|c| !tolerated.contains(&c.label));
        parts.push(LabelSet::from_labels(tolerated));
    }
    Some(parts)
}

pub fn oracle_z_ranks(base: &BeliefBase) -> Vec<u64> {
    let parts = oracle_partition(base).unwrap();
    (0..num_worlds(base))
        .map(|w| {
            let f = falsified_by(base, w);
            parts.iter().rposition(|p| !p.is_disjoint(f)).map_or(0, |j| j as u64 + 1)
        })
        .collect()
}

pub fn rank(ranks: &[u64], set: &WorldSet) -> Option<u64> {
    set.iter().map(|w| ranks[w as usize]).min()
}

/// `A ⊢_κ B` with `None` standing for an infinite rank.
pub fn ocf_infers(ranks: &[u64], a: &WorldSet, b: &WorldSet) -> bool {
    if a.is_empty() {
        return true;
    }
    match (rank(ranks, &(a & b)), rank(ranks, &(a - b))) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x < y,
    }
}

/// Per world, the ξ counts with the highest level first.
pub fn oracle_lex_keys(base: &BeliefBase) -> Vec<Vec<usize>> {
    let parts = oracle_partition(base).unwrap();
    (0..num_worlds(base))
        .map(|w| {
            let f = falsified_by(base, w);
            parts.iter().rev().map(|p| p.intersection(f).len()).collect()
        })
        .collect()
}

pub fn oracle_lex_infers(base: &BeliefBase, a: &WorldSet, b: &WorldSet) -> bool {
    let keys = oracle_lex_keys(base);
    let min = |s: &WorldSet| s.iter().map(|w| keys[w as usize].clone()).min();
    match (min(&(a & b)), min(&(a - b))) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x < y,
    }
}

pub fn oracle_w_preferred(base: &BeliefBase, parts: &[LabelSet], w1: u32, w2: u32) -> bool {
    let (f1, f2) = (falsified_by(base, w1), falsified_by(base, w2));
    for p in parts.iter().rev() {
        let (x, y) = (f1.intersection(*p), f2.intersection(*p));
        if x != y {
            return x.is_subset(y);
        }
    }
    false
}

pub fn oracle_w_infers(base: &BeliefBase, a: &WorldSet, b: &WorldSet) -> bool {
    let parts = oracle_partition(base).unwrap();
    let ab = a & b;
    (a - b).iter().all(|w2| ab.iter().any(|w1| oracle_w_preferred(base, &parts, w1, w2)))
}

/// Every world over `own` extends over `other` without falsifying `target`.
pub fn oracle_extends(base: &BeliefBase, own: AtomSet, other: AtomSet, target: LabelSet) -> bool {
    let n = num_worlds(base);
    (0..n).filter(|w| w & !own.0 == 0).all(|w| {
        (0..n)
            .filter(|e| e & !other.0 == 0)
            .any(|e| base.iter().filter(|c| target.contains(c.label)).all(|c| !falsifies(c, w | e)))
    })
}

/// Atoms the model set depends on.
pub fn support(set: &WorldSet, n: usize) -> AtomSet {
    let mut out = AtomSet::EMPTY;
    for a in 0..n {
        if set.iter().any(|w| !set.contains(w ^ (1 << a))) {
            out.insert(a);
        }
    }
    out
}

/// κ of every partial world over `mask`, indexed by masked world index.
pub fn partial_ranks(ranks: &[u64], mask: u32) -> Vec<u64> {
    let mut out = vec![u64::MAX; ranks.len()];
    for (w, &r) in ranks.iter().enumerate() {
        let k = w & mask as usize;
        out[k] = out[k].min(r);
    }
    out
}

/// `κ(ω¹ω²ω³) + κ(ω³) = κ(ω¹ω³) + κ(ω²ω³)` checked world by world.
pub fn oracle_kappa_independent(ranks: &[u64], s1: AtomSet, s2: AtomSet, s3: AtomSet) -> bool {
    let all = s1.union(s2).union(s3).0;
    let (r123, r13, r23, r3) = (
        partial_ranks(ranks, all),
        partial_ranks(ranks, s1.union(s3).0),
        partial_ranks(ranks, s2.union(s3).0),
        partial_ranks(ranks, s3.0),
    );
    (0..ranks.len() as u32).filter(|w| w & !all == 0).all(|w| {
        let w = w as usize;
        r123[w] + r3[w & s3.0 as usize] == r13[w & s1.union(s3).0 as usize] + r23[w & s2.union(s3).0 as usize]
    })
}

/// Every vector of `{0,…,bound}^len`, in lexicographic order.
pub fn all_vectors(len: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=bound).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// `κ_η` summed from formula evaluation.
pub fn oracle_c_ranks(base: &BeliefBase, eta: &[u64]) -> Vec<u64> {
    (0..num_worlds(base))
        .map(|w| base.iter().zip(eta).filter(|(c, _)| falsifies(c, w)).map(|(_, &e)| e).sum())
        .collect()
}

/// Brute-force countermodel search sharing only `is_solution` with the engine.
pub fn oracle_countermodel(base: &BeliefBase, a: &WorldSet, b: &WorldSet, bound: u64) -> bool {
    all_vectors(base.len(), bound).into_iter().any(|eta| {
        crep::is_solution(base, &eta).unwrap() && !ocf_infers(&oracle_c_ranks(base, &eta), a, b)
    })
}

/// Solutions by direct evaluation of the acceptance condition.
pub fn oracle_solutions(base: &BeliefBase, bound: u64) -> Vec<Vec<u64>> {
    all_vectors(base.len(), bound)
        .into_iter()
        .filter(|eta| {
            let r = oracle_c_ranks(base, eta);
            let u = r.len();
            base.iter().all(|c| {
                let ver = WorldSet::from_fn(u, |w| verifies(c, w));
                let ant = WorldSet::from_fn(u, |w| c.antecedent.eval(w));
                !ver.is_empty() && ocf_infers(&r, &ant, &ver)
            })
        })
        .collect()
}

/// Random model sets over the base's signature, including the extremes.
pub fn random_sets(rng: &mut ChaCha8Rng, universe: usize, count: usize) -> Vec<WorldSet> {
    let mut out = vec![WorldSet::empty(universe), WorldSet::full(universe)];
    for _ in 0..count {
        out.push(WorldSet::from_fn(universe, |_| rng.random_bool(0.5)));
    }
    out
}

/// `base` tolerates `c` when some world verifies `c` and falsifies nothing in `base`.
pub fn oracle_tolerates(base: &BeliefBase, c: &Conditional) -> bool {
    (0..num_worlds(base)).any(|w| verifies(c, w) && base.iter().all(|d| !falsifies(d, w)))
}

/// The acceptance condition `κ_η(AB) < κ_η(AB̄)` for every conditional, by formula evaluation.
pub fn oracle_is_solution(base: &BeliefBase, eta: &[u64]) -> bool {
    let r = oracle_c_ranks(base, eta);
    let min = |pred: &dyn Fn(u32) -> bool| (0..r.len() as u32).filter(|&w| pred(w)).map(|w| r[w as usize]).min();
    base.iter().all(|c| match (min(&|w| verifies(c, w)), min(&|w| falsifies(c, w))) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(v), Some(f)) => v < f,
    })
}

/// Greedily drops conditionals while `fails` still reports a failure.
pub fn minimize(base: &BeliefBase, fails: impl Fn(&BeliefBase) -> Option<String>) -> (BeliefBase, String) {
    let mut current = base.clone();
    let mut reason = fails(&current).expect("the base fails to begin with");
    'shrink: loop {
        let labels: Vec<usize> = current.iter().map(|c| c.label).collect();
        for label in labels {
            let smaller = current.subbase(current.labels().difference(LabelSet::singleton(label)));
            if oracle_partition(&smaller).is_none() {
                continue;
            }
            if let Some(r) = fails(&smaller) {
                current = smaller;
                reason = r;
                continue 'shrink;
            }
        }
        return (current, reason);
    }
}

/// A base as knowledge-base text, for failure reports.
pub fn kb_text(base: &BeliefBase) -> String {
    let sig = base.signature();
    let mut out = format!("signature: {}\n", sig.atoms().join(", "));
    for c in base.iter() {
        out.push_str(&format!("{}\n", c.display(sig)));
    }
    out
}

pub mod expected;
