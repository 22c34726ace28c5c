//! c-Representations: the constraint system `CR(Δ)`, its reduction, the
//! minimal core vector and skeptical c-inference.
//!
//! Impact vectors are indexed by position in the base's label order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::conditionals::{label_name, BeliefBase, LabelSet};
use crate::logic::WorldSet;
use crate::ranking::{min_rank, Rank, RankingFunction};
use crate::splitting::Splitting;

pub type ImpactVector = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrepError {
    #[error("the belief base is inconsistent")]
    InconsistentBeliefBase,
    #[error("expected {expected} impacts, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the core constraints did not converge")]
    CyclicDependency,
    #[error("strategy `{0}` returned a vector that is not a solution")]
    StrategyReturnedNonSolution(String),
    #[error("the two solutions disagree on the shared conditionals")]
    MismatchedDelta3Impacts,
    #[error("the splitting is not generalized safe")]
    NotGeneralizedSafe,
}

fn check_length(base: &BeliefBase, eta: &[u64]) -> Result<(), CrepError> {
    if eta.len() != base.len() {
        return Err(CrepError::LengthMismatch { expected: base.len(), got: eta.len() });
    }
    Ok(())
}

/// Impacts spread over label slots, zero for labels outside the base.
fn by_label(base: &BeliefBase, eta: &[u64]) -> [u64; 64] {
    let mut out = [0u64; 64];
    for (c, &e) in base.iter().zip(eta) {
        out[c.label] = e;
    }
    out
}

fn weight(w: &[u64; 64], s: LabelSet) -> u64 {
    s.iter().map(|l| w[l]).sum()
}

/// `κ_η(ω) = Σ_{ω ⊨ A_j B̄_j} η_j` for every world.
pub fn induced_ranks(base: &BeliefBase, eta: &[u64]) -> Result<Vec<u64>, CrepError> {
    check_length(base, eta)?;
    let w = by_label(base, eta);
    Ok((0..base.num_worlds() as u32).map(|x| weight(&w, base.falsified(x))).collect())
}

/// The OCF induced by `eta`; fails only on bases with no world falsifying nothing.
pub fn induced_ocf(base: &BeliefBase, eta: &[u64]) -> Result<RankingFunction, CrepError> {
    let ranks = induced_ranks(base, eta)?;
    RankingFunction::new(base.signature().clone(), ranks).map_err(|_| CrepError::InconsistentBeliefBase)
}

/// Whether `eta` satisfies every constraint `C_i`.
pub fn is_solution(base: &BeliefBase, eta: &[u64]) -> Result<bool, CrepError> {
    let ranks = induced_ranks(base, eta)?;
    Ok(base.iter().all(|c| min_rank(&ranks, &c.ver) < min_rank(&ranks, &c.fal)))
}

/// `(V_i, F_i)` of one conditional.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintEntry {
    pub label: usize,
    pub v: BTreeSet<LabelSet>,
    pub f: BTreeSet<LabelSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub entries: Vec<ConstraintEntry>,
    pub reduced: bool,
}

pub fn constraint_sets(base: &BeliefBase) -> ConstraintSystem {
    let entries = base
        .iter()
        .map(|c| {
            let own = LabelSet::singleton(c.label);
            let collect = |set: &WorldSet| set.iter().map(|w| base.falsified(w).difference(own)).collect();
            ConstraintEntry { label: c.label, v: collect(&c.ver), f: collect(&c.fal) }
        })
        .collect();
    ConstraintSystem { entries, reduced: false }
}

/// One applicable instance of a transformation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleApplication {
    /// Drop `remove` from `V`; a proper subset of it is in `V`.
    R1 { entry: usize, remove: LabelSet },
    /// Drop `remove` from `F`; a proper subset of it is in `F`.
    R2 { entry: usize, remove: LabelSet },
    /// Remove `label` from every set of `V` and `F`.
    R3 { entry: usize, label: usize },
    /// `V = F` becomes `{∅}, {∅}`.
    R4 { entry: usize },
    /// `{S_k ∪ T}, {S_k ∪ T′}` becomes `{T}, {T′}`.
    R5 { entry: usize, t: LabelSet, t_prime: LabelSet },
    /// Mutual singleton circle between entries `i` and `j`.
    R6 { i: usize, j: usize },
}

impl RuleApplication {
    pub fn rule(&self) -> &'static str {
        match self {
            RuleApplication::R1 { .. } => "R1",
            RuleApplication::R2 { .. } => "R2",
            RuleApplication::R3 { .. } => "R3",
            RuleApplication::R4 { .. } => "R4",
            RuleApplication::R5 { .. } => "R5",
            RuleApplication::R6 { .. } => "R6",
        }
    }
}

fn non_minimal(sets: &BTreeSet<LabelSet>) -> Vec<LabelSet> {
    sets.iter()
        .copied()
        .filter(|s2| sets.iter().any(|s| s != s2 && s.is_subset(*s2)))
        .collect()
}

fn common(sets: &BTreeSet<LabelSet>) -> LabelSet {
    sets.iter().fold(LabelSet(u64::MAX), |acc, s| acc.intersection(*s))
}

fn empty_only(sets: &BTreeSet<LabelSet>) -> bool {
    sets.len() == 1 && sets.contains(&LabelSet::EMPTY)
}

/// The `(T, T′)` factoring of an entry, if it changes the entry.
fn r5_factor(e: &ConstraintEntry) -> Option<(LabelSet, LabelSet)> {
    if e.v.is_empty() || e.f.is_empty() {
        return None;
    }
    let (cv, cf) = (common(&e.v), common(&e.f));
    let t = cv.difference(cf);
    let t_prime = cf.difference(cv);
    let rest_v: BTreeSet<LabelSet> = e.v.iter().map(|s| s.difference(t)).collect();
    let rest_f: BTreeSet<LabelSet> = e.f.iter().map(|s| s.difference(t_prime)).collect();
    if rest_v != rest_f || rest_v.iter().any(|s| !s.is_disjoint(t_prime) || !s.is_disjoint(t)) {
        return None;
    }
    let unchanged = e.v.len() == 1 && e.v.contains(&t) && e.f.len() == 1 && e.f.contains(&t_prime);
    if unchanged {
        None
    } else {
        Some((t, t_prime))
    }
}

fn r6_applies(a: &ConstraintEntry, b: &ConstraintEntry) -> bool {
    if a.label == b.label || !empty_only(&a.f) || !empty_only(&b.f) {
        return false;
    }
    let (sa, sb) = (LabelSet::singleton(b.label), LabelSet::singleton(a.label));
    if !a.v.contains(&sa) || !b.v.contains(&sb) {
        return false;
    }
    let da: BTreeSet<LabelSet> = a.v.iter().copied().filter(|s| *s != sa).collect();
    let db: BTreeSet<LabelSet> = b.v.iter().copied().filter(|s| *s != sb).collect();
    da == db
}

/// Every rule instance applicable to `cs`, in rule order.
pub fn applicable_rules(cs: &ConstraintSystem) -> Vec<RuleApplication> {
    let mut out = Vec::new();
    for (k, e) in cs.entries.iter().enumerate() {
        out.extend(non_minimal(&e.v).into_iter().map(|remove| RuleApplication::R1 { entry: k, remove }));
    }
    for (k, e) in cs.entries.iter().enumerate() {
        out.extend(non_minimal(&e.f).into_iter().map(|remove| RuleApplication::R2 { entry: k, remove }));
    }
    for (k, e) in cs.entries.iter().enumerate() {
        if !e.v.is_empty() && !e.f.is_empty() {
            let shared = common(&e.v).intersection(common(&e.f));
            out.extend(shared.iter().map(|label| RuleApplication::R3 { entry: k, label }));
        }
    }
    for (k, e) in cs.entries.iter().enumerate() {
        if e.v == e.f && !e.v.is_empty() && !empty_only(&e.v) {
            out.push(RuleApplication::R4 { entry: k });
        }
    }
    for (k, e) in cs.entries.iter().enumerate() {
        if let Some((t, t_prime)) = r5_factor(e) {
            out.push(RuleApplication::R5 { entry: k, t, t_prime });
        }
    }
    for i in 0..cs.entries.len() {
        for j in i + 1..cs.entries.len() {
            if r6_applies(&cs.entries[i], &cs.entries[j]) {
                out.push(RuleApplication::R6 { i, j });
            }
        }
    }
    out
}

/// Applies one instance returned by [`applicable_rules`] on the same system.
pub fn apply(cs: &mut ConstraintSystem, app: RuleApplication) {
    let strip = |sets: &BTreeSet<LabelSet>, x: LabelSet| sets.iter().map(|s| s.difference(x)).collect();
    match app {
        RuleApplication::R1 { entry, remove } => {
            cs.entries[entry].v.remove(&remove);
        }
        RuleApplication::R2 { entry, remove } => {
            cs.entries[entry].f.remove(&remove);
        }
        RuleApplication::R3 { entry, label } => {
            let e = &mut cs.entries[entry];
            let x = LabelSet::singleton(label);
            e.v = strip(&e.v, x);
            e.f = strip(&e.f, x);
        }
        RuleApplication::R4 { entry } => {
            let e = &mut cs.entries[entry];
            e.v = BTreeSet::from([LabelSet::EMPTY]);
            e.f = BTreeSet::from([LabelSet::EMPTY]);
        }
        RuleApplication::R5 { entry, t, t_prime } => {
            let e = &mut cs.entries[entry];
            e.v = BTreeSet::from([t]);
            e.f = BTreeSet::from([t_prime]);
        }
        RuleApplication::R6 { i, j } => {
            let (li, lj) = (cs.entries[i].label, cs.entries[j].label);
            cs.entries[i].v.remove(&LabelSet::singleton(lj));
            cs.entries[j].v.remove(&LabelSet::singleton(li));
        }
    }
}

/// Exhaustive rule application, first applicable instance each step.
pub fn reduce(cs: &ConstraintSystem) -> ConstraintSystem {
    let mut out = cs.clone();
    while let Some(app) = applicable_rules(&out).into_iter().next() {
        apply(&mut out, app);
    }
    out.reduced = true;
    out
}

fn fmt_family(base: &BeliefBase, sets: &BTreeSet<LabelSet>) -> String {
    let _ = base;
    let items: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

impl ConstraintSystem {
    pub fn to_json(&self) -> serde_json::Value {
        let fam = |sets: &BTreeSet<LabelSet>| sets.iter().map(|s| s.names()).collect::<Vec<_>>();
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| serde_json::json!({ "conditional": label_name(e.label), "V": fam(&e.v), "F": fam(&e.f) }))
                .collect(),
        )
    }
}

/// Text table of `(V_i, F_i)` and `(V̂_i, F̂_i)` per conditional.
pub fn render_table(base: &BeliefBase, raw: &ConstraintSystem, reduced: &ConstraintSystem) -> String {
    let sig = base.signature();
    let mut rows = vec![["".to_string(), "conditional".into(), "V".into(), "F".into(), "V^".into(), "F^".into()]];
    for (e, r) in raw.entries.iter().zip(&reduced.entries) {
        let c = base.get(e.label).expect("entry of this base");
        rows.push([
            label_name(e.label),
            c.display(sig).to_string(),
            fmt_family(base, &e.v),
            fmt_family(base, &e.f),
            fmt_family(base, &r.v),
            fmt_family(base, &r.f),
        ]);
    }
    let widths: Vec<usize> = (0..6).map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// `Ĉ_i^+: η_i > min{Σ_{δ_j ∈ S} η_j | S ∈ V̂_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveConstraint {
    pub label: usize,
    pub v_hat: Vec<LabelSet>,
}

impl fmt::Display for PositiveConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eta = |l: usize| format!("η{}", l + 1);
        let term = |s: &LabelSet| {
            if s.is_empty() {
                "0".to_string()
            } else {
                s.iter().map(eta).collect::<Vec<_>>().join("+")
            }
        };
        let rhs = match self.v_hat.as_slice() {
            [] => "min ∅".to_string(),
            [one] => term(one),
            many => format!("min({})", many.iter().map(term).collect::<Vec<_>>().join(", ")),
        };
        write!(f, "{} > {}", eta(self.label), rhs)
    }
}

pub fn cr_plus(base: &BeliefBase) -> Result<Vec<PositiveConstraint>, CrepError> {
    if !base.is_consistent() {
        return Err(CrepError::InconsistentBeliefBase);
    }
    let reduced = reduce(&constraint_sets(base));
    Ok(reduced
        .entries
        .into_iter()
        .map(|e| PositiveConstraint { label: e.label, v_hat: e.v.into_iter().collect() })
        .collect())
}

/// `η^mc_i = min{Σ_{δ_j ∈ S} η^mc_j | S ∈ V̂_i} + 1`, in dependency order.
pub fn minimal_core_vector(base: &BeliefBase) -> Result<ImpactVector, CrepError> {
    let cons = cr_plus(base)?;
    let n = cons.len();
    let pos: BTreeMap<usize, usize> = cons.iter().enumerate().map(|(k, c)| (c.label, k)).collect();
    let deps: Vec<LabelSet> = cons
        .iter()
        .map(|c| c.v_hat.iter().fold(LabelSet::EMPTY, |a, s| a.union(*s)))
        .collect();
    let rhs = |eta: &[u64], c: &PositiveConstraint| -> Option<u64> {
        c.v_hat.iter().map(|s| s.iter().map(|l| eta[pos[&l]]).sum::<u64>()).min()
    };

    let mut eta = vec![0u64; n];
    let mut done = vec![false; n];
    let mut progressed = true;
    while progressed {
        progressed = false;
        for k in 0..n {
            if !done[k] && deps[k].iter().all(|l| done[pos[&l]]) {
                // Empty V̂ only arises for unverifiable conditionals, excluded by consistency.
                eta[k] = rhs(&eta, &cons[k]).ok_or(CrepError::InconsistentBeliefBase)? + 1;
                done[k] = true;
                progressed = true;
            }
        }
    }
    if done.iter().all(|&d| d) {
        return Ok(eta);
    }

    let cap = n as u64 * (completeness_threshold(n) + 1);
    let mut cur = vec![1u64; n];
    for _ in 0..cap {
        let next: Vec<u64> = cons
            .iter()
            .map(|c| rhs(&cur, c).map(|m| m + 1).ok_or(CrepError::InconsistentBeliefBase))
            .collect::<Result<_, _>>()?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(CrepError::CyclicDependency)
}

pub fn minimal_core_ocf(base: &BeliefBase) -> Result<RankingFunction, CrepError> {
    induced_ocf(base, &minimal_core_vector(base)?)
}

/// `2^|Δ|`, saturating.
pub fn completeness_threshold(size: usize) -> u64 {
    1u64.checked_shl(size as u32).unwrap_or(u64::MAX)
}

/// A reduced constraint over positions, checkable once its last variable is set.
struct PositionConstraint {
    own: usize,
    v: Vec<Vec<usize>>,
    f: Vec<Vec<usize>>,
}

impl PositionConstraint {
    fn holds(&self, eta: &[u64]) -> bool {
        let sum = |s: &Vec<usize>| s.iter().map(|&p| eta[p]).sum::<u64>();
        match self.v.iter().map(sum).min() {
            None => false,
            Some(mv) => match self.f.iter().map(sum).min() {
                None => true,
                Some(mf) => eta[self.own] + mf > mv,
            },
        }
    }
}

/// Calls `visit` on every solution in `{0,…,bound}^|Δ|` in lexicographic order.
pub fn for_each_solution(
    base: &BeliefBase,
    bound: u64,
    mut visit: impl FnMut(&[u64]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n = base.len();
    let labels: Vec<usize> = base.iter().map(|c| c.label).collect();
    let pos = |l: usize| labels.iter().position(|&x| x == l).expect("label of this base");
    let reduced = reduce(&constraint_sets(base));
    let mut checks: Vec<Vec<PositionConstraint>> = (0..n).map(|_| Vec::new()).collect();
    for (k, e) in reduced.entries.iter().enumerate() {
        let conv = |sets: &BTreeSet<LabelSet>| -> Vec<Vec<usize>> {
            sets.iter().map(|s| s.iter().map(pos).collect()).collect()
        };
        let pc = PositionConstraint { own: k, v: conv(&e.v), f: conv(&e.f) };
        let last = pc.v.iter().chain(&pc.f).flatten().copied().chain([k]).max().expect("own position");
        checks[last].push(pc);
    }
    let mut eta = vec![0u64; n];
    if n == 0 {
        return visit(&eta);
    }
    search(base, bound, &checks, &mut eta, 0, &mut visit)
}

fn search(
    base: &BeliefBase,
    bound: u64,
    checks: &[Vec<PositionConstraint>],
    eta: &mut Vec<u64>,
    depth: usize,
    visit: &mut impl FnMut(&[u64]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    for value in 0..=bound {
        eta[depth] = value;
        if !checks[depth].iter().all(|c| c.holds(&eta[..])) {
            continue;
        }
        if depth + 1 == eta.len() {
            if is_solution(base, eta).expect("length matches") {
                visit(eta)?;
            }
        } else {
            search(base, bound, checks, eta, depth + 1, visit)?;
        }
    }
    ControlFlow::Continue(())
}

pub fn enumerate_solutions(base: &BeliefBase, bound: u64) -> Vec<ImpactVector> {
    let mut out = Vec::new();
    let _ = for_each_solution(base, bound, |eta| {
        out.push(eta.to_vec());
        ControlFlow::Continue(())
    });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CInferenceResult {
    pub verdict: Verdict,
    pub bound: u64,
    pub threshold: u64,
    /// A solution with `κ_η(AB) ≥ κ_η(AB̄)`.
    pub countermodel: Option<ImpactVector>,
}

/// Skeptical c-inference `A ⊢^c_Δ B` over impacts up to `bound` (default `2^|Δ|`).
pub fn c_infer(base: &BeliefBase, a: &WorldSet, b: &WorldSet, bound: Option<u64>) -> Result<CInferenceResult, CrepError> {
    if !base.is_consistent() {
        return Err(CrepError::InconsistentBeliefBase);
    }
    let threshold = completeness_threshold(base.len());
    let bound = bound.unwrap_or(threshold);
    if a.is_empty() {
        return Ok(CInferenceResult { verdict: Verdict::True, bound, threshold, countermodel: None });
    }
    let (ab, abn) = (a & b, a - b);
    let mut countermodel = None;
    let _ = for_each_solution(base, bound, |eta| {
        let ranks = induced_ranks(base, eta).expect("length matches");
        if min_rank(&ranks, &ab) >= min_rank(&ranks, &abn) {
            countermodel = Some(eta.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let verdict = match (&countermodel, bound >= threshold) {
        (Some(_), _) => Verdict::False,
        (None, true) => Verdict::True,
        (None, false) => Verdict::Unknown,
    };
    Ok(CInferenceResult { verdict, bound, threshold, countermodel })
}

/// Skeptical c-inference over all solutions up to the completeness threshold.
pub struct CInferenceRelation {
    rank_vectors: Vec<Vec<u64>>,
}

impl CInferenceRelation {
    pub fn new(base: &BeliefBase) -> Result<CInferenceRelation, CrepError> {
        if !base.is_consistent() {
            return Err(CrepError::InconsistentBeliefBase);
        }
        let mut seen = BTreeSet::new();
        let _ = for_each_solution(base, completeness_threshold(base.len()), |eta| {
            seen.insert(induced_ranks(base, eta).expect("length matches"));
            ControlFlow::Continue(())
        });
        Ok(CInferenceRelation { rank_vectors: seen.into_iter().collect() })
    }

    pub fn num_models(&self) -> usize {
        self.rank_vectors.len()
    }
}

impl crate::operators::Relation for CInferenceRelation {
    fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool {
        if a.is_empty() {
            return true;
        }
        let (ab, abn) = (a & b, a - b);
        self.rank_vectors.iter().all(|r| min_rank(r, &ab) < min_rank(r, &abn))
    }
}

/// Assigns an impact vector to each base.
pub trait SelectionStrategy {
    fn name(&self) -> String;
    fn pick(&self, base: &BeliefBase) -> Result<ImpactVector, CrepError>;

    /// The induced OCF of a verified pick.
    fn ocf(&self, base: &BeliefBase) -> Result<RankingFunction, CrepError> {
        let eta = self.pick(base)?;
        if !is_solution(base, &eta)? {
            return Err(CrepError::StrategyReturnedNonSolution(self.name()));
        }
        induced_ocf(base, &eta)
    }
}

/// `σ^mc`: the minimal core vector.
pub struct MinimalCore;

impl SelectionStrategy for MinimalCore {
    fn name(&self) -> String {
        "mc".into()
    }

    fn pick(&self, base: &BeliefBase) -> Result<ImpactVector, CrepError> {
        minimal_core_vector(base)
    }
}

/// The lexicographically first solution up to `2^|Δ|`.
pub struct LexFirst;

impl SelectionStrategy for LexFirst {
    fn name(&self) -> String {
        "first".into()
    }

    fn pick(&self, base: &BeliefBase) -> Result<ImpactVector, CrepError> {
        if !base.is_consistent() {
            return Err(CrepError::InconsistentBeliefBase);
        }
        let mut found = None;
        let _ = for_each_solution(base, completeness_threshold(base.len()), |eta| {
            found = Some(eta.to_vec());
            ControlFlow::Break(())
        });
        found.ok_or(CrepError::InconsistentBeliefBase)
    }
}

/// Strategies selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Mc,
    First,
}

impl Strategy {
    pub fn parse(name: &str) -> Option<Strategy> {
        match name {
            "mc" => Some(Strategy::Mc),
            "first" => Some(Strategy::First),
            _ => None,
        }
    }

    fn inner(&self) -> &dyn SelectionStrategy {
        match self {
            Strategy::Mc => &MinimalCore,
            Strategy::First => &LexFirst,
        }
    }
}

impl SelectionStrategy for Strategy {
    fn name(&self) -> String {
        self.inner().name()
    }

    fn pick(&self, base: &BeliefBase) -> Result<ImpactVector, CrepError> {
        self.inner().pick(base)
    }
}

pub fn strategy_infer(
    base: &BeliefBase,
    sigma: &dyn SelectionStrategy,
    a: &WorldSet,
    b: &WorldSet,
) -> Result<bool, CrepError> {
    Ok(sigma.ocf(base)?.infer_sets(a, b))
}

pub fn ccore_infer(base: &BeliefBase, a: &WorldSet, b: &WorldSet) -> Result<bool, CrepError> {
    strategy_infer(base, &MinimalCore, a, b)
}

/// `η|_{sub}`: the impacts of the conditionals of `sub`.
pub fn project(base: &BeliefBase, eta: &[u64], sub: LabelSet) -> ImpactVector {
    base.iter().zip(eta).filter(|(c, _)| sub.contains(c.label)).map(|(_, &e)| e).collect()
}

/// `σ(Δ_i) = σ(Δ)|_{Δ_i}` for both sides.
pub fn check_ip_cspg(sigma: &dyn SelectionStrategy, base: &BeliefBase, s: &Splitting) -> Result<bool, CrepError> {
    if !s.is_generalized_safe {
        return Err(CrepError::NotGeneralizedSafe);
    }
    let whole = sigma.pick(base)?;
    for side in [1, 2] {
        let di = s.delta(side);
        if sigma.pick(&base.subbase(di))? != project(base, &whole, di) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `η ↦ (η|_{Δ1}, η|_{Δ2}, η|_{Δ3})`.
pub fn split_solution(
    base: &BeliefBase,
    s: &Splitting,
    eta: &[u64],
) -> Result<(ImpactVector, ImpactVector, ImpactVector), CrepError> {
    if !s.is_generalized_safe {
        return Err(CrepError::NotGeneralizedSafe);
    }
    check_length(base, eta)?;
    Ok((project(base, eta, s.delta1), project(base, eta, s.delta2), project(base, eta, s.delta3)))
}

/// The vector on `Δ` agreeing with `eta1` on `Δ1` and `eta2` on `Δ2`.
pub fn compose_solution(base: &BeliefBase, s: &Splitting, eta1: &[u64], eta2: &[u64]) -> Result<ImpactVector, CrepError> {
    if !s.is_generalized_safe {
        return Err(CrepError::NotGeneralizedSafe);
    }
    check_length(&base.subbase(s.delta1), eta1)?;
    check_length(&base.subbase(s.delta2), eta2)?;
    let (d1, d2) = (base.subbase(s.delta1), base.subbase(s.delta2));
    base.iter()
        .map(|c| {
            let x = d1.position(c.label).map(|p| eta1[p]);
            let y = d2.position(c.label).map(|p| eta2[p]);
            match (x, y) {
                (Some(x), Some(y)) if x != y => Err(CrepError::MismatchedDelta3Impacts),
                (Some(x), _) => Ok(x),
                (None, Some(y)) => Ok(y),
                (None, None) => unreachable!("a splitting covers the base"),
            }
        })
        .collect()
}

/// For `eta_i ∈ Sol(Δ_side)`, a solution of the other side agreeing on `Δ3`.
pub fn match_delta3(base: &BeliefBase, s: &Splitting, side: usize, eta_i: &[u64], bound: u64) -> Option<ImpactVector> {
    let own = base.subbase(s.delta(side));
    let other = base.subbase(s.delta(3 - side));
    let target = project(&own, eta_i, s.delta3);
    let mut found = None;
    let _ = for_each_solution(&other, bound, |eta| {
        if project(&other, eta, s.delta3) == target {
            found = Some(eta.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// `κ_η(A)` of a world set.
pub fn rank_under(base: &BeliefBase, eta: &[u64], set: &WorldSet) -> Result<Rank, CrepError> {
    Ok(min_rank(&induced_ranks(base, eta)?, set))
}
