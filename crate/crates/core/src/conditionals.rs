//! Conditionals, belief bases, tolerance and the ordered tolerance partition.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::logic::{models, AtomSet, Formula, Signature, WorldSet};

/// Labels are ordinals below this bound.
pub const MAX_CONDITIONALS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("conditional {second} duplicates conditional {first}")]
    DuplicateConditional { first: usize, second: usize },
    #[error("belief bases hold at most {MAX_CONDITIONALS} conditionals")]
    TooManyConditionals,
    #[error("formula mentions an atom outside the signature")]
    AtomOutsideSignature,
    #[error("label {0} is not in the belief base")]
    UnknownLabel(usize),
}

/// Set of conditional labels, as a bitmask.
///
/// Ordered by cardinality first, then by the sorted label sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn singleton(label: usize) -> LabelSet {
        LabelSet(1 << label)
    }

    pub fn from_labels(labels: impl IntoIterator<Item = usize>) -> LabelSet {
        LabelSet(labels.into_iter().fold(0, |acc, l| acc | 1 << l))
    }

    pub fn first_n(n: usize) -> LabelSet {
        if n >= 64 {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, label: usize) -> bool {
        self.0 >> label & 1 == 1
    }

    pub fn insert(&mut self, label: usize) {
        self.0 |= 1 << label;
    }

    pub fn remove(&mut self, label: usize) {
        self.0 &= !(1 << label);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: LabelSet) -> LabelSet {
        LabelSet(self.0 | o.0)
    }

    pub fn intersection(self, o: LabelSet) -> LabelSet {
        LabelSet(self.0 & o.0)
    }

    pub fn difference(self, o: LabelSet) -> LabelSet {
        LabelSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: LabelSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: LabelSet) -> bool {
        self.0 & o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let t = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(t)
        })
    }

    /// Textual label names, `d1` for label 0.
    pub fn names(self) -> Vec<String> {
        self.iter().map(label_name).collect()
    }
}

impl Ord for LabelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for LabelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

pub fn label_name(label: usize) -> String {
    format!("d{}", label + 1)
}

/// How a world relates to a conditional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorldClass {
    Verifies,
    Falsifies,
    NotApplicable,
}

/// A conditional `(B|A)` with its label and cached verification sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditional {
    pub label: usize,
    pub consequent: Formula,
    pub antecedent: Formula,
    pub ver: WorldSet,
    pub fal: WorldSet,
    pub atoms: AtomSet,
}

impl Conditional {
    pub fn new(label: usize, consequent: Formula, antecedent: Formula, sig: &Signature) -> Conditional {
        let a = models(&antecedent, sig);
        let b = models(&consequent, sig);
        let ver = &a & &b;
        let fal = &a - &b;
        let atoms = consequent.atoms().union(antecedent.atoms());
        Conditional { label, consequent, antecedent, ver, fal, atoms }
    }

    pub fn name(&self) -> String {
        label_name(self.label)
    }

    pub fn classify(&self, world: u32) -> WorldClass {
        if self.ver.contains(world) {
            WorldClass::Verifies
        } else if self.fal.contains(world) {
            WorldClass::Falsifies
        } else {
            WorldClass::NotApplicable
        }
    }

    pub fn self_fulfilling(&self) -> bool {
        self.fal.is_empty()
    }

    /// Same verifying and falsifying worlds.
    pub fn semantically_equal(&self, other: &Conditional) -> bool {
        self.ver == other.ver && self.fal == other.fal
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ConditionalDisplay<'a> {
        ConditionalDisplay { c: self, sig }
    }
}

pub struct ConditionalDisplay<'a> {
    c: &'a Conditional,
    sig: &'a Signature,
}

impl fmt::Display for ConditionalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.c.consequent.display(self.sig), self.c.antecedent.display(self.sig))
    }
}

#[derive(Debug)]
struct Tables {
    /// Per world, the labels of all conditionals it falsifies.
    falsified: Vec<LabelSet>,
    /// Per world, the labels of all conditionals it verifies.
    verified: Vec<LabelSet>,
}

/// A finite set of labelled conditionals over a signature.
///
/// Subbases share the conditional store and world tables of the base they
/// were taken from and keep the original labels.
#[derive(Debug, Clone)]
pub struct BeliefBase {
    signature: Arc<Signature>,
    store: Arc<Vec<Conditional>>,
    tables: Arc<Tables>,
    members: LabelSet,
}

impl PartialEq for BeliefBase {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.members == other.members
            && self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }
}

impl BeliefBase {
    /// Labels follow the order of `pairs`, each given as (consequent, antecedent).
    pub fn new(signature: Signature, pairs: Vec<(Formula, Formula)>) -> Result<BeliefBase, BaseError> {
        if pairs.len() > MAX_CONDITIONALS {
            return Err(BaseError::TooManyConditionals);
        }
        let all = signature.all();
        let mut store: Vec<Conditional> = Vec::with_capacity(pairs.len());
        for (label, (b, a)) in pairs.into_iter().enumerate() {
            if !b.atoms().union(a.atoms()).is_subset(all) {
                return Err(BaseError::AtomOutsideSignature);
            }
            if let Some(prev) = store.iter().find(|c| c.consequent == b && c.antecedent == a) {
                return Err(BaseError::DuplicateConditional { first: prev.label, second: label });
            }
            store.push(Conditional::new(label, b, a, &signature));
        }
        let n = signature.num_worlds();
        let mut falsified = vec![LabelSet::EMPTY; n];
        let mut verified = vec![LabelSet::EMPTY; n];
        for c in &store {
            for w in c.fal.iter() {
                falsified[w as usize].insert(c.label);
            }
            for w in c.ver.iter() {
                verified[w as usize].insert(c.label);
            }
        }
        let members = LabelSet::first_n(store.len());
        Ok(BeliefBase {
            signature: Arc::new(signature),
            store: Arc::new(store),
            tables: Arc::new(Tables { falsified, verified }),
            members,
        })
    }

    /// The base with no conditionals over `signature`.
    pub fn empty(signature: Signature) -> BeliefBase {
        BeliefBase::new(signature, Vec::new()).expect("empty base is valid")
    }

    /// The conditionals of `self` whose labels lie in `labels`.
    pub fn subbase(&self, labels: LabelSet) -> BeliefBase {
        BeliefBase { members: self.members.intersection(labels), ..self.clone() }
    }

    /// The base with no conditionals sharing this base's signature and tables.
    pub fn emptied(&self) -> BeliefBase {
        self.subbase(LabelSet::EMPTY)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn num_worlds(&self) -> usize {
        self.signature.num_worlds()
    }

    pub fn labels(&self) -> LabelSet {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Conditionals in label order.
    pub fn iter(&self) -> impl Iterator<Item = &Conditional> + '_ {
        self.members.iter().map(move |l| &self.store[l])
    }

    pub fn get(&self, label: usize) -> Option<&Conditional> {
        if self.members.contains(label) {
            self.store.get(label)
        } else {
            None
        }
    }

    /// Position of `label` in label order.
    pub fn position(&self, label: usize) -> Option<usize> {
        if self.members.contains(label) {
            Some(LabelSet(self.members.0 & ((1u64 << label) - 1)).len())
        } else {
            None
        }
    }

    /// Conditionals of this base falsified by `world`.
    pub fn falsified(&self, world: u32) -> LabelSet {
        self.tables.falsified[world as usize].intersection(self.members)
    }

    /// Conditionals of this base verified by `world`.
    pub fn verified(&self, world: u32) -> LabelSet {
        self.tables.verified[world as usize].intersection(self.members)
    }

    /// Labels of conditionals that are semantically equal to an earlier one.
    pub fn semantic_duplicates(&self) -> Vec<(usize, usize)> {
        let cs: Vec<&Conditional> = self.iter().collect();
        let mut out = Vec::new();
        for (j, c) in cs.iter().enumerate() {
            if let Some(prev) = cs[..j].iter().find(|p| p.semantically_equal(c)) {
                out.push((prev.label, c.label));
            }
        }
        out
    }

    /// A world verifying `c` and falsifying nothing of this base.
    pub fn tolerance_witness(&self, c: &Conditional) -> Option<u32> {
        c.ver.iter().find(|&w| self.falsified(w).is_empty())
    }

    pub fn tolerates(&self, c: &Conditional) -> bool {
        self.tolerance_witness(c).is_some()
    }

    /// `None` exactly when the base is inconsistent.
    pub fn tolerance_partition(&self) -> Option<TolerancePartition> {
        let mut rest = self.clone();
        let mut parts = Vec::new();
        while !rest.is_empty() {
            let layer = LabelSet::from_labels(rest.iter().filter(|c| rest.tolerates(c)).map(|c| c.label));
            if layer.is_empty() {
                return None;
            }
            parts.push(layer);
            rest = rest.subbase(rest.labels().difference(layer));
        }
        Some(TolerancePartition { parts })
    }

    pub fn is_consistent(&self) -> bool {
        self.tolerance_partition().is_some()
    }

    /// `ξ(ω)`: all falsified conditionals.
    pub fn xi_total(&self, world: u32) -> LabelSet {
        self.falsified(world)
    }

    /// Sorted display of a label set as conditionals.
    pub fn describe(&self, labels: LabelSet) -> Vec<String> {
        labels
            .iter()
            .filter_map(|l| self.store.get(l))
            .map(|c| c.display(&self.signature).to_string())
            .collect()
    }
}

/// The ordered partition `(Δ^0, …, Δ^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TolerancePartition {
    pub parts: Vec<LabelSet>,
}

impl TolerancePartition {
    pub fn num_levels(&self) -> usize {
        self.parts.len()
    }

    pub fn level_of(&self, label: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(label))
    }

    /// `ξ^l(ω)` of `base`, whose conditionals are partitioned by `self`.
    pub fn xi_level(&self, base: &BeliefBase, level: usize, world: u32) -> LabelSet {
        base.falsified(world).intersection(self.parts[level])
    }

    /// `(|ξ^0(ω)|, …, |ξ^k(ω)|)`.
    pub fn xi_counts(&self, base: &BeliefBase, world: u32) -> Vec<usize> {
        let f = base.falsified(world);
        self.parts.iter().map(|p| f.intersection(*p).len()).collect()
    }

    /// Highest level holding a conditional falsified by `world`.
    pub fn top_falsified_level(&self, base: &BeliefBase, world: u32) -> Option<usize> {
        let f = base.falsified(world);
        self.parts.iter().rposition(|p| !f.is_disjoint(*p))
    }
}
