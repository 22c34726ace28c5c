//! Inductive inference operators built on the tolerance partition.

use std::cmp::Ordering;

use thiserror::Error;

use crate::conditionals::{BeliefBase, LabelSet, TolerancePartition};
use crate::crep::{self, CInferenceRelation, CrepError, MinimalCore, SelectionStrategy};
use crate::logic::{models, Formula, WorldSet};
use crate::ranking::{min_rank, RankingFunction};
use crate::splitting::has_genuine_safe;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("the belief base is inconsistent")]
    InconsistentBeliefBase,
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error(transparent)]
    Crep(CrepError),
}

impl From<CrepError> for OperatorError {
    fn from(e: CrepError) -> OperatorError {
        match e {
            CrepError::InconsistentBeliefBase => OperatorError::InconsistentBeliefBase,
            other => OperatorError::Crep(other),
        }
    }
}

/// The inference relation `⊢_Δ` of one operator on one base.
pub trait Relation {
    /// `A ⊢_Δ B` on model sets over the base's signature.
    fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool;
}

/// An inductive inference operator `Δ ↦ ⊢_Δ`.
pub trait InferenceOperator {
    fn name(&self) -> String;
    fn build(&self, base: &BeliefBase) -> Result<Box<dyn Relation>, OperatorError>;
}

impl Relation for RankingFunction {
    fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool {
        RankingFunction::infer_sets(self, a, b)
    }
}

fn partition(base: &BeliefBase) -> Result<TolerancePartition, OperatorError> {
    base.tolerance_partition().ok_or(OperatorError::InconsistentBeliefBase)
}

/// `κ^z(ω) = 0` if nothing is falsified, else one more than the highest falsified level.
pub fn system_z_ocf(base: &BeliefBase) -> Result<RankingFunction, OperatorError> {
    let op = partition(base)?;
    let ranks = (0..base.num_worlds() as u32)
        .map(|w| op.top_falsified_level(base, w).map_or(0, |j| j as u64 + 1))
        .collect();
    Ok(RankingFunction::new(base.signature().clone(), ranks).expect("a tolerated world has rank 0"))
}

pub fn system_z_infer(base: &BeliefBase, a: &Formula, b: &Formula) -> Result<bool, OperatorError> {
    Ok(system_z_ocf(base)?.infer(a, b))
}

/// Lexicographic inference; keys list the ξ counts from the highest level down.
pub struct Lexicographic {
    keys: Vec<Vec<usize>>,
}

impl Lexicographic {
    pub fn new(base: &BeliefBase) -> Result<Lexicographic, OperatorError> {
        let op = partition(base)?;
        let keys = (0..base.num_worlds() as u32)
            .map(|w| {
                let mut v = op.xi_counts(base, w);
                v.reverse();
                v
            })
            .collect();
        Ok(Lexicographic { keys })
    }

    /// The vector `(|ξ^0(ω)|, …, |ξ^k(ω)|)`.
    pub fn vector(&self, world: u32) -> Vec<usize> {
        let mut v = self.keys[world as usize].clone();
        v.reverse();
        v
    }

    /// `Less` iff `w1 ≺ w2`.
    pub fn compare(&self, w1: u32, w2: u32) -> Ordering {
        self.keys[w1 as usize].cmp(&self.keys[w2 as usize])
    }

    fn min_key(&self, set: &WorldSet) -> Option<&Vec<usize>> {
        set.iter().map(|w| &self.keys[w as usize]).min()
    }
}

impl Relation for Lexicographic {
    fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool {
        let abn = a - b;
        if abn.is_empty() {
            return true;
        }
        match self.min_key(&(a & b)) {
            None => false,
            Some(k) => k < self.min_key(&abn).expect("nonempty"),
        }
    }
}

pub fn lex_compare(base: &BeliefBase, w1: u32, w2: u32) -> Result<Ordering, OperatorError> {
    Ok(Lexicographic::new(base)?.compare(w1, w2))
}

pub fn lex_infer(base: &BeliefBase, a: &Formula, b: &Formula) -> Result<bool, OperatorError> {
    let sig = base.signature();
    Ok(Lexicographic::new(base)?.infer_sets(&models(a, sig), &models(b, sig)))
}

/// Worlds up to this many atoms get a precomputed dominance table.
const W_TABLE_ATOMS: usize = 8;

/// System W: the preferred structure `<^w` on worlds.
pub struct SystemW {
    /// Per world, `ξ^l` from the highest level down.
    xi: Vec<Vec<LabelSet>>,
    /// Per world `ω′`, the worlds `ω` with `ω <^w ω′`.
    dominators: Option<Vec<WorldSet>>,
}

impl SystemW {
    pub fn new(base: &BeliefBase) -> Result<SystemW, OperatorError> {
        let op = partition(base)?;
        let n = base.num_worlds();
        let xi = (0..n as u32)
            .map(|w| (0..op.num_levels()).rev().map(|l| op.xi_level(base, l, w)).collect())
            .collect();
        let mut sw = SystemW { xi, dominators: None };
        if base.signature().len() <= W_TABLE_ATOMS {
            let table = (0..n as u32)
                .map(|w2| WorldSet::from_fn(n, |w1| sw.preferred(w1, w2)))
                .collect();
            sw.dominators = Some(table);
        }
        Ok(sw)
    }

    /// `w1 <^w w2`.
    pub fn preferred(&self, w1: u32, w2: u32) -> bool {
        let (x, y) = (&self.xi[w1 as usize], &self.xi[w2 as usize]);
        for (a, b) in x.iter().zip(y) {
            if a != b {
                return a.is_subset(*b);
            }
        }
        false
    }

    /// Some world of `candidates` is preferred to `w2`.
    pub fn dominated(&self, w2: u32, candidates: &WorldSet) -> bool {
        match &self.dominators {
            Some(t) => t[w2 as usize].intersects(candidates),
            None => candidates.iter().any(|w1| self.preferred(w1, w2)),
        }
    }
}

impl Relation for SystemW {
    fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool {
        let ab = a & b;
        (a - b).iter().all(|w2| self.dominated(w2, &ab))
    }
}

pub fn w_preferred(base: &BeliefBase, w1: u32, w2: u32) -> Result<bool, OperatorError> {
    Ok(SystemW::new(base)?.preferred(w1, w2))
}

pub fn w_infer(base: &BeliefBase, a: &Formula, b: &Formula) -> Result<bool, OperatorError> {
    let sig = base.signature();
    Ok(SystemW::new(base)?.infer_sets(&models(a, sig), &models(b, sig)))
}

/// System W on bases with a genuine safe splitting, System Z otherwise.
pub enum Zw {
    W(SystemW),
    Z(RankingFunction),
}

impl Zw {
    pub fn new(base: &BeliefBase) -> Result<Zw, OperatorError> {
        partition(base)?;
        if has_genuine_safe(base) {
            Ok(Zw::W(SystemW::new(base)?))
        } else {
            Ok(Zw::Z(system_z_ocf(base)?))
        }
    }

    pub fn uses_w(&self) -> bool {
        matches!(self, Zw::W(_))
    }
}

impl Relation for Zw {
    fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool {
        match self {
            Zw::W(w) => w.infer_sets(a, b),
            Zw::Z(k) => k.infer_sets(a, b),
        }
    }
}

pub fn zw_infer(base: &BeliefBase, a: &Formula, b: &Formula) -> Result<bool, OperatorError> {
    let sig = base.signature();
    Ok(Zw::new(base)?.infer_sets(&models(a, sig), &models(b, sig)))
}

/// Operators selectable by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operator {
    SystemZ,
    Lex,
    SystemW,
    Zw,
    CCore,
    /// Skeptical c-inference with impacts up to the completeness threshold.
    CInference,
    Strategy(crep::Strategy),
}

impl Operator {
    pub const NAMES: [&'static str; 8] =
        ["systemz", "lex", "systemw", "zw", "ccore", "cinf", "crep:mc", "crep:first"];

    pub fn parse(name: &str) -> Result<Operator, OperatorError> {
        match name {
            "systemz" => Ok(Operator::SystemZ),
            "lex" => Ok(Operator::Lex),
            "systemw" => Ok(Operator::SystemW),
            "zw" => Ok(Operator::Zw),
            "ccore" => Ok(Operator::CCore),
            "cinf" => Ok(Operator::CInference),
            other => match other.strip_prefix("crep:").and_then(crep::Strategy::parse) {
                Some(s) => Ok(Operator::Strategy(s)),
                None => Err(OperatorError::UnknownOperator(name.to_string())),
            },
        }
    }

    pub fn infer(&self, base: &BeliefBase, a: &Formula, b: &Formula) -> Result<bool, OperatorError> {
        let sig = base.signature();
        Ok(self.build(base)?.infer_sets(&models(a, sig), &models(b, sig)))
    }
}

impl InferenceOperator for Operator {
    fn name(&self) -> String {
        match self {
            Operator::SystemZ => "systemz".into(),
            Operator::Lex => "lex".into(),
            Operator::SystemW => "systemw".into(),
            Operator::Zw => "zw".into(),
            Operator::CCore => "ccore".into(),
            Operator::CInference => "cinf".into(),
            Operator::Strategy(s) => format!("crep:{}", s.name()),
        }
    }

    fn build(&self, base: &BeliefBase) -> Result<Box<dyn Relation>, OperatorError> {
        match self {
            Operator::SystemZ => Ok(Box::new(system_z_ocf(base)?)),
            Operator::Lex => Ok(Box::new(Lexicographic::new(base)?)),
            Operator::SystemW => Ok(Box::new(SystemW::new(base)?)),
            Operator::Zw => Ok(Box::new(Zw::new(base)?)),
            Operator::CCore => Ok(Box::new(MinimalCore.ocf(base)?)),
            Operator::CInference => Ok(Box::new(CInferenceRelation::new(base)?)),
            Operator::Strategy(s) => Ok(Box::new(s.ocf(base)?)),
        }
    }
}

/// `κ(ω)` minimum over a set, used by reports.
pub fn rank_of(k: &RankingFunction, set: &WorldSet) -> crate::ranking::Rank {
    min_rank(k.ranks(), set)
}
