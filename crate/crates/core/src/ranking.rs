//! Ordinal conditional functions over the worlds of a signature.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditionals::{BeliefBase, Conditional};
use crate::logic::{compress, models, AtomSet, Formula, LogicError, Signature, WorldSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankingError {
    #[error("expected {expected} ranks, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("no world has rank 0")]
    NotNormalized,
    #[error("conditional rank undefined: antecedent unsatisfiable")]
    UndefinedRank,
    #[error("subsignatures are not pairwise disjoint")]
    NonDisjointSubsignatures,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Rank of a formula: finite, or `Infinite` for unsatisfiable formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(r) => write!(f, "{r}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

/// `κ(A)` from per-world ranks.
pub fn min_rank(ranks: &[u64], set: &WorldSet) -> Rank {
    set.iter().map(|w| ranks[w as usize]).min().map_or(Rank::Infinite, Rank::Finite)
}

/// An OCF with finite ranks and at least one rank-0 world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingFunction {
    signature: Arc<Signature>,
    ranks: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct OcfJson {
    signature: Vec<String>,
    ranks: Vec<u64>,
}

impl RankingFunction {
    pub fn new(signature: Signature, ranks: Vec<u64>) -> Result<RankingFunction, RankingError> {
        if ranks.len() != signature.num_worlds() {
            return Err(RankingError::WrongLength { expected: signature.num_worlds(), got: ranks.len() });
        }
        if !ranks.contains(&0) {
            return Err(RankingError::NotNormalized);
        }
        Ok(RankingFunction { signature: Arc::new(signature), ranks })
    }

    /// The OCF assigning 0 everywhere.
    pub fn uniform(signature: Signature) -> RankingFunction {
        let n = signature.num_worlds();
        RankingFunction { signature: Arc::new(signature), ranks: vec![0; n] }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn world_rank(&self, world: u32) -> u64 {
        self.ranks[world as usize]
    }

    pub fn rank_set(&self, set: &WorldSet) -> Rank {
        min_rank(&self.ranks, set)
    }

    pub fn rank_formula(&self, f: &Formula) -> Rank {
        self.rank_set(&models(f, &self.signature))
    }

    /// `κ(B|A) = κ(AB) − κ(A)`.
    pub fn conditional_rank(&self, c: &Conditional) -> Result<u64, RankingError> {
        let a = &c.ver | &c.fal;
        match (self.rank_set(&c.ver), self.rank_set(&a)) {
            (_, Rank::Infinite) => Err(RankingError::UndefinedRank),
            (Rank::Infinite, _) => Err(RankingError::UndefinedRank),
            (Rank::Finite(ab), Rank::Finite(a)) => Ok(ab - a),
        }
    }

    /// `κ(AB) < κ(AB̄)`.
    pub fn accepts(&self, c: &Conditional) -> bool {
        self.rank_set(&c.ver) < self.rank_set(&c.fal)
    }

    pub fn accepts_base(&self, base: &BeliefBase) -> bool {
        base.iter().all(|c| self.accepts(c))
    }

    /// `A ⊢_κ B` on model sets.
    pub fn infer_sets(&self, a: &WorldSet, b: &WorldSet) -> bool {
        a.is_empty() || self.rank_set(&(a & b)) < self.rank_set(&(a - b))
    }

    pub fn infer(&self, a: &Formula, b: &Formula) -> bool {
        self.infer_sets(&models(a, &self.signature), &models(b, &self.signature))
    }

    /// `κ|_Θ` over the subsignature `theta`.
    pub fn marginal(&self, theta: AtomSet) -> Result<RankingFunction, RankingError> {
        let sub = self.signature.restrict(theta)?;
        let mut ranks = vec![u64::MAX; sub.num_worlds()];
        for (w, &r) in self.ranks.iter().enumerate() {
            let k = compress(w as u32, theta) as usize;
            ranks[k] = ranks[k].min(r);
        }
        RankingFunction::new(sub, ranks)
    }

    /// Ranks of the partial worlds over `mask`, indexed by masked world index.
    fn partial_ranks(&self, mask: AtomSet) -> Vec<u64> {
        let mut out = vec![u64::MAX; self.ranks.len()];
        for (w, &r) in self.ranks.iter().enumerate() {
            let k = w & mask.0 as usize;
            out[k] = out[k].min(r);
        }
        out
    }

    /// `Ind_κ(s1; s2 | s3)` via `κ(ω¹ω²ω³) + κ(ω³) = κ(ω¹ω³) + κ(ω²ω³)`.
    pub fn kappa_independent(&self, s1: AtomSet, s2: AtomSet, s3: AtomSet) -> Result<bool, RankingError> {
        if !s1.is_disjoint(s2) || !s1.is_disjoint(s3) || !s2.is_disjoint(s3) {
            return Err(RankingError::NonDisjointSubsignatures);
        }
        if !s1.union(s2).union(s3).is_subset(self.signature.all()) {
            return Err(LogicError::AtomNotInSignature.into());
        }
        let all = s1.union(s2).union(s3);
        let r123 = self.partial_ranks(all);
        let r13 = self.partial_ranks(s1.union(s3));
        let r23 = self.partial_ranks(s2.union(s3));
        let r3 = self.partial_ranks(s3);
        for w in all.assignments() {
            let w = w as usize;
            let lhs = r123[w] + r3[w & s3.0 as usize];
            let rhs = r13[w & s1.union(s3).0 as usize] + r23[w & s2.union(s3).0 as usize];
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(OcfJson { signature: self.signature.atoms().to_vec(), ranks: self.ranks.clone() })
            .expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<RankingFunction, RankingError> {
        let raw: OcfJson = serde_json::from_value(value.clone())
            .map_err(|e| LogicError::Syntax { position: 0, expected: e.to_string() })?;
        RankingFunction::new(Signature::new(&raw.signature)?, raw.ranks)
    }
}
