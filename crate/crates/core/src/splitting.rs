//! Conditional syntax splittings: induced subbases, safety and taxonomy.

use serde::Serialize;
use thiserror::Error;

use crate::conditionals::{BeliefBase, LabelSet};
use crate::logic::AtomSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplittingError {
    #[error("(Σ1, Σ2, Σ3) is not a partition of the signature")]
    InvalidPartition,
    #[error("the partition does not induce a splitting")]
    NotASplitting,
    #[error("the splitting is not generalized safe")]
    NotGeneralizedSafe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SimpleKinds {
    pub trivial: bool,
    pub set_empty: bool,
    pub sig_empty: bool,
}

impl SimpleKinds {
    pub fn any(&self) -> bool {
        self.trivial || self.set_empty || self.sig_empty
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.trivial {
            v.push("trivial");
        }
        if self.set_empty {
            v.push("setEmpty");
        }
        if self.sig_empty {
            v.push("sigEmpty");
        }
        v
    }
}

/// A partition `(Σ1, Σ2, Σ3)` with its induced subbases and classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub sigma1: AtomSet,
    pub sigma2: AtomSet,
    pub sigma3: AtomSet,
    pub delta1: LabelSet,
    pub delta2: LabelSet,
    pub delta3: LabelSet,
    pub is_splitting: bool,
    pub is_safe: bool,
    pub is_generalized_safe: bool,
    pub is_genuine: bool,
    pub simple: SimpleKinds,
}

impl Splitting {
    pub fn delta1_minus3(&self) -> LabelSet {
        self.delta1.difference(self.delta3)
    }

    pub fn delta2_minus3(&self) -> LabelSet {
        self.delta2.difference(self.delta3)
    }

    /// `Σ_i` for side 1 or 2.
    pub fn sigma(&self, side: usize) -> AtomSet {
        if side == 1 {
            self.sigma1
        } else {
            self.sigma2
        }
    }

    /// `Δ_i` for side 1 or 2.
    pub fn delta(&self, side: usize) -> LabelSet {
        if side == 1 {
            self.delta1
        } else {
            self.delta2
        }
    }

    /// The same splitting with sides exchanged.
    pub fn swapped(&self) -> Splitting {
        Splitting {
            sigma1: self.sigma2,
            sigma2: self.sigma1,
            delta1: self.delta2,
            delta2: self.delta1,
            ..self.clone()
        }
    }

    pub fn to_json(&self, base: &BeliefBase) -> serde_json::Value {
        let sig = base.signature();
        serde_json::json!({
            "sigma1": sig.names(self.sigma1),
            "sigma2": sig.names(self.sigma2),
            "sigma3": sig.names(self.sigma3),
            "delta1": self.delta1.names(),
            "delta2": self.delta2.names(),
            "delta3": self.delta3.names(),
            "splitting": self.is_splitting,
            "safe": self.is_safe,
            "generalized_safe": self.is_generalized_safe,
            "genuine": self.is_genuine,
            "simple": self.simple.names(),
        })
    }
}

/// Conditionals all of whose atoms lie in `theta`.
pub fn language_members(base: &BeliefBase, theta: AtomSet) -> LabelSet {
    LabelSet::from_labels(base.iter().filter(|c| c.atoms.is_subset(theta)).map(|c| c.label))
}

/// Every world over `own ∪ Σ3` extends over `other` without falsifying `target`.
fn extends_everywhere(base: &BeliefBase, own_and_3: AtomSet, other: AtomSet, target: LabelSet) -> bool {
    own_and_3.assignments().all(|w| {
        other
            .assignments()
            .any(|e| base.falsified(w | e).is_disjoint(target))
    })
}

pub fn induce(base: &BeliefBase, sigma1: AtomSet, sigma2: AtomSet, sigma3: AtomSet) -> Result<Splitting, SplittingError> {
    let all = base.signature().all();
    if !sigma1.is_disjoint(sigma2)
        || !sigma1.is_disjoint(sigma3)
        || !sigma2.is_disjoint(sigma3)
        || sigma1.union(sigma2).union(sigma3) != all
    {
        return Err(SplittingError::InvalidPartition);
    }
    let delta1 = language_members(base, sigma1.union(sigma3));
    let delta2 = language_members(base, sigma2.union(sigma3));
    let delta3 = delta1.intersection(delta2);
    let is_splitting = delta1.union(delta2) == base.labels();
    let mut s = Splitting {
        sigma1,
        sigma2,
        sigma3,
        delta1,
        delta2,
        delta3,
        is_splitting,
        is_safe: false,
        is_generalized_safe: false,
        is_genuine: false,
        simple: SimpleKinds::default(),
    };
    if is_splitting {
        s.is_safe = safety(base, &s, false);
        s.is_generalized_safe = safety(base, &s, true);
        s.is_genuine = !s.delta1_minus3().is_empty() && !s.delta2_minus3().is_empty();
        s.simple = simple_kinds(base, &s);
    }
    Ok(s)
}

fn safety(base: &BeliefBase, s: &Splitting, generalized: bool) -> bool {
    let (t1, t2) = if generalized { (s.delta1_minus3(), s.delta2_minus3()) } else { (s.delta1, s.delta2) };
    extends_everywhere(base, s.sigma1.union(s.sigma3), s.sigma2, t2)
        && extends_everywhere(base, s.sigma2.union(s.sigma3), s.sigma1, t1)
}

fn simple_kinds(base: &BeliefBase, s: &Splitting) -> SimpleKinds {
    let all = base.signature().all();
    let everything = base.labels();
    let trivial = (s.delta1 == everything && s.delta2.is_empty() && s.sigma1 == all)
        || (s.delta2 == everything && s.delta1.is_empty() && s.sigma2 == all)
        || (s.delta1 == everything && s.delta2 == everything && s.sigma3 == all);
    SimpleKinds {
        trivial,
        set_empty: s.delta1.is_empty() || s.delta2.is_empty(),
        sig_empty: s.sigma1.is_empty() || s.sigma2.is_empty(),
    }
}

pub fn is_safe(s: &Splitting) -> Result<bool, SplittingError> {
    if !s.is_splitting {
        return Err(SplittingError::NotASplitting);
    }
    Ok(s.is_safe)
}

pub fn is_generalized_safe(s: &Splitting) -> Result<bool, SplittingError> {
    if !s.is_splitting {
        return Err(SplittingError::NotASplitting);
    }
    Ok(s.is_generalized_safe)
}

pub fn is_genuine(s: &Splitting) -> Result<bool, SplittingError> {
    if !s.is_splitting {
        return Err(SplittingError::NotASplitting);
    }
    Ok(s.is_genuine)
}

/// All splittings over the `3^n` atom assignments, in assignment order.
///
/// With `dedup`, each unordered pair is kept in the orientation with
/// `Σ1 ≥ Σ2` as bitmasks.
pub fn enumerate_splittings(base: &BeliefBase, dedup: bool) -> Vec<Splitting> {
    let n = base.signature().len();
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let (mut s1, mut s2, mut s3) = (AtomSet::EMPTY, AtomSet::EMPTY, AtomSet::EMPTY);
        let mut c = code;
        for atom in 0..n {
            match c % 3 {
                0 => s1.insert(atom),
                1 => s2.insert(atom),
                _ => s3.insert(atom),
            }
            c /= 3;
        }
        if dedup && s1.0 < s2.0 {
            continue;
        }
        let s = induce(base, s1, s2, s3).expect("assignment is a partition");
        if s.is_splitting {
            out.push(s);
        }
    }
    out
}

/// Census counts `(total, safe, generalized safe, genuine)`.
pub fn census(splittings: &[Splitting]) -> (usize, usize, usize, usize) {
    (
        splittings.len(),
        splittings.iter().filter(|s| s.is_safe).count(),
        splittings.iter().filter(|s| s.is_generalized_safe).count(),
        splittings.iter().filter(|s| s.is_genuine).count(),
    )
}

/// Whether some splitting is both safe and genuine.
pub fn has_genuine_safe(base: &BeliefBase) -> bool {
    enumerate_splittings(base, true).iter().any(|s| s.is_safe && s.is_genuine)
}
