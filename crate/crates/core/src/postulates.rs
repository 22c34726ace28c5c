//! Executable checks of (DI), (TV) and the splitting postulates.
//!
//! Formulas are quantified over semantic classes: every subset of the
//! worlds of a part, written as a DNF. Parts larger than [`FULL_FAMILY_CAP`]
//! fall back to conjunctions of literals and the report is marked restricted.
//! A satisfied report only means no counterexample exists in that family.

use serde::Serialize;
use thiserror::Error;

use crate::conditionals::BeliefBase;
use crate::logic::{compress, dnf, AtomSet, Formula, Signature, WorldSet};
use crate::operators::{InferenceOperator, OperatorError, Relation};
use crate::splitting::{enumerate_splittings, Splitting};

pub const FULL_FAMILY_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PostulateError {
    #[error("{atoms} atoms exceed the formula family cap of {cap}")]
    QuantificationDomainTooLarge { atoms: usize, cap: usize },
    #[error("the splitting is not generalized safe")]
    NotGeneralizedSafe,
    #[error("unknown postulate `{0}`")]
    UnknownPostulate(String),
    #[error("unknown scope `{0}`")]
    UnknownScope(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Formulas over a part with their model sets over the full signature.
#[derive(Debug, Clone)]
pub struct FormulaFamily {
    pub formulas: Vec<Formula>,
    pub models: Vec<WorldSet>,
    pub restricted: bool,
}

impl FormulaFamily {
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

/// One DNF per subset of `Ω(theta)`, in subset-code order.
pub fn canonical_formulas(sig: &Signature, theta: AtomSet, cap: usize) -> Result<Vec<Formula>, PostulateError> {
    Ok(canonical_family(sig, theta, cap)?.formulas)
}

fn canonical_family(sig: &Signature, theta: AtomSet, cap: usize) -> Result<FormulaFamily, PostulateError> {
    let m = theta.len();
    if m > cap {
        return Err(PostulateError::QuantificationDomainTooLarge { atoms: m, cap });
    }
    let universe = sig.num_worlds();
    let classes = 1u64 << (1u32 << m);
    let mut family = FormulaFamily { formulas: Vec::new(), models: Vec::new(), restricted: false };
    for code in 0..classes {
        let set = WorldSet::from_fn(universe, |w| code >> compress(w, theta) & 1 == 1);
        family.formulas.push(if set.is_empty() { Formula::Bot } else { dnf(&set, theta) });
        family.models.push(set);
    }
    Ok(family)
}

/// `⊥` and the `3^m` conjunctions of literals over `theta`.
pub fn literal_conjunctions(sig: &Signature, theta: AtomSet) -> FormulaFamily {
    let universe = sig.num_worlds();
    let atoms: Vec<usize> = theta.iter().collect();
    let mut family = FormulaFamily {
        formulas: vec![Formula::Bot],
        models: vec![WorldSet::empty(universe)],
        restricted: true,
    };
    for code in 0..3usize.pow(atoms.len() as u32) {
        let mut c = code;
        let mut lits = Vec::new();
        for &a in &atoms {
            match c % 3 {
                0 => {}
                1 => lits.push(Formula::literal(a, true)),
                _ => lits.push(Formula::literal(a, false)),
            }
            c /= 3;
        }
        let f = Formula::conj(lits);
        family.models.push(WorldSet::from_fn(universe, |w| f.eval(w)));
        family.formulas.push(f);
    }
    family
}

/// The canonical family when small enough, literal conjunctions otherwise.
pub fn formula_family(sig: &Signature, theta: AtomSet) -> FormulaFamily {
    canonical_family(sig, theta, FULL_FAMILY_CAP).unwrap_or_else(|_| literal_conjunctions(sig, theta))
}

/// Complete conjunctions over `theta`; `⊤` alone for the empty part.
pub fn complete_conjunctions(sig: &Signature, theta: AtomSet) -> FormulaFamily {
    let universe = sig.num_worlds();
    let mut family = FormulaFamily { formulas: Vec::new(), models: Vec::new(), restricted: false };
    for partial in theta.assignments() {
        let f = Formula::conj(theta.iter().map(|a| Formula::literal(a, partial >> a & 1 == 1)));
        family.models.push(WorldSet::from_fn(universe, |w| w & theta.0 == partial));
        family.formulas.push(f);
    }
    family
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Safe,
    Gensafe,
}

impl Scope {
    pub fn parse(name: &str) -> Result<Scope, PostulateError> {
        match name {
            "safe" => Ok(Scope::Safe),
            "gensafe" => Ok(Scope::Gensafe),
            other => Err(PostulateError::UnknownScope(other.to_string())),
        }
    }

    pub fn includes(&self, s: &Splitting) -> bool {
        match self {
            Scope::Safe => s.is_safe,
            Scope::Gensafe => s.is_generalized_safe,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scope::Safe => "safe",
            Scope::Gensafe => "gensafe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Postulate {
    CRelG,
    CIndG,
    CSynSplitG,
    DiTv,
}

impl Postulate {
    pub fn parse(name: &str) -> Result<Postulate, PostulateError> {
        match name {
            "crelg" => Ok(Postulate::CRelG),
            "cindg" => Ok(Postulate::CIndG),
            "csynsplitg" => Ok(Postulate::CSynSplitG),
            "ditv" => Ok(Postulate::DiTv),
            other => Err(PostulateError::UnknownPostulate(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Postulate::CRelG => "crelg",
            Postulate::CIndG => "cindg",
            Postulate::CSynSplitG => "csynsplitg",
            Postulate::DiTv => "ditv",
        }
    }
}

/// A counterexample; `lhs` and `rhs` are the two sides of the equivalence.
#[derive(Debug, Clone)]
pub struct Violation {
    pub postulate: &'static str,
    /// Index into the report's splittings, if any.
    pub splitting: Option<usize>,
    pub side: usize,
    pub a: Formula,
    pub b: Formula,
    pub d: Option<Formula>,
    pub e: Formula,
    pub lhs: bool,
    pub rhs: bool,
    pub a_models: WorldSet,
    pub b_models: WorldSet,
    pub d_models: Option<WorldSet>,
    pub e_models: WorldSet,
}

impl Violation {
    pub fn to_json(&self, sig: &Signature) -> serde_json::Value {
        serde_json::json!({
            "postulate": self.postulate,
            "splitting": self.splitting,
            "side": self.side,
            "A": self.a.display(sig).to_string(),
            "B": self.b.display(sig).to_string(),
            "D": self.d.as_ref().map(|d| d.display(sig).to_string()),
            "E": self.e.display(sig).to_string(),
            "lhs": self.lhs,
            "rhs": self.rhs,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "satisfied-at-scale")]
    SatisfiedAtScale,
    #[serde(rename = "violated")]
    Violated,
}

#[derive(Debug, Clone)]
pub struct PostulateReport {
    pub postulate: &'static str,
    pub operator: String,
    pub scope: Option<Scope>,
    pub splittings: Vec<Splitting>,
    pub queries: u64,
    pub restricted_family: bool,
    /// At most `max_witnesses` per splitting.
    pub violations: Vec<Violation>,
    pub violation_count: u64,
}

impl PostulateReport {
    fn new(postulate: &'static str, operator: String, scope: Option<Scope>) -> PostulateReport {
        PostulateReport {
            postulate,
            operator,
            scope,
            splittings: Vec::new(),
            queries: 0,
            restricted_family: false,
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    pub fn status(&self) -> Status {
        if self.violation_count == 0 {
            Status::SatisfiedAtScale
        } else {
            Status::Violated
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.violation_count == 0
    }

    /// Merges a single-splitting report as splitting `index`.
    fn absorb(&mut self, other: PostulateReport, index: usize) {
        self.queries += other.queries;
        self.restricted_family |= other.restricted_family;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations.into_iter().map(|mut v| {
            v.splitting = Some(index);
            v
        }));
    }

    pub fn to_json(&self, base: &BeliefBase) -> serde_json::Value {
        let sig = base.signature();
        serde_json::json!({
            "postulate": self.postulate,
            "operator": self.operator,
            "scope": self.scope.map(|s| s.name()),
            "status": self.status(),
            "splittings_tested": self.splittings.len(),
            "queries": self.queries,
            "formula_family": if self.restricted_family { "literal-conjunctions" } else { "all-classes" },
            "violation_count": self.violation_count,
            "violations": self.violations.iter().map(|v| {
                let mut j = v.to_json(sig);
                if let Some(k) = v.splitting {
                    j["splitting"] = self.splittings[k].to_json(base);
                }
                j
            }).collect::<Vec<_>>(),
        })
    }
}

/// Per-splitting witness recorder.
struct Recorder<'r> {
    report: &'r mut PostulateReport,
    kept: usize,
    max_witnesses: usize,
}

impl Recorder<'_> {
    fn record(&mut self, v: impl FnOnce() -> Violation) {
        self.report.violation_count += 1;
        if self.kept < self.max_witnesses {
            self.report.violations.push(v());
            self.kept += 1;
        }
    }
}

/// (DI) on every conditional and (TV) over formula pairs on the empty base.
pub fn check_di_tv(op: &dyn InferenceOperator, base: &BeliefBase, max_witnesses: usize) -> Result<PostulateReport, PostulateError> {
    let sig = base.signature();
    let mut report = PostulateReport::new("ditv", op.name(), None);
    let rel = op.build(base)?;
    let top = Formula::Top;
    let full = WorldSet::full(base.num_worlds());
    let mut rec = Recorder { report: &mut report, kept: 0, max_witnesses };
    for c in base.iter() {
        let a = &c.ver | &c.fal;
        rec.report.queries += 1;
        if !rel.infer_sets(&a, &c.ver) {
            rec.record(|| Violation {
                postulate: "di",
                splitting: None,
                side: 0,
                a: c.antecedent.clone(),
                b: c.consequent.clone(),
                d: None,
                e: top.clone(),
                lhs: false,
                rhs: true,
                a_models: a.clone(),
                b_models: c.ver.clone(),
                d_models: None,
                e_models: full.clone(),
            });
        }
    }
    let empty = op.build(&base.emptied())?;
    let family = formula_family(sig, sig.all());
    rec.report.restricted_family = family.restricted;
    for (fa, ma) in family.formulas.iter().zip(&family.models) {
        for (fb, mb) in family.formulas.iter().zip(&family.models) {
            rec.report.queries += 1;
            let inferred = empty.infer_sets(ma, mb);
            if inferred && !ma.is_subset(mb) {
                rec.record(|| Violation {
                    postulate: "tv",
                    splitting: None,
                    side: 0,
                    a: fa.clone(),
                    b: fb.clone(),
                    d: None,
                    e: top.clone(),
                    lhs: true,
                    rhs: false,
                    a_models: ma.clone(),
                    b_models: mb.clone(),
                    d_models: None,
                    e_models: full.clone(),
                });
            }
        }
    }
    Ok(report)
}

fn side_families(sig: &Signature, s: &Splitting, side: usize) -> (FormulaFamily, FormulaFamily) {
    (formula_family(sig, s.sigma(side)), formula_family(sig, s.sigma(3 - side)))
}

/// `AE ⊢_Δ B` iff `AE ⊢_{Δ_i} B`, for one splitting.
pub fn check_crelg(
    op: &dyn InferenceOperator,
    base: &BeliefBase,
    s: &Splitting,
    max_witnesses: usize,
) -> Result<PostulateReport, PostulateError> {
    if !s.is_generalized_safe {
        return Err(PostulateError::NotGeneralizedSafe);
    }
    let whole = op.build(base)?;
    crelg_with(op, whole.as_ref(), base, s, max_witnesses)
}

fn crelg_with(
    op: &dyn InferenceOperator,
    whole: &dyn Relation,
    base: &BeliefBase,
    s: &Splitting,
    max_witnesses: usize,
) -> Result<PostulateReport, PostulateError> {
    let sig = base.signature();
    let mut report = PostulateReport::new("crelg", op.name(), None);
    report.splittings.push(s.clone());
    let es = complete_conjunctions(sig, s.sigma3);
    let mut rec = Recorder { report: &mut report, kept: 0, max_witnesses };
    for side in [1, 2] {
        let part = op.build(&base.subbase(s.delta(side)))?;
        let (fam, _) = side_families(sig, s, side);
        rec.report.restricted_family |= fam.restricted;
        for (fe, me) in es.formulas.iter().zip(&es.models) {
            for (fa, ma) in fam.formulas.iter().zip(&fam.models) {
                let ae = ma & me;
                for (fb, mb) in fam.formulas.iter().zip(&fam.models) {
                    rec.report.queries += 1;
                    let lhs = whole.infer_sets(&ae, mb);
                    let rhs = part.infer_sets(&ae, mb);
                    if lhs != rhs {
                        rec.record(|| Violation {
                            postulate: "crelg",
                            splitting: Some(0),
                            side,
                            a: fa.clone(),
                            b: fb.clone(),
                            d: None,
                            e: fe.clone(),
                            lhs,
                            rhs,
                            a_models: ma.clone(),
                            b_models: mb.clone(),
                            d_models: None,
                            e_models: me.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `AE ⊢_Δ B` iff `AED ⊢_Δ B` whenever `DE ⊬_Δ ⊥`, for one splitting.
pub fn check_cindg(
    op: &dyn InferenceOperator,
    base: &BeliefBase,
    s: &Splitting,
    max_witnesses: usize,
) -> Result<PostulateReport, PostulateError> {
    if !s.is_generalized_safe {
        return Err(PostulateError::NotGeneralizedSafe);
    }
    let whole = op.build(base)?;
    cindg_with(op, whole.as_ref(), base, s, max_witnesses)
}

fn cindg_with(
    op: &dyn InferenceOperator,
    whole: &dyn Relation,
    base: &BeliefBase,
    s: &Splitting,
    max_witnesses: usize,
) -> Result<PostulateReport, PostulateError> {
    let sig = base.signature();
    let mut report = PostulateReport::new("cindg", op.name(), None);
    report.splittings.push(s.clone());
    let es = complete_conjunctions(sig, s.sigma3);
    let nothing = WorldSet::empty(base.num_worlds());
    let mut rec = Recorder { report: &mut report, kept: 0, max_witnesses };
    for side in [1, 2] {
        let (fam, dfam) = side_families(sig, s, side);
        rec.report.restricted_family |= fam.restricted || dfam.restricted;
        for (fe, me) in es.formulas.iter().zip(&es.models) {
            let lhs: Vec<Vec<bool>> = fam
                .models
                .iter()
                .map(|ma| {
                    let ae = ma & me;
                    fam.models.iter().map(|mb| whole.infer_sets(&ae, mb)).collect()
                })
                .collect();
            for (fd, md) in dfam.formulas.iter().zip(&dfam.models) {
                let de = md & me;
                if whole.infer_sets(&de, &nothing) {
                    continue;
                }
                for (ka, (fa, ma)) in fam.formulas.iter().zip(&fam.models).enumerate() {
                    let aed = &(ma & me) & md;
                    for (kb, (fb, mb)) in fam.formulas.iter().zip(&fam.models).enumerate() {
                        rec.report.queries += 1;
                        let l = lhs[ka][kb];
                        let r = whole.infer_sets(&aed, mb);
                        if l != r {
                            rec.record(|| Violation {
                                postulate: "cindg",
                                splitting: Some(0),
                                side,
                                a: fa.clone(),
                                b: fb.clone(),
                                d: Some(fd.clone()),
                                e: fe.clone(),
                                lhs: l,
                                rhs: r,
                                a_models: ma.clone(),
                                b_models: mb.clone(),
                                d_models: Some(md.clone()),
                                e_models: me.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Splittings of `base` in scope, deduplicated by orientation.
pub fn splittings_in_scope(base: &BeliefBase, scope: Scope) -> Vec<Splitting> {
    enumerate_splittings(base, true).into_iter().filter(|s| scope.includes(s)).collect()
}

/// `postulate` over every splitting in `scope`; `ditv` ignores the scope.
pub fn check(
    postulate: Postulate,
    op: &dyn InferenceOperator,
    base: &BeliefBase,
    scope: Scope,
    max_witnesses: usize,
) -> Result<PostulateReport, PostulateError> {
    if postulate == Postulate::DiTv {
        return check_di_tv(op, base, max_witnesses);
    }
    let whole = op.build(base)?;
    let mut report = PostulateReport::new(postulate.name(), op.name(), Some(scope));
    for s in splittings_in_scope(base, scope) {
        let index = report.splittings.len();
        if matches!(postulate, Postulate::CRelG | Postulate::CSynSplitG) {
            let r = crelg_with(op, whole.as_ref(), base, &s, max_witnesses)?;
            report.absorb(r, index);
        }
        if matches!(postulate, Postulate::CIndG | Postulate::CSynSplitG) {
            let r = cindg_with(op, whole.as_ref(), base, &s, max_witnesses)?;
            report.absorb(r, index);
        }
        report.splittings.push(s);
    }
    Ok(report)
}

/// (CSynSplit^g), or (CSynSplit) when restricted to safe splittings.
pub fn check_csynsplitg(
    op: &dyn InferenceOperator,
    base: &BeliefBase,
    scope: Scope,
    max_witnesses: usize,
) -> Result<PostulateReport, PostulateError> {
    check(Postulate::CSynSplitG, op, base, scope, max_witnesses)
}
