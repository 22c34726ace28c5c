//! Propositional signatures, worlds, formulas and model sets.
//!
//! Worlds over a signature of `n` atoms are the integers `0..2^n`; atom `i`
//! occupies bit `i`. A world over a subsignature `Θ` is stored as a full
//! index whose bits outside `Θ` are zero, so reducts are plain masks.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use thiserror::Error;

/// Default upper bound on the number of atoms of a signature.
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// Environment variable overriding [`DEFAULT_MAX_ATOMS`].
pub const MAX_ATOMS_ENV: &str = "CONDSPLIT_MAX_ATOMS";

/// Atom sets and world indices are `u32` bitmasks.
const HARD_MAX_ATOMS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
    #[error("a signature needs at least one atom")]
    EmptySignature,
    #[error("signature of {atoms} atoms exceeds the cap of {cap}")]
    SignatureOverflow { atoms: usize, cap: usize },
    #[error("syntax error at offset {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom set is not contained in the signature")]
    AtomNotInSignature,
    #[error("signatures of the composed worlds overlap")]
    OverlappingSignatures,
}

/// Cap from [`MAX_ATOMS_ENV`] when set to a valid number, else the default.
pub fn max_atoms() -> usize {
    std::env::var(MAX_ATOMS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.min(HARD_MAX_ATOMS))
        .unwrap_or(DEFAULT_MAX_ATOMS)
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "top" && name != "bot"
}

/// A set of atoms of one signature, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(pub u32);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn full(n: usize) -> AtomSet {
        if n >= 32 {
            AtomSet(u32::MAX)
        } else {
            AtomSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(atom: usize) -> AtomSet {
        AtomSet(1 << atom)
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn insert(&mut self, atom: usize) {
        self.0 |= 1 << atom;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 & other.0)
    }

    pub fn difference(self, other: AtomSet) -> AtomSet {
        AtomSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: AtomSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Atom indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// Every bit pattern over this set, i.e. every world over it, in increasing order.
    pub fn assignments(self) -> Assignments {
        Assignments { mask: self.0, next: Some(0) }
    }
}

/// Iterator over all submasks of a mask in increasing numeric order.
pub struct Assignments {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Assignments {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        // next submask in increasing order: add one within the mask's bits
        let succ = (cur | !self.mask).wrapping_add(1) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(cur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Signature {
    /// Builds a signature under the cap returned by [`max_atoms`].
    pub fn new<S: AsRef<str>>(atoms: &[S]) -> Result<Signature, LogicError> {
        Signature::with_cap(atoms, max_atoms())
    }

    pub fn with_cap<S: AsRef<str>>(atoms: &[S], cap: usize) -> Result<Signature, LogicError> {
        if atoms.is_empty() {
            return Err(LogicError::EmptySignature);
        }
        let cap = cap.min(HARD_MAX_ATOMS);
        if atoms.len() > cap {
            return Err(LogicError::SignatureOverflow { atoms: atoms.len(), cap });
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            let a = a.as_ref();
            if !is_identifier(a) {
                return Err(LogicError::InvalidAtomName(a.to_string()));
            }
            if index.insert(a.to_string(), i).is_some() {
                return Err(LogicError::DuplicateAtom(a.to_string()));
            }
            names.push(a.to_string());
        }
        Ok(Signature { atoms: names, index })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn num_worlds(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &str {
        &self.atoms[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn all(&self) -> AtomSet {
        AtomSet::full(self.len())
    }

    pub fn atom_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AtomSet, LogicError> {
        let mut set = AtomSet::EMPTY;
        for n in names {
            let i = self
                .index_of(n.as_ref())
                .ok_or_else(|| LogicError::UnknownAtom(n.as_ref().to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn names(&self, set: AtomSet) -> Vec<String> {
        set.iter().map(|i| self.atoms[i].clone()).collect()
    }

    /// The subsignature on `theta`, atoms kept in their original order.
    pub fn restrict(&self, theta: AtomSet) -> Result<Signature, LogicError> {
        if !theta.is_subset(self.all()) {
            return Err(LogicError::AtomNotInSignature);
        }
        let names: Vec<&str> = theta.iter().map(|i| self.atom(i)).collect();
        Signature::with_cap(&names, HARD_MAX_ATOMS)
    }

    /// Literal notation of a world restricted to `domain`, e.g. `b,!p,f`.
    pub fn world_str(&self, world: u32, domain: AtomSet) -> String {
        if domain.is_empty() {
            return "top".to_string();
        }
        domain
            .iter()
            .map(|i| {
                if world >> i & 1 == 1 {
                    self.atoms[i].clone()
                } else {
                    format!("!{}", self.atoms[i])
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(&self, text: &str) -> Result<Formula, LogicError> {
        parse_formula(text, self)
    }
}

/// Packs the bits of `world` selected by `theta` into consecutive low bits.
pub fn compress(world: u32, theta: AtomSet) -> u32 {
    let mut out = 0;
    for (k, i) in theta.iter().enumerate() {
        out |= (world >> i & 1) << k;
    }
    out
}

/// Inverse of [`compress`].
pub fn expand(bits: u32, theta: AtomSet) -> u32 {
    let mut out = 0;
    for (k, i) in theta.iter().enumerate() {
        out |= (bits >> k & 1) << i;
    }
    out
}

/// A world over the subsignature `domain`; `bits ⊆ domain`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct World {
    pub domain: AtomSet,
    pub bits: u32,
}

impl World {
    pub fn new(domain: AtomSet, bits: u32) -> World {
        World { domain, bits: bits & domain.0 }
    }

    pub fn holds(&self, atom: usize) -> bool {
        self.bits >> atom & 1 == 1
    }

    pub fn reduct(&self, theta: AtomSet) -> Result<World, LogicError> {
        if !theta.is_subset(self.domain) {
            return Err(LogicError::AtomNotInSignature);
        }
        Ok(World::new(theta, self.bits))
    }

    pub fn compose(&self, other: &World) -> Result<World, LogicError> {
        if !self.domain.is_disjoint(other.domain) {
            return Err(LogicError::OverlappingSignatures);
        }
        Ok(World { domain: self.domain.union(other.domain), bits: self.bits | other.bits })
    }

    /// The conjunction of literals describing this world.
    pub fn formula(&self) -> Formula {
        Formula::conj(self.domain.iter().map(|i| Formula::literal(i, self.holds(i))))
    }
}

/// A set of worlds of one signature, as a bitset over world indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    universe: usize,
    words: Vec<u64>,
}

impl WorldSet {
    pub fn empty(universe: usize) -> WorldSet {
        WorldSet { universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(universe: usize) -> WorldSet {
        let mut s = WorldSet { universe, words: vec![u64::MAX; universe.div_ceil(64)] };
        s.trim();
        s
    }

    pub fn from_fn(universe: usize, mut pred: impl FnMut(u32) -> bool) -> WorldSet {
        let mut s = WorldSet::empty(universe);
        for w in 0..universe {
            if pred(w as u32) {
                s.insert(w as u32);
            }
        }
        s
    }

    /// Worlds of a `n`-atom signature in which `atom` is true.
    pub fn atom(universe: usize, atom: usize) -> WorldSet {
        if atom < 6 {
            let mut pattern = 0u64;
            for b in 0..64u64 {
                if b >> atom & 1 == 1 {
                    pattern |= 1 << b;
                }
            }
            let mut s = WorldSet { universe, words: vec![pattern; universe.div_ceil(64)] };
            s.trim();
            s
        } else {
            let period = 1usize << (atom - 6);
            let words = (0..universe.div_ceil(64))
                .map(|k| if (k / period) % 2 == 1 { u64::MAX } else { 0 })
                .collect();
            WorldSet { universe, words }
        }
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, w: u32) -> bool {
        let w = w as usize;
        w < self.universe && self.words[w / 64] >> (w % 64) & 1 == 1
    }

    pub fn insert(&mut self, w: u32) {
        let w = w as usize;
        assert!(w < self.universe, "world index out of range");
        self.words[w / 64] |= 1 << (w % 64);
    }

    pub fn remove(&mut self, w: u32) {
        let w = w as usize;
        if w < self.universe {
            self.words[w / 64] &= !(1 << (w % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros();
                w &= w - 1;
                Some((k * 64) as u32 + t)
            })
        })
    }

    /// `{ ω ∩ θ | ω ∈ self }`: the reducts to `theta`, as masked indices.
    pub fn restrict(&self, theta: AtomSet) -> WorldSet {
        let mut out = WorldSet::empty(self.universe);
        for w in self.iter() {
            out.insert(w & theta.0);
        }
        out
    }

    /// All worlds whose reduct to `theta` lies in `self`; `self` holds masked indices.
    pub fn cylinder(&self, theta: AtomSet) -> WorldSet {
        WorldSet::from_fn(self.universe, |w| self.contains(w & theta.0))
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitAnd for &WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.universe, rhs.universe);
        WorldSet {
            universe: self.universe,
            words: self.words.iter().zip(&rhs.words).map(|(a, b)| a & b).collect(),
        }
    }
}

impl BitOr for &WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.universe, rhs.universe);
        WorldSet {
            universe: self.universe,
            words: self.words.iter().zip(&rhs.words).map(|(a, b)| a | b).collect(),
        }
    }
}

impl Sub for &WorldSet {
    type Output = WorldSet;
    fn sub(self, rhs: &WorldSet) -> WorldSet {
        debug_assert_eq!(self.universe, rhs.universe);
        WorldSet {
            universe: self.universe,
            words: self.words.iter().zip(&rhs.words).map(|(a, b)| a & !b).collect(),
        }
    }
}

impl Not for &WorldSet {
    type Output = WorldSet;
    fn not(self) -> WorldSet {
        let mut s = WorldSet { universe: self.universe, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }
}

/// Propositional formula over the atom indices of a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(i: usize) -> Formula {
        Formula::Atom(i)
    }

    pub fn literal(i: usize, positive: bool) -> Formula {
        if positive {
            Formula::Atom(i)
        } else {
            Formula::negate(Formula::Atom(i))
        }
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `Top` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `Bot` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    /// Atoms occurring syntactically.
    pub fn atoms(&self) -> AtomSet {
        match self {
            Formula::Top | Formula::Bot => AtomSet::EMPTY,
            Formula::Atom(i) => AtomSet::singleton(*i),
            Formula::Not(f) => f.atoms(),
            Formula::And(a, b) | Formula::Or(a, b) => a.atoms().union(b.atoms()),
        }
    }

    pub fn eval(&self, world: u32) -> bool {
        match self {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(i) => world >> i & 1 == 1,
            Formula::Not(f) => !f.eval(world),
            Formula::And(a, b) => a.eval(world) && b.eval(world),
            Formula::Or(a, b) => a.eval(world) || b.eval(world),
        }
    }

    /// Renames atom indices.
    pub fn remap(&self, map: &impl Fn(usize) -> usize) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Atom(i) => Formula::Atom(map(*i)),
            Formula::Not(f) => Formula::negate(f.remap(map)),
            Formula::And(a, b) => Formula::and(a.remap(map), b.remap(map)),
            Formula::Or(a, b) => Formula::or(a.remap(map), b.remap(map)),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(..) => 3,
            _ => 4,
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min_prec: u8) -> fmt::Result {
        let paren = node.precedence() < min_prec;
        if paren {
            write!(f, "(")?;
        }
        match node {
            Formula::Top => write!(f, "top")?,
            Formula::Bot => write!(f, "bot")?,
            Formula::Atom(i) => write!(f, "{}", self.sig.atom(*i))?,
            Formula::Not(inner) => {
                write!(f, "!")?;
                self.write(f, inner, 3)?;
            }
            Formula::And(a, b) => {
                self.write(f, a, 2)?;
                write!(f, ",")?;
                self.write(f, b, 3)?;
            }
            Formula::Or(a, b) => {
                self.write(f, a, 1)?;
                write!(f, ";")?;
                self.write(f, b, 2)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    parse_formula_with(text, &mut |name| sig.index_of(name))
}

/// Parses with a caller-supplied atom resolver; `None` reports `UnknownAtom`.
pub fn parse_formula_with(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Option<usize>,
) -> Result<Formula, LogicError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, resolve };
    let f = p.disjunction()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

struct Parser<'a, 'r> {
    src: &'a [u8],
    pos: usize,
    resolve: &'r mut dyn FnMut(&str) -> Option<usize>,
}

impl Parser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> LogicError {
        LogicError::Syntax { position: self.pos, expected: expected.to_string() }
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut f = self.conjunction()?;
        while self.peek() == Some(b';') {
            self.pos += 1;
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut f = self.unary()?;
        while self.peek() == Some(b',') {
            self.pos += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::negate(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.disjunction()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("')'"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                match name {
                    "top" => Ok(Formula::Top),
                    "bot" => Ok(Formula::Bot),
                    _ => (self.resolve)(name)
                        .map(Formula::Atom)
                        .ok_or_else(|| LogicError::UnknownAtom(name.to_string())),
                }
            }
            _ => Err(self.error("formula")),
        }
    }
}

/// Model set of `f` over `sig`.
pub fn models(f: &Formula, sig: &Signature) -> WorldSet {
    models_in(f, sig.num_worlds())
}

pub(crate) fn models_in(f: &Formula, universe: usize) -> WorldSet {
    match f {
        Formula::Top => WorldSet::full(universe),
        Formula::Bot => WorldSet::empty(universe),
        Formula::Atom(i) => WorldSet::atom(universe, *i),
        Formula::Not(g) => !&models_in(g, universe),
        Formula::And(a, b) => &models_in(a, universe) & &models_in(b, universe),
        Formula::Or(a, b) => &models_in(a, universe) | &models_in(b, universe),
    }
}

pub fn entails(a: &Formula, b: &Formula, sig: &Signature) -> bool {
    models(a, sig).is_subset(&models(b, sig))
}

pub fn equivalent(a: &Formula, b: &Formula, sig: &Signature) -> bool {
    models(a, sig) == models(b, sig)
}

/// Disjunction of the world conjunctions of `set`, read over `theta`.
pub fn dnf(set: &WorldSet, theta: AtomSet) -> Formula {
    let reducts = set.restrict(theta);
    if reducts.len() == 1usize << theta.len() {
        return Formula::Top;
    }
    Formula::disj(reducts.iter().map(|w| World::new(theta, w).formula()))
}
