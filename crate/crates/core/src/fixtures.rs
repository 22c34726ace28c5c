//! The example knowledge bases shipped with the crate.

use crate::conditionals::BeliefBase;
use crate::kb::KnowledgeBase;

pub const BIRDS: &str = include_str!("../fixtures/birds.cl");
pub const SUN: &str = include_str!("../fixtures/sun.cl");
pub const RAIN: &str = include_str!("../fixtures/rain.cl");
pub const KIWI: &str = include_str!("../fixtures/kiwi.cl");

pub const ALL: [(&str, &str); 4] = [("birds", BIRDS), ("sun", SUN), ("rain", RAIN), ("kiwi", KIWI)];

fn load(text: &str) -> BeliefBase {
    KnowledgeBase::parse(text).expect("fixture parses").base
}

/// `{(f|b), (f̄|p), (b|p), (w|b)}` over `b, p, f, w`.
pub fn birds() -> BeliefBase {
    load(BIRDS)
}

pub fn sun() -> BeliefBase {
    load(SUN)
}

pub fn rain() -> BeliefBase {
    load(RAIN)
}

pub fn kiwi() -> BeliefBase {
    load(KIWI)
}

pub fn by_name(name: &str) -> Option<BeliefBase> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| load(t))
}
