//! Spiralling laws behind a common trait, registered by name.

use std::collections::BTreeMap;

use super::{
    crowned_stretch_vector, stretch11, stretch_crowned, stretch_vector11, AnnulusMetric11,
    CrownedAnnulusMetric, CrownedTangent, SpiralPattern,
};
use crate::error::{Error, Result};

/// One way the crown leaves may spiral onto the core, with its flow and tangent vector.
pub trait SpiralLaw: Send + Sync {
    fn name(&self) -> &'static str;
    fn pattern(&self) -> SpiralPattern;
    fn describe(&self) -> &'static str;

    fn stretch11(&self, m: &AnnulusMetric11, t: f64) -> AnnulusMetric11 {
        stretch11(m, self.pattern(), t)
    }

    fn stretch_crowned(&self, m: &CrownedAnnulusMetric, t: f64) -> CrownedAnnulusMetric {
        stretch_crowned(m, self.pattern(), t)
    }

    fn vector11(&self, m: &AnnulusMetric11) -> (f64, f64) {
        stretch_vector11(m, self.pattern())
    }

    fn crowned_vector(&self, m: &CrownedAnnulusMetric) -> CrownedTangent {
        crowned_stretch_vector(m, self.pattern())
    }
}

pub struct ParallelLaw {
    pub minus: bool,
}

impl SpiralLaw for ParallelLaw {
    fn name(&self) -> &'static str {
        if self.minus { "parallel-" } else { "parallel" }
    }

    fn pattern(&self) -> SpiralPattern {
        if self.minus { SpiralPattern::ParallelMinus } else { SpiralPattern::Parallel }
    }

    fn describe(&self) -> &'static str {
        if self.minus {
            "both leaves spiral the same way, orientation reversed"
        } else {
            "both leaves spiral the same way; the twist scales linearly"
        }
    }
}

pub struct OppositeLaw {
    pub minus: bool,
}

impl SpiralLaw for OppositeLaw {
    fn name(&self) -> &'static str {
        if self.minus { "opposite-" } else { "opposite+" }
    }

    fn pattern(&self) -> SpiralPattern {
        if self.minus { SpiralPattern::OppositeMinus } else { SpiralPattern::OppositePlus }
    }

    fn describe(&self) -> &'static str {
        if self.minus {
            "leaves spiral in opposite directions, negative sense"
        } else {
            "leaves spiral in opposite directions, positive sense"
        }
    }
}

/// Name-keyed collection of spiralling laws. Iteration order is by name.
pub struct LawRegistry {
    laws: BTreeMap<&'static str, Box<dyn SpiralLaw>>,
    aliases: BTreeMap<&'static str, &'static str>,
}

impl LawRegistry {
    pub fn empty() -> Self {
        LawRegistry { laws: BTreeMap::new(), aliases: BTreeMap::new() }
    }

    pub fn register(&mut self, law: Box<dyn SpiralLaw>) {
        self.laws.insert(law.name(), law);
    }

    pub fn alias(&mut self, alias: &'static str, target: &'static str) {
        self.aliases.insert(alias, target);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SpiralLaw> {
        let key = self.aliases.get(name).copied().unwrap_or(name);
        self.laws.get(key).map(|b| b.as_ref()).ok_or_else(|| Error::UnknownLaw(name.to_string()))
    }

    pub fn for_pattern(&self, p: SpiralPattern) -> Option<&dyn SpiralLaw> {
        self.laws.values().find(|l| l.pattern() == p).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.laws.keys().copied().collect()
    }
}

impl Default for LawRegistry {
    fn default() -> Self {
        let mut r = LawRegistry::empty();
        r.register(Box::new(ParallelLaw { minus: false }));
        r.register(Box::new(ParallelLaw { minus: true }));
        r.register(Box::new(OppositeLaw { minus: false }));
        r.register(Box::new(OppositeLaw { minus: true }));
        r.alias("parallel+", "parallel");
        r.alias("lambda0", "parallel");
        r.alias("lambda+", "opposite+");
        r.alias("lambda-", "opposite-");
        r
    }
}
