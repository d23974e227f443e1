//! Patterns and grammars.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{Role, Symbol, TokenId};

pub type PatternId = u32;

/// Where a pattern came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    New,
    Old,
    Derived,
}

/// An ordered, nonempty array of symbols with a frequency of occurrence.
#[derive(Debug, Clone)]
pub struct Pattern {
    pub id: PatternId,
    symbols: Vec<Symbol>,
    frequency: u64,
    pub origin: Origin,
}

impl Pattern {
    pub fn new(id: PatternId, symbols: Vec<Symbol>, frequency: u64, origin: Origin) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidPattern("pattern has no symbols".into()));
        }
        if frequency == 0 {
            return Err(Error::InvalidPattern("frequency must be at least 1".into()));
        }
        Ok(Pattern {
            id,
            symbols,
            frequency,
            origin,
        })
    }

    /// Builds a pattern from whitespace separated tokens, all with `role`.
    pub fn from_text(id: PatternId, text: &str, role: Role, origin: Origin) -> Result<Self> {
        let symbols = text
            .split_whitespace()
            .map(|t| Symbol::new(t, role))
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(id, symbols, 1, origin)
    }

    /// Builds a pattern from tokens and a role mask over `{I, C}`.
    pub fn from_masked(id: PatternId, text: &str, mask: &str, frequency: u64) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let roles: Vec<char> = mask.chars().collect();
        if tokens.len() != roles.len() {
            return Err(Error::InvalidPattern(format!(
                "role mask has {} entries for {} tokens",
                roles.len(),
                tokens.len()
            )));
        }
        let symbols = tokens
            .iter()
            .zip(roles)
            .map(|(t, r)| {
                let role = Role::from_mask_char(r)
                    .ok_or_else(|| Error::InvalidPattern(format!("bad role {r:?}")))?;
                Symbol::new(t, role)
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(id, symbols, frequency, Origin::Old)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn frequency(&self) -> u64 {
        self.frequency
    }

    pub fn set_frequency(&mut self, frequency: u64) -> Result<()> {
        if frequency == 0 {
            return Err(Error::InvalidPattern("frequency must be at least 1".into()));
        }
        self.frequency = frequency;
        Ok(())
    }

    pub fn role_mask(&self) -> String {
        self.symbols.iter().map(|s| s.role.mask_char()).collect()
    }

    pub fn tokens(&self) -> impl Iterator<Item = TokenId> + '_ {
        self.symbols.iter().map(|s| s.token)
    }

    /// Tokens and roles, for comparisons where roles matter.
    pub fn signature(&self) -> Vec<(TokenId, Role)> {
        self.symbols.iter().map(|s| (s.token, s.role)).collect()
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.frequency == other.frequency
            && self.origin == other.origin
            && self.signature() == other.signature()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A set of Old patterns with cached symbol counts.
///
/// `symbol_counts` holds, for every token, the number of its occurrences
/// weighted by the frequency of the pattern it occurs in.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grammar {
    patterns: BTreeMap<PatternId, Pattern>,
    symbol_counts: BTreeMap<TokenId, u64>,
    total_count: u64,
}

impl Grammar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_patterns(patterns: impl IntoIterator<Item = Pattern>) -> Result<Self> {
        let mut g = Grammar::new();
        for p in patterns {
            g.insert(p)?;
        }
        Ok(g)
    }

    pub fn insert(&mut self, pattern: Pattern) -> Result<()> {
        if self.patterns.contains_key(&pattern.id) {
            return Err(Error::DuplicatePattern(pattern.id));
        }
        self.add_counts(&pattern, true);
        self.patterns.insert(pattern.id, pattern);
        Ok(())
    }

    pub fn remove(&mut self, id: PatternId) -> Option<Pattern> {
        let p = self.patterns.remove(&id)?;
        self.add_counts(&p, false);
        Some(p)
    }

    pub fn set_frequency(&mut self, id: PatternId, frequency: u64) -> Result<()> {
        let mut p = self
            .remove(id)
            .ok_or_else(|| Error::InvalidPattern(format!("no pattern {id}")))?;
        let res = p.set_frequency(frequency);
        self.insert(p)?;
        res
    }

    fn add_counts(&mut self, p: &Pattern, add: bool) {
        for t in p.tokens() {
            let c = self.symbol_counts.entry(t).or_insert(0);
            if add {
                *c += p.frequency;
                self.total_count += p.frequency;
            } else {
                *c -= p.frequency;
                self.total_count -= p.frequency;
                if *c == 0 {
                    self.symbol_counts.remove(&t);
                }
            }
        }
    }

    pub fn get(&self, id: PatternId) -> Option<&Pattern> {
        self.patterns.get(&id)
    }

    pub fn patterns(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = PatternId> + '_ {
        self.patterns.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn next_id(&self) -> PatternId {
        self.patterns.keys().next_back().map_or(0, |k| k + 1)
    }

    pub fn symbol_counts(&self) -> &BTreeMap<TokenId, u64> {
        &self.symbol_counts
    }

    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    /// Recounts from scratch; used to check the cached totals.
    pub fn recount(&self) -> (BTreeMap<TokenId, u64>, u64) {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for p in self.patterns.values() {
            for t in p.tokens() {
                *counts.entry(t).or_insert(0) += p.frequency;
                total += p.frequency;
            }
        }
        (counts, total)
    }
}
