//! Information costs of symbols, patterns, and grammars, in bits.
//!
//! A token seen `f` times in a grammar whose weighted total is `F`, over an
//! alphabet of `|S|` distinct tokens, costs `-log2((f + a) / (F + a|S|))`
//! with add-`a` smoothing. Every pattern additionally pays one terminator,
//! `-log2(P / (F + P))` for a grammar of `P` patterns.

use std::collections::HashMap;

use crate::pattern::{Grammar, Pattern};
use crate::symbol::{Symbol, TokenId};

pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct CostModel {
    costs: HashMap<TokenId, f64>,
    unseen: f64,
    terminator: f64,
    alpha: f64,
    alphabet: usize,
    total: u64,
}

impl CostModel {
    pub fn from_grammar(grammar: &Grammar, alpha: f64) -> Self {
        assert!(alpha > 0.0, "smoothing constant must be positive");
        let total = grammar.total_count();
        let alphabet = grammar.symbol_counts().len();
        let denom = total as f64 + alpha * alphabet as f64;
        let costs = grammar
            .symbol_counts()
            .iter()
            .map(|(&t, &f)| (t, -((f as f64 + alpha) / denom).log2()))
            .collect();
        // An unseen token widens the alphabet by one. The floor of two keeps
        // the cost positive for an empty grammar.
        let widened = (alphabet + 1).max(2) as f64;
        let unseen = -(alpha / (total as f64 + alpha * widened)).log2();
        let patterns = grammar.len().max(1) as f64;
        let terminator = -(patterns / (total as f64 + patterns)).log2();
        CostModel {
            costs,
            unseen,
            terminator,
            alpha,
            alphabet,
            total,
        }
    }

    /// A model with explicitly given costs; tokens not listed cost `unseen`.
    pub fn with_costs(costs: HashMap<TokenId, f64>, unseen: f64, terminator: f64) -> Self {
        let alphabet = costs.len();
        CostModel {
            costs,
            unseen,
            terminator,
            alpha: DEFAULT_ALPHA,
            alphabet,
            total: 0,
        }
    }

    pub fn cost(&self, token: TokenId) -> f64 {
        self.costs.get(&token).copied().unwrap_or(self.unseen)
    }

    pub fn symbol_cost(&self, s: &Symbol) -> f64 {
        self.cost(s.token)
    }

    pub fn terminator(&self) -> f64 {
        self.terminator
    }

    pub fn unseen_cost(&self) -> f64 {
        self.unseen
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn total_count(&self) -> u64 {
        self.total
    }

    /// Sum of symbol costs, without a terminator.
    pub fn sequence_cost<'a>(&self, symbols: impl IntoIterator<Item = &'a Symbol>) -> f64 {
        symbols.into_iter().map(|s| self.symbol_cost(s)).sum()
    }
}

pub fn build_cost_model(grammar: &Grammar) -> CostModel {
    CostModel::from_grammar(grammar, DEFAULT_ALPHA)
}

/// Cost of writing a pattern out in full, terminator included.
pub fn raw_cost(pattern: &Pattern, model: &CostModel) -> f64 {
    model.sequence_cost(pattern.symbols()) + model.terminator()
}

/// Size of a grammar: the raw cost of each of its patterns.
pub fn grammar_cost(grammar: &Grammar, model: &CostModel) -> f64 {
    grammar.patterns().map(|p| raw_cost(p, model)).fold(0.0, |a, b| a + b)
}
