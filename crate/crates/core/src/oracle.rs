//! Brute-force reference implementations for small instances.
//!
//! These share the alignment validity rules and the cost model with the
//! engine and nothing else: no beams, no hit ranking, no staged search.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::alignment::{derive_encoding, AlignmentKey, MultipleAlignment};
use crate::cost::{raw_cost, CostModel};
use crate::error::{Error, Result};
use crate::learner::{CandidatePool, GrammarCandidate};
use crate::matcher::{cmp_bits, SCORE_EPS};
use crate::pattern::{Grammar, Pattern, PatternId};
use crate::symbol::TokenId;

/// Old rows an exhaustive alignment may hold; the engine's default stage
/// limit, so both search the same space.
pub const MAX_OLD_ROWS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_new_len: usize,
    pub max_pattern_len: usize,
    pub max_patterns: usize,
    pub max_candidates: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_new_len: 12,
            max_pattern_len: 8,
            max_patterns: 6,
            max_candidates: 12,
        }
    }
}

/// Length of the longest common subsequence of the two token sequences.
pub fn lcs_score(a: &Pattern, b: &Pattern) -> usize {
    let (a, b) = (a.symbols(), b.symbols());
    let mut prev = vec![0usize; b.len() + 1];
    for x in a {
        let mut cur = vec![0usize; b.len() + 1];
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x.token == y.token {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        prev = cur;
    }
    prev[b.len()]
}

/// `before[c]` is the bitset of columns that must come before column `c`.
fn predecessors(a: &MultipleAlignment) -> Vec<Vec<u64>> {
    let n = a.columns().len();
    let words = n.div_ceil(64).max(1);
    let mut before = vec![vec![0u64; words]; n];
    // Columns are stored in a topological order, so one pass suffices.
    for c in 0..n {
        for &(r, q) in &a.columns()[c] {
            if q > 0 {
                let d = a.column_of((r, q - 1));
                let (lo, hi) = before.split_at_mut(c);
                for (w, x) in hi[0].iter_mut().zip(&lo[d]) {
                    *w |= x;
                }
                hi[0][d / 64] |= 1 << (d % 64);
            }
        }
    }
    before
}

fn has(set: &[u64], c: usize) -> bool {
    set[c / 64] >> (c % 64) & 1 == 1
}

/// Every nonempty set of `(column, position)` pairs by which `p` could join
/// `a`: equal tokens, joinable columns, positions and columns in a
/// consistent order.
fn joins(a: &MultipleAlignment, p: &Pattern, before: &[Vec<u64>]) -> Vec<Vec<(usize, usize)>> {
    let options: Vec<Vec<usize>> = p
        .symbols()
        .iter()
        .map(|s| {
            (0..a.columns().len())
                .filter(|&c| {
                    a.symbol(a.columns()[c][0]).token == s.token && a.can_join(c, p.id, s.role)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    extend_joins(&options, 0, &mut cur, before, &mut out);
    out
}

fn extend_joins(
    options: &[Vec<usize>],
    q: usize,
    cur: &mut Vec<(usize, usize)>,
    before: &[Vec<u64>],
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if q == options.len() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        return;
    }
    extend_joins(options, q + 1, cur, before, out);
    for &c in &options[q] {
        let fits = cur.iter().all(|&(d, _)| d != c && !has(&before[d], c));
        if fits {
            cur.push((c, q));
            extend_joins(options, q + 1, cur, before, out);
            cur.pop();
        }
    }
}

struct Search<'a> {
    patterns: Vec<&'a Pattern>,
    model: &'a CostModel,
    /// Tokens each pattern's ID symbols may share a column with: those of
    /// New and of every other pattern. ID symbols with any other token
    /// stay in the encoding whatever rows are added.
    partners: HashMap<PatternId, HashSet<TokenId>>,
    /// The least any added row must leave in the encoding.
    min_row_cost: f64,
    seen: HashSet<AlignmentKey>,
    best: Option<MultipleAlignment>,
}

impl<'a> Search<'a> {
    fn new(new: &Pattern, grammar: &'a Grammar, model: &'a CostModel) -> Self {
        let patterns: Vec<&Pattern> = grammar.patterns().collect();
        let partners: HashMap<PatternId, HashSet<TokenId>> = patterns
            .iter()
            .map(|p| {
                let set = new
                    .tokens()
                    .chain(patterns.iter().filter(|q| q.id != p.id).flat_map(|q| q.tokens()))
                    .collect();
                (p.id, set)
            })
            .collect();
        let min_row_cost = patterns
            .iter()
            .map(|p| {
                p.symbols()
                    .iter()
                    .filter(|s| s.is_id() && !partners[&p.id].contains(&s.token))
                    .map(|s| model.symbol_cost(s))
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        Search {
            patterns,
            model,
            partners,
            min_row_cost,
            seen: HashSet::new(),
            best: None,
        }
    }

    /// Most CD any alignment extending `a` by one or more rows can reach:
    /// every unmatched New symbol encoded and every ID symbol that could
    /// still be matched removed from the encoding, less the cost of at
    /// least one more row.
    fn bound(&self, a: &MultipleAlignment) -> f64 {
        let unmatched: f64 = a
            .residue()
            .iter()
            .map(|&p| self.model.symbol_cost(&a.new_symbols()[p]))
            .sum();
        let removable: f64 = a
            .columns()
            .iter()
            .filter(|col| col.len() == 1 && col[0].0 > 0)
            .filter_map(|col| {
                let (r, q) = col[0];
                let s = a.symbol((r, q));
                let id = a.rows()[r].pattern?;
                (s.is_id() && self.partners[&id].contains(&s.token))
                    .then(|| self.model.symbol_cost(s))
            })
            .sum();
        a.score() + unmatched + removable - self.min_row_cost
    }

    /// Whether two adjacent matched New symbols are left unordered by the
    /// Old rows with no way for added rows to order them. Added rows order
    /// existing columns only through columns they join, so `x` before `y`
    /// needs a joinable column at or after `x` and one at or before `y`.
    fn order_is_stuck(&self, a: &MultipleAlignment) -> bool {
        let ancestors = a.old_ancestors();
        let pairs = a.unordered_pairs(&ancestors);
        if pairs.is_empty() {
            return false;
        }
        let open: Vec<usize> = (0..a.columns().len())
            .filter(|&c| {
                let token = a.symbol(a.columns()[c][0]).token;
                self.patterns.iter().any(|p| {
                    p.symbols()
                        .iter()
                        .any(|s| s.token == token && a.can_join(c, p.id, s.role))
                })
            })
            .collect();
        pairs.iter().any(|&(x, y)| {
            !open.iter().any(|&c| has(&ancestors[c], x)) || !open.iter().any(|&d| has(&ancestors[y], d))
        })
    }

    fn visit(&mut self, a: MultipleAlignment) {
        if a.score() > SCORE_EPS
            && a.is_admissible()
            && self.best.as_ref().is_none_or(|b| a.rank_cmp(b).is_lt())
        {
            self.best = Some(a.clone());
        }
        if a.rows().len() > MAX_OLD_ROWS {
            return;
        }
        let bound = self.bound(&a);
        let target = self.best.as_ref().map_or(SCORE_EPS, |b| b.score());
        if cmp_bits(bound, target).is_lt() || bound <= SCORE_EPS {
            return;
        }
        if self.order_is_stuck(&a) {
            return;
        }
        let before = predecessors(&a);
        let mut children = Vec::new();
        for p in &self.patterns {
            for pairs in joins(&a, p, &before) {
                if let Some(next) = a.with_row(p, &pairs, self.model) {
                    if self.seen.insert(next.key()) {
                        children.push(next);
                    }
                }
            }
        }
        // Promising branches first, so the bound cuts more of the rest.
        children.sort_by(|x, y| cmp_bits(y.score(), x.score()));
        for next in children {
            self.visit(next);
        }
    }
}

fn best_alignment_unchecked(
    new: &Pattern,
    grammar: &Grammar,
    model: &CostModel,
) -> Option<MultipleAlignment> {
    let mut search = Search::new(new, grammar, model);
    search.visit(MultipleAlignment::from_new_patterns(std::slice::from_ref(new)));
    search.best
}

/// The best alignment of `new` against `grammar` over every valid
/// alignment with at most [`MAX_OLD_ROWS`] Old rows, ranked as the engine
/// ranks. With no alignment of positive CD the result is row 0 alone, CD 0.
pub fn exhaustive_alignments(
    new: &Pattern,
    grammar: &Grammar,
    bounds: &Bounds,
    model: &CostModel,
) -> Result<MultipleAlignment> {
    if new.len() > bounds.max_new_len {
        return Err(Error::BoundsExceeded(format!(
            "New has {} symbols, limit {}",
            new.len(),
            bounds.max_new_len
        )));
    }
    if grammar.len() > bounds.max_patterns {
        return Err(Error::BoundsExceeded(format!(
            "grammar has {} patterns, limit {}",
            grammar.len(),
            bounds.max_patterns
        )));
    }
    if let Some(p) = grammar.patterns().find(|p| p.len() > bounds.max_pattern_len) {
        return Err(Error::BoundsExceeded(format!(
            "pattern {} has {} symbols, limit {}",
            p.id,
            p.len(),
            bounds.max_pattern_len
        )));
    }
    Ok(best_alignment_unchecked(new, grammar, model)
        .unwrap_or_else(|| MultipleAlignment::from_new_patterns(std::slice::from_ref(new))))
}

/// Bits needed for `s` given `grammar`: encoding of its best alignment plus
/// the raw cost of the residue, or its raw cost when nothing aligns.
fn sentence_bits(s: &Pattern, grammar: &Grammar, model: &CostModel) -> (f64, Vec<PatternId>) {
    match best_alignment_unchecked(s, grammar, model) {
        None => (raw_cost(s, model), Vec::new()),
        Some(a) => {
            let residue = a.residue();
            let mut bits = derive_encoding(&a).cost(model);
            if !residue.is_empty() {
                bits += residue
                    .iter()
                    .map(|&p| model.symbol_cost(&s.symbols()[p]))
                    .sum::<f64>()
                    + model.terminator();
            }
            (bits, a.old_pattern_ids())
        }
    }
}

fn score_subset(ids: &[PatternId], all: &BTreeMap<PatternId, Pattern>, corpus: &[Pattern], model: &CostModel) -> GrammarCandidate {
    let grammar = Grammar::from_patterns(ids.iter().map(|id| all[id].clone()))
        .expect("ids are distinct");
    let g: f64 = ids.iter().map(|id| raw_cost(&all[id], model)).sum();
    let mut e = 0.0;
    let mut usage: BTreeMap<PatternId, u64> = BTreeMap::new();
    for s in corpus {
        let (bits, mut used) = sentence_bits(s, &grammar, model);
        e += bits;
        used.sort_unstable();
        used.dedup();
        for id in used {
            *usage.entry(id).or_insert(0) += 1;
        }
    }
    let mut grammar = grammar;
    for (&id, &n) in &usage {
        grammar.set_frequency(id, n).expect("usage is positive");
    }
    GrammarCandidate {
        pattern_ids: ids.to_vec(),
        grammar,
        g,
        e,
        total: g + e,
    }
}

/// The lowest `G + E` over every subset of the pool and the verbatim
/// baseline. Ties go to fewer patterns, then smaller ids.
pub fn exhaustive_grammar(
    pool: &CandidatePool,
    corpus: &[Pattern],
    bounds: &Bounds,
    model: &CostModel,
) -> Result<GrammarCandidate> {
    if pool.len() > bounds.max_candidates {
        return Err(Error::BoundsExceeded(format!(
            "pool has {} patterns, limit {}",
            pool.len(),
            bounds.max_candidates
        )));
    }
    if let Some(s) = corpus.iter().find(|s| s.len() > bounds.max_new_len) {
        return Err(Error::BoundsExceeded(format!(
            "corpus pattern has {} symbols, limit {}",
            s.len(),
            bounds.max_new_len
        )));
    }
    let baseline: Vec<Pattern> = pool.baseline(corpus);
    let all: BTreeMap<PatternId, Pattern> = pool
        .patterns()
        .iter()
        .chain(&baseline)
        .map(|p| (p.id, p.clone()))
        .collect();
    let pool_ids: Vec<PatternId> = pool.patterns().iter().map(|p| p.id).collect();
    let mut subsets: Vec<Vec<PatternId>> = (0u32..1 << pool_ids.len())
        .map(|mask| {
            pool_ids
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &id)| id)
                .collect()
        })
        .collect();
    subsets.push(baseline.iter().map(|p| p.id).collect());
    let best = subsets
        .into_iter()
        .map(|ids| score_subset(&ids, &all, corpus, model))
        .min_by(|a, b| {
            cmp_bits(a.total, b.total)
                .then_with(|| a.pattern_ids.len().cmp(&b.pattern_ids.len()))
                .then_with(|| a.pattern_ids.cmp(&b.pattern_ids))
        })
        .expect("the empty subset is always scored");
    Ok(best)
}
