//! Staged beam search for multiple alignments.
//!
//! Stage one matches row 0 against every Old pattern. Each later stage takes
//! every surviving alignment and matches each Old pattern against its
//! columns, adding the pattern as one more row. A pattern position may join
//! a column only if that cannot contradict the order of any row already
//! present, so alignments are never forced into one arbitrary ordering of
//! their unmatched material. After each stage only the `align_beam` best
//! alignments survive.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostModel;
use crate::matcher::{cmp_bits, find_hits, Hit, MatchParams};
use crate::pattern::{Grammar, Pattern, PatternId};
use crate::symbol::{Role, TokenId};

use super::{derive_encoding, AlignmentKey, MultipleAlignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignParams {
    pub align_beam: usize,
    pub max_alignments: usize,
    /// Upper bound on search stages; each stage adds one Old row.
    pub max_stages: usize,
    pub matching: MatchParams,
}

impl Default for AlignParams {
    fn default() -> Self {
        AlignParams {
            align_beam: 200,
            max_alignments: 10,
            max_stages: 10,
            matching: MatchParams::default(),
        }
    }
}

/// The fields of [`MultipleAlignment::rank_cmp`], computed once.
#[derive(Debug, Clone)]
struct Rank {
    score: f64,
    rows: usize,
    span: usize,
    columns: usize,
    matched: Vec<usize>,
    ids: Vec<PatternId>,
    key: AlignmentKey,
}

impl Rank {
    fn of(a: &MultipleAlignment) -> Rank {
        Rank {
            score: a.score(),
            rows: a.rows().len(),
            span: a.span(),
            columns: a.columns().len(),
            matched: a.matched_columns(),
            ids: a.old_pattern_ids(),
            key: a.key(),
        }
    }

    fn cmp(&self, other: &Rank) -> Ordering {
        cmp_bits(other.score, self.score)
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.span.cmp(&other.span))
            .then_with(|| self.matched.cmp(&other.matched))
            .then_with(|| self.ids.cmp(&other.ids))
            .then_with(|| self.columns.cmp(&other.columns))
            .then_with(|| self.key.cmp(&other.key))
    }
}

fn key_hash(a: &MultipleAlignment) -> u64 {
    let mut h = DefaultHasher::new();
    a.key().hash(&mut h);
    h.finish()
}

/// A candidate extension, kept small until it survives pruning. `score`
/// is the compression difference the extended alignment will have.
struct Candidate {
    score: f64,
    parent: usize,
    pattern: PatternId,
    /// Position of the hit in its pattern's ranked list.
    order: usize,
    pairs: Vec<(usize, usize)>,
}

pub fn build_alignments(
    new: &[Pattern],
    grammar: &Grammar,
    params: &AlignParams,
    model: &CostModel,
) -> Vec<MultipleAlignment> {
    let base = MultipleAlignment::from_new_patterns(new);
    if base.new_symbols().is_empty() || grammar.is_empty() || params.max_stages == 0 {
        return Vec::new();
    }
    let patterns: Vec<&Pattern> = grammar.patterns().collect();

    let seeds: Vec<Candidate> = patterns
        .par_iter()
        .flat_map_iter(|p| {
            find_hits(base.new_symbols(), p.symbols(), &params.matching, model)
                .into_iter()
                .enumerate()
                .filter_map(|(i, hit)| {
                    let a = base.with_row(p, &hit.pairs, model)?;
                    Some(Candidate {
                        score: a.score(),
                        parent: 0,
                        pattern: p.id,
                        order: i,
                        pairs: hit.pairs,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut seen = HashSet::new();
    let mut frontier = select(seeds, &[base], &mut seen, grammar, params, model);
    let mut kept: Vec<MultipleAlignment> = frontier.clone();

    for _ in 1..params.max_stages {
        let candidates: Vec<Candidate> = frontier
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, a)| extensions(i, a, &patterns, params, model))
            .collect();
        frontier = select(candidates, &frontier, &mut seen, grammar, params, model);
        if frontier.is_empty() {
            break;
        }
        kept.extend(frontier.iter().cloned());
    }

    kept.retain(|a| a.score() > crate::matcher::SCORE_EPS && a.is_admissible());
    let mut ranked: Vec<(Rank, MultipleAlignment)> =
        kept.into_iter().map(|a| (Rank::of(&a), a)).collect();
    ranked.sort_by(|x, y| x.0.cmp(&y.0));
    // Alignments that differ only in which Old contents symbols are joined
    // to each other say the same thing; keep the first.
    let mut readings = HashSet::new();
    ranked.retain(|(_, a)| {
        let mut ids = a.old_pattern_ids();
        ids.sort_unstable();
        readings.insert((a.encoded_new(), ids, derive_encoding(a).symbols))
    });
    ranked.truncate(params.max_alignments);
    ranked.into_iter().map(|(_, a)| a).collect()
}

/// Most alignments one stage keeps for any one multiset of Old patterns.
const PER_SET: usize = 4;

fn select(
    mut candidates: Vec<Candidate>,
    parents: &[MultipleAlignment],
    seen: &mut HashSet<u64>,
    grammar: &Grammar,
    params: &AlignParams,
    model: &CostModel,
) -> Vec<MultipleAlignment> {
    candidates.sort_by(|x, y| {
        cmp_bits(y.score, x.score)
            .then_with(|| x.pattern.cmp(&y.pattern))
            .then_with(|| x.parent.cmp(&y.parent))
            .then_with(|| x.order.cmp(&y.order))
            .then_with(|| x.pairs.cmp(&y.pairs))
    });
    let mut out = Vec::new();
    let mut per_set: HashMap<Vec<PatternId>, usize> = HashMap::new();
    let set_of = |c: &Candidate| {
        let mut ids = parents[c.parent].old_pattern_ids();
        ids.push(c.pattern);
        ids.sort_unstable();
        ids
    };
    // Candidates of equal score form a band; within it, alignments whose
    // Old rows already fix more of the New order come first, then compact
    // ones.
    let mut rest = &candidates[..];
    while !rest.is_empty() && out.len() < params.align_beam {
        let n = rest
            .iter()
            .position(|c| cmp_bits(c.score, rest[0].score) != Ordering::Equal)
            .unwrap_or(rest.len());
        let (band, tail) = rest.split_at(n);
        rest = tail;
        let mut built: Vec<(usize, usize, usize, MultipleAlignment)> = band
            .par_iter()
            .enumerate()
            .filter(|(_, c)| per_set.get(&set_of(c)).map_or(true, |&k| k < PER_SET))
            .filter_map(|(i, c)| {
                let pattern = grammar.get(c.pattern).expect("pattern from grammar");
                let a = parents[c.parent].with_row(pattern, &c.pairs, model)?;
                Some((a.unordered_new_pairs(), a.span(), i, a))
            })
            .collect();
        built.sort_by_key(|b| (b.0, b.1, b.2));
        for (_, _, i, a) in built {
            if out.len() >= params.align_beam {
                break;
            }
            let k = per_set.entry(set_of(&band[i])).or_default();
            if *k >= PER_SET || !seen.insert(key_hash(&a)) {
                continue;
            }
            *k += 1;
            out.push(a);
        }
    }
    out
}

fn extensions(
    parent: usize,
    a: &MultipleAlignment,
    patterns: &[&Pattern],
    params: &AlignParams,
    model: &CostModel,
) -> Vec<Candidate> {
    let order = ColumnOrder::new(a, model);
    let mut out = Vec::new();
    for p in patterns {
        let ids: f64 = p
            .symbols()
            .iter()
            .filter(|s| s.role == Role::Id)
            .map(|s| model.symbol_cost(s))
            .sum();
        for (i, hit) in order.row_hits(a, p, &params.matching, model).into_iter().enumerate() {
            out.push(Candidate {
                score: a.score() + hit.score - ids,
                parent,
                pattern: p.id,
                order: i,
                pairs: hit.pairs,
            });
        }
    }
    out
}

/// Reachability between the columns of one alignment.
pub(crate) struct ColumnOrder {
    words: usize,
    /// `ancestors[c]` has bit `d` set when column `d` must precede or equal `c`.
    ancestors: Vec<Vec<u64>>,
    by_token: HashMap<TokenId, Vec<usize>>,
    /// What joining each column adds to the compression difference.
    gain: Vec<f64>,
}

impl ColumnOrder {
    pub(crate) fn new(a: &MultipleAlignment, model: &CostModel) -> Self {
        let n = a.columns().len();
        let words = n.div_ceil(64).max(1);
        let mut ancestors = vec![vec![0u64; words]; n];
        let mut by_token: HashMap<TokenId, Vec<usize>> = HashMap::new();
        let mut gain = Vec::with_capacity(n);
        for (c, col) in a.columns().iter().enumerate() {
            ancestors[c][c / 64] |= 1 << (c % 64);
            for &(r, p) in col {
                if p > 0 {
                    let pred = a.column_of((r, p - 1));
                    let (lo, hi) = ancestors.split_at_mut(c);
                    for (w, x) in hi[0].iter_mut().zip(&lo[pred]) {
                        *w |= x;
                    }
                }
            }
            by_token.entry(a.symbol(col[0]).token).or_default().push(c);
            let s = a.symbol(col[0]);
            gain.push(match col[..] {
                [(0, _)] => model.symbol_cost(s),
                [_] if s.role == Role::Id => model.symbol_cost(s),
                _ => 0.0,
            });
        }
        ColumnOrder {
            words,
            ancestors,
            by_token,
            gain,
        }
    }

    /// Ranked ways of laying `pattern` against the alignment's columns.
    /// Pairs are `(column, pattern position)`; a hit's score is the change
    /// in compression difference it brings, up to a constant per pattern.
    /// Equal scores prefer more matched cost, then compact placements.
    pub(crate) fn row_hits(
        &self,
        a: &MultipleAlignment,
        pattern: &Pattern,
        params: &MatchParams,
        model: &CostModel,
    ) -> Vec<Hit> {
        struct State {
            blocked: Vec<u64>,
            pairs: Vec<(usize, usize)>,
            score: f64,
            raw: f64,
            /// Distance covered in column order; smaller is more compact.
            spread: usize,
        }
        let better = |x: &State, y: &State| {
            cmp_bits(y.score, x.score)
                .then_with(|| cmp_bits(y.raw, x.raw))
                .then_with(|| x.spread.cmp(&y.spread))
                // a later start leaves room for a more compact finish
                .then_with(|| y.pairs.first().map(|p| p.1).cmp(&x.pairs.first().map(|p| p.1)))
                .then_with(|| x.pairs.cmp(&y.pairs))
        };
        let mut beam = vec![State {
            blocked: vec![0; self.words],
            pairs: Vec::new(),
            score: 0.0,
            raw: 0.0,
            spread: 0,
        }];
        for (q, s) in pattern.symbols().iter().enumerate() {
            let Some(cols) = self.by_token.get(&s.token) else {
                continue;
            };
            let cost = model.symbol_cost(s);
            let own = if s.role == Role::Id { cost } else { 0.0 };
            let cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&c| a.can_join(c, pattern.id, s.role))
                .collect();
            let mut next: Vec<State> = Vec::with_capacity(beam.len() * (cols.len() + 1));
            for st in &beam {
                for &c in &cols {
                    if st.blocked[c / 64] >> (c % 64) & 1 == 1 {
                        continue;
                    }
                    let blocked = st
                        .blocked
                        .iter()
                        .zip(&self.ancestors[c])
                        .map(|(x, y)| x | y)
                        .collect();
                    let spread = st.spread
                        + st.pairs.last().map_or(0, |&(d, qp)| d.abs_diff(c) + (q - qp));
                    let mut pairs = st.pairs.clone();
                    pairs.push((c, q));
                    next.push(State {
                        blocked,
                        pairs,
                        score: st.score + own + self.gain[c],
                        raw: st.raw + cost,
                        spread,
                    });
                }
            }
            next.extend(beam);
            // States with the same blocked set have the same futures within
            // this row, but can differ in what they leave to later rows.
            next.sort_by(|x, y| x.blocked.cmp(&y.blocked).then_with(|| better(x, y)));
            let mut run = 0;
            let mut prev: Option<Vec<u64>> = None;
            next.retain(|st| {
                if prev.as_ref() == Some(&st.blocked) {
                    run += 1;
                } else {
                    run = 0;
                    prev = Some(st.blocked.clone());
                }
                run < SAME_BLOCKED
            });
            next.sort_by(|x, y| {
                better(x, y).then_with(|| popcount(&x.blocked).cmp(&popcount(&y.blocked)))
            });
            next.truncate(params.beam_width.max(1));
            beam = next;
        }
        beam.sort_by(better);
        beam.into_iter()
            .filter(|st| st.pairs.len() >= params.min_pairs.max(1))
            .take(params.max_hits)
            .map(|st| Hit {
                pairs: st.pairs,
                score: st.score,
            })
            .collect()
    }
}

/// Partial hits kept per set of blocked columns.
const SAME_BLOCKED: usize = 3;

fn popcount(bits: &[u64]) -> u32 {
    bits.iter().map(|w| w.count_ones()).sum()
}
