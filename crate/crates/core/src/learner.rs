//! Unsupervised grammar learning.
//!
//! Phase one reads the corpus one pattern at a time. Each pattern is aligned
//! against the patterns derived so far and the best alignment is cut into
//! chunks (matched runs), alternatives (unmatched runs at the same place)
//! and one abstract pattern recording their order. Phase two compiles
//! grammars from the derived patterns, keeping those that minimise the size
//! of the grammar plus the size of the corpus encoded with it, `G + E`.
//!
//! Derived patterns are wrapped in code symbols: `< %k d ... >`, where `%k`
//! names a class and `d` picks one member of it. A reference to a class is
//! written `< %k >`.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alignment::{build_alignments, derive_encoding, AlignParams, Cell, MultipleAlignment};
use crate::cost::{build_cost_model, raw_cost, CostModel};
use crate::matcher::cmp_bits;
use crate::pattern::{Grammar, Origin, Pattern, PatternId};
use crate::symbol::{Role, Symbol, TokenId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileParams {
    pub grammar_beam: usize,
    pub max_rounds: usize,
    pub align: AlignParams,
}

impl Default for CompileParams {
    fn default() -> Self {
        CompileParams {
            grammar_beam: 10,
            max_rounds: usize::MAX,
            align: AlignParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnParams {
    pub grammar_beam: usize,
    /// Compile rounds; `None` means one round per pool pattern.
    pub max_rounds: Option<usize>,
    pub align: AlignParams,
}

impl Default for LearnParams {
    fn default() -> Self {
        LearnParams {
            grammar_beam: 10,
            max_rounds: None,
            align: AlignParams::default(),
        }
    }
}

/// Patterns derived so far. A pattern's frequency is its derivation count:
/// the number of alignments that produced or re-used it.
#[derive(Debug, Clone, Default)]
pub struct CandidatePool {
    patterns: Vec<Pattern>,
    class_counter: u64,
    discriminator_counter: u64,
    /// Tokens fresh code symbols must avoid: the corpus and every code
    /// symbol handed out so far.
    reserved: HashSet<TokenId>,
}

/// What one alignment contributes to the pool.
#[derive(Debug, Clone, Default)]
pub struct Derivation {
    pub new: Vec<Pattern>,
    pub reused: Vec<PatternId>,
}

/// The shape of a code-wrapped pattern.
fn code_parts(p: &Pattern) -> Option<(TokenId, &[Symbol])> {
    let s = p.symbols();
    let is = |i: usize, text: &str| s[i].is_id() && &*s[i].text() == text;
    if s.len() < 4 || !is(0, "<") || !is(s.len() - 1, ">") || !s[1].is_id() || !s[2].is_id() {
        return None;
    }
    s[1].text()
        .starts_with('%')
        .then(|| (s[1].token, &s[3..s.len() - 1]))
}

fn body_signature(body: &[Symbol]) -> Vec<(TokenId, Role)> {
    body.iter().map(|s| (s.token, s.role)).collect()
}

fn id_symbol(text: &str) -> Symbol {
    Symbol::id(text).expect("code symbols are valid tokens")
}

fn reference(class: TokenId) -> [Symbol; 3] {
    [
        id_symbol("<"),
        Symbol {
            token: class,
            role: Role::Id,
        },
        id_symbol(">"),
    ]
}

impl CandidatePool {
    /// An empty pool whose code symbols will not collide with any token of
    /// `corpus`.
    pub fn for_corpus(corpus: &[Pattern]) -> Self {
        let mut pool = CandidatePool {
            class_counter: 1,
            discriminator_counter: 1,
            ..Default::default()
        };
        pool.reserved = corpus.iter().flat_map(|p| p.tokens()).collect();
        for t in ["<", ">"] {
            pool.reserved.insert(id_symbol(t).token);
        }
        pool
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// The pool as a grammar, frequencies being derivation counts.
    pub fn grammar(&self) -> Grammar {
        Grammar::from_patterns(self.patterns.iter().cloned()).expect("pool ids are distinct")
    }

    fn fresh(&mut self, class: bool) -> TokenId {
        loop {
            let (counter, prefix) = if class {
                (&mut self.class_counter, "%")
            } else {
                (&mut self.discriminator_counter, "")
            };
            let text = format!("{prefix}{counter}");
            *counter += 1;
            let token = id_symbol(&text).token;
            if self.reserved.insert(token) {
                return token;
            }
        }
    }

    fn find_body(&self, extra: &[Pattern], body: &[Symbol]) -> Option<(PatternId, TokenId)> {
        let sig = body_signature(body);
        self.patterns.iter().chain(extra).find_map(|p| {
            let (class, b) = code_parts(p)?;
            (body_signature(b) == sig).then_some((p.id, class))
        })
    }

    /// Wraps `body` as a new member of `class` (a fresh class when `None`).
    fn wrap(&mut self, id: PatternId, class: Option<TokenId>, body: &[Symbol]) -> Pattern {
        let class = class.unwrap_or_else(|| self.fresh(true));
        let d = self.fresh(false);
        let mut symbols = vec![id_symbol("<")];
        for token in [class, d] {
            symbols.push(Symbol {
                token,
                role: Role::Id,
            });
        }
        symbols.extend_from_slice(body);
        symbols.push(id_symbol(">"));
        Pattern::new(id, symbols, 1, Origin::Derived).expect("wrapped pattern is nonempty")
    }

    /// Adds a derivation: new patterns enter with count 1, re-used ones
    /// gain one.
    pub fn absorb(&mut self, d: Derivation) {
        let mut bumped = HashSet::new();
        for id in d.reused {
            if bumped.insert(id) {
                let p = &mut self.patterns[id as usize];
                p.set_frequency(p.frequency() + 1).expect("count stays positive");
            }
        }
        for p in d.new {
            debug_assert_eq!(p.id as usize, self.patterns.len());
            self.patterns.push(p);
        }
    }

    /// The verbatim grammar of `corpus`: one code-wrapped pattern per
    /// distinct sentence, frequency its number of occurrences. Sentences
    /// already stored verbatim in the pool keep their pool pattern. Fresh
    /// codes come from a copy of the counters, so the pool is unchanged and
    /// repeated calls agree.
    pub fn baseline(&self, corpus: &[Pattern]) -> Vec<Pattern> {
        let mut scratch = self.clone();
        let mut made: Vec<Pattern> = Vec::new();
        let mut counts: HashMap<PatternId, u64> = HashMap::new();
        for s in corpus {
            let id = match scratch.find_body(&made, s.symbols()) {
                Some((id, _)) => id,
                None => {
                    let id = (self.patterns.len() + made.len()) as PatternId;
                    let p = scratch.wrap(id, None, s.symbols());
                    made.push(p);
                    id
                }
            };
            *counts.entry(id).or_insert(0) += 1;
        }
        let mut ids: Vec<PatternId> = counts.keys().copied().collect();
        ids.sort_unstable();
        ids.into_iter()
            .map(|id| {
                let mut p = self
                    .patterns
                    .get(id as usize)
                    .cloned()
                    .unwrap_or_else(|| made[id as usize - self.patterns.len()].clone());
                p.set_frequency(counts[&id]).expect("count is positive");
                p
            })
            .collect()
    }
}

/// A stretch of an alignment between a New pattern and Old rows.
#[derive(Debug, Clone, PartialEq)]
enum Segment {
    /// New symbols matched, in order, by contents symbols of one Old row.
    Run { new: Vec<usize>, row: usize, old: Vec<usize> },
    /// Unmatched New symbols and unmatched Old contents symbols lying
    /// between the same two runs.
    Gap { new: Vec<usize>, old: Vec<Cell> },
}

fn segments(a: &MultipleAlignment) -> Vec<Segment> {
    // Rank of each contents position within its row.
    let c_rank: Vec<Vec<usize>> = a
        .rows()
        .iter()
        .map(|r| {
            r.symbols
                .iter()
                .scan(0, |n, s| {
                    let k = *n;
                    if s.role == Role::Content {
                        *n += 1;
                    }
                    Some(k)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut gap_new = Vec::new();
    let mut gap_old = Vec::new();
    let mut run: Option<(Vec<usize>, usize, Vec<usize>)> = None;
    for col in a.columns() {
        let new = col.iter().find(|c| c.0 == 0).map(|c| c.1);
        let old = col
            .iter()
            .copied()
            .find(|&(r, q)| r > 0 && a.rows()[r].symbols[q].role == Role::Content);
        match (new, old) {
            (Some(p), Some((r, q))) => {
                let extends = run.as_ref().is_some_and(|(n, row, o)| {
                    gap_new.is_empty()
                        && gap_old.is_empty()
                        && *row == r
                        && *n.last().unwrap() + 1 == p
                        && c_rank[r][*o.last().unwrap()] + 1 == c_rank[r][q]
                });
                if extends {
                    let (n, _, o) = run.as_mut().unwrap();
                    n.push(p);
                    o.push(q);
                } else {
                    if let Some((new, row, old)) = run.take() {
                        out.push(Segment::Run { new, row, old });
                    }
                    if !gap_new.is_empty() || !gap_old.is_empty() {
                        out.push(Segment::Gap {
                            new: std::mem::take(&mut gap_new),
                            old: std::mem::take(&mut gap_old),
                        });
                    }
                    run = Some((vec![p], r, vec![q]));
                }
            }
            (Some(p), None) => {
                if let Some((new, row, old)) = run.take() {
                    out.push(Segment::Run { new, row, old });
                }
                gap_new.push(p);
            }
            (None, Some(cell)) => {
                if let Some((new, row, old)) = run.take() {
                    out.push(Segment::Run { new, row, old });
                }
                gap_old.push(cell);
            }
            (None, None) => {}
        }
    }
    if let Some((new, row, old)) = run {
        out.push(Segment::Run { new, row, old });
    }
    if !gap_new.is_empty() || !gap_old.is_empty() {
        out.push(Segment::Gap {
            new: gap_new,
            old: gap_old,
        });
    }
    out
}

/// The best of a ranked list of alignments: highest CD, and among equal CD
/// the one cutting New into the fewest pieces.
pub fn best_alignment(alignments: &[MultipleAlignment]) -> Option<&MultipleAlignment> {
    let top = alignments.first()?.score();
    alignments
        .iter()
        .take_while(|a| cmp_bits(a.score(), top).is_eq())
        .min_by_key(|a| segments(a).len())
}

/// Cuts the alignment into chunk, alternative and abstract patterns. `None`
/// stands for no alignment: `new` is stored verbatim. Fresh code symbols are
/// drawn from `pool`, which is otherwise unchanged until the result is
/// passed to [`CandidatePool::absorb`].
pub fn derive_candidates(
    a: Option<&MultipleAlignment>,
    new: &Pattern,
    pool: &mut CandidatePool,
) -> Derivation {
    let mut d = Derivation::default();
    let a = match a {
        Some(a) if a.rows().len() > 1 => a,
        _ => {
            match pool.find_body(&[], new.symbols()) {
                Some((id, _)) => d.reused.push(id),
                None => {
                    let id = pool.len() as PatternId;
                    d.new.push(pool.wrap(id, None, new.symbols()));
                }
            }
            return d;
        }
    };
    let rows = a.rows();
    let contents = |r: usize| -> Vec<usize> {
        (0..rows[r].symbols.len())
            .filter(|&q| rows[r].symbols[q].role == Role::Content)
            .collect()
    };
    // A wrapped Old row whose contents are exactly `old`.
    let whole_row = |pool: &CandidatePool, cells: &[Cell]| -> Option<(PatternId, TokenId)> {
        let r = cells.first()?.0;
        if cells.iter().any(|c| c.0 != r) {
            return None;
        }
        let qs: Vec<usize> = cells.iter().map(|c| c.1).collect();
        if qs != contents(r) {
            return None;
        }
        let id = rows[r].pattern?;
        let (class, _) = code_parts(pool.patterns.get(id as usize)?)?;
        Some((id, class))
    };

    let segs = segments(a);
    let full = segs.iter().all(|s| match s {
        Segment::Run { row, old, .. } => {
            let cells: Vec<Cell> = old.iter().map(|&q| (*row, q)).collect();
            whole_row(pool, &cells).is_some()
        }
        Segment::Gap { .. } => false,
    });
    if full {
        d.reused = rows.iter().filter_map(|r| r.pattern).collect();
        return d;
    }

    let next_id = |pool: &CandidatePool, d: &Derivation| (pool.len() + d.new.len()) as PatternId;
    let new_body = |ps: &[usize]| -> Vec<Symbol> {
        ps.iter()
            .map(|&p| Symbol {
                token: a.new_symbols()[p].token,
                role: Role::Content,
            })
            .collect()
    };
    // Class referenced by each segment, filled in two passes so that chunks
    // are numbered before alternatives.
    let mut refs: Vec<Option<TokenId>> = vec![None; segs.len()];
    for (i, s) in segs.iter().enumerate() {
        if let Segment::Run { new, row, old } = s {
            let cells: Vec<Cell> = old.iter().map(|&q| (*row, q)).collect();
            let body = new_body(new);
            let found = whole_row(pool, &cells).or_else(|| pool.find_body(&d.new, &body));
            refs[i] = Some(match found {
                Some((id, class)) => {
                    d.reused.push(id);
                    class
                }
                None => {
                    let p = pool.wrap(next_id(pool, &d), None, &body);
                    let class = code_parts(&p).unwrap().0;
                    d.new.push(p);
                    class
                }
            });
        }
    }
    for (i, s) in segs.iter().enumerate() {
        if let Segment::Gap { new, old } = s {
            let mut class = None;
            if !old.is_empty() {
                let body: Vec<Symbol> = old
                    .iter()
                    .map(|&c| *a.symbol(c))
                    .collect();
                let found = whole_row(pool, old).or_else(|| pool.find_body(&d.new, &body));
                class = Some(match found {
                    Some((id, class)) => {
                        d.reused.push(id);
                        class
                    }
                    None => {
                        let p = pool.wrap(next_id(pool, &d), None, &body);
                        let class = code_parts(&p).unwrap().0;
                        d.new.push(p);
                        class
                    }
                });
            }
            if !new.is_empty() {
                let body = new_body(new);
                refs[i] = Some(match pool.find_body(&d.new, &body) {
                    Some((id, class)) => {
                        d.reused.push(id);
                        class
                    }
                    None => {
                        let p = pool.wrap(next_id(pool, &d), class, &body);
                        let class = code_parts(&p).unwrap().0;
                        d.new.push(p);
                        class
                    }
                });
            }
        }
    }
    let refs: Vec<TokenId> = refs.into_iter().flatten().collect();
    if refs.len() > 1 {
        let body: Vec<Symbol> = refs.iter().flat_map(|&c| reference(c)).collect();
        match pool.find_body(&d.new, &body) {
            Some((id, _)) => d.reused.push(id),
            None => {
                let p = pool.wrap(next_id(pool, &d), None, &body);
                d.new.push(p);
            }
        }
    }
    d
}

/// Cost of one corpus pattern under `grammar`, with the patterns its best
/// alignment uses.
fn encode_one(
    s: &Pattern,
    grammar: &Grammar,
    params: &AlignParams,
    model: &CostModel,
) -> (f64, Vec<PatternId>) {
    let alignments = build_alignments(std::slice::from_ref(s), grammar, params, model);
    match best_alignment(&alignments) {
        None => (raw_cost(s, model), Vec::new()),
        Some(a) => {
            let residue = a.residue();
            let mut bits = derive_encoding(a).cost(model);
            if !residue.is_empty() {
                bits += residue
                    .iter()
                    .map(|&p| model.symbol_cost(&a.new_symbols()[p]))
                    .sum::<f64>()
                    + model.terminator();
            }
            let mut used = a.old_pattern_ids();
            used.sort_unstable();
            used.dedup();
            (bits, used)
        }
    }
}

/// Distinct corpus patterns with their multiplicities, in first-seen order.
fn distinct(corpus: &[Pattern]) -> Vec<(&Pattern, u64)> {
    let mut out: Vec<(&Pattern, u64)> = Vec::new();
    for s in corpus {
        match out
            .iter_mut()
            .find(|(p, _)| p.signature() == s.signature())
        {
            Some((_, n)) => *n += 1,
            None => out.push((s, 1)),
        }
    }
    out
}

fn usage(
    grammar: &Grammar,
    corpus: &[Pattern],
    params: &AlignParams,
    model: &CostModel,
) -> (f64, BTreeMap<PatternId, u64>) {
    let rows: Vec<(f64, Vec<PatternId>, u64)> = distinct(corpus)
        .par_iter()
        .map(|&(s, n)| {
            let (bits, used) = encode_one(s, grammar, params, model);
            (bits, used, n)
        })
        .collect();
    let mut e = 0.0;
    let mut counts = BTreeMap::new();
    for (bits, used, n) in rows {
        e += bits * n as f64;
        for id in used {
            *counts.entry(id).or_insert(0) += n;
        }
    }
    (e, counts)
}

/// Size in bits of `corpus` encoded with `grammar`: for each pattern the
/// encoding of its best alignment plus the raw cost of what it leaves
/// unmatched.
pub fn encoding_cost_e(
    grammar: &Grammar,
    corpus: &[Pattern],
    params: &AlignParams,
    model: &CostModel,
) -> f64 {
    usage(grammar, corpus, params, model).0
}

#[derive(Debug, Clone, Serialize)]
pub struct GrammarCandidate {
    pub pattern_ids: Vec<PatternId>,
    /// The patterns, frequencies set to how many corpus patterns use them.
    #[serde(skip)]
    pub grammar: Grammar,
    pub g: f64,
    pub e: f64,
    pub total: f64,
}

impl GrammarCandidate {
    pub fn empty(corpus: &[Pattern], model: &CostModel) -> Self {
        let e = corpus.iter().map(|s| raw_cost(s, model)).sum();
        GrammarCandidate {
            pattern_ids: Vec::new(),
            grammar: Grammar::new(),
            g: 0.0,
            e,
            total: e,
        }
    }

    /// Evaluates the patterns `ids` of `all`. Patterns that no corpus
    /// pattern uses are dropped and the rest are re-evaluated until every
    /// pattern is used; frequencies become usage counts.
    pub fn evaluate(
        ids: &[PatternId],
        all: &BTreeMap<PatternId, Pattern>,
        corpus: &[Pattern],
        params: &AlignParams,
        model: &CostModel,
    ) -> Self {
        let mut ids: Vec<PatternId> = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        loop {
            if ids.is_empty() {
                return Self::empty(corpus, model);
            }
            let grammar = Grammar::from_patterns(ids.iter().map(|id| all[id].clone()))
                .expect("ids are distinct");
            let (e, counts) = usage(&grammar, corpus, params, model);
            let used: Vec<PatternId> = ids
                .iter()
                .copied()
                .filter(|id| counts.contains_key(id))
                .collect();
            if used.len() < ids.len() {
                ids = used;
                continue;
            }
            let mut grammar = grammar;
            for (&id, &n) in &counts {
                grammar.set_frequency(id, n).expect("usage is positive");
            }
            let g = ids.iter().map(|id| raw_cost(&all[id], model)).sum::<f64>();
            return GrammarCandidate {
                pattern_ids: ids,
                grammar,
                g,
                e,
                total: g + e,
            };
        }
    }

    fn rank_cmp(&self, other: &Self) -> std::cmp::Ordering {
        cmp_bits(self.total, other.total)
            .then_with(|| self.pattern_ids.len().cmp(&other.pattern_ids.len()))
            .then_with(|| self.pattern_ids.cmp(&other.pattern_ids))
    }
}

/// Every pattern a compile may use: the pool plus the verbatim baseline.
pub fn compile_universe(pool: &CandidatePool, corpus: &[Pattern]) -> BTreeMap<PatternId, Pattern> {
    pool.patterns
        .iter()
        .cloned()
        .chain(pool.baseline(corpus))
        .map(|p| (p.id, p))
        .collect()
}

/// The cost model used to compare grammars learned from `pool`: symbol
/// frequencies of the pool and the verbatim baseline together, so every
/// candidate grammar is priced with the same code.
pub fn learning_model(pool: &CandidatePool, corpus: &[Pattern]) -> CostModel {
    let g = Grammar::from_patterns(compile_universe(pool, corpus).into_values())
        .expect("ids are distinct");
    build_cost_model(&g)
}

/// Staged search over grammars. The beam starts from the empty grammar and
/// the verbatim baseline; each round adds one pool pattern to, or removes
/// one pattern from, each survivor.
/// Candidates come back sorted by ascending `G + E`.
pub fn compile_grammars(
    pool: &CandidatePool,
    corpus: &[Pattern],
    params: &CompileParams,
    model: &CostModel,
) -> Vec<GrammarCandidate> {
    if corpus.is_empty() {
        return vec![GrammarCandidate::empty(corpus, model)];
    }
    let all = compile_universe(pool, corpus);
    let baseline: Vec<PatternId> = pool.baseline(corpus).iter().map(|p| p.id).collect();

    // Frequent patterns first, then large ones.
    let mut order: Vec<&Pattern> = pool.patterns.iter().collect();
    let weight = |p: &Pattern| {
        let coverage: f64 = p
            .symbols()
            .iter()
            .filter(|s| s.role == Role::Content)
            .map(|s| model.symbol_cost(s))
            .sum();
        p.frequency() as f64 * coverage
    };
    order.sort_by(|a, b| cmp_bits(weight(b), weight(a)).then(a.id.cmp(&b.id)));

    let mut cache: HashMap<Vec<PatternId>, GrammarCandidate> = HashMap::new();
    let mut evaluate = |sets: Vec<Vec<PatternId>>| -> Vec<GrammarCandidate> {
        let todo: Vec<Vec<PatternId>> = sets
            .iter()
            .filter(|s| !cache.contains_key(*s))
            .cloned()
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let done: Vec<(Vec<PatternId>, GrammarCandidate)> = todo
            .into_par_iter()
            .map(|s| {
                let c = GrammarCandidate::evaluate(&s, &all, corpus, &params.align, model);
                (s, c)
            })
            .collect();
        cache.extend(done);
        sets.iter().map(|s| cache[s].clone()).collect()
    };

    let mut beam = prune(evaluate(vec![Vec::new(), baseline]), params.grammar_beam);
    for _ in 0..params.max_rounds {
        let mut sets = Vec::new();
        for c in &beam {
            for p in &order {
                if !c.pattern_ids.contains(&p.id) {
                    let mut s = c.pattern_ids.clone();
                    s.push(p.id);
                    s.sort_unstable();
                    sets.push(s);
                }
            }
            // Dropping a pattern lets a grammar shed one that only a stray
            // corpus pattern uses.
            for i in 0..c.pattern_ids.len() {
                let mut s = c.pattern_ids.clone();
                s.remove(i);
                sets.push(s);
            }
        }
        if sets.is_empty() {
            break;
        }
        let best = beam[0].total;
        let mut next = beam.clone();
        next.extend(evaluate(sets));
        beam = prune(next, params.grammar_beam);
        if cmp_bits(beam[0].total, best).is_ge() {
            break;
        }
    }
    beam
}

fn prune(mut cands: Vec<GrammarCandidate>, width: usize) -> Vec<GrammarCandidate> {
    cands.sort_by(|a, b| a.rank_cmp(b));
    let mut seen = HashSet::new();
    cands.retain(|c| seen.insert(c.pattern_ids.clone()));
    cands.truncate(width.max(1));
    cands
}

/// Phase one: reads the corpus in order, deriving patterns from the best
/// alignment of each corpus pattern against the pool.
pub fn build_pool(corpus: &[Pattern], params: &AlignParams) -> CandidatePool {
    let mut pool = CandidatePool::for_corpus(corpus);
    for s in corpus {
        let d = if pool.is_empty() {
            derive_candidates(None, s, &mut pool)
        } else {
            let grammar = pool.grammar();
            let model = build_cost_model(&grammar);
            let alignments = build_alignments(std::slice::from_ref(s), &grammar, params, &model);
            derive_candidates(best_alignment(&alignments), s, &mut pool)
        };
        pool.absorb(d);
    }
    pool
}

/// Both phases. Returns the pool and the compiled grammars, best first.
pub fn learn_with_pool(
    corpus: &[Pattern],
    params: &LearnParams,
) -> (CandidatePool, Vec<GrammarCandidate>) {
    let pool = build_pool(corpus, &params.align);
    let model = learning_model(&pool, corpus);
    let compile = CompileParams {
        grammar_beam: params.grammar_beam,
        max_rounds: params.max_rounds.unwrap_or(pool.len().max(1)),
        align: params.align,
    };
    let ranked = compile_grammars(&pool, corpus, &compile, &model);
    (pool, ranked)
}

pub fn learn(corpus: &[Pattern], params: &LearnParams) -> Vec<GrammarCandidate> {
    learn_with_pool(corpus, params).1
}
