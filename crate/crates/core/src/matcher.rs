//! Full and partial matching of two symbol sequences.
//!
//! The search walks the driver left to right. At each driver position every
//! surviving partial hit may skip the symbol or pair it with any later target
//! occurrence of the same token. Partial hits that are not dominated in
//! (score, next free target index) are always kept, so the best hit is exact;
//! the remaining `beam_width` slots hold lower-ranked alternatives. Resident
//! state is therefore `O((beam_width + |target|) * min(|driver|, |target|))`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cost::CostModel;
use crate::symbol::Symbol;

pub const SCORE_EPS: f64 = 1e-9;

/// Compares bit scores, treating values within [`SCORE_EPS`] as equal.
pub fn cmp_bits(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= SCORE_EPS {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchParams {
    pub beam_width: usize,
    pub max_hits: usize,
    pub min_pairs: usize,
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams {
            beam_width: 200,
            max_hits: 20,
            min_pairs: 1,
        }
    }
}

/// One alignment of two sequences: `(driver_index, target_index)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub pairs: Vec<(usize, usize)>,
    pub score: f64,
}

impl Hit {
    /// Ranking order: higher score, more pairs, then smaller pair list.
    pub fn rank_cmp(&self, other: &Hit) -> Ordering {
        cmp_bits(other.score, self.score)
            .then_with(|| other.pairs.len().cmp(&self.pairs.len()))
            .then_with(|| self.pairs.cmp(&other.pairs))
    }
}

#[derive(Clone)]
struct Partial {
    pairs: Vec<(usize, usize)>,
    next_target: usize,
    score: f64,
}

pub fn find_hits(
    driver: &[Symbol],
    target: &[Symbol],
    params: &MatchParams,
    model: &CostModel,
) -> Vec<Hit> {
    if driver.is_empty() || target.is_empty() || params.max_hits == 0 {
        return Vec::new();
    }
    let mut beam = vec![Partial {
        pairs: Vec::new(),
        next_target: 0,
        score: 0.0,
    }];
    for (i, d) in driver.iter().enumerate() {
        let cost = model.symbol_cost(d);
        let mut next = Vec::with_capacity(beam.len() * 2);
        for st in &beam {
            next.push(st.clone());
            for (j, t) in target.iter().enumerate().skip(st.next_target) {
                if t.token == d.token {
                    let mut pairs = st.pairs.clone();
                    pairs.push((i, j));
                    next.push(Partial {
                        pairs,
                        next_target: j + 1,
                        score: st.score + cost,
                    });
                }
            }
        }
        beam = prune(next, params.beam_width);
    }
    let mut hits: Vec<Hit> = beam
        .into_iter()
        .filter(|p| p.pairs.len() >= params.min_pairs.max(1))
        .map(|p| Hit {
            pairs: p.pairs,
            score: p.score,
        })
        .collect();
    hits.sort_by(Hit::rank_cmp);
    hits.truncate(params.max_hits);
    hits
}

fn prune(mut states: Vec<Partial>, beam_width: usize) -> Vec<Partial> {
    // Pareto frontier over (score high, next_target low).
    states.sort_by(|a, b| {
        a.next_target
            .cmp(&b.next_target)
            .then_with(|| cmp_bits(b.score, a.score))
            .then_with(|| b.pairs.len().cmp(&a.pairs.len()))
            .then_with(|| a.pairs.cmp(&b.pairs))
    });
    let mut frontier = Vec::new();
    let mut rest = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for st in states {
        if cmp_bits(st.score, best) == Ordering::Greater {
            best = st.score;
            frontier.push(st);
        } else {
            rest.push(st);
        }
    }
    if frontier.len() < beam_width {
        rest.sort_by(|a, b| {
            cmp_bits(b.score, a.score)
                .then_with(|| b.pairs.len().cmp(&a.pairs.len()))
                .then_with(|| a.next_target.cmp(&b.next_target))
                .then_with(|| a.pairs.cmp(&b.pairs))
        });
        rest.truncate(beam_width - frontier.len());
        frontier.extend(rest);
    }
    frontier
}
