use std::collections::BTreeMap;

use crate::cost::CostModel;
use crate::pattern::{Grammar, Origin, Pattern};
use crate::symbol::{Role, Symbol};

use super::search::{build_alignments, AlignParams};
use super::MultipleAlignment;

/// The ID symbols that identify the New row in terms of the Old rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub symbols: Vec<Symbol>,
}

impl Encoding {
    pub fn cost(&self, model: &CostModel) -> f64 {
        model.sequence_cost(&self.symbols)
    }

    /// The encoding as a pattern of ID symbols; `None` when it is empty.
    pub fn to_pattern(&self) -> Option<Pattern> {
        let symbols = self
            .symbols
            .iter()
            .map(|s| Symbol {
                token: s.token,
                role: Role::Id,
            })
            .collect();
        Pattern::new(0, symbols, 1, Origin::New).ok()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Unmatched ID occurrences of the Old rows, in column order.
pub fn derive_encoding(a: &MultipleAlignment) -> Encoding {
    Encoding {
        symbols: a.old_symbols_in_order(Role::Id, true),
    }
}

/// `B_N - B_E`: cost of the New symbols the alignment accounts for, less
/// the cost of its encoding.
pub fn compression_difference(a: &MultipleAlignment, model: &CostModel) -> f64 {
    let new = a.new_symbols();
    let b_new: f64 = a
        .encoded_new()
        .into_iter()
        .map(|p| model.symbol_cost(&new[p]))
        .sum();
    b_new - derive_encoding(a).cost(model)
}

/// Relative probability of each alignment among those encoding the same
/// New occurrences: `2^-B_E` normalised within the group.
pub fn relative_probabilities(alignments: &[MultipleAlignment], model: &CostModel) -> Vec<f64> {
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, a) in alignments.iter().enumerate() {
        groups.entry(a.encoded_new()).or_default().push(i);
    }
    let bits: Vec<f64> = alignments
        .iter()
        .map(|a| derive_encoding(a).cost(model))
        .collect();
    let mut probs = vec![0.0; alignments.len()];
    for members in groups.values() {
        let floor = members
            .iter()
            .map(|&i| bits[i])
            .fold(f64::INFINITY, f64::min);
        let total: f64 = members.iter().map(|&i| (floor - bits[i]).exp2()).sum();
        for &i in members {
            probs[i] = (floor - bits[i]).exp2() / total;
        }
    }
    probs
}

/// A sequence of contents symbols produced from an encoding.
#[derive(Debug, Clone)]
pub struct Surface {
    pub symbols: Vec<Symbol>,
    pub score: f64,
}

impl Surface {
    pub fn text(&self) -> String {
        self.symbols
            .iter()
            .map(|s| s.text().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Runs the alignment search with an encoding in row 0 and reads back the
/// C symbols of the Old rows. Distinct surfaces are returned in CD order.
pub fn generate(
    encoding: &Pattern,
    grammar: &Grammar,
    params: &AlignParams,
    model: &CostModel,
) -> Vec<Surface> {
    let mut out: Vec<Surface> = Vec::new();
    for a in build_alignments(std::slice::from_ref(encoding), grammar, params, model) {
        let symbols = a.old_symbols_in_order(Role::Content, false);
        if symbols.is_empty() || out.iter().any(|s| s.symbols == symbols) {
            continue;
        }
        out.push(Surface {
            symbols,
            score: a.score(),
        });
    }
    out
}
