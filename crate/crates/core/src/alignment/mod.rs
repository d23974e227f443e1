//! Multiple alignments of New material against Old patterns.
//!
//! Row 0 holds the New symbols; every other row is one instance of an Old
//! pattern. Matched occurrences share a column. Columns are only partially
//! ordered by the rows that run through them; they are stored in a canonical
//! topological order in which, whenever several columns are free to come
//! next, the one holding the lowest `(row, position)` occurrence wins.

mod encode;
mod search;

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::cost::CostModel;
use crate::matcher::cmp_bits;
use crate::pattern::{Pattern, PatternId};
use crate::symbol::{Role, Symbol};

pub use encode::{
    compression_difference, derive_encoding, generate, relative_probabilities, Encoding, Surface,
};
pub use search::{build_alignments, AlignParams};

/// `(row, position)` of one occurrence.
pub type Cell = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// `None` for row 0, the New row.
    pub pattern: Option<PatternId>,
    pub symbols: Vec<Symbol>,
}

/// Order-independent identity of an alignment, used to drop duplicates
/// reached through different row orders.
pub type AlignmentKey = Vec<Vec<(u32, u32)>>;

#[derive(Debug, Clone)]
pub struct MultipleAlignment {
    rows: Vec<Row>,
    columns: Vec<Vec<Cell>>,
    /// `cell_column[row][pos]` is the column holding that occurrence.
    cell_column: Vec<Vec<usize>>,
    /// Where each New pattern starts in row 0.
    new_starts: Vec<usize>,
    score: f64,
}

impl MultipleAlignment {
    /// The alignment of the New symbols with nothing; every New symbol is
    /// its own column.
    pub fn new_only(new: Vec<Symbol>) -> Self {
        let columns = (0..new.len()).map(|p| vec![(0, p)]).collect();
        let cell_column = vec![(0..new.len()).collect()];
        MultipleAlignment {
            rows: vec![Row {
                pattern: None,
                symbols: new,
            }],
            columns,
            cell_column,
            new_starts: vec![0],
            score: 0.0,
        }
    }

    /// Concatenates New patterns into row 0.
    pub fn from_new_patterns(new: &[Pattern]) -> Self {
        let mut a = Self::new_only(
            new.iter()
                .flat_map(|p| p.symbols().iter().copied())
                .collect(),
        );
        a.new_starts = new
            .iter()
            .scan(0, |at, p| {
                let start = *at;
                *at += p.len();
                Some(start)
            })
            .collect();
        a
    }

    /// Index of the New pattern holding row-0 position `pos`.
    pub fn new_pattern_of(&self, pos: usize) -> usize {
        self.new_starts.partition_point(|&s| s <= pos).saturating_sub(1)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn columns(&self) -> &[Vec<Cell>] {
        &self.columns
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn new_symbols(&self) -> &[Symbol] {
        &self.rows[0].symbols
    }

    pub fn symbol(&self, (row, pos): Cell) -> &Symbol {
        &self.rows[row].symbols[pos]
    }

    pub fn column_of(&self, (row, pos): Cell) -> usize {
        self.cell_column[row][pos]
    }

    /// Pattern ids of the Old rows, in row order.
    pub fn old_pattern_ids(&self) -> Vec<PatternId> {
        self.rows.iter().filter_map(|r| r.pattern).collect()
    }

    /// Positions of row 0 that share a column with some Old row.
    pub fn encoded_new(&self) -> Vec<usize> {
        (0..self.rows[0].symbols.len())
            .filter(|&p| self.columns[self.cell_column[0][p]].len() > 1)
            .collect()
    }

    /// Positions of row 0 left unmatched.
    pub fn residue(&self) -> Vec<usize> {
        (0..self.rows[0].symbols.len())
            .filter(|&p| self.columns[self.cell_column[0][p]].len() == 1)
            .collect()
    }

    pub fn matches_all_new(&self) -> bool {
        self.residue().is_empty()
    }

    pub fn key(&self) -> AlignmentKey {
        let label = |&(r, p): &Cell| -> (u32, u32) {
            (self.rows[r].pattern.map_or(u32::MAX, |id| id), p as u32)
        };
        let mut key: Vec<Vec<(u32, u32)>> = self
            .columns
            .iter()
            .map(|c| {
                let mut v: Vec<_> = c.iter().map(label).collect();
                v.sort_unstable();
                v
            })
            .collect();
        key.sort_unstable();
        key
    }

    /// Whether an occurrence of `pattern` with `role` may be added to
    /// `column`. An Old pattern is never matched against another instance of
    /// itself; a contents symbol joins only a column holding a New symbol;
    /// an ID column holds at most two Old ID occurrences, one reference and
    /// the pattern it refers to.
    pub fn can_join(&self, column: usize, pattern: PatternId, role: Role) -> bool {
        let col = &self.columns[column];
        if col.iter().any(|&(r, _)| self.rows[r].pattern == Some(pattern)) {
            return false;
        }
        match role {
            Role::Content => matches!(col[..], [(0, _)]),
            Role::Id => {
                col.iter()
                    .filter(|&&(r, p)| r > 0 && self.rows[r].symbols[p].role == Role::Id)
                    .count()
                    < 2
            }
        }
    }

    /// Checks that apply to a finished alignment. When New holds contents
    /// symbols, an Old row with contents symbols must either match one of
    /// them to New or have all its ID symbols matched, so that it adds
    /// nothing to the encoding. The Old rows must also fix the order of each
    /// New pattern's matched symbols.
    pub fn is_admissible(&self) -> bool {
        let content = |s: &Symbol| s.role == Role::Content;
        let joined = |r: usize, p: usize| self.columns[self.cell_column[r][p]].len() > 1;
        let explained = !self.new_symbols().iter().any(content)
            || self.rows.iter().enumerate().skip(1).all(|(r, row)| {
                let mut syms = row.symbols.iter().enumerate();
                !row.symbols.iter().any(content)
                    || syms.clone().any(|(p, s)| content(s) && joined(r, p))
                    || syms.all(|(p, s)| content(s) || joined(r, p))
            });
        explained && self.unordered_new_pairs() == 0
    }

    /// Adds `pattern` as a new row, joining `pairs` of `(column, position)`.
    ///
    /// Returns `None` when the result would break an alignment invariant:
    /// mismatched tokens, a column reused, a pattern matched against itself,
    /// or a row order that no arrangement of columns can satisfy.
    pub fn with_row(
        &self,
        pattern: &Pattern,
        pairs: &[(usize, usize)],
        model: &CostModel,
    ) -> Option<MultipleAlignment> {
        let row = self.rows.len();
        let mut columns = self.columns.clone();
        let mut matched = vec![false; pattern.len()];
        let mut used = vec![false; columns.len()];
        for &(c, q) in pairs {
            if c >= columns.len() || q >= pattern.len() || used[c] || matched[q] {
                return None;
            }
            let cell = columns[c][0];
            let s = pattern.symbols()[q];
            if self.symbol(cell).token != s.token || !self.can_join(c, pattern.id, s.role) {
                return None;
            }
            used[c] = true;
            matched[q] = true;
            columns[c].push((row, q));
        }
        for (q, m) in matched.iter().enumerate() {
            if !m {
                columns.push(vec![(row, q)]);
            }
        }
        let mut rows = self.rows.clone();
        rows.push(Row {
            pattern: Some(pattern.id),
            symbols: pattern.symbols().to_vec(),
        });
        let mut a = Self::arrange(rows, columns)?;
        a.new_starts = self.new_starts.clone();
        a.score = compression_difference(&a, model);
        Some(a)
    }

    /// Puts columns into canonical order; `None` if the rows' orders conflict.
    fn arrange(rows: Vec<Row>, columns: Vec<Vec<Cell>>) -> Option<MultipleAlignment> {
        let n = columns.len();
        let mut cell_column: Vec<Vec<usize>> = rows
            .iter()
            .map(|r| vec![usize::MAX; r.symbols.len()])
            .collect();
        for (c, col) in columns.iter().enumerate() {
            for &(r, p) in col {
                if cell_column[r][p] != usize::MAX {
                    return None;
                }
                cell_column[r][p] = c;
            }
        }
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for chain in &cell_column {
            for w in chain.windows(2) {
                succ[w[0]].push(w[1]);
                indeg[w[1]] += 1;
            }
        }
        let key = |c: usize| *columns[c].iter().min().unwrap();
        let mut heap: BinaryHeap<Reverse<(Cell, usize)>> = (0..n)
            .filter(|&c| indeg[c] == 0)
            .map(|c| Reverse((key(c), c)))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, c))) = heap.pop() {
            order.push(c);
            for &s in &succ[c] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    heap.push(Reverse((key(s), s)));
                }
            }
        }
        if order.len() != n {
            return None;
        }
        let mut slots: Vec<Option<Vec<Cell>>> = columns.into_iter().map(Some).collect();
        let mut columns = Vec::with_capacity(n);
        for (new_index, &old) in order.iter().enumerate() {
            let mut col = slots[old].take().unwrap();
            col.sort_unstable();
            for &(r, p) in &col {
                cell_column[r][p] = new_index;
            }
            columns.push(col);
        }
        let a = MultipleAlignment {
            rows,
            columns,
            cell_column,
            new_starts: vec![0],
            score: 0.0,
        };
        debug_assert!(a.check_invariants().is_ok());
        Some(a)
    }

    /// Verifies column consistency, row order, and single membership.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen: Vec<Vec<bool>> = self
            .rows
            .iter()
            .map(|r| vec![false; r.symbols.len()])
            .collect();
        for (c, col) in self.columns.iter().enumerate() {
            if col.is_empty() {
                return Err(format!("column {c} is empty"));
            }
            let token = self.symbol(col[0]).token;
            let mut rows_here = Vec::new();
            for &cell in col {
                if self.symbol(cell).token != token {
                    return Err(format!("column {c} mixes tokens"));
                }
                if seen[cell.0][cell.1] {
                    return Err(format!("occurrence {cell:?} in two columns"));
                }
                seen[cell.0][cell.1] = true;
                if rows_here.contains(&cell.0) {
                    return Err(format!("column {c} holds row {} twice", cell.0));
                }
                rows_here.push(cell.0);
                if self.cell_column[cell.0][cell.1] != c {
                    return Err(format!("stale column index for {cell:?}"));
                }
            }
        }
        if seen.iter().flatten().any(|s| !s) {
            return Err("an occurrence has no column".into());
        }
        for (r, chain) in self.cell_column.iter().enumerate() {
            if chain.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("row {r} is out of order"));
            }
        }
        Ok(())
    }

    /// Number of adjacent matched symbols of one New pattern whose order
    /// the Old rows alone leave open. Zero means the encoding can be
    /// decoded without row 0.
    pub fn unordered_new_pairs(&self) -> usize {
        self.unordered_pairs(&self.old_ancestors()).len()
    }

    /// `ancestors[c]`: bitset of the columns the Old rows place at or
    /// before column `c`.
    pub(crate) fn old_ancestors(&self) -> Vec<Vec<u64>> {
        let n = self.columns.len();
        let words = n.div_ceil(64).max(1);
        let mut ancestors = vec![vec![0u64; words]; n];
        for (c, col) in self.columns.iter().enumerate() {
            ancestors[c][c / 64] |= 1 << (c % 64);
            for &(r, p) in col {
                if r > 0 && p > 0 {
                    let pred = self.column_of((r, p - 1));
                    let (lo, hi) = ancestors.split_at_mut(c);
                    for (w, x) in hi[0].iter_mut().zip(&lo[pred]) {
                        *w |= x;
                    }
                }
            }
        }
        ancestors
    }

    /// Column pairs behind [`Self::unordered_new_pairs`].
    pub(crate) fn unordered_pairs(&self, ancestors: &[Vec<u64>]) -> Vec<(usize, usize)> {
        self.encoded_new()
            .windows(2)
            .filter(|w| self.new_pattern_of(w[0]) == self.new_pattern_of(w[1]))
            .map(|w| (self.column_of((0, w[0])), self.column_of((0, w[1]))))
            .filter(|&(a, b)| ancestors[b][a / 64] >> (a % 64) & 1 == 0)
            .collect()
    }

    /// Indices of columns holding more than one occurrence.
    pub fn matched_columns(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&c| self.columns[c].len() > 1)
            .collect()
    }

    /// Total number of columns the Old rows stretch across; smaller means
    /// each pattern is matched more compactly.
    pub fn span(&self) -> usize {
        self.cell_column[1..]
            .iter()
            .map(|cols| cols.iter().max().unwrap() - cols.iter().min().unwrap())
            .sum()
    }

    /// Ranking order: higher CD, fewer rows, smaller span, leftmost matched
    /// columns, smaller row pattern ids, fewer columns, then the structural
    /// key.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        cmp_bits(other.score, self.score)
            .then_with(|| self.rows.len().cmp(&other.rows.len()))
            .then_with(|| self.span().cmp(&other.span()))
            .then_with(|| self.matched_columns().cmp(&other.matched_columns()))
            .then_with(|| self.old_pattern_ids().cmp(&other.old_pattern_ids()))
            .then_with(|| self.columns.len().cmp(&other.columns.len()))
            .then_with(|| self.key().cmp(&other.key()))
    }

    /// Symbols of Old rows with the given role, one per column, in column order.
    pub(crate) fn old_symbols_in_order(&self, role: Role, unmatched_only: bool) -> Vec<Symbol> {
        self.columns
            .iter()
            .filter(|col| !unmatched_only || col.len() == 1)
            .filter_map(|col| {
                col.iter()
                    .filter(|&&(r, _)| r > 0)
                    .map(|&cell| *self.symbol(cell))
                    .find(|s| s.role == role)
            })
            .collect()
    }
}
