//! Information compression via pattern matching, multiple alignment, and
//! unsupervised grammar learning.
//!
//! Knowledge is held as [`Pattern`]s: arrays of atomic symbols. New input is
//! matched against stored Old patterns ([`matcher`]), multiple alignments of
//! New against Old are built and scored by how much they compress the New
//! material ([`alignment`]), and grammars are learned by minimising the size
//! of the grammar plus the size of the corpus encoded with it ([`learner`]).

pub mod alignment;
pub mod cli;
pub mod cost;
pub mod error;
pub mod format;
pub mod learner;
pub mod matcher;
pub mod oracle;
pub mod pattern;
pub mod render;
pub mod symbol;

pub use alignment::{
    build_alignments, compression_difference, derive_encoding, generate, relative_probabilities,
    AlignParams, Encoding, MultipleAlignment, Surface,
};
pub use cost::{build_cost_model, grammar_cost, raw_cost, CostModel};
pub use error::{Error, Result};
pub use matcher::{find_hits, Hit, MatchParams};
pub use pattern::{Grammar, Origin, Pattern, PatternId};
pub use symbol::{intern, Role, Symbol, TokenId};
pub use learner::{
    compile_grammars, derive_candidates, encoding_cost_e, learn, CandidatePool, CompileParams,
    GrammarCandidate, LearnParams,
};
pub use oracle::{exhaustive_alignments, exhaustive_grammar, lcs_score, Bounds};
