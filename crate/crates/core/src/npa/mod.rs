//! Noncommutative words, the coloring functional and the moment hierarchy.

mod functional;
mod moment;
mod words;

pub use functional::{eval_graph_functional, flat_index, functional_terms, FunctionalTerm};
pub use moment::{
    build_moment_sdp, qc_level_bound, BoundMethod, ConstraintReport, MomentOptions, MomentSdp, QcLevelResult,
    Verdict, DEFAULT_MAX_SOLVER_VARS, DEFAULT_WORD_CAP,
};
pub use words::{count_words, enumerate_words, reduce, Family, Generator, Word};
