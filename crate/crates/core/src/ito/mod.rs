//! Specializations of the surjection logarithm: the log of the Itô flow map
//! of a driver system, and entry-wise logarithms for linear matrix equations.

mod alphabet;
mod logflow;
mod matrix;

pub use alphabet::{apply_vanishing_rules, DriverAlphabet};
pub use logflow::{format_log_flow, instantiate_all, log_flow_terms, template_symbol, LogTerm, LogTermJson};
pub use matrix::{
    contraction_words, decode_pair_letter, matrix_exp, matrix_ito_taylor, matrix_log, pair_letter,
    pair_word_symbol, MatrixExpansion,
};
