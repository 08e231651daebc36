//! Word calculus in free groups and two-factor free products.
//!
//! The crate provides exact, integer-only machinery for:
//!
//! - reduced words over ranked alphabets ([`word`], [`mod@parse`]),
//! - syllable decompositions and the Rhemtulla weight function
//!   ([`free_product`]),
//! - commutator-length lower/upper bounds, the Wicks commutator decision and
//!   the divergence table for powers of `[ab, ba]` ([`cl`]),
//! - truncated Magnus expansions and lower-central-series membership
//!   ([`magnus`]),
//! - folded subgroup automata ([`stallings`]),
//! - rewriting over the abelianization kernel ([`schreier`]),
//! - the iterated substitution tower and its inequality-chain certificate
//!   ([`tower`]).
//!
//! All arithmetic is arbitrary-precision; nothing here touches floating
//! point.

pub mod cl;
pub mod free_product;
pub mod magnus;
pub mod matrix;
pub mod parse;
pub mod sampling;
pub mod schreier;
pub mod stallings;
pub mod tower;
pub mod word;

pub use cl::{
    cl_bounds, cl_lower_bound, is_commutator, remark_identity_check, sup_divergence_table,
    ClBounds, ClError, RemarkReport, RemarkTrial, SupRow,
};
pub use free_product::{
    multiplicity, syllables, weight, FreeProductError, Part, Split, SyllableForm,
};
pub use magnus::{
    expand, in_lower_central, lcs_degree, LcsDegreeResult, MagnusError, Monomial, TruncatedSeries,
};
pub use matrix::{eval_matrix, Mat2, MatrixAssignment, MatrixError};
pub use parse::{parse, parse_budgeted, scan_generators, ParseError, ParseErrorKind};
pub use schreier::{
    cl_upper_bound, expand_letters, rewrite, ClUpperBound, SchreierError, SchreierLetter,
};
pub use stallings::{commutator_family, FoldOrder, StallingsError, SubgroupGraph};
pub use tower::{
    choose_l, direct_limit_rank, CertificateFailure, CertificateParams, TowerAlphabet,
    TowerCertificate, TowerError, TowerStage,
};
pub use word::{Alphabet, ExponentVector, FreeWord, Run, WordError};
