//! Shifting, lexicographic compression and the bipartite exchange argument
//! for intersecting and cross-intersecting families of k-sets, with exhaustive
//! verifiers for the classical size bounds.

pub mod binom;
pub mod error;
pub mod family;
pub mod exchange;
pub mod lex;
pub mod matching;
pub mod search;
pub mod set;
pub mod shifting;
pub mod verifiers;

pub use binom::{binom, binom_count, binom_int, BigCount, Exact};
pub use error::{Error, Result};
pub use family::{are_cross_intersecting, FamilyJson, Restriction, SetFamily};
pub use lex::{family_order, kk_compress_pair, lex_family, lex_rank, lex_unrank, max_compatible_partner, LexRank};
pub use set::{GroundParams, KSet};
pub use exchange::{exchange_lemma1, exchange_thm4, ExchangeContext, Point};
pub use search::{SearchConfig, SearchMode};
pub use shifting::{is_shifted, shift_preserving_nontriviality, shift_to_fixpoint, ShiftPair};
pub use verifiers::{Verdict, VerifierReport};
