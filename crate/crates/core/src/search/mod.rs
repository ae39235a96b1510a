//! Exhaustive and randomized searches over intersecting families.

pub mod diversity;
pub mod enumerate;
pub mod full;
pub mod random;

pub use diversity::{
    candidate_family, max_diversity, problem1_curve, saturate_pair_containing, DiversityReport, Problem1Table, SearchConfig,
    SearchMode,
};
pub use enumerate::{enumerate_shifted_intersecting, fold_shifted_intersecting, EnumStats, FamilyClass, FamilyView, Universe};
pub use full::{enumerate_complementary_choices, enumerate_maximal_intersecting};
