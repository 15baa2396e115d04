//! Equivalence classes of permutations under pattern-replacement relations.

pub mod engine;
pub mod error;
pub mod invariants;
pub mod meta;
pub mod oracle;
pub mod perm;
pub mod relation;

pub use engine::{
    class_of, class_sizes_multiset, count_trivial, enumerate_classes, identity_class_size,
    ClassDecomposition, ClassReport, EngineConfig,
};
pub use error::{Error, Result};
pub use invariants::{
    a_k_max, canonical_form, dangerous_pairs, fall, generate_b, generate_c, invariant_report,
    odd_tailed_set, origin_permutation, pdangerous_pairs, predicates, special_families,
    valleys_peaks, w_set, AkSignature, CanonicalKind, InvariantReport, Parity, Predicates,
};
pub use meta::{
    adjacent_equals_subword, avoider_criterion, count_u_avoiders, global_minima,
    repeated_down_jump, stooge_normalize, stooge_sets, CriterionReport, EqualityReport,
    StoogeNormalizer, StoogeSets, Strategy,
};
pub use perm::{all_perms, factor_occurrences, factorial, standardize, subword_occurrences, Perm};
pub use relation::{
    down_jumps, hits, is_avoider, lift_partition, neighbors, parse_partition, symmetry_orbit,
    Mode, ParseOptions, ParseWarning, Partition, Transformation,
};
