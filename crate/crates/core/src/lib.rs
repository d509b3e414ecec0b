//! Exact screening of triangle angle triples for tilings of regular polygons.

pub mod angles;
pub mod condition_e;
pub mod condition_k;
pub mod error;
pub mod exactmath;
pub mod families;
pub mod lemmas;

pub use angles::{delta_of, enumerate_solutions, make_triple, AngleTriple, EquationSolution, NGon, Target};
pub use condition_e::{
    check_e, check_e_with, verify_refutation, verify_witness, Counted, EOptions, EReport, ERefutation,
    EWitness,
};
pub use condition_k::{admissible_residues, check_k, KCounterexample, KEquation, KReport, KVerdict};
pub use error::{Error, Result};
pub use exactmath::Rational;
pub use families::{
    case1_candidates, case2_candidates, classify, screen_form, search_case2, CaseParams, Classification,
    Family, VertexForm,
};
pub use lemmas::{
    lemma_l1_part_i, lemma_l1_part_ii, lemma_l2_count, lemma_l7, lemma_l11_property_check, L7Outcome,
};

/// Version string recorded in reports.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
