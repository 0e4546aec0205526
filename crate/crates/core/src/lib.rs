//! Generalized vector groupoids over prime fields.
//!
//! A vector groupoid is an Ehresmann groupoid `(V, alpha, beta, ., eps, i, V0)`
//! whose total space and base are vector spaces over GF(p) and whose
//! structure maps are linear. This crate represents such groupoids with
//! matrix structure maps, builds the standard examples (null, single-unit,
//! pair, and the groupoid induced by a linear map into the base), and checks
//! every groupoid law by exhaustive enumeration, reporting replayable
//! counterexamples.

pub mod checks;
pub mod constructions;
pub mod error;
pub mod groupoid;
pub mod linalg;
pub mod morphisms;
pub mod report;
pub mod space;

pub use checks::{
    check_all, check_derived_rules, check_ehresmann, check_subspaces, check_vector_axioms,
    SuiteSelection,
};
pub use constructions::{
    anchor_morphism, canonical_projection, induced_groupoid, induced_groupoid_with_basis,
    null_groupoid, pair_groupoid, single_unit_groupoid, InducedGroupoid, InducedRule,
};
pub use error::{Error, Result};
pub use groupoid::{
    isotropy_conjugation, isotropy_group, GroupIsomorphism, GroupoidOps, IsotropyGroup,
    Multiplication, StructureMap, Tabulated, VectorGroupoid,
};
pub use linalg::{FieldSpec, Matrix, Scalar};
pub use morphisms::{
    check_morphism, is_transitive, universal_factorization, Factorization, GroupoidMorphism,
    Transitivity,
};
pub use report::{CheckReport, CheckResult, Status, Witness};
pub use space::{ElementIndex, Limits, SpaceRef};
