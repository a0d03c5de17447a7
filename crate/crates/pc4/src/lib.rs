//! Constructive classification of four-dimensional power-commutative real
//! division algebras.
//!
//! Every such algebra is an isotope `B_T` of a quadratic division algebra
//! `B` by a planar map `T`, and is named up to isomorphism by a K-tuple
//! `(x, y, z, d, λ)` taken modulo the isotropy group of `δ_d` in SO(3).
//! The crate provides:
//!
//! * a structure-constant engine for finite-dimensional real algebras
//!   ([`algebra`]);
//! * the two independent constructions of the algebra of a K-tuple and the
//!   underlying dissident data ([`construct`]);
//! * sampled identity and division checks ([`checks`]);
//! * idempotent analysis, both closed-form per plane and by a global Newton
//!   census ([`idempotent`], [`newton`]);
//! * canonical forms, isomorphism testing and automorphism groups
//!   ([`classify`]).
//!
//! Heavy sampling loops run on rayon when the default `parallel` feature is
//! enabled and fall back to sequential iteration otherwise; results are
//! identical either way.

pub mod algebra;
pub mod checks;
pub mod classify;
pub mod construct;
pub mod error;
pub mod idempotent;
pub mod newton;
pub mod sampling;

pub use algebra::{basis_vector, AlgebraTable, Centralizer, Element, SubspaceBasis};
pub use checks::{CheckReport, DivisionReport, ExceptionalReport};
pub use classify::{
    aut_classification, are_isomorphic, canonicalize, classify_algebra, in_cross_section,
    isotropy_contains, isotropy_sample, stratum, AutType, CanonicalForm, Classification,
    GroupDescriptor, Stratum, StratumTag,
};
pub use construct::{
    check_dissident, exact_planar_params, quaternion_table, DissidentParams, DissidentReport,
    KTuple, PlanarMapParams,
};
pub use error::{Error, Result};
pub use idempotent::{
    global_idempotent_census, has_unique_idempotent, plane_equation_residual, sigma_sup,
    solve_plane_idempotents, CensusReport, Multiplicity, PlaneIdempotentResult, UniquenessBranch,
    UniquenessVerdict,
};
pub use newton::IdempotentCensus;
