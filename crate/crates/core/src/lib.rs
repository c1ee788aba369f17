//! Exact-arithmetic toolkit for conifold-transition presentations.
//!
//! The crate is organized around the relation matrices (A, B) of a
//! transition: integer lattice algebra underneath, the extremal quantum-
//! product side and the period/monodromy side on top, and a gluing layer
//! that certifies both against one trivial logarithmic connection. All
//! coefficients are exact rationals, optionally extended by the formal
//! constants λ = 1/(2π√−1) and z⁻¹.

pub mod error;
pub mod gluing;
pub mod logseries;
pub mod matrix;
pub mod periods;
pub mod quantum;
pub mod scalar;
pub mod series;
pub mod transition;

pub use error::Error;
pub use gluing::{
    glue_check, induce_via_embedding, trivial_log_connection, GlueReport,
    LogConnection,
};
pub use logseries::LogSeries;
pub use matrix::{
    column_hermite_form, columns_in_span, inverse_unimodular, kernel_basis,
    quotient_structure, rank, smith_normal_form, solve_integer, IntMatrix,
    QuotientStructure, SmithDecomposition,
};
pub use quantum::{
    dubrovin_connection, dubrovin_residue, f_series, monodromy_block,
    multiple_cover_series, residue_oracle, restrict_prepotential,
    structural_coefficient, transform_prepotential, Direction, DubrovinConnection,
    ExtremalModel, FrameElement, FrameVector, GwEntry, MixedConstants,
    NovikovLattice, TransformResult, TransportedEntry,
};
pub use periods::{
    bryant_griffiths_connection, build_symplectic_basis, gm_apply,
    gm_topological_connection, monodromy_pairing, omega_expansion, picard_lefschetz,
    pl_nilpotent, pl_operator, pl_single, prepotential_from_periods, standard_form,
    yukawa_from_periods, yukawa_principal, BgConnection, FlatnessReport,
    LaurentPoly, OmegaExpansion, OmegaJets, Prepotential, SphereSystem,
    SymplecticLattice,
};
pub use scalar::{Scalar, ScalarMatrix};
pub use series::{Laurent1, TruncatedSeries};
pub use transition::{
    complete_from_a, complete_from_b, euler_check, random_presentation, Check,
    EulerReport, HodgeData, TransitionPresentation, Triple3, ValidationReport,
};
