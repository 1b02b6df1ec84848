//! Constructions and structural certificates for strongly nonlocal sets of
//! orthogonal multipartite entangled states.
//!
//! The crate is organized bottom-up:
//!
//! - [`tensor`]: dense multipartite state vectors, regrouping across a
//!   bipartition, Schmidt data and reduced supports.
//! - [`constructions`]: generators for the GHZ-subset and maximally entangled
//!   families.
//! - [`partition`]: bipartition enumeration and effective `d'⊗d'` frames
//!   shared by a sub-family of states.
//! - [`certifier`]: embedded maximally-entangled witnesses per bipartition,
//!   orthogonality-preserving measurement analysis, and the overall report.
//!
//! Every numerical decision is taken against a [`Tolerances`] value so that
//! callers can rescale all thresholds uniformly.

pub mod bipartition;
pub mod certifier;
pub mod constructions;
pub mod error;
pub mod partition;
pub mod tensor;
pub mod tolerance;

pub use bipartition::{Bipartition, Side};
pub use certifier::{
    certify, certify_with, find_eliminator, find_mes_witness, opm_solution_space, validate_witness,
    CandidateSummary, CertificationReport, CertifyOptions, CutDiagnostics, CutEntry, Eliminator,
    HermitianOp, MesWitness, OpmReport, OverallVerdict, Verdict, WitnessSource,
};
pub use constructions::{
    ghz_subset_3qubit, ghz_subset_nqubit, mes_set_3x3x3, mes_set_kpartite, mes_set_tripartite,
    PhaseRoot, SetParams, StateSet,
};
pub use error::{Error, Result};
pub use partition::{effective_frame, enumerate_bipartitions, is_mes_in_frame, restrict, EffectiveFrame};
pub use tensor::{
    gram, inner_product, reduced_support, regroup, schmidt, superpose, unregroup, SchmidtData,
    StateVector, Subspace, Term,
};
pub use tolerance::Tolerances;

/// Complex scalar used throughout: a pair of binary64 values.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
