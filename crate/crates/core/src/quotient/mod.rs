//! Finitely presented (Z/nZ)-graded Lie algebras, truncated at a cutoff.
//!
//! A presentation is the free Lie algebra on graded generators modulo the
//! ideal generated by homogeneous relator families and by all monomials of
//! length above the cutoff. Every relator is fine-degree homogeneous, so the
//! ideal splits over fine degrees and each component is computed on its
//! own:
//!
//! `I_K = sum_g [I_{K-g}, g] + (relator instances of fine degree exactly K)`
//!
//! Relator slots range over quotient monomials, which span every component
//! modulo the ideal; multilinearity makes that enough. The cutoff never
//! enters a component computation, so membership of an element of length
//! `l` is the same for every cutoff `>= l`.

mod engine;
mod ideal;
mod presentation;

pub use engine::{Budget, EngineStats, Quotient, QuotientComponent};
pub use ideal::{
    vacuity_threshold, Ambient, CentralizerCensus, DerivedLength, IdealSnapshot, SnapshotReport,
};
pub use presentation::{
    GradedPresentation, PresentationSpec, RelatorFamily, RelatorFamilySpec, DEFAULT_CUTOFF,
};
