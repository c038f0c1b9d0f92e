//! Rauzy-type graphs of infinite binary words.
//!
//! The crate builds de Bruijn, Rauzy, half-range Rauzy and ℓ-Rauzy graphs
//! from finite prefixes of infinite words, and carries the closed-form
//! machinery for the Fibonacci word: factor locations as Beatty-type
//! position sets, the arc map for orders `F_{n+1} − 1`, and explicit
//! reachability witnesses along the walk from the first vertex.

pub mod analysis;
pub mod error;
pub mod export;
pub mod fib;
pub mod graph;
pub mod verify;
pub mod word;

pub use analysis::{
    closed_form_arcs, complement_iso_check, degrees, isomorphic, psi_bijection_check,
    strongly_connected, DegreeReport, IsoMapping, PsiReport, SccDecomposition,
};
pub use error::{Error, Result};
pub use fib::{
    bracket, first_occurrence, location_form, locations, reach_witness, zeckendorf, LocationForm,
    Witness, WitnessSearch,
};
pub use graph::{build_debruijn, build_hrr, build_l_rauzy, build_rauzy, Arc, DirectedGraph, GraphKind, HrrVariant};
pub use word::{factors, occurrences, FactorSet, OccurrenceList, Source, Symbol, Word, WordPrefix};
