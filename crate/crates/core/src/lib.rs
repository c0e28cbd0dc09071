//! Unramified abelian covers of genus-2 curves over small finite fields.
//!
//! For a genus-2 function field `F` over `F_q`, a rational place `O` and a
//! subgroup `G` of the degree-zero class group `Cl(F)` of index `d`, class
//! field theory gives an unramified abelian extension of degree `d`, genus
//! `d + 1`, in which exactly the rational places `P` with `[P - O]` in `G`
//! split completely. This crate enumerates curves, computes `Cl(F)` with
//! Cantor arithmetic, lists subgroups and reports the resulting
//! `(d, genus, N)` triples as checkable witnesses.

pub mod abgroup;
pub mod curve;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod intmat;
pub mod jacobian;
pub mod poly;
pub mod reproduce;
pub mod search;

pub use abgroup::{all_subgroups, subgroup_generated, AbelianStructure, Subgroup};
pub use curve::{CurveModel, InfinityType, Place, PlaceKind};
pub use enumerate::{enumerate_curves, fingerprint, CurveFamilySpec, FamilyMode, Fingerprint};
pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use jacobian::{enumerate_class_group, normalize_model, ClassGroup, Jacobian, MumfordClass};
pub use poly::Poly;
pub use search::{
    covers_for_curve, genus_of_cover, images, run_search, verify_witness, witness_from_places,
    BoundsTable, Classification, CoverOptions, CoverWitness, PlaceImageSet, RecordLedger,
    SearchOptions, VerifyReport,
};
