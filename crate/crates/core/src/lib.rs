//! Multi-part intersecting families.
//!
//! The ground set is a disjoint union of parts `[n_1], ..., [n_p]`; a layer
//! member takes exactly `k_s` elements from part `s`. This crate provides
//! exact size formulas for the extremal constructions, the constructions
//! themselves, the shifting machinery used to normalize families, and exact
//! clique search on small instances.

mod bits;
pub mod constructions;
pub mod error;
pub mod family;
pub mod formulas;
pub mod json;
pub mod layer;
pub mod search;
pub mod shifting;

pub use constructions::{Constructed, LVector, LazyFamily, Rule, TSPair};
pub use error::{Error, Result};
pub use family::{CommonElements, Element, Family, FamilyClass, MultiPartSet, PartStructure, PartialSet};
pub use formulas::{BigCount, MaxValue, Rational};
pub use json::{FamilyDoc, PartDoc};
pub use layer::{count_supersets, enumerate_layer, enumerate_layer_capped, LayerIter, DEFAULT_LAYER_CAP};
pub use search::{max_family, max_family_with, oracle_max, Engine, IntersectionGraph, Mode, SearchConfig, SearchResult, SearchStatus};
pub use shifting::{QReport, ShiftIndex};
