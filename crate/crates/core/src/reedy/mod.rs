//! Finite Reedy categories, diagrams over them, matching objects and latching families.

pub mod category;
pub mod diagram;
pub mod matching;

pub use category::{
    shapes, validate_reedy, CategorySpec, GeneratorSpec, Morphism, MorphismClass, ObjectSpec, ReedyCategory,
    ReedyViolation,
};
pub use diagram::{Diagram, DiagramMap, PartialFunctor};
pub use matching::{induced_matching_map, latching_family_of, matching_data, LatchingFamily, MatchingData};
