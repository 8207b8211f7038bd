//! Cellular free-module models of bordism groups.
//!
//! A space is a free module over the coefficient ring on a finite set of
//! cells. Each cell is an operator word in a few primitive first Chern class
//! operators applied to the fundamental class, which is what makes
//! intersection products computable as operator composition. Supported
//! spaces are projective spaces, products of supported spaces, and
//! projective bundles of split vector bundles.

pub mod axioms;
pub mod class;
pub mod maps;
pub mod matrix;
pub mod space;
pub mod theory;

pub use axioms::{standard_suite, AxiomInstance};
pub use class::{hypersurface_class, projective_space_classes, pushforward_to_point, BordismClass};
pub use maps::Morphism;
pub use matrix::{eval_series, RingMatrix};
pub use space::{Cell, CellSpace, LineBundle, Primitive, SpaceRecipe, SplitBundle};
pub use theory::OrientedTheory;
