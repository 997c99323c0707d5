//! Obstructions to extending pivotal structures across group-graded extensions
//! of pointed fusion categories `Vec_C ⊂ Vec_D`, together with the supporting
//! finite group cohomology and the pointed Brauer–Picard stabilizer computations.

pub mod abelian;
pub mod catalog;
pub mod cohomology;
pub mod gmodule;
pub mod group;
pub mod guards;
pub mod modlin;
pub mod picard;
pub mod pivotal;
pub mod qz;
pub mod smith;
pub mod ty;

pub use abelian::AbelianGroup;
pub use cohomology::{Cochain, CohomologyClass, CohomologyError, TorsionUnits};
pub use gmodule::{Character, GModule};
pub use group::{FiniteGroup, QuotientData, StandardSpec, Subgroup};
pub use guards::{GuardError, Guards};
pub use qz::QZ;
