//! Weakly h-incomplete and weakly h-zero-sum-free subsets of finite abelian
//! groups.
//!
//! * [`group`]: groups in invariant-factor form, element codec, element sets.
//! * [`sumset`]: restricted and unrestricted h-fold sumsets.
//! * [`formulas`]: closed forms and bounds for `C_h(G)`, `Z_h(G)`, `c_h(G)`
//!   and the zero-sum / sum-avoiding classifications.
//! * [`constructions`]: explicit, re-verified witness sets.
//! * [`search`]: exhaustive computation of the same quantities, and the
//!   verification harness that compares everything against everything.
//!
//! ```
//! use sumsetlab::formulas::predicted_z;
//! use sumsetlab::search::exact_z;
//! use sumsetlab::{GroupSpec, SearchOptions};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let g: GroupSpec = "Z2^3".parse()?;
//! let predicted = predicted_z(&g, 4)?;
//! let found = exact_z(&g, 4, &SearchOptions::default())?;
//! assert_eq!(predicted.value(), Some(found.value));
//! assert_eq!(found.witness.to_vec(), vec![0, 1, 2, 4]);
//! # Ok(())
//! # }
//! ```

pub mod constructions;
pub mod formulas;
pub mod group;
pub mod search;
pub mod sumset;

pub use constructions::{ConstructionError, Property, WitnessReport};
pub use formulas::{Clause, FormulaError, PredictedValue};
pub use group::{enumerate_groups_of_order, ElementSet, GroupElement, GroupError, GroupSpec};
pub use search::{ExactResult, SearchError, SearchOptions, SearchStatus};
pub use sumset::{restricted_sumset, unrestricted_sumset, SumsetError};
