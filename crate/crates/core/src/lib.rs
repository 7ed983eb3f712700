//! Decomposition numbers of modular perverse sheaves on simple surface
//! singularities and minimal nilpotent orbit closures.
//!
//! * [`intmat`]: Smith normal form, cokernels, induced endomorphisms.
//! * [`rootsys`]: Cartan matrices, roots, fundamental groups, foldings.
//! * [`omodule`]: graded modules over a discrete valuation ring and their
//!   truncations and reductions.
//! * [`modrep`]: modular representations of `1`, `Z/2` and `S3`.
//! * [`perverse`]: stalks of perverse extensions on two-stratum cones and the
//!   resulting decomposition numbers.

pub mod intmat;
pub mod modrep;
pub mod omodule;
pub mod perverse;
pub mod rootsys;

pub use intmat::{FinAbGroup, IntMatrix};
pub use modrep::{IrreducibleLabel, SmallGroup};
pub use perverse::{ConeData, DecompositionReport, ExtensionFlavor};
pub use rootsys::{DynkinDiagram, Series};
