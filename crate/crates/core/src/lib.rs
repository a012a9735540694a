//! Relations between finite sets and their algebraic duals: complete atomic
//! Boolean algebras, liftings, Kripke frames with modal operators, a
//! judgment calculus over relations, and a textual workspace format.

pub mod buffer;
pub mod carrier;
pub mod config;
pub mod dsl;
pub mod duality;
pub mod lattice;
pub mod logic;
pub mod modal;
pub mod relations;
pub mod sample;
pub mod suite;

pub use carrier::{Carrier, CarrierError, Subset};
pub use config::{EnumConfig, EnumerationTooLarge};
pub use lattice::{Caba, CabaElement, FiniteFunction, LatticeError};
pub use logic::{Derivation, Formula, Judgment, LogicError, Models, RelExpr, Theory};
pub use modal::{Frame, ModalError};
pub use relations::{CabaRel, FinRel, RelError};
