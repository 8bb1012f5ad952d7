//! Exact cyclotomic arithmetic and Kauffman-bracket quantum invariants.
pub mod cyclo;
pub mod error;
pub mod fkb;
pub mod ideal;
pub mod invariant;
pub mod lattice;
pub mod linalg;
pub mod presentation;
pub mod skein;
pub mod verify;

pub use cyclo::{make_root, CycloElt, GaloisMap};
pub use error::{Error, Result};
pub use ideal::IntegralIdeal;
pub use invariant::{closed_invariant, colored_bracket, torus_pairing, ClosedInvariantResult};
pub use presentation::{Role, SurgeryPresentation};
pub use skein::{theory, SkeinVector, TheoryKind, TheoryParams};
