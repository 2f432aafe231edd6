pub mod classdata;
pub mod classify;
pub mod enumerate;
pub mod error;
pub mod field_tower;
pub mod oracle;
pub mod upoly;

pub use error::{Error, Result};
pub use field_tower::{Elem, FieldCtx, FieldElem, Fq2, PrimePower};
pub use upoly::{count_self_conjugate, Poly, UIrreducible, UnitaryCtx};
