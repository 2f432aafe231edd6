//! Brute-force verification inside explicit unitary groups.

pub mod extract;
pub mod group;
pub mod linalg;
pub mod matrix;
pub mod realize;
pub mod reconcile;
pub mod representatives;
pub mod reversing;
