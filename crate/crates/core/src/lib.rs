//! Computational toolkit for the polynomial p-groups `S_n(q)` and `S_Lambda(q)`
//! and the fusion systems built on them.

pub mod field;
pub mod linalg;
pub mod poly;
pub mod parabolic;
pub mod sgroup;
pub mod codec;
pub mod report;
pub mod structure;
pub mod fusion;
pub mod verify;
