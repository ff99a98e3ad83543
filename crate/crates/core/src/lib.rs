//! Schur multipliers of finite p-groups and of pairs `(G, N)` with a
//! complement, plus the machinery to check classification statements about
//! them over an explicit catalog of small groups.

pub mod abelian;
pub mod catalog;
pub mod group;
pub mod homology;
pub mod linear;
pub mod pair;
