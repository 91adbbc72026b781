//! Exact finite-field machinery for cuspidal Deligne–Lusztig
//! representations of `GL_2`-type groups that are distinguished by an
//! involution: field towers, twisted root data, explicit matrix groups with
//! their involutions, certified cuspidal characters, and a verifier that
//! computes both sides of the orbit-sum multiplicity formula by exhaustive
//! enumeration.

#![allow(clippy::needless_range_loop)]

pub mod dlchar;
pub mod gf;
pub mod groups;
pub mod multiplicity;
pub mod par;
pub mod rootdata;
pub mod sign;
pub mod suites;

pub use par::Exec;
pub use sign::Sign;
