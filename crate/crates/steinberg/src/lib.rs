//! Generators-and-relations machinery for Steinberg groups over
//! commutative rings, together with the Weyl-group and Lie-algebra
//! computations needed to verify the relators in faithful matrix
//! representations.

pub mod cartan;
pub mod chevlie;
pub mod cli;
pub mod fpgroup;
pub mod present;
pub mod ring;
pub mod verify;
pub mod weyl;
