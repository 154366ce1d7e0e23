//! Exact lattice combinatorics for level-k Verlinde rings of simply connected
//! simple Lie groups: root data, the rho-shifted affine Weyl action and alcove
//! folding, formal characters, the twisted lattice group `T x Pi^bas` with its
//! level-l group algebra blocks, and the generator-level inverse of the
//! Freed-Hopkins-Teleman map.

pub mod affine_weyl;
pub mod characters;
pub mod error;
pub mod fht_map;
pub mod lattice;
pub mod lattice_cocycle;
pub mod rootsystem;
pub mod twisted_group_algebra;
pub mod verify;
pub mod verlinde;

pub use error::{Error, Result};
pub use rootsystem::{CorootElem, LieType, RootSystem, Series, Weight};
