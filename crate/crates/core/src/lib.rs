//! Deformation spaces of graphs of finite groups.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bass_serre;
pub mod corpus;
pub mod dsl;
pub mod fingroup;
pub mod gog;
pub mod moves;
pub mod rigidity;
pub mod treegeom;
