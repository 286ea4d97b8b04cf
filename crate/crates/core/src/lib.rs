//! GKM graphs of regular semisimple Hessenberg varieties.
//!
//! Builds the graph `Γ_h` of `Hess(S, h)`, enumerates its automorphisms, computes
//! equivariant and ordinary graph cohomology in exact rational arithmetic, and
//! checks the permutation-matrix obstruction for unipotent subgroups.

pub mod automorphism;
pub mod cohomology;
pub mod error;
pub mod gkm;
pub mod hessenberg;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod rational;
pub mod unipotent;
pub mod verify;

pub use automorphism::{act_on_map, aut_star, dot_action, enumerate_aut, phi_sigma, phi_zero, GkmAutomorphism};
pub use cohomology::{action_matrix, betti_numbers, equivariant_basis, x_classes, EquivariantClass, GraphCohomology, Lattice};
pub use error::{GkmError, Result};
pub use gkm::{Axiom, GkmGraph, ValidationReport};
pub use hessenberg::{build_gkm_graph, build_gkm_graph_with_limit, HessenbergFunction};
pub use perm::Perm;
pub use poly::{LatticeMap, LinearForm, Polynomial};
pub use rational::Rational;
