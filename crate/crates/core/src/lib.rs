//! Counting Hurwitz components of moduli spaces of surfaces isogenous to a
//! product of curves (unmixed case).
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: finite groups (abelian products, symmetric and alternating
//!   groups, Cayley tables), automorphism groups and conjugacy data.
//! * [`ramification`]: signature types, systems of generators, the Σ-set
//!   disjointness test, Riemann–Hurwitz genera and surface invariants.
//! * [`moves`]: the mapping class group action (braid half-twists, Dehn
//!   twists and ξ-twists) on systems of generators.
//! * [`orbits`]: side orbits, the component count `h(G; τ₁, τ₂)` and the
//!   per-invariant census.
//! * [`abelian`]: closed forms for abelian groups, used as cross-checks.
//! * [`verify`]: the cross-module property suites.

pub mod abelian;
mod arith;
mod bitset;
mod error;
pub mod group;
pub mod moves;
pub mod orbits;
pub mod ramification;
pub mod verify;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use group::{parse_group_spec, Automorphism, AutomorphismGroup, Group, GroupElement, GroupSpec};
pub use moves::{apply_move, apply_word, available_moves, MoveId, MoveKind};
pub use orbits::{count_components, count_components_one_stage, scan_invariants, side_orbits, verify_inn_lemma, EquivalenceConfig, OrbitReport};
pub use ramification::{
    curve_genus, enumerate_systems, is_beauville, is_disjoint, sigma_set, surface_invariants,
    validate_pair, GeneratorSystem, RamificationPair, SignatureType, SurfaceInvariants,
};

/// Exact rationals used for genera, areas and invariants.
pub type Rational = num_rational::Ratio<i128>;

/// Bumped whenever a change could alter any computed report.
pub const ENGINE_VERSION: &str = concat!("hurwitz-", env!("CARGO_PKG_VERSION"), "+moves-r1");
