//! Deterministic structural certificates behind the sharp-threshold
//! machinery: spanning windows at a prescribed scale, small internally
//! filled components, double gaps, slab edge blockers with the crossing
//! trichotomy, exact L-gap probabilities, Γ-neighbourhoods, and the
//! two-coloured graph chains used for component counting.

pub mod chain;
pub mod lgap;
pub mod slab;
pub mod windows;

pub use chain::{chain_crossed, is_admissible, ColouredGraph, GraphChain, Vertex};
pub use lgap::{lgap_probability_exact, lgap_probability_rational};
pub use slab::{detercross_check, edge_blocked, is_blocker, BlockerSign, CrossCase, SlabIndex};
pub use windows::{al_window, gamma_set, has_double_gap, small_component};
