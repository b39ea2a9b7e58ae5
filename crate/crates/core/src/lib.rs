//! Laboratory for r-neighbour bootstrap percolation on finite lattices with
//! uniform, thickened and slab threshold rules: exact closure dynamics,
//! structural certificates (spanning windows, blockers, gap and crossing
//! events), the sharp-threshold integrals, and reproducible Monte Carlo
//! estimators.

pub mod cellset;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod mc;
pub mod special;
pub mod structure;

pub use cellset::{parse_cells, write_cells, CellSet};
pub use dynamics::{
    bounding_rect, closure, closure_in, components, coupled_block_closure, crossed, diam,
    internally_spanned, percolates, span, BoundaryCondition, ClosureResult, SpanDecomposition,
};
pub use error::{Error, Result};
pub use lattice::{Cell, LatticeKind, LatticeSpec, Rect};
pub use mc::{
    crossing_prob, diam_event_prob, gamma_expectation, pc_estimate, percolation_prob, sample_set,
    stream_seed, PcEstimate, TrialReport,
};
pub use special::{
    beta, g, highdim_series, lambda, lambda_highdim, lambda_table, q_of_p, u_param, u_scaled,
    w_min, w_min_refined, w_path, PathPoly, QuadResult,
};
pub use structure::{
    al_window, chain_crossed, detercross_check, edge_blocked, gamma_set, has_double_gap,
    is_admissible, is_blocker, lgap_probability_exact, lgap_probability_rational,
    small_component, BlockerSign, ColouredGraph, CrossCase, GraphChain,
};
