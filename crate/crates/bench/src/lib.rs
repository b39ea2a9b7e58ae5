//! Shared instance builders for the benchmark suite.

use bootlab_core::{sample_set, stream_seed, CellSet, LatticeSpec};

/// A square two-neighbour lattice seeded at density `p`, reproducible by `trial`.
pub fn seeded_square(n: u32, p: f64, trial: u64) -> (LatticeSpec, CellSet) {
    let spec = LatticeSpec::uniform(2, n, 2).expect("valid square spec");
    let stream = stream_seed(0x5eed, trial);
    let set = sample_set(&spec, p, stream).expect("valid density");
    (spec, set)
}
