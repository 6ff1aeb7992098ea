//! Shared fixtures for the criterion benchmarks: a fixed seed and a small
//! size ladder that keeps `cargo bench` runs in the tens of seconds. The
//! full ladder up to 200 000 elements lives in the engine's acceptance
//! tests, where hard wall-clock bounds are enforced.

use pn2sc_core::generator::{generate, GeneratorSpec};
use pn2sc_core::net::PetriNet;

/// Seed used for every benchmark net, so runs are comparable over time.
pub const BENCH_SEED: u64 = 3;

/// Element-count targets benchmarked by default.
pub const SIZES: [usize; 4] = [200, 1_000, 5_000, 20_000];

/// Builds the benchmark net for one ladder rung.
pub fn prepared_net(size: usize) -> PetriNet {
    generate(&GeneratorSpec::new(size, BENCH_SEED)).expect("ladder sizes are valid")
}
