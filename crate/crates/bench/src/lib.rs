//! Criterion benchmarks for the bvlab solvers; see `benches/solvers.rs`.
