//! Criterion benchmarks of the radial and planar solvers; see `benches/`.
