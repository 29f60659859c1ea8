//! Criterion benchmarks for fibra-core; see `benches/`.
