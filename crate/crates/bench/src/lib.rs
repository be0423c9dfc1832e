//! Criterion benchmarks for `pbsi-core`; see `benches/`.
