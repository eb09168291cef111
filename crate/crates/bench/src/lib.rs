//! Criterion benchmarks for `sphdpp`; see `benches/`.
