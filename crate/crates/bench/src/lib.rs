//! Criterion benchmarks for `qae-core`; see `benches/`.
