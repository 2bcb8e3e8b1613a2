//! Criterion benchmarks for `nevlab-core`; see `benches/`.
