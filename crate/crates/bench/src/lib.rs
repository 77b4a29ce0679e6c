//! Criterion benchmarks for `qdiag-core`; see `benches/`.
