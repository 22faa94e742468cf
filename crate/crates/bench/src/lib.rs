//! Criterion benchmarks for the free-field engine; see `benches/engine.rs`.
