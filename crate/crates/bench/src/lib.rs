//! Benchmark-only crate; see `benches/ensembles.rs`.
