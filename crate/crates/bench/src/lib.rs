//! Benchmark-only crate; see `benches/kaczmarz.rs` for the measurements.
