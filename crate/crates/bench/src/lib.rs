//! Benchmarks for beltrami-core live in `benches/`; run them with
//! `cargo bench -p beltrami-bench`.
