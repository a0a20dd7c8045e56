//! Criterion benchmarks for the plane, spectrum and exhaustive-search kernels; see `benches/`.
