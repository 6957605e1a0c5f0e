//! Benchmarks for `blochcover` live in `benches/`.
