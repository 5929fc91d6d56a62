//! Benchmark harness for the `hgls` pipeline; the benchmarks live in `benches/`.
