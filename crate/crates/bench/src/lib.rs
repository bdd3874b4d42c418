//! Shared inputs for the benchmarks.

use pdiv_core::RateSample;

/// Deterministic rate triples spread over `[−3, 3]³` without an RNG dependency.
pub fn rate_grid(n: usize) -> Vec<RateSample> {
    let side = (n as f64).cbrt().ceil().max(2.0) as usize;
    let at = |k: usize| -3.0 + 6.0 * k as f64 / (side - 1) as f64;
    (0..n)
        .map(|i| {
            let (a, b, c) = (i % side, (i / side) % side, (i / (side * side)) % side);
            RateSample::new(0.0, at(a), at(b), at(c), 0.0)
        })
        .collect()
}
